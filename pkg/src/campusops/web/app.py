"""Starlette app factory.

Every registered endpoint goes through one wrapper: negotiate the render
mode, resolve the session, check the permission matrix, parse the form,
run the handler in the threadpool, then render the result for the mode.
No handler is reachable any other way.
"""

from __future__ import annotations

from starlette.applications import Starlette
from starlette.concurrency import run_in_threadpool
from starlette.datastructures import MutableHeaders, UploadFile
from starlette.requests import Request
from starlette.responses import HTMLResponse, JSONResponse, RedirectResponse, Response
from starlette.routing import Mount, Route
from starlette.staticfiles import StaticFiles

from .. import auth
from ..config import STATIC_DIR, Config
from ..db import Database, count_queries
from ..errors import DomainError, http_status
from .registry import ROUTES, RouteDef, endpoint_groups
from .rendering import RequestContext, ViewResult, negotiate_mode, render_template

LOGIN_PATH = "/login"


async def _read_form(request: Request) -> dict:
    content_type = request.headers.get("content-type", "")
    if not content_type.startswith(("application/x-www-form-urlencoded", "multipart/form-data")):
        return {}
    form = await request.form()
    parsed: dict = {}
    for key, value in form.multi_items():
        if isinstance(value, UploadFile):
            parsed[key] = await value.read()
        elif key in parsed:  # repeated fields collapse to space-joined values
            parsed[key] = f"{parsed[key]} {value}"
        else:
            parsed[key] = value
    return parsed


def _apply_cookies(response: Response, result: ViewResult, cfg: Config) -> Response:
    for name, value, max_age in result.cookies_set:
        response.set_cookie(name, value, max_age=max_age, httponly=True, samesite="lax")
    for name in result.cookies_clear:
        response.delete_cookie(name)
    return response


def _unauthenticated_response(mode: str) -> Response:
    if mode == "json":
        return JSONResponse({"error": "unauthenticated"}, status_code=401)
    return RedirectResponse(LOGIN_PATH, status_code=303)


def _deny_response(mode: str) -> Response:
    if mode == "json":
        return JSONResponse({"error": "deny"}, status_code=403)
    return HTMLResponse(
        render_template("frag_error.html", {"code": "deny", "message": "You do not have access to this."}),
        status_code=403,
    )


def _error_response(err: DomainError, mode: str) -> Response:
    status = http_status(err)
    if mode == "json":
        return JSONResponse({"error": err.code, "detail": err.message}, status_code=status)
    body = render_template("frag_error.html", {"code": err.code, "message": err.message})
    if mode == "full_page":
        body = render_template("page_error.html", {"content": body, "code": err.code})
    return HTMLResponse(body, status_code=status)


def _render(entry: RouteDef, ctx: RequestContext, result: ViewResult, cfg: Config) -> Response:
    if result.media is not None:
        body, content_type = result.media
        return Response(body, media_type=content_type, status_code=result.status)

    if ctx.mode == "json":
        if result.json_body is None:
            return JSONResponse({"error": "no-json-representation"}, status_code=406)
        return JSONResponse(result.json_body, status_code=result.status)

    if ctx.mode == "fragment":
        if result.redirect is not None and entry.fragment is None:
            return _apply_cookies(RedirectResponse(result.redirect, status_code=303), result, cfg)
        if entry.fragment is None:
            return JSONResponse({"error": "no-fragment-representation"}, status_code=406)
        html = entry.fragment(ctx, result)
        return _apply_cookies(HTMLResponse(html, status_code=result.status), result, cfg)

    # full_page
    if result.redirect is not None:
        return _apply_cookies(RedirectResponse(result.redirect, status_code=303), result, cfg)
    if entry.page is None:
        return JSONResponse({"error": "no-page-representation"}, status_code=406)
    fragment_html = entry.fragment(ctx, result) if entry.fragment is not None else ""
    html = entry.page(ctx, result, fragment_html)
    return _apply_cookies(HTMLResponse(html, status_code=result.status), result, cfg)


def make_endpoint(entry: RouteDef, db: Database, cfg: Config, matrix: auth.PermissionMatrix, groups: dict):
    async def endpoint(request: Request) -> Response:
        mode = negotiate_mode(request.url.path, request.headers, request.query_params)
        counting = count_queries() if cfg.query_count_header else None
        counter = counting.__enter__() if counting else None
        try:
            user = None
            if entry.group != "public":
                token = request.cookies.get(cfg.session_cookie)
                user = await run_in_threadpool(auth.session_user, db, cfg, token)
                if user is None:
                    return _unauthenticated_response(mode)
                if not auth.authorize(user["role"], entry.endpoint, matrix, groups):
                    return _deny_response(mode)

            form = await _read_form(request) if request.method == "POST" else {}
            ctx = RequestContext(
                db=db,
                cfg=cfg,
                user=user,
                mode=mode,
                query=dict(request.query_params),
                form=form,
                path_params=dict(request.path_params),
            )

            def run() -> Response:
                try:
                    result = entry.handler(ctx)
                except DomainError as err:
                    return _error_response(err, mode)
                return _render(entry, ctx, result, cfg)

            response = await run_in_threadpool(run)
            if counter is not None:
                response.headers["X-Query-Count"] = str(counter.count)
            return response
        finally:
            if counting:
                counting.__exit__(None, None, None)

    return endpoint


class CacheForever:
    """Far-future cache headers for the static mount."""

    def __init__(self, app):
        self.app = app

    async def __call__(self, scope, receive, send):
        async def send_cached(message):
            if message["type"] == "http.response.start":
                headers = MutableHeaders(scope=message)
                headers["Cache-Control"] = "public, max-age=31536000, immutable"
            await send(message)

        await self.app(scope, receive, send_cached)


def create_app(cfg: Config | None = None) -> Starlette:
    cfg = cfg or Config.from_env()
    db = Database(cfg.database_path, synchronous=cfg.sqlite_synchronous)
    db.init_schema()
    matrix = auth.PermissionMatrix.from_file(cfg.permissions_file)
    groups = endpoint_groups()

    routes = [
        Route(entry.path, make_endpoint(entry, db, cfg, matrix, groups), methods=list(entry.methods),
              name=entry.endpoint.replace(".", "_"))
        for entry in ROUTES
    ]
    routes.append(Mount("/static", app=CacheForever(StaticFiles(directory=str(STATIC_DIR))), name="static"))

    app = Starlette(routes=routes)
    app.state.cfg = cfg
    app.state.db = db
    app.state.matrix = matrix
    app.state.groups = groups
    return app
