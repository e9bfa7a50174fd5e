"""Login, logout, portal redirect, admin overview, photo serving."""

from __future__ import annotations

from .. import auth, leave, photos, scheduling
from ..errors import InvalidCredentials
from .rendering import RequestContext, ViewResult, render_template


def login_page(ctx: RequestContext) -> ViewResult:
    return ViewResult(context={"error": None, "username": ""})


def frag_login(ctx: RequestContext, result: ViewResult) -> str:
    return render_template("frag_login_form.html", result.context)


def page_login(ctx: RequestContext, result: ViewResult, frag: str) -> str:
    return render_template("page_login.html", {"form": frag})


def login_submit(ctx: RequestContext) -> ViewResult:
    username = ctx.form.get("username", "")
    password = ctx.form.get("password", "")
    try:
        session = auth.authenticate(ctx.db, ctx.cfg, username, password)
    except InvalidCredentials:
        return ViewResult(
            context={"error": "Invalid username or password.", "username": username},
            status=401,
        )
    return ViewResult(
        redirect=auth.portal_route(session["role"]),
        context={"error": None, "username": username},
        cookies_set=[
            (ctx.cfg.session_cookie, session["token"], ctx.cfg.session_ttl_hours * 3600)
        ],
    )


def logout(ctx: RequestContext) -> ViewResult:
    token = ctx.user["session_token"] if ctx.user is not None else None
    if token:
        auth.invalidate_session(ctx.db, token)
    return ViewResult(redirect="/login", cookies_clear=[ctx.cfg.session_cookie])


def portal(ctx: RequestContext) -> ViewResult:
    return ViewResult(redirect=auth.portal_route(ctx.user["role"]))


def admin_dashboard(ctx: RequestContext) -> ViewResult:
    date = ctx.cfg.today()
    counts = ctx.db.query_one(
        "SELECT"
        " (SELECT count(*) FROM users WHERE active=1) AS staff,"
        " (SELECT count(*) FROM daily_records WHERE date=?) AS records_today,"
        " (SELECT count(*) FROM leave_requests WHERE state='pending_admin') AS pending_admin,"
        " (SELECT count(*) FROM purchase_requests WHERE status='open') AS open_purchases,"
        " (SELECT count(*) FROM photo_assets) AS photos",
        (date,),
    )
    return ViewResult(context={"date": date, "counts": counts})


def frag_admin(ctx: RequestContext, result: ViewResult) -> str:
    from .views_housekeeping import region_leave_queue

    return render_template(
        "frag_admin_overview.html",
        {
            "date": result.context["date"],
            "counts": result.context["counts"],
            "leave_queue": region_leave_queue(ctx),
            "areas": scheduling.area_status_summary(ctx.db, result.context["date"]),
            "user": ctx.user,
        },
    )


def page_admin(ctx: RequestContext, result: ViewResult, frag: str) -> str:
    from .views_housekeeping import wrap_base

    return wrap_base(ctx, "Admin dashboard", "admin", frag)


def photo_serve(ctx: RequestContext) -> ViewResult:
    body, content_type = photos.serve_photo(
        ctx.db, ctx.cfg, ctx.path_params["asset_id"], ctx.path_params["variant"]
    )
    return ViewResult(media=(body, content_type))
