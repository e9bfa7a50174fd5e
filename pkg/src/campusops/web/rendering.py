"""Render-mode negotiation and template plumbing.

Three render modes exist: full_page, fragment, json. Paths under /api/ are
always json; otherwise the hypermedia marker header (HX-Request, with a
?fragment=1 fallback for the measurement harness) selects fragment, and its
absence selects full_page. Full pages are assembled by embedding the
endpoint's rendered fragment verbatim, so fragment markup is a strict region
of the corresponding page by construction.
"""

from __future__ import annotations

import sqlite3
from dataclasses import dataclass, field

from jinja2 import Environment, FileSystemLoader, select_autoescape

from ..config import TEMPLATES_DIR, Config
from ..db import Database

MODES = ("full_page", "fragment", "json")

FRAGMENT_MARKER_HEADER = "hx-request"
FRAGMENT_MARKER_PARAM = "fragment"


def negotiate_mode(path: str, headers, query_params) -> str:
    if path.startswith("/api/"):
        return "json"
    if headers.get(FRAGMENT_MARKER_HEADER) == "true":
        return "fragment"
    if query_params.get(FRAGMENT_MARKER_PARAM) == "1":
        return "fragment"
    return "full_page"


_env: Environment | None = None


def _shift_date(value: str, days: int) -> str:
    from datetime import date, timedelta

    return (date.fromisoformat(value) + timedelta(days=days)).isoformat()


def template_env() -> Environment:
    global _env
    if _env is None:
        _env = Environment(
            loader=FileSystemLoader(str(TEMPLATES_DIR)),
            autoescape=select_autoescape(("html",)),
            trim_blocks=True,
            lstrip_blocks=True,
        )
        _env.filters["prev_date"] = lambda d: _shift_date(d, -1)
        _env.filters["next_date"] = lambda d: _shift_date(d, 1)
    return _env


def render_template(name: str, context: dict) -> str:
    return template_env().get_template(name).render(**context)


@dataclass
class RequestContext:
    db: Database
    cfg: Config
    user: sqlite3.Row | None
    mode: str
    query: dict
    form: dict
    path_params: dict


@dataclass
class ViewResult:
    """What a handler produced; the wrapper turns it into a response per mode."""

    template: str | None = None
    context: dict = field(default_factory=dict)
    json_body: object | None = None
    page: str | None = None
    redirect: str | None = None
    status: int = 200
    media: tuple[bytes, str] | None = None
    cookies_set: list[tuple[str, str, int]] = field(default_factory=list)
    cookies_clear: list[str] = field(default_factory=list)
