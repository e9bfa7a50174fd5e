"""Inventory portal: catalog, issuance, purchase requests, area reports."""

from __future__ import annotations

from .. import inventory, leave
from ..errors import DomainError
from ..scheduling import parse_date
from .rendering import RequestContext, ViewResult, render_template

PAGE_SIZE = 10


def _int_form(ctx: RequestContext, key: str) -> int:
    raw = ctx.form.get(key, "")
    try:
        return int(raw)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"bad {key}: {raw!r}", code="validation-error") from exc


def _page_param(ctx: RequestContext) -> int:
    try:
        return max(1, int(ctx.query.get("page", "1")))
    except ValueError:
        return 1


def item_json(r) -> dict:
    return {
        "id": r["id"],
        "category": r["category"],
        "name": r["name"],
        "unit": r["unit"],
        "available_quantity": r["available_quantity"],
    }


def _areas(ctx: RequestContext):
    return ctx.db.query("SELECT code, display_name FROM area_types ORDER BY display_name")


def region_catalog(ctx: RequestContext, page: int, rows=None, total=None) -> str:
    if rows is None:
        rows = inventory.list_items(ctx.db, page, PAGE_SIZE)
    if total is None:
        total = inventory.item_count(ctx.db)
    return render_template(
        "frag_items.html",
        {"rows": rows, "page": page, "total": total, "page_size": PAGE_SIZE, "user": ctx.user},
    )


def region_purchases(ctx: RequestContext) -> str:
    return render_template(
        "frag_purchases.html", {"rows": inventory.list_purchase_requests(ctx.db), "user": ctx.user}
    )


def region_movements(ctx: RequestContext) -> str:
    return render_template("frag_movements.html", {"rows": inventory.recent_movements(ctx.db)})


def region_report(ctx: RequestContext, area: str | None, date_from: str, date_to: str) -> str:
    rows = inventory.area_report(ctx.db, area, date_from, date_to) if area else []
    return render_template(
        "frag_report.html",
        {"rows": rows, "area": area, "date_from": date_from, "date_to": date_to, "areas": _areas(ctx)},
    )


def build_inventory_content(ctx: RequestContext, page: int, override: dict[str, str] | None = None) -> str:
    override = override or {}
    items = inventory.list_items(ctx.db, page, PAGE_SIZE)
    regions = {
        "catalog": override.get("catalog") or region_catalog(ctx, page, rows=items),
        "purchases": override.get("purchases") or region_purchases(ctx),
        "movements": override.get("movements") or region_movements(ctx),
    }
    return render_template(
        "page_inventory.html",
        {
            "regions": regions,
            "items": items,
            "areas": _areas(ctx),
            "low_stock": inventory.low_stock(ctx.db),
            "user": ctx.user,
        },
    )


def inv_page(ctx: RequestContext, page: int, override: dict[str, str] | None = None) -> str:
    from .views_housekeeping import wrap_base

    return wrap_base(ctx, "Inventory", "inventory", build_inventory_content(ctx, page, override))


def mobile(ctx: RequestContext) -> ViewResult:
    return ViewResult(context={"page": 1})


def frag_mobile(ctx: RequestContext, result: ViewResult) -> str:
    return build_inventory_content(ctx, result.context["page"])


def page_mobile(ctx: RequestContext, result: ViewResult, frag: str) -> str:
    from .views_housekeeping import wrap_base

    return wrap_base(ctx, "Inventory", "inventory", frag)


def items(ctx: RequestContext) -> ViewResult:
    page = _page_param(ctx)
    rows = inventory.list_items(ctx.db, page, PAGE_SIZE)
    total = inventory.item_count(ctx.db)
    return ViewResult(
        context={"page": page, "rows": rows, "total": total},
        json_body={"page": page, "total": total, "items": [item_json(r) for r in rows]},
    )


def frag_items(ctx: RequestContext, result: ViewResult) -> str:
    c = result.context
    return region_catalog(ctx, c["page"], rows=c["rows"], total=c["total"])


def page_items(ctx: RequestContext, result: ViewResult, frag: str) -> str:
    return inv_page(ctx, result.context["page"], override={"catalog": frag})


def items_more(ctx: RequestContext) -> ViewResult:
    page = _page_param(ctx)
    rows = inventory.list_items(ctx.db, page, PAGE_SIZE)
    total = inventory.item_count(ctx.db)
    return ViewResult(
        context={"page": page, "rows": rows, "total": total},
        json_body={"page": page, "total": total, "items": [item_json(r) for r in rows]},
    )


def frag_items_more(ctx: RequestContext, result: ViewResult) -> str:
    # bare rows: the client appends them to the existing catalog body
    return render_template(
        "frag_item_rows.html", {"rows": result.context["rows"], "user": ctx.user}
    )


def page_items_more(ctx: RequestContext, result: ViewResult, frag: str) -> str:
    return inv_page(ctx, result.context["page"])


def issue(ctx: RequestContext) -> ViewResult:
    item_id = _int_form(ctx, "item_id")
    inventory.issue_item(
        ctx.db,
        ctx.cfg,
        item_id,
        _int_form(ctx, "quantity"),
        ctx.form.get("area", ""),
        ctx.form.get("issued_to", ""),
        ctx.user,
    )
    row = inventory.get_item(ctx.db, item_id)
    return ViewResult(
        context={"item": row}, redirect="/inventory/mobile/", json_body=item_json(row)
    )


def add_stock(ctx: RequestContext) -> ViewResult:
    item_id = _int_form(ctx, "item_id")
    inventory.add_stock(ctx.db, ctx.cfg, item_id, _int_form(ctx, "quantity"), ctx.user)
    row = inventory.get_item(ctx.db, item_id)
    return ViewResult(
        context={"item": row}, redirect="/inventory/mobile/", json_body=item_json(row)
    )


def frag_item_row(ctx: RequestContext, result: ViewResult) -> str:
    return render_template("frag_item_row.html", {"r": result.context["item"], "user": ctx.user})


def purchase(ctx: RequestContext) -> ViewResult:
    inventory.create_purchase_request(
        ctx.db,
        ctx.cfg,
        ctx.form.get("item_name", ""),
        _int_form(ctx, "quantity"),
        ctx.form.get("justification", ""),
        ctx.user,
    )
    return ViewResult(context={}, redirect="/inventory/mobile/")


def purchase_advance(ctx: RequestContext) -> ViewResult:
    inventory.advance_purchase_request(
        ctx.db, ctx.path_params["pr_id"], ctx.form.get("status", ""), ctx.user
    )
    return ViewResult(context={}, redirect="/inventory/mobile/")


def frag_purchase_list(ctx: RequestContext, result: ViewResult) -> str:
    return region_purchases(ctx)


def page_purchase_list(ctx: RequestContext, result: ViewResult, frag: str) -> str:
    return inv_page(ctx, 1, override={"purchases": frag})


def _report_params(ctx: RequestContext):
    area = ctx.query.get("area") or None
    date_from = ctx.query.get("from") or ctx.cfg.today()
    date_to = ctx.query.get("to") or ctx.cfg.today()
    parse_date(date_from)
    parse_date(date_to)
    return area, date_from, date_to


def report_page(ctx: RequestContext) -> ViewResult:
    area, date_from, date_to = _report_params(ctx)
    return ViewResult(context={"area": area, "from": date_from, "to": date_to})


def frag_report(ctx: RequestContext, result: ViewResult) -> str:
    c = result.context
    return region_report(ctx, c["area"], c["from"], c["to"])


def page_report(ctx: RequestContext, result: ViewResult, frag: str) -> str:
    from .views_housekeeping import wrap_base

    content = render_template("page_report.html", {"report": frag})
    return wrap_base(ctx, "Issuance reports", "inventory", content)


def report_csv(ctx: RequestContext) -> ViewResult:
    area, date_from, date_to = _report_params(ctx)
    if not area:
        raise DomainError("area parameter required", code="validation-error")
    rows = inventory.area_report(ctx.db, area, date_from, date_to)
    return ViewResult(media=(inventory.report_csv(rows), "text/csv; charset=utf-8"))


def report_pdf(ctx: RequestContext) -> ViewResult:
    area, date_from, date_to = _report_params(ctx)
    if not area:
        raise DomainError("area parameter required", code="validation-error")
    rows = inventory.area_report(ctx.db, area, date_from, date_to)
    return ViewResult(media=(inventory.report_pdf(rows, area, date_from, date_to), "application/pdf"))


def movements_json(ctx: RequestContext) -> ViewResult:
    area = ctx.query.get("area") or None
    if area:
        date_from = ctx.query.get("from") or "0000-01-01"
        date_to = ctx.query.get("to") or "9999-12-31"
        rows = inventory.area_report(ctx.db, area, date_from, date_to)
        return ViewResult(
            json_body={
                "area": area,
                "movements": [
                    {
                        "timestamp": r["created_at"],
                        "item": r["item_name"],
                        "category": r["category"],
                        "quantity": r["quantity"],
                        "unit": r["unit"],
                        "area": r["area_code"],
                        "issued_to": r["issued_to"] or "",
                        "actor": r["actor_username"],
                    }
                    for r in rows
                ],
            }
        )
    rows = inventory.recent_movements(ctx.db, limit=100)
    return ViewResult(
        json_body={
            "area": None,
            "movements": [
                {
                    "timestamp": r["created_at"],
                    "item": r["item_name"],
                    "kind": r["kind"],
                    "quantity": r["quantity"],
                    "unit": r["unit"],
                    "area": r["area_code"],
                    "issued_to": r["issued_to"] or "",
                    "actor": r["actor_username"],
                }
                for r in rows
            ],
        }
    )
