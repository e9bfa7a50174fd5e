"""Housekeeping portal: dashboard, tasks, attendance, leave.

Handlers do the domain work and return data; the frag_* / page_* callables
registered alongside them render that data as a fragment or as the full
containing page (which embeds the fragment verbatim).
"""

from __future__ import annotations

from datetime import timedelta

from .. import attendance, leave, scheduling
from ..errors import DomainError
from ..scheduling import parse_date
from .rendering import RequestContext, ViewResult, render_template


def _date_param(ctx: RequestContext, key: str = "date") -> str:
    value = ctx.query.get(key) or ctx.form.get(key)
    if not value:
        return ctx.cfg.today()
    parse_date(value)
    return value


def _slot_param(ctx: RequestContext) -> str:
    slot = ctx.query.get("slot") or ctx.form.get("slot") or "first_half"
    if slot not in attendance.SLOTS:
        raise DomainError(f"unknown slot: {slot}", code="invalid-slot")
    return slot


def _int_form(ctx: RequestContext, key: str) -> int:
    raw = ctx.form.get(key) or ctx.query.get(key) or ""
    try:
        return int(raw)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"bad {key}: {raw!r}", code="validation-error") from exc


def task_json(r) -> dict:
    return {
        "id": r["id"],
        "template_id": r["template_id"],
        "template_name": r["template_name"],
        "area_code": r["area_code"],
        "date": r["date"],
        "status": r["status"],
        "frequency": r["frequency"],
        "window_start": r["window_start"],
        "window_end": r["window_end"],
        "requires_photo": bool(r["requires_photo"]),
        "assigned_at": r["assigned_at"],
        "completed_at": r["completed_at"],
        "photo_id": r["photo_id"],
        "gps_lat": r["gps_lat"],
        "gps_lng": r["gps_lng"],
        "flag_reason": r["flag_reason"],
        "worker_names": r["worker_names"],
    }


# --- region renderers --------------------------------------------------------

def region_task_table(ctx: RequestContext, date: str, area: str | None = None, rows=None) -> str:
    if rows is None:
        rows = scheduling.records_for_date(ctx.db, date, area)
    return render_template(
        "frag_task_table.html", {"date": date, "area": area, "rows": rows, "user": ctx.user}
    )


def region_task_detail(ctx: RequestContext, record=None) -> str:
    caretakers = []
    if record is not None and record["status"] == "pending":
        caretakers = ctx.db.query(
            "SELECT id, display_name FROM users WHERE role='caretaker' AND active=1 ORDER BY display_name"
        )
    return render_template(
        "frag_task_detail.html", {"r": record, "user": ctx.user, "caretakers": caretakers}
    )


def region_attendance(ctx: RequestContext, date: str, slot: str) -> str:
    rows = attendance.attendance_sheet(ctx.db, date, slot)
    submitted = any(r["is_submitted"] for r in rows)
    return render_template(
        "frag_attendance_sheet.html",
        {
            "date": date,
            "slot": slot,
            "bounds": attendance.SLOT_BOUNDS[slot],
            "rows": rows,
            "submitted": submitted,
            "statuses": attendance.STATUSES,
            "user": ctx.user,
        },
    )


def region_leave_my(ctx: RequestContext) -> str:
    rows = leave.my_requests(ctx.db, ctx.user)
    return render_template("frag_leave_my.html", {"rows": rows, "user": ctx.user})


def region_leave_inbox(ctx: RequestContext) -> str:
    rows = leave.incharge_inbox(ctx.db, ctx.user)
    return render_template("frag_leave_inbox.html", {"rows": rows, "user": ctx.user})


def region_leave_queue(ctx: RequestContext) -> str:
    staff = ctx.db.query(
        "SELECT id, display_name, role FROM users"
        " WHERE role IN ('caretaker','supervisor') AND active=1 ORDER BY display_name"
    )
    return render_template(
        "frag_leave_queue.html",
        {
            "assign_queue": leave.manager_queue(ctx.db),
            "decide_queue": leave.admin_queue(ctx.db),
            "staff": staff,
            "user": ctx.user,
        },
    )


def region_notifications(ctx: RequestContext) -> str:
    rows = leave.list_notifications(ctx.db, ctx.user)[:12]
    return render_template("frag_notifications.html", {"rows": rows, "user": ctx.user})


def region_area_summary(ctx: RequestContext, date: str) -> str:
    rows = scheduling.area_status_summary(ctx.db, date)
    return render_template("frag_area_summary.html", {"date": date, "rows": rows})


def region_week_grid(ctx: RequestContext, date: str) -> str:
    end = parse_date(date)
    dates = [(end - timedelta(days=i)).isoformat() for i in range(6, -1, -1)]
    cells = scheduling.week_overview(ctx.db, dates)
    by_template: dict[int, dict] = {}
    for c in cells:
        slot = by_template.setdefault(c["template_id"], {"name": c["template_name"], "cells": {}})
        slot["cells"][c["date"]] = c
    return render_template(
        "frag_week_grid.html",
        {"dates": dates, "templates": sorted(by_template.values(), key=lambda t: t["name"])},
    )


def region_gallery(ctx: RequestContext, date: str) -> str:
    rows = scheduling.completed_with_photos(ctx.db, date)
    return render_template("frag_gallery.html", {"date": date, "rows": rows})


def region_templates_panel(ctx: RequestContext) -> str:
    rows = ctx.db.query(
        "SELECT t.*, a.display_name AS area_name FROM schedule_templates t"
        " JOIN area_types a ON a.code = t.area_code"
        " WHERE t.active=1 ORDER BY t.name"
    )
    return render_template("frag_templates_panel.html", {"rows": rows})


def region_attendance_week(ctx: RequestContext, date: str) -> str:
    end = parse_date(date)
    start = (end - timedelta(days=6)).isoformat()
    rows = ctx.db.query(
        "SELECT u.id, u.display_name,"
        " sum(CASE WHEN a.status='present' THEN 1 ELSE 0 END) AS present,"
        " sum(CASE WHEN a.status='absent' THEN 1 ELSE 0 END) AS absent,"
        " sum(CASE WHEN a.status='late' THEN 1 ELSE 0 END) AS late,"
        " sum(CASE WHEN a.status='leave' THEN 1 ELSE 0 END) AS on_leave"
        " FROM users u LEFT JOIN attendance_records a"
        "  ON a.worker_id = u.id AND a.date BETWEEN ? AND ?"
        " WHERE u.role='caretaker' AND u.active=1"
        " GROUP BY u.id ORDER BY u.display_name",
        (start, date),
    )
    return render_template(
        "frag_attendance_week.html", {"rows": rows, "start": start, "end": date}
    )


def wrap_base(ctx: RequestContext, title: str, active: str, content: str) -> str:
    return render_template(
        "base.html",
        {
            "title": title,
            "user": ctx.user,
            "active": active,
            "unread": leave.unread_count(ctx.db, ctx.user) if ctx.user is not None else 0,
            "content": content,
        },
    )


def build_housekeeping_content(
    ctx: RequestContext, date: str, override: dict[str, str] | None = None, record=None
) -> str:
    override = override or {}
    regions = {
        "task_table": override.get("task_table") or region_task_table(ctx, date),
        "task_detail": override.get("task_detail") or region_task_detail(ctx, record),
        "attendance_first": override.get("attendance_first") or region_attendance(ctx, date, "first_half"),
        "attendance_second": override.get("attendance_second") or region_attendance(ctx, date, "second_half"),
        "attendance_week": override.get("attendance_week") or region_attendance_week(ctx, date),
        "leave_my": override.get("leave_my") or region_leave_my(ctx),
        "leave_inbox": override.get("leave_inbox") or region_leave_inbox(ctx),
        "notifications": override.get("notifications") or region_notifications(ctx),
        "area_summary": override.get("area_summary") or region_area_summary(ctx, date),
        "week_grid": override.get("week_grid") or region_week_grid(ctx, date),
        "gallery": override.get("gallery") or region_gallery(ctx, date),
        "templates_panel": override.get("templates_panel") or region_templates_panel(ctx),
        "leave_queue": None,
    }
    if ctx.user["role"] in ("housekeeping_manager", "admin"):
        regions["leave_queue"] = override.get("leave_queue") or region_leave_queue(ctx)
    areas = ctx.db.query("SELECT code, display_name FROM area_types ORDER BY display_name")
    return render_template(
        "page_housekeeping.html",
        {"date": date, "regions": regions, "user": ctx.user, "areas": areas},
    )


def hk_page(ctx: RequestContext, date: str, override: dict[str, str] | None = None, record=None) -> str:
    content = build_housekeeping_content(ctx, date, override, record)
    return wrap_base(ctx, "Housekeeping dashboard", "housekeeping", content)


# --- handlers ----------------------------------------------------------------

def dashboard(ctx: RequestContext) -> ViewResult:
    date = _date_param(ctx)
    scheduling.instantiate_daily_records(ctx.db, date)
    return ViewResult(context={"date": date})


def frag_dashboard(ctx: RequestContext, result: ViewResult) -> str:
    return build_housekeeping_content(ctx, result.context["date"])


def page_dashboard(ctx: RequestContext, result: ViewResult, frag: str) -> str:
    return wrap_base(ctx, "Housekeeping dashboard", "housekeeping", frag)


def task_list(ctx: RequestContext) -> ViewResult:
    date = _date_param(ctx)
    area = ctx.query.get("area") or None
    rows = scheduling.instantiate_daily_records(ctx.db, date)
    if area:
        rows = [r for r in rows if r["area_code"] == area]
    return ViewResult(
        context={"date": date, "area": area, "rows": rows},
        json_body={"date": date, "area": area, "records": [task_json(r) for r in rows]},
    )


def frag_task_list(ctx: RequestContext, result: ViewResult) -> str:
    c = result.context
    return region_task_table(ctx, c["date"], c["area"], rows=c["rows"])


def page_task_list(ctx: RequestContext, result: ViewResult, frag: str) -> str:
    return hk_page(ctx, result.context["date"], override={"task_table": frag})


def task_detail(ctx: RequestContext) -> ViewResult:
    record = scheduling.get_record(ctx.db, ctx.path_params["record_id"])
    return ViewResult(context={"record": record, "date": record["date"]}, json_body=task_json(record))


def frag_task_detail(ctx: RequestContext, result: ViewResult) -> str:
    return region_task_detail(ctx, result.context["record"])


def page_task_detail(ctx: RequestContext, result: ViewResult, frag: str) -> str:
    record = result.context["record"]
    return hk_page(ctx, record["date"], override={"task_detail": frag}, record=record)


def instantiate(ctx: RequestContext) -> ViewResult:
    date = _date_param(ctx)
    rows = scheduling.instantiate_daily_records(ctx.db, date)
    return ViewResult(
        context={"date": date, "rows": rows},
        redirect=f"/housekeeping/dashboard/?date={date}",
        json_body={"date": date, "count": len(rows)},
    )


def frag_instantiate(ctx: RequestContext, result: ViewResult) -> str:
    c = result.context
    return region_task_table(ctx, c["date"], None, rows=c["rows"])


def _task_action_result(ctx: RequestContext, record) -> ViewResult:
    return ViewResult(
        context={"record": record, "date": record["date"]},
        redirect=f"/housekeeping/dashboard/?date={record['date']}",
        json_body=task_json(record),
    )


def task_assign(ctx: RequestContext) -> ViewResult:
    record_id = ctx.path_params["record_id"]
    worker_ids = [int(w) for w in ctx.form.get("workers", "").replace(",", " ").split() if w.strip()]
    scheduling.assign_workers(ctx.db, ctx.cfg, record_id, worker_ids, ctx.user)
    return _task_action_result(ctx, scheduling.get_record(ctx.db, record_id))


def task_complete(ctx: RequestContext) -> ViewResult:
    record_id = ctx.path_params["record_id"]
    photo_upload = None
    main, thumb = ctx.form.get("photo"), ctx.form.get("thumbnail")
    if main:
        if not thumb:
            raise DomainError("thumbnail missing from upload", code="invalid-image")
        photo_upload = (main, thumb, _int_form(ctx, "original_size"))
    gps = None
    if ctx.form.get("lat") and ctx.form.get("lng"):
        try:
            gps = (float(ctx.form["lat"]), float(ctx.form["lng"]))
        except ValueError as exc:
            raise DomainError("bad gps fields", code="gps-out-of-range") from exc
    record = scheduling.complete_task(ctx.db, ctx.cfg, record_id, ctx.user, photo_upload, gps)
    return _task_action_result(ctx, record)


def task_flag(ctx: RequestContext) -> ViewResult:
    record = scheduling.flag_record(
        ctx.db, ctx.cfg, ctx.path_params["record_id"], ctx.form.get("reason", ""), ctx.user
    )
    return _task_action_result(ctx, record)


def frag_task_action(ctx: RequestContext, result: ViewResult) -> str:
    # actions re-render the task card; the client swaps it over #task-detail
    return region_task_detail(ctx, result.context["record"])


def attendance_sheet_view(ctx: RequestContext) -> ViewResult:
    date, slot = _date_param(ctx), _slot_param(ctx)
    rows = attendance.attendance_sheet(ctx.db, date, slot)
    return ViewResult(
        context={"date": date, "slot": slot},
        json_body={
            "date": date,
            "slot": slot,
            "rows": [
                {
                    "worker_id": r["worker_id"],
                    "display_name": r["display_name"],
                    "status": r["status"],
                    "is_submitted": bool(r["is_submitted"]),
                }
                for r in rows
            ],
        },
    )


def frag_attendance(ctx: RequestContext, result: ViewResult) -> str:
    return region_attendance(ctx, result.context["date"], result.context["slot"])


def page_attendance(ctx: RequestContext, result: ViewResult, frag: str) -> str:
    slot_key = "attendance_first" if result.context["slot"] == "first_half" else "attendance_second"
    return hk_page(ctx, result.context["date"], override={slot_key: frag})


def attendance_record_action(ctx: RequestContext) -> ViewResult:
    date, slot = _date_param(ctx), _slot_param(ctx)
    attendance.record_attendance(
        ctx.db, ctx.cfg, _int_form(ctx, "worker_id"), date, slot, ctx.form.get("status", ""), ctx.user
    )
    return ViewResult(
        context={"date": date, "slot": slot},
        redirect=f"/housekeeping/dashboard/?date={date}",
    )


def attendance_submit_action(ctx: RequestContext) -> ViewResult:
    date, slot = _date_param(ctx), _slot_param(ctx)
    locked = attendance.submit_attendance(ctx.db, date, slot, ctx.user)
    return ViewResult(
        context={"date": date, "slot": slot, "locked": locked},
        redirect=f"/housekeeping/dashboard/?date={date}",
    )


def leave_my_view(ctx: RequestContext) -> ViewResult:
    rows = leave.my_requests(ctx.db, ctx.user)
    return ViewResult(context={}, json_body={"requests": [dict(r) for r in rows]})


def frag_leave_my(ctx: RequestContext, result: ViewResult) -> str:
    return region_leave_my(ctx)


def page_leave_my(ctx: RequestContext, result: ViewResult, frag: str) -> str:
    return hk_page(ctx, ctx.cfg.today(), override={"leave_my": frag})


def leave_create(ctx: RequestContext) -> ViewResult:
    leave.create_leave_request(
        ctx.db,
        ctx.cfg,
        ctx.user,
        ctx.form.get("start_date", ""),
        ctx.form.get("end_date", ""),
        ctx.form.get("reason", ""),
    )
    return ViewResult(context={}, redirect="/housekeeping/dashboard/")


def leave_inbox_view(ctx: RequestContext) -> ViewResult:
    return ViewResult(context={})


def frag_leave_inbox(ctx: RequestContext, result: ViewResult) -> str:
    return region_leave_inbox(ctx)


def page_leave_inbox(ctx: RequestContext, result: ViewResult, frag: str) -> str:
    return hk_page(ctx, ctx.cfg.today(), override={"leave_inbox": frag})


def leave_respond(ctx: RequestContext) -> ViewResult:
    accept = ctx.form.get("response") == "accept"
    leave.incharge_respond(ctx.db, ctx.cfg, ctx.path_params["assignment_id"], accept, ctx.user)
    return ViewResult(context={}, redirect="/housekeeping/dashboard/")


def leave_queue_view(ctx: RequestContext) -> ViewResult:
    return ViewResult(context={})


def frag_leave_queue(ctx: RequestContext, result: ViewResult) -> str:
    return region_leave_queue(ctx)


def page_leave_queue(ctx: RequestContext, result: ViewResult, frag: str) -> str:
    return hk_page(ctx, ctx.cfg.today(), override={"leave_queue": frag})


def leave_assign(ctx: RequestContext) -> ViewResult:
    leave.assign_incharge(
        ctx.db, ctx.cfg, ctx.path_params["leave_id"], _int_form(ctx, "incharge_id"), ctx.user
    )
    return ViewResult(context={}, redirect="/housekeeping/dashboard/")


def leave_decide(ctx: RequestContext) -> ViewResult:
    approve = ctx.form.get("decision") == "approve"
    leave.admin_decide(ctx.db, ctx.cfg, ctx.path_params["leave_id"], approve, ctx.user)
    return ViewResult(context={}, redirect="/housekeeping/dashboard/")


def notifications_view(ctx: RequestContext) -> ViewResult:
    return ViewResult(context={})


def frag_notifications(ctx: RequestContext, result: ViewResult) -> str:
    return region_notifications(ctx)


def page_notifications(ctx: RequestContext, result: ViewResult, frag: str) -> str:
    return hk_page(ctx, ctx.cfg.today(), override={"notifications": frag})


def notifications_read(ctx: RequestContext) -> ViewResult:
    leave.mark_notifications_read(ctx.db, ctx.user)
    return ViewResult(context={}, redirect="/housekeeping/dashboard/")


def leave_audit_json(ctx: RequestContext) -> ViewResult:
    leave_id = ctx.path_params["leave_id"]
    trail = leave.audit_trail(ctx.db, leave_id)
    row = ctx.db.query_one("SELECT * FROM leave_requests WHERE id=?", (leave_id,))
    return ViewResult(
        json_body={
            "leave_id": leave_id,
            "state": row["state"],
            "replayed_state": leave.replay_state(trail),
            "transitions": [
                {
                    "from_state": t["from_state"],
                    "to_state": t["to_state"],
                    "actor": t["actor_username"],
                    "created_at": t["created_at"],
                }
                for t in trail
            ],
        }
    )
