"""Route registry: the single source of truth for paths, endpoint ids,
endpoint-groups, supported render modes, swap directives, and per-endpoint
storage round-trip bounds. The app factory registers handlers from it, the
authorization layer derives its endpoint-to-group map from it, and the
measurement harness and instrumentation tests walk it.

query_bound caps round-trips for fragment/json rendering (list reads stay
within the default of 6); page_query_bound caps the composite full page.
Both are constants, never functions of row counts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from . import views_auth as va
from . import views_housekeeping as vh
from . import views_inventory as vi

OUTER, APPEND = "outer_replace", "append_end"


@dataclass(frozen=True)
class RouteDef:
    endpoint: str
    path: str
    methods: tuple[str, ...]
    group: str
    module: str
    kind: str  # page | action | api | download
    handler: Callable
    fragment: Callable | None = None
    page: Callable | None = None
    swap: str | None = None
    query_bound: int = 6
    page_query_bound: int = 30
    sample_params: dict = field(default_factory=dict)

    @property
    def renders_html(self) -> bool:
        return self.kind in ("page", "action")


ROUTES: list[RouteDef] = [
    # --- core auth -------------------------------------------------------------
    RouteDef("auth.login_page", "/login", ("GET",), "public", "core-auth-rbac", "page",
             va.login_page, va.frag_login, va.page_login, OUTER),
    RouteDef("auth.login", "/login", ("POST",), "public", "core-auth-rbac", "action",
             va.login_submit, va.frag_login, va.page_login, OUTER),
    RouteDef("auth.logout", "/logout", ("POST",), "core.session", "core-auth-rbac", "action",
             va.logout),
    RouteDef("core.portal", "/", ("GET",), "core.session", "core-auth-rbac", "page",
             va.portal),

    # --- housekeeping: dashboard and tasks --------------------------------------
    RouteDef("housekeeping.dashboard", "/housekeeping/dashboard/", ("GET",), "housekeeping.view",
             "hypermedia-ui", "page", vh.dashboard, vh.frag_dashboard, vh.page_dashboard, OUTER,
             query_bound=24),
    RouteDef("housekeeping.task_list", "/housekeeping/tasks", ("GET",), "housekeeping.view",
             "scheduling", "page", vh.task_list, vh.frag_task_list, vh.page_task_list, OUTER),
    RouteDef("housekeeping.task_detail", "/housekeeping/tasks/{record_id:int}", ("GET",),
             "housekeeping.view", "scheduling", "page", vh.task_detail, vh.frag_task_detail,
             vh.page_task_detail, OUTER, sample_params={"record_id": 1}),
    RouteDef("housekeeping.instantiate", "/housekeeping/tasks/instantiate", ("POST",),
             "housekeeping.assign", "scheduling", "action", vh.instantiate, vh.frag_instantiate,
             None, OUTER),
    RouteDef("housekeeping.task_assign", "/housekeeping/tasks/{record_id:int}/assign", ("POST",),
             "housekeeping.assign", "scheduling", "action", vh.task_assign, vh.frag_task_action,
             None, OUTER, query_bound=12, sample_params={"record_id": 1}),
    RouteDef("housekeeping.task_complete", "/housekeeping/tasks/{record_id:int}/complete", ("POST",),
             "housekeeping.complete", "scheduling", "action", vh.task_complete, vh.frag_task_action,
             None, OUTER, query_bound=12, sample_params={"record_id": 1}),
    RouteDef("housekeeping.task_flag", "/housekeeping/tasks/{record_id:int}/flag", ("POST",),
             "housekeeping.flag", "scheduling", "action", vh.task_flag, vh.frag_task_action,
             None, OUTER, query_bound=12, sample_params={"record_id": 1}),

    # --- attendance ---------------------------------------------------------------
    RouteDef("attendance.sheet", "/housekeeping/attendance", ("GET",), "housekeeping.view",
             "attendance", "page", vh.attendance_sheet_view, vh.frag_attendance, vh.page_attendance,
             OUTER),
    RouteDef("attendance.record", "/housekeeping/attendance/record", ("POST",), "attendance.record",
             "attendance", "action", vh.attendance_record_action, vh.frag_attendance,
             vh.page_attendance, OUTER, query_bound=12),
    RouteDef("attendance.submit", "/housekeeping/attendance/submit", ("POST",), "attendance.record",
             "attendance", "action", vh.attendance_submit_action, vh.frag_attendance,
             vh.page_attendance, OUTER, query_bound=12),

    # --- leave workflow -------------------------------------------------------------
    RouteDef("leave.my", "/housekeeping/leave", ("GET",), "housekeeping.view", "leave-workflow",
             "page", vh.leave_my_view, vh.frag_leave_my, vh.page_leave_my, OUTER),
    RouteDef("leave.create", "/housekeeping/leave/new", ("POST",), "leave.request", "leave-workflow",
             "action", vh.leave_create, vh.frag_leave_my, vh.page_leave_my, OUTER, query_bound=12),
    RouteDef("leave.inbox", "/housekeeping/leave/inbox", ("GET",), "housekeeping.view",
             "leave-workflow", "page", vh.leave_inbox_view, vh.frag_leave_inbox, vh.page_leave_inbox,
             OUTER),
    RouteDef("leave.respond", "/housekeeping/leave/assignments/{assignment_id}/respond", ("POST",),
             "leave.respond", "leave-workflow", "action", vh.leave_respond, vh.frag_leave_inbox,
             vh.page_leave_inbox, OUTER, query_bound=12, sample_params={"assignment_id": "x"}),
    RouteDef("leave.queue", "/housekeeping/leave/queue", ("GET",), "leave.manage", "leave-workflow",
             "page", vh.leave_queue_view, vh.frag_leave_queue, vh.page_leave_queue, OUTER),
    RouteDef("leave.assign", "/housekeeping/leave/{leave_id:int}/assign", ("POST",), "leave.manage",
             "leave-workflow", "action", vh.leave_assign, vh.frag_leave_queue, vh.page_leave_queue,
             OUTER, query_bound=14, sample_params={"leave_id": 1}),
    RouteDef("leave.decide", "/housekeeping/leave/{leave_id:int}/decide", ("POST",), "leave.decide",
             "leave-workflow", "action", vh.leave_decide, vh.frag_leave_queue, vh.page_leave_queue,
             OUTER, query_bound=14, sample_params={"leave_id": 1}),
    RouteDef("leave.notifications", "/housekeeping/leave/notifications", ("GET",),
             "housekeeping.view", "leave-workflow", "page", vh.notifications_view,
             vh.frag_notifications, vh.page_notifications, OUTER),
    RouteDef("leave.notifications_read", "/housekeeping/leave/notifications/read", ("POST",),
             "housekeeping.view", "leave-workflow", "action", vh.notifications_read,
             vh.frag_notifications, vh.page_notifications, OUTER, query_bound=12),

    # --- inventory -------------------------------------------------------------------
    RouteDef("inventory.mobile", "/inventory/mobile/", ("GET",), "inventory.view", "inventory",
             "page", vi.mobile, vi.frag_mobile, vi.page_mobile, OUTER, query_bound=12),
    RouteDef("inventory.items", "/inventory/items", ("GET",), "inventory.view", "inventory", "page",
             vi.items, vi.frag_items, vi.page_items, OUTER),
    RouteDef("inventory.items_more", "/inventory/items/more", ("GET",), "inventory.view",
             "inventory", "page", vi.items_more, vi.frag_items_more, vi.page_items_more, APPEND),
    RouteDef("inventory.issue_item", "/inventory/issue", ("POST",), "inventory.manage", "inventory",
             "action", vi.issue, vi.frag_item_row, None, OUTER, query_bound=12),
    RouteDef("inventory.add_stock", "/inventory/stock", ("POST",), "inventory.manage", "inventory",
             "action", vi.add_stock, vi.frag_item_row, None, OUTER, query_bound=12),
    RouteDef("inventory.purchase", "/inventory/purchase", ("POST",), "inventory.manage", "inventory",
             "action", vi.purchase, vi.frag_purchase_list, vi.page_purchase_list, OUTER,
             query_bound=12),
    RouteDef("inventory.purchase_advance", "/inventory/purchase/{pr_id:int}/advance", ("POST",),
             "inventory.manage", "inventory", "action", vi.purchase_advance, vi.frag_purchase_list,
             vi.page_purchase_list, OUTER, query_bound=12, sample_params={"pr_id": 1}),
    RouteDef("inventory.report_page", "/inventory/report", ("GET",), "inventory.report", "inventory",
             "page", vi.report_page, vi.frag_report, vi.page_report, OUTER),
    RouteDef("inventory.report_csv", "/inventory/report.csv", ("GET",), "inventory.report",
             "inventory", "download", vi.report_csv),
    RouteDef("inventory.report_pdf", "/inventory/report.pdf", ("GET",), "inventory.report",
             "inventory", "download", vi.report_pdf),

    # --- admin + photos ------------------------------------------------------------
    RouteDef("admin.dashboard", "/admin/dashboard/", ("GET",), "admin.view", "core-auth-rbac",
             "page", va.admin_dashboard, va.frag_admin, va.page_admin, OUTER, query_bound=10),
    RouteDef("photos.serve", "/photos/{asset_id:int}/{variant}", ("GET",), "photos.view",
             "photo-pipeline", "download", va.photo_serve,
             sample_params={"asset_id": 1, "variant": "main"}),

    # --- JSON namespace ---------------------------------------------------------------
    RouteDef("api.housekeeping.tasks", "/api/housekeeping/tasks", ("GET",), "housekeeping.view",
             "hypermedia-ui", "api", vh.task_list),
    RouteDef("api.housekeeping.task_detail", "/api/housekeeping/tasks/{record_id:int}", ("GET",),
             "housekeeping.view", "hypermedia-ui", "api", vh.task_detail,
             sample_params={"record_id": 1}),
    RouteDef("api.housekeeping.attendance", "/api/housekeeping/attendance", ("GET",),
             "housekeeping.view", "hypermedia-ui", "api", vh.attendance_sheet_view),
    RouteDef("api.housekeeping.leave", "/api/housekeeping/leave", ("GET",), "housekeeping.view",
             "hypermedia-ui", "api", vh.leave_my_view),
    RouteDef("api.housekeeping.leave_audit", "/api/housekeeping/leave/{leave_id:int}/audit",
             ("GET",), "leave.audit", "hypermedia-ui", "api", vh.leave_audit_json,
             sample_params={"leave_id": 1}),
    RouteDef("api.inventory.items", "/api/inventory/items", ("GET",), "inventory.view",
             "hypermedia-ui", "api", vi.items),
    RouteDef("api.inventory.movements", "/api/inventory/movements", ("GET",), "inventory.report",
             "hypermedia-ui", "api", vi.movements_json),
]


def endpoint_groups() -> dict[str, str]:
    return {r.endpoint: r.group for r in ROUTES}


def by_endpoint(endpoint: str) -> RouteDef:
    for r in ROUTES:
        if r.endpoint == endpoint:
            return r
    raise KeyError(endpoint)
