import itertools
import re
from pathlib import Path

import pytest
from starlette.testclient import TestClient

from campusops import auth
from campusops.config import STATIC_DIR, TEMPLATES_DIR
from campusops.harness import seeding
from campusops.web import create_app
from campusops.web.registry import ROUTES, by_endpoint, endpoint_groups
from campusops.web.rendering import negotiate_mode
from tests.conftest import make_config

pytestmark = pytest.mark.filterwarnings("ignore::DeprecationWarning")


@pytest.fixture(scope="module")
def seeded(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("web")
    cfg = make_config(tmp, query_count_header=True)
    manifest = seeding.seed(cfg, "small")
    app = create_app(cfg)
    return app, cfg, manifest


@pytest.fixture()
def client(seeded):
    app, _, _ = seeded
    return TestClient(app, follow_redirects=False)


def login(client, username, password="campus123"):
    response = client.post("/login", data={"username": username, "password": password})
    assert response.status_code == 303
    return response.headers["location"]


# --- content negotiation -------------------------------------------------------

def test_negotiation_totality_over_registry():
    """Every registered path resolves to exactly one mode per header combination."""
    for entry in ROUTES:
        for marker in (True, False):
            headers = {"hx-request": "true"} if marker else {}
            mode = negotiate_mode(entry.path, headers, {})
            assert mode in ("full_page", "fragment", "json")
            if entry.path.startswith("/api/"):
                assert mode == "json"
            elif marker:
                assert mode == "fragment"
            else:
                assert mode == "full_page"


def test_fragment_query_param_fallback():
    assert negotiate_mode("/housekeeping/tasks", {}, {"fragment": "1"}) == "fragment"
    assert negotiate_mode("/api/inventory/items", {"hx-request": "true"}, {}) == "json"


def test_unknown_path_is_not_found(client):
    login(client, "admin")
    assert client.get("/no/such/path").status_code == 404


# --- login / portal routing -----------------------------------------------------

def test_login_routes_by_role(client):
    assert login(client, "admin") == "/admin/dashboard/"
    assert login(client, "inv_mgr") == "/inventory/mobile/"
    assert login(client, "hk_mgr") == "/housekeeping/dashboard/"
    assert login(client, "sup01") == "/housekeeping/dashboard/"
    assert login(client, "ct01") == "/housekeeping/dashboard/"


def test_login_failure_is_401_with_form(client):
    response = client.post("/login", data={"username": "admin", "password": "wrong"})
    assert response.status_code == 401
    assert "Invalid username or password" in response.text


def test_session_cookie_is_httponly(client):
    response = client.post("/login", data={"username": "admin", "password": "campus123"})
    cookie = response.headers["set-cookie"]
    assert "httponly" in cookie.lower()
    assert "campusops_session" in cookie


def test_logout_clears_session(seeded):
    app, _, _ = seeded
    client = TestClient(app, follow_redirects=False)
    login(client, "ct01")
    assert client.get("/").status_code == 303
    response = client.post("/logout")
    assert response.status_code == 303
    assert client.get("/housekeeping/dashboard/").status_code == 303  # back to login


def test_portal_redirect_follows_role(client):
    login(client, "ct01")
    response = client.get("/")
    assert response.status_code == 303
    assert response.headers["location"] == "/housekeeping/dashboard/"


# --- middleware-level auth sweep ---------------------------------------------

def fill_path(entry):
    path = entry.path
    for key, value in entry.sample_params.items():
        path = re.sub(r"\{%s(:[a-z]+)?\}" % key, str(value), path)
    return path


def test_every_route_unreachable_without_session(seeded):
    """No registered handler answers without a session: HTML redirects to the
    login page, JSON gets a 401. Never a 200."""
    app, _, _ = seeded
    bare = TestClient(app, follow_redirects=False)
    for entry in ROUTES:
        if entry.group == "public":
            continue
        path = fill_path(entry)
        for method in entry.methods:
            response = bare.request(method, path)
            assert response.status_code in (303, 401), (entry.endpoint, response.status_code)
            if response.status_code == 303:
                assert response.headers["location"] == "/login"
            assert response.status_code != 200


def test_expired_session_is_unauthenticated(seeded):
    from campusops.config import ts
    from campusops.db import Database

    app, cfg, _ = seeded
    client = TestClient(app, follow_redirects=False)
    login(client, "ct01")
    db = Database(cfg.database_path, synchronous="OFF")
    db.execute("UPDATE sessions SET expires_at=?", (ts(cfg.now()),))
    assert client.get("/housekeeping/dashboard/").status_code == 303
    db.close()


# --- RBAC matrix ------------------------------------------------------------------

def test_matrix_enumeration_matches_authorize(seeded):
    """Exhaustive |roles| x |registered endpoints| agreement with the matrix file."""
    _, cfg, _ = seeded
    matrix = auth.PermissionMatrix.from_file(cfg.permissions_file)
    groups = endpoint_groups()
    for role, entry in itertools.product(auth.ROLES, ROUTES):
        expected = entry.group == "public" or matrix.allows(role, entry.group)
        assert auth.authorize(role, entry.endpoint, matrix, groups) == expected
    for role in auth.ROLES:  # admin superset over the registered surface
        for entry in ROUTES:
            if role == "admin":
                assert auth.authorize("admin", entry.endpoint, matrix, groups)


def test_caretaker_denied_inventory_issue_over_http(seeded):
    app, _, manifest = seeded
    client = TestClient(app, follow_redirects=False)
    login(client, "ct01")
    response = client.post(
        "/inventory/issue",
        data={"item_id": str(manifest["item_id"]), "quantity": "1", "area": "hostels"},
        headers={"HX-Request": "true"},
    )
    assert response.status_code == 403
    json_response = client.get("/api/inventory/items")
    assert json_response.status_code == 403
    assert json_response.json() == {"error": "deny"}


def test_inventory_manager_denied_housekeeping(seeded):
    app, _, _ = seeded
    client = TestClient(app, follow_redirects=False)
    login(client, "inv_mgr")
    assert client.get("/housekeeping/dashboard/").status_code == 403


# --- render invariants ----------------------------------------------------------

WRAPPER_RE = re.compile(r"<!DOCTYPE|<html[\s>]|<head[\s>]|<body[\s>]", re.I)


def html_get_entries():
    return [e for e in ROUTES if e.kind == "page" and "GET" in e.methods and e.fragment is not None]


def sample_path(entry, manifest):
    date = manifest["measure_date"]
    paths = {
        "housekeeping.dashboard": f"/housekeeping/dashboard/?date={date}",
        "housekeeping.task_list": f"/housekeeping/tasks?date={date}",
        "housekeeping.task_detail": f"/housekeeping/tasks/{manifest['record_id']}",
        "attendance.sheet": f"/housekeeping/attendance?date={date}&slot=first_half",
        "leave.my": "/housekeeping/leave",
        "leave.inbox": "/housekeeping/leave/inbox",
        "leave.queue": "/housekeeping/leave/queue",
        "leave.notifications": "/housekeeping/leave/notifications",
        "inventory.mobile": "/inventory/mobile/",
        "inventory.items": "/inventory/items",
        "inventory.items_more": "/inventory/items/more?page=2",
        "inventory.report_page": f"/inventory/report?area=hostels&from={date}&to={date}",
        "admin.dashboard": "/admin/dashboard/",
        "auth.login_page": "/login",
    }
    return paths[entry.endpoint]


def test_fragments_have_no_document_wrappers(seeded):
    app, _, manifest = seeded
    client = TestClient(app, follow_redirects=False)
    login(client, "admin")
    for entry in html_get_entries():
        response = client.get(sample_path(entry, manifest), headers={"HX-Request": "true"})
        assert response.status_code == 200, entry.endpoint
        assert not WRAPPER_RE.search(response.text), entry.endpoint


def test_full_pages_have_exactly_one_document_wrapper(seeded):
    app, _, manifest = seeded
    client = TestClient(app, follow_redirects=False)
    login(client, "admin")
    for entry in html_get_entries():
        response = client.get(sample_path(entry, manifest))
        assert response.status_code == 200, entry.endpoint
        assert response.text.count("<html") == 1, entry.endpoint
        assert response.text.count("<body") == 1, entry.endpoint


def test_fragment_markup_contained_in_full_page(seeded):
    app, _, manifest = seeded
    client = TestClient(app, follow_redirects=False)
    login(client, "admin")
    for entry in html_get_entries():
        path = sample_path(entry, manifest)
        fragment = client.get(path, headers={"HX-Request": "true"}).text
        page = client.get(path).text
        assert fragment in page, entry.endpoint


def test_render_is_deterministic(seeded):
    app, _, manifest = seeded
    client = TestClient(app, follow_redirects=False)
    login(client, "admin")
    for entry in html_get_entries():
        path = sample_path(entry, manifest)
        assert client.get(path).content == client.get(path).content, entry.endpoint
        first = client.get(path, headers={"HX-Request": "true"}).content
        second = client.get(path, headers={"HX-Request": "true"}).content
        assert first == second, entry.endpoint


def test_task_card_under_five_percent_of_dashboard(seeded):
    app, _, manifest = seeded
    client = TestClient(app, follow_redirects=False)
    login(client, "admin")
    date = manifest["measure_date"]
    card = client.get(f"/housekeeping/tasks/{manifest['record_id']}", headers={"HX-Request": "true"})
    page = client.get(f"/housekeeping/dashboard/?date={date}")
    assert "completed" in card.text
    assert re.search(r"Completed</dt><dd>20\d\d-", card.text.replace("\n", ""))
    assert len(card.content) < 0.05 * len(page.content)


# --- swap directives --------------------------------------------------------------

def test_every_fragment_template_declares_one_swap():
    annotations = {}
    for template in sorted(TEMPLATES_DIR.glob("frag_*.html")):
        text = template.read_text(encoding="utf-8")
        found = re.findall(r"\{#\s*swap:\s*(outer_replace|append_end)\s*#\}", text)
        assert len(found) == 1, template.name
        annotations[template.name] = found[0]
    assert annotations["frag_item_rows.html"] == "append_end"
    assert annotations["frag_task_table.html"] == "outer_replace"


def test_registry_declares_swaps_for_html_endpoints():
    for entry in ROUTES:
        if entry.renders_html and entry.fragment is not None:
            assert entry.swap in ("outer_replace", "append_end"), entry.endpoint
        if entry.kind in ("api", "download"):
            assert entry.swap is None, entry.endpoint
    assert by_endpoint("inventory.items_more").swap == "append_end"


# --- JSON namespace parity ----------------------------------------------------------

def test_json_parity_tasks(seeded):
    app, _, manifest = seeded
    client = TestClient(app, follow_redirects=False)
    login(client, "admin")
    date = manifest["measure_date"]
    html = client.get(f"/housekeeping/tasks?date={date}", headers={"HX-Request": "true"}).text
    html_ids = {int(m) for m in re.findall(r'id="task-row-(\d+)"', html)}
    data = client.get(f"/api/housekeeping/tasks?date={date}").json()
    assert {r["id"] for r in data["records"]} == html_ids
    # filtered variant stays in lockstep
    html = client.get(f"/housekeeping/tasks?date={date}&area=hostels", headers={"HX-Request": "true"}).text
    html_ids = {int(m) for m in re.findall(r'id="task-row-(\d+)"', html)}
    data = client.get(f"/api/housekeeping/tasks?date={date}&area=hostels").json()
    assert {r["id"] for r in data["records"]} == html_ids


def test_json_parity_attendance(seeded):
    app, _, manifest = seeded
    client = TestClient(app, follow_redirects=False)
    login(client, "admin")
    date = manifest["measure_date"]
    html = client.get(
        f"/housekeeping/attendance?date={date}&slot=first_half", headers={"HX-Request": "true"}
    ).text
    html_ids = {int(m) for m in re.findall(r'id="att-(\d+)-first_half"', html)}
    data = client.get(f"/api/housekeeping/attendance?date={date}&slot=first_half").json()
    assert {r["worker_id"] for r in data["rows"]} == html_ids


def test_json_parity_items(seeded):
    app, _, _ = seeded
    client = TestClient(app, follow_redirects=False)
    login(client, "admin")
    html = client.get("/inventory/items?page=1", headers={"HX-Request": "true"}).text
    html_ids = {int(m) for m in re.findall(r'id="item-row-(\d+)"', html)}
    data = client.get("/api/inventory/items?page=1").json()
    assert {r["id"] for r in data["items"]} == html_ids
    assert len(html_ids) == 10  # page size


def test_json_objects_are_flat_snake_case(seeded):
    app, _, manifest = seeded
    client = TestClient(app, follow_redirects=False)
    login(client, "admin")
    record = client.get(f"/api/housekeeping/tasks/{manifest['record_id']}").json()
    assert record["status"] in ("pending", "assigned", "completed", "flagged")
    for key in record:
        assert re.fullmatch(r"[a-z][a-z0-9_]*", key), key


def test_leave_audit_json_admin_only(seeded):
    app, _, _ = seeded
    client = TestClient(app, follow_redirects=False)
    login(client, "admin")
    listing = client.get("/api/housekeeping/leave")
    assert listing.status_code == 200
    audit = client.get("/api/housekeeping/leave/1/audit").json()
    assert audit["state"] == audit["replayed_state"]
    assert audit["transitions"][0]["from_state"] is None
    hk = TestClient(app, follow_redirects=False)
    login(hk, "hk_mgr")
    assert hk.get("/api/housekeeping/leave/1/audit").status_code == 403


# --- bounded queries -----------------------------------------------------------------

def test_query_counts_within_declared_bounds(seeded):
    app, _, manifest = seeded
    client = TestClient(app, follow_redirects=False)
    login(client, "admin")
    for entry in html_get_entries():
        path = sample_path(entry, manifest)
        frag = client.get(path, headers={"HX-Request": "true"})
        assert int(frag.headers["x-query-count"]) <= entry.query_bound, entry.endpoint
        full = client.get(path)
        assert int(full.headers["x-query-count"]) <= entry.page_query_bound, entry.endpoint


def test_list_endpoints_constant_queries_in_page_size(seeded):
    """Same round-trip count for a 10-row and a 50-row attendance sheet slice."""
    app, _, manifest = seeded
    client = TestClient(app, follow_redirects=False)
    login(client, "admin")
    date_small = manifest["dates"][0]
    date_big = manifest["measure_date"]
    counts = []
    for date in (date_small, date_big):
        response = client.get(
            f"/housekeeping/attendance?date={date}&slot=first_half", headers={"HX-Request": "true"}
        )
        counts.append(int(response.headers["x-query-count"]))
    assert counts[0] == counts[1]


# --- static assets ---------------------------------------------------------------------

def test_static_served_with_far_future_cache(seeded):
    app, _, _ = seeded
    client = TestClient(app, follow_redirects=False)
    response = client.get("/static/app.css")
    assert response.status_code == 200
    assert "max-age=31536000" in response.headers["cache-control"]
    # exact byte measurement against the file on disk
    assert len(response.content) == (STATIC_DIR / "app.css").stat().st_size


# --- downloads through HTTP ---------------------------------------------------------

def test_photo_serving_content_types(seeded):
    app, _, manifest = seeded
    client = TestClient(app, follow_redirects=False)
    login(client, "admin")
    record = client.get(f"/api/housekeeping/tasks/{manifest['record_id']}").json()
    photo_id = record["photo_id"]
    assert photo_id is not None
    main = client.get(f"/photos/{photo_id}/main")
    assert main.status_code == 200 and main.headers["content-type"].startswith("image/jpeg")
    thumb = client.get(f"/photos/{photo_id}/thumb")
    assert thumb.status_code == 200 and thumb.headers["content-type"].startswith("image/webp")
    assert client.get(f"/photos/{photo_id}/raw").status_code == 404
    bare = TestClient(app, follow_redirects=False)
    assert bare.get(f"/photos/{photo_id}/main").status_code in (303, 401)


def test_report_exports_over_http(seeded):
    app, cfg, manifest = seeded
    client = TestClient(app, follow_redirects=False)
    login(client, "inv_mgr")
    start, end = manifest["dates"][0], manifest["dates"][-1]
    csv_response = client.get(f"/inventory/report.csv?area=hostels&from={start}&to={end}")
    assert csv_response.status_code == 200
    assert csv_response.headers["content-type"].startswith("text/csv")
    first_line = csv_response.text.split("\n", 1)[0]
    assert first_line == "timestamp,item,category,quantity,unit,area,issued_to,actor"
    pdf_response = client.get(f"/inventory/report.pdf?area=hostels&from={start}&to={end}")
    assert pdf_response.status_code == 200
    assert pdf_response.content.startswith(b"%PDF")
    assert pdf_response.headers["content-type"] == "application/pdf"


# --- hypermedia workflows end to end ------------------------------------------------

def test_complete_task_via_multipart_upload(seeded):
    app, _, manifest = seeded
    client = TestClient(app, follow_redirects=False)
    login(client, "sup01")
    date = manifest["measure_date"]
    data = client.get(f"/api/housekeeping/tasks?date={date}").json()
    assigned = [r for r in data["records"] if r["status"] == "assigned"]
    assert assigned
    record = assigned[0]
    import random as _random

    rng = _random.Random(5)
    main = seeding.synth_photo(rng, 640, 480, 85)
    thumb = seeding.synth_photo(rng, 240, 180, 70)
    response = client.post(
        f"/housekeeping/tasks/{record['id']}/complete",
        data={"original_size": str(len(main) * 9), "lat": "23.2156", "lng": "72.6842"},
        files={"photo": ("photo.jpg", main, "image/jpeg"), "thumbnail": ("thumb.jpg", thumb, "image/jpeg")},
        headers={"HX-Request": "true"},
    )
    assert response.status_code == 200
    assert 'class="badge st-completed"' in response.text
    detail = client.get(f"/api/housekeeping/tasks/{record['id']}").json()
    assert detail["status"] == "completed"
    assert detail["gps_lat"] == 23.2156 and detail["gps_lng"] == 72.6842
    assert detail["photo_id"] is not None


def test_leave_workflow_over_http(seeded):
    app, _, _ = seeded
    mgr = TestClient(app, follow_redirects=False)
    login(mgr, "hk_mgr")
    worker = TestClient(app, follow_redirects=False)
    login(worker, "ct03")
    cover = TestClient(app, follow_redirects=False)
    login(cover, "ct04")
    admin = TestClient(app, follow_redirects=False)
    login(admin, "admin")

    created = worker.post(
        "/housekeeping/leave/new",
        data={"start_date": "2026-04-01", "end_date": "2026-04-02", "reason": "wedding"},
        headers={"HX-Request": "true"},
    )
    assert created.status_code == 200
    mine = worker.get("/api/housekeeping/leave").json()["requests"]
    leave_id = mine[0]["id"]
    assert mine[0]["state"] == "awaiting"

    cover_id = None
    from campusops.db import Database

    db = Database(app.state.cfg.database_path, synchronous="OFF")
    cover_id = db.query_one("SELECT id FROM users WHERE username='ct04'")["id"]
    assigned = mgr.post(
        f"/housekeeping/leave/{leave_id}/assign",
        data={"incharge_id": str(cover_id)},
        headers={"HX-Request": "true"},
    )
    assert assigned.status_code == 200
    assignment = db.query_one(
        "SELECT id FROM incharge_assignments WHERE leave_id=? AND response='pending'", (leave_id,)
    )
    db.close()

    inbox = cover.get("/housekeeping/leave/inbox", headers={"HX-Request": "true"})
    assert assignment["id"] in inbox.text  # respond URL embeds the UUID
    responded = cover.post(
        f"/housekeeping/leave/assignments/{assignment['id']}/respond",
        data={"response": "accept"},
        headers={"HX-Request": "true"},
    )
    assert responded.status_code == 200

    decided = admin.post(
        f"/housekeeping/leave/{leave_id}/decide",
        data={"decision": "approve"},
        headers={"HX-Request": "true"},
    )
    assert decided.status_code == 200
    audit = admin.get(f"/api/housekeeping/leave/{leave_id}/audit").json()
    assert audit["state"] == "approved"
    assert [t["to_state"] for t in audit["transitions"]] == [
        "awaiting", "pending_accept", "pending_admin", "approved",
    ]

    bell = worker.get("/housekeeping/leave/notifications", headers={"HX-Request": "true"})
    assert "approved" in bell.text


def test_error_fragments_carry_codes(seeded):
    app, _, manifest = seeded
    client = TestClient(app, follow_redirects=False)
    login(client, "sup01")
    response = client.post(
        f"/housekeeping/tasks/{manifest['record_id']}/flag",
        data={"reason": ""},
        headers={"HX-Request": "true"},
    )
    assert response.status_code == 400
    assert 'data-error-code="empty-reason"' in response.text
