"""Deterministic desk-scale seed datasets.

Profiles: small (10 workers, 8 templates, 14 days, 50 items) and demo (3x).
Everything flows from one fixed RNG seed and one fixed base date, so record
counts are identical across runs; a JSON manifest pins the ids and dates the
measurement harness points its operations at.
"""

from __future__ import annotations

import io
import json
import random
from datetime import date as date_type
from datetime import timedelta
from pathlib import Path

from PIL import Image, ImageDraw, ImageFilter

from .. import attendance, auth, inventory, leave, scheduling
from ..config import FIXTURES_DIR, Config
from ..db import Database
from ..errors import DomainError

RNG_SEED = 20260302
BASE_DATE = date_type(2026, 3, 2)  # a Monday
DEFAULT_PASSWORD = "campus123"

PROFILES = {
    "small": {"workers": 10, "template_copies": 1, "days": 14, "items": 50},
    "demo": {"workers": 30, "template_copies": 3, "days": 42, "items": 150},
}

FIRST_NAMES = [
    "Asha", "Binod", "Chetan", "Divya", "Eshan", "Farida", "Gopal", "Heena", "Ishan", "Jyoti",
    "Kiran", "Lata", "Mohan", "Nisha", "Omprakash", "Pooja", "Qadir", "Rekha", "Suresh", "Tara",
    "Uday", "Vimala", "Wasim", "Xitij", "Yamini", "Zubair", "Anil", "Bhavna", "Dinesh", "Gauri",
]
LAST_NAMES = ["Kumari", "Yadav", "Rao", "Nair", "Patel", "Sharma", "Das", "Gowda", "Thakor", "Solanki"]

ITEM_POOL = [
    ("cleaning", "Phenyl 5L", "litre"), ("cleaning", "Floor cleaner", "litre"),
    ("cleaning", "Broom soft", "piece"), ("cleaning", "Broom hard", "piece"),
    ("cleaning", "Mop head", "piece"), ("cleaning", "Mop stick", "piece"),
    ("cleaning", "Dustpan", "piece"), ("cleaning", "Garbage bag 60L", "packet"),
    ("cleaning", "Toilet brush", "piece"), ("cleaning", "Acid bottle", "litre"),
    ("safety", "Rubber gloves", "pair"), ("safety", "Face mask", "box"),
    ("safety", "Gum boots", "pair"), ("safety", "Raincoat", "piece"),
    ("hardware", "Bucket 15L", "piece"), ("hardware", "Mug", "piece"),
    ("hardware", "Wheelbarrow tyre", "piece"), ("hardware", "Rope 10m", "piece"),
    ("paper", "Tissue roll", "roll"), ("paper", "Hand towel", "packet"),
    ("chemical", "Bleach powder", "kg"), ("chemical", "Naphthalene balls", "kg"),
    ("chemical", "Air freshener", "piece"), ("garden", "Hose pipe 20m", "piece"),
    ("garden", "Pruning shears", "piece"),
]


def synth_photo(rng: random.Random, width: int, height: int, quality: int) -> bytes:
    """PIL-only photographic-ish JPEG for seeded completion evidence."""
    img = Image.new("RGB", (width, height), tuple(rng.randrange(60, 190) for _ in range(3)))
    draw = ImageDraw.Draw(img)
    for _ in range(16):
        x0, y0 = rng.randrange(width), rng.randrange(height)
        x1 = min(width, x0 + rng.randrange(12, max(13, width // 2)))
        y1 = min(height, y0 + rng.randrange(12, max(13, height // 2)))
        color = tuple(rng.randrange(0, 256) for _ in range(3))
        if rng.random() < 0.5:
            draw.ellipse([x0, y0, x1, y1], fill=color)
        else:
            draw.rectangle([x0, y0, x1, y1], fill=color)
    img = img.filter(ImageFilter.GaussianBlur(2))
    buf = io.BytesIO()
    img.save(buf, "JPEG", quality=quality)
    return buf.getvalue()


def manifest_path(cfg: Config) -> Path:
    return Path(cfg.database_path).with_suffix(".manifest.json")


def _counts(db: Database) -> dict:
    tables = [
        "users", "area_types", "schedule_templates", "daily_records", "worker_assignments",
        "attendance_records", "leave_requests", "leave_transitions", "incharge_assignments",
        "notifications", "items", "stock_movements", "purchase_requests", "photo_assets",
    ]
    return {t: db.query_one(f"SELECT count(*) AS n FROM {t}")["n"] for t in tables}


def seed(cfg: Config, profile: str = "small", force: bool = False) -> dict:
    if profile not in PROFILES:
        raise DomainError(f"unknown profile: {profile}", code="unknown-profile")
    spec = PROFILES[profile]
    rng = random.Random(RNG_SEED)

    db = Database(cfg.database_path, synchronous=cfg.sqlite_synchronous)
    db.init_schema()
    if not db.is_empty():
        if not force:
            raise DomainError("storage is not empty; pass force to reset", code="storage-not-empty")
        db.reset_schema()

    # accounts
    def account(username, role, display):
        uid = auth.create_account(db, cfg, username, DEFAULT_PASSWORD, role, display)
        return db.query_one("SELECT * FROM users WHERE id=?", (uid,))

    admin = account("admin", "admin", "Campus Admin")
    inv_mgr = account("inv_mgr", "inventory_manager", "Inventory Manager")
    hk_mgr = account("hk_mgr", "housekeeping_manager", "Housekeeping Manager")
    supervisors = [account(f"sup{i+1:02d}", "supervisor", f"Supervisor {i + 1}") for i in range(2)]
    workers = []
    for i in range(spec["workers"]):
        name = f"{FIRST_NAMES[i % len(FIRST_NAMES)]} {LAST_NAMES[i % len(LAST_NAMES)]}"
        workers.append(account(f"ct{i+1:02d}", "caretaker", name))

    # registries
    scheduling.load_area_fixture(db, str(FIXTURES_DIR / "area_types.txt"))
    scheduling.load_template_fixture(db, str(FIXTURES_DIR / "schedule_templates.txt"))
    if spec["template_copies"] > 1:
        base = db.query("SELECT * FROM schedule_templates ORDER BY id")
        for copy in range(2, spec["template_copies"] + 1):
            for t in base:
                scheduling.create_template(
                    db,
                    f"{t['name']} ({chr(64 + copy)})",
                    t["area_code"],
                    t["frequency"],
                    t["window_start"],
                    t["window_end"],
                    worker_tags=set(t["worker_tags"].split(",")) - {""},
                    requires_photo=bool(t["requires_photo"]),
                )

    dates = [(BASE_DATE + timedelta(days=i)).isoformat() for i in range(spec["days"])]
    measure_date = dates[9]  # a Wednesday inside every profile's range
    sup_pool = supervisors + [hk_mgr]

    def assign(record, n_workers=1):
        pool = rng.sample(workers, n_workers)
        scheduling.assign_workers(db, cfg, record["id"], [w["id"] for w in pool], rng.choice(sup_pool))
        return pool

    def complete(record, assigned, with_photo):
        photo = None
        if with_photo or record["requires_photo"]:
            main = synth_photo(rng, 640, 480, 85)
            thumb = synth_photo(rng, 240, 180, 70)
            photo = (main, thumb, round(len(main) * rng.uniform(8.0, 15.0)))
        gps = (23.21 + rng.uniform(-0.01, 0.01), 72.68 + rng.uniform(-0.01, 0.01))
        scheduling.complete_task(db, cfg, record["id"], rng.choice(assigned), photo, gps)

    measure_record_id = None
    for d in dates:
        records = scheduling.instantiate_daily_records(db, d)
        for idx, record in enumerate(records):
            multi = record["multi_worker_enabled"] and rng.random() < 0.8
            n_workers = rng.randint(2, 4) if multi else 1
            if d == measure_date:
                # fixed mix on the measured date: photos in the gallery, one
                # assigned card, the rest pending
                if idx < 4:
                    assigned = assign(record, n_workers)
                    complete(record, assigned, with_photo=True)
                    if measure_record_id is None:
                        measure_record_id = record["id"]
                elif idx == 4:
                    assign(record, n_workers)
                continue
            if d > measure_date:
                continue  # future days stay pending
            roll = rng.random()
            if roll < 0.15:
                continue
            assigned = assign(record, n_workers)
            if roll < 0.35:
                continue
            complete(record, assigned, with_photo=rng.random() < 0.7)
            if roll > 0.90:
                scheduling.flag_record(
                    db, cfg, record["id"],
                    rng.choice(["not cleaned properly", "photo does not match", "area missed"]),
                    rng.choice(sup_pool),
                )

    # attendance: every past date gets both slots; older slots are submitted
    for d in dates:
        if d > measure_date:
            continue
        for slot in attendance.SLOTS:
            for w in workers:
                status = rng.choices(
                    ["present", "absent", "late", "leave"], weights=[84, 6, 6, 4]
                )[0]
                attendance.record_attendance(db, cfg, w["id"], d, slot, status, rng.choice(sup_pool))
            if d < measure_date:
                attendance.submit_attendance(db, d, slot, rng.choice(sup_pool))

    # leave requests pinned at each workflow station
    def leave_at(requester, incharge, state):
        start = (BASE_DATE + timedelta(days=rng.randint(10, 20))).isoformat()
        end = (date_type.fromisoformat(start) + timedelta(days=rng.randint(0, 3))).isoformat()
        req = leave.create_leave_request(
            db, cfg, requester, start, end,
            rng.choice(["family function", "medical", "village visit", "festival"]),
        )
        if state == "awaiting":
            return req
        assignment = leave.assign_incharge(db, cfg, req["id"], incharge["id"], hk_mgr)
        if state == "pending_accept":
            return req
        if state == "reassign_required":
            leave.incharge_respond(db, cfg, assignment["id"], False, incharge)
            return req
        leave.incharge_respond(db, cfg, assignment["id"], True, incharge)
        if state == "pending_admin":
            return req
        leave.admin_decide(db, cfg, req["id"], True, admin)
        return req

    for i, state in enumerate(
        ["awaiting", "pending_accept", "pending_admin", "approved", "reassign_required"]
    ):
        leave_at(workers[i % len(workers)], workers[(i + 1) % len(workers)], state)

    # inventory
    area_codes = [r["code"] for r in db.query("SELECT code FROM area_types ORDER BY code")]
    item_ids = []
    for i in range(spec["items"]):
        category, name, unit = ITEM_POOL[i % len(ITEM_POOL)]
        suffix = "" if i < len(ITEM_POOL) else f" #{i // len(ITEM_POOL) + 1}"
        item_ids.append(inventory.create_item(db, category, f"{name}{suffix}", unit))
    for item_id in item_ids:
        inventory.add_stock(db, cfg, item_id, rng.randint(20, 200), inv_mgr)
        for _ in range(rng.randint(0, 4)):
            try:
                inventory.issue_item(
                    db, cfg, item_id, rng.randint(1, 8), rng.choice(area_codes),
                    rng.choice(["Hostel A", "Hostel B", "Main building", ""]), inv_mgr,
                )
            except DomainError:
                pass
    inventory.create_purchase_request(db, cfg, "Mop heads", 40, "monthly restock", inv_mgr)
    ordered = inventory.create_purchase_request(db, cfg, "Garbage bags 60L", 100, "stock low", inv_mgr)
    inventory.advance_purchase_request(db, ordered["id"], "ordered", inv_mgr)
    cancelled = inventory.create_purchase_request(db, cfg, "Vacuum cleaner", 1, "trial", inv_mgr)
    inventory.advance_purchase_request(db, cancelled["id"], "cancelled", inv_mgr)

    manifest = {
        "profile": profile,
        "base_date": BASE_DATE.isoformat(),
        "dates": dates,
        "measure_date": measure_date,
        "record_id": measure_record_id,
        "item_id": item_ids[0],
        "usernames": {
            "admin": admin["username"],
            "inventory_manager": inv_mgr["username"],
            "housekeeping_manager": hk_mgr["username"],
        },
        "password": DEFAULT_PASSWORD,
        "counts": _counts(db),
    }
    manifest_path(cfg).write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    db.close()
    return manifest
