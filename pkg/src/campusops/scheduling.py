"""Housekeeping scheduling: reusable templates, per-date daily records,
worker assignment, completion evidence, and supervisor flagging.

Record status forms the one-way chain pending -> assigned -> completed ->
flagged; every transition is a compare-and-set on the stored status so
concurrent operations cannot skip or repeat an edge.
"""

from __future__ import annotations

import sqlite3
from datetime import date as date_type

from . import photos
from .auth import require_role
from .config import Config, ts
from .db import Database
from .errors import DomainError, ForbiddenRole, NotFound, WrongStatus

FREQUENCIES = ("daily", "saturday_special", "sunday_extra")

ASSIGN_ROLES = ("supervisor", "housekeeping_manager", "admin")
FLAG_ROLES = ("supervisor", "housekeeping_manager", "admin")


def parse_date(value: str) -> date_type:
    try:
        return date_type.fromisoformat(value)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"bad date: {value!r}", code="invalid-date") from exc


def frequency_matches(frequency: str, day: date_type) -> bool:
    # saturday/sunday specials run only on their day, never in addition to it
    if frequency == "daily":
        return True
    if frequency == "saturday_special":
        return day.weekday() == 5
    if frequency == "sunday_extra":
        return day.weekday() == 6
    raise ValueError(f"unknown frequency: {frequency}")


def register_area_type(db: Database, code: str, display_name: str, multi_worker_enabled: bool = False) -> None:
    db.execute(
        "INSERT INTO area_types (code, display_name, multi_worker_enabled) VALUES (?, ?, ?)",
        (code, display_name, int(multi_worker_enabled)),
    )


def load_area_fixture(db: Database, path: str) -> int:
    """Seed the area registry from the pipe-delimited fixture: code|display_name|multi_worker."""
    count = 0
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            code, display_name, multi = (p.strip() for p in line.split("|"))
            register_area_type(db, code, display_name, multi == "1")
            count += 1
    return count


def create_template(
    db: Database,
    name: str,
    area_code: str,
    frequency: str,
    window_start: str,
    window_end: str,
    worker_tags: set[str] | None = None,
    requires_photo: bool = False,
    active: bool = True,
) -> int:
    if frequency not in FREQUENCIES:
        raise DomainError(f"unknown frequency: {frequency}", code="invalid-frequency")
    if not window_start < window_end:
        raise DomainError("window_start must precede window_end", code="invalid-window")
    if db.query_one("SELECT 1 FROM area_types WHERE code=?", (area_code,)) is None:
        raise NotFound(f"unknown area: {area_code}")
    tags = ",".join(sorted(worker_tags or ()))
    cur = db.execute(
        "INSERT INTO schedule_templates"
        " (name, area_code, frequency, window_start, window_end, worker_tags, requires_photo, active)"
        " VALUES (?, ?, ?, ?, ?, ?, ?, ?)",
        (name, area_code, frequency, window_start, window_end, tags, int(requires_photo), int(active)),
    )
    return cur.lastrowid


def load_template_fixture(db: Database, path: str) -> int:
    """Seed templates from the delimited fixture, one per line:
    name|area_code|frequency|window_start|window_end|requires_photo|tags
    """
    count = 0
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            name, area, freq, start, end, photo, tags = (p.strip() for p in line.split("|"))
            create_template(
                db,
                name,
                area,
                freq,
                start,
                end,
                worker_tags={t for t in tags.split(",") if t},
                requires_photo=photo == "1",
            )
            count += 1
    return count


def deactivate_template(db: Database, template_id: int) -> None:
    with db.write_tx():
        db.execute("UPDATE schedule_templates SET active=0 WHERE id=?", (template_id,))


def instantiate_daily_records(db: Database, date: str) -> list[sqlite3.Row]:
    """Materialize a pending record for every active template matching the date.

    Idempotent: the (template, date) unique constraint makes re-invocation a
    no-op, including under concurrent lazy materialization.
    """
    day = parse_date(date)
    weekday = day.weekday()
    freqs = ["daily"]
    if weekday == 5:
        freqs.append("saturday_special")
    elif weekday == 6:
        freqs.append("sunday_extra")
    placeholders = ",".join("?" * len(freqs))
    db.execute(
        "INSERT OR IGNORE INTO daily_records (template_id, date)"
        f" SELECT id, ? FROM schedule_templates WHERE active=1 AND frequency IN ({placeholders})",
        (date, *freqs),
    )
    return records_for_date(db, date)


def records_for_date(db: Database, date: str, area_code: str | None = None) -> list[sqlite3.Row]:
    """Joined read model: one row per record with template, area and worker names."""
    sql = (
        "SELECT r.*, t.name AS template_name, t.frequency, t.window_start, t.window_end,"
        " t.requires_photo, t.area_code, a.display_name AS area_name, a.multi_worker_enabled,"
        " (SELECT group_concat(u.display_name, ', ') FROM worker_assignments w"
        "   JOIN users u ON u.id = w.user_id WHERE w.record_id = r.id"
        "   ORDER BY w.position) AS worker_names"
        " FROM daily_records r"
        " JOIN schedule_templates t ON t.id = r.template_id"
        " JOIN area_types a ON a.code = t.area_code"
        " WHERE r.date = ?"
    )
    params: list = [date]
    if area_code:
        sql += " AND t.area_code = ?"
        params.append(area_code)
    sql += " ORDER BY t.window_start, t.name"
    return db.query(sql, params)


def get_record(db: Database, record_id: int) -> sqlite3.Row:
    row = db.query_one(
        "SELECT r.*, t.name AS template_name, t.frequency, t.window_start, t.window_end,"
        " t.requires_photo, t.area_code, a.display_name AS area_name, a.multi_worker_enabled,"
        " (SELECT group_concat(u.display_name, ', ') FROM worker_assignments w"
        "   JOIN users u ON u.id = w.user_id WHERE w.record_id = r.id"
        "   ORDER BY w.position) AS worker_names"
        " FROM daily_records r"
        " JOIN schedule_templates t ON t.id = r.template_id"
        " JOIN area_types a ON a.code = t.area_code WHERE r.id = ?",
        (record_id,),
    )
    if row is None:
        raise NotFound(f"no daily record {record_id}")
    return row


def assigned_worker_ids(db: Database, record_id: int) -> list[int]:
    return [
        r["user_id"]
        for r in db.query(
            "SELECT user_id FROM worker_assignments WHERE record_id=? ORDER BY position", (record_id,)
        )
    ]


def assign_workers(db: Database, cfg: Config, record_id: int, worker_ids: list[int], actor) -> list[int]:
    require_role(actor, *ASSIGN_ROLES)
    if not 1 <= len(worker_ids) <= 4:
        raise DomainError("between one and four workers", code="invalid-workers")
    if len(set(worker_ids)) != len(worker_ids):
        raise DomainError("duplicate workers in assignment", code="invalid-workers")

    record = get_record(db, record_id)
    if len(worker_ids) > 1 and not record["multi_worker_enabled"]:
        raise DomainError(
            f"area {record['area_code']} does not allow multi-worker assignment",
            code="multi-worker-not-allowed",
        )
    qmarks = ",".join("?" * len(worker_ids))
    caretakers = db.query(
        f"SELECT id FROM users WHERE id IN ({qmarks}) AND role='caretaker' AND active=1", worker_ids
    )
    if len(caretakers) != len(worker_ids):
        raise DomainError("all assigned workers must be active caretakers", code="worker-role-violation")

    with db.write_tx():
        cur = db.execute(
            "UPDATE daily_records SET status='assigned', assigned_at=? WHERE id=? AND status='pending'",
            (ts(cfg.now()), record_id),
        )
        if cur.rowcount != 1:
            raise WrongStatus("record is not pending")
        for position, worker_id in enumerate(worker_ids):
            db.execute(
                "INSERT INTO worker_assignments (record_id, user_id, position) VALUES (?, ?, ?)",
                (record_id, worker_id, position),
            )
    return worker_ids


def complete_task(
    db: Database,
    cfg: Config,
    record_id: int,
    actor,
    photo_upload: tuple[bytes, bytes, int] | None = None,
    gps: tuple[float, float] | None = None,
) -> sqlite3.Row:
    """Mark an assigned record completed, ingesting photo evidence when supplied.

    photo_upload is the (main_jpeg, thumb_jpeg, original_size) triple from the
    multipart form; the photo pipeline stores it before the status flips.
    """
    record = get_record(db, record_id)
    if actor["role"] == "caretaker":
        if actor["id"] not in assigned_worker_ids(db, record_id):
            raise ForbiddenRole("only assigned workers or supervisory staff may complete")
    elif actor["role"] not in ("supervisor", "housekeeping_manager", "admin"):
        raise ForbiddenRole("only assigned workers or supervisory staff may complete")

    if record["requires_photo"] and photo_upload is None:
        raise DomainError("this task requires photo evidence", code="photo-required")
    if gps is not None:
        lat, lng = gps
        if not (-90.0 <= lat <= 90.0 and -180.0 <= lng <= 180.0):
            raise DomainError(f"gps out of range: {lat}, {lng}", code="gps-out-of-range")

    photo_id = None
    if photo_upload is not None:
        main_bytes, thumb_bytes, original_size = photo_upload
        photo_id = photos.ingest_photo(db, cfg, main_bytes, thumb_bytes, original_size)["id"]

    with db.write_tx():
        cur = db.execute(
            "UPDATE daily_records SET status='completed', completed_at=?, photo_id=?,"
            " gps_lat=?, gps_lng=? WHERE id=? AND status='assigned'",
            (
                ts(cfg.now()),
                photo_id,
                gps[0] if gps else None,
                gps[1] if gps else None,
                record_id,
            ),
        )
        if cur.rowcount != 1:
            raise WrongStatus("record is not assigned")
    return get_record(db, record_id)


def flag_record(db: Database, cfg: Config, record_id: int, reason: str, actor) -> sqlite3.Row:
    require_role(actor, *FLAG_ROLES)
    if not (reason or "").strip():
        raise DomainError("flag reason must be non-empty", code="empty-reason")
    get_record(db, record_id)
    with db.write_tx():
        cur = db.execute(
            "UPDATE daily_records SET status='flagged', flag_reason=?, flagged_by=?"
            " WHERE id=? AND status='completed'",
            (reason, actor["id"], record_id),
        )
        if cur.rowcount != 1:
            raise WrongStatus("only completed records can be flagged")
    return get_record(db, record_id)


def week_overview(db: Database, dates: list[str]) -> list[sqlite3.Row]:
    """Template × date status cells for the dashboard week grid (existing records only)."""
    qmarks = ",".join("?" * len(dates))
    return db.query(
        "SELECT r.id, r.date, r.status, r.template_id, t.name AS template_name"
        f" FROM daily_records r JOIN schedule_templates t ON t.id = r.template_id"
        f" WHERE r.date IN ({qmarks}) ORDER BY t.name, r.date",
        dates,
    )


def area_status_summary(db: Database, date: str) -> list[sqlite3.Row]:
    return db.query(
        "SELECT a.code, a.display_name,"
        " count(r.id) AS total,"
        " sum(CASE WHEN r.status='pending' THEN 1 ELSE 0 END) AS pending,"
        " sum(CASE WHEN r.status='assigned' THEN 1 ELSE 0 END) AS assigned,"
        " sum(CASE WHEN r.status IN ('completed','flagged') THEN 1 ELSE 0 END) AS done"
        " FROM area_types a"
        " LEFT JOIN schedule_templates t ON t.area_code = a.code"
        " LEFT JOIN daily_records r ON r.template_id = t.id AND r.date = ?"
        " GROUP BY a.code ORDER BY a.display_name",
        (date,),
    )


def completed_with_photos(db: Database, date: str) -> list[sqlite3.Row]:
    return db.query(
        "SELECT r.id, r.completed_at, r.gps_lat, r.gps_lng, r.photo_id,"
        " t.name AS template_name, p.thumbnail_size, p.compression_ratio"
        " FROM daily_records r"
        " JOIN schedule_templates t ON t.id = r.template_id"
        " JOIN photo_assets p ON p.id = r.photo_id"
        " WHERE r.date=? AND r.photo_id IS NOT NULL ORDER BY r.completed_at",
        (date,),
    )
