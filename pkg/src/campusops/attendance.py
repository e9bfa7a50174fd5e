"""Half-day attendance with a one-way submission lock.

Submission is batch-level per (date, slot); a submitted record never changes
again, enforced inside the same transaction that writes it.
"""

from __future__ import annotations

import sqlite3

from .auth import require_role
from .config import Config, ts
from .db import Database
from .errors import DomainError
from .scheduling import parse_date

SLOTS = ("first_half", "second_half")
SLOT_BOUNDS = {"first_half": ("08:00", "13:00"), "second_half": ("13:00", "17:00")}
STATUSES = ("present", "absent", "late", "leave")

RECORD_ROLES = ("supervisor", "housekeeping_manager", "admin")


def _validate_key(date: str, slot: str) -> None:
    parse_date(date)
    if slot not in SLOTS:
        raise DomainError(f"unknown slot: {slot}", code="invalid-slot")


def record_attendance(
    db: Database, cfg: Config, worker_id: int, date: str, slot: str, status: str, actor
) -> sqlite3.Row:
    require_role(actor, *RECORD_ROLES)
    _validate_key(date, slot)
    if status not in STATUSES:
        raise DomainError(f"unknown status: {status}", code="invalid-status")
    worker = db.query_one("SELECT id, role FROM users WHERE id=?", (worker_id,))
    if worker is None or worker["role"] != "caretaker":
        raise DomainError("attendance is recorded for caretakers", code="worker-role-violation")

    with db.write_tx():
        cur = db.execute(
            "INSERT INTO attendance_records (worker_id, date, slot, status, recorded_by, recorded_at)"
            " VALUES (?, ?, ?, ?, ?, ?)"
            " ON CONFLICT (worker_id, date, slot) DO UPDATE SET"
            " status=excluded.status, recorded_by=excluded.recorded_by, recorded_at=excluded.recorded_at"
            " WHERE attendance_records.is_submitted=0",
            (worker_id, date, slot, status, actor["id"], ts(cfg.now())),
        )
        if cur.rowcount != 1:
            raise DomainError("record already submitted", code="already-submitted")
    return db.query_one(
        "SELECT * FROM attendance_records WHERE worker_id=? AND date=? AND slot=?",
        (worker_id, date, slot),
    )


def submit_attendance(db: Database, date: str, slot: str, actor) -> int:
    """Lock every record for (date, slot); returns how many were newly locked. Idempotent."""
    require_role(actor, *RECORD_ROLES)
    _validate_key(date, slot)
    with db.write_tx():
        cur = db.execute(
            "UPDATE attendance_records SET is_submitted=1 WHERE date=? AND slot=? AND is_submitted=0",
            (date, slot),
        )
    return cur.rowcount


def attendance_sheet(db: Database, date: str, slot: str) -> list[sqlite3.Row]:
    """One row per active caretaker with a recorded status or NULL, ordered by display_name."""
    _validate_key(date, slot)
    return db.query(
        "SELECT u.id AS worker_id, u.display_name, u.username,"
        " a.status, a.is_submitted, a.recorded_at"
        " FROM users u"
        " LEFT JOIN attendance_records a"
        "  ON a.worker_id = u.id AND a.date = ? AND a.slot = ?"
        " WHERE u.role='caretaker' AND u.active=1"
        " ORDER BY u.display_name",
        (date, slot),
    )


def slot_submitted(db: Database, date: str, slot: str) -> bool:
    """A slot counts as submitted once any of its records carry the lock."""
    row = db.query_one(
        "SELECT 1 FROM attendance_records WHERE date=? AND slot=? AND is_submitted=1 LIMIT 1",
        (date, slot),
    )
    return row is not None
