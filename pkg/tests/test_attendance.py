import random
import threading

import pytest

from campusops import attendance
from campusops.db import Database
from campusops.errors import DomainError, ForbiddenRole

DATE = "2026-03-03"


def test_slot_bounds_fixed():
    assert attendance.SLOT_BOUNDS == {
        "first_half": ("08:00", "13:00"),
        "second_half": ("13:00", "17:00"),
    }
    assert attendance.SLOTS == ("first_half", "second_half")


def test_record_then_overwrite_before_submit(db, cfg, users):
    w = users["ct1"]["id"]
    attendance.record_attendance(db, cfg, w, DATE, "first_half", "present", users["sup1"])
    row = attendance.record_attendance(db, cfg, w, DATE, "first_half", "late", users["sup1"])
    assert row["status"] == "late"
    assert db.query_one("SELECT count(*) AS n FROM attendance_records")["n"] == 1


def test_submit_locks_and_is_idempotent(db, cfg, users):
    for name in ("ct1", "ct2", "ct3", "ct4", "ct5"):
        attendance.record_attendance(db, cfg, users[name]["id"], DATE, "first_half", "present", users["sup1"])
    assert attendance.submit_attendance(db, DATE, "first_half", users["sup1"]) == 5
    assert attendance.submit_attendance(db, DATE, "first_half", users["sup1"]) == 0
    with pytest.raises(DomainError) as err:
        attendance.record_attendance(db, cfg, users["ct1"]["id"], DATE, "first_half", "absent", users["sup1"])
    assert err.value.code == "already-submitted"
    row = db.query_one(
        "SELECT status FROM attendance_records WHERE worker_id=? AND date=? AND slot='first_half'",
        (users["ct1"]["id"], DATE),
    )
    assert row["status"] == "present"


def test_submit_empty_slot_is_zero(db, cfg, users):
    assert attendance.submit_attendance(db, DATE, "second_half", users["hk_mgr"]) == 0


def test_forbidden_roles(db, cfg, users):
    with pytest.raises(ForbiddenRole):
        attendance.record_attendance(db, cfg, users["ct2"]["id"], DATE, "first_half", "present", users["ct1"])
    with pytest.raises(ForbiddenRole):
        attendance.submit_attendance(db, DATE, "first_half", users["inv_mgr"])


def test_worker_must_be_caretaker(db, cfg, users):
    with pytest.raises(DomainError) as err:
        attendance.record_attendance(db, cfg, users["sup1"]["id"], DATE, "first_half", "present", users["hk_mgr"])
    assert err.value.code == "worker-role-violation"


def test_sheet_rows_and_ordering(db, cfg, users):
    # record 3 of the 5 caretakers, in shuffled insert order
    for name in ("ct4", "ct1", "ct3"):
        attendance.record_attendance(db, cfg, users[name]["id"], DATE, "first_half", "present", users["sup1"])
    sheet = attendance.attendance_sheet(db, DATE, "first_half")
    assert len(sheet) == 5
    assert [r["display_name"] for r in sheet] == sorted(r["display_name"] for r in sheet)
    unrecorded = [r for r in sheet if r["status"] is None]
    assert len(unrecorded) == 2


def test_sheet_empty_without_caretakers(db, cfg, users):
    for name in ("ct1", "ct2", "ct3", "ct4", "ct5"):
        db.execute("UPDATE users SET active=0 WHERE id=?", (users[name]["id"],))
    assert attendance.attendance_sheet(db, DATE, "first_half") == []


def test_status_domain_closed_scan(db, cfg, users):
    attendance.record_attendance(db, cfg, users["ct1"]["id"], DATE, "first_half", "leave", users["sup1"])
    with pytest.raises(DomainError):
        attendance.record_attendance(db, cfg, users["ct2"]["id"], DATE, "first_half", "holiday", users["sup1"])
    rows = db.query(
        "SELECT count(*) AS n FROM attendance_records"
        " WHERE status NOT IN ('present','absent','late','leave')"
    )
    assert rows[0]["n"] == 0


def test_submitted_records_immutable_under_interleaving(db, cfg, users):
    """Random record/submit interleavings: a record observed submitted never changes again."""
    rng = random.Random(7)
    workers = [users[n]["id"] for n in ("ct1", "ct2", "ct3", "ct4", "ct5")]
    frozen = {}
    for _ in range(300):
        action = rng.random()
        if action < 0.7:
            w = rng.choice(workers)
            status = rng.choice(attendance.STATUSES)
            try:
                attendance.record_attendance(db, cfg, w, DATE, "first_half", status, users["sup1"])
            except DomainError:
                pass
        else:
            attendance.submit_attendance(db, DATE, "first_half", users["sup1"])
        for row in db.query("SELECT * FROM attendance_records WHERE is_submitted=1"):
            key = (row["worker_id"], row["date"], row["slot"])
            if key in frozen:
                assert tuple(row) == frozen[key], "submitted record mutated"
            else:
                frozen[key] = tuple(row)


def test_concurrent_record_single_key_keeps_uniqueness(cfg, users):
    db_path = cfg.database_path
    sup = dict(users["sup1"])
    worker = users["ct1"]["id"]
    errors = []

    def hammer(tid):
        local = Database(db_path, synchronous="OFF")
        rng = random.Random(tid)
        try:
            for _ in range(30):
                try:
                    attendance.record_attendance(
                        local, cfg, worker, DATE, "first_half",
                        rng.choice(attendance.STATUSES), sup,
                    )
                except DomainError:
                    pass
                if rng.random() < 0.2:
                    attendance.submit_attendance(local, DATE, "first_half", sup)
        except Exception as exc:  # pragma: no cover
            errors.append(exc)
        finally:
            local.close()

    threads = [threading.Thread(target=hammer, args=(t,)) for t in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert errors == []
    check = Database(db_path, synchronous="OFF")
    rows = check.query(
        "SELECT worker_id, date, slot, count(*) AS n FROM attendance_records GROUP BY 1,2,3 HAVING n > 1"
    )
    assert rows == []
    assert check.query_one("SELECT count(*) AS n FROM attendance_records")["n"] == 1
    check.close()
