import random
import uuid

import pytest

from campusops import leave
from campusops.errors import DomainError, NotFound, WrongState

START, END = "2026-03-10", "2026-03-12"


def new_leave(db, cfg, users, requester="ct1"):
    return leave.create_leave_request(db, cfg, users[requester], START, END, "family function")


def drive_to(db, cfg, users, state):
    """Walk a fresh request along legal edges to the target state."""
    row = new_leave(db, cfg, users)
    if state == "awaiting":
        return row
    assignment = leave.assign_incharge(db, cfg, row["id"], users["ct2"]["id"], users["hk_mgr"])
    if state == "pending_accept":
        return db.query_one("SELECT * FROM leave_requests WHERE id=?", (row["id"],))
    if state == "reassign_required":
        return leave.incharge_respond(db, cfg, assignment["id"], False, users["ct2"])
    row = leave.incharge_respond(db, cfg, assignment["id"], True, users["ct2"])
    if state == "pending_admin":
        return row
    assert state == "approved"
    return leave.admin_decide(db, cfg, row["id"], True, users["admin"])


def test_create_validations(db, cfg, users):
    row = new_leave(db, cfg, users)
    assert row["state"] == "awaiting"
    trail = leave.audit_trail(db, row["id"])
    assert len(trail) == 1
    assert trail[0]["from_state"] is None and trail[0]["to_state"] == "awaiting"
    with pytest.raises(DomainError) as err:
        leave.create_leave_request(db, cfg, users["ct1"], END, START, "x")
    assert err.value.code == "invalid-range"
    with pytest.raises(DomainError) as err:
        leave.create_leave_request(db, cfg, users["ct1"], START, END, "  ")
    assert err.value.code == "empty-reason"


def test_primary_sequence(db, cfg, users):
    row = new_leave(db, cfg, users)
    assignment = leave.assign_incharge(db, cfg, row["id"], users["ct2"]["id"], users["hk_mgr"])
    assert db.query_one("SELECT state FROM leave_requests WHERE id=?", (row["id"],))["state"] == "pending_accept"
    # incharge got notified
    notes = leave.list_notifications(db, users["ct2"])
    assert any(n["leave_id"] == row["id"] for n in notes)
    row = leave.incharge_respond(db, cfg, assignment["id"], True, users["ct2"])
    assert row["state"] == "pending_admin"
    row = leave.admin_decide(db, cfg, row["id"], True, users["admin"])
    assert row["state"] == "approved"
    assert leave.replay_state(leave.audit_trail(db, row["id"])) == "approved"


def test_decline_path_and_reassignment(db, cfg, users):
    row = new_leave(db, cfg, users)
    assignment = leave.assign_incharge(db, cfg, row["id"], users["ct2"]["id"], users["hk_mgr"])
    row = leave.incharge_respond(db, cfg, assignment["id"], False, users["ct2"])
    assert row["state"] == "reassign_required"
    # declined path re-enters pending_accept with a new incharge
    second = leave.assign_incharge(db, cfg, row["id"], users["ct3"]["id"], users["hk_mgr"])
    assert second["id"] != assignment["id"]
    assert db.query_one("SELECT state FROM leave_requests WHERE id=?", (row["id"],))["state"] == "pending_accept"


def test_admin_reject_goes_back_to_reassign(db, cfg, users):
    row = drive_to(db, cfg, users, "pending_admin")
    row = leave.admin_decide(db, cfg, row["id"], False, users["admin"])
    assert row["state"] == "reassign_required"


def test_assignment_guards(db, cfg, users):
    row = new_leave(db, cfg, users)
    with pytest.raises(DomainError) as err:
        leave.assign_incharge(db, cfg, row["id"], users["ct1"]["id"], users["hk_mgr"])
    assert err.value.code == "self-assignment"
    with pytest.raises(DomainError):
        leave.assign_incharge(db, cfg, row["id"], users["inv_mgr"]["id"], users["hk_mgr"])
    with pytest.raises(DomainError):
        leave.assign_incharge(db, cfg, row["id"], users["ct2"]["id"], users["sup1"])


def test_respond_guards(db, cfg, users):
    row = new_leave(db, cfg, users)
    assignment = leave.assign_incharge(db, cfg, row["id"], users["ct2"]["id"], users["hk_mgr"])
    with pytest.raises(DomainError) as err:
        leave.incharge_respond(db, cfg, assignment["id"], True, users["ct3"])
    assert err.value.code == "not-the-incharge"
    leave.incharge_respond(db, cfg, assignment["id"], True, users["ct2"])
    with pytest.raises(DomainError) as err:
        leave.incharge_respond(db, cfg, assignment["id"], False, users["ct2"])
    assert err.value.code == "already-responded"


EVENT_NAMES = ("assign", "accept", "decline", "approve", "reject")

# the complete edge set: (state, event) -> next state
EDGES = {
    ("awaiting", "assign"): "pending_accept",
    ("reassign_required", "assign"): "pending_accept",
    ("pending_accept", "accept"): "pending_admin",
    ("pending_accept", "decline"): "reassign_required",
    ("pending_admin", "approve"): "approved",
    ("pending_admin", "reject"): "reassign_required",
}


def fire_event(db, cfg, users, leave_id, event):
    if event == "assign":
        # pick an incharge who has not already declined coverage for this request
        used = {
            r["incharge_id"]
            for r in db.query("SELECT incharge_id FROM incharge_assignments WHERE leave_id=?", (leave_id,))
        }
        pool = [users[n]["id"] for n in ("ct2", "ct3", "ct4", "ct5") if users[n]["id"] not in used]
        return leave.assign_incharge(db, cfg, leave_id, pool[0], users["hk_mgr"])
    if event in ("accept", "decline"):
        assignment = db.query_one(
            "SELECT * FROM incharge_assignments WHERE leave_id=? AND response='pending'", (leave_id,)
        )
        if assignment is None:
            raise WrongState("no pending assignment")
        actor = db.query_one("SELECT * FROM users WHERE id=?", (assignment["incharge_id"],))
        return leave.incharge_respond(db, cfg, assignment["id"], event == "accept", actor)
    return leave.admin_decide(db, cfg, leave_id, event == "approve", users["admin"])


def leave_snapshot(db, leave_id):
    row = tuple(db.query_one("SELECT * FROM leave_requests WHERE id=?", (leave_id,)))
    trail = [tuple(t) for t in db.query("SELECT * FROM leave_transitions WHERE leave_id=?", (leave_id,))]
    return row, trail


def test_transition_totality_exhaustive(db, cfg, users):
    """All 5 states x 5 events: exactly the specified edges succeed, the rest reject unchanged."""
    for state in leave.STATES:
        for event in EVENT_NAMES:
            row = drive_to(db, cfg, users, state)
            before = leave_snapshot(db, row["id"])
            expected = EDGES.get((state, event))
            if expected is None:
                with pytest.raises(DomainError):
                    fire_event(db, cfg, users, row["id"], event)
                assert leave_snapshot(db, row["id"]) == before, f"{state}/{event} mutated on reject"
            else:
                fire_event(db, cfg, users, row["id"], event)
                after = db.query_one("SELECT state FROM leave_requests WHERE id=?", (row["id"],))
                assert after["state"] == expected, f"{state}/{event}"


def random_legal_walk(db, cfg, users, rng, max_steps=8):
    row = new_leave(db, cfg, users, requester="ct1")
    state = "awaiting"
    for _ in range(rng.randrange(max_steps)):
        options = [e for (s, e) in EDGES if s == state]
        if not options:
            break
        event = rng.choice(options)
        fire_event(db, cfg, users, row["id"], event)
        state = EDGES[(state, event)]
    return row["id"], state


def test_audit_replay_reproduces_state_randomized(db, cfg, users):
    rng = random.Random(42)
    for _ in range(60):
        leave_id, state = random_legal_walk(db, cfg, users, rng)
        stored = db.query_one("SELECT state FROM leave_requests WHERE id=?", (leave_id,))["state"]
        assert stored == state
        assert leave.replay_state(leave.audit_trail(db, leave_id)) == stored


def test_approved_is_absorbing_under_fuzzing(db, cfg, users):
    rng = random.Random(9)
    row = drive_to(db, cfg, users, "approved")
    before = leave_snapshot(db, row["id"])
    for _ in range(50):
        with pytest.raises(DomainError):
            fire_event(db, cfg, users, row["id"], rng.choice(EVENT_NAMES))
        assert leave_snapshot(db, row["id"]) == before


def test_every_transition_notifies(db, cfg, users):
    row = new_leave(db, cfg, users)
    transitions = db.query_one("SELECT count(*) AS n FROM leave_transitions")["n"]
    notes = db.query_one("SELECT count(*) AS n FROM notifications")["n"]
    assert transitions == 1 and notes >= 1
    assignment = leave.assign_incharge(db, cfg, row["id"], users["ct2"]["id"], users["hk_mgr"])
    leave.incharge_respond(db, cfg, assignment["id"], True, users["ct2"])
    leave.admin_decide(db, cfg, row["id"], True, users["admin"])
    per_transition = db.query(
        "SELECT t.id, (SELECT count(*) FROM notifications n WHERE n.leave_id = t.leave_id"
        "  AND n.created_at >= t.created_at) AS notes"
        " FROM leave_transitions t WHERE t.leave_id=?",
        (row["id"],),
    )
    assert all(r["notes"] >= 1 for r in per_transition)


def test_requester_notified_along_approve_path(db, cfg, users):
    row = drive_to(db, cfg, users, "approved")
    mine = [n for n in leave.list_notifications(db, users["ct1"]) if n["leave_id"] == row["id"]]
    assert len(mine) >= 2  # incharge accepted + admin approved


def test_notifications_read_flow(db, cfg, users):
    drive_to(db, cfg, users, "approved")
    fresh = db.query_one("SELECT * FROM users WHERE username='ct5'")
    assert leave.list_notifications(db, fresh) == []
    assert leave.unread_count(db, users["ct1"]) > 0
    leave.mark_notifications_read(db, users["ct1"])
    assert leave.mark_notifications_read(db, users["ct1"]) == 0  # idempotent
    assert leave.list_notifications(db, users["ct1"], unread_only=True) == []


def test_notifications_newest_first_and_monotone_per_batch(db, cfg, users):
    drive_to(db, cfg, users, "approved")
    notes = leave.list_notifications(db, users["hk_mgr"])
    stamps = [n["created_at"] for n in notes]
    assert stamps == sorted(stamps, reverse=True)


def test_assignment_ids_are_uuid4(db, cfg, users):
    row = new_leave(db, cfg, users)
    assignment = leave.assign_incharge(db, cfg, row["id"], users["ct2"]["id"], users["hk_mgr"])
    parsed = uuid.UUID(assignment["id"])
    assert parsed.version == 4


def test_uuid_non_adjacency_smoke():
    """10k ids: no two numerically adjacent under either byte order."""
    ids = [uuid.UUID(leave.new_assignment_id()) for _ in range(10_000)]
    for order in ("big", "little"):
        values = sorted(int.from_bytes(u.bytes, order) for u in ids)
        assert all(b - a > 1 for a, b in zip(values, values[1:]))


def test_unknown_ids_raise(db, cfg, users):
    with pytest.raises(NotFound):
        leave.admin_decide(db, cfg, 999, True, users["admin"])
    with pytest.raises(NotFound):
        leave.incharge_respond(db, cfg, "no-such-uuid", True, users["ct1"])
