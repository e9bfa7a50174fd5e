"""Leave-approval workflow.

Five states with the edge set:

    awaiting          --assign-->   pending_accept
    reassign_required --assign-->   pending_accept
    pending_accept    --accept-->   pending_admin
    pending_accept    --decline-->  reassign_required
    pending_admin     --approve-->  approved            (terminal)
    pending_admin     --reject-->   reassign_required

Every transition is a compare-and-set on the stored state inside one
transaction that also writes the audit entry, the assignment row when
applicable, and at least one notification, so the trail can never lag the
state. Admin rejection routes back to reassign_required, keeping the machine
at five states.
"""

from __future__ import annotations

import sqlite3
import uuid
from datetime import timedelta

from .auth import require_role
from .config import Config, ts
from .db import Database
from .errors import DomainError, NotFound, WrongState
from .scheduling import parse_date

STATES = ("awaiting", "pending_accept", "pending_admin", "approved", "reassign_required")
ASSIGN_ROLES = ("housekeeping_manager", "admin")
INCHARGE_ROLES = ("caretaker", "supervisor")


def new_assignment_id() -> str:
    return str(uuid.uuid4())


def _get_leave(db: Database, leave_id: int) -> sqlite3.Row:
    row = db.query_one("SELECT * FROM leave_requests WHERE id=?", (leave_id,))
    if row is None:
        raise NotFound(f"no leave request {leave_id}")
    return row


def _notify(db: Database, base_ts, leave_id: int, recipients: list[int], message: str) -> None:
    # created_at strictly increases inside one transition batch
    for i, recipient_id in enumerate(recipients):
        db.execute(
            "INSERT INTO notifications (recipient_id, leave_id, message, created_at) VALUES (?, ?, ?, ?)",
            (recipient_id, leave_id, message, ts(base_ts + timedelta(microseconds=i))),
        )


def _audit(db: Database, leave_id: int, from_state: str | None, to_state: str, actor_id: int, when) -> None:
    db.execute(
        "INSERT INTO leave_transitions (leave_id, from_state, to_state, actor_id, created_at)"
        " VALUES (?, ?, ?, ?, ?)",
        (leave_id, from_state, to_state, actor_id, ts(when)),
    )


def _manager_ids(db: Database) -> list[int]:
    return [
        r["id"]
        for r in db.query("SELECT id FROM users WHERE role='housekeeping_manager' AND active=1 ORDER BY id")
    ]


def create_leave_request(db: Database, cfg: Config, requester, start_date: str, end_date: str, reason: str) -> sqlite3.Row:
    start, end = parse_date(start_date), parse_date(end_date)
    if end < start:
        raise DomainError("end date precedes start date", code="invalid-range")
    if not (reason or "").strip():
        raise DomainError("reason must be non-empty", code="empty-reason")
    now = cfg.now()
    with db.write_tx():
        cur = db.execute(
            "INSERT INTO leave_requests (requester_id, start_date, end_date, reason) VALUES (?, ?, ?, ?)",
            (requester["id"], start_date, end_date, reason),
        )
        leave_id = cur.lastrowid
        _audit(db, leave_id, None, "awaiting", requester["id"], now)
        _notify(
            db, now, leave_id, _manager_ids(db),
            f"New leave request #{leave_id} from {requester['display_name']} awaits an incharge.",
        )
    return _get_leave(db, leave_id)


def assign_incharge(db: Database, cfg: Config, leave_id: int, incharge_id: int, actor) -> sqlite3.Row:
    require_role(actor, *ASSIGN_ROLES)
    leave = _get_leave(db, leave_id)
    if incharge_id == leave["requester_id"]:
        raise DomainError("incharge cannot cover their own leave", code="self-assignment")
    incharge = db.query_one("SELECT * FROM users WHERE id=? AND active=1", (incharge_id,))
    if incharge is None or incharge["role"] not in INCHARGE_ROLES:
        raise DomainError("incharge must be an active caretaker or supervisor", code="invalid-incharge")

    now = cfg.now()
    assignment_id = new_assignment_id()
    with db.write_tx():
        cur = db.execute(
            "UPDATE leave_requests SET state='pending_accept'"
            " WHERE id=? AND state IN ('awaiting','reassign_required')",
            (leave_id,),
        )
        if cur.rowcount != 1:
            raise WrongState(f"cannot assign incharge in state {leave['state']}")
        db.execute(
            "INSERT INTO incharge_assignments (id, leave_id, incharge_id, created_at) VALUES (?, ?, ?, ?)",
            (assignment_id, leave_id, incharge_id, ts(now)),
        )
        _audit(db, leave_id, leave["state"], "pending_accept", actor["id"], now)
        _notify(
            db, now, leave_id, [incharge_id],
            f"You are proposed as incharge for leave #{leave_id}; please accept or decline.",
        )
    return db.query_one("SELECT * FROM incharge_assignments WHERE id=?", (assignment_id,))


def incharge_respond(db: Database, cfg: Config, assignment_id: str, accept: bool, actor) -> sqlite3.Row:
    assignment = db.query_one("SELECT * FROM incharge_assignments WHERE id=?", (assignment_id,))
    if assignment is None:
        raise NotFound(f"no assignment {assignment_id}")
    if actor["id"] != assignment["incharge_id"]:
        raise DomainError("only the proposed incharge may respond", code="not-the-incharge")
    leave = _get_leave(db, assignment["leave_id"])

    now = cfg.now()
    to_state = "pending_admin" if accept else "reassign_required"
    response = "accepted" if accept else "declined"
    with db.write_tx():
        cur = db.execute(
            "UPDATE incharge_assignments SET response=?, responded_at=? WHERE id=? AND response='pending'",
            (response, ts(now), assignment_id),
        )
        if cur.rowcount != 1:
            raise DomainError("assignment already responded to", code="already-responded")
        cur = db.execute(
            "UPDATE leave_requests SET state=? WHERE id=? AND state='pending_accept'",
            (to_state, leave["id"]),
        )
        if cur.rowcount != 1:
            raise WrongState(f"leave is not pending acceptance (state {leave['state']})")
        _audit(db, leave["id"], "pending_accept", to_state, actor["id"], now)
        verb = "accepted" if accept else "declined"
        _notify(
            db, now, leave["id"],
            [leave["requester_id"], *_manager_ids(db)],
            f"Incharge {verb} coverage for leave #{leave['id']}.",
        )
    return _get_leave(db, leave["id"])


def admin_decide(db: Database, cfg: Config, leave_id: int, approve: bool, actor) -> sqlite3.Row:
    require_role(actor, "admin")
    leave = _get_leave(db, leave_id)
    now = cfg.now()
    # rejection re-enters the documented loop instead of adding a sixth state
    to_state = "approved" if approve else "reassign_required"
    with db.write_tx():
        cur = db.execute(
            "UPDATE leave_requests SET state=? WHERE id=? AND state='pending_admin'",
            (to_state, leave_id),
        )
        if cur.rowcount != 1:
            raise WrongState(f"leave is not awaiting admin decision (state {leave['state']})")
        _audit(db, leave_id, "pending_admin", to_state, actor["id"], now)
        recipients = [leave["requester_id"]]
        accepted = db.query_one(
            "SELECT incharge_id FROM incharge_assignments WHERE leave_id=? AND response='accepted'"
            " ORDER BY created_at DESC LIMIT 1",
            (leave_id,),
        )
        if accepted is not None:
            recipients.append(accepted["incharge_id"])
        verdict = "approved" if approve else "sent back for reassignment"
        _notify(db, now, leave_id, recipients, f"Leave #{leave_id} was {verdict} by admin.")
    return _get_leave(db, leave_id)


def list_notifications(db: Database, recipient, unread_only: bool = False) -> list[sqlite3.Row]:
    sql = "SELECT * FROM notifications WHERE recipient_id=?"
    if unread_only:
        sql += " AND read=0"
    sql += " ORDER BY created_at DESC, id DESC"
    return db.query(sql, (recipient["id"],))


def mark_notifications_read(db: Database, recipient) -> int:
    with db.write_tx():
        cur = db.execute("UPDATE notifications SET read=1 WHERE recipient_id=? AND read=0", (recipient["id"],))
    return cur.rowcount


def unread_count(db: Database, recipient) -> int:
    row = db.query_one("SELECT count(*) AS n FROM notifications WHERE recipient_id=? AND read=0", (recipient["id"],))
    return row["n"]


def audit_trail(db: Database, leave_id: int) -> list[sqlite3.Row]:
    _get_leave(db, leave_id)
    return db.query(
        "SELECT t.*, u.username AS actor_username FROM leave_transitions t"
        " JOIN users u ON u.id = t.actor_id WHERE t.leave_id=? ORDER BY t.id",
        (leave_id,),
    )


def replay_state(transitions) -> str:
    """Fold an audit trail back into the state it encodes; rejects broken chains."""
    state = None
    for entry in transitions:
        if entry["from_state"] != state:
            raise ValueError(
                f"audit chain broken: transition from {entry['from_state']!r} but state is {state!r}"
            )
        state = entry["to_state"]
    if state is None:
        raise ValueError("empty audit trail")
    return state


def my_requests(db: Database, user) -> list[sqlite3.Row]:
    return db.query(
        "SELECT * FROM leave_requests WHERE requester_id=? ORDER BY id DESC", (user["id"],)
    )


def incharge_inbox(db: Database, user) -> list[sqlite3.Row]:
    return db.query(
        "SELECT a.*, l.start_date, l.end_date, l.reason, u.display_name AS requester_name"
        " FROM incharge_assignments a"
        " JOIN leave_requests l ON l.id = a.leave_id"
        " JOIN users u ON u.id = l.requester_id"
        " WHERE a.incharge_id=? AND a.response='pending' ORDER BY a.created_at",
        (user["id"],),
    )


def manager_queue(db: Database) -> list[sqlite3.Row]:
    return db.query(
        "SELECT l.*, u.display_name AS requester_name FROM leave_requests l"
        " JOIN users u ON u.id = l.requester_id"
        " WHERE l.state IN ('awaiting','reassign_required') ORDER BY l.id",
    )


def admin_queue(db: Database) -> list[sqlite3.Row]:
    return db.query(
        "SELECT l.*, u.display_name AS requester_name FROM leave_requests l"
        " JOIN users u ON u.id = l.requester_id"
        " WHERE l.state = 'pending_admin' ORDER BY l.id",
    )
