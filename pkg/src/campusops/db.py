"""SQLite storage layer.

One connection per thread, WAL journal, explicit write transactions via
BEGIN IMMEDIATE so read-check-write sequences inside a transaction are
serialized by the database write lock. Every data statement goes through
``Database.execute`` which feeds the active query counter, the hook behind
the bounded-query instrumentation.
"""

from __future__ import annotations

import contextvars
import sqlite3
import threading
from contextlib import contextmanager
from pathlib import Path

SCHEMA = """
CREATE TABLE IF NOT EXISTS users (
    id INTEGER PRIMARY KEY,
    username TEXT NOT NULL,
    username_norm TEXT NOT NULL UNIQUE,
    password_hash TEXT NOT NULL,
    role TEXT NOT NULL CHECK (role IN
        ('admin','inventory_manager','housekeeping_manager','supervisor','caretaker')),
    display_name TEXT NOT NULL,
    active INTEGER NOT NULL DEFAULT 1
);

CREATE TABLE IF NOT EXISTS sessions (
    token TEXT PRIMARY KEY,
    user_id INTEGER NOT NULL REFERENCES users(id),
    created_at TEXT NOT NULL,
    expires_at TEXT NOT NULL,
    CHECK (expires_at > created_at)
);

CREATE TABLE IF NOT EXISTS area_types (
    code TEXT PRIMARY KEY,
    display_name TEXT NOT NULL,
    multi_worker_enabled INTEGER NOT NULL DEFAULT 0
);

CREATE TABLE IF NOT EXISTS photo_assets (
    id INTEGER PRIMARY KEY,
    original_size INTEGER NOT NULL,
    compressed_size INTEGER NOT NULL,
    compression_ratio REAL NOT NULL,
    thumbnail_size INTEGER NOT NULL,
    main_path TEXT NOT NULL,
    thumb_path TEXT NOT NULL,
    content_hash TEXT NOT NULL,
    uploaded_at TEXT NOT NULL
);

CREATE TABLE IF NOT EXISTS schedule_templates (
    id INTEGER PRIMARY KEY,
    name TEXT NOT NULL,
    area_code TEXT NOT NULL REFERENCES area_types(code),
    frequency TEXT NOT NULL CHECK (frequency IN ('daily','saturday_special','sunday_extra')),
    window_start TEXT NOT NULL,
    window_end TEXT NOT NULL,
    worker_tags TEXT NOT NULL DEFAULT '',
    requires_photo INTEGER NOT NULL DEFAULT 0,
    active INTEGER NOT NULL DEFAULT 1,
    CHECK (window_start < window_end)
);

CREATE TABLE IF NOT EXISTS daily_records (
    id INTEGER PRIMARY KEY,
    template_id INTEGER NOT NULL REFERENCES schedule_templates(id),
    date TEXT NOT NULL,
    status TEXT NOT NULL DEFAULT 'pending'
        CHECK (status IN ('pending','assigned','completed','flagged')),
    assigned_at TEXT,
    completed_at TEXT,
    photo_id INTEGER REFERENCES photo_assets(id),
    gps_lat REAL,
    gps_lng REAL,
    flag_reason TEXT,
    flagged_by INTEGER REFERENCES users(id),
    UNIQUE (template_id, date)
);
CREATE INDEX IF NOT EXISTS idx_daily_records_date ON daily_records(date);

CREATE TABLE IF NOT EXISTS worker_assignments (
    id INTEGER PRIMARY KEY,
    record_id INTEGER NOT NULL REFERENCES daily_records(id),
    user_id INTEGER NOT NULL REFERENCES users(id),
    position INTEGER NOT NULL,
    UNIQUE (record_id, user_id),
    UNIQUE (record_id, position)
);

CREATE TABLE IF NOT EXISTS attendance_records (
    id INTEGER PRIMARY KEY,
    worker_id INTEGER NOT NULL REFERENCES users(id),
    date TEXT NOT NULL,
    slot TEXT NOT NULL CHECK (slot IN ('first_half','second_half')),
    status TEXT NOT NULL CHECK (status IN ('present','absent','late','leave')),
    is_submitted INTEGER NOT NULL DEFAULT 0,
    recorded_by INTEGER NOT NULL REFERENCES users(id),
    recorded_at TEXT NOT NULL,
    UNIQUE (worker_id, date, slot)
);
CREATE INDEX IF NOT EXISTS idx_attendance_date_slot ON attendance_records(date, slot);

CREATE TABLE IF NOT EXISTS leave_requests (
    id INTEGER PRIMARY KEY,
    requester_id INTEGER NOT NULL REFERENCES users(id),
    start_date TEXT NOT NULL,
    end_date TEXT NOT NULL,
    reason TEXT NOT NULL,
    state TEXT NOT NULL DEFAULT 'awaiting' CHECK (state IN
        ('awaiting','pending_accept','pending_admin','approved','reassign_required')),
    CHECK (start_date <= end_date)
);

CREATE TABLE IF NOT EXISTS leave_transitions (
    id INTEGER PRIMARY KEY,
    leave_id INTEGER NOT NULL REFERENCES leave_requests(id),
    from_state TEXT,
    to_state TEXT NOT NULL,
    actor_id INTEGER NOT NULL REFERENCES users(id),
    created_at TEXT NOT NULL
);
CREATE INDEX IF NOT EXISTS idx_leave_transitions_leave ON leave_transitions(leave_id);

CREATE TABLE IF NOT EXISTS incharge_assignments (
    id TEXT PRIMARY KEY,
    leave_id INTEGER NOT NULL REFERENCES leave_requests(id),
    incharge_id INTEGER NOT NULL REFERENCES users(id),
    response TEXT NOT NULL DEFAULT 'pending' CHECK (response IN ('pending','accepted','declined')),
    created_at TEXT NOT NULL,
    responded_at TEXT
);
CREATE UNIQUE INDEX IF NOT EXISTS idx_incharge_one_pending
    ON incharge_assignments(leave_id) WHERE response = 'pending';

CREATE TABLE IF NOT EXISTS notifications (
    id INTEGER PRIMARY KEY,
    recipient_id INTEGER NOT NULL REFERENCES users(id),
    leave_id INTEGER NOT NULL REFERENCES leave_requests(id),
    message TEXT NOT NULL,
    created_at TEXT NOT NULL,
    read INTEGER NOT NULL DEFAULT 0
);
CREATE INDEX IF NOT EXISTS idx_notifications_recipient ON notifications(recipient_id, created_at);

CREATE TABLE IF NOT EXISTS items (
    id INTEGER PRIMARY KEY,
    category TEXT NOT NULL,
    name TEXT NOT NULL,
    unit TEXT NOT NULL,
    available_quantity INTEGER NOT NULL DEFAULT 0 CHECK (available_quantity >= 0)
);

CREATE TABLE IF NOT EXISTS stock_movements (
    id INTEGER PRIMARY KEY,
    item_id INTEGER NOT NULL REFERENCES items(id),
    kind TEXT NOT NULL CHECK (kind IN ('inbound','issuance')),
    quantity INTEGER NOT NULL CHECK (quantity > 0),
    area_code TEXT REFERENCES area_types(code),
    issued_to TEXT,
    actor_id INTEGER NOT NULL REFERENCES users(id),
    created_at TEXT NOT NULL,
    CHECK (kind <> 'issuance' OR area_code IS NOT NULL)
);
CREATE INDEX IF NOT EXISTS idx_movements_area_time ON stock_movements(area_code, created_at);

CREATE TABLE IF NOT EXISTS purchase_requests (
    id INTEGER PRIMARY KEY,
    item_name TEXT NOT NULL,
    quantity INTEGER NOT NULL CHECK (quantity > 0),
    justification TEXT NOT NULL,
    status TEXT NOT NULL DEFAULT 'open' CHECK (status IN ('open','ordered','received','cancelled')),
    created_by INTEGER NOT NULL REFERENCES users(id),
    created_at TEXT NOT NULL
);
"""

TABLES = [
    "worker_assignments",
    "daily_records",
    "schedule_templates",
    "attendance_records",
    "notifications",
    "incharge_assignments",
    "leave_transitions",
    "leave_requests",
    "stock_movements",
    "purchase_requests",
    "items",
    "photo_assets",
    "sessions",
    "users",
    "area_types",
]


class QueryCounter:
    __slots__ = ("count",)

    def __init__(self) -> None:
        self.count = 0


_active_counter: contextvars.ContextVar[QueryCounter | None] = contextvars.ContextVar(
    "campusops_query_counter", default=None
)


@contextmanager
def count_queries():
    """Activate a round-trip counter for the current context (and threadpool children)."""
    counter = QueryCounter()
    token = _active_counter.set(counter)
    try:
        yield counter
    finally:
        _active_counter.reset(token)


class Database:
    def __init__(self, path: str, *, synchronous: str = "NORMAL"):
        self.path = str(path)
        if synchronous not in ("OFF", "NORMAL", "FULL"):
            raise ValueError(f"bad synchronous mode: {synchronous}")
        self._synchronous = synchronous
        self._local = threading.local()
        parent = Path(self.path).parent
        if parent and not parent.is_dir():
            parent.mkdir(parents=True, exist_ok=True)

    def connection(self) -> sqlite3.Connection:
        conn = getattr(self._local, "conn", None)
        if conn is None:
            # isolation_level=None: autocommit; transactions are explicit BEGIN IMMEDIATE
            conn = sqlite3.connect(self.path, timeout=30.0, isolation_level=None)
            conn.row_factory = sqlite3.Row
            conn.execute("PRAGMA journal_mode=WAL")
            conn.execute(f"PRAGMA synchronous={self._synchronous}")
            conn.execute("PRAGMA foreign_keys=ON")
            conn.execute("PRAGMA busy_timeout=30000")
            self._local.conn = conn
        return conn

    def execute(self, sql: str, params=()) -> sqlite3.Cursor:
        counter = _active_counter.get()
        if counter is not None:
            counter.count += 1
        return self.connection().execute(sql, params)

    def query(self, sql: str, params=()) -> list[sqlite3.Row]:
        return self.execute(sql, params).fetchall()

    def query_one(self, sql: str, params=()) -> sqlite3.Row | None:
        return self.execute(sql, params).fetchone()

    @contextmanager
    def write_tx(self):
        """Write transaction; nested use joins the ambient transaction."""
        conn = self.connection()
        if conn.in_transaction:
            yield
            return
        conn.execute("BEGIN IMMEDIATE")
        try:
            yield
        except BaseException:
            conn.rollback()
            raise
        conn.commit()

    def init_schema(self) -> None:
        self.connection().executescript(SCHEMA)

    def reset_schema(self) -> None:
        conn = self.connection()
        for table in TABLES:
            conn.execute(f"DROP TABLE IF EXISTS {table}")
        self.init_schema()

    def is_empty(self) -> bool:
        for table in TABLES:
            row = self.query_one(
                "SELECT name FROM sqlite_master WHERE type='table' AND name=?", (table,)
            )
            if row is not None and self.query_one(f"SELECT 1 FROM {table} LIMIT 1"):
                return False
        return True

    def close(self) -> None:
        conn = getattr(self._local, "conn", None)
        if conn is not None:
            conn.close()
            self._local.conn = None
