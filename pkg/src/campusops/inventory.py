"""Inventory: item catalog, stock entries, guarded issuance, purchase requests,
and area-wise CSV/PDF reporting.

Issuance never reads-then-writes: the decrement is a single conditional
UPDATE whose row count decides success, with the movement row inserted in the
same transaction.
"""

from __future__ import annotations

import csv
import io
import sqlite3

from reportlab.lib.pagesizes import A4
from reportlab.pdfgen import canvas as pdf_canvas

from .auth import require_role
from .config import Config, ts
from .db import Database
from .errors import DomainError, NotFound
from .scheduling import parse_date

MANAGE_ROLES = ("inventory_manager", "admin")

CSV_HEADER = ["timestamp", "item", "category", "quantity", "unit", "area", "issued_to", "actor"]

PURCHASE_EDGES = {("open", "ordered"), ("ordered", "received"), ("open", "cancelled")}


def create_item(db: Database, category: str, name: str, unit: str) -> int:
    # items start at zero; stock only ever arrives through add_stock
    cur = db.execute(
        "INSERT INTO items (category, name, unit, available_quantity) VALUES (?, ?, ?, 0)",
        (category, name, unit),
    )
    return cur.lastrowid


def get_item(db: Database, item_id: int) -> sqlite3.Row:
    row = db.query_one("SELECT * FROM items WHERE id=?", (item_id,))
    if row is None:
        raise NotFound(f"no item {item_id}")
    return row


def list_items(db: Database, page: int = 1, page_size: int = 10) -> list[sqlite3.Row]:
    offset = (max(page, 1) - 1) * page_size
    return db.query(
        "SELECT * FROM items ORDER BY category, name LIMIT ? OFFSET ?", (page_size, offset)
    )


def item_count(db: Database) -> int:
    return db.query_one("SELECT count(*) AS n FROM items")["n"]


def add_stock(db: Database, cfg: Config, item_id: int, quantity: int, actor) -> sqlite3.Row:
    require_role(actor, *MANAGE_ROLES)
    if quantity <= 0:
        raise DomainError("quantity must be positive", code="non-positive-quantity")
    get_item(db, item_id)
    with db.write_tx():
        db.execute(
            "UPDATE items SET available_quantity = available_quantity + ? WHERE id=?",
            (quantity, item_id),
        )
        cur = db.execute(
            "INSERT INTO stock_movements (item_id, kind, quantity, actor_id, created_at)"
            " VALUES (?, 'inbound', ?, ?, ?)",
            (item_id, quantity, actor["id"], ts(cfg.now())),
        )
        movement_id = cur.lastrowid
    return db.query_one("SELECT * FROM stock_movements WHERE id=?", (movement_id,))


def issue_item(
    db: Database, cfg: Config, item_id: int, quantity: int, area_code: str, issued_to: str, actor
) -> sqlite3.Row:
    """Guarded atomic decrement: succeeds iff stored quantity covers the issue."""
    require_role(actor, *MANAGE_ROLES)
    if quantity <= 0:
        raise DomainError("quantity must be positive", code="non-positive-quantity")
    if db.query_one("SELECT 1 FROM area_types WHERE code=?", (area_code,)) is None:
        raise NotFound(f"unknown area: {area_code}")
    get_item(db, item_id)
    with db.write_tx():
        cur = db.execute(
            "UPDATE items SET available_quantity = available_quantity - ?"
            " WHERE id=? AND available_quantity >= ?",
            (quantity, item_id, quantity),
        )
        if cur.rowcount != 1:
            raise DomainError("not enough stock", code="insufficient-stock")
        cur = db.execute(
            "INSERT INTO stock_movements (item_id, kind, quantity, area_code, issued_to, actor_id, created_at)"
            " VALUES (?, 'issuance', ?, ?, ?, ?, ?)",
            (item_id, quantity, area_code, issued_to, actor["id"], ts(cfg.now())),
        )
        movement_id = cur.lastrowid
    return db.query_one("SELECT * FROM stock_movements WHERE id=?", (movement_id,))


def create_purchase_request(
    db: Database, cfg: Config, item_name: str, quantity: int, justification: str, actor
) -> sqlite3.Row:
    require_role(actor, *MANAGE_ROLES)
    if quantity <= 0:
        raise DomainError("quantity must be positive", code="non-positive-quantity")
    cur = db.execute(
        "INSERT INTO purchase_requests (item_name, quantity, justification, created_by, created_at)"
        " VALUES (?, ?, ?, ?, ?)",
        (item_name, quantity, justification, actor["id"], ts(cfg.now())),
    )
    return db.query_one("SELECT * FROM purchase_requests WHERE id=?", (cur.lastrowid,))


def advance_purchase_request(db: Database, pr_id: int, new_status: str, actor) -> sqlite3.Row:
    require_role(actor, *MANAGE_ROLES)
    row = db.query_one("SELECT * FROM purchase_requests WHERE id=?", (pr_id,))
    if row is None:
        raise NotFound(f"no purchase request {pr_id}")
    if (row["status"], new_status) not in PURCHASE_EDGES:
        raise DomainError(
            f"purchase request cannot move {row['status']} -> {new_status}", code="wrong-status"
        )
    with db.write_tx():
        cur = db.execute(
            "UPDATE purchase_requests SET status=? WHERE id=? AND status=?",
            (new_status, pr_id, row["status"]),
        )
        if cur.rowcount != 1:
            raise DomainError("purchase request changed concurrently", code="wrong-status")
    return db.query_one("SELECT * FROM purchase_requests WHERE id=?", (pr_id,))


def list_purchase_requests(db: Database) -> list[sqlite3.Row]:
    return db.query("SELECT * FROM purchase_requests ORDER BY id DESC")


def recent_movements(db: Database, limit: int = 15) -> list[sqlite3.Row]:
    return db.query(
        "SELECT m.*, i.name AS item_name, i.unit, u.username AS actor_username"
        " FROM stock_movements m JOIN items i ON i.id = m.item_id"
        " JOIN users u ON u.id = m.actor_id"
        " ORDER BY m.id DESC LIMIT ?",
        (limit,),
    )


def low_stock(db: Database, threshold: int = 10) -> list[sqlite3.Row]:
    return db.query(
        "SELECT * FROM items WHERE available_quantity < ? ORDER BY available_quantity, name",
        (threshold,),
    )


def area_report(db: Database, area_code: str, date_from: str, date_to: str) -> list[sqlite3.Row]:
    """All issuance movements for the area whose timestamp date falls in [from, to]."""
    start, end = parse_date(date_from), parse_date(date_to)
    if end < start:
        raise DomainError("report range end precedes start", code="invalid-range")
    if db.query_one("SELECT 1 FROM area_types WHERE code=?", (area_code,)) is None:
        raise NotFound(f"unknown area: {area_code}")
    return db.query(
        "SELECT m.created_at, i.name AS item_name, i.category, m.quantity, i.unit,"
        " m.area_code, m.issued_to, u.username AS actor_username"
        " FROM stock_movements m"
        " JOIN items i ON i.id = m.item_id"
        " JOIN users u ON u.id = m.actor_id"
        " WHERE m.kind='issuance' AND m.area_code=?"
        # timestamps are institution-local; the leading 10 chars are the local date
        "  AND substr(m.created_at, 1, 10) BETWEEN ? AND ?"
        " ORDER BY m.created_at, m.id",
        (area_code, date_from, date_to),
    )


def report_csv(rows) -> bytes:
    """RFC-4180-style CSV, LF line endings, fixed header."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow(
            [
                r["created_at"],
                r["item_name"],
                r["category"],
                r["quantity"],
                r["unit"],
                r["area_code"],
                r["issued_to"] or "",
                r["actor_username"],
            ]
        )
    return buf.getvalue().encode("utf-8")


def report_pdf(rows, area_code: str, date_from: str, date_to: str) -> bytes:
    """Same rows as the CSV, one text line per issuance."""
    buf = io.BytesIO()
    page = pdf_canvas.Canvas(buf, pagesize=A4)
    width, height = A4
    margin, line_height = 40, 14

    def start_page(c):
        c.setFont("Helvetica-Bold", 12)
        c.drawString(margin, height - margin, f"Issuance report: {area_code} {date_from} to {date_to}")
        c.setFont("Helvetica", 8)
        c.drawString(margin, height - margin - line_height, " | ".join(CSV_HEADER))
        return height - margin - 2 * line_height

    y = start_page(page)
    for r in rows:
        if y < margin:
            page.showPage()
            y = start_page(page)
        line = " | ".join(
            str(v)
            for v in (
                r["created_at"],
                r["item_name"],
                r["category"],
                r["quantity"],
                r["unit"],
                r["area_code"],
                r["issued_to"] or "",
                r["actor_username"],
            )
        )
        page.drawString(margin, y, line)
        y -= line_height
    page.showPage()
    page.save()
    return buf.getvalue()


def replay_conservation(db: Database) -> list[dict]:
    """Recompute every item's quantity from its movement log; returns mismatches.

    Items start at zero and stock only arrives through add_stock, so the
    expected quantity is sum(inbound) - sum(issuance).
    """
    mismatches = []
    rows = db.query(
        "SELECT i.id, i.name, i.available_quantity,"
        " coalesce(sum(CASE WHEN m.kind='inbound' THEN m.quantity END), 0) AS inbound,"
        " coalesce(sum(CASE WHEN m.kind='issuance' THEN m.quantity END), 0) AS issued"
        " FROM items i LEFT JOIN stock_movements m ON m.item_id = i.id"
        " GROUP BY i.id",
    )
    for r in rows:
        expected = r["inbound"] - r["issued"]
        if expected != r["available_quantity"]:
            mismatches.append(
                {"item_id": r["id"], "expected": expected, "actual": r["available_quantity"]}
            )
    return mismatches
