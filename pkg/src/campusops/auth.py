"""Accounts, sessions, the five-role model, portal routing, and authorization.

Authorization is two-layered: the declarative role/endpoint-group matrix gates
every registered endpoint, and the domain services re-check actor roles on
their own preconditions.
"""

from __future__ import annotations

import hashlib
import hmac
import os
import sqlite3
from datetime import timedelta

from .config import Config, ts
from .db import Database
from .errors import DomainError, ForbiddenRole, InvalidCredentials

ROLES = ("admin", "inventory_manager", "housekeeping_manager", "supervisor", "caretaker")

PORTAL_ROUTES = {
    "admin": "/admin/dashboard/",
    "inventory_manager": "/inventory/mobile/",
    "housekeeping_manager": "/housekeeping/dashboard/",
    "supervisor": "/housekeeping/dashboard/",
    "caretaker": "/housekeeping/dashboard/",
}

# scrypt at n=16384,r=8 needs exactly 16 MiB; leave generous headroom
_SCRYPT_MAXMEM = 256 * 1024 * 1024


def portal_route(role: str) -> str:
    if role not in PORTAL_ROUTES:
        raise ValueError(f"unknown role: {role}")
    return PORTAL_ROUTES[role]


def hash_password(password: str, cfg: Config) -> str:
    salt = os.urandom(16)
    key = hashlib.scrypt(
        password.encode("utf-8"),
        salt=salt,
        n=cfg.scrypt_n,
        r=cfg.scrypt_r,
        p=cfg.scrypt_p,
        maxmem=_SCRYPT_MAXMEM,
    )
    return f"scrypt${cfg.scrypt_n}${cfg.scrypt_r}${cfg.scrypt_p}${salt.hex()}${key.hex()}"


def verify_password(password: str, stored: str) -> bool:
    try:
        scheme, n, r, p, salt_hex, key_hex = stored.split("$")
        if scheme != "scrypt":
            return False
        derived = hashlib.scrypt(
            password.encode("utf-8"),
            salt=bytes.fromhex(salt_hex),
            n=int(n),
            r=int(r),
            p=int(p),
            maxmem=_SCRYPT_MAXMEM,
        )
    except (ValueError, TypeError):
        return False
    return hmac.compare_digest(derived, bytes.fromhex(key_hex))


def create_account(
    db: Database,
    cfg: Config,
    username: str,
    password: str,
    role: str,
    display_name: str,
    active: bool = True,
) -> int:
    if role not in ROLES:
        raise ValueError(f"unknown role: {role}")
    if not username:
        raise DomainError("username must be non-empty", code="validation-error")
    try:
        cur = db.execute(
            "INSERT INTO users (username, username_norm, password_hash, role, display_name, active)"
            " VALUES (?, ?, ?, ?, ?, ?)",
            (username, username.lower(), hash_password(password, cfg), role, display_name, int(active)),
        )
    except sqlite3.IntegrityError as exc:
        raise DomainError(f"username already taken: {username}", code="username-taken") from exc
    return cur.lastrowid


def set_account_active(db: Database, user_id: int, active: bool) -> None:
    with db.write_tx():
        db.execute("UPDATE users SET active=? WHERE id=?", (int(active), user_id))
        if not active:
            db.execute("DELETE FROM sessions WHERE user_id=?", (user_id,))


def new_session_token(cfg: Config) -> str:
    """256-bit token: fresh OS entropy keyed with the configured seed."""
    raw = os.urandom(32)
    key = hashlib.sha256(cfg.secret_seed.encode("utf-8")).digest() if cfg.secret_seed else b""
    return hashlib.blake2b(raw, key=key, digest_size=32).hexdigest()


def authenticate(db: Database, cfg: Config, username: str, password: str) -> dict:
    """Create a session iff credentials match an active account.

    Wrong username, wrong password and inactive account are indistinguishable
    to the caller; a dummy hash verification keeps the timing profile flat
    when the account does not exist.
    """
    row = db.query_one("SELECT * FROM users WHERE username_norm=?", ((username or "").lower(),))
    if row is None:
        verify_password(password, hash_password("", cfg))
        raise InvalidCredentials("invalid username or password")
    if not verify_password(password, row["password_hash"]) or not row["active"]:
        raise InvalidCredentials("invalid username or password")

    now = cfg.now()
    token = new_session_token(cfg)
    with db.write_tx():
        db.execute(
            "INSERT INTO sessions (token, user_id, created_at, expires_at) VALUES (?, ?, ?, ?)",
            (token, row["id"], ts(now), ts(now + timedelta(hours=cfg.session_ttl_hours))),
        )
    return {
        "token": token,
        "user_id": row["id"],
        "username": row["username"],
        "role": row["role"],
    }


def session_user(db: Database, cfg: Config, token: str | None) -> sqlite3.Row | None:
    """Resolve a session token to its user row; expired or dangling tokens are absent."""
    if not token:
        return None
    return db.query_one(
        "SELECT u.*, s.token AS session_token, s.expires_at FROM sessions s"
        " JOIN users u ON u.id = s.user_id"
        " WHERE s.token=? AND s.expires_at > ? AND u.active=1",
        (token, ts(cfg.now())),
    )


def invalidate_session(db: Database, token: str) -> None:
    with db.write_tx():
        db.execute("DELETE FROM sessions WHERE token=?", (token,))


def purge_expired_sessions(db: Database, cfg: Config) -> int:
    with db.write_tx():
        cur = db.execute("DELETE FROM sessions WHERE expires_at <= ?", (ts(cfg.now()),))
    return cur.rowcount


class PermissionMatrix:
    """Static role × endpoint-group table loaded from the repo config file.

    File format: one line per (role, endpoint-group, allow), pipe-delimited.
    Anything not listed is denied.
    """

    def __init__(self, allowed: set[tuple[str, str]]):
        self.allowed = frozenset(allowed)
        self.groups = frozenset(group for _, group in allowed)

    @classmethod
    def from_file(cls, path: str) -> "PermissionMatrix":
        allowed: set[tuple[str, str]] = set()
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split("|")
                if len(parts) != 3:
                    raise ValueError(f"{path}:{lineno}: expected role|group|allow")
                role, group, verdict = (p.strip() for p in parts)
                if role not in ROLES:
                    raise ValueError(f"{path}:{lineno}: unknown role {role!r}")
                if verdict != "allow":
                    raise ValueError(f"{path}:{lineno}: only 'allow' entries are supported")
                allowed.add((role, group))
        return cls(allowed)

    def allows(self, role: str, group: str) -> bool:
        return (role, group) in self.allowed


def authorize(role: str, endpoint: str, matrix: PermissionMatrix, endpoint_groups: dict[str, str]) -> bool:
    """Pure (role, endpoint) decision. Unknown endpoints deny, indistinguishably."""
    group = endpoint_groups.get(endpoint)
    if group is None:
        return False
    if group == "public":
        return True
    return matrix.allows(role, group)


def require_role(actor, *roles: str) -> None:
    """Service-level actor check; actor is a user row or dict with a role field."""
    if actor is None or actor["role"] not in roles:
        raise ForbiddenRole(f"requires one of: {', '.join(roles)}")
