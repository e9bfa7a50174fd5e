"""Runtime configuration, read once from the environment."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path

_PACKAGE_DIR = Path(__file__).resolve().parent
FIXTURES_DIR = _PACKAGE_DIR / "fixtures"
STATIC_DIR = _PACKAGE_DIR / "static"
TEMPLATES_DIR = _PACKAGE_DIR / "templates"


@dataclass
class Config:
    database_path: str = "campusops.db"
    media_dir: str = "media"
    session_ttl_hours: int = 12
    secret_seed: str = ""
    max_photo_bytes: int = 2_000_000
    # institution-local clock; default UTC+05:30
    tz_offset_minutes: int = 330
    scrypt_n: int = 16384
    scrypt_r: int = 8
    scrypt_p: int = 1
    permissions_file: str = str(FIXTURES_DIR / "permissions.txt")
    # expose per-request storage round-trip counts as an X-Query-Count header
    query_count_header: bool = False
    sqlite_synchronous: str = "NORMAL"
    session_cookie: str = "campusops_session"
    thumbnail_max_dim: int = 300
    webp_quality: int = 70

    @classmethod
    def from_env(cls, env: dict | None = None) -> "Config":
        env = dict(os.environ if env is None else env)
        return cls(
            database_path=env.get("CAMPUSOPS_DB", "campusops.db"),
            media_dir=env.get("MEDIA_DIR", "media"),
            session_ttl_hours=int(env.get("SESSION_TTL_HOURS", "12")),
            secret_seed=env.get("SECRET_SEED", ""),
            max_photo_bytes=int(env.get("MAX_PHOTO_BYTES", "2000000")),
            tz_offset_minutes=int(env.get("TZ_OFFSET_MINUTES", "330")),
            scrypt_n=int(env.get("SCRYPT_N", "16384")),
            scrypt_r=int(env.get("SCRYPT_R", "8")),
            scrypt_p=int(env.get("SCRYPT_P", "1")),
            permissions_file=env.get("PERMISSIONS_FILE", str(FIXTURES_DIR / "permissions.txt")),
            query_count_header=env.get("QUERY_COUNT_HEADER", "0") == "1",
            sqlite_synchronous=env.get("SQLITE_SYNCHRONOUS", "NORMAL"),
        )

    @property
    def tzinfo(self) -> timezone:
        return timezone(timedelta(minutes=self.tz_offset_minutes))

    def now(self) -> datetime:
        return datetime.now(self.tzinfo)

    def today(self) -> str:
        return self.now().date().isoformat()


def ts(dt: datetime) -> str:
    """Canonical timestamp string; lexically ordered within one configured offset."""
    return dt.isoformat(sep=" ", timespec="microseconds")
