"""Photo evidence pipeline.

The client uploads a pre-compressed main JPEG plus a small JPEG thumbnail and
reports the size of its first encoding attempt. The server stores the main
image verbatim (never transcoded), re-encodes the thumbnail to WebP, and keeps
size metadata for compression-ratio accounting. Storage paths are content
addressed by the main image's digest.
"""

from __future__ import annotations

import hashlib
import io
import sqlite3
from pathlib import Path

from PIL import Image, UnidentifiedImageError

from .config import Config, ts
from .db import Database
from .errors import DomainError, NotFound


def _decode(data: bytes, what: str) -> Image.Image:
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except (UnidentifiedImageError, OSError) as exc:
        raise DomainError(f"{what} is not a decodable image", code="invalid-image") from exc
    return img


def webp_reencode(thumb_jpeg: bytes, quality: int = 70) -> bytes:
    """Re-encode a JPEG to WebP at the configured quality, dimensions preserved."""
    img = _decode(thumb_jpeg, "thumbnail")
    if img.mode not in ("RGB", "L"):
        img = img.convert("RGB")
    out = io.BytesIO()
    img.save(out, "WEBP", quality=quality)
    return out.getvalue()


def ingest_photo(
    db: Database, cfg: Config, main_bytes: bytes, thumb_bytes: bytes, original_size: int
) -> dict:
    main_img = _decode(main_bytes, "photo")
    if main_img.format != "JPEG":
        raise DomainError("main photo must be JPEG", code="invalid-image")
    if len(main_bytes) > cfg.max_photo_bytes:
        raise DomainError(
            f"photo exceeds {cfg.max_photo_bytes} bytes", code="too-large"
        )
    thumb_img = _decode(thumb_bytes, "thumbnail")
    if max(thumb_img.size) > cfg.thumbnail_max_dim:
        raise DomainError(
            f"thumbnail exceeds {cfg.thumbnail_max_dim}px", code="thumbnail-oversized"
        )
    if original_size <= 0:
        raise DomainError("original_size must be positive", code="invalid-original-size")

    webp_bytes = webp_reencode(thumb_bytes, cfg.webp_quality)
    digest = hashlib.sha256(main_bytes).hexdigest()
    main_rel = f"{digest[:2]}/{digest}.jpg"
    thumb_rel = f"{digest[:2]}/{digest}.webp"

    media = Path(cfg.media_dir)
    (media / digest[:2]).mkdir(parents=True, exist_ok=True)
    # files land before the metadata row; a crash in between leaves only a sweepable orphan
    (media / main_rel).write_bytes(main_bytes)
    (media / thumb_rel).write_bytes(webp_bytes)

    compressed_size = len(main_bytes)
    with db.write_tx():
        cur = db.execute(
            "INSERT INTO photo_assets (original_size, compressed_size, compression_ratio,"
            " thumbnail_size, main_path, thumb_path, content_hash, uploaded_at)"
            " VALUES (?, ?, ?, ?, ?, ?, ?, ?)",
            (
                original_size,
                compressed_size,
                original_size / compressed_size,
                len(webp_bytes),
                main_rel,
                thumb_rel,
                digest,
                ts(cfg.now()),
            ),
        )
        asset_id = cur.lastrowid
    return get_asset(db, asset_id)


def get_asset(db: Database, asset_id: int) -> dict:
    row = db.query_one("SELECT * FROM photo_assets WHERE id=?", (asset_id,))
    if row is None:
        raise NotFound(f"no photo asset {asset_id}")
    return dict(row)


def serve_photo(db: Database, cfg: Config, asset_id: int, variant: str) -> tuple[bytes, str]:
    asset = get_asset(db, asset_id)
    if variant == "main":
        rel, content_type = asset["main_path"], "image/jpeg"
    elif variant == "thumb":
        rel, content_type = asset["thumb_path"], "image/webp"
    else:
        raise NotFound(f"unknown photo variant: {variant}")
    path = Path(cfg.media_dir) / rel
    if not path.is_file():
        raise NotFound(f"missing stored file for asset {asset_id}")
    return path.read_bytes(), content_type


def metadata_scan(db: Database, cfg: Config) -> list[dict]:
    """Cross-check every asset row against the files on disk; returns inconsistencies."""
    problems = []
    media = Path(cfg.media_dir)
    for row in db.query("SELECT * FROM photo_assets ORDER BY id"):
        main = media / row["main_path"]
        thumb = media / row["thumb_path"]
        if not main.is_file() or not thumb.is_file():
            problems.append({"asset_id": row["id"], "problem": "missing-file"})
            continue
        main_bytes = main.read_bytes()
        if len(main_bytes) != row["compressed_size"]:
            problems.append({"asset_id": row["id"], "problem": "compressed-size-mismatch"})
        if thumb.stat().st_size != row["thumbnail_size"]:
            problems.append({"asset_id": row["id"], "problem": "thumbnail-size-mismatch"})
        if hashlib.sha256(main_bytes).hexdigest() != row["content_hash"]:
            problems.append({"asset_id": row["id"], "problem": "hash-mismatch"})
        recomputed = row["original_size"] / row["compressed_size"]
        if abs(recomputed - row["compression_ratio"]) > 1e-6 * recomputed:
            problems.append({"asset_id": row["id"], "problem": "ratio-mismatch"})
    return problems


def sweep_orphans(db: Database, cfg: Config) -> list[str]:
    """Remove files in the media dir not referenced by any asset row."""
    referenced = set()
    for row in db.query("SELECT main_path, thumb_path FROM photo_assets"):
        referenced.add(row["main_path"])
        referenced.add(row["thumb_path"])
    removed = []
    media = Path(cfg.media_dir)
    if not media.is_dir():
        return removed
    for path in media.rglob("*"):
        if path.is_file() and str(path.relative_to(media)) not in referenced:
            path.unlink()
            removed.append(str(path.relative_to(media)))
    return removed
