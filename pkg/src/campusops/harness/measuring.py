"""Payload/latency measurement against a running server.

Each configured operation is requested in both render modes: full_page
(no marker header) and fragment (HX-Request: true). Payload is the exact
response body byte count, never headers; latency is wall clock around the
request. Samples stream to a delimited file, one line each:
operation,mode,bytes,latency_ms
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field

import httpx

from ..errors import DomainError

MODES = ("full_page", "fragment")


@dataclass
class MeasurementRun:
    operation: str
    mode: str
    payload_bytes: list[int] = field(default_factory=list)
    latency_ms: list[float] = field(default_factory=list)

    @property
    def samples(self) -> int:
        return len(self.payload_bytes)

    def summary(self) -> dict:
        return {
            "mean_bytes": statistics.fmean(self.payload_bytes),
            "median_bytes": statistics.median(self.payload_bytes),
            "p95_bytes": _p95(self.payload_bytes),
            "mean_ms": statistics.fmean(self.latency_ms),
            "median_ms": statistics.median(self.latency_ms),
            "p95_ms": _p95(self.latency_ms),
        }


def _p95(values) -> float:
    ordered = sorted(values)
    return float(ordered[min(len(ordered) - 1, int(round(0.95 * (len(ordered) - 1))))])


def load_ops(path: str) -> list[tuple[str, str]]:
    ops = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            name, op_path = (p.strip() for p in line.split("|"))
            ops.append((name, op_path))
    return ops


def resolve_ops(ops: list[tuple[str, str]], manifest: dict) -> list[tuple[str, str]]:
    values = {
        "date": manifest["measure_date"],
        "record": str(manifest["record_id"]),
        "item": str(manifest["item_id"]),
    }
    resolved = []
    for name, path in ops:
        for key, value in values.items():
            path = path.replace("{" + key + "}", value)
        resolved.append((name, path))
    return resolved


def login_client(base_url: str, username: str, password: str) -> httpx.Client:
    client = httpx.Client(base_url=base_url, timeout=30.0, follow_redirects=False)
    try:
        response = client.post("/login", data={"username": username, "password": password})
    except httpx.TransportError as exc:
        client.close()
        raise DomainError(f"server unreachable at {base_url}: {exc}", code="server-unreachable") from exc
    if response.status_code != 303:
        client.close()
        raise DomainError(f"login failed for {username!r}", code="auth-failure")
    return client


def measure(
    client: httpx.Client,
    ops: list[tuple[str, str]],
    samples: int = 50,
    warmup: int = 2,
) -> list[MeasurementRun]:
    runs: list[MeasurementRun] = []
    headers_by_mode = {"full_page": {}, "fragment": {"HX-Request": "true"}}
    base_headers = {"Accept-Encoding": "identity"}
    for name, path in ops:
        for mode in MODES:
            headers = {**base_headers, **headers_by_mode[mode]}
            for _ in range(warmup):
                client.get(path, headers=headers).raise_for_status()
            run = MeasurementRun(operation=name, mode=mode)
            for _ in range(samples):
                start = time.perf_counter()
                response = client.get(path, headers=headers)
                elapsed_ms = (time.perf_counter() - start) * 1000.0
                response.raise_for_status()
                run.payload_bytes.append(len(response.content))
                run.latency_ms.append(elapsed_ms)
            runs.append(run)
    return runs


def write_samples(runs: list[MeasurementRun], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for run in runs:
            for size, ms in zip(run.payload_bytes, run.latency_ms):
                fh.write(f"{run.operation},{run.mode},{size},{ms:.3f}\n")
