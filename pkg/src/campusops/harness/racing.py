"""Concurrent issuance exercise against the HTTP surface."""

from __future__ import annotations

import threading

import httpx

from .measuring import login_client


def race(
    base_url: str,
    item_id: int,
    concurrency: int,
    username: str,
    password: str,
    area: str = "hostels",
    quantity: int = 1,
) -> dict:
    """Fire `concurrency` simultaneous unit issuances at one item."""
    results: list[int] = []
    barrier = threading.Barrier(concurrency)
    lock = threading.Lock()

    def worker():
        client = None
        try:
            client = login_client(base_url, username, password)
            barrier.wait()
            response = client.post(
                "/inventory/issue",
                data={
                    "item_id": str(item_id),
                    "quantity": str(quantity),
                    "area": area,
                    "issued_to": "race-harness",
                },
                headers={"HX-Request": "true"},
            )
            status = response.status_code
        except Exception:
            barrier.abort()
            status = -1
        finally:
            if client is not None:
                client.close()
        with lock:
            results.append(status)

    threads = [threading.Thread(target=worker) for _ in range(concurrency)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()

    client = login_client(base_url, username, password)
    try:
        with httpx.Client(base_url=base_url, cookies=client.cookies, timeout=30.0) as api:
            remaining = None
            page = 1
            while remaining is None:
                data = api.get(f"/api/inventory/items?page={page}").json()
                for item in data["items"]:
                    if item["id"] == item_id:
                        remaining = item["available_quantity"]
                        break
                if page * 10 >= data["total"]:
                    break
                page += 1
    finally:
        client.close()
    return {
        "attempts": concurrency,
        "successes": sum(1 for s in results if s == 200),
        "conflicts": sum(1 for s in results if s == 409),
        "other": sum(1 for s in results if s not in (200, 409)),
        "remaining_quantity": remaining,
    }
