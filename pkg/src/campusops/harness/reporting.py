"""Turn raw sample files back into runs and a human table.

The samples file is the machine-readable source of truth; the table is a
pure function of it, so re-rendering from the same file is byte-identical.
"""

from __future__ import annotations

from .measuring import MeasurementRun


def load_samples(path: str) -> list[MeasurementRun]:
    runs: dict[tuple[str, str], MeasurementRun] = {}
    order: list[tuple[str, str]] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            operation, mode, size, ms = line.split(",")
            key = (operation, mode)
            if key not in runs:
                runs[key] = MeasurementRun(operation=operation, mode=mode)
                order.append(key)
            runs[key].payload_bytes.append(int(size))
            runs[key].latency_ms.append(float(ms))
    return [runs[k] for k in order]


def render_report(runs: list[MeasurementRun]) -> str:
    by_op: dict[str, dict[str, MeasurementRun]] = {}
    op_order: list[str] = []
    for run in runs:
        if run.operation not in by_op:
            by_op[run.operation] = {}
            op_order.append(run.operation)
        by_op[run.operation][run.mode] = run

    header = f"{'operation':<22} {'mode':<10} {'mean bytes':>12} {'mean ms':>9} {'reduction':>10}"
    lines = [header, "-" * len(header)]
    for op in op_order:
        modes = by_op[op]
        full = modes.get("full_page")
        frag = modes.get("fragment")
        reduction = ""
        if full is not None and frag is not None:
            value = 1.0 - (frag.summary()["mean_bytes"] / full.summary()["mean_bytes"])
            reduction = f"{value * 100:.1f}%"
        for mode in ("full_page", "fragment"):
            run = modes.get(mode)
            if run is None:
                continue
            s = run.summary()
            cell = reduction if mode == "fragment" else ""
            lines.append(
                f"{op:<22} {mode:<10} {s['mean_bytes']:>12.1f} {s['mean_ms']:>9.2f} {cell:>10}"
            )
    return "\n".join(lines) + "\n"
