from .measuring import MeasurementRun, login_client, measure, resolve_ops, write_samples
from .racing import race
from .reporting import load_samples, render_report
from .seeding import seed

__all__ = [
    "MeasurementRun",
    "load_samples",
    "login_client",
    "measure",
    "race",
    "render_report",
    "resolve_ops",
    "seed",
    "write_samples",
]
