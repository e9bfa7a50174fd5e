"""Campus operations server: scheduling, attendance, leave, inventory, photo evidence."""

__version__ = "0.1.0"
