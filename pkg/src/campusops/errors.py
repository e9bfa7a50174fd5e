"""Domain error hierarchy. Each error carries a stable machine code."""

from __future__ import annotations


class DomainError(Exception):
    code = "domain-error"

    def __init__(self, message: str = "", *, code: str | None = None):
        if code is not None:
            self.code = code
        super().__init__(message or self.code)

    @property
    def message(self) -> str:
        return str(self)


class InvalidCredentials(DomainError):
    code = "invalid-credentials"


class Unauthenticated(DomainError):
    code = "unauthenticated"


class Forbidden(DomainError):
    code = "deny"


class ForbiddenRole(DomainError):
    code = "forbidden-role"


class NotFound(DomainError):
    code = "not-found"


class WrongStatus(DomainError):
    code = "wrong-status"


class WrongState(DomainError):
    code = "wrong-state"


class ValidationError(DomainError):
    code = "validation-error"


# HTTP status per error code; anything unlisted maps to 400.
STATUS_BY_CODE = {
    "invalid-credentials": 401,
    "unauthenticated": 401,
    "deny": 403,
    "forbidden-role": 403,
    "not-the-incharge": 403,
    "not-found": 404,
    "wrong-status": 409,
    "wrong-state": 409,
    "already-submitted": 409,
    "already-responded": 409,
    "insufficient-stock": 409,
    "multi-worker-not-allowed": 409,
    "storage-not-empty": 409,
    "username-taken": 409,
    "too-large": 413,
}


def http_status(err: DomainError) -> int:
    return STATUS_BY_CODE.get(err.code, 400)
