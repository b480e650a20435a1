"""Exception types and resource limits shared across patchlab."""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass


class PatchlabError(Exception):
    """Base class. ``detail`` is a JSON-serializable dict for reports."""

    def __init__(self, message: str, **detail):
        super().__init__(message)
        self.detail = detail

    def to_dict(self) -> dict:
        return {"error": type(self).__name__, "message": str(self), "detail": self.detail}


class InvalidInput(PatchlabError):
    pass


# group axioms

class GroupAxiomError(InvalidInput):
    pass


class NotClosed(GroupAxiomError):
    pass


class NoIdentity(GroupAxiomError):
    pass


class NoInverse(GroupAxiomError):
    pass


class NonAssociative(GroupAxiomError):
    pass


class NotAHomomorphism(InvalidInput):
    pass


class NotAbelian(InvalidInput):
    pass


# systems

class Disconnected(InvalidInput):
    pass


class BadTriple(InvalidInput):
    pass


class NonCommutingSquare(InvalidInput):
    pass


class PreconditionFailed(PatchlabError):
    pass


class LiftFailed(PatchlabError):
    """A lift guaranteed by the vanishing connecting map did not exist."""


class CalibrationMismatch(PatchlabError):
    pass


class ResourceLimit(PatchlabError):
    pass


@dataclass(frozen=True)
class Limits:
    max_order: int = 24
    max_candidates: int = 2_000_000


_LIMITS: contextvars.ContextVar[Limits] = contextvars.ContextVar("patchlab_limits", default=Limits())


def current_limits() -> Limits:
    return _LIMITS.get()


@contextlib.contextmanager
def limits(**overrides):
    """Temporarily override resource limits (context-local)."""
    token = _LIMITS.set(Limits(**{**current_limits().__dict__, **overrides}))
    try:
        yield _LIMITS.get()
    finally:
        _LIMITS.reset(token)


def check_order(n: int, what: str = "group") -> None:
    cap = current_limits().max_order
    if n > cap:
        raise ResourceLimit(f"{what} of order {n} exceeds max_order={cap}", order=n, max_order=cap)


def check_candidates(n: int, what: str) -> None:
    cap = current_limits().max_candidates
    if n > cap:
        raise ResourceLimit(f"{what}: {n} candidates exceeds cap {cap}", candidates=n, cap=cap)
