"""Exception types and the verdict record returned by validators."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


class WindowTooSmall(ValueError):
    """A result would reach cells outside the finite window."""


class CapExceeded(ValueError):
    """An exhaustive enumeration was asked to exceed its size cap."""


class BoundaryConditionError(ValueError):
    """The domain and boundary condition are incompatible."""


class NotAdaptedError(ValueError):
    """A four-section is not adapted to the coloring it is applied to."""


class NotInImageError(ValueError):
    """A coloring is not in the image of the transformation."""


class FormatError(ValueError):
    """Malformed input file. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Verdict:
    """Outcome of a clause-by-clause check.

    ``clause`` names the first failing clause and ``witness`` is a vertex,
    edge or other object exhibiting the failure. Truthiness follows ``ok``.
    """

    ok: bool
    clause: str = ""
    witness: Any = None

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return f"failed {self.clause}: witness {self.witness}"


PASS = Verdict(True)


def fail(clause: str, witness: Any = None) -> Verdict:
    return Verdict(False, clause, witness)
