from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any


class Status(str, enum.Enum):
    VALID = "valid"
    COUNTERMODEL = "countermodel"
    NONE_WITHIN_BOUNDS = "none-within-bounds"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Verdict:
    """Outcome of a consequence check.

    ``witness`` is semantics-specific: an assignment dict for matrix
    semantics, a ``(model, world)`` pair for Kripke and star search.
    """
    status: Status
    witness: Any = None
    searched: int = 0

    @property
    def valid(self) -> bool:
        return self.status is Status.VALID

    @property
    def refuted(self) -> bool:
        return self.status is Status.COUNTERMODEL

    @property
    def exit_code(self) -> int:
        return {Status.VALID: 0, Status.COUNTERMODEL: 1, Status.NONE_WITHIN_BOUNDS: 2}[self.status]
