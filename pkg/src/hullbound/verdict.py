from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

MEMBER = "member"
NON_MEMBER = "non-member"
BORDERLINE = "borderline"


@dataclass
class MembershipVerdict:
    """Outcome of a hull-membership query, exact or numeric.

    ``residual`` is set by the exact oracle, ``value`` (the constrained minimax
    optimum) by the numeric one. ``certificate`` is a polynomial with
    ``|P(w)| >= 1 > sup_K |P|``, present only after re-verification passed.
    """

    status: str
    w: Any
    degree_bound: int
    residual: float | None = None
    value: float | None = None
    certificate: Any = None
    verification_failed: bool = False
    diagnostics: dict = field(default_factory=dict)

    @property
    def is_member(self) -> bool:
        return self.status == MEMBER
