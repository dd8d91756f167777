"""
Report types for bound evaluation.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from tw_chain import Klass

log = logging.getLogger(__name__)


class ClassPair(str, Enum):
    AA = "AA"
    BB = "BB"
    AB = "AB"
    BA = "BA"
    A = "A"
    B = "B"
    BC = "BC"
    AC = "AC"


@dataclass(frozen=True)
class BoundsConfig:
    """
    Tolerances for bound evaluation. Keep these explicit; they decide what
    counts as a theorem violation.
    """

    # Denominators at or below this make their branch +inf.
    vacuity: float = 1e-12
    # slack_upper at or below this is reported as tight (absolute).
    tight: float = 1e-9
    # Negative slack within this (scaled by max(1, |exact|)) is float noise.
    noise: float = 1e-9
    # Slack allowed below zero on probability masses.
    probability: float = 1e-12
    # Relative tolerance for proof identities and monotonicity.
    identity: float = 1e-10
    # Cap on |A ∪ B| for the quadratic full report.
    report_cap: int = 500
    # Cap on |A ∪ B| for the proof-identity suite.
    identity_cap: int = 64


DEFAULT_BOUNDS = BoundsConfig()


@dataclass(frozen=True)
class BoundReport:
    """lower <= exact <= upper for one quantity, with slacks and flags."""

    quantity: str
    class_pair: ClassPair
    x: str
    y: Optional[str]
    lower: float
    exact: float
    upper: float
    slack_lower: float
    slack_upper: float
    vacuous: bool
    tight: bool
    # a slack in [-noise, 0) was clamped to 0
    noise: bool = False
    # a slack below -noise: the inequality failed
    violated: bool = False
    # bound obtained by exchanging the roles of A and B
    mirrored: bool = False

    @classmethod
    def evaluate(
        cls,
        quantity: str,
        class_pair: ClassPair,
        x: str,
        y: Optional[str],
        lower: float,
        exact: float,
        upper: float,
        config: BoundsConfig = DEFAULT_BOUNDS,
        mirrored: bool = False,
    ) -> "BoundReport":
        vacuous = math.isinf(upper)
        tol = config.noise * max(1.0, abs(exact))
        noise = violated = False

        slack_lower = exact - lower
        if slack_lower < 0.0:
            if slack_lower >= -tol:
                slack_lower, noise = 0.0, True
            else:
                violated = True

        slack_upper = upper - exact
        if slack_upper < 0.0:
            if slack_upper >= -tol:
                slack_upper, noise = 0.0, True
            else:
                violated = True

        if violated:
            log.warning("bound violated: %s %s (%s, %s): %.17g <= %.17g <= %.17g",
                        quantity, class_pair.value, x, y, lower, exact, upper)
        return cls(
            quantity=quantity,
            class_pair=class_pair,
            x=x,
            y=y,
            lower=lower,
            exact=exact,
            upper=upper,
            slack_lower=slack_lower,
            slack_upper=slack_upper,
            vacuous=vacuous,
            tight=(not vacuous) and slack_upper <= config.tight,
            noise=noise,
            violated=violated,
            mirrored=mirrored,
        )


@dataclass(frozen=True)
class SeparationReport:
    """
    p(b, c, C, A) = H_C(b, c) - H_{C∪A}(b, c), bounded by σ_b.

    ``other`` is the class whose avoidance is measured: A in the standard
    form, B in the mirrored form started from a in A (bound ψ_a).
    """

    b: str
    c: str
    h_C: float
    h_CA: float
    defect_p: float
    bound: float
    other: Klass = Klass.A
    holds: bool = True

    def as_bound_report(self, config: BoundsConfig = DEFAULT_BOUNDS) -> BoundReport:
        pair = ClassPair.BC if self.other is Klass.A else ClassPair.AC
        name = "p(b,c,C,A)" if self.other is Klass.A else "p(a,c,C,B)"
        return BoundReport.evaluate(name, pair, self.b, self.c, 0.0, self.defect_p, self.bound, config)


@dataclass(frozen=True)
class MonotonicityReport:
    """
    Green case:   G_inner(x, y) <= G_outer(x, y), x, y in inner.
    Hitting case: H_inner(x, y) >= H_outer(x, y), y in inner, x outside outer;
    plus the split of H_outer(x, .) into the inner part (T_inner = T_outer)
    and the rest, and the mass that never reaches ``outer``.
    """

    kind: str
    x: str
    y: str
    inner_value: float
    outer_value: float
    ordered: bool
    p_same: Optional[float] = None
    p_diff: Optional[float] = None
    transience_defect: Optional[float] = None


@dataclass(frozen=True)
class IdentityCheck:
    """One evaluated identity (``==``) or inequality (``<=``)."""

    name: str
    args: Tuple[str, ...]
    lhs: float
    rhs: float
    relation: str
    residual: float
    holds: bool


@dataclass(frozen=True)
class FullReport:
    green: List[BoundReport] = field(default_factory=list)
    hitting: List[BoundReport] = field(default_factory=list)
    separation: List[SeparationReport] = field(default_factory=list)

    def rows(self, config: BoundsConfig = DEFAULT_BOUNDS) -> List[BoundReport]:
        """Deterministic order: Green, then hitting time, then separation."""
        return [*self.green, *self.hitting, *(s.as_bound_report(config) for s in self.separation)]

    @property
    def violations(self) -> List[BoundReport]:
        return [r for r in self.rows() if r.violated]
