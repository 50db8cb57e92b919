"""Utility functions of time-average rates and the 1-D controller problems built on them."""
from __future__ import annotations

import math
from dataclasses import dataclass

FAMILIES = ("log", "linear")


@dataclass(frozen=True)
class UtilitySpec:
    family: str = "linear"
    theta: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown utility family {self.family!r}; expected one of {FAMILIES}")
        if not self.theta > 0:
            raise ValueError("utility weight theta must be positive")

    def __call__(self, x: float) -> float:
        if self.family == "log":
            return self.theta * math.log1p(x)
        return self.theta * x

    def inverse(self, y: float) -> float:
        if self.family == "log":
            return math.expm1(y / self.theta)
        return y / self.theta

    @classmethod
    def from_dict(cls, doc) -> "UtilitySpec":
        if isinstance(doc, UtilitySpec):
            return doc
        return cls(doc.get("family", "linear"), float(doc.get("theta", 1.0)))

    def to_dict(self) -> dict:
        return {"family": self.family, "theta": self.theta}


def golden_section_min(fn, lo: float, hi: float, tol: float = 1e-9, max_iter: int = 200) -> float:
    """Minimizer of a unimodal ``fn`` on [lo, hi]; endpoints are compared at the end."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
    x = 0.5 * (a + b)
    return min((lo, hi, x), key=lambda t: (fn(t), -t))


def penalized_rate(util: UtilitySpec, price: float, V: float, upper: float,
                   closed_form: bool = True) -> float:
    """Argmin of ``x * price - V * util(x)`` over [0, upper].

    Ties resolve to the larger rate.  ``closed_form=False`` forces the
    numeric golden-section path.
    """
    if upper <= 0:
        return 0.0
    if not closed_form:
        return golden_section_min(lambda x: x * price - V * util(x), 0.0, upper)
    if util.family == "linear":
        return upper if price <= V * util.theta else 0.0
    if util.family == "log":
        if price <= 0:
            return upper
        return min(max(V * util.theta / price - 1.0, 0.0), upper)
    return golden_section_min(lambda x: x * price - V * util(x), 0.0, upper)
