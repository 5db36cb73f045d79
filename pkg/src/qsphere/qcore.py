"""Scalar layer: q-dependent constants and special functions.

Everything downstream works at a fixed deformation parameter 0 < q < 1.
The derived constant lam = (q - 1/q)^-1 is negative on that range.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

Q_SAFE_RANGE = (0.05, 0.95)


@dataclass(frozen=True)
class QParams:
    """Deformation parameter q with derived constants and a default tolerance."""

    q: float
    tol: float = 1e-11
    lam: float = field(init=False)

    def __post_init__(self):
        if not (0.0 < self.q < 1.0):
            raise ValueError(f"q must lie strictly between 0 and 1, got {self.q}")
        if not (Q_SAFE_RANGE[0] <= self.q <= Q_SAFE_RANGE[1]):
            warnings.warn(
                f"q={self.q} outside [{Q_SAFE_RANGE[0]}, {Q_SAFE_RANGE[1]}]: "
                "powers q^-x become badly conditioned",
                stacklevel=2,
            )
        object.__setattr__(self, "lam", 1.0 / (self.q - 1.0 / self.q))

    @property
    def lam_inv(self) -> float:
        return self.q - 1.0 / self.q


def tau(p: QParams, x: float) -> float:
    """q^-x - q^x.  Total on [-inf, +inf]; strictly increasing, odd in x."""
    if math.isinf(x):
        return math.inf if x > 0 else -math.inf
    return p.q ** (-x) - p.q**x


def q_pochhammer(a: complex, base: float, r) -> complex:
    """prod_{k=0}^{r-1} (1 - base^k a); the empty product (r=0) is 1.

    The base is explicit because downstream formulas mix base q and base q^2.
    r = math.inf truncates once |base^k a| drops below machine epsilon.
    """
    if r == math.inf:
        out = 1.0
        term = complex(a)
        k = 0
        while abs(term) > 1e-17 and k < 10000:
            out *= 1.0 - term
            term *= base
            k += 1
        return out
    if r < 0 or r != int(r):
        raise ValueError(f"finite r must be a nonnegative integer, got {r}")
    out = 1.0
    term = complex(a)
    for _ in range(int(r)):
        out *= 1.0 - term
        term *= base
    return out


def casimir_eigenvalues(p: QParams, x: float) -> tuple[float, float]:
    """The two-point spectrum (tau(x-1), tau(x+1)), ascending."""
    lo, hi = tau(p, x - 1.0), tau(p, x + 1.0)
    return (lo, hi) if lo <= hi else (hi, lo)
