"""Function handles: a callable plus domain and optional analytic derivatives."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, OrderTooHigh


@dataclass(frozen=True)
class FuncHandle:
    """A scalar function on an interval, vectorized over numpy arrays.

    ``deriv(t, k)`` returns the k-th derivative for 0 <= k <= d_max when
    analytic derivatives are available; ``deriv(t, 0)`` must agree with the
    function itself.  Domain endpoints are admitted when the formula extends
    continuously there; evaluations that come out non-finite raise
    ``DomainError``.
    """

    fn: object
    domain: tuple = (-math.inf, math.inf)
    deriv: object = None
    d_max: int = 0
    name: str = ""

    def __call__(self, t):
        arr = np.asarray(t, dtype=np.float64)
        lo, hi = self.domain
        if np.any(arr < lo) or np.any(arr > hi):
            raise DomainError(
                f"{self.name or 'function'} evaluated outside its domain [{lo:g}, {hi:g}]"
            )
        out = np.asarray(self.fn(arr), dtype=np.float64)
        if not np.all(np.isfinite(out)):
            raise DomainError(f"{self.name or 'function'} is not finite at a requested point")
        if np.ndim(t) == 0:
            return float(out)
        return out

    def deriv_at(self, t, k):
        """Analytic k-th derivative; raises ``OrderTooHigh`` beyond d_max."""
        k = int(k)
        if k == 0:
            return self(t)
        if self.deriv is None or k > self.d_max:
            raise OrderTooHigh(
                f"analytic derivatives of order {k} are not available for {self.name or 'function'}"
            )
        lo, hi = self.domain
        if t < lo or t > hi:
            raise DomainError(f"derivative requested outside [{lo:g}, {hi:g}]")
        val = float(self.deriv(float(t), k))
        if not math.isfinite(val):
            raise DomainError(f"derivative of {self.name or 'function'} not finite at t={t:g}")
        return val

    def has_analytic(self, k):
        return self.deriv is not None and int(k) <= self.d_max

    def interior_distance(self, t):
        lo, hi = self.domain
        return min(t - lo, hi - t)


def from_callable(fn, domain=(-math.inf, math.inf), name=""):
    """Wrap a plain vectorized callable with no analytic derivatives."""
    return FuncHandle(fn=fn, domain=domain, name=name)


def evenize(f, name=""):
    """The even function t -> f(|t|) on the mirrored domain."""
    lo, hi = f.domain
    if lo > 0:
        raise DomainError("evenize needs a domain reaching down to 0")
    return FuncHandle(
        fn=lambda t: f.fn(np.abs(t)),
        domain=(-hi, hi),
        name=name or (f.name + "_even" if f.name else "even"),
    )


def chebyshev_grid(lo, hi, n):
    """n Chebyshev points of the first kind mapped strictly inside (lo, hi)."""
    n = int(n)
    if n < 1 or n > 64:
        raise ValueError("grid size must be in 1..64")
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        raise ValueError("grid interval must be finite and nonempty")
    i = np.arange(n)
    x = np.cos(np.pi * (2 * i + 1) / (2 * n))
    return np.sort(0.5 * (lo + hi) + 0.5 * (hi - lo) * x)


def uniform_grid(lo, hi, n):
    """n equally spaced interior points of (lo, hi)."""
    n = int(n)
    if n < 1 or n > 64:
        raise ValueError("grid size must be in 1..64")
    pts = np.linspace(lo, hi, n + 2)[1:-1]
    return pts
