"""Reflection positivity and negativity on symmetric intervals and the line.

A function phi is reflection positive on (-a, a) when both the difference
kernel phi((t-s)/2) on (-a, a) and the sum kernel phi((t+s)/2) on (0, a)
build PSD Grams; the negative-definite analogue swaps psd_check for
cnd_check and is cross-checked through exp(-h*psi) sampling and, on the
whole line, through the Bernstein property of psi restricted to (0, inf).
Verdicts are grid decisions: PASS means no violation was found at this grid
and tolerance, nothing stronger.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import measure as msr
from .diffcalc import bernstein_check, convex_decreasing_check
from .errors import (
    ConsistencyError,
    DomainError,
    InvalidMeasure,
    NotConvex,
    NotSymmetric,
)
from .funcs import FuncHandle, chebyshev_grid
from .kernelcheck import (
    FAIL,
    PASS,
    PositivityVerdict,
    cnd_check,
    default_tol,
    gram_minus,
    gram_plus,
    psd_check,
    schoenberg_check,
)

_EPS = np.finfo(float).eps

# probe horizon replacing a when the requested interval is the whole line
_UNBOUNDED_HORIZON = 4.0


@dataclass(frozen=True)
class ReflectionReport:
    """Both kernel verdicts plus the evenness flag and combined outcome.

    The Schoenberg and Bernstein entries are filled only by the
    negative-definite check (None otherwise); the combined verdict is PASS
    exactly when evenness and every filled route pass.
    """

    minus_verdict: PositivityVerdict
    plus_verdict: PositivityVerdict
    a: float
    symmetric: bool
    verdict: str
    schoenberg_minus: PositivityVerdict | None = None
    schoenberg_plus: PositivityVerdict | None = None
    bernstein_verdict: PositivityVerdict | None = None

    @property
    def passed(self):
        return self.verdict == PASS

    def to_dict(self):
        doc = {
            "verdict": self.verdict,
            "a": self.a,
            "symmetric": self.symmetric,
            "minus": self.minus_verdict.to_dict(),
            "plus": self.plus_verdict.to_dict(),
        }
        if self.schoenberg_minus is not None:
            doc["schoenberg_minus"] = self.schoenberg_minus.to_dict()
        if self.schoenberg_plus is not None:
            doc["schoenberg_plus"] = self.schoenberg_plus.to_dict()
        if self.bernstein_verdict is not None:
            doc["bernstein"] = self.bernstein_verdict.to_dict()
        return doc


@dataclass(frozen=True)
class BoundaryReport:
    """Outcome of the boundary-derivative test for a transform on (-a, a)."""

    sufficient: bool
    rp: ReflectionReport
    necessary_witness: float | None


def _evenness(f, sym_grid, tol):
    vals = np.atleast_1d(f(sym_grid))
    scale = max(1.0, float(np.abs(vals).max()))
    asym = float(np.abs(vals - np.atleast_1d(f(-sym_grid))).max())
    return asym <= tol * scale, vals


def reflection_positive_check(phi, a, n=12, tol=None):
    """PSD test of both kernels of ``phi`` on Chebyshev grids in (-a, a).

    The report combines evenness (within tol*scale), the difference kernel
    on a symmetric grid, and the sum kernel on a (0, a) grid.
    """
    a = float(a)
    if not (a > 0 and math.isfinite(a)):
        raise DomainError("a must be positive and finite")
    n = int(n)
    if tol is None:
        tol = default_tol(n)
    grid_m = chebyshev_grid(-a, a, n)
    grid_p = chebyshev_grid(0.0, a, n)
    symmetric, _ = _evenness(phi, grid_m, tol)
    minus_v = psd_check(gram_minus(phi, grid_m), tol)
    plus_v = psd_check(gram_plus(phi, grid_p), tol)
    ok = symmetric and minus_v.passed and plus_v.passed
    return ReflectionReport(minus_v, plus_v, a, symmetric, PASS if ok else FAIL)


def reflection_negative_check(psi, a, n=12, hs=None, tol=None):
    """Negative-definite analogue on (-a, a), with a = inf allowed.

    Runs every route and combines them: cnd on both kernels, the
    exp(-h*psi) positive-definiteness scan on both kernels, and for a = inf
    the Bernstein test of psi - psi(0) on (0, horizon).  All routes report
    individually so a FAIL shows which necessary condition broke.  Raises
    ``NotSymmetric`` when psi is not even within tol*scale.
    """
    a = float(a)
    if not a > 0:
        raise DomainError("a must be positive")
    n = int(n)
    if tol is None:
        tol = default_tol(n)
    a_eff = a if math.isfinite(a) else _UNBOUNDED_HORIZON
    grid_m = chebyshev_grid(-a_eff, a_eff, n)
    grid_p = chebyshev_grid(0.0, a_eff, n)
    symmetric, vals = _evenness(psi, grid_m, tol)
    if not symmetric:
        raise NotSymmetric("function must be even for the reflection tests")
    minus_v = cnd_check(gram_minus(psi, grid_m), tol)
    plus_v = cnd_check(gram_plus(psi, grid_p), tol)
    sch_m = schoenberg_check(psi, grid_m, hs, kind="minus", tol=tol)
    sch_p = schoenberg_check(psi, grid_p, hs, kind="plus", tol=tol)
    bern_v = None
    if math.isinf(a):
        psi0 = psi(0.0)
        shifted = FuncHandle(
            fn=lambda arr: np.asarray(psi(np.asarray(arr, dtype=np.float64))) - psi0,
            domain=(0.0, psi.domain[1]),
            deriv=psi.deriv,
            d_max=psi.d_max,
            name=(psi.name or "psi") + "_shifted",
        )
        bern_v = bernstein_check(shifted, grid_p, k_max=3, tol=tol)
    routes = [minus_v, plus_v, sch_m, sch_p] + ([bern_v] if bern_v is not None else [])
    if any(v.verdict == FAIL for v in routes):
        verdict = FAIL
    elif all(v.passed for v in routes):
        verdict = PASS
    else:
        verdict = "INCONCLUSIVE"
    return ReflectionReport(
        minus_v, plus_v, a, symmetric, verdict,
        schoenberg_minus=sch_m, schoenberg_plus=sch_p, bernstein_verdict=bern_v,
    )


def polya_check(phi, grid, tol=None):
    """Sufficient test: even, nonnegative, convex, decreasing on [0, inf).

    PASS certifies positive definiteness on the line.  FAIL only means the
    criterion is not met at this grid; it is not a refutation (Gaussians
    fail convexity near 0 yet are positive definite).  Evenness is the
    caller's promise; the grid must sit in [0, inf).
    """
    grid = np.sort(np.atleast_1d(np.asarray(grid, dtype=np.float64)))
    if grid.size < 3:
        raise ValueError("need at least three points")
    if grid[0] < 0:
        raise DomainError("grid must lie in [0, inf)")
    if tol is None:
        tol = default_tol(grid.size)
    vals = np.atleast_1d(phi(grid))
    scale = max(1.0, float(np.abs(vals).max()))
    i_min = int(np.argmin(vals))
    if vals[i_min] < -tol * scale:
        return PositivityVerdict(
            FAIL, float(vals[i_min]) / scale, tol, scale,
            np.array([float(grid[i_min])]), grid,
        )
    return convex_decreasing_check(phi, grid, tol)


def extendable_check(psi, a, tol=None):
    """Whether a convex nonnegative ``psi`` on [0, a] extends to a positive
    definite even function, i.e. the one-sided slope at a is <= tol.

    Returns ``(flag, extension)`` where the extension is psi(min(|t|, a)) on
    the whole line: psi continued by the constant psi(a) and mirrored.  The
    positive-definiteness claim for the extension holds only when the flag
    is true.  Raises ``NotConvex`` when the sampled convexity or
    nonnegativity precondition fails.
    """
    a = float(a)
    if not (a > 0 and math.isfinite(a)):
        raise DomainError("a must be positive and finite")
    if tol is None:
        tol = default_tol(24)
    pts = np.concatenate(([0.0], chebyshev_grid(0.0, a, 22), [a]))
    vals = np.atleast_1d(psi(pts))
    scale = max(1.0, float(np.abs(vals).max()))
    if float(vals.min()) < -tol * scale:
        raise NotConvex("function must be nonnegative on [0, a]")
    slopes = np.diff(vals) / np.diff(pts)
    drop = float(np.max(slopes[:-1] - slopes[1:]))
    if drop > tol * scale:
        raise NotConvex("sampled slopes decrease; function is not convex on [0, a]")
    # one-sided slope at a-: first-order backward differences pushed through
    # three extrapolation levels (base steps h, 2h, 4h, 8h)
    h0 = min(_EPS**0.2 * max(1.0, a), a / 10.0)
    d = [(float(psi(a)) - float(psi(a - h0 * 2.0**j))) / (h0 * 2.0**j) for j in range(4)]
    r1 = [2.0 * d[j] - d[j + 1] for j in range(3)]
    r2 = [(4.0 * r1[j] - r1[j + 1]) / 3.0 for j in range(2)]
    slope_a = (8.0 * r2[0] - r2[1]) / 7.0
    base = psi.fn
    extension = FuncHandle(
        fn=lambda arr: np.asarray(
            base(np.minimum(np.abs(np.asarray(arr, dtype=np.float64)), a)),
            dtype=np.float64,
        ),
        domain=(-math.inf, math.inf),
        name=(psi.name or "psi") + "_extended",
    )
    return bool(slope_a <= tol), extension


def _transform_abs_handle(mu, a):
    def fn(arr):
        flat = np.atleast_1d(np.asarray(arr, dtype=np.float64)).ravel()
        out = np.array([msr.laplace(mu, abs(float(tt)), tol=1e-10).value for tt in flat])
        return out.reshape(np.shape(arr))

    return FuncHandle(fn=fn, domain=(-a, a), name="transform_even")


def boundary_derivative_check(mu, a, n=12, tol=None):
    """Boundary-derivative test for phi(t) = transform of mu at |t|.

    ``sufficient`` is the one-sided slope condition at a (slope <= tol
    implies reflection positivity); ``rp`` is the direct kernel check; when
    rp passes and phi is nonconstant, the scan reports the smallest grid
    point b in (0, a] (step a/1000) where the transform slope is < -tol --
    such a point must exist, though the true infimum may be smaller.  A
    nonpositive boundary slope together with a failed kernel check is a
    contradiction and raises ``ConsistencyError``.
    """
    a = float(a)
    if not (a > 0 and math.isfinite(a)):
        raise DomainError("a must be positive and finite")
    n = int(n)
    if tol is None:
        tol = default_tol(n)
    for t in (1e-3 * a, 0.5 * a, a):
        msr.laplace(mu, float(t), tol=1e-6)  # DivergentIntegral if unusable
    slope = msr.laplace_deriv(mu, a, 1).value
    sufficient = slope <= tol
    phi = _transform_abs_handle(mu, a)
    rp = reflection_positive_check(phi, a, n, tol)
    witness = None
    if rp.passed:
        grid = chebyshev_grid(-a, a, max(n, 12))
        vals = np.atleast_1d(phi(grid))
        scale = max(1.0, float(np.abs(vals).max()))
        if float(vals.max() - vals.min()) > tol * scale:
            step = 1e-3 * a
            for k in range(1, 1001):
                b = k * step
                if msr.laplace_deriv(mu, b, 1).value < -tol:
                    witness = b
                    break
    if sufficient and rp.verdict == FAIL:
        raise ConsistencyError(
            "boundary slope is nonpositive yet the kernel check failed; "
            "the two routes contradict beyond tolerance"
        )
    return BoundaryReport(sufficient=sufficient, rp=rp, necessary_witness=witness)


def periodic_rp(mu_plus, beta, t, tol=1e-10):
    """Value at t of the beta-periodic reflection positive function
    integral of e^{-r lam} + e^{-(beta - r) lam} dmu_plus, r = t mod beta.

    The reduction uses exact floating-point fmod with a sign fix-up, so
    f(t + k*beta) = f(t) and f(beta - t) = f(t) hold to the last bit.
    """
    beta = float(beta)
    if not (beta > 0 and math.isfinite(beta)):
        raise ValueError("beta must be positive and finite")
    lam, _ = mu_plus.atom_arrays()
    if (lam.size and np.any(lam < 0)) or (
        mu_plus.density is not None and mu_plus.density.lo < 0
    ):
        raise InvalidMeasure("periodic construction needs a measure on [0, inf)")
    r = math.fmod(float(t), beta)
    if r < 0.0:
        r += beta
    return msr.laplace(mu_plus, r, tol).value + msr.laplace(mu_plus, beta - r, tol).value


def double_integral_rp(atoms, t, tol=1e-10):
    """Sum of w * (e^{-lam|t|} + e^{-lam(beta - |t|)}) over (lam, beta, w) atoms.

    Each beta must stay above |t| (the defining strip is beta >= a > |t|,
    and the best available a is the smallest beta in the list); an empty
    atom list gives 0.  Sums are exact, ``tol`` is accepted for signature
    uniformity only.
    """
    t = float(t)
    rows = [(float(l), float(b), float(w)) for (l, b, w) in atoms]
    for lam, beta, w in rows:
        if lam < 0 or w < 0 or beta <= 0 or not all(map(math.isfinite, (lam, beta, w))):
            raise InvalidMeasure("atoms must be finite (lam >= 0, beta > 0, weight >= 0) triples")
    a = min((b for _, b, _ in rows), default=math.inf)
    if abs(t) >= a:
        raise DomainError(f"|t| = {abs(t):g} must stay below the smallest beta ({a:g})")
    x = abs(t)
    total = 0.0
    for lam, beta, w in rows:
        total += w * (math.exp(-lam * x) + math.exp(-lam * (beta - x)))
    return total
