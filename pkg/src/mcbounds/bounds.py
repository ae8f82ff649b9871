"""Analytic convergence-bound calculators.

Covers the geometric minorization bound (1-eps)^floor(n/n0), the
drift-based two-term bound (1-eps)^j + alpha^-n * B^(j-1) * E[h], the
univariate-to-bivariate drift conversion, and the helpers around them
(stationary moment bound, B constant, sup-h shortcut, threshold search,
integer-j optimization). Everything here is a pure function; large powers
are evaluated in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .errors import (
    ContainmentError,
    DriftConversionError,
    InputError,
    ThresholdNotReachedError,
)

__all__ = [
    "BoundReport",
    "Interval",
    "UnivariateDrift",
    "BivariateDrift",
    "DriftMinorizationInputs",
    "minorization_bound",
    "minorization_curve",
    "steps_to_threshold",
    "bivariate_from_univariate",
    "stationary_moment_bound",
    "b_constant",
    "sup_rh_via_containment",
    "drift_minorization_bound",
    "drift_minorization_log_terms",
    "optimize_drift_minorization",
]

# exp() overflows just above this; larger log-terms are reported as +inf
_EXP_OVERFLOW = 700.0


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi], used as a small-set / region description."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not self.lo <= self.hi:
            raise InputError(f"empty interval [{self.lo}, {self.hi}]")

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def grid(self, step: float) -> list[float]:
        """Probe points lo, lo+step, ..., including hi."""
        n = int(round((self.hi - self.lo) / step))
        pts = [self.lo + k * step for k in range(n + 1)]
        if pts[-1] < self.hi - 1e-12:
            pts.append(self.hi)
        return pts


@dataclass(frozen=True)
class BoundReport:
    """A bound (or exact-distance) curve with its threshold crossing.

    ``values`` holds floats for analytic bounds and ``Fraction`` entries for
    exact curves. ``js`` is populated only by the two-term drift bound, where
    each lattice point carries the minimizing j. ``inputs`` records the
    constants the curve was built from, for report provenance.
    """

    kind: str
    ns: tuple[int, ...]
    values: tuple
    threshold: float | None = None
    crossing: int | None = None
    js: tuple[int, ...] | None = None
    log_values: tuple[float, ...] | None = None
    inputs: Mapping[str, object] = field(default_factory=dict)

    def value_at(self, n: int) -> object:
        return self.values[self.ns.index(n)]

    def to_jsonable(self) -> dict:
        def render(v):
            if isinstance(v, Fraction):
                return {"exact": str(v), "float": float(v)}
            return v

        out = {
            "kind": self.kind,
            "ns": list(self.ns),
            "values": [render(v) for v in self.values],
            "threshold": self.threshold,
            "crossing": self.crossing,
            "inputs": dict(self.inputs),
        }
        if self.js is not None:
            out["js"] = list(self.js)
        if self.log_values is not None:
            out["log_values"] = list(self.log_values)
        return out


def minorization_bound(epsilon, n0: int, n: int):
    """Geometric bound (1-eps)^floor(n/n0) on the distance to stationarity.

    Returns a ``Fraction`` when ``epsilon`` is one (so exact-curve comparisons
    stay exact), a float otherwise.
    """
    if not 0 < epsilon <= 1:
        raise InputError(f"epsilon must be in (0, 1], got {epsilon}")
    if n0 < 1:
        raise InputError("n0 must be >= 1")
    if n < 0:
        raise InputError("n must be >= 0")
    return (1 - epsilon) ** (n // n0)


def minorization_curve(epsilon, n0: int, n_max: int, threshold: float | None = None) -> BoundReport:
    """Evaluate the geometric bound on n = 0..n_max."""
    ns = tuple(range(n_max + 1))
    values = tuple(minorization_bound(epsilon, n0, n) for n in ns)
    crossing = None
    if threshold is not None:
        crossing = steps_to_threshold(lambda n: float(minorization_bound(epsilon, n0, n)), threshold)
    return BoundReport(
        kind="minorization-geometric",
        ns=ns,
        values=values,
        threshold=threshold,
        crossing=crossing,
        inputs={"epsilon": float(epsilon), "n0": n0},
    )


def steps_to_threshold(
    bound: Callable[[int], float], delta: float, n_cap: int = 10**9
) -> int:
    """Smallest n >= 0 with bound(n) < delta, for a non-increasing bound.

    Doubling search for a bracket, then bisection. Raises
    ``ThresholdNotReachedError`` if the bound stays >= delta up to ``n_cap``.
    """
    if not 0 < delta < 1:
        raise InputError(f"delta must be in (0, 1), got {delta}")
    if bound(0) < delta:
        return 0
    hi = 1
    while bound(hi) >= delta:
        hi *= 2
        if hi > n_cap:
            raise ThresholdNotReachedError(
                f"bound does not fall below {delta} within {n_cap} steps"
            )
    lo = hi // 2  # bound(lo) >= delta, bound(hi) < delta
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if bound(mid) < delta:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class UnivariateDrift:
    """One-chain drift certificate: E[V(next)] <= lam*V(x) + b*1_C(x)."""

    V: Callable[[float], float]
    small_set: Interval
    lam: float
    b: float

    def __post_init__(self) -> None:
        if not 0 < self.lam < 1:
            raise InputError(f"lam must be in (0, 1), got {self.lam}")
        if not 0 <= self.b < math.inf:
            raise InputError(f"b must be finite and >= 0, got {self.b}")


@dataclass(frozen=True)
class BivariateDrift:
    """Two-chain drift certificate: E[h(next pair)] <= h(x,y)/alpha off C x C."""

    h: Callable[[float, float], float]
    small_set: Interval
    alpha: float

    def __post_init__(self) -> None:
        if not self.alpha > 1:
            raise InputError(f"alpha must be > 1, got {self.alpha}")


@dataclass(frozen=True)
class DriftMinorizationInputs:
    """Constants feeding the two-term drift/minorization bound."""

    epsilon: float
    n0: int
    alpha: float
    big_b: float
    expected_h: float

    def __post_init__(self) -> None:
        if not 0 < self.epsilon < 1:
            raise InputError(f"epsilon must be in (0, 1), got {self.epsilon}")
        if self.n0 < 1:
            raise InputError("n0 must be >= 1")
        if not self.alpha > 1:
            raise InputError(f"alpha must be > 1, got {self.alpha}")
        if not self.big_b >= 1:
            raise InputError(f"B must be >= 1, got {self.big_b}")
        if not self.expected_h >= 1:
            raise InputError(f"expected h must be >= 1, got {self.expected_h}")


def bivariate_from_univariate(uni: UnivariateDrift, d: float) -> BivariateDrift:
    """Build the pair drift h(x,y) = (V(x)+V(y))/2 from a one-chain drift.

    ``d`` is inf of V outside the small set, supplied analytically by the
    caller. Requires d > b/(1-lam) - 1; then alpha = 1/(lam + b/(d+1)) > 1.
    """
    floor = uni.b / (1.0 - uni.lam) - 1.0
    if not d > floor:
        raise DriftConversionError(
            f"small set too small for drift conversion: need d > b/(1-lam)-1 "
            f"= {floor:.6g}, got d = {d:.6g}"
        )
    alpha_inv = uni.lam + uni.b / (d + 1.0)
    # algebraic consequence of the precondition; guard anyway
    assert alpha_inv < 1.0
    V = uni.V
    return BivariateDrift(
        h=lambda x, y: 0.5 * (V(x) + V(y)),
        small_set=uni.small_set,
        alpha=1.0 / alpha_inv,
    )


def stationary_moment_bound(lam: float, b: float) -> float:
    """Bound b/(1-lam) on the stationary mean of the drift function V."""
    if not 0 < lam < 1:
        raise InputError(f"lam must be in (0, 1), got {lam}")
    return b / (1.0 - lam)


def b_constant(n0: int, alpha: float, epsilon: float, sup_rh: float) -> float:
    """The constant max(1, alpha^n0 * (1-eps) * sup_rh) of the two-term bound."""
    if sup_rh < 0:
        raise InputError("sup_rh must be >= 0")
    return max(1.0, alpha**n0 * (1.0 - epsilon) * sup_rh)


def sup_rh_via_containment(
    h: Callable[[float, float], float],
    region: Interval,
    probe_step: float = 0.05,
    containment: Callable[[], float] | None = None,
    escape_tolerance: float = 1e-12,
) -> float:
    """Bound sup of the post-failure expected h by sup of h over region x region.

    Valid when every small-set start lands inside ``region`` with probability
    one after the minorization lag. ``containment``, when given, returns the
    worst-case escaping mass and is checked against ``escape_tolerance``.
    """
    if containment is not None:
        escape = containment()
        if escape > escape_tolerance:
            raise ContainmentError(
                f"mass {escape:.3e} escapes the containment region "
                f"[{region.lo}, {region.hi}]"
            )
    pts = region.grid(probe_step)
    return max(h(x, y) for x in pts for y in pts)


def drift_minorization_log_terms(inputs: DriftMinorizationInputs, n: int, j: int) -> tuple[float, float]:
    """Log of the two terms of the drift/minorization bound at (n, j)."""
    if not 1 <= j <= n:
        raise InputError(f"need 1 <= j <= n, got j={j}, n={n}")
    log_t1 = j * math.log1p(-inputs.epsilon)
    log_t2 = (
        -n * math.log(inputs.alpha)
        + (j - 1) * math.log(inputs.big_b)
        + math.log(inputs.expected_h)
    )
    return log_t1, log_t2


def drift_minorization_bound(inputs: DriftMinorizationInputs, n: int, j: int) -> float:
    """(1-eps)^j + alpha^-n * B^(j-1) * E[h], evaluated in log space."""
    log_t1, log_t2 = drift_minorization_log_terms(inputs, n, j)
    t2 = math.inf if log_t2 > _EXP_OVERFLOW else math.exp(log_t2)
    return math.exp(log_t1) + t2


def _best_j(inputs: DriftMinorizationInputs, n: int) -> int:
    """Minimizing integer j in [1, n] at fixed n.

    The bound is strictly convex in j (a decaying plus a growing exponential),
    so it suffices to check the integer neighbors of the continuous minimizer,
    clamped to the range. When B == 1 the second term does not depend on j and
    the optimum is j = n.
    """
    a = -math.log1p(-inputs.epsilon)
    big_l = math.log(inputs.big_b)
    if big_l <= 0.0:
        return n
    # stationarity of exp(-a*j) + K*exp(big_l*j), all in log space
    log_k = (
        -n * math.log(inputs.alpha)
        + math.log(inputs.expected_h)
        - big_l
    )
    j_star = (math.log(a) - math.log(big_l) - log_k) / (a + big_l)
    cands = {1, n}
    for j in (math.floor(j_star), math.ceil(j_star)):
        cands.add(max(1, min(n, j)))
    return min(cands, key=lambda j: drift_minorization_bound(inputs, n, j))


def optimize_drift_minorization(
    inputs: DriftMinorizationInputs,
    delta: float,
    n_cap: int = 10**9,
    schedule: Sequence[tuple[int, int]] = (),
) -> BoundReport:
    """Smallest n whose j-optimized two-term bound falls below ``delta``.

    Doubling search over n followed by bisection; at each probed n the integer
    j is optimized exactly. ``schedule`` lists extra (n, j) pairs to evaluate
    for regression (reported under inputs["schedule"]).
    """
    if not 0 < delta < 1:
        raise InputError(f"delta must be in (0, 1), got {delta}")

    probes: dict[int, tuple[int, float]] = {}

    def probe(n: int) -> float:
        if n not in probes:
            j = _best_j(inputs, n)
            probes[n] = (j, drift_minorization_bound(inputs, n, j))
        return probes[n][1]

    hi = 1
    while probe(hi) >= delta:
        hi *= 2
        if hi > n_cap:
            raise ThresholdNotReachedError(
                f"optimized bound does not fall below {delta} within {n_cap} steps"
            )
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if probe(mid) < delta:
            hi = mid
        else:
            lo = mid

    ns = tuple(sorted(probes))
    values = tuple(probes[n][1] for n in ns)
    js = tuple(probes[n][0] for n in ns)
    log_values = tuple(math.log(v) for v in values)
    report_inputs: dict[str, object] = {
        "epsilon": inputs.epsilon,
        "n0": inputs.n0,
        "alpha": inputs.alpha,
        "B": inputs.big_b,
        "expected_h": inputs.expected_h,
        "optimal_j": probes[hi][0],
    }
    if schedule:
        report_inputs["schedule"] = [
            {"n": n, "j": j, "bound": drift_minorization_bound(inputs, n, j)} for n, j in schedule
        ]
    return BoundReport(
        kind="drift-minorization",
        ns=ns,
        values=values,
        js=js,
        log_values=log_values,
        threshold=delta,
        crossing=hi,
        inputs=report_inputs,
    )
