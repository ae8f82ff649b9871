"""Built-in constant presets wiring the full bound pipelines.

Each preset bundles the published certificate constants for one built-in
chain so that reproducing the headline numbers is a one-flag operation in the
CLI. Derived quantities (pair-drift rate, containment supremum, the B
constant) are computed here from the primitive constants, with provenance
tags for the reports.
"""

from __future__ import annotations

import math

from .bounds import (
    Interval,
    DriftMinorizationInputs,
    UnivariateDrift,
    b_constant,
    bivariate_from_univariate,
    stationary_moment_bound,
    sup_rh_via_containment,
)
from .errors import InputError
from .kernels import (
    HALFLINE_OVERLAP_EPSILON,
    RWM_OVERLAP_EPSILON,
    containment_escape_mass,
    metropolis_rwm_laplace,
)

__all__ = [
    "HALFLINE_EPSILON",
    "HALFLINE_N0",
    "LAPLACE_B",
    "LAPLACE_D",
    "LAPLACE_EPSILON",
    "LAPLACE_EXPECTED_H",
    "LAPLACE_LAM",
    "LAPLACE_N0",
    "LAPLACE_REGION",
    "LAPLACE_SCHEDULE",
    "LAPLACE_SMALL_SET",
    "POINT_PROCESS_C",
    "POINT_PROCESS_D",
    "laplace_drift",
    "laplace_drift_V",
    "laplace_nu_density",
    "laplace_drift_minorization_inputs",
]

# half-line mixture: whole-space overlap against the Exponential(2) component
HALFLINE_EPSILON = HALFLINE_OVERLAP_EPSILON
HALFLINE_N0 = 1

# Metropolis chain with target exp(-|x|): published certificate constants.
# The drift function is e^{+|x|/2}: the growing sign is the only one
# consistent with inf V = e off [-2, 2] and sup V = e^3 on [-6, 6].
LAPLACE_LAM = 0.916
LAPLACE_B = 0.285
LAPLACE_SMALL_SET = Interval(-2.0, 2.0)
LAPLACE_N0 = 2
LAPLACE_EPSILON = RWM_OVERLAP_EPSILON
LAPLACE_D = math.e  # inf of V outside the small set, analytic
LAPLACE_REGION = Interval(-6.0, 6.0)  # two steps from the small set stay inside
LAPLACE_EXPECTED_H = 2.0  # stationary mean of h(0, .), analytic
LAPLACE_SCHEDULE = (120_000, 274)  # reference (n, j) pair for regression

# repelling-particle chain defaults
POINT_PROCESS_C = 0.1
POINT_PROCESS_D = 0.1


def laplace_drift_V(x: float) -> float:
    return math.exp(abs(x) / 2.0)


def laplace_nu_density(y: float) -> float:
    """Overlap measure of the lag-2 certificate: half of Lebesgue on [-1, 1]."""
    return 0.5 if abs(y) <= 1.0 else 0.0


def laplace_drift(lam: float = LAPLACE_LAM, b: float = LAPLACE_B) -> UnivariateDrift:
    return UnivariateDrift(V=laplace_drift_V, small_set=LAPLACE_SMALL_SET, lam=lam, b=b)


def laplace_drift_minorization_inputs(
    expected_h: str = "analytic",
) -> tuple[DriftMinorizationInputs, dict]:
    """Assemble the two-term bound constants for the Metropolis chain.

    ``expected_h`` selects the analytic stationary mean of h(0, .) or the
    always-available fallback (1 + b/(1-lam))/2 + 1/2 via the stationary
    moment bound. Returns the inputs plus a provenance map for reports.
    """
    drift = laplace_drift()
    pair = bivariate_from_univariate(drift, d=LAPLACE_D)
    kernel, _ = metropolis_rwm_laplace()
    sup_rh = sup_rh_via_containment(
        pair.h,
        LAPLACE_REGION,
        probe_step=0.05,
        containment=lambda: containment_escape_mass(
            kernel, LAPLACE_SMALL_SET, LAPLACE_REGION, n_steps=LAPLACE_N0
        ),
    )
    big_b = b_constant(LAPLACE_N0, pair.alpha, LAPLACE_EPSILON, sup_rh)
    if expected_h == "analytic":
        eh = LAPLACE_EXPECTED_H
        eh_source = "preset (analytic stationary mean)"
    elif expected_h == "fallback":
        eh = 0.5 + 0.5 * stationary_moment_bound(LAPLACE_LAM, LAPLACE_B)
        eh_source = "computed (stationary moment bound)"
    else:
        raise InputError(f"expected_h must be 'analytic' or 'fallback', got {expected_h!r}")
    inputs = DriftMinorizationInputs(
        epsilon=LAPLACE_EPSILON,
        n0=LAPLACE_N0,
        alpha=pair.alpha,
        big_b=big_b,
        expected_h=eh,
    )
    provenance = {
        "lam": "preset",
        "b": "preset",
        "epsilon": "preset",
        "d": "preset (analytic infimum)",
        "alpha_inv": "computed (lam + b/(d+1))",
        "sup_rh": "computed (sup of h over the containment region)",
        "B": "computed",
        "expected_h": eh_source,
    }
    return inputs, provenance
