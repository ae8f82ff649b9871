"""Coupling simulation orchestration: configs, statistics, result reports.

Randomness contract: a 64-bit master seed expands to one unique 32-bit
substream seed per replication (collisions resolved deterministically), so a
run is reproducible bit-for-bit for a fixed config regardless of worker
count. Statistics are reported on the lag-n0 lattice; intermediate times are
not filled in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .._jit import set_workers
from ..errors import CertificateError, InputError, MathError
from ..finite_chain import (
    MinorizationCert,
    ProbVector,
    StochasticMatrix,
    matrix_power,
    pseudo_nu,
    stationary,
)
from ..kernels import HALFLINE_OVERLAP_EPSILON, RWM_OVERLAP_EPSILON, RWM_SMALL_SET
from . import engines

__all__ = [
    "CouplingConfig",
    "CouplingResult",
    "TvEstimate",
    "empirical_tv",
    "replication_seeds",
    "run_uniform_coupling",
    "run_small_set_coupling",
]

_RESIDUAL_SLACK = 1e-12


@dataclass(frozen=True)
class CouplingConfig:
    """Everything a coupling run needs; immutable and fully seed-determined.

    ``model`` selects the chain: "finite" (supply ``matrix``, ``cert``, and an
    ``initial_law``), "halfline", or "rwm-laplace" (point start ``x0``; the
    stationary partner start is drawn by a ``burn_in``-step auxiliary run for
    the continuous chains, exactly for finite ones). ``stop_when_coupled``
    ends each replication at its coupling step (coupling-time studies with
    large step caps); recorded post-coupling states are then frozen.
    """

    model: str
    n_max: int
    replications: int
    master_seed: int
    matrix: StochasticMatrix | None = None
    cert: MinorizationCert | None = None
    initial_law: ProbVector | None = None
    x0: float = 0.0
    epsilon: float | None = None
    small_set: tuple[float, float] = RWM_SMALL_SET
    n0: int | None = None
    burn_in: int = 20_000
    record_every: int = 1
    workers: int = 0
    stop_when_coupled: bool = False

    def __post_init__(self) -> None:
        if self.model not in ("finite", "halfline", "rwm-laplace"):
            raise InputError(f"unknown model {self.model!r}")
        if self.replications < 1:
            raise InputError("replications must be >= 1")
        if self.n_max < 0:
            raise InputError("n_max must be >= 0")
        if self.record_every < 1:
            raise InputError("record_every must be >= 1")
        if self.model == "finite":
            if self.matrix is None or self.cert is None:
                raise InputError("finite model requires matrix and cert")
            if self.initial_law is not None and self.initial_law.size != self.matrix.size:
                raise InputError("initial law size does not match the matrix")
        if self.model == "halfline" and self.x0 < 0:
            raise InputError("half-line start must be >= 0")

    def effective_n0(self) -> int:
        if self.model == "finite":
            return self.cert.n0
        if self.model == "halfline":
            return 1
        return 2 if self.n0 is None else self.n0

    def effective_epsilon(self) -> float:
        if self.model == "finite":
            return float(self.cert.epsilon)
        if self.epsilon is not None:
            return self.epsilon
        if self.model == "halfline":
            return HALFLINE_OVERLAP_EPSILON
        return RWM_OVERLAP_EPSILON


@dataclass(frozen=True)
class TvEstimate:
    """Plug-in total variation between empirical frequencies and a reference.

    ``noise_floor`` is the expected value of the estimator when the true
    distance is zero (pure multinomial noise); comparisons against other
    estimates must allow for it on top of the jackknife standard error.
    """

    value: float
    se: float
    noise_floor: float


def empirical_tv(counts: Sequence[int], reference: Sequence[float]) -> TvEstimate:
    """Half-L1 distance of empirical state counts from reference probabilities.

    The standard error is a leave-one-out jackknife over samples, grouped by
    state for O(states^2) work.
    """
    counts = np.asarray(counts, dtype=np.int64)
    ref = np.asarray(reference, dtype=float)
    if counts.shape != ref.shape:
        raise InputError(f"shape mismatch: {counts.shape} vs {ref.shape}")
    total = int(counts.sum())
    if total < 2:
        raise InputError("need at least two samples")
    freq = counts / total
    value = 0.5 * float(np.abs(freq - ref).sum())
    loo = np.empty(len(counts))
    for t in range(len(counts)):
        if counts[t] == 0:
            loo[t] = 0.0
            continue
        adjusted = counts.astype(float).copy()
        adjusted[t] -= 1.0
        loo[t] = 0.5 * float(np.abs(adjusted / (total - 1) - ref).sum())
    weights = counts / total
    mean_loo = float((weights * loo).sum())
    var = float((weights * (loo - mean_loo) ** 2).sum()) * (total - 1)
    se = math.sqrt(max(var, 0.0))
    floor = 0.5 * math.sqrt(2.0 / math.pi) * float(
        np.sqrt(ref * (1.0 - ref) / total).sum()
    )
    return TvEstimate(value=value, se=se, noise_floor=floor)


@dataclass(frozen=True, eq=False)
class CouplingResult:
    """Per-lattice coupling statistics plus the recorded paths.

    ``lattice`` lists chain-step indices; arrays ``xs``/``xps`` (replications
    x lattice) are carried for further analysis but excluded from the JSON
    form. Coupling times are in chain steps.
    """

    model: str
    mode: str
    n0: int
    epsilon: float
    replications: int
    master_seed: int
    n_max: int
    lattice: tuple[int, ...]
    p_neq: tuple[float, ...]
    p_neq_se: tuple[float, ...]
    tv: tuple[TvEstimate, ...] | None
    marginal_counts: tuple[tuple[int, ...], ...] | None
    marginal_counts_prime: tuple[tuple[int, ...], ...] | None
    coupling_time_mean: float | None
    coupling_time_quantiles: tuple[tuple[str, float], ...]
    uncoupled: int
    opportunities_mean: float | None
    xs: np.ndarray = field(repr=False)
    xps: np.ndarray = field(repr=False)

    def to_jsonable(self) -> dict:
        out = {
            "model": self.model,
            "mode": self.mode,
            "n0": self.n0,
            "epsilon": self.epsilon,
            "replications": self.replications,
            "master_seed": self.master_seed,
            "n_max": self.n_max,
            "lattice": list(self.lattice),
            "p_neq": list(self.p_neq),
            "p_neq_se": list(self.p_neq_se),
            "coupling_time_mean": self.coupling_time_mean,
            "coupling_time_quantiles": {q: v for q, v in self.coupling_time_quantiles},
            "uncoupled": self.uncoupled,
        }
        if self.tv is not None:
            out["tv"] = [
                {"value": t.value, "se": t.se, "noise_floor": t.noise_floor}
                for t in self.tv
            ]
        if self.marginal_counts is not None:
            out["marginal_counts"] = [list(row) for row in self.marginal_counts]
            out["marginal_counts_prime"] = [
                list(row) for row in self.marginal_counts_prime
            ]
        if self.opportunities_mean is not None:
            out["opportunities_mean"] = self.opportunities_mean
        return out


def replication_seeds(master_seed: int, replications: int) -> np.ndarray:
    """One unique uint32 substream seed per replication.

    Words come from a seed-sequence expansion of the master seed; the rare
    duplicate is replaced by the next unused word, deterministically.
    """
    sequence = np.random.SeedSequence(master_seed)
    pool_size = replications + 64
    pool = sequence.generate_state(pool_size, np.uint32)
    seen: set[int] = set()
    out = np.empty(replications, np.uint32)
    cursor = replications
    for r in range(replications):
        word = int(pool[r])
        while word in seen:
            if cursor >= pool_size:
                pool_size *= 2
                pool = sequence.generate_state(pool_size, np.uint32)
            word = int(pool[cursor])
            cursor += 1
        seen.add(word)
        out[r] = word
    return out


def _cdf_rows(rows: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(rows, axis=-1)
    cdf[..., -1] = 1.0
    return cdf


def _exact_row_floats(rows: Sequence[Sequence[Fraction]]) -> np.ndarray:
    return np.array([[float(v) for v in row] for row in rows])


def _finite_arrays(config: CouplingConfig):
    """Exact residual/overlap tables for the finite engine, as float CDFs."""
    P = config.matrix
    cert = config.cert
    size = P.size
    pn0 = matrix_power(P, cert.n0)
    eps = cert.epsilon

    step_cdf = _cdf_rows(_exact_row_floats(pn0.rows))
    one = Fraction(1)

    if cert.variant == "uniform":
        nu = cert.nu
        if eps == 1:
            resid = [[Fraction(1, size)] * size for _ in range(size)]  # never used
        else:
            resid = [
                [(pn0.rows[i][j] - eps * nu[j]) / (one - eps) for j in range(size)]
                for i in range(size)
            ]
        for row in resid:
            for v in row:
                if v < -_RESIDUAL_SLACK:
                    raise CertificateError(f"residual entry {float(v)} is negative")
        nu_cdf = _cdf_rows(np.array([float(v) for v in nu.entries]))
        resid_cdf = _cdf_rows(_exact_row_floats(resid))
        nu_pair_cdf = np.zeros((1, 1))
        resid_pair_cdf = np.zeros((1, 1))
        pair_mode = False
    else:
        nu_pair = np.empty((size * size, size))
        resid_pair = np.empty((size * size, size))
        for i in range(size):
            for j in range(size):
                if i == j:
                    nu_pair[i * size + j] = 0.0
                    resid_pair[i * size + j] = 0.0
                    continue
                nu_ij = pseudo_nu(pn0, i, j)
                if eps == 1:
                    resid_row = [Fraction(1, size)] * size
                else:
                    resid_row = [
                        (pn0.rows[i][z] - eps * nu_ij[z]) / (one - eps)
                        for z in range(size)
                    ]
                for v in resid_row:
                    if v < -_RESIDUAL_SLACK:
                        raise CertificateError(
                            f"residual entry {float(v)} is negative for pair ({i},{j})"
                        )
                nu_pair[i * size + j] = [float(v) for v in nu_ij.entries]
                resid_pair[i * size + j] = [float(v) for v in resid_row]
        nu_cdf = np.zeros(1)
        resid_cdf = np.zeros((1, 1))
        nu_pair_cdf = _cdf_rows(nu_pair)
        resid_pair_cdf = _cdf_rows(resid_pair)
        pair_mode = True

    in_small = np.zeros(size, np.uint8)
    for s in cert.small_set:
        in_small[s] = 1
    return step_cdf, nu_cdf, nu_pair_cdf, resid_cdf, resid_pair_cdf, pair_mode, in_small


def _coupling_times(eq: np.ndarray, lattice: tuple[int, ...]) -> np.ndarray:
    """Chain-step coupling time per replication from lattice equality flags, -1 if none."""
    any_eq = eq.any(axis=1)
    first = eq.argmax(axis=1)
    steps = np.array(lattice)[first]
    return np.where(any_eq, steps, -1)


def _assert_once_coupled_forever(eq: np.ndarray) -> None:
    if eq.shape[1] > 1 and not np.all(~eq[:, :-1] | eq[:, 1:]):
        raise MathError("a trajectory decoupled after coupling; engine invariant broken")


def _summarize(
    config: CouplingConfig,
    mode: str,
    lattice: tuple[int, ...],
    xs: np.ndarray,
    xps: np.ndarray,
    couple_steps: np.ndarray,
    opportunities: np.ndarray | None,
    finite_reference: ProbVector | None,
) -> CouplingResult:
    reps = config.replications
    eq = xs == xps
    _assert_once_coupled_forever(eq)
    p_neq = 1.0 - eq.mean(axis=0)
    p_se = np.sqrt(p_neq * (1.0 - p_neq) / reps)

    tv = None
    counts = counts_prime = None
    if finite_reference is not None:
        ref = finite_reference.to_floats()
        size = len(ref)
        counts = tuple(
            tuple(int(c) for c in np.bincount(xs[:, k], minlength=size))
            for k in range(xs.shape[1])
        )
        counts_prime = tuple(
            tuple(int(c) for c in np.bincount(xps[:, k], minlength=size))
            for k in range(xps.shape[1])
        )
        if reps >= 2:  # the jackknife needs at least two samples
            tv = tuple(empirical_tv(row, ref) for row in counts)

    coupled = couple_steps[couple_steps >= 0]
    uncoupled = int(reps - coupled.size)
    mean_time = float(coupled.mean()) if coupled.size else None
    quantiles: tuple[tuple[str, float], ...] = ()
    if coupled.size:
        qs = (0.5, 0.9, 0.99)
        vals = np.quantile(coupled, qs)
        quantiles = tuple((str(q), float(v)) for q, v in zip(qs, vals))

    return CouplingResult(
        model=config.model,
        mode=mode,
        n0=config.effective_n0(),
        epsilon=config.effective_epsilon(),
        replications=reps,
        master_seed=config.master_seed,
        n_max=config.n_max,
        lattice=lattice,
        p_neq=tuple(float(v) for v in p_neq),
        p_neq_se=tuple(float(v) for v in p_se),
        tv=tv,
        marginal_counts=counts,
        marginal_counts_prime=counts_prime,
        coupling_time_mean=mean_time,
        coupling_time_quantiles=quantiles,
        uncoupled=uncoupled,
        opportunities_mean=(
            float(opportunities.mean()) if opportunities is not None else None
        ),
        xs=xs,
        xps=xps,
    )


def _run_finite(config: CouplingConfig, mode: str) -> CouplingResult:
    P = config.matrix
    cert = config.cert
    n0 = cert.n0
    n_lat = config.n_max // n0
    pi = stationary(P)
    mu0 = config.initial_law or ProbVector.delta(P.size, 0)
    arrays = _finite_arrays(config)
    step_cdf, nu_cdf, nu_pair_cdf, resid_cdf, resid_pair_cdf, pair_mode, in_small = arrays
    seeds = replication_seeds(config.master_seed, config.replications)
    set_workers(config.workers or 10**9)
    xs, xps = engines.finite_coupling_paths(
        n_lat,
        seeds,
        _cdf_rows(mu0.to_floats()),
        _cdf_rows(pi.to_floats()),
        step_cdf,
        float(cert.epsilon),
        nu_cdf,
        nu_pair_cdf,
        resid_cdf,
        resid_pair_cdf,
        pair_mode,
        in_small,
    )
    lattice = tuple(k * n0 for k in range(n_lat + 1))
    couple_steps = _coupling_times(xs == xps, lattice)
    return _summarize(config, mode, lattice, xs, xps, couple_steps, None, pi)


def run_uniform_coupling(config: CouplingConfig) -> CouplingResult:
    """Simulate the whole-space-overlap coupling on the lag-n0 lattice.

    Finite chains use their exact certificate (either variant; the pairwise
    one supplies pair-dependent overlap measures). The half-line chain uses
    its closed-form overlap of mass 1/2.
    """
    if config.model == "finite":
        if set(config.cert.small_set) != set(range(config.matrix.size)):
            raise InputError("whole-space coupling requires a whole-space certificate")
        return _run_finite(config, mode="uniform")
    if config.model == "halfline":
        n_lat = config.n_max
        seeds = replication_seeds(config.master_seed, config.replications)
        set_workers(config.workers or 10**9)
        xs, xps = engines.halfline_coupling_paths(
            n_lat, seeds, config.x0, config.effective_epsilon(), config.burn_in
        )
        lattice = tuple(range(n_lat + 1))
        couple_steps = _coupling_times(xs == xps, lattice)
        return _summarize(config, "uniform", lattice, xs, xps, couple_steps, None, None)
    raise InputError(
        "whole-space coupling supports the finite and halfline models; the "
        "Metropolis chain has no whole-space certificate"
    )


def run_small_set_coupling(config: CouplingConfig) -> CouplingResult:
    """Simulate the small-set coupling: coins only when both chains are in C.

    Finite chains reuse the lattice engine with the certificate's small set
    (a whole-space set reproduces ``run_uniform_coupling`` draw for draw).
    The Metropolis chain couples at even times with the published lag-2
    overlap; odd-time states are not recorded.
    """
    if config.model == "finite":
        return _run_finite(config, mode="small-set")
    if config.model != "rwm-laplace":
        raise InputError("small-set coupling supports the finite and rwm-laplace models")
    n0 = config.effective_n0()
    if n0 != 2:
        raise InputError("the Metropolis coupling is defined on the lag-2 lattice")
    n_pairs = config.n_max // 2
    seeds = replication_seeds(config.master_seed, config.replications)
    set_workers(config.workers or 10**9)
    lo, hi = config.small_set
    xs, xps, couple_at, opportunities = engines.rwm_coupling_paths(
        n_pairs,
        seeds,
        config.x0,
        config.effective_epsilon(),
        lo,
        hi,
        config.burn_in,
        config.record_every,
        config.stop_when_coupled,
    )
    lattice = tuple(
        2 * k * config.record_every for k in range(n_pairs // config.record_every + 1)
    )
    couple_steps = np.where(couple_at >= 0, 2 * couple_at, -1)
    return _summarize(
        config, "small-set", lattice, xs, xps, couple_steps, opportunities, None
    )
