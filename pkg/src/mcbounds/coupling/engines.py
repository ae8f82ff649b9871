"""Trajectory engines for the coupling simulator.

Each replication owns a private substream: the engine reseeds ``np.random``
from ``seeds[r]`` before touching replication r, so output is independent of
worker count and iteration order. The same source runs jitted (default) or as
plain Python when numba is disabled; both produce identical streams.

Construction per lattice step, given the overlap constant eps at lag n0:
chains already equal move together; unequal chains inside the small set flip
an eps-coin (heads: both jump to a shared overlap draw; tails: independent
residual draws); chains outside the small set update independently.
"""

from __future__ import annotations

import numpy as np

from .._jit import maybe_njit, prange
from ..kernels import scalars


@maybe_njit(cache=True)
def _draw(cdf: np.ndarray) -> int:
    """Inverse-CDF draw; cdf[-1] is exactly 1.0 so the index stays in range."""
    return int(np.searchsorted(cdf, np.random.random(), side="right"))


@maybe_njit(cache=True, parallel=True)
def finite_coupling_paths(
    n_lat: int,
    seeds: np.ndarray,
    mu0_cdf: np.ndarray,
    pi_cdf: np.ndarray,
    step_cdf: np.ndarray,
    eps: float,
    nu_cdf: np.ndarray,
    nu_pair_cdf: np.ndarray,
    resid_cdf: np.ndarray,
    resid_pair_cdf: np.ndarray,
    pair_mode: bool,
    in_small_set: np.ndarray,
):
    """Coupled paths of a finite chain on the lag-n0 lattice.

    ``step_cdf`` holds row CDFs of the n0-step matrix. In pair mode the
    overlap measure and residuals are indexed by the unordered start pair
    (row x * size + y); otherwise the single ``nu_cdf``/``resid_cdf`` apply.
    """
    reps = seeds.size
    size = step_cdf.shape[0]
    xs = np.empty((reps, n_lat + 1), np.int32)
    xps = np.empty((reps, n_lat + 1), np.int32)
    for r in prange(reps):
        np.random.seed(seeds[r])
        x = _draw(mu0_cdf)
        xp = _draw(pi_cdf)
        xs[r, 0] = x
        xps[r, 0] = xp
        for k in range(1, n_lat + 1):
            if x == xp:
                x = _draw(step_cdf[x])
                xp = x
            elif in_small_set[x] == 1 and in_small_set[xp] == 1:
                if np.random.random() < eps:
                    if pair_mode:
                        x = _draw(nu_pair_cdf[x * size + xp])
                    else:
                        x = _draw(nu_cdf)
                    xp = x
                else:
                    if pair_mode:
                        new_x = _draw(resid_pair_cdf[x * size + xp])
                        xp = _draw(resid_pair_cdf[xp * size + x])
                        x = new_x
                    else:
                        new_x = _draw(resid_cdf[x])
                        xp = _draw(resid_cdf[xp])
                        x = new_x
            else:
                x = _draw(step_cdf[x])
                xp = _draw(step_cdf[xp])
            xs[r, k] = x
            xps[r, k] = xp
    return xs, xps


@maybe_njit(cache=True, parallel=True)
def halfline_coupling_paths(
    n_lat: int, seeds: np.ndarray, x0: float, eps: float, burn_in: int
):
    """Coupled paths of the half-line mixture chain (whole-space overlap, lag 1).

    The second chain starts from an auxiliary run of ``burn_in`` steps, an
    approximate stationary draw.
    """
    reps = seeds.size
    xs = np.empty((reps, n_lat + 1))
    xps = np.empty((reps, n_lat + 1))
    for r in prange(reps):
        np.random.seed(seeds[r])
        xp = x0
        for _ in range(burn_in):
            xp = scalars.hl_draw(xp)
        x = x0
        xs[r, 0] = x
        xps[r, 0] = xp
        for k in range(1, n_lat + 1):
            if x == xp:
                x = scalars.hl_draw(x)
                xp = x
            elif np.random.random() < eps:
                x = scalars.exp_rate2()
                xp = x
            else:
                x = scalars.hl_resid_draw(x, eps)
                xp = scalars.hl_resid_draw(xp, eps)
            xs[r, k] = x
            xps[r, k] = xp
    return xs, xps


@maybe_njit(cache=True, parallel=True)
def rwm_coupling_paths(
    n_pairs: int,
    seeds: np.ndarray,
    x0: float,
    eps: float,
    c_lo: float,
    c_hi: float,
    burn_in: int,
    record_every: int,
    stop_when_coupled: bool,
):
    """Coupled paths of the Metropolis chain with small set [c_lo, c_hi], lag 2.

    Coin flips happen at even times when both chains sit in the small set;
    otherwise both advance two Metropolis steps independently. States are
    recorded every ``record_every`` pair-steps; the exact coupling pair-step
    and the number of coin opportunities are returned per replication.

    With ``stop_when_coupled`` the replication ends at coupling and later
    recorded slots are frozen at the coupling value: equality flags and
    coupling times stay exact, recorded post-coupling states do not evolve.
    """
    reps = seeds.size
    n_rec = n_pairs // record_every + 1
    xs = np.empty((reps, n_rec))
    xps = np.empty((reps, n_rec))
    couple_at = np.full(reps, -1, np.int64)
    opportunities = np.zeros(reps, np.int64)
    for r in prange(reps):
        np.random.seed(seeds[r])
        xp = x0
        for _ in range(burn_in):
            xp = scalars.rwm_step(xp)
        x = x0
        xs[r, 0] = x
        xps[r, 0] = xp
        if x == xp:
            couple_at[r] = 0
        for k in range(1, n_pairs + 1):
            if x == xp:
                x = scalars.rwm_step(scalars.rwm_step(x))
                xp = x
            elif c_lo <= x <= c_hi and c_lo <= xp <= c_hi:
                opportunities[r] += 1
                if np.random.random() < eps:
                    x = 2.0 * np.random.random() - 1.0
                    xp = x
                else:
                    new_x = scalars.rwm_resid2_draw(x, eps)
                    xp = scalars.rwm_resid2_draw(xp, eps)
                    x = new_x
            else:
                x = scalars.rwm_step(scalars.rwm_step(x))
                xp = scalars.rwm_step(scalars.rwm_step(xp))
            if x == xp and couple_at[r] < 0:
                couple_at[r] = k
            if k % record_every == 0:
                xs[r, k // record_every] = x
                xps[r, k // record_every] = xp
            if stop_when_coupled and x == xp:
                for slot in range(k // record_every + 1, n_rec):
                    xs[r, slot] = x
                    xps[r, slot] = x
                break
    return xs, xps, couple_at, opportunities
