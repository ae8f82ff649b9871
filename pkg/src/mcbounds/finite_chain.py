"""Exact analysis of finite-state Markov chains.

Transition matrices and distributions hold ``fractions.Fraction`` entries, so
row sums, stationary solves, distances, and minorization constants are exact;
the only floating point in this module is the explicitly approximate
eigenvalue analysis. State indices are 0-based throughout; display layers may
relabel them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .bounds import BoundReport
from .errors import (
    IllConditionedEigenbasisError,
    InputError,
    MathError,
    NonUniqueStationaryError,
    PeriodicChainError,
)

__all__ = [
    "ProbVector",
    "StochasticMatrix",
    "MinorizationCert",
    "EigenMode",
    "EigenBound",
    "build_grid_walk",
    "matrix_power",
    "evolve",
    "stationary",
    "tv_distance",
    "tv_distance_subset_sup",
    "exact_tv_curve",
    "eigen_bound",
    "minorization_uniform",
    "minorization_pseudo",
    "pseudo_pair_overlap",
    "pseudo_nu",
    "minorization_margin",
]


def _frac(value) -> Fraction:
    """Exact rational from Fraction, int, or a 'p/q' string. Floats rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise InputError(
        f"expected Fraction, int, or 'p/q' string, got {type(value).__name__}; "
        "floats are not exact"
    )


@dataclass(frozen=True)
class ProbVector:
    """Finite probability distribution with exact rational entries."""

    entries: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        entries = tuple(_frac(e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        if any(e < 0 for e in entries):
            raise InputError("probabilities must be >= 0")
        if sum(entries) != 1:
            raise InputError(f"probabilities must sum to 1, got {sum(entries)}")

    @classmethod
    def delta(cls, size: int, state: int) -> "ProbVector":
        if not 0 <= state < size:
            raise InputError(f"state {state} out of range for size {size}")
        return cls(tuple(Fraction(1 if i == state else 0) for i in range(size)))

    @classmethod
    def uniform(cls, size: int) -> "ProbVector":
        return cls(tuple(Fraction(1, size) for _ in range(size)))

    @property
    def size(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> Fraction:
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def to_floats(self) -> np.ndarray:
        return np.array([float(e) for e in self.entries])

    def as_strings(self) -> list[str]:
        return [str(e) for e in self.entries]


@dataclass(frozen=True)
class StochasticMatrix:
    """Row-stochastic square matrix with exact rational entries."""

    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(_frac(e) for e in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise InputError("matrix must be square and non-empty")
        for i, row in enumerate(rows):
            if any(e < 0 for e in row):
                raise InputError(f"row {i} has a negative entry")
            if sum(row) != 1:
                raise InputError(f"row {i} sums to {sum(row)}, not exactly 1")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "StochasticMatrix":
        return cls(tuple(tuple(_frac(e) for e in row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> "StochasticMatrix":
        return cls(
            tuple(
                tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)
            )
        )

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        i, j = key
        return self.rows[i][j]

    def row(self, i: int) -> ProbVector:
        return ProbVector(self.rows[i])

    def to_floats(self) -> np.ndarray:
        return np.array([[float(e) for e in row] for row in self.rows])

    def to_json_dict(self) -> dict:
        return {"size": self.size, "rows": [[str(e) for e in row] for row in self.rows]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "StochasticMatrix":
        try:
            size = data["size"]
            rows = data["rows"]
        except (KeyError, TypeError) as exc:
            raise InputError(f"matrix JSON must have 'size' and 'rows': {exc}") from exc
        matrix = cls.from_rows(rows)
        if matrix.size != size:
            raise InputError(f"declared size {size} != actual size {matrix.size}")
        return matrix


def build_grid_walk(rows: int, cols: int) -> StochasticMatrix:
    """Lazy nearest-neighbor random walk on a rows x cols grid.

    From each cell the walker stays put or moves to one of its orthogonal
    neighbors, all with equal probability 1/(degree+1). States are numbered
    row-major, top-to-bottom then left-to-right.
    """
    if rows < 1 or cols < 1:
        raise InputError("grid dimensions must be >= 1")
    n = rows * cols
    out = [[Fraction(0)] * n for _ in range(n)]
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            nbrs = []
            if r > 0:
                nbrs.append(i - cols)
            if r < rows - 1:
                nbrs.append(i + cols)
            if c > 0:
                nbrs.append(i - 1)
            if c < cols - 1:
                nbrs.append(i + 1)
            p = Fraction(1, len(nbrs) + 1)
            out[i][i] = p
            for j in nbrs:
                out[i][j] = p
    return StochasticMatrix.from_rows(out)


def _mat_mul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def matrix_power(P: StochasticMatrix, n: int) -> StochasticMatrix:
    """Exact n-step transition matrix by binary exponentiation."""
    if n < 0:
        raise InputError("power must be >= 0")
    size = P.size
    result = StochasticMatrix.identity(size).rows
    base = P.rows
    while n:
        if n & 1:
            result = _mat_mul(result, base)
        n >>= 1
        if n:
            base = _mat_mul(base, base)
    return StochasticMatrix(result)


def evolve(mu0: ProbVector, P: StochasticMatrix, n: int) -> ProbVector:
    """Exact distribution after n steps from mu0 (left multiplication)."""
    if mu0.size != P.size:
        raise InputError(f"dimension mismatch: vector {mu0.size}, matrix {P.size}")
    if n < 0:
        raise InputError("step count must be >= 0")
    current = mu0.entries
    size = P.size
    for _ in range(n):
        current = tuple(
            sum(current[i] * P.rows[i][j] for i in range(size)) for j in range(size)
        )
    return ProbVector(current)


def _rref(matrix: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """In-place reduced row echelon form; returns (matrix, pivot columns)."""
    n_rows = len(matrix)
    n_cols = len(matrix[0])
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        pivot_row = next((i for i in range(r, n_rows) if matrix[i][c] != 0), None)
        if pivot_row is None:
            continue
        matrix[r], matrix[pivot_row] = matrix[pivot_row], matrix[r]
        inv = matrix[r][c]
        matrix[r] = [v / inv for v in matrix[r]]
        for i in range(n_rows):
            if i != r and matrix[i][c] != 0:
                f = matrix[i][c]
                matrix[i] = [a - f * b for a, b in zip(matrix[i], matrix[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return matrix, pivots


def stationary(P: StochasticMatrix) -> ProbVector:
    """Exact stationary distribution via elimination on (P^T - I).

    Raises ``NonUniqueStationaryError`` when the unit-eigenvalue left
    eigenspace has dimension > 1, rather than returning an arbitrary member.
    """
    n = P.size
    A = [
        [P.rows[j][i] - (Fraction(1) if i == j else Fraction(0)) for j in range(n)]
        for i in range(n)
    ]
    reduced, pivots = _rref(A)
    free_cols = [c for c in range(n) if c not in pivots]
    if len(free_cols) != 1:
        raise NonUniqueStationaryError(
            f"stationary distribution is not unique: null space has dimension "
            f"{len(free_cols)}"
        )
    free = free_cols[0]
    solution = [Fraction(0)] * n
    solution[free] = Fraction(1)
    for row, col in zip(reduced, pivots):
        solution[col] = -row[free]
    total = sum(solution)
    if total == 0:
        raise MathError("degenerate null vector with zero sum")
    pi = [v / total for v in solution]
    if any(v < 0 for v in pi):
        raise MathError("stationary solve produced a negative entry")
    return ProbVector(tuple(pi))


def tv_distance(mu: ProbVector, nu: ProbVector) -> Fraction:
    """Total variation distance, computed exactly as half the L1 distance."""
    if mu.size != nu.size:
        raise InputError(f"dimension mismatch: {mu.size} vs {nu.size}")
    return sum(abs(a - b) for a, b in zip(mu.entries, nu.entries)) / 2


def tv_distance_subset_sup(mu: ProbVector, nu: ProbVector, max_size: int = 20) -> Fraction:
    """Total variation as the exhaustive sup over all subsets of states.

    Exponential in the state count; intended as an independent cross-check of
    the half-L1 form on small spaces.
    """
    if mu.size != nu.size:
        raise InputError(f"dimension mismatch: {mu.size} vs {nu.size}")
    if mu.size > max_size:
        raise InputError(f"subset enumeration capped at {max_size} states")
    best = Fraction(0)
    states = range(mu.size)
    for r in range(mu.size + 1):
        for subset in itertools.combinations(states, r):
            diff = abs(
                sum(mu.entries[s] for s in subset) - sum(nu.entries[s] for s in subset)
            )
            best = max(best, diff)
    return best


def exact_tv_curve(
    mu0: ProbVector, P: StochasticMatrix, n_max: int, threshold: float | None = None
) -> BoundReport:
    """Exact distance-to-stationarity curve for n = 0..n_max.

    The curve need not be monotone step-by-step; ``crossing`` (when a
    threshold is given) is simply the first index below it.
    """
    if n_max < 0:
        raise InputError("n_max must be >= 0")
    pi = stationary(P)
    values = []
    current = mu0
    for n in range(n_max + 1):
        values.append(tv_distance(current, pi))
        if n < n_max:
            current = evolve(current, P, 1)
    crossing = None
    if threshold is not None:
        crossing = next((n for n, v in enumerate(values) if v < threshold), None)
    return BoundReport(
        kind="exact-tv",
        ns=tuple(range(n_max + 1)),
        values=tuple(values),
        threshold=threshold,
        crossing=crossing,
        inputs={"size": P.size},
    )


@dataclass(frozen=True)
class MinorizationCert:
    """Certificate (C, n0, eps, nu) that n0-step transitions overlap by eps.

    ``variant`` is "uniform" (one shared overlap measure, ``nu`` set) or
    "pseudo" (pairwise overlap measures, derived from the n0-step matrix via
    ``pseudo_nu``; ``argmin_pairs`` lists the pairs attaining eps). The small
    set is the whole space for both search routines here.
    """

    variant: str
    small_set: tuple[int, ...]
    n0: int
    epsilon: Fraction
    nu: ProbVector | None = None
    argmin_pairs: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self) -> None:
        if self.variant not in ("uniform", "pseudo"):
            raise InputError(f"unknown variant {self.variant!r}")
        if self.n0 < 1:
            raise InputError("n0 must be >= 1")
        if not 0 < self.epsilon <= 1:
            raise InputError(f"epsilon must be in (0, 1], got {self.epsilon}")
        if self.variant == "uniform" and self.nu is None:
            raise InputError("uniform certificate requires nu")


def minorization_uniform(P: StochasticMatrix, n0: int) -> MinorizationCert | None:
    """Best whole-space overlap at lag n0: eps = sum_j min_i (P^n0)_ij.

    Returns None when every column of P^n0 has a zero (eps = 0); absence is a
    value, not an error.
    """
    if n0 < 1:
        raise InputError("n0 must be >= 1")
    pn = matrix_power(P, n0)
    size = P.size
    mins = [min(pn.rows[i][j] for i in range(size)) for j in range(size)]
    eps = sum(mins)
    if eps == 0:
        return None
    nu = ProbVector(tuple(m / eps for m in mins))
    return MinorizationCert(
        variant="uniform",
        small_set=tuple(range(size)),
        n0=n0,
        epsilon=eps,
        nu=nu,
    )


def pseudo_pair_overlap(pn0: StochasticMatrix, i: int, j: int) -> Fraction:
    """Overlap mass sum_z min((P^n0)_iz, (P^n0)_jz) of two starting rows."""
    return sum(min(a, b) for a, b in zip(pn0.rows[i], pn0.rows[j]))


def pseudo_nu(pn0: StochasticMatrix, i: int, j: int) -> ProbVector:
    """Pair overlap measure: min of the two rows, normalized."""
    total = pseudo_pair_overlap(pn0, i, j)
    if total == 0:
        raise MathError(f"rows {i} and {j} have disjoint support at this lag")
    return ProbVector(
        tuple(min(a, b) / total for a, b in zip(pn0.rows[i], pn0.rows[j]))
    )


def minorization_pseudo(P: StochasticMatrix, n0: int) -> MinorizationCert | None:
    """Pairwise overlap constant: eps = min over start pairs of the overlap.

    All pairs attaining the minimum are recorded in lexicographic order.
    Returns None when some pair of rows is disjoint (eps = 0).
    """
    if n0 < 1:
        raise InputError("n0 must be >= 1")
    pn = matrix_power(P, n0)
    size = P.size
    eps: Fraction | None = None
    pairs: list[tuple[int, int]] = []
    for i in range(size):
        for j in range(i if size == 1 else i + 1, size):
            overlap = pseudo_pair_overlap(pn, i, j)
            if eps is None or overlap < eps:
                eps = overlap
                pairs = [(i, j)]
            elif overlap == eps:
                pairs.append((i, j))
    assert eps is not None
    if eps == 0:
        return None
    return MinorizationCert(
        variant="pseudo",
        small_set=tuple(range(size)),
        n0=n0,
        epsilon=eps,
        argmin_pairs=tuple(pairs),
    )


def minorization_margin(P: StochasticMatrix, cert: MinorizationCert) -> Fraction:
    """Exact worst-case slack of the certificate; valid iff >= 0.

    Uniform: min over (i, j) of (P^n0)_ij - eps*nu(j). Pseudo: min over
    (i, j, z) of both row constraints against the pair measure.
    """
    pn = matrix_power(P, cert.n0)
    size = P.size
    worst: Fraction | None = None
    if cert.variant == "uniform":
        assert cert.nu is not None
        for i in range(size):
            for j in range(size):
                slack = pn.rows[i][j] - cert.epsilon * cert.nu[j]
                if worst is None or slack < worst:
                    worst = slack
    else:
        for i in range(size):
            for j in range(i, size):
                nu_ij = pseudo_nu(pn, i, j)
                for z in range(size):
                    for row in (i, j):
                        slack = pn.rows[row][z] - cert.epsilon * nu_ij[z]
                        if worst is None or slack < worst:
                            worst = slack
    assert worst is not None
    return worst


@dataclass(frozen=True)
class EigenMode:
    """One eigenvalue cluster's contribution to the start-distribution expansion."""

    eigenvalue: complex
    weight: float  # |projection evaluated at the target state|
    projection_norm: float  # L2 norm of the projection vector


@dataclass(frozen=True)
class EigenBound:
    """Geometric bound coefficient * rate^n on |mu_n(target) - pi(target)|."""

    target: int
    coefficient: float
    rate: float
    eigenvalues: tuple[complex, ...]
    stationary: tuple[float, ...]
    modes: tuple[EigenMode, ...]

    def value(self, n: int) -> float:
        return self.coefficient * self.rate**n


def eigen_bound(
    P: StochasticMatrix,
    mu0: ProbVector,
    target: int,
    cond_cap: float = 1e8,
    coeff_floor: float = 1e-12,
    cluster_tol: float = 1e-7,
) -> EigenBound:
    """Spectral expansion bound for one state's probability.

    Expands mu0 over the left eigenvectors (by solving the linear system, not
    assuming orthogonality), clusters numerically equal eigenvalues so the
    result does not depend on the arbitrary basis inside a degenerate
    eigenspace, and returns coefficient = sum over non-unit clusters of
    |projection(target)| with rate = the largest modulus among clusters that
    contribute more than ``coeff_floor``.
    """
    size = P.size
    if mu0.size != size:
        raise InputError(f"dimension mismatch: vector {mu0.size}, matrix {size}")
    if not 0 <= target < size:
        raise InputError(f"target {target} out of range")

    # columns of vecs are left eigenvectors of P
    eigvals, vecs = np.linalg.eig(P.to_floats().T)
    cond = np.linalg.cond(vecs)
    if not np.isfinite(cond) or cond > cond_cap:
        raise IllConditionedEigenbasisError(
            f"eigenvector matrix condition number {cond:.3e} exceeds {cond_cap:.1e}; "
            "chain may not be diagonalizable - use the minorization bound instead"
        )

    unit = [k for k in range(size) if abs(eigvals[k] - 1.0) <= 1e-9]
    near_unit_modulus = [k for k in range(size) if abs(abs(eigvals[k]) - 1.0) <= 1e-9]
    if len(unit) != 1 or len(near_unit_modulus) != 1:
        raise PeriodicChainError(
            "expected exactly one eigenvalue of unit modulus (the stationary "
            f"mode); found {len(near_unit_modulus)} - chain is periodic or "
            "reducible"
        )

    coeffs = np.linalg.solve(vecs, mu0.to_floats().astype(complex))

    order = sorted(range(size), key=lambda k: (-abs(eigvals[k]), -eigvals[k].real))
    clusters: list[list[int]] = []
    for k in order:
        for cluster in clusters:
            if abs(eigvals[cluster[0]] - eigvals[k]) <= cluster_tol:
                cluster.append(k)
                break
        else:
            clusters.append([k])

    coefficient = 0.0
    rate = 0.0
    modes: list[EigenMode] = []
    stationary_proj: np.ndarray | None = None
    for cluster in clusters:
        lam = complex(eigvals[cluster[0]])
        projection = sum(coeffs[k] * vecs[:, k] for k in cluster)
        if cluster[0] == unit[0] or unit[0] in cluster:
            stationary_proj = projection
            continue
        weight = abs(complex(projection[target]))
        modes.append(
            EigenMode(
                eigenvalue=lam,
                weight=weight,
                projection_norm=float(np.linalg.norm(projection)),
            )
        )
        if weight > coeff_floor:
            coefficient += weight
            rate = max(rate, abs(lam))

    assert stationary_proj is not None
    if rate >= 1.0:
        raise PeriodicChainError(f"non-unit eigenvalue of modulus {rate} >= 1")

    return EigenBound(
        target=target,
        coefficient=coefficient,
        rate=rate,
        eigenvalues=tuple(complex(eigvals[k]) for k in order),
        stationary=tuple(float(v) for v in stationary_proj.real),
        modes=tuple(modes),
    )
