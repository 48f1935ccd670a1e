"""Gap coordinates on the weighted simplex and the A_{n-1} coweight algebra.

An ordered eigenvalue vector p_1 >= ... >= p_n >= 0 (summing to 1) is traded
for its successive gaps r_a = p_a - p_{a+1}.  The admissible gap vectors fill
the weighted simplex

    R_{n-1} = { r : r_a >= 0,  sum_a a * r_a <= 1 },

and the linear map back to probabilities is p = 1/n + M r, where column a of
M is the diagonal of the a-th fundamental coweight of sl(n).  Everything here
is a pure function of its inputs; values are immutable after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CrossoverDegeneracyError, ValidationError

VALIDATION_TOL = 1e-12
EXACT_TOL = 1e-14

# Exact (rational) volume formulas use factorials; keep them well inside the
# range where the geometry is actually explored.
MAX_EXACT_N = 20


def _check_dim(n) -> int:
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise ValidationError(f"dimension must be an integer >= 2, got {n!r}")
    return int(n)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ProbVector:
    """Ordered probability (eigenvalue) vector of length n."""

    n: int
    p: np.ndarray

    def __post_init__(self):
        n = _check_dim(self.n)
        p = np.array(self.p, dtype=float)
        if p.shape != (n,):
            raise ValidationError(f"expected {n} probabilities, got shape {p.shape}")
        if np.any(np.diff(p) > VALIDATION_TOL):
            raise ValidationError("probabilities must be in descending order")
        if p[-1] < -VALIDATION_TOL:
            raise ValidationError("probabilities must be non-negative")
        if abs(float(p.sum()) - 1.0) > VALIDATION_TOL:
            raise ValidationError("probabilities must sum to 1")
        object.__setattr__(self, "p", _frozen(p))


@dataclass(frozen=True)
class GapVector:
    """Spectral gap vector r of length n-1, constrained to R_{n-1}."""

    n: int
    r: np.ndarray

    def __post_init__(self):
        n = _check_dim(self.n)
        r = np.array(self.r, dtype=float)
        if r.shape != (n - 1,):
            raise ValidationError(f"expected {n - 1} gaps, got shape {r.shape}")
        if np.any(r < -VALIDATION_TOL):
            raise ValidationError("gaps must be non-negative")
        if float(np.arange(1, n) @ r) > 1.0 + VALIDATION_TOL:
            raise ValidationError("weighted gap sum exceeds 1 (outside R_{n-1})")
        object.__setattr__(self, "r", _frozen(r))


@dataclass(frozen=True)
class CoweightBasis:
    """The n-1 fundamental coweights of sl(n) as diagonal traceless matrices."""

    n: int
    omega: tuple

    def __post_init__(self):
        _check_dim(self.n)
        omega = tuple(_frozen(np.array(w, dtype=float)) for w in self.omega)
        if len(omega) != self.n - 1:
            raise ValidationError("coweight basis must contain n-1 matrices")
        object.__setattr__(self, "omega", omega)


def gaps_from_probs(p: ProbVector) -> GapVector:
    """Successive gaps r_a = p_a - p_{a+1} of an ordered probability vector."""
    return GapVector(p.n, -np.diff(p.p))


def sorted_probs(values, n=None) -> ProbVector:
    """Explicitly sort raw values in descending order into a ProbVector.

    gaps_from_probs rejects unordered input; use this when reordering is
    actually intended, so it never happens silently.
    """
    v = np.asarray(values, dtype=float)
    if n is None:
        n = v.size
    return ProbVector(n, np.sort(v)[::-1])


def jacobian_matrix(n: int) -> np.ndarray:
    """The n x (n-1) matrix M with p = 1/n + M r; column a is diag(omega_a)."""
    n = _check_dim(n)
    a = np.arange(1, n, dtype=float)
    k = np.arange(1, n + 1, dtype=float)
    return np.where(k[:, None] <= a[None, :], 1.0 - a / n, -a / n)


def probs_from_gaps(r: GapVector) -> ProbVector:
    """Recover the ordered probabilities from a gap vector."""
    p = 1.0 / r.n + jacobian_matrix(r.n) @ r.r
    return ProbVector(r.n, p)


def fundamental_coweights(n: int) -> CoweightBasis:
    """Fundamental coweights omega_a = (1/n) diag(n-a,...,-a,...) of sl(n)."""
    M = jacobian_matrix(n)
    return CoweightBasis(n, tuple(np.diag(M[:, a]) for a in range(n - 1)))


def cartan_matrix(n: int) -> np.ndarray:
    """Type A_{n-1} Cartan matrix (integer, tridiagonal)."""
    n = _check_dim(n)
    m = n - 1
    C = 2 * np.eye(m, dtype=int)
    C -= np.eye(m, k=1, dtype=int) + np.eye(m, k=-1, dtype=int)
    return C


def inverse_cartan(n: int) -> np.ndarray:
    """Inverse A_{n-1} Cartan matrix: entries min(a,j)(n - max(a,j))/n."""
    n = _check_dim(n)
    idx = np.arange(1, n, dtype=float)
    a, j = np.meshgrid(idx, idx, indexing="ij")
    return np.minimum(a, j) * (n - np.maximum(a, j)) / n


def inverse_cartan_exact(n: int):
    """Inverse Cartan matrix as exact Fractions (nested lists)."""
    n = _check_dim(n)
    return [
        [Fraction(min(a, j) * (n - max(a, j)), n) for j in range(1, n)]
        for a in range(1, n)
    ]


def spectral_diagonal(r: GapVector) -> np.ndarray:
    """Traceless diagonal D(r) = sum_a r_a omega_a = diag(p_k - 1/n)."""
    p = probs_from_gaps(r)
    return np.diag(p.p - 1.0 / r.n)


def in_polytope(r, n: int) -> bool:
    """Membership in the weighted simplex R_{n-1} (boundary inclusive)."""
    n = _check_dim(n)
    r = np.asarray(r, dtype=float)
    if r.shape != (n - 1,):
        raise ValidationError(f"expected {n - 1} gaps, got shape {r.shape}")
    if np.any(r < -VALIDATION_TOL):
        return False
    return float(np.arange(1, n) @ r) <= 1.0 + VALIDATION_TOL


def polytope_vertices(n: int):
    """The n vertices of R_{n-1}: the origin and e_a / a for a = 1..n-1."""
    n = _check_dim(n)
    vertices = [GapVector(n, np.zeros(n - 1))]
    for a in range(1, n):
        v = np.zeros(n - 1)
        v[a - 1] = 1.0 / a
        vertices.append(GapVector(n, v))
    return vertices


def ordered_simplex_volume(n: int) -> Fraction:
    """Euclidean volume of the ordered probability simplex: 1/(n! (n-1)!)."""
    n = _check_dim(n)
    if n > MAX_EXACT_N:
        raise ValidationError(f"exact volumes limited to n <= {MAX_EXACT_N}")
    return Fraction(1, math.factorial(n) * math.factorial(n - 1))


def weighted_simplex_volume(n: int) -> Fraction:
    """Euclidean volume of R_{n-1}: 1/((n-1)!)^2."""
    n = _check_dim(n)
    if n > MAX_EXACT_N:
        raise ValidationError(f"exact volumes limited to n <= {MAX_EXACT_N}")
    return Fraction(1, math.factorial(n - 1) ** 2)


def crossover_index(r: GapVector) -> int:
    """Largest k (1-based) with p_k >= 1/n.

    Raises CrossoverDegeneracyError if some p_k is within tolerance of 1/n,
    where the index (a measure-zero configuration) is ill-defined.
    """
    p = probs_from_gaps(r).p
    dev = p - 1.0 / r.n
    if np.any(np.abs(dev) < VALIDATION_TOL):
        raise CrossoverDegeneracyError(
            "an eigenvalue coincides with 1/n; crossover index undefined"
        )
    return int(np.max(np.nonzero(dev > 0.0)[0])) + 1


def rejection_volume_estimate(n: int, num_samples: int, seed: int):
    """Monte-Carlo estimate of Vol(R_{n-1}) by rejection from the bounding box
    [0,1] x [0,1/2] x ... x [0,1/(n-1)].  Returns (estimate, standard_error).
    """
    n = _check_dim(n)
    rng = np.random.default_rng(seed)
    a = np.arange(1, n, dtype=float)
    box_volume = float(np.prod(1.0 / a))
    x = rng.random((num_samples, n - 1)) / a
    accept = (x @ a) <= 1.0
    frac = float(np.mean(accept))
    est = box_volume * frac
    se = box_volume * math.sqrt(max(frac * (1.0 - frac), 0.0) / num_samples)
    return est, se
