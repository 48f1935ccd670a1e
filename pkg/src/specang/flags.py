"""SU(n) angular machinery and the complete flag manifold.

Embedded two-level rotations assemble coset unitaries whose columns form an
ordered eigenframe; frames modulo column phases live on the flag manifold
SU(n)/T^{n-1}.  This module provides the closed-form rotation factors, the
explicit angular density of the invariant measure, invariant sampling of
frames by orthonormalized Gaussian matrices, the Monte-Carlo resolution of
identity, covariant quantization of functions on frames, and the closed-form
volumes of the flag manifold and of the nondegenerate state space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrumError, ValidationError
from .spectral import GapVector, gaps_from_probs, probs_from_gaps, spectral_diagonal

FRAME_TOL = 1e-12
HERMITICITY_TOL = 1e-12
EIG_FLOOR = -1e-10
MIN_EIG_GAP = 1e-10


def _pair_indices(n):
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


@dataclass(frozen=True)
class AngleSet:
    """Two-level rotation angles theta_{i,j} in [0, pi], phi_{i,j} in [0, 2pi)
    for every pair i < j, plus optional torus phases (n-1 of them)."""

    n: int
    theta: dict
    phi: dict
    torus: tuple | None = None

    def __post_init__(self):
        pairs = set(_pair_indices(self.n))
        if set(self.theta) != pairs or set(self.phi) != pairs:
            raise ValidationError(
                f"angle maps must have exactly the {len(pairs)} keys (i,j), i<j"
            )
        for key, th in self.theta.items():
            if not -1e-12 <= th <= math.pi + 1e-12:
                raise ValidationError(f"theta{key} = {th} outside [0, pi]")
        for key, ph in self.phi.items():
            if not -1e-12 <= ph < 2.0 * math.pi:
                raise ValidationError(f"phi{key} = {ph} outside [0, 2pi)")
        if self.torus is not None:
            torus = tuple(float(x) for x in self.torus)
            if len(torus) != self.n - 1:
                raise ValidationError("torus phases must have length n-1")
            object.__setattr__(self, "torus", torus)


@dataclass(frozen=True)
class UnitaryFrame:
    """Special unitary n x n matrix; its columns are an ordered eigenframe."""

    n: int
    U: np.ndarray

    def __post_init__(self):
        U = np.array(self.U, dtype=complex)
        if U.shape != (self.n, self.n):
            raise ValidationError(f"frame must be {self.n} x {self.n}")
        if np.linalg.norm(U.conj().T @ U - np.eye(self.n)) > FRAME_TOL * 10:
            raise ValidationError("frame is not unitary")
        if abs(np.linalg.det(U) - 1.0) > FRAME_TOL * 10:
            raise ValidationError("frame determinant is not 1")
        U.setflags(write=False)
        object.__setattr__(self, "U", U)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite n x n matrix."""

    n: int
    rho: np.ndarray

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)
        if rho.shape != (self.n, self.n):
            raise ValidationError(f"density matrix must be {self.n} x {self.n}")
        if np.linalg.norm(rho - rho.conj().T) > HERMITICITY_TOL * 10:
            raise ValidationError("density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > HERMITICITY_TOL * 10:
            raise ValidationError("density matrix trace is not 1")
        if np.min(np.linalg.eigvalsh(rho)) < EIG_FLOOR:
            raise ValidationError("density matrix has a negative eigenvalue")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)


def embedded_generator(n: int, i: int, j: int, k: int) -> np.ndarray:
    """Pauli matrix sigma_k embedded in the (i,j)-plane of C^n (1-based)."""
    if not 1 <= i < j <= n:
        raise ValidationError(f"need 1 <= i < j <= n, got ({i},{j}) for n={n}")
    if k not in (1, 2, 3):
        raise ValidationError("k must be 1, 2 or 3")
    g = np.zeros((n, n), dtype=complex)
    i -= 1
    j -= 1
    if k == 1:
        g[i, j] = g[j, i] = 1.0
    elif k == 2:
        g[i, j] = -1j
        g[j, i] = 1j
    else:
        g[i, i] = 1.0
        g[j, j] = -1.0
    return g


def cartan_generator(n: int, ell: int) -> np.ndarray:
    """Trace-orthonormal diagonal generator H_ell of su(n) (1-based)."""
    if not 1 <= ell <= n - 1:
        raise ValidationError(f"need 1 <= ell <= n-1, got {ell} for n={n}")
    d = np.zeros(n)
    d[:ell] = 1.0
    d[ell] = -float(ell)
    return np.diag(d / math.sqrt(ell * (ell + 1)))


def rotation_factor(n: int, i: int, j: int, theta: float, phi: float) -> UnitaryFrame:
    """Embedded two-level rotation in the (i,j)-plane.

    On the (i,j) block it equals
    exp(-i phi sigma3/2) exp(-i theta sigma2/2) exp(i phi sigma3/2),
    written in closed form with cos/sin; identity elsewhere.
    """
    if not 1 <= i < j <= n:
        raise ValidationError(f"need 1 <= i < j <= n, got ({i},{j}) for n={n}")
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    U = np.eye(n, dtype=complex)
    i -= 1
    j -= 1
    U[i, i] = c
    U[j, j] = c
    U[i, j] = -s * np.exp(-1j * phi)
    U[j, i] = s * np.exp(1j * phi)
    return UnitaryFrame(n, U)


def coset_unitary(angles: AngleSet) -> UnitaryFrame:
    """Ordered product of the two-level rotations, i ascending outer and j
    ascending inner: R_{1,2} R_{1,3} ... R_{n-1,n}."""
    U = np.eye(angles.n, dtype=complex)
    for (i, j) in _pair_indices(angles.n):
        U = U @ rotation_factor(angles.n, i, j, angles.theta[(i, j)], angles.phi[(i, j)]).U
    return UnitaryFrame(angles.n, U)


def torus_element(n: int, phases) -> np.ndarray:
    """Diagonal torus factor exp(i sum_ell phi_ell H_ell)."""
    phases = np.asarray(phases, dtype=float)
    if phases.shape != (n - 1,):
        raise ValidationError("torus phases must have length n-1")
    d = np.zeros(n)
    for ell in range(1, n):
        d += phases[ell - 1] * np.diag(cartan_generator(n, ell)).real
    return np.diag(np.exp(1j * d))


def full_unitary(angles: AngleSet) -> UnitaryFrame:
    """Coset product right-multiplied by the torus factor; a generic element
    of SU(n) with n^2 - 1 real parameters."""
    if angles.torus is None:
        raise ValidationError("full_unitary requires torus phases")
    U = coset_unitary(angles).U @ torus_element(angles.n, angles.torus)
    return UnitaryFrame(angles.n, U)


def qutrit_unitary_closed_form(angles: AngleSet) -> np.ndarray:
    """Explicit 3 x 3 coset matrix in terms of the six angles (closed form of
    the ordered product R_{1,2} R_{1,3} R_{2,3})."""
    if angles.n != 3:
        raise ValidationError("closed form is specific to n = 3")
    c = {k: math.cos(v / 2.0) for k, v in angles.theta.items()}
    s = {k: math.sin(v / 2.0) for k, v in angles.theta.items()}
    e = {k: np.exp(1j * v) for k, v in angles.phi.items()}
    c12, c13, c23 = c[(1, 2)], c[(1, 3)], c[(2, 3)]
    s12, s13, s23 = s[(1, 2)], s[(1, 3)], s[(2, 3)]
    e12, e13, e23 = e[(1, 2)], e[(1, 3)], e[(2, 3)]
    return np.array(
        [
            [
                c12 * c13,
                -s12 * c23 / e12 - c12 * s13 * s23 * e23 / e13,
                s12 * s23 / (e12 * e23) - c12 * s13 * c23 / e13,
            ],
            [
                e12 * s12 * c13,
                c12 * c23 - e12 * e23 / e13 * s12 * s13 * s23,
                -c12 * s23 / e23 - e12 / e13 * s12 * s13 * c23,
            ],
            [e13 * s13, e23 * c13 * s23, c13 * c23],
        ],
        dtype=complex,
    )


def assemble_density(r: GapVector, frame) -> DensityMatrix:
    """Density matrix 1/n + U D(r) U^dagger from gaps and an eigenframe.

    `frame` may be an AngleSet (the coset unitary is built from it) or a
    UnitaryFrame.
    """
    if isinstance(frame, AngleSet):
        frame = coset_unitary(frame)
    U = frame.U
    rho = np.eye(r.n) / r.n + U @ spectral_diagonal(r) @ U.conj().T
    return DensityMatrix(r.n, rho)


def _fix_column_phases(U: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-modulus entry is real positive, then
    restore det = 1 by a phase on the last column."""
    rows = np.argmax(np.abs(U), axis=0)
    lead = U[rows, np.arange(U.shape[1])]
    U = U * (np.abs(lead) / lead)[None, :]
    det = np.linalg.det(U)
    U[:, -1] *= det.conjugate() / abs(det)
    return U


def eigendecompose_ordered(rho: DensityMatrix):
    """Descending eigendecomposition with a deterministic phase section.

    Returns (GapVector, UnitaryFrame) such that assemble_density reproduces
    rho.  Raises DegenerateSpectrumError when the minimal eigenvalue gap is
    below threshold and the angular chart breaks down.
    """
    w, V = np.linalg.eigh(rho.rho)
    w, V = w[::-1], V[:, ::-1]
    if np.min(-np.diff(w)) < MIN_EIG_GAP:
        raise DegenerateSpectrumError(
            f"eigenvalue gap below {MIN_EIG_GAP}; frame is not well-defined"
        )
    w = np.clip(w, 0.0, None)
    from .spectral import ProbVector

    r = gaps_from_probs(ProbVector(rho.n, w / w.sum()))
    return r, UnitaryFrame(rho.n, _fix_column_phases(V))


def flag_density(angles: AngleSet) -> float:
    """Normalized invariant density on the flag manifold with respect to
    prod dtheta_{i,j} dphi_{i,j}:

    (prod_m m!/(4 pi)^m) prod_{i<j} sin(theta_ij) cos^{2(j-i-1)}(theta_ij/2).
    """
    n = angles.n
    pref = 1.0
    for m in range(1, n):
        pref *= math.factorial(m) / (4.0 * math.pi) ** m
    val = pref
    for (i, j) in _pair_indices(n):
        th = angles.theta[(i, j)]
        val *= math.sin(th) * math.cos(th / 2.0) ** (2 * (j - i - 1))
    return val


def sample_flags(n: int, count: int, seed: int) -> np.ndarray:
    """Stack of `count` frames distributed by the invariant flag measure.

    A complex Gaussian matrix is orthonormalized (QR with positive R
    diagonal), which is invariant by construction; each frame then gets the
    deterministic phase section of eigendecompose_ordered.
    """
    if count == 0:
        return np.zeros((0, n, n), dtype=complex)
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))
    Q, R = np.linalg.qr(G)
    d = np.einsum("...ii->...i", R)
    Q = Q * (d / np.abs(d))[:, None, :]
    # column phase convention: largest-modulus entry real positive
    rows = np.argmax(np.abs(Q), axis=1)
    lead = np.take_along_axis(Q, rows[:, None, :], axis=1)
    Q = Q * (np.abs(lead) / lead)
    det = np.linalg.det(Q)
    Q[:, :, -1] *= (det.conjugate() / np.abs(det))[:, None]
    return Q


def sample_flag(n: int, seed: int) -> UnitaryFrame:
    """A single invariantly distributed frame (deterministic in the seed)."""
    return UnitaryFrame(n, sample_flags(n, 1, seed)[0])


def resolution_check(n: int, i: int, num_samples: int, seed: int):
    """Monte-Carlo average of n |u_i><u_i| over sampled frames.

    Returns (average matrix, Frobenius distance to the identity); the error
    is expected to scale like 1/sqrt(num_samples).
    """
    if not 1 <= i <= n:
        raise ValidationError(f"column index must be in 1..{n}")
    frames = sample_flags(n, num_samples, seed)
    cols = frames[:, :, i - 1]
    avg = n * np.einsum("bi,bj->ij", cols, cols.conj()) / num_samples
    return avg, float(np.linalg.norm(avg - np.eye(n)))


def quantize(f, r: GapVector, num_samples: int, seed: int) -> np.ndarray:
    """Covariant integral quantization of a function on frames:
    Monte-Carlo estimate of Op_f = integral f(F) n rho_{r,F} dmu(F).

    `f` is called with each sampled frame as a plain (n, n) complex array.
    """
    n = r.n
    frames = sample_flags(n, num_samples, seed)
    if num_samples == 0:
        return np.zeros((n, n), dtype=complex)
    weights = np.array([f(U) for U in frames], dtype=complex)
    D = np.diag(spectral_diagonal(r))
    rhos = np.eye(n) / n + np.einsum("bik,k,bjk->bij", frames, D, frames.conj())
    return n * np.einsum("b,bij->ij", weights, rhos) / num_samples


def flag_volume(n: int) -> float:
    """Total volume (4 pi)^{n(n-1)/2} / prod_m m! of the flag manifold."""
    log_vol = n * (n - 1) / 2.0 * math.log(4.0 * math.pi)
    for m in range(1, n):
        log_vol -= math.lgamma(m + 1)
    return math.exp(log_vol)


def state_space_volume(n: int) -> float:
    """Volume of the nondegenerate state space: the product of the weighted
    simplex volume and the flag volume."""
    from .spectral import weighted_simplex_volume

    return float(weighted_simplex_volume(n)) * flag_volume(n)
