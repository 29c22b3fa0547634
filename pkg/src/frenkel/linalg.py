"""Hermitian matrix kernels: eigendecomposition, spectral functions,
positive/negative parts, Schatten norms, and PSD-order predicates.

All matrices are dense complex Hermitian ndarrays.  Every function is pure;
nothing is mutated in place, so values can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

# Relative tolerance budget, shared by the whole package:
#   HERMITICITY_RTOL  admissible asymmetry of an input, relative to max |entry|
#   ZERO_BAND         eigenvalues within ZERO_BAND * opnorm(T) count as zero
#   PSD_SLACK         relative slack on every ">= 0" cone predicate
HERMITICITY_RTOL = 1e-12
ZERO_BAND = 1e-12
PSD_SLACK = 1e-10


def hermitian_part(M: np.ndarray) -> np.ndarray:
    """(M + M*) / 2."""
    M = np.asarray(M, dtype=complex)
    return (M + M.conj().T) / 2


def hermiticity_defect(M: np.ndarray) -> float:
    """Largest entrywise deviation of M from its Hermitian part."""
    M = np.asarray(M, dtype=complex)
    return float(np.abs(M - M.conj().T).max(initial=0.0) / 2)


def as_hermitian(M: np.ndarray) -> np.ndarray:
    """Validate and symmetrize a square matrix.

    Raises ValueError when the input is not square, carries non-finite
    entries, or deviates from Hermiticity by more than HERMITICITY_RTOL
    relative to its largest entry.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if M.shape[0] < 1:
        raise ValueError("matrix dimension must be >= 1")
    if not np.all(np.isfinite(M.view(float))):
        raise ValueError("matrix has non-finite entries")
    defect = hermiticity_defect(M)
    scale = float(np.abs(M).max(initial=0.0))
    if defect > HERMITICITY_RTOL * max(scale, 1e-300):
        raise ValueError(
            f"matrix is not Hermitian: defect {defect:.3e} exceeds "
            f"{HERMITICITY_RTOL:.0e} * {scale:.3e}"
        )
    return hermitian_part(M)


def opnorm(T: np.ndarray) -> float:
    """Operator (spectral) norm of a Hermitian matrix."""
    return float(np.abs(np.linalg.eigvalsh(hermitian_part(T))).max())


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in descending order and a unitary matrix of eigenvectors.

    Satisfies T = U diag(w) U* with U = eigenvectors, w = eigenvalues.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        U = self.eigenvectors
        return (U * self.eigenvalues) @ U.conj().T


def eig_hermitian(T: np.ndarray) -> SpectralDecomposition:
    """Full eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Deterministic for identical input bytes.  Non-finite entries are
    rejected up front; they are the only way the backing solver fails.
    """
    T = np.asarray(T, dtype=complex)
    if not np.all(np.isfinite(T.view(float))):
        raise ValueError("eig_hermitian: non-finite entries in input")
    w, U = np.linalg.eigh(hermitian_part(T))
    return SpectralDecomposition(w[::-1].copy(), U[:, ::-1].copy())


def eigvalsh_desc(T: np.ndarray) -> np.ndarray:
    """Eigenvalues only, descending."""
    return np.linalg.eigvalsh(hermitian_part(T))[::-1].copy()


def spectral_apply(T: np.ndarray, f: Callable[[float], float]) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its spectrum.

    Returns U diag(f(w)) U*.  Raises ValueError naming the offending
    eigenvalue when f is undefined (non-finite or raising) there.
    """
    dec = eig_hermitian(T)
    vals = np.empty_like(dec.eigenvalues)
    for i, lam in enumerate(dec.eigenvalues):
        try:
            y = f(float(lam))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"spectral_apply: f undefined at eigenvalue {lam!r}: {exc}") from exc
        if not np.isfinite(y):
            raise ValueError(f"spectral_apply: f({lam!r}) = {y!r} is not finite")
        vals[i] = y
    U = dec.eigenvectors
    return hermitian_part((U * vals) @ U.conj().T)


@dataclass(frozen=True)
class PartsDecomposition:
    """Spectral split T = positive_part - negative_part.

    positive_projection / negative_projection are the orthogonal projectors
    onto the strictly positive / strictly negative eigenspaces; eigenvalues
    inside the zero band belong to neither side.
    """

    positive_part: np.ndarray
    negative_part: np.ndarray
    positive_projection: np.ndarray
    negative_projection: np.ndarray

    @property
    def absolute_value(self) -> np.ndarray:
        return self.positive_part + self.negative_part


def parts(T: np.ndarray) -> PartsDecomposition:
    """Positive/negative parts and spectral projections of a Hermitian matrix."""
    dec = eig_hermitian(T)
    w, U = dec.eigenvalues, dec.eigenvectors
    band = ZERO_BAND * (np.abs(w).max() if w.size else 0.0)
    pos = w > band
    neg = w < -band
    Uc = U.conj().T

    def build(vals):
        return hermitian_part((U * vals) @ Uc)

    return PartsDecomposition(
        positive_part=build(np.where(pos, w, 0.0)),
        negative_part=build(np.where(neg, -w, 0.0)),
        positive_projection=build(pos.astype(float)),
        negative_projection=build(neg.astype(float)),
    )


def positive_part(T: np.ndarray) -> np.ndarray:
    """Clip a Hermitian matrix to its positive eigenspaces."""
    w, U = np.linalg.eigh(hermitian_part(np.asarray(T, dtype=complex)))
    band = ZERO_BAND * (np.abs(w).max() if w.size else 0.0)
    wp = np.where(w > band, w, 0.0)
    return hermitian_part((U * wp) @ U.conj().T)


def positive_part_stack(mats: np.ndarray) -> np.ndarray:
    """Positive parts of a stack of Hermitian matrices, shape (..., n, n)."""
    w, U = np.linalg.eigh(mats)
    band = ZERO_BAND * np.abs(w).max(axis=-1, keepdims=True)
    wp = np.where(w > band, w, 0.0)
    out = np.einsum("...ij,...j,...kj->...ik", U, wp, U.conj())
    return (out + np.swapaxes(out, -1, -2).conj()) / 2


def positive_eig_stack(mats: np.ndarray) -> np.ndarray:
    """Eigenvalues of a stack with the zero band applied, negatives dropped."""
    w = np.linalg.eigvalsh(mats)
    band = ZERO_BAND * np.abs(w).max(axis=-1, keepdims=True)
    return np.where(w > band, w, 0.0)


def matrix_log(T: np.ndarray) -> np.ndarray:
    """Principal logarithm of a positive definite Hermitian matrix."""
    dec = eig_hermitian(T)
    w = dec.eigenvalues
    floor = ZERO_BAND * np.abs(w).max()
    if w.min() <= floor:
        raise ValueError(
            f"matrix_log: input not positive definite at working precision "
            f"(min eigenvalue {w.min():.6e}, floor {floor:.6e})"
        )
    U = dec.eigenvectors
    return hermitian_part((U * np.log(w)) @ U.conj().T)


def matrix_exp(T: np.ndarray) -> np.ndarray:
    dec = eig_hermitian(T)
    U = dec.eigenvectors
    return hermitian_part((U * np.exp(dec.eigenvalues)) @ U.conj().T)


def schatten_norm(T: np.ndarray, p: float) -> float:
    """Schatten p-norm (sum |eigenvalue|^p)^(1/p); p = inf gives the operator norm."""
    if not (p >= 1):
        raise ValueError(f"schatten_norm: p must be >= 1 or inf, got {p!r}")
    w = np.abs(np.linalg.eigvalsh(hermitian_part(np.asarray(T, dtype=complex))))
    if np.isinf(p):
        return float(w.max())
    if p == 1:
        return float(w.sum())
    if p == 2:
        return float(np.sqrt((w * w).sum()))
    return float((w**p).sum() ** (1.0 / p))


@dataclass(frozen=True)
class PsdOrderVerdict:
    """Outcome of a PSD-order or support-containment query.

    margin is the smallest eigenvalue of the tested difference (order
    queries) or minus the kernel-compressed mass (support queries).  The
    witness, present only on failure, satisfies x*Bx ~ 0 < x*Ax for support
    queries after normalization.
    """

    holds: bool
    margin: float
    witness: Optional[np.ndarray] = None


def is_psd(T: np.ndarray, slack: float = PSD_SLACK) -> bool:
    w = np.linalg.eigvalsh(hermitian_part(np.asarray(T, dtype=complex)))
    scale = np.abs(w).max() if w.size else 0.0
    return bool(w.min() >= -slack * scale)


def require_psd(T: np.ndarray, name: str = "matrix") -> np.ndarray:
    T = as_hermitian(T)
    if not is_psd(T):
        w = np.linalg.eigvalsh(T)
        raise ValueError(f"{name} is not positive semidefinite (min eigenvalue {w.min():.6e})")
    return T


def psd_order(A: np.ndarray, B: np.ndarray, tau: float) -> PsdOrderVerdict:
    """Decide A <= tau * B in the PSD order, with the minimizing direction on failure."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.shape != B.shape:
        raise ValueError(f"psd_order: dimension mismatch {A.shape} vs {B.shape}")
    diff = hermitian_part(tau * B - A)
    w, U = np.linalg.eigh(diff)
    margin = float(w[0])
    tol = PSD_SLACK * (opnorm(A) + abs(tau) * opnorm(B))
    holds = margin >= -tol
    witness = None if holds else U[:, 0].copy()
    return PsdOrderVerdict(holds=holds, margin=margin, witness=witness)


def support_relation(A: np.ndarray, B: np.ndarray) -> PsdOrderVerdict:
    """Decide range(A) subseteq range(B) for PSD A, B.

    The kernel of B is read off its spectrum with the relative threshold
    ZERO_BAND * opnorm(B); failure returns a unit witness x with B x ~ 0
    and x* A x > 0.
    """
    A = require_psd(A, "A")
    B = require_psd(B, "B")
    if A.shape != B.shape:
        raise ValueError(f"support_relation: dimension mismatch {A.shape} vs {B.shape}")
    w, U = np.linalg.eigh(B)
    band = ZERO_BAND * np.abs(w).max(initial=0.0)
    kernel = U[:, w <= band]
    if kernel.shape[1] == 0:
        return PsdOrderVerdict(holds=True, margin=0.0)
    K = hermitian_part(kernel.conj().T @ A @ kernel)
    kw, kU = np.linalg.eigh(K)
    mass = float(kw[-1])
    holds = mass <= PSD_SLACK * opnorm(A)
    if holds:
        return PsdOrderVerdict(holds=True, margin=-mass)
    x = kernel @ kU[:, -1]
    x = x / np.linalg.norm(x)
    return PsdOrderVerdict(holds=False, margin=-mass, witness=x)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian, phase-fixed."""
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(G)
    d = np.diagonal(R)
    return Q * (d.conj() / np.abs(d))
