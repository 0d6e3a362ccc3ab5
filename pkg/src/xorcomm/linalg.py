"""Small dense Hermitian matrix algebra used by the communication solvers.

Everything here works on plain complex ndarrays.  Eigendecompositions are
delegated to LAPACK through numpy, which is deterministic for identical
input; consumers only use sums and signs of eigenvalues, so no tie-breaking
of degenerate eigenvectors is needed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-12


class LinalgError(ValueError):
    pass


def _as_square(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise LinalgError("matrix must be square")
    if not np.all(np.isfinite(a.view(float))):
        raise LinalgError("matrix has non-finite entries")
    return a


def _check_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    a = _as_square(a)
    scale = max(1.0, np.abs(a).max(initial=0.0))
    if np.abs(a - a.conj().T).max(initial=0.0) > tol * scale:
        raise LinalgError("matrix is not Hermitian within tolerance")
    return a


@dataclass(frozen=True)
class HermitianEig:
    """Eigenvalues sorted descending with matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eig(h, tol: float = HERMITIAN_TOL) -> HermitianEig:
    h = _check_hermitian(h, tol)
    w, v = np.linalg.eigh(h)
    return HermitianEig(w[::-1].copy(), v[:, ::-1].copy())


def trace_norm(a) -> float:
    """Sum of singular values (trace-class norm)."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise LinalgError("matrix must be 2-d")
    if not np.all(np.isfinite(a.view(float))):
        raise LinalgError("matrix has non-finite entries")
    return float(np.linalg.svd(a, compute_uv=False).sum())


def operator_norm(a) -> float:
    """Largest singular value."""
    a = np.asarray(a, dtype=complex)
    if a.size == 0:
        return 0.0
    return float(np.linalg.svd(a, compute_uv=False).max())


def pos_neg_split(h) -> tuple[np.ndarray, np.ndarray]:
    """Split a Hermitian matrix as h = h_plus - h_minus, both PSD."""
    eig = hermitian_eig(h)
    w, v = eig.eigenvalues, eig.eigenvectors
    plus = (v * np.clip(w, 0.0, None)) @ v.conj().T
    minus = (v * np.clip(-w, 0.0, None)) @ v.conj().T
    return plus, minus


def sign_operator(h) -> np.ndarray:
    """Eigenvalue-sign function of a Hermitian matrix.

    Maximizes tr(B h) over Hermitian ||B|| <= 1; eigenvalues within
    1e-12 * ||h||_F of zero contribute a zero block, so the operator norm
    stays <= 1.
    """
    eig = hermitian_eig(h)
    w, v = eig.eigenvalues, eig.eigenvectors
    thr = 1e-12 * max(np.sqrt(np.sum(w * w)), 1e-300)
    s = np.where(w > thr, 1.0, np.where(w < -thr, -1.0, 0.0))
    return (v * s) @ v.conj().T


@dataclass(frozen=True)
class QuantumOwStrategy:
    """One-way quantum protocol data: trace-norm-ball matrices R_x against
    operator-norm-ball observables B_y, optionally all Hermitian."""

    d: int
    r_list: np.ndarray  # (x_count, d, d)
    b_list: np.ndarray  # (y_count, d, d)
    selfadjoint: bool

    def __post_init__(self):
        r = np.asarray(self.r_list, dtype=complex)
        b = np.asarray(self.b_list, dtype=complex)
        if r.ndim != 3 or b.ndim != 3 or r.shape[1:] != (self.d, self.d) \
                or b.shape[1:] != (self.d, self.d):
            raise LinalgError("strategy matrices must be stacks of d x d")
        sr = np.linalg.svd(r, compute_uv=False).sum(axis=-1)
        if sr.max(initial=0.0) > 1.0 + 1e-10:
            raise LinalgError("some R_x exceeds the trace-norm ball")
        sb = np.linalg.svd(b, compute_uv=False).max(axis=-1)
        if sb.max(initial=0.0) > 1.0 + 1e-10:
            raise LinalgError("some B_y exceeds the operator-norm ball")
        if self.selfadjoint:
            herm = max(np.abs(r - r.conj().transpose(0, 2, 1)).max(initial=0.0),
                       np.abs(b - b.conj().transpose(0, 2, 1)).max(initial=0.0))
            if herm > HERMITIAN_TOL:
                raise LinalgError("self-adjoint strategy has non-Hermitian matrices")
        r.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "r_list", r)
        object.__setattr__(self, "b_list", b)

    @property
    def x_count(self) -> int:
        return self.r_list.shape[0]

    @property
    def y_count(self) -> int:
        return self.b_list.shape[0]

    def evaluate(self, game) -> complex:
        """sum_{x,y} t[x,y] tr(R_x B_y); real for self-adjoint strategies."""
        val = np.einsum("xy,xab,yba->", game.t, self.r_list, self.b_list)
        return complex(val)
