"""The explicit Rademacher game family and its probabilistic toolkit.

Alice's input is a pair of sign vectors (x, z) in {-1,1}^n x {-1,1}^n packed
into a 2n-bit row index (x in the low n bits, bit i set <=> x_i = +1); Bob's
input is a sign matrix y in {-1,1}^{n x n} packed row-major into an n^2-bit
column index.  The coefficient at ((x,z), y) is sum_{i,j} x_i z_j y_{ij} / M
with M the exact integer l1 mass of the unnormalized tensor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .games import XorGame
from .linalg import QuantumOwStrategy

MAX_FAMILY_N = 4
_Y_CHUNK = 1 << 13


class FamilySizeError(ValueError):
    pass


def sign_vectors(n: int) -> np.ndarray:
    """All 2^n sign vectors; row r has entry i = +1 iff bit i of r is set."""
    idx = np.arange(1 << n)
    bits = (idx[:, None] >> np.arange(n)) & 1
    return (bits * 2 - 1).astype(np.int64)


def _check_n(n: int):
    if not (1 <= n <= MAX_FAMILY_N):
        raise FamilySizeError(
            f"n={n} outside dense-materialization range 1..{MAX_FAMILY_N}")


def alice_embedding(n: int) -> np.ndarray:
    """Integer matrix (2^{2n}, n^2) with entry [(x,z), (i,j)] = x_i z_j."""
    xs = sign_vectors(n)
    row = np.arange(1 << (2 * n))
    x = xs[row & ((1 << n) - 1)]           # (2^{2n}, n)
    z = xs[row >> n]
    return (x[:, :, None] * z[:, None, :]).reshape(-1, n * n)


def _raw_coeff_block(n: int, j1: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Integer block of sum_{i,j} x_i z_j y_{ij} for the given y rows."""
    return j1 @ ys.T


def compute_M(n: int) -> int:
    """Exact integer l1 mass of the unnormalized family coefficients."""
    _check_n(n)
    j1 = alice_embedding(n)
    total = 0
    ny = 1 << (n * n)
    for start in range(0, ny, _Y_CHUNK):
        idx = np.arange(start, min(start + _Y_CHUNK, ny))
        ys = ((idx[:, None] >> np.arange(n * n)) & 1) * 2 - 1
        total += int(np.abs(_raw_coeff_block(n, j1, ys)).sum())
    return total


@dataclass(frozen=True)
class FamilyGame:
    n: int
    game: XorGame
    m_normalizer: int


def build_family_game(n: int) -> FamilyGame:
    _check_n(n)
    j1 = alice_embedding(n)
    j2 = sign_vectors(n * n)
    raw = j1 @ j2.T                       # (2^{2n}, 2^{n^2}) exact ints
    m = int(np.abs(raw).sum())
    return FamilyGame(n, XorGame(raw / m), m)


def m_bounds(n: int) -> tuple[float, float]:
    """Two-sided control of the normalizer: n 2^{n^2+2n} / sqrt(2) and
    n 2^{n^2+2n}."""
    hi = n * 2.0 ** (n * n + 2 * n)
    return hi / math.sqrt(2.0), hi


def family_quantum_strategy(n: int) -> tuple[QuantumOwStrategy, float]:
    """Explicit rank-one strategy: R_(x,z) = |phi_x><phi_z| and the
    normalized sign matrices B_y = A_y / ||A_y||.

    Returns the strategy and its value, which also equals the closed form
    (2^{2n} n / M) sum_y 1 / ||A_y||.
    """
    _check_n(n)
    fg = build_family_game(n)
    xs = sign_vectors(n)
    phi = xs / math.sqrt(n)               # (2^n, n) unit vectors
    row = np.arange(1 << (2 * n))
    xi = row & ((1 << n) - 1)
    zi = row >> n
    # tr(A_y |phi_z><phi_x|) = <phi_x| A_y |phi_z> pairs x with the row
    # index of the sign matrix, matching the coefficient sum x_i z_j y_{ij}.
    r_list = phi[zi][:, :, None] * phi[xi][:, None, :]   # |phi_z><phi_x|
    ys = sign_vectors(n * n).reshape(-1, n, n).astype(float)
    norms = np.linalg.svd(ys, compute_uv=False).max(axis=-1)
    b_list = ys / norms[:, None, None]
    strategy = QuantumOwStrategy(n, r_list.astype(complex),
                                 b_list.astype(complex), selfadjoint=False)
    inner = np.einsum("yij,ri,rj->ry", b_list, phi[xi], phi[zi])
    value = float(np.einsum("ry,ry->", fg.game.t.reshape(len(row), -1), inner))
    closed = (2.0 ** (2 * n)) * n / fg.m_normalizer * float((1.0 / norms).sum())
    if abs(value - closed) > 1e-10 * max(1.0, abs(closed)):
        raise AssertionError(
            f"direct evaluation {value} disagrees with closed form {closed}")
    return strategy, value


def selfadjoint_split(g: XorGame, strategy: QuantumOwStrategy
                      ) -> tuple[QuantumOwStrategy, float]:
    """Best Hermitian (real/imaginary)-component combination of a general
    strategy; its value is >= |Re(original value)| / 4.

    Hermitian components stay inside the norm balls, so no rescaling is
    needed.
    """
    r = np.asarray(strategy.r_list, dtype=complex)
    b = np.asarray(strategy.b_list, dtype=complex)
    rh = (r + r.conj().transpose(0, 2, 1)) / 2
    ri = (r - r.conj().transpose(0, 2, 1)) / 2j
    bh = (b + b.conj().transpose(0, 2, 1)) / 2
    bi = (b - b.conj().transpose(0, 2, 1)) / 2j
    best = None
    for rr in (rh, ri):
        for bb in (bh, bi):
            v = float(np.einsum("xy,xab,yba->", g.t, rr, bb).real)
            if best is None or abs(v) > abs(best[0]):
                best = (v, rr, bb)
    v, rr, bb = best
    if v < 0:
        rr = -rr
        v = -v
    out = QuantumOwStrategy(strategy.d, rr, bb, selfadjoint=True)
    return out, v


class KhintchineBound(NamedTuple):
    value: float
    vacuous: bool


E_SQUARED = math.e ** 2


def khintchine_upper_bound(n: int, k: int) -> KhintchineBound:
    """Upper bound (2 sqrt(2) e^2 / n) ln k on the k-message classical value
    of the family game; requires k >= e^2."""
    if k < E_SQUARED:
        raise ValueError("bound requires k >= e^2 (about 7.39)")
    val = 2.0 * math.sqrt(2.0) * E_SQUARED / n * math.log(k)
    return KhintchineBound(val, val > 1.0)


@dataclass
class KhintchineReport:
    n: int
    trials: int
    worst_low_single: float   # min of E|S| / ||alpha||_2, must be >= 1/sqrt(2)
    worst_high_single: float  # max of E|S| / ||alpha||_2, must be <= 1
    worst_low_double: float | None
    worst_high_double: float | None


def khintchine_empirical(n: int, trials: int = 100,
                         seed: int = 0) -> KhintchineReport:
    """Exact-enumeration check of the p = 1 Khintchine inequalities
    (a_1 = sqrt(2), b_1 = 1) and their double version (a_1^2, b_1^2)."""
    if n > 16:
        raise FamilySizeError("single-index enumeration limited to n <= 16")
    rng = np.random.default_rng(seed)
    ws = sign_vectors(n).astype(float)
    lo_s, hi_s = np.inf, -np.inf
    for _ in range(trials):
        alpha = rng.standard_normal(n)
        ratio = np.abs(ws @ alpha).mean() / np.linalg.norm(alpha)
        lo_s, hi_s = min(lo_s, ratio), max(hi_s, ratio)
    lo_d = hi_d = None
    if n <= 8:
        lo_d, hi_d = np.inf, -np.inf
        for _ in range(trials):
            alpha = rng.standard_normal((n, n))
            vals = ws @ alpha @ ws.T       # (2^n, 2^n) of sums
            ratio = np.abs(vals).mean() / np.linalg.norm(alpha)
            lo_d, hi_d = min(lo_d, ratio), max(hi_d, ratio)
    return KhintchineReport(n, trials, float(lo_s), float(hi_s),
                            None if lo_d is None else float(lo_d),
                            None if hi_d is None else float(hi_d))


def latala_estimate(n: int, samples: int = 2000,
                    seed: int = 0) -> tuple[float, float]:
    """Mean operator norm of uniform +-1 n x n matrices and its ratio to
    sqrt(n); exact enumeration for n <= 2, Monte Carlo otherwise."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n <= 2:
        mats = sign_vectors(n * n).reshape(-1, n, n).astype(float)
    else:
        rng = np.random.default_rng(seed)
        mats = rng.integers(0, 2, (samples, n, n)) * 2.0 - 1.0
    mean = float(np.linalg.svd(mats, compute_uv=False).max(axis=-1).mean())
    return mean, mean / math.sqrt(n)
