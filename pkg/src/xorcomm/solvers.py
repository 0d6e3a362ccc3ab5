"""Game-value solvers.

Exact enumeration where feasible (classical, one-way classical, Bell
classical), monotone see-saw or coordinate ascent with restarts elsewhere.
All values are maximized in absolute value; certificates carry the sign so
that replaying a certificate reproduces the reported value.

Restart r draws its initial point from default_rng(seed + r), so results do
not depend on scheduling; all loops here are sequential and deterministic.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .games import (BellFunctional, ClassicalOwStrategy, GuardExceededError,
                    XorGame, sign_pm)
from .linalg import QuantumOwStrategy

DEFAULT_GUARD = 2 ** 26
DEFAULT_OW_GUARD = 2 ** 32
MAX_ITER = 10_000
_CHUNK = 1 << 13


@dataclass
class SolveReport:
    value: float
    certificate: Any
    exact: bool
    restarts_used: int = 0
    iterations: int = 0
    seed: int | None = None
    elapsed_seconds: float = 0.0
    history: list = field(default_factory=list)
    heuristic_warning: bool = False


@dataclass(frozen=True)
class VectorStrategy:
    """Unit vectors u_x, v_y realizing a Tsirelson-form quantum bias."""

    u_list: np.ndarray  # (x_count, dim)
    v_list: np.ndarray  # (y_count, dim)

    def __post_init__(self):
        for name in ("u_list", "v_list"):
            a = np.asarray(getattr(self, name), dtype=float)
            if np.abs(np.linalg.norm(a, axis=1) - 1.0).max(initial=0.0) > 1e-10:
                raise ValueError(f"{name} rows must be unit vectors")
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    @property
    def dim(self) -> int:
        return self.u_list.shape[1]

    def evaluate(self, g: XorGame) -> float:
        return float(np.einsum("xy,xd,yd->", g.t, self.u_list, self.v_list))


def _sign_chunks(n_free: int, chunk: int = _CHUNK):
    """Yield +-1 matrices (rows, n_free) enumerating all sign patterns."""
    total = 1 << n_free
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.uint64)
        bits = (idx[:, None] >> np.arange(n_free, dtype=np.uint64)) & 1
        yield start, bits.astype(np.int8) * 2 - 1


def classical_value_exact(g: XorGame, guard: int = DEFAULT_GUARD) -> SolveReport:
    """omega(G) by full enumeration of Alice's signs (t_0 fixed +1)."""
    t0 = time.perf_counter()
    nx, ny = g.x_count, g.y_count
    work = (1 << (nx - 1)) * ny
    if work > guard:
        raise GuardExceededError(
            f"2^{nx - 1} x {ny} exceeds guard {guard}; use ow_classical_value_local")
    best_val, best_idx = -1.0, 0
    for start, signs in _sign_chunks(nx - 1):
        full = np.hstack([np.ones((signs.shape[0], 1), dtype=np.int8), signs])
        vals = np.abs(full.astype(float) @ g.t).sum(axis=1)
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val, best_idx = float(vals[i]), start + i
    bits = (best_idx >> np.arange(nx - 1)) & 1
    t_signs = np.concatenate([[1], bits * 2 - 1])
    col = t_signs @ g.t
    s_signs = sign_pm(col).astype(int)
    # the protocol evaluates to +best_val with these signs
    cert = ClassicalOwStrategy(1, t_signs, np.zeros(nx, dtype=int),
                               s_signs[:, None])
    return SolveReport(best_val, cert, exact=True,
                       elapsed_seconds=time.perf_counter() - t0)


def ow_classical_value_exact(g: XorGame, k: int,
                             guard: int = DEFAULT_OW_GUARD) -> SolveReport:
    """omega_{o.w.-log k}(G) by enumerating per-x (sign, message) choices.

    Fixes (s_0, m_0) = (+1, 0) using the global-sign and message-relabel
    symmetries.
    """
    t0 = time.perf_counter()
    nx, ny = g.x_count, g.y_count
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        rep = classical_value_exact(g, guard=guard)
        rep.elapsed_seconds = time.perf_counter() - t0
        return rep
    n_assign = (2 * k) ** (nx - 1)
    if n_assign * ny * k > guard:
        raise GuardExceededError(
            f"(2k)^{nx - 1} x {ny} x {k} exceeds guard {guard}; "
            "use ow_classical_value_local")
    digits_base = (2 * k) ** np.arange(nx - 1, dtype=np.int64)
    best_val, best_idx = -1.0, 0
    for start in range(0, n_assign, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, n_assign), dtype=np.int64)
        digits = (idx[:, None] // digits_base) % (2 * k)   # (rows, nx-1)
        signs = np.where(digits < k, 1.0, -1.0)
        msgs = digits % k
        signs = np.hstack([np.ones((len(idx), 1)), signs])
        msgs = np.hstack([np.zeros((len(idx), 1), dtype=np.int64), msgs])
        total = np.zeros(len(idx))
        for m in range(k):
            contrib = (signs * (msgs == m)) @ g.t          # (rows, ny)
            total += np.abs(contrib).sum(axis=1)
        i = int(np.argmax(total))
        if total[i] > best_val:
            best_val, best_idx = float(total[i]), start + i
    digits = (best_idx // digits_base) % (2 * k)
    alice_sign = np.concatenate([[1], np.where(digits < k, 1, -1)])
    alice_msg = np.concatenate([[0], digits % k])
    bob = np.empty((ny, k), dtype=int)
    for m in range(k):
        col = (alice_sign * (alice_msg == m)) @ g.t
        bob[:, m] = sign_pm(col)
    cert = ClassicalOwStrategy(k, alice_sign, alice_msg, bob)
    return SolveReport(best_val, cert, exact=True,
                       elapsed_seconds=time.perf_counter() - t0)


def _ow_local_once(t: np.ndarray, k: int, rng: np.random.Generator,
                   init: ClassicalOwStrategy | None):
    nx, ny = t.shape
    if init is not None:
        sign = init.alice_sign.astype(float).copy()
        msg = init.alice_msg.copy()
    else:
        sign = rng.integers(0, 2, nx) * 2.0 - 1.0
        msg = rng.integers(0, k, nx)
    colsum = np.zeros((k, ny))
    for x in range(nx):
        colsum[msg[x]] += sign[x] * t[x]
    score = np.abs(colsum).sum()
    sweeps = 0
    while True:
        sweeps += 1
        changed = False
        for x in rng.permutation(nx):
            m0, s0 = msg[x], sign[x]
            colsum[m0] -= s0 * t[x]
            base = np.abs(colsum).sum(axis=1)           # (k,)
            plus = np.abs(colsum + t[x]).sum(axis=1)
            minus = np.abs(colsum - t[x]).sum(axis=1)
            rest = base.sum()
            cand = np.stack([rest - base + plus, rest - base + minus])
            si, mi = np.unravel_index(np.argmax(cand), cand.shape)
            new_score = float(cand[si, mi])
            if new_score > score + 1e-15:
                sign[x] = 1.0 if si == 0 else -1.0
                msg[x] = mi
                score = new_score
                changed = True
            else:
                sign[x], msg[x] = s0, m0
            colsum[msg[x]] += sign[x] * t[x]
        if not changed:
            break
    return score, sign, msg, sweeps


def ow_classical_value_local(g: XorGame, k: int, restarts: int = 256,
                             seed: int = 0,
                             init: ClassicalOwStrategy | None = None) -> SolveReport:
    """Coordinate-ascent lower bound on omega_{o.w.-log k}(G).

    Each per-x step is exact given the rest, so the objective never
    decreases.  If k >= x_count, the distinct-message initialization is
    included and saturates the value at sum|t| immediately.
    """
    t0 = time.perf_counter()
    nx, ny = g.x_count, g.y_count
    best = (-1.0, None, None)
    total_sweeps = 0
    for r in range(restarts):
        rng = np.random.default_rng(seed + r)
        start = init if (r == 0 and init is not None) else None
        if r == 0 and init is None and k >= nx:
            start = ClassicalOwStrategy(
                k, np.ones(nx, dtype=int), np.arange(nx) % k,
                np.ones((ny, k), dtype=int))
        score, sign, msg, sweeps = _ow_local_once(g.t, k, rng, start)
        total_sweeps += sweeps
        if score > best[0]:
            best = (score, sign, msg)
    score, sign, msg = best
    bob = np.empty((ny, k), dtype=int)
    for m in range(k):
        bob[:, m] = sign_pm((sign * (msg == m)) @ g.t)
    cert = ClassicalOwStrategy(k, sign.astype(int), msg, bob)
    return SolveReport(score, cert, exact=False, restarts_used=restarts,
                       iterations=total_sweeps, seed=seed,
                       elapsed_seconds=time.perf_counter() - t0)


def _normalize_rows(a: np.ndarray, keep: np.ndarray | None = None):
    """Normalize last axis to unit norm; keep previous row where the update
    vanished (degenerate see-saw step)."""
    nrm = np.linalg.norm(a, axis=-1, keepdims=True)
    ok = nrm[..., 0] > 1e-300
    out = np.where(ok[..., None], a / np.where(ok[..., None], nrm, 1.0), 0.0)
    if keep is not None:
        out = np.where(ok[..., None], out, keep)
    return out


def quantum_value_seesaw(g: XorGame, dim: int = 0, restarts: int = 32,
                         tol: float = 1e-10, seed: int = 0) -> SolveReport:
    """Lower bound on omega*(G) by alternating vector optimization."""
    t0 = time.perf_counter()
    nx, ny = g.x_count, g.y_count
    if dim < 1:
        dim = min(nx, ny)
    t = g.t
    if np.abs(t).sum() == 0.0:  # unreachable for valid XorGame; defensive
        raise ValueError("zero game")
    u = np.stack([np.random.default_rng(seed + r).standard_normal((nx, dim))
                  for r in range(restarts)])
    u = _normalize_rows(u)
    v = np.zeros((restarts, ny, dim))
    obj = np.full(restarts, -np.inf)
    history: list[np.ndarray] = []
    iters = 0
    while iters < MAX_ITER:
        iters += 1
        v = _normalize_rows(np.einsum("xy,rxd->ryd", t, u), keep=v)
        u = _normalize_rows(np.einsum("xy,ryd->rxd", t, v), keep=u)
        new = np.einsum("xy,rxd,ryd->r", t, u, v)
        history.append(new.copy())
        done = np.all(np.abs(new - np.where(np.isfinite(obj), obj, 0.0))
                      <= tol * np.maximum(np.abs(new), 1.0))
        obj = new
        if done and iters > 1:
            break
    best = int(np.argmax(obj))
    cert = VectorStrategy(u[best], v[best])
    return SolveReport(float(obj[best]), cert, exact=False,
                       restarts_used=restarts, iterations=iters, seed=seed,
                       elapsed_seconds=time.perf_counter() - t0,
                       history=[float(h[best]) for h in history])


def _project_trace_ball(r: np.ndarray) -> np.ndarray:
    s = np.linalg.svd(r, compute_uv=False).sum(axis=-1)
    s = np.maximum(s, 1e-300)
    return r / s[..., None, None]


def _batched_sign_operator(w: np.ndarray) -> np.ndarray:
    lam, vec = np.linalg.eigh(w)
    thr = 1e-12 * np.maximum(np.linalg.norm(lam, axis=-1, keepdims=True), 1e-300)
    s = np.where(lam > thr, 1.0, np.where(lam < -thr, -1.0, 0.0))
    return np.einsum("...ik,...k,...jk->...ij", vec, s, vec.conj())


def _batched_polar_max(w: np.ndarray) -> np.ndarray:
    """B with ||B|| <= 1 maximizing Re tr(B W): B = V U^H for W = U S V^H."""
    u, _, vh = np.linalg.svd(w)
    return vh.conj().transpose(*range(w.ndim - 2), -1, -2) @ \
        u.conj().transpose(*range(w.ndim - 2), -1, -2)


def _batched_top_eig_dyad(v: np.ndarray) -> np.ndarray:
    """Hermitian R in the trace ball maximizing tr(R V), V Hermitian:
    signed projector onto the extreme eigenvector."""
    lam, vec = np.linalg.eigh(v)
    top = np.where(np.abs(lam[..., -1]) >= np.abs(lam[..., 0]), -1, 0)
    idx = np.where(top == -1, lam.shape[-1] - 1, 0)
    take = np.take_along_axis(vec, idx[..., None, None], axis=-1)[..., 0]
    lam_t = np.take_along_axis(lam, idx[..., None], axis=-1)[..., 0]
    sgn = np.where(lam_t >= 0, 1.0, -1.0)
    return sgn[..., None, None] * np.einsum("...i,...j->...ij", take, take.conj())


def _batched_top_sv_dyad(v: np.ndarray) -> np.ndarray:
    """R in the trace ball maximizing Re tr(R V): top singular dyad v1 u1^H."""
    u, _, vh = np.linalg.svd(v)
    u1 = u[..., :, 0]
    v1 = vh[..., 0, :].conj()
    return np.einsum("...i,...j->...ij", v1, u1.conj())


def ow_quantum_value_seesaw(g: XorGame, d: int, restarts: int = 64,
                            tol: float = 1e-10, seed: int = 0,
                            selfadjoint: bool = True,
                            init: QuantumOwStrategy | None = None) -> SolveReport:
    """See-saw lower bound on omega*_{o.w.-log d}(G) (selfadjoint) or on the
    block norm ||G (x) id_{S_1^d}|| (general matrices).

    Alternates B_y <- argmax tr(B_y W_y) over the operator-norm ball and
    R_x <- argmax tr(R_x V_x) over the trace-norm ball; both half-steps are
    exact, so the objective is nondecreasing.
    """
    t0 = time.perf_counter()
    nx, ny = g.x_count, g.y_count
    t = g.t
    rs = []
    for r in range(restarts):
        rng = np.random.default_rng(seed + r)
        if r == 0 and init is not None:
            if init.d != d:
                raise ValueError("init strategy dimension mismatch")
            m = np.asarray(init.r_list, dtype=complex)
        else:
            m = rng.standard_normal((nx, d, d)) + 1j * rng.standard_normal((nx, d, d))
            if selfadjoint:
                m = (m + m.conj().transpose(0, 2, 1)) / 2
        rs.append(_project_trace_ball(m))
    R = np.stack(rs)
    B = np.zeros((restarts, ny, d, d), dtype=complex)
    obj = np.full(restarts, -np.inf)
    history: list[np.ndarray] = []
    iters = 0
    while iters < MAX_ITER:
        iters += 1
        W = np.einsum("xy,rxab->ryab", t, R)
        deg_b = np.abs(W).sum(axis=(-2, -1)) < 1e-300
        newB = _batched_sign_operator(W) if selfadjoint else _batched_polar_max(W)
        B = np.where(deg_b[..., None, None], B, newB)
        V = np.einsum("xy,ryab->rxab", t, B)
        deg_r = np.abs(V).sum(axis=(-2, -1)) < 1e-300
        newR = _batched_top_eig_dyad(V) if selfadjoint else _batched_top_sv_dyad(V)
        R = np.where(deg_r[..., None, None], R, newR)
        new = np.einsum("xy,rxab,ryba->r", t, R, B).real
        history.append(new.copy())
        prev = np.where(np.isfinite(obj), obj, 0.0)
        done = np.all(np.abs(new - prev) <= tol * np.maximum(np.abs(new), 1.0))
        obj = new
        if done and iters > 1:
            break
    best = int(np.argmax(obj))
    cert = QuantumOwStrategy(d, R[best], B[best], selfadjoint)
    return SolveReport(float(obj[best]), cert, exact=False,
                       restarts_used=restarts, iterations=iters, seed=seed,
                       elapsed_seconds=time.perf_counter() - t0,
                       history=[float(h[best]) for h in history])


@dataclass(frozen=True)
class BellClassicalStrategy:
    """Deterministic local strategy plus the sign achieving |<B, P>|."""

    alice: np.ndarray   # output per x
    bob: np.ndarray     # output per y
    sign: int

    def evaluate(self, b: BellFunctional) -> float:
        total = 0.0
        for x in range(b.x_count):
            total += b.coeffs[self.alice[x], self.bob, x,
                              np.arange(b.y_count)].sum()
        return self.sign * total


def bell_classical_value_exact(b: BellFunctional,
                               guard: int = DEFAULT_GUARD) -> SolveReport:
    """omega(B) over deterministic strategies, both signs of the pairing."""
    t0 = time.perf_counter()
    na, nb, nx, ny = b.coeffs.shape
    n_maps = na ** nx
    if n_maps * ny * nb > guard:
        raise GuardExceededError(
            f"{na}^{nx} Alice maps exceed guard {guard}")
    base = na ** np.arange(nx, dtype=np.int64)
    best = (-1.0, 0, 1)
    for start in range(0, n_maps, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, n_maps), dtype=np.int64)
        maps = (idx[:, None] // base) % na                  # (rows, nx)
        # S[row, b, y] = sum_x coeffs[a(x), b, x, y]
        s = np.zeros((len(idx), nb, ny))
        for x in range(nx):
            s += b.coeffs[maps[:, x], :, x, :]
        for sgn in (1, -1):
            score = np.max(sgn * s, axis=1).sum(axis=1)     # (rows,)
            i = int(np.argmax(score))
            if score[i] > best[0]:
                best = (float(score[i]), start + i, sgn)
    val, map_idx, sgn = best
    alice = ((map_idx // base) % na).astype(int)
    s = np.zeros((nb, ny))
    for x in range(nx):
        s += b.coeffs[alice[x], :, x, :]
    bob = np.argmax(sgn * s, axis=0).astype(int)
    cert = BellClassicalStrategy(alice, bob, sgn)
    return SolveReport(val, cert, exact=True,
                       elapsed_seconds=time.perf_counter() - t0)


@dataclass
class DistComplexityResult:
    k: int | None
    bits: float | None
    eps: float
    values: dict
    heuristic_used: bool


def distributional_complexity_ow(g: XorGame, eps: float, k_max: int,
                                 guard: int = DEFAULT_OW_GUARD,
                                 restarts: int = 64,
                                 seed: int = 0) -> DistComplexityResult:
    """Smallest k <= k_max with omega_{o.w.-log k}(G) >= 2 eps.

    Falls back to the local-search solver (flagged) past the enumeration
    guard.
    """
    if not (0.0 < eps <= 0.5):
        raise ValueError("eps must lie in (0, 1/2]")
    target = 2.0 * eps
    values: dict[int, float] = {}
    heuristic = False
    for k in range(1, k_max + 1):
        try:
            rep = ow_classical_value_exact(g, k, guard=guard)
        except GuardExceededError:
            rep = ow_classical_value_local(g, k, restarts=restarts, seed=seed)
            heuristic = True
        values[k] = rep.value
        if rep.value >= target - 1e-12:
            return DistComplexityResult(k, float(np.log2(k)), eps, values,
                                        heuristic)
    return DistComplexityResult(None, None, eps, values, heuristic)
