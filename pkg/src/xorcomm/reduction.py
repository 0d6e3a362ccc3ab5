"""Randomized input reduction for the family game.

The family game factors through two sign embeddings of an n^2-dimensional
space into the huge l1 input spaces.  Importance sampling of coordinates
with unbiased scales shrinks the input count while approximately preserving
l1-block norms on the embedded subspace, and therefore the quantum/classical
quotient of the reduced, renormalized game.

The sampling law (i.i.d. indices with probability proportional to block
mass, scales 1/(m p_i)) is the standard empirical-method estimator; the
distortion reports measure how well it does at a given m.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .family import FamilyGame, alice_embedding, sign_vectors
from .games import GuardExceededError, XorGame, normalize_coefficients
from . import solvers

BLOCK_NORMS = ("operator", "trace", "abs-sum", "sup-abs")


@dataclass(frozen=True)
class SubspaceEmbedding:
    """Sign matrices of the two coordinate embeddings; columns are exactly
    orthogonal with squared norm equal to the source size."""

    n: int
    j1: np.ndarray  # (2^{2n}, n^2), entry [(x,z),(i,j)] = x_i z_j
    j2: np.ndarray  # (2^{n^2}, n^2), entry [y,(i,j)] = y_{ij}


def subspace_embeddings(n: int) -> SubspaceEmbedding:
    return SubspaceEmbedding(n, alice_embedding(n), sign_vectors(n * n))


def _block_norms(blocks: np.ndarray, block_norm: str) -> np.ndarray:
    """Norm of each block in a stack (..., p, q)."""
    if block_norm == "operator":
        return np.linalg.svd(blocks, compute_uv=False).max(axis=-1)
    if block_norm == "trace":
        return np.linalg.svd(blocks, compute_uv=False).sum(axis=-1)
    if block_norm == "abs-sum":
        return np.abs(blocks).sum(axis=(-2, -1))
    if block_norm == "sup-abs":
        return np.abs(blocks).max(axis=(-2, -1))
    raise ValueError(f"unknown block norm {block_norm!r}; pick from {BLOCK_NORMS}")


def l1_block_norm(blocks, block_norm: str) -> float:
    """Sum of the selected norm over a nonempty list of same-shape blocks."""
    blocks = np.asarray(blocks)
    if blocks.ndim != 3 or blocks.shape[0] == 0:
        raise ValueError("blocks must be a nonempty stack of matrices")
    return float(_block_norms(blocks, block_norm).sum())


@dataclass(frozen=True)
class ReductionMap:
    """Sampled coordinates i_k with positive scales alpha_k implementing
    v -> (alpha_1 v_{i_1}, ..., alpha_m v_{i_m})."""

    source_size: int
    indices: np.ndarray
    scales: np.ndarray
    seed: int

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        sc = np.asarray(self.scales, dtype=float)
        if idx.shape != sc.shape or idx.ndim != 1:
            raise ValueError("indices and scales must be 1-d of equal length")
        if idx.min(initial=0) < 0 or idx.max(initial=0) >= self.source_size:
            raise ValueError("index out of range")
        if np.any(sc <= 0):
            raise ValueError("scales must be positive")
        idx.setflags(write=False)
        sc.setflags(write=False)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "scales", sc)

    @property
    def m(self) -> int:
        return len(self.indices)

    @property
    def has_repeats(self) -> bool:
        return len(np.unique(self.indices)) < self.m

    def apply(self, v: np.ndarray) -> np.ndarray:
        """Apply along the first axis of v."""
        shape = (self.m,) + (1,) * (np.ndim(v) - 1)
        return self.scales.reshape(shape) * np.asarray(v)[self.indices]

    def to_json(self) -> dict:
        return {"source_size": self.source_size, "m": self.m,
                "indices": self.indices.tolist(),
                "scales": self.scales.tolist(), "seed": self.seed}

    @classmethod
    def from_json(cls, obj: dict) -> "ReductionMap":
        return cls(obj["source_size"], np.asarray(obj["indices"]),
                   np.asarray(obj["scales"]), obj["seed"])


def identity_reduction_map(source_size: int) -> ReductionMap:
    return ReductionMap(source_size, np.arange(source_size),
                        np.ones(source_size), seed=0)


def sample_reduction_map(source_size: int, m: int, weights,
                         seed: int = 0) -> ReductionMap:
    """i.i.d. indices from p = weights / sum(weights), scales 1/(m p_i);
    the induced l1 estimator is unbiased for any fixed vector."""
    if m < 1:
        raise ValueError("m must be >= 1")
    w = np.asarray(weights, dtype=float)
    if w.shape != (source_size,) or np.any(w < 0) or w.sum() <= 0:
        raise ValueError("weights must be nonnegative with positive sum")
    p = w / w.sum()
    rng = np.random.default_rng(seed)
    idx = rng.choice(source_size, size=m, p=p)
    scales = 1.0 / (m * p[idx])
    return ReductionMap(source_size, idx, scales, seed)


@dataclass
class DistortionReport:
    trials: int
    eps: float
    ratio_min: float
    ratio_max: float
    ratio_mean: float
    pass_fraction: float

    @property
    def target_band(self) -> tuple[float, float]:
        return 1.0 / math.sqrt(1.0 + self.eps), math.sqrt(1.0 + self.eps)


def verify_isomorphism(rmap: ReductionMap, basis, block_norm: str,
                       eps: float = 0.5, trials: int = 200,
                       seed: int = 0) -> DistortionReport:
    """Distortion of random subspace elements under the reduction map.

    basis is a stack (n_basis, source_size, p, q) of block-vectors spanning
    the subspace; each trial draws a Gaussian combination and compares
    l1-block norms before and after the map.
    """
    basis = np.asarray(basis, dtype=float)
    if basis.ndim != 4 or basis.shape[1] != rmap.source_size:
        raise ValueError("basis must be (n_basis, source_size, p, q)")
    lo, hi = 1.0 / math.sqrt(1.0 + eps), math.sqrt(1.0 + eps)
    # repeated indices aggregate: ||J e|| = sum_i c_i alpha(i) ||e_i||
    agg = np.zeros(rmap.source_size)
    np.add.at(agg, rmap.indices, rmap.scales)
    ratios = np.empty(trials)
    for t in range(trials):
        rng = np.random.default_rng(seed + t)
        coeff = rng.standard_normal(basis.shape[0])
        e = np.tensordot(coeff, basis, axes=1)      # (source, p, q)
        norms = _block_norms(e, block_norm)
        denom = norms.sum()
        ratios[t] = (agg * norms).sum() / denom if denom > 0 else 1.0
    ok = (ratios >= lo) & (ratios <= hi)
    return DistortionReport(trials, eps, float(ratios.min()),
                            float(ratios.max()), float(ratios.mean()),
                            float(ok.mean()))


def block_basis(embedding: np.ndarray, d: int) -> np.ndarray:
    """Basis of (embedding span) tensor (d x d matrix units) as block
    vectors: one for each (column c, unit (k,l))."""
    src, dim = embedding.shape
    units = np.zeros((d * d, d, d))
    units[np.arange(d * d), np.repeat(np.arange(d), d),
          np.tile(np.arange(d), d)] = 1.0
    basis = np.einsum("sc,upq->cuspq", embedding.astype(float), units)
    return basis.reshape(dim * d * d, src, d, d)


@dataclass
class ReduceGameReport:
    n: int
    d: int
    m: int
    seed: int
    normalizer: float
    distortion_rows: DistortionReport
    distortion_cols: DistortionReport
    original: dict = field(default_factory=dict)
    reduced: dict = field(default_factory=dict)
    quotient_original: float = float("nan")
    quotient_reduced: float = float("nan")
    heuristic: bool = False


def reduce_game(fg: FamilyGame, d: int, m: int, seed: int = 0,
                maps: tuple[ReductionMap, ReductionMap] | None = None,
                restarts: int = 16, trials: int = 200,
                eps: float = 0.5) -> tuple[XorGame, ReduceGameReport]:
    """Sample row/column reduction maps, renormalize, and compare the
    one-way classical and quantum values of both games at dimension d.

    All rows of the sign embeddings carry equal block mass, so uniform
    sampling weights realize the importance law.
    """
    g = fg.game
    nx, ny = g.x_count, g.y_count
    if maps is None:
        j_rows = sample_reduction_map(nx, m, np.ones(nx), seed)
        j_cols = sample_reduction_map(ny, m, np.ones(ny), seed + 1)
    else:
        j_rows, j_cols = maps
    h = (j_rows.scales[:, None] * j_cols.scales[None, :]
         * g.t[np.ix_(j_rows.indices, j_cols.indices)])
    reduced, normalizer = normalize_coefficients(h)

    emb = subspace_embeddings(fg.n)
    dist_rows = verify_isomorphism(j_rows, block_basis(emb.j1, d), "operator",
                                   eps=eps, trials=trials, seed=seed + 2)
    dist_cols = verify_isomorphism(j_cols, block_basis(emb.j2, d), "trace",
                                   eps=eps, trials=trials, seed=seed + 3)

    report = ReduceGameReport(fg.n, d, j_rows.m, seed, normalizer,
                              dist_rows, dist_cols)
    for tag, game in (("original", g), ("reduced", reduced)):
        try:
            crep = solvers.ow_classical_value_exact(game, d)
        except GuardExceededError:
            crep = solvers.ow_classical_value_local(game, d, restarts=restarts,
                                                    seed=seed)
            report.heuristic = True
        qrep = solvers.ow_quantum_value_seesaw(game, d, restarts=restarts,
                                               seed=seed)
        entry = {"ow_classical": crep.value, "ow_classical_exact": crep.exact,
                 "ow_quantum": qrep.value}
        entry["quotient"] = qrep.value / crep.value if crep.value > 0 else float("inf")
        setattr(report, tag, entry)
    report.quotient_original = report.original["quotient"]
    report.quotient_reduced = report.reduced["quotient"]
    return reduced, report
