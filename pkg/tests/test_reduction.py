import numpy as np
import pytest

import xorcomm as xc
from xorcomm.reduction import (ReductionMap, block_basis, l1_block_norm,
                               sample_reduction_map)


def test_embedding_columns_orthogonal():
    for n in (1, 2):
        emb = xc.subspace_embeddings(n)
        gram = emb.j1.T @ emb.j1
        assert np.array_equal(gram, (1 << (2 * n)) * np.eye(n * n))
        gram2 = emb.j2.T @ emb.j2
        assert np.array_equal(gram2, (1 << (n * n)) * np.eye(n * n))


def test_embedding_factorization_reproduces_game():
    for n in (1, 2):
        emb = xc.subspace_embeddings(n)
        fg = xc.build_family_game(n)
        rebuilt = emb.j1 @ (np.eye(n * n) / fg.m_normalizer) @ emb.j2.T
        assert np.abs(rebuilt - fg.game.t).max() < 1e-12


def test_l1_block_norm_selectors():
    blocks = np.array([np.eye(2), [[1.0, 1.0], [1.0, -1.0]]])
    assert l1_block_norm(blocks, "operator") == pytest.approx(1 + np.sqrt(2))
    assert l1_block_norm(blocks, "trace") == pytest.approx(2 + 2 * np.sqrt(2))
    assert l1_block_norm(blocks, "abs-sum") == pytest.approx(6.0)
    assert l1_block_norm(blocks, "sup-abs") == pytest.approx(2.0)
    with pytest.raises(ValueError):
        l1_block_norm(blocks, "nuclear")


def test_identity_reduction_is_lossless():
    rmap = xc.identity_reduction_map(10)
    x = np.random.default_rng(0).normal(size=(10, 3))
    assert np.array_equal(rmap.apply(x), x)
    assert not rmap.has_repeats


def test_reduction_map_json_round_trip():
    rmap = sample_reduction_map(20, 8, np.ones(20), seed=5)
    back = ReductionMap.from_json(rmap.to_json())
    assert np.array_equal(rmap.indices, back.indices)
    assert np.array_equal(rmap.scales, back.scales)
    assert rmap.source_size == back.source_size


def test_sampled_map_is_unbiased():
    """Monte Carlo oracle: E[sum_k alpha_k v_{i_k}] = sum_i v_i."""
    rng = np.random.default_rng(6)
    v = rng.normal(size=30)
    weights = np.abs(rng.normal(size=30)) + 0.1
    total = np.zeros(())
    reps = 4000
    for r in range(reps):
        rmap = sample_reduction_map(30, 12, weights, seed=r)
        total = total + rmap.apply(v).sum()
    assert abs(total / reps - v.sum()) < 0.05 * max(1.0, abs(v.sum()))


def test_sampled_map_scales_match_inverse_probability():
    weights = np.arange(1, 11, dtype=float)
    p = weights / weights.sum()
    rmap = sample_reduction_map(10, 6, weights, seed=0)
    assert np.allclose(rmap.scales, 1.0 / (6 * p[rmap.indices]))


def test_verify_isomorphism_identity_map_is_perfect():
    emb = xc.subspace_embeddings(1)
    basis = block_basis(emb.j1, 2)
    rmap = xc.identity_reduction_map(basis.shape[1])
    rep = xc.verify_isomorphism(rmap, basis, "operator", eps=0.01,
                                trials=50, seed=0)
    assert rep.pass_fraction == 1.0
    assert abs(rep.ratio_min - 1.0) < 1e-10
    assert abs(rep.ratio_max - 1.0) < 1e-10


def test_verify_isomorphism_band():
    rep = xc.DistortionReport(trials=10, eps=0.5, ratio_min=0.9,
                              ratio_max=1.1, ratio_mean=1.0,
                              pass_fraction=1.0)
    lo, hi = rep.target_band
    assert lo == pytest.approx(1 / np.sqrt(1.5))
    assert hi == pytest.approx(np.sqrt(1.5))


def test_reduce_game_identity_reproduces_original():
    fg = xc.build_family_game(1)
    nx, ny = fg.game.t.shape
    maps = (xc.identity_reduction_map(nx), xc.identity_reduction_map(ny))
    reduced, rep = xc.reduce_game(fg, d=2, m=nx, seed=0, maps=maps,
                                  restarts=4, trials=20)
    assert np.abs(reduced.t - fg.game.t).max() < 1e-12


def test_reduce_game_sampled_preserves_norms_roughly():
    fg = xc.build_family_game(2)
    reduced, rep = xc.reduce_game(fg, d=2, m=512, seed=1, restarts=8,
                                  trials=60)
    assert rep.distortion_rows.pass_fraction >= 0.9
    assert rep.distortion_cols.pass_fraction >= 0.9
    assert reduced.t.shape == (512, 512)
    assert abs(np.abs(reduced.t).sum() - 1.0) < 1e-12
