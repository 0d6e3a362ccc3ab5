import numpy as np
import pytest

import xorcomm as xc


def random_game(seed, shape=(3, 3)):
    raw = np.random.default_rng(seed).normal(size=shape)
    g, _ = xc.normalize_coefficients(raw)
    return g


def test_weyl_unitaries_are_unitary():
    for d in range(1, 7):
        ws = xc.weyl_unitaries(d).unitaries
        assert ws.shape == (d * d, d, d)
        prods = np.einsum("aij,akj->aik", ws, ws.conj())
        assert np.abs(prods - np.eye(d)).max() < 1e-12


def test_weyl_twirl_is_trace_times_identity():
    for d in range(1, 7):
        ws = xc.weyl_unitaries(d)
        rng = np.random.default_rng(d)
        for _ in range(20):
            a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            resid = np.abs(ws.twirl(a) - np.trace(a) * np.eye(d)).max()
            assert resid < 1e-10


def test_lifted_functional_coefficient_mass():
    g = xc.chsh()
    for d in (2, 4):
        b = xc.build_lifted_functional(g, d)
        # each (x, y) coefficient appears once per matching k = a and
        # once per sign pair (tilde-a, b)
        assert abs(np.abs(b.coeffs).sum() - 4.0 * d * np.abs(g.t).sum()) < 1e-12


def test_lifted_functional_index_placement():
    g = xc.chsh()
    d = 2
    b = xc.build_lifted_functional(g, d)
    # Alice output (a, +1), Bob output +1 on Bob input (y, k=a) carries T_{x,y}
    for a in range(d):
        for x in range(2):
            for y in range(2):
                assert b.coeffs[2 * a, 0, x, y * d + a] == g.t[x, y]
                assert b.coeffs[2 * a + 1, 0, x, y * d + a] == -g.t[x, y]
                # mismatched k carries zero
                assert b.coeffs[2 * a, 0, x, y * d + (1 - a)] == 0.0


def teleportation_residual(g, d, seed=0):
    rep = xc.ow_quantum_value_seesaw(g, d, restarts=8, seed=seed)
    lifted = xc.teleportation_strategy(g, rep.certificate)
    lifted.validate()
    b = xc.build_lifted_functional(g, d * d)
    bell = xc.evaluate_bell(b, lifted)
    direct = rep.certificate.evaluate(g).real
    return abs(bell - direct)


def test_teleportation_equality_chsh():
    assert teleportation_residual(xc.chsh(), 2) < 1e-10


def test_teleportation_equality_random_games():
    for seed in range(4):
        g = random_game(seed)
        assert teleportation_residual(g, 2, seed=seed) < 1e-10


def test_teleportation_equality_after_selfadjoint_split():
    # general one-way strategies enter the lift via their Hermitian split
    g = random_game(17)
    rep = xc.ow_quantum_value_seesaw(g, 2, restarts=8, seed=3,
                                     selfadjoint=False)
    split, split_value = xc.selfadjoint_split(g, rep.certificate)
    lifted = xc.teleportation_strategy(g, split)
    lifted.validate()
    b = xc.build_lifted_functional(g, 4)
    # POVM completeness pins each trace norm to 1, so the lift realizes the
    # value of the renormalized strategy (>= the split value)
    rescaled = np.array([r / xc.trace_norm(r) for r in split.r_list])
    want = np.einsum("xy,xab,yba->", g.t, rescaled, split.b_list).real
    bell = xc.evaluate_bell(b, lifted)
    assert abs(bell - want) < 1e-10
    assert bell >= split_value - 1e-10


def test_povm_completeness_and_state():
    g = xc.chsh()
    rep = xc.ow_quantum_value_seesaw(g, 2, restarts=4, seed=0)
    lifted = xc.teleportation_strategy(g, rep.certificate)
    d = lifted.d
    alice_sum = lifted.alice_povms.sum(axis=(1, 2))
    bob_sum = lifted.bob_povms.sum(axis=2)
    assert np.abs(alice_sum - np.eye(d)).max() < 1e-10
    assert np.abs(bob_sum - np.eye(d)).max() < 1e-10
    phi = lifted.state.reshape(d, d)
    assert np.abs(phi - np.eye(d) / np.sqrt(d)).max() < 1e-12


def test_bell_classical_bounded_by_ow_classical():
    for seed in range(6):
        g = random_game(seed)
        b = xc.build_lifted_functional(g, 4)
        bell = xc.bell_classical_value_exact(b).value
        ow = xc.ow_classical_value_exact(g, 4).value
        assert bell <= ow + 1e-9


def test_rejects_bad_dimension():
    with pytest.raises(ValueError):
        xc.build_lifted_functional(xc.chsh(), 0)
    with pytest.raises(ValueError):
        xc.weyl_unitaries(0)
