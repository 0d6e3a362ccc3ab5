import itertools

import numpy as np
import pytest

import xorcomm as xc
from xorcomm.games import GuardExceededError


def random_game(seed, shape=(4, 4)):
    raw = np.random.default_rng(seed).normal(size=shape)
    g, _ = xc.normalize_coefficients(raw)
    return g


def brute_force_bias(g):
    """Oracle: direct loop over all sign assignments."""
    nx, ny = g.t.shape
    best = -np.inf
    for ts in itertools.product((1, -1), repeat=nx):
        for ss in itertools.product((1, -1), repeat=ny):
            best = max(best, float(np.einsum("xy,x,y->", g.t, ts, ss)))
    return best


def brute_force_ow(g, k):
    """Oracle: loop over per-input (sign, message) pairs for Alice."""
    nx, ny = g.t.shape
    best = -np.inf
    for signs in itertools.product((1, -1), repeat=nx):
        for msgs in itertools.product(range(k), repeat=nx):
            total = 0.0
            for y in range(ny):
                for m in range(k):
                    total += abs(sum(signs[x] * g.t[x, y]
                                     for x in range(nx) if msgs[x] == m))
            best = max(best, total)
    return best


def test_classical_value_chsh():
    rep = xc.classical_value_exact(xc.chsh())
    assert rep.value == 0.5
    assert rep.exact
    assert abs(rep.certificate.evaluate(xc.chsh()) - 0.5) < 1e-12


def test_classical_value_matches_brute_force():
    for seed in range(8):
        g = random_game(seed, (3, 4))
        rep = xc.classical_value_exact(g)
        assert abs(rep.value - brute_force_bias(g)) < 1e-12


def test_classical_guard():
    g = random_game(0, (30, 2))
    with pytest.raises(GuardExceededError):
        xc.classical_value_exact(g, guard=2 ** 10)


def test_ow_classical_matches_brute_force():
    for seed in range(5):
        g = random_game(seed, (3, 3))
        for k in (1, 2, 3):
            rep = xc.ow_classical_value_exact(g, k)
            assert abs(rep.value - brute_force_ow(g, k)) < 1e-12
            assert abs(rep.certificate.evaluate(g) - rep.value) < 1e-12


def test_ow_classical_k1_equals_plain_value():
    for seed in range(5):
        g = random_game(seed)
        assert abs(xc.ow_classical_value_exact(g, 1).value
                   - xc.classical_value_exact(g).value) < 1e-12


def test_ow_classical_saturates_at_full_alphabet():
    for seed in range(5):
        g = random_game(seed)
        rep = xc.ow_classical_value_exact(g, g.x_count)
        assert abs(rep.value - 1.0) < 1e-12


def test_ow_local_never_exceeds_exact():
    for seed in range(6):
        g = random_game(seed, (4, 3))
        for k in (1, 2, 3):
            exact = xc.ow_classical_value_exact(g, k).value
            local = xc.ow_classical_value_local(g, k, restarts=64,
                                                seed=seed).value
            assert local <= exact + 1e-12
            assert exact - local < 1e-9  # these sizes always converge


def test_quantum_seesaw_chsh():
    rep = xc.quantum_value_seesaw(xc.chsh(), restarts=8, seed=0)
    assert abs(rep.value - np.sqrt(2) / 2) < 1e-6
    assert not rep.exact


def test_quantum_seesaw_chsh_angle_grid_oracle():
    # one-parameter family of measurement angles reproduces the optimum
    g = xc.chsh()
    thetas = np.linspace(0, np.pi, 721)
    best = 0.0
    for ta in thetas[:: 8]:
        a = [np.array([np.cos(t), np.sin(t)]) for t in (ta, ta + np.pi / 2)]
        for tb in thetas:
            b = [np.array([np.cos(t), np.sin(t)]) for t in (tb, tb + np.pi / 2)]
            val = sum(g.t[x, y] * a[x] @ b[y] for x in range(2)
                      for y in range(2))
            best = max(best, abs(val))
    rep = xc.quantum_value_seesaw(g, restarts=8, seed=0)
    assert rep.value >= best - 1e-4


def test_quantum_seesaw_history_monotone():
    g = random_game(11)
    rep = xc.quantum_value_seesaw(g, restarts=4, seed=2)
    hist = np.asarray(rep.history)
    assert np.all(np.diff(hist, axis=0) >= -1e-9)


def test_ow_quantum_dominates_ow_classical():
    for seed in range(5):
        g = random_game(seed, (4, 4))
        for d in (2, 3):
            q = xc.ow_quantum_value_seesaw(g, d, restarts=16, seed=seed)
            c = xc.ow_classical_value_exact(g, d)
            assert q.value >= c.value - 1e-8
            assert q.value <= 1.0 + 1e-9


def test_ow_quantum_certificate_replays_value():
    g = random_game(21)
    rep = xc.ow_quantum_value_seesaw(g, 2, restarts=8, seed=1)
    assert abs(rep.certificate.evaluate(g).real - rep.value) < 1e-9


def test_seesaw_determinism():
    g = random_game(5)
    a = xc.quantum_value_seesaw(g, restarts=8, seed=3)
    b = xc.quantum_value_seesaw(g, restarts=8, seed=3)
    assert a.value == b.value
    c = xc.ow_quantum_value_seesaw(g, 2, restarts=8, seed=3)
    d = xc.ow_quantum_value_seesaw(g, 2, restarts=8, seed=3)
    assert c.value == d.value


def test_bell_classical_value_on_lift_matches_game():
    g = xc.chsh()
    b = xc.build_lifted_functional(g, 4)
    bell = xc.bell_classical_value_exact(b)
    ow = xc.ow_classical_value_exact(g, 4)
    assert bell.value <= ow.value + 1e-9
    assert abs(bell.certificate.evaluate(b) - bell.value) < 1e-12


def test_distributional_complexity_monotone():
    g = random_game(9, (4, 4))
    res = xc.distributional_complexity_ow(g, 0.45, k_max=4, restarts=32,
                                          seed=0)
    vals = [res.values[k] for k in sorted(res.values)]
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
    assert res.values[res.k] >= 2 * 0.45 - 1e-12
    assert res.bits == pytest.approx(np.log2(res.k))
