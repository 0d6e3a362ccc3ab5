"""Lifting a XOR game to a Bell functional and the teleportation strategy
that transports a one-way quantum protocol into it.

Index conventions (0-based internally):
  * clock/shift labels j, k run over 0..d-1; the pair label is a = k*d + j;
  * Alice's output (a, sign) is flattened as 2*a + (0 for +1, 1 for -1);
  * Bob's input (y, k) is flattened as y*d + k;
  * Bob's output index 0 means +1, index 1 means -1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .games import BellFunctional, GameError, XorGame
from .linalg import QuantumOwStrategy, pos_neg_split, trace_norm

TILDE_SIGNS = (1.0, -1.0)


@dataclass(frozen=True)
class WeylSet:
    """The d^2 clock-and-shift unitaries W_{k,j} = shift_k * phase_j."""

    d: int
    unitaries: np.ndarray  # (d*d, d, d), index a = k*d + j

    def twirl(self, a: np.ndarray) -> np.ndarray:
        """(1/d) sum_a W_a A W_a^*; equals tr(A) * identity."""
        ws = self.unitaries
        return np.einsum("aij,jk,alk->il", ws, a, ws.conj()) / self.d


def weyl_unitaries(d: int) -> WeylSet:
    if d < 1:
        raise ValueError("dimension must be >= 1")
    ls = np.arange(d)
    omega = np.exp(2j * np.pi / d)
    ws = np.empty((d * d, d, d), dtype=complex)
    for k in range(d):
        shift = np.zeros((d, d))
        shift[(ls + k) % d, ls] = 1.0
        for j in range(d):
            ws[k * d + j] = shift * omega ** (j * ls)  # columns scaled
    ws.setflags(write=False)
    return WeylSet(d, ws)


def build_lifted_functional(g: XorGame, d: int) -> BellFunctional:
    """Bell functional with coefficient T_{x,y} delta_{a,k} sign_a sign_b at
    Alice input x, Bob input (y,k), Alice output (a, sign_a), Bob output
    sign_b."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    nx, ny = g.x_count, g.y_count
    coeffs = np.zeros((2 * d, 2, nx, ny * d))
    for a in range(d):
        w = np.arange(ny) * d + a           # Bob inputs with k = a
        for ti, tsign in enumerate(TILDE_SIGNS):
            for bi, bsign in enumerate(TILDE_SIGNS):
                coeffs[2 * a + ti, bi, :, w] = (tsign * bsign) * g.t.T
    return BellFunctional(coeffs)


@dataclass(frozen=True)
class LiftedStrategy:
    """Teleportation-based quantum strategy for a lifted functional.

    POVMs act on C^d; the shared state is maximally entangled on C^d (x) C^d.
    alice_povms[x, a, ti] and bob_povms[y, k, i] are d x d PSD matrices.
    """

    d: int
    alice_povms: np.ndarray  # (x_count, d*d, 2, d, d)
    bob_povms: np.ndarray    # (y_count, d*d, 2, d, d)
    state: np.ndarray        # (d*d,) unit vector on C^d (x) C^d

    def validate(self, tol: float = 1e-10):
        d = self.d
        if abs(np.linalg.norm(self.state) - 1.0) > 1e-12:
            raise GameError("shared state is not normalized")
        for povms in (self.alice_povms, self.bob_povms):
            flat = povms.reshape(-1, d, d)
            herm = np.abs(flat - flat.conj().transpose(0, 2, 1)).max(initial=0)
            if herm > tol:
                raise GameError("POVM element not Hermitian")
            lam = np.linalg.eigvalsh(flat)
            scale = np.abs(lam).max(initial=1.0)
            if lam.min(initial=0.0) < -tol * max(scale, 1.0):
                raise GameError("POVM element not PSD")
        ident = np.eye(d)
        a_tot = self.alice_povms.sum(axis=(1, 2))
        if np.abs(a_tot - ident).max(initial=0.0) > tol:
            raise GameError("Alice POVM does not sum to identity")
        b_tot = self.bob_povms.sum(axis=2)
        if np.abs(b_tot - ident).max(initial=0.0) > tol:
            raise GameError("Bob POVM does not sum to identity")


def teleportation_strategy(g: XorGame,
                           strategy: QuantumOwStrategy) -> LiftedStrategy:
    """Lift a self-adjoint one-way strategy into POVMs for B^G_{d^2}.

    Each R_x is rescaled to trace norm exactly 1 first (the optimum is
    attained on the sphere), then split into positive and negative parts
    conjugated by the Weyl unitaries; Bob conjugates the transposed
    two-outcome decomposition of B_y by the conjugated/transposed unitaries.
    """
    if not strategy.selfadjoint:
        raise GameError("teleportation lift needs a self-adjoint strategy")
    if strategy.x_count != g.x_count or strategy.y_count != g.y_count:
        raise GameError("strategy shape does not match game")
    d = strategy.d
    ws = weyl_unitaries(d).unitaries
    ident = np.eye(d)
    alice = np.empty((g.x_count, d * d, 2, d, d), dtype=complex)
    for x in range(g.x_count):
        r = np.asarray(strategy.r_list[x])
        nrm = trace_norm(r)
        r = r / nrm if nrm > 1e-14 else np.diag(
            np.eye(1, d, 0).ravel()).astype(complex)
        plus, minus = pos_neg_split(r)
        alice[x, :, 0] = np.einsum("aij,jk,alk->ail", ws, plus, ws.conj()) / d
        alice[x, :, 1] = np.einsum("aij,jk,alk->ail", ws, minus, ws.conj()) / d
    bob = np.empty((g.y_count, d * d, 2, d, d), dtype=complex)
    for y in range(g.y_count):
        b = np.asarray(strategy.b_list[y])
        for i, f in enumerate(((ident + b) / 2, (ident - b) / 2)):
            bob[y, :, i] = np.einsum(
                "aij,jk,alk->ail", ws.conj(), f.T, ws)  # Wbar F^T W^T
    state = np.eye(d).ravel() / np.sqrt(d)
    ls = LiftedStrategy(d, alice, bob, state)
    ls.validate()
    return ls


def evaluate_bell(b: BellFunctional, ls: LiftedStrategy) -> float:
    """<B, P> for the probability table P(a,b|x,y) = <phi|E (x) P|phi>."""
    d = ls.d
    dd = d * d
    nx = ls.alice_povms.shape[0]
    ny = ls.bob_povms.shape[0]
    if b.x_count != nx or b.y_count != ny * dd or b.a_count != 2 * dd \
            or b.b_count != 2:
        raise GameError("functional dimensions do not match strategy")
    phi = ls.state.reshape(d, d)
    # <phi| E (x) P |phi> = sum conj(phi_ik) E_ij P_kl phi_jl
    probs = np.einsum("xvtij,wkuml,im,jl->xvtwku",
                      ls.alice_povms, ls.bob_povms, phi.conj(), phi,
                      optimize=True).real
    # reorder to coefficient layout (a_out, b_out, x, y*dd + k)
    probs = probs.reshape(nx, 2 * dd, ny * dd, 2)
    val = np.einsum("abxw,xawb->", b.coeffs, probs)
    return float(val)
