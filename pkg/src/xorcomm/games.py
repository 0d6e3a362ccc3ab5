"""Core game objects: XOR games, correlations, Bell functionals, strategies.

A XOR game is stored as its coefficient matrix t with sum(|t|) = 1.  The
distribution pi = |t| and the sign function f = sign(t) are derived views,
with sign(0) defined as +1 so round-trips are deterministic.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-12


class GameError(ValueError):
    """Malformed game data."""


class DegenerateGameError(GameError):
    """All-zero coefficient matrix cannot be normalized."""


class GuardExceededError(RuntimeError):
    """An enumeration would exceed its work guard; use a heuristic solver."""


def sign_pm(a):
    """Entrywise sign with sign(0) = +1."""
    return np.where(np.asarray(a) >= 0, 1.0, -1.0)


def _freeze(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class XorGame:
    """XOR game given by its coefficient matrix t, sum(|t|) = 1."""

    t: np.ndarray

    def __post_init__(self):
        t = _freeze(self.t)
        if t.ndim != 2 or t.size == 0:
            raise GameError("coefficient matrix must be 2-d and nonempty")
        if not np.all(np.isfinite(t)):
            raise GameError("coefficient matrix has non-finite entries")
        total = np.abs(t).sum()
        if abs(total - 1.0) > NORM_TOL:
            raise GameError(f"coefficients must have unit l1 mass, got {total!r}")
        object.__setattr__(self, "t", t)

    @property
    def x_count(self) -> int:
        return self.t.shape[0]

    @property
    def y_count(self) -> int:
        return self.t.shape[1]

    @property
    def pi(self) -> np.ndarray:
        """Input distribution |t|."""
        return np.abs(self.t)

    @property
    def f(self) -> np.ndarray:
        """Sign function, sign(0) = +1."""
        return sign_pm(self.t)

    def to_json(self) -> dict:
        return {
            "x_count": self.x_count,
            "y_count": self.y_count,
            "t": self.t.tolist(),
        }


@dataclass(frozen=True)
class CorrelationMatrix:
    """Correlation table E(ab|x,y), entries in [-1, 1]."""

    gamma: np.ndarray

    def __post_init__(self):
        g = _freeze(self.gamma)
        if g.ndim != 2:
            raise GameError("correlation matrix must be 2-d")
        if not np.all(np.isfinite(g)):
            raise GameError("correlation matrix has non-finite entries")
        if np.abs(g).max(initial=0.0) > 1.0 + NORM_TOL:
            raise GameError("correlation entries must lie in [-1, 1]")
        object.__setattr__(self, "gamma", g)


@dataclass(frozen=True)
class BellFunctional:
    """Dense Bell functional with coefficients indexed (a, b, x, y)."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = _freeze(self.coeffs)
        if c.ndim != 4 or c.size == 0:
            raise GameError("Bell coefficients must be a 4-d tensor")
        if not np.all(np.isfinite(c)):
            raise GameError("Bell coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    @property
    def a_count(self) -> int:
        return self.coeffs.shape[0]

    @property
    def b_count(self) -> int:
        return self.coeffs.shape[1]

    @property
    def x_count(self) -> int:
        return self.coeffs.shape[2]

    @property
    def y_count(self) -> int:
        return self.coeffs.shape[3]

    def to_json(self) -> dict:
        return {
            "x_count": self.x_count,
            "y_count": self.y_count,
            "a_count": self.a_count,
            "b_count": self.b_count,
            "coeffs": self.coeffs.ravel().tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BellFunctional":
        shape = (obj["a_count"], obj["b_count"], obj["x_count"], obj["y_count"])
        return cls(np.asarray(obj["coeffs"], dtype=float).reshape(shape))


@dataclass(frozen=True)
class ClassicalOwStrategy:
    """One-way classical protocol: Alice's sign and message per x, Bob's
    message-conditioned signs.  k = 1 is the no-communication case."""

    k: int
    alice_sign: np.ndarray
    alice_msg: np.ndarray
    bob_sign: np.ndarray  # shape (y_count, k)

    def __post_init__(self):
        if self.k < 1:
            raise GameError("message alphabet size must be >= 1")
        s = np.asarray(self.alice_sign, dtype=int)
        m = np.asarray(self.alice_msg, dtype=int)
        b = np.asarray(self.bob_sign, dtype=int)
        if not np.all(np.abs(s) == 1) or not np.all(np.abs(b) == 1):
            raise GameError("signs must be +-1")
        if m.min(initial=0) < 0 or m.max(initial=0) >= self.k:
            raise GameError("messages must lie in [0, k)")
        if b.shape[1] != self.k:
            raise GameError("bob_sign must have k columns")
        object.__setattr__(self, "alice_sign", s)
        object.__setattr__(self, "alice_msg", m)
        object.__setattr__(self, "bob_sign", b)

    def correlation(self, g: XorGame) -> CorrelationMatrix:
        gamma = self.bob_sign[:, self.alice_msg].T * self.alice_sign[:, None]
        return CorrelationMatrix(gamma.astype(float))

    def evaluate(self, g: XorGame) -> float:
        """Signed value achieved by this protocol on g."""
        return evaluate_correlation(g, self.correlation(g))


def make_xor_game(pi, f) -> XorGame:
    """Build a XOR game from a distribution pi and a +-1 sign table f."""
    pi = np.asarray(pi, dtype=float)
    f = np.asarray(f, dtype=float)
    if pi.shape != f.shape or pi.ndim != 2:
        raise GameError("pi and f must be matrices of identical shape")
    if np.any(pi < 0) or abs(pi.sum() - 1.0) > NORM_TOL:
        raise GameError("pi must be a probability distribution")
    if not np.all(np.abs(f) == 1.0):
        raise GameError("f entries must be +-1")
    return XorGame(pi * f)


def normalize_coefficients(raw) -> tuple[XorGame, float]:
    """Rescale a raw coefficient matrix to unit l1 mass.

    Returns the game and the normalizer N = sum(|raw|).
    """
    raw = np.asarray(raw, dtype=float)
    n = np.abs(raw).sum()
    if n == 0.0:
        raise DegenerateGameError("degenerate game: all coefficients are zero")
    return XorGame(raw / n), float(n)


def evaluate_correlation(g: XorGame, c: CorrelationMatrix) -> float:
    """Bias sum(t * gamma); always lies in [-1, 1]."""
    if c.gamma.shape != g.t.shape:
        raise GameError("correlation shape does not match game")
    return float(np.sum(g.t * c.gamma))


def game_to_file(g: XorGame, path) -> None:
    with open(path, "w") as fh:
        json.dump(g.to_json(), fh)


def game_from_json(obj: dict) -> XorGame:
    """Load a game from its JSON dict; family specs are expanded."""
    if "family" in obj:
        if obj["family"] != "rademacher":
            raise GameError(f"unknown game family {obj['family']!r}")
        from . import family

        return family.build_family_game(int(obj["n"])).game
    t = np.asarray(obj["t"], dtype=float)
    if t.shape != (obj["x_count"], obj["y_count"]):
        raise GameError("t shape does not match declared counts")
    return XorGame(t)


def game_from_file(path) -> XorGame:
    with open(path) as fh:
        return game_from_json(json.load(fh))


def chsh() -> XorGame:
    """The CHSH game: uniform pi on 2x2, f = [[+,+],[+,-]]."""
    return make_xor_game(np.full((2, 2), 0.25), [[1.0, 1.0], [1.0, -1.0]])
