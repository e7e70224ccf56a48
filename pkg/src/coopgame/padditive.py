"""p-additive games: games determined by an exponent and the singleton worths.

A game ``w`` belongs to the class for exponent ``p`` when
``w(S)**p == sum(w({i})**p for i in S_plus)`` where ``S_plus`` drops the
players whose singleton worth is zero.  Zero worths never enter a power, so
negative exponents stay finite.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .game_core import (
    MAX_PLAYERS,
    Coalition,
    GameError,
    Orientation,
    TuGame,
    coalition_sums,
    grand,
    members,
    p_power,
    p_root,
    p_sum,
    scale_game,
    unanimity_game,
    zero_game,
)

ZERO_GAME_P = 2.0
MEMBERSHIP_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class PAdditiveGame:
    p: float
    indiv: np.ndarray

    def __post_init__(self):
        indiv = np.array(self.indiv, dtype=np.float64).reshape(-1)
        if self.p == 0 or not np.isfinite(self.p):
            raise GameError(f"exponent must be a nonzero real, got {self.p}")
        if not 1 <= indiv.size <= MAX_PLAYERS:
            raise GameError(f"player count must lie in [1, {MAX_PLAYERS}], got {indiv.size}")
        if not np.all(np.isfinite(indiv)):
            raise GameError("individual values must be finite")
        if np.any(indiv < 0):
            raise GameError(f"individual values must be nonnegative, got {indiv.tolist()}")
        indiv.setflags(write=False)
        object.__setattr__(self, "indiv", indiv)
        object.__setattr__(self, "p", float(self.p))
        if not np.any(indiv > 0) and self.p != ZERO_GAME_P:
            warnings.warn(
                f"zero game is stored with p={ZERO_GAME_P:g} (requested p={self.p:g})",
                stacklevel=3,
            )
            object.__setattr__(self, "p", ZERO_GAME_P)

    @property
    def n(self) -> int:
        return self.indiv.size

    @property
    def grand(self) -> Coalition:
        return grand(self.n)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.indiv > 0)

    def contributions(self) -> np.ndarray:
        """``w({i})**p`` per player, zero for null players."""
        return p_power(self.indiv, self.p)

    def value(self, S: Coalition) -> float:
        # accumulate in increasing player order, as expand() does, so both agree bitwise
        acc = 0.0
        kappa = self.contributions()
        for i in members(S):
            acc += kappa[i]
        return p_root(acc, self.p)

    def support(self, S: Coalition) -> Coalition:
        out = 0
        for i in members(S):
            if self.indiv[i] > 0:
                out |= 1 << i
        return out

    def power_sums(self) -> np.ndarray:
        """``sum(w({i})**p for i in S_plus)`` for every mask."""
        return coalition_sums(self.contributions())

    def expand(self) -> TuGame:
        return TuGame(self.n, p_root(self.power_sums(), self.p))

    def __eq__(self, other):
        if not isinstance(other, PAdditiveGame):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.indiv, other.indiv)

    def __hash__(self):
        return hash((self.p, self.indiv.tobytes()))

    def __repr__(self):
        return f"PAdditiveGame(p={self.p:g}, indiv={self.indiv.tolist()})"


def from_individual_values(p: float, indiv) -> PAdditiveGame:
    return PAdditiveGame(p, indiv)


def value(g: PAdditiveGame, S: Coalition) -> float:
    return g.value(S)


def support(g: PAdditiveGame, S: Coalition) -> Coalition:
    return g.support(S)


def padditive_sum(g: PAdditiveGame, g2: PAdditiveGame) -> PAdditiveGame:
    """p-sum of two games of the class; the zero game is neutral whatever its stored p."""
    if g.n != g2.n:
        raise GameError(f"player counts differ: {g.n} vs {g2.n}")
    if g.is_zero:
        return g2
    if g2.is_zero:
        return g
    if g.p != g2.p:
        raise GameError(f"exponents differ: {g.p} vs {g2.p}")
    return PAdditiveGame(g.p, p_root(g.contributions() + g2.contributions(), g.p))


class Membership(NamedTuple):
    ok: bool
    violator: Coalition | None


def validate_membership(g: TuGame, p: float, tol: float = MEMBERSHIP_TOL) -> Membership:
    """Check that ``g`` is p-additive; on failure report the smallest violating mask."""
    if p == 0:
        raise GameError("p must be nonzero")
    w = g.values
    scale = max(1.0, float(np.max(np.abs(w))))
    eps = tol * scale
    single = np.array([w[1 << i] for i in range(g.n)])
    positive = single > eps
    kappa = np.where(positive, p_power(np.where(positive, single, 0.0), p), 0.0)
    expected = coalition_sums(kappa)
    has_positive = coalition_sums(positive.astype(np.float64)) > 0

    bad = w < -eps
    bad |= ~has_positive & (w > eps)
    actual = p_power(np.maximum(w, 0.0), p)
    bad |= has_positive & (np.abs(actual - expected) > tol * np.maximum(1.0, np.abs(actual)))
    bad[0] = False
    hits = np.flatnonzero(bad)
    if hits.size:
        return Membership(False, int(hits[0]))
    return Membership(True, None)


@dataclass(frozen=True)
class ClassProfile:
    p: float
    monotone_increasing: bool
    monotone_strictly_decreasing_iff_positive: bool
    convex: bool
    concave: bool
    subadditive: bool
    superadditive: bool
    totally_balanced: bool
    interpretation: Orientation

    def as_dict(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["interpretation"] = self.interpretation.value
        return d


def classify(p: float) -> ClassProfile:
    """Properties every game of the class shares, by exponent.

    For ``p < 0`` concavity and strict decrease depend on the game; see
    :func:`game_profile`.
    """
    if p == 0:
        raise GameError("p must be nonzero")
    if p < 0:
        return ClassProfile(p, False, True, False, False, True, False, True, Orientation.COST)
    return ClassProfile(
        p,
        monotone_increasing=True,
        monotone_strictly_decreasing_iff_positive=False,
        convex=p <= 1,
        concave=p >= 1,
        subadditive=p >= 1,
        superadditive=p <= 1,
        totally_balanced=True,
        interpretation=Orientation.COST if p >= 1 else Orientation.BENEFIT,
    )


def orientations(p: float) -> tuple[Orientation, ...]:
    """Core orientations under which the class is read; both at ``p == 1``."""
    if p == 1:
        return (Orientation.COST, Orientation.BENEFIT)
    return (classify(p).interpretation,)


def game_profile(g: PAdditiveGame) -> dict:
    """Class profile with the game-dependent entries resolved for ``g``."""
    prof = classify(g.p).as_dict()
    n_plus = int(np.count_nonzero(g.indiv > 0))
    prof["n_plus"] = n_plus
    if g.p < 0:
        prof["concave"] = n_plus <= 2
        prof["permutationally_concave"] = n_plus <= 2
        prof["monotone_strictly_decreasing"] = n_plus == g.n
    return prof


def decompose_unanimity(g: PAdditiveGame, rtol: float = 1e-9) -> np.ndarray:
    """Scalars ``alpha`` with ``g`` the p-sum of ``alpha[i] * u_{i}``, checked by rebuilding."""
    alpha = g.indiv.copy()
    rebuilt = zero_game(g.n)
    for i in range(g.n):
        rebuilt = p_sum(rebuilt, scale_game(unanimity_game(g.n, 1 << i), alpha[i]), g.p)
    target = g.expand().values
    err = np.abs(rebuilt.values - target)
    if np.any(err > rtol * np.maximum(1.0, np.abs(target))):
        worst = int(np.argmax(err))
        raise ArithmeticError(f"unanimity reconstruction failed at mask {worst}: error {err[worst]:.3e}")
    return alpha


def random_game(
    rng: np.random.Generator,
    n: int,
    p: float,
    zero_prob: float = 0.0,
    low: float = 0.1,
    high: float = 2.0,
) -> PAdditiveGame:
    """Random member of the class; each singleton is zero with probability ``zero_prob``."""
    indiv = rng.uniform(low, high, size=n)
    if zero_prob > 0:
        indiv[rng.random(n) < zero_prob] = 0.0
    if not np.any(indiv > 0):
        indiv[rng.integers(n)] = rng.uniform(low, high)
    return PAdditiveGame(p, indiv)
