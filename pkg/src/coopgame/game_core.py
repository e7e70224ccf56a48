"""Finite TU games over bitmask-indexed coalitions.

Players are labelled 1..n at every public boundary and stored as bit
positions 0..n-1 internally, so coalition ``{1, 3}`` is the mask ``0b101``.
Characteristic functions are dense float64 arrays of length ``2**n`` indexed
by mask, iterated in increasing mask order.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

import numpy as np

MAX_PLAYERS = 20
ATOL = 1e-12

Coalition = int


class GameError(ValueError):
    """Raised when a game or coalition violates its construction contract."""


class Orientation(enum.Enum):
    COST = "cost"
    BENEFIT = "benefit"


def coalition(*labels: int) -> Coalition:
    """Mask for the 1-based player labels given, e.g. ``coalition(1, 3) == 5``."""
    mask = 0
    for label in labels:
        if label < 1:
            raise GameError(f"player labels are 1-based, got {label}")
        mask |= 1 << (label - 1)
    return mask


def labels(S: Coalition) -> tuple[int, ...]:
    return tuple(i + 1 for i in members(S))


def members(S: Coalition) -> list[int]:
    """0-based member indices of ``S`` in increasing order."""
    out = []
    i = 0
    while S:
        if S & 1:
            out.append(i)
        S >>= 1
        i += 1
    return out


def grand(n: int) -> Coalition:
    return (1 << n) - 1


def size(S: Coalition) -> int:
    return S.bit_count() if hasattr(S, "bit_count") else bin(S).count("1")


def subsets(S: Coalition) -> Iterator[Coalition]:
    """All submasks of ``S`` (including 0 and ``S``) in increasing order."""
    subs = []
    T = S
    while True:
        subs.append(T)
        if T == 0:
            break
        T = (T - 1) & S
    return reversed(subs)


def popcounts(n: int) -> np.ndarray:
    """Cardinality of every mask in ``range(2**n)``."""
    counts = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        counts[1 << i : 1 << (i + 1)] = counts[: 1 << i] + 1
    return counts


def format_coalition(S: Coalition) -> str:
    return "{" + ",".join(str(i) for i in labels(S)) + "}"


@dataclass(frozen=True, eq=False)
class TuGame:
    """A TU game on ``n`` players with ``values[S]`` the worth of mask ``S``."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n <= MAX_PLAYERS:
            raise GameError(f"player count must lie in [1, {MAX_PLAYERS}], got {self.n}")
        vals = np.array(self.values, dtype=np.float64)
        if vals.shape != (1 << self.n,):
            raise GameError(f"expected {1 << self.n} coalition values, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise GameError("coalition values must be finite")
        if vals[0] != 0.0:
            raise GameError(f"value of the empty coalition must be 0, got {vals[0]}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def grand(self) -> Coalition:
        return grand(self.n)

    def __getitem__(self, S: Coalition) -> float:
        return float(self.values[S])

    def value(self, S: Coalition) -> float:
        return float(self.values[S])

    def singletons(self) -> np.ndarray:
        return self.values[[1 << i for i in range(self.n)]].copy()

    def coalitions(self) -> range:
        return range(1 << self.n)

    def __eq__(self, other):
        if not isinstance(other, TuGame):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.n, self.values.tobytes()))

    def __repr__(self):
        return f"TuGame(n={self.n}, values={self.values.tolist()})"


def make_game(n: int, values: Sequence[float] | np.ndarray) -> TuGame:
    """Build a game from ``2**n`` values listed in increasing mask order."""
    return TuGame(n, np.asarray(values, dtype=np.float64))


def game_from_table(n: int, table: dict[Iterable[int], float]) -> TuGame:
    """Build a game from ``{labels: value}``; the empty coalition may be omitted."""
    vals = np.full(1 << n, np.nan)
    vals[0] = 0.0
    for key, v in table.items():
        S = coalition(*key)
        if S >> n:
            raise GameError(f"coalition {tuple(key)} has a label outside 1..{n}")
        vals[S] = v
    missing = np.flatnonzero(np.isnan(vals))
    if missing.size:
        raise GameError(f"no value for coalition {format_coalition(int(missing[0]))}")
    return TuGame(n, vals)


def zero_game(n: int) -> TuGame:
    return TuGame(n, np.zeros(1 << n))


def subgame(g: TuGame, S: Coalition) -> TuGame:
    """Restriction of ``g`` to subcoalitions of ``S``, re-indexed in player order."""
    if S == 0:
        raise GameError("subgame needs a nonempty coalition")
    if S >> g.n:
        raise GameError("coalition has members outside the game")
    if S == g.grand:
        return g
    idx = members(S)
    k = len(idx)
    # bit j of a sub-mask maps to bit idx[j] of the parent mask
    sub = np.zeros(1 << k, dtype=np.int64)
    for j, i in enumerate(idx):
        sub[1 << j : 1 << (j + 1)] = sub[: 1 << j] | (1 << i)
    return TuGame(k, g.values[sub])


def unanimity_game(n: int, T: Coalition) -> TuGame:
    if T == 0:
        raise GameError("unanimity game needs a nonempty carrier")
    if T >> n:
        raise GameError("carrier has members outside the game")
    masks = np.arange(1 << n)
    return TuGame(n, ((masks & T) == T).astype(np.float64))


def p_power(x: np.ndarray | float, p: float) -> np.ndarray | float:
    """``x**p`` with zero mapped to zero, the convention that keeps p<0 finite."""
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] ** p
    return out if out.ndim else float(out)


def p_root(y: np.ndarray | float, p: float) -> np.ndarray | float:
    """Inverse of :func:`p_power` on its range (zero stays zero)."""
    y = np.asarray(y, dtype=np.float64)
    out = np.zeros_like(y)
    pos = y > 0
    out[pos] = y[pos] ** (1.0 / p)
    return out if out.ndim else float(out)


def p_sum(g: TuGame, g2: TuGame, p: float) -> TuGame:
    """Coalitionwise ``(g(S)**p + g2(S)**p)**(1/p)``; zero values contribute nothing."""
    if p == 0:
        raise GameError("p must be nonzero")
    if g.n != g2.n:
        raise GameError(f"player counts differ: {g.n} vs {g2.n}")
    if np.any(g.values < 0) or np.any(g2.values < 0):
        raise GameError("p-sum is defined for nonnegative games only")
    if p == 1:
        return TuGame(g.n, g.values + g2.values)
    return TuGame(g.n, p_root(p_power(g.values, p) + p_power(g2.values, p), p))


def scale_game(g: TuGame, alpha: float) -> TuGame:
    return TuGame(g.n, alpha * g.values)


def allocation_sum(x: Sequence[float] | np.ndarray, S: Coalition) -> float:
    """``x(S)``, the total payoff to members of ``S``."""
    x = np.asarray(x, dtype=np.float64)
    return float(math.fsum(x[i] for i in members(S)))


def coalition_sums(x: Sequence[float] | np.ndarray) -> np.ndarray:
    """``x(S)`` for every mask ``S`` at once."""
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros(1 << len(x))
    for i, xi in enumerate(x):
        out[1 << i : 1 << (i + 1)] = out[: 1 << i] + xi
    return out
