"""Exhaustive property checks and core computations for small TU games.

Every check scans all the coalitions it quantifies over; nothing here relies
on the structure of p-additive games, so the results can be used to test
claims about that class.  Coalition pairs are enumerated in base 3: each
player is outside both sets, in one only, or in both.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .game_core import (
    ATOL,
    Coalition,
    GameError,
    Orientation,
    TuGame,
    coalition_sums,
    format_coalition,
    members,
    subgame,
)
from .padditive import PAdditiveGame
from .simplex import linprog

CORE_TOL = 1e-9


@dataclass(frozen=True)
class PropertyReport:
    name: str
    verdict: bool
    witness: dict | None = field(default=None)

    def __bool__(self):
        return self.verdict

    def describe(self) -> str:
        if self.verdict:
            return f"{self.name}: yes"
        parts = []
        for k, v in (self.witness or {}).items():
            if k in ("S", "T", "R", "subgame") and isinstance(v, int):
                v = format_coalition(v)
            parts.append(f"{k}={v}")
        return f"{self.name}: no ({', '.join(parts)})"


def _cap(g: TuGame, limit: int, what: str):
    if g.n > limit:
        raise GameError(f"{what} is limited to {limit} players, got {g.n}")


@lru_cache(maxsize=32)
def _ternary(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Masks ``(ones, twos)`` over all base-3 words of length ``n``."""
    ones = np.zeros(1, dtype=np.int64)
    twos = np.zeros(1, dtype=np.int64)
    for i in range(n):
        bit = 1 << i
        ones = np.concatenate([ones, ones | bit, ones])
        twos = np.concatenate([twos, twos, twos | bit])
    ones.setflags(write=False)
    twos.setflags(write=False)
    return ones, twos


def _first(bad: np.ndarray, *arrays: np.ndarray) -> tuple | None:
    hits = np.flatnonzero(bad)
    if not hits.size:
        return None
    # lexicographic on the mask arrays given
    order = np.lexsort(tuple(a[hits] for a in reversed(arrays)))
    k = hits[order[0]]
    return tuple(int(a[k]) for a in arrays)


def is_monotone(
    g: TuGame, direction: str = "increasing", strict: bool = False, tol: float = ATOL
) -> PropertyReport:
    """Monotonicity over nonempty ``S`` and one-player extensions ``S + i``.

    By transitivity this covers every pair of nested nonempty coalitions.
    """
    _cap(g, 16, "monotonicity check")
    if direction not in ("increasing", "decreasing"):
        raise ValueError(f"direction must be 'increasing' or 'decreasing', got {direction!r}")
    w = g.values
    masks = np.arange(1 << g.n)
    name = ("strictly " if strict else "") + f"monotone {direction}"
    hits = []
    for i in range(g.n):
        bit = 1 << i
        S = masks[((masks & bit) == 0) & (masks != 0)]
        T = S | bit
        diff = w[T] - w[S] if direction == "increasing" else w[S] - w[T]
        bad = diff <= tol if strict else diff < -tol
        hit = _first(bad, S, T)
        if hit:
            hits.append(hit)
    if not hits:
        return PropertyReport(name, True)
    S, T = min(hits)
    return PropertyReport(name, False, {"S": S, "T": T, "w(S)": g[S], "w(T)": g[T]})


def _additivity(g: TuGame, sub: bool, tol: float) -> PropertyReport:
    _cap(g, 14, "additivity check")
    S, T = _ternary(g.n)
    keep = (S != 0) & (T != 0) & (S < T)
    S, T = S[keep], T[keep]
    w = g.values
    gap = w[S] + w[T] - w[S | T]
    bad = gap < -tol if sub else gap > tol
    name = "subadditive" if sub else "superadditive"
    hit = _first(bad, S, T)
    if hit is None:
        return PropertyReport(name, True)
    s, t = hit
    return PropertyReport(name, False, {"S": s, "T": t, "w(S)+w(T)": g[s] + g[t], "w(S|T)": g[s | t]})


def is_subadditive(g: TuGame, tol: float = ATOL) -> PropertyReport:
    return _additivity(g, True, tol)


def is_superadditive(g: TuGame, tol: float = ATOL) -> PropertyReport:
    return _additivity(g, False, tol)


def _marginals(g: TuGame, concave: bool, tol: float) -> PropertyReport:
    _cap(g, 14, "convexity check")
    name = "concave" if concave else "convex"
    w = g.values
    if g.n == 1:
        return PropertyReport(name, True)
    inner, outer = _ternary(g.n - 1)
    # twos are in both S and T, ones only in T
    S_rest, T_rest = outer, inner | outer
    for i in range(g.n):
        bit = 1 << i
        low = bit - 1

        def lift(m):
            return (m & low) | ((m >> i) << (i + 1))

        S, T = lift(S_rest), lift(T_rest)
        lhs = w[S | bit] - w[S]
        rhs = w[T | bit] - w[T]
        bad = lhs < rhs - tol if concave else lhs > rhs + tol
        hit = _first(bad, S, T)
        if hit is not None:
            s, t = hit
            return PropertyReport(
                name,
                False,
                {
                    "player": i + 1,
                    "S": s,
                    "T": t,
                    "marginal at S": g[s | bit] - g[s],
                    "marginal at T": g[t | bit] - g[t],
                },
            )
    return PropertyReport(name, True)


def is_concave(g: TuGame, tol: float = ATOL) -> PropertyReport:
    return _marginals(g, True, tol)


def is_convex(g: TuGame, tol: float = ATOL) -> PropertyReport:
    return _marginals(g, False, tol)


def _order_violations(w: np.ndarray, perms: np.ndarray, n: int, tol: float) -> np.ndarray:
    """Boolean ``(orders, positions, R)`` array marking failed inequalities."""
    prefix = np.zeros((perms.shape[0], n + 1), dtype=np.int64)
    for k in range(n):
        prefix[:, k + 1] = prefix[:, k] | (1 << perms[:, k])
    R = np.arange(1 << n)
    base = w[prefix]
    D = w[prefix[:, :, None] | R[None, None, :]] - base[:, :, None]
    # the smallest marginal over all earlier prefixes (position 0 is the empty prefix)
    earlier = np.minimum.accumulate(D, axis=1)
    disjoint = (prefix[:, :, None] & R[None, None, :]) == 0
    return disjoint & (earlier < D - tol)


def is_permutationally_concave(
    g: TuGame, orientation: Orientation = Orientation.COST, tol: float = ATOL
) -> PropertyReport:
    """Search every player order for one satisfying the prefix-marginal condition.

    For an order with inclusive prefixes ``P_0 = {}, P_1, ..., P_n`` the game
    must satisfy ``c(P_i + R) - c(P_i) >= c(P_j + R) - c(P_j)`` whenever
    ``i <= j`` and ``R`` avoids ``P_j``.  Benefit games are tested through
    their negation.
    """
    _cap(g, 7, "permutational concavity check")
    name = "permutationally concave"
    w = g.values if orientation is Orientation.COST else -g.values
    n = g.n
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    bad = _order_violations(w, perms, n, tol)
    ok = ~bad.reshape(bad.shape[0], -1).any(axis=1)
    if ok.any():
        order = perms[int(np.flatnonzero(ok)[0])]
        return PropertyReport(name, True, {"order": [int(i) + 1 for i in order]})
    # every order fails; report the violation for the identity order
    pos_j, R = np.argwhere(bad[0])[0]
    prefix = [0]
    for k in range(n):
        prefix.append(prefix[-1] | (1 << k))
    marg = [float(w[P | int(R)] - w[P]) for P in prefix[: pos_j + 1]]
    pos_i = int(np.argmin(marg))
    return PropertyReport(
        name,
        False,
        {
            "order": list(range(1, n + 1)),
            "i": pos_i,
            "j": int(pos_j),
            "R": int(R),
            "marginal at P_i": marg[pos_i],
            "marginal at P_j": float(w[prefix[pos_j] | int(R)] - w[prefix[pos_j]]),
        },
    )


class CoreMembership(NamedTuple):
    ok: bool
    violator: Coalition | None


def core_contains(
    g: TuGame, x, orientation: Orientation, tol: float = CORE_TOL
) -> CoreMembership:
    """Efficiency plus the coalition constraints in the direction ``orientation`` sets."""
    _cap(g, 20, "core membership")
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (g.n,):
        raise GameError(f"allocation must have {g.n} entries")
    if abs(x.sum() - g[g.grand]) > tol:
        return CoreMembership(False, g.grand)
    xs = coalition_sums(x)
    if orientation is Orientation.COST:
        bad = xs > g.values + tol
    else:
        bad = xs < g.values - tol
    bad[0] = False
    bad[g.grand] = False
    hits = np.flatnonzero(bad)
    if hits.size:
        return CoreMembership(False, int(hits[0]))
    return CoreMembership(True, None)


def _core_system(g: TuGame, orientation: Orientation):
    n = g.n
    masks = np.arange(1, (1 << n) - 1)
    A = ((masks[:, None] >> np.arange(n)[None, :]) & 1).astype(np.float64)
    b = g.values[masks]
    if orientation is Orientation.BENEFIT:
        A, b = -A, -b
    return A, b, np.ones((1, n)), np.array([g[g.grand]])


class CoreCheck(NamedTuple):
    nonempty: bool
    certificate: np.ndarray | None


def core_nonempty(g: TuGame, orientation: Orientation) -> CoreCheck:
    """Linear feasibility of the core; returns a core point when there is one."""
    _cap(g, 10, "core computation")
    if g.n == 1:
        return CoreCheck(True, np.array([g[1]]))
    A, b, Ae, be = _core_system(g, orientation)
    res = linprog(np.zeros(g.n), A, b, Ae, be)
    if res.status != "optimal":
        return CoreCheck(False, None)
    return CoreCheck(True, res.x)


@dataclass(frozen=True)
class CoreBounds:
    lo: np.ndarray
    hi: np.ndarray

    def interval(self, player: int) -> tuple[float, float]:
        """Bounds for the 1-based ``player``."""
        return float(self.lo[player - 1]), float(self.hi[player - 1])


def core_bounds(g: TuGame, orientation: Orientation) -> CoreBounds:
    """Smallest and largest payoff each player gets over the core."""
    _cap(g, 10, "core computation")
    if g.n == 1:
        v = np.array([g[1]])
        return CoreBounds(v, v.copy())
    A, b, Ae, be = _core_system(g, orientation)
    lo, hi = np.empty(g.n), np.empty(g.n)
    for i in range(g.n):
        c = np.zeros(g.n)
        c[i] = 1.0
        low = linprog(c, A, b, Ae, be)
        if low.status == "infeasible":
            raise GameError("core is empty")
        high = linprog(-c, A, b, Ae, be)
        if low.status != "optimal" or high.status != "optimal":
            raise ArithmeticError("core LP is unbounded")
        lo[i], hi[i] = low.fun, -high.fun
    return CoreBounds(lo, hi)


def is_totally_balanced(g: TuGame, orientation: Orientation) -> PropertyReport:
    """Core nonemptiness of every subgame, smallest coalitions first."""
    _cap(g, 8, "total balancedness check")
    for S in range(1, 1 << g.n):
        if not core_nonempty(subgame(g, S), orientation).nonempty:
            return PropertyReport("totally balanced", False, {"subgame": S})
    return PropertyReport("totally balanced", True)


def single_payer_core_certificate(g: PAdditiveGame) -> np.ndarray:
    """Core point charging ``w(N)`` to the first player with positive worth (p < 0)."""
    if g.p >= 0 and not g.is_zero:
        raise GameError("single-payer certificate applies to negative exponents")
    x = np.zeros(g.n)
    if g.is_zero:
        return x
    payer = members(g.support(g.grand))[0]
    x[payer] = g.value(g.grand)
    check = core_contains(g.expand(), x, Orientation.COST)
    if not check.ok:
        raise ArithmeticError(f"single-payer allocation leaves the core at {format_coalition(check.violator)}")
    return x
