"""Allocation rules on p-additive games and the axioms that pin them down.

Weighted payoffs ``w(N)**(p-1) * phi_i(w)`` appear in both the transfer and
the monotonicity axioms.  The zero game is stored with ``p = 2`` so its
weight is exactly zero.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field

import numpy as np

from .game_core import GameError, Orientation, TuGame, coalition_sums, p_power
from .padditive import PAdditiveGame, padditive_sum, random_game
from .verify import _ternary

AXIOM_RTOL = 1e-9
NULL_ATOL = 1e-12
SHAPLEY_MAX_PLAYERS = 12


def _ordered_sum(values: np.ndarray) -> float:
    # left-to-right accumulation, the order coalition_sums uses for the grand coalition
    acc = 0.0
    for v in values:
        acc += v
    return acc


def modified_soc(g: PAdditiveGame) -> np.ndarray:
    """Split ``w(N)`` in proportion to ``w({i})**p``; the zero game gets nothing."""
    kappa = g.contributions()
    total = _ordered_sum(kappa)
    if total == 0:
        return np.zeros(g.n)
    return kappa * total ** (1.0 / g.p - 1.0)


@dataclass(frozen=True, eq=False)
class Pmas:
    """Payoff vectors for every nonempty coalition.

    ``table[S, i]`` is player ``i``'s payoff in coalition ``S`` and is zero
    when ``i`` is not a member.
    """

    n: int
    table: np.ndarray

    def allocation(self, S: int) -> np.ndarray:
        """Payoffs of the members of ``S`` in increasing player order."""
        idx = [i for i in range(self.n) if S >> i & 1]
        return self.table[S, idx]


def pmas_soc(g: PAdditiveGame) -> Pmas:
    kappa = g.contributions()
    sums = coalition_sums(kappa)
    factor = np.zeros_like(sums)
    pos = sums > 0
    factor[pos] = sums[pos] ** (1.0 / g.p - 1.0)
    masks = np.arange(1 << g.n)
    member = (masks[:, None] >> np.arange(g.n)[None, :]) & 1
    table = np.where(member == 1, kappa[None, :] * factor[:, None], 0.0)
    # vectorised and scalar pow may round differently; pin the grand row to the rule
    table[g.grand] = modified_soc(g)
    return Pmas(g.n, table)


@dataclass(frozen=True)
class PmasReport:
    efficient: bool
    monotone: bool
    witness: dict | None = None

    def __bool__(self):
        return self.efficient and self.monotone


def check_pmas(g: TuGame, y: Pmas, orientation: Orientation, rtol: float = AXIOM_RTOL) -> PmasReport:
    """Coalitionwise efficiency and population monotonicity over all nested pairs."""
    if g.n > 8:
        raise GameError("pmas check is limited to 8 players")
    sums = y.table.sum(axis=1)
    err = np.abs(sums - g.values)
    err[0] = 0.0
    bad = err > rtol * np.maximum(1.0, np.abs(g.values))
    if np.any(bad):
        S = int(np.flatnonzero(bad)[0])
        return PmasReport(False, True, {"S": S, "sum": float(sums[S]), "w(S)": g[S]})
    ones, twos = _ternary(g.n)
    S, T = twos, ones | twos
    keep = (S != 0) & (S != T)
    S, T = S[keep], T[keep]
    diff = y.table[S] - y.table[T]  # nonnegative for cost games
    if orientation is Orientation.BENEFIT:
        diff = -diff
    member = (S[:, None] >> np.arange(g.n)[None, :]) & 1
    scale = np.maximum(1.0, np.abs(y.table[T]))
    viol = (member == 1) & (diff < -rtol * scale)
    if np.any(viol):
        k, i = np.argwhere(viol)[0]
        return PmasReport(
            True, False, {"S": int(S[k]), "T": int(T[k]), "player": int(i) + 1}
        )
    return PmasReport(True, True)


def shapley(g: TuGame) -> np.ndarray:
    """Exact Shapley value by summing weighted marginal contributions."""
    n = g.n
    if n > SHAPLEY_MAX_PLAYERS:
        raise GameError(f"Shapley value is limited to {SHAPLEY_MAX_PLAYERS} players, got {n}")
    w = g.values
    masks = np.arange(1 << n)
    counts = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        counts[1 << i : 1 << (i + 1)] = counts[: 1 << i] + 1
    weight = np.array(
        [math.factorial(s) * math.factorial(n - s - 1) / math.factorial(n) for s in range(n)]
    )
    phi = np.empty(n)
    for i in range(n):
        bit = 1 << i
        S = masks[(masks & bit) == 0]
        phi[i] = math.fsum(weight[counts[S]] * (w[S | bit] - w[S]))
    return phi


@dataclass(frozen=True)
class Solution:
    """A named allocation rule on p-additive games."""

    name: str
    rule: Callable[[PAdditiveGame], np.ndarray]
    violates: str | None = None
    axioms: tuple[str, ...] = ()

    def __call__(self, g: PAdditiveGame) -> np.ndarray:
        return np.asarray(self.rule(g), dtype=np.float64)


@dataclass(frozen=True)
class AxiomCheck:
    ok: bool
    witness: dict | None = field(default=None)

    def __bool__(self):
        return self.ok


def weight(g: PAdditiveGame) -> float:
    """``w(N)**(p-1)``, zero for the zero game."""
    wN = g.value(g.grand)
    return 0.0 if wN == 0 else wN ** (g.p - 1.0)


def check_efficiency(sol: Solution, g: PAdditiveGame) -> AxiomCheck:
    x = sol(g)
    wN = g.value(g.grand)
    if abs(math.fsum(x) - wN) <= AXIOM_RTOL * max(1.0, abs(wN)):
        return AxiomCheck(True)
    return AxiomCheck(False, {"game": g, "sum": math.fsum(x), "w(N)": wN})


def check_null_player(sol: Solution, g: PAdditiveGame) -> AxiomCheck:
    x = sol(g)
    for i in np.flatnonzero(g.indiv == 0):
        if abs(x[i]) > NULL_ATOL:
            return AxiomCheck(False, {"game": g, "player": int(i) + 1, "payoff": float(x[i])})
    return AxiomCheck(True)


def _same_class(g: PAdditiveGame, g2: PAdditiveGame) -> float:
    if g.n != g2.n:
        raise GameError(f"player counts differ: {g.n} vs {g2.n}")
    if g.is_zero:
        return g2.p
    if not g2.is_zero and g.p != g2.p:
        raise GameError(f"exponents differ: {g.p} vs {g2.p}")
    return g.p


def check_p_transfer(sol: Solution, g: PAdditiveGame, g2: PAdditiveGame) -> AxiomCheck:
    """Weighted payoffs of the p-sum equal the sum of the weighted payoffs."""
    _same_class(g, g2)
    both = padditive_sum(g, g2)
    lhs = weight(both) * sol(both)
    rhs1 = weight(g) * sol(g)
    rhs2 = weight(g2) * sol(g2)
    scale = np.maximum.reduce([np.ones(g.n), np.abs(lhs), np.abs(rhs1), np.abs(rhs2)])
    gap = np.abs(lhs - rhs1 - rhs2)
    bad = np.flatnonzero(gap > AXIOM_RTOL * scale)
    if bad.size:
        i = int(bad[0])
        return AxiomCheck(
            False,
            {"games": (g, g2), "player": i + 1, "weighted p-sum payoff": float(lhs[i]),
             "sum of weighted payoffs": float(rhs1[i] + rhs2[i])},
        )
    return AxiomCheck(True)


def check_p_monotonicity(sol: Solution, g: PAdditiveGame, g2: PAdditiveGame) -> AxiomCheck:
    """A larger singleton contribution never lowers the weighted payoff.

    Singleton worths are compared through ``w({i})**p`` (zero for null
    players), which orders them as the worths themselves when ``p > 0``.
    Both orderings of the pair are checked.
    """
    p = _same_class(g, g2)
    c1, c2 = p_power(g.indiv, p), p_power(g2.indiv, p)
    y1, y2 = weight(g) * sol(g), weight(g2) * sol(g2)
    for a, b, ya, yb, games in ((c1, c2, y1, y2, (g, g2)), (c2, c1, y2, y1, (g2, g))):
        scale = np.maximum.reduce([np.ones(g.n), np.abs(ya), np.abs(yb)])
        bad = np.flatnonzero((a >= b) & (ya < yb - AXIOM_RTOL * scale))
        if bad.size:
            i = int(bad[0])
            return AxiomCheck(
                False,
                {"games": games, "player": i + 1, "weighted payoffs": (float(ya[i]), float(yb[i]))},
            )
    return AxiomCheck(True)


SOC = Solution("modified SOC-rule", modified_soc, None, ("EF", "NP", "PT", "PMO"))


def _beta_scaled(beta: float):
    def rule(g):
        return beta * modified_soc(g)

    return rule


def _equal_split(g: PAdditiveGame) -> np.ndarray:
    return np.full(g.n, g.value(g.grand) / g.n)


def _shapley_rule(g: PAdditiveGame) -> np.ndarray:
    return shapley(g.expand())


def _individual_scaled(g: PAdditiveGame) -> np.ndarray:
    wN = g.value(g.grand)
    if wN == 0:
        return np.zeros(g.n)
    return g.indiv * wN ** (1.0 - g.p)


def _ratio_rule(g: PAdditiveGame) -> np.ndarray:
    if g.is_zero:
        out = np.ones(g.n)
        out[0] = 1 - g.n
        return out
    return g.contributions() / g.value(g.grand) ** (g.p - 1.0)


def _support_equal_split(g: PAdditiveGame) -> np.ndarray:
    pos = g.indiv > 0
    if not pos.any():
        return np.zeros(g.n)
    return np.where(pos, g.value(g.grand) / pos.sum(), 0.0)


def builtin_counterexamples(beta: float = 2.0) -> list[Solution]:
    """Rules showing each axiom in the two characterisations is needed.

    ``axioms`` holds the triple the rule is tested against and ``violates``
    the one it breaks.
    """
    if beta == 1:
        raise ValueError("beta = 1 reproduces the modified SOC-rule")
    pt, pmo = ("EF", "NP", "PT"), ("EF", "NP", "PMO")
    return [
        Solution(f"{beta:g}-scaled SOC-rule", _beta_scaled(beta), "EF", pt),
        Solution("equal split", _equal_split, "NP", pt),
        Solution("Shapley value", _shapley_rule, "PT", pt),
        Solution("individual worth times w(N)^(1-p)", _individual_scaled, "EF", pmo),
        Solution("ratio rule with zero-game transfers", _ratio_rule, "NP", pmo),
        Solution("equal split over positive players", _support_equal_split, "PMO", pmo),
    ]


@dataclass
class Battery:
    """Games and game pairs over which axioms are checked."""

    games: list[PAdditiveGame]
    pairs: list[tuple[PAdditiveGame, PAdditiveGame]]


def sample_battery(
    rng: np.random.Generator, p: float, pairs: int = 50, n_range: tuple[int, int] = (2, 6)
) -> Battery:
    """Random battery at exponent ``p``.

    Pairs use strictly positive singletons; the single games add null
    players and the zero game so null-player violations can surface.
    """
    lo, hi = n_range
    plist = []
    for _ in range(pairs):
        n = int(rng.integers(lo, hi + 1))
        plist.append((random_game(rng, n, p), random_game(rng, n, p)))
    games = [a for a, _ in plist]
    for _ in range(pairs):
        n = int(rng.integers(lo, hi + 1))
        games.append(random_game(rng, n, p, zero_prob=0.4))
    games.append(PAdditiveGame(2.0, np.zeros(int(rng.integers(lo, hi + 1)))))
    # pairs against the zero game and against a same-size game sharing one singleton
    extra = []
    for g, g2 in plist[: pairs // 5]:
        extra.append((g, PAdditiveGame(2.0, np.zeros(g.n))))
        shared = g2.indiv.copy()
        shared[0] = g.indiv[0]
        extra.append((g, PAdditiveGame(p, shared)))
    return Battery(games, plist + extra)


AXIOM_CHECKS = {
    "EF": check_efficiency,
    "NP": check_null_player,
    "PT": check_p_transfer,
    "PMO": check_p_monotonicity,
}


def run_axioms(sol: Solution, battery: Battery, axioms: Iterable[str] = ("EF", "NP", "PT", "PMO")) -> dict[str, AxiomCheck]:
    """First failure per axiom over the battery, or a pass."""
    out = {}
    for ax in axioms:
        check = AXIOM_CHECKS[ax]
        result = AxiomCheck(True)
        if ax in ("EF", "NP"):
            for g in battery.games:
                result = check(sol, g)
                if not result:
                    break
        else:
            for g, g2 in battery.pairs:
                result = check(sol, g, g2)
                if not result:
                    break
        out[ax] = result
    return out
