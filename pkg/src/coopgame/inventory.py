"""EPQ inventory with shortages under a one-off unit price discount.

A firm faces demand ``d``, holding cost ``h``, shortage cost ``s`` and
replenishes gradually at rate ``r > d``.  Firms ordering jointly synchronise
their cycles and store everything in the cheapest warehouse.  Instantaneous
replenishment is modelled with a large finite ``r``; ``1 - d/r`` must stay
above ``1e-12``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .game_core import Coalition, GameError, grand, members
from .padditive import PAdditiveGame

MIN_FILL = 1e-12


class InventoryError(ValueError):
    pass


@dataclass(frozen=True)
class Firm:
    d: float
    h: float
    s: float
    r: float

    def __post_init__(self):
        for name in ("d", "h", "s", "r"):
            if not math.isfinite(getattr(self, name)):
                raise InventoryError(f"{name} must be finite")
        if self.d < 0:
            raise InventoryError(f"demand must be nonnegative, got d={self.d}")
        if self.h <= 0:
            raise InventoryError(f"holding cost must be positive, got h={self.h}")
        if self.s <= 0:
            raise InventoryError(f"shortage cost must be positive, got s={self.s}")
        if self.d > 0 and not self.r > self.d:
            raise InventoryError(f"replacement rate must exceed demand, got r={self.r} <= d={self.d}")
        if self.d > 0 and 1.0 - self.d / self.r <= MIN_FILL:
            raise InventoryError("1 - d/r is numerically zero")

    @property
    def fill(self) -> float:
        """``1 - d/r``, the fraction of a cycle's production that builds stock."""
        return 1.0 - self.d / self.r if self.d > 0 else 1.0


@dataclass(frozen=True)
class InventorySituation:
    firms: tuple[Firm, ...]
    a: float
    k: float = 0.0
    P: float = 1.0
    alpha: float = 1.0
    lambdaN: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "firms", tuple(self.firms))
        if not self.firms:
            raise InventoryError("a situation needs at least one firm")
        if not (math.isfinite(self.a) and self.a > 0):
            raise InventoryError(f"ordering cost must be positive, got a={self.a}")
        if not self.k >= 0:
            raise InventoryError(f"discount must be nonnegative, got k={self.k}")
        if not (math.isfinite(self.P) and self.P > 0):
            raise InventoryError(f"regular price must be positive, got P={self.P}")
        if self.k > self.P:
            raise InventoryError(f"discount k={self.k} exceeds the regular price P={self.P}")
        if not 0 < self.alpha <= 1:
            raise InventoryError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not 0 <= self.lambdaN <= 1:
            raise InventoryError(f"lambdaN must lie in [0, 1], got {self.lambdaN}")

    @property
    def n(self) -> int:
        return len(self.firms)

    @property
    def grand(self) -> Coalition:
        return grand(self.n)

    def demands(self) -> np.ndarray:
        return np.array([f.d for f in self.firms])


@dataclass(frozen=True)
class OrderPolicy:
    """Joint order sizes and maximum shortages, indexed by member (0-based)."""

    Q: dict[int, float]
    M: dict[int, float]
    hS: float
    mS: float


def _check_a(a: float):
    if not a > 0:
        raise InventoryError(f"ordering cost must be positive, got a={a}")


def epq_optimal(f: Firm, a: float) -> tuple[float, float]:
    """Cost-minimising order size and maximum shortage without a discount."""
    _check_a(a)
    if f.d == 0:
        return 0.0, 0.0
    Q = math.sqrt(2 * a * f.d / (f.h * f.fill) * (f.h + f.s) / f.s)
    M = math.sqrt(2 * a * f.d * f.h * f.fill / (f.s * (f.h + f.s)))
    return Q, M


def orders_rate(f: Firm, a: float) -> float:
    """Optimal number of orders per unit time, ``d / Q*``."""
    Q, _ = epq_optimal(f, a)
    return f.d / Q if f.d > 0 else 0.0


def _check_order(f: Firm, Q: float, M: float | None = None):
    if M is None:
        if Q < 0:
            raise InventoryError(f"order size must be nonnegative, got Q={Q}")
        return
    if not Q > 0:
        raise InventoryError(f"order size must be positive, got Q={Q}")
    if not 0 <= M <= Q * f.fill * (1 + 1e-12):
        raise InventoryError(f"maximum shortage must lie in [0, Q(1-d/r)], got M={M}")


def cost_with_special(f: Firm, a: float, P: float, k: float, Q: float, M: float) -> float:
    """Cost over one cycle of length ``Q/d`` when that order is bought at ``P - k``."""
    if f.d == 0:
        return 0.0
    _check_order(f, Q, M)
    denom = 2 * f.d * f.fill
    holding = f.h * (Q * f.fill - M) ** 2 / denom
    shortage = f.s * M**2 / denom
    return a + holding + shortage + (P - k) * Q


def cost_without_special(f: Firm, a: float, P: float, k: float, Q: float) -> float:
    """Cost over ``Q/d`` when only the first regular order gets the discount."""
    if f.d == 0:
        raise InventoryError("cost without a special order needs positive demand")
    _check_order(f, Q)
    Qs, Ms = epq_optimal(f, a)
    per_cycle = 2 * Qs * f.fill
    holding = Q / f.d * f.h * (Qs * f.fill - Ms) ** 2 / per_cycle
    shortage = Q / f.d * f.s * Ms**2 / per_cycle
    return a * Q / Qs + holding + shortage + (P - k) * Qs + P * (Q - Qs)


def special_order(f: Firm, a: float, k: float) -> tuple[float, float]:
    """Order size and maximum shortage that maximise the one-off discount saving."""
    if f.d == 0:
        raise InventoryError("special order needs positive demand")
    if k < 0:
        raise InventoryError(f"discount must be nonnegative, got k={k}")
    Qs, _ = epq_optimal(f, a)
    Qbar = Qs + k * f.d * (f.h + f.s) / (f.h * f.fill * f.s)
    return Qbar, Qbar * f.h * f.fill / (f.h + f.s)


def saving_single(f: Firm, a: float, k: float) -> float:
    """Optimal saving ``k**2 d**2 / (4 a m**2)`` from the special order."""
    m = orders_rate(f, a)
    if m == 0:
        return 0.0
    return k**2 * f.d**2 / (4 * a * m**2)


def _coalition_terms(sit: InventorySituation, S: Coalition):
    if S == 0:
        raise InventoryError("coalition must be nonempty")
    if S >> sit.n:
        raise GameError("coalition has members outside the situation")
    idx = members(S)
    hS = min(sit.firms[j].h for j in idx)
    # h_S * sum_j d_j (1 - d_j/r_j) s_j / (h_S + s_j); equals 2 a m_S**2
    B = hS * math.fsum(
        f.d * f.fill * f.s / (hS + f.s) for f in (sit.firms[j] for j in idx) if f.d > 0
    )
    return idx, hS, B


def coalition_policy(sit: InventorySituation, S: Coalition) -> OrderPolicy:
    """Synchronised joint policy of ``S`` without a discount."""
    idx, hS, B = _coalition_terms(sit, S)
    Q, M = {}, {}
    mS = 0.0
    for j in idx:
        f = sit.firms[j]
        if f.d == 0 or B == 0:
            Q[j], M[j] = 0.0, 0.0
            continue
        Q[j] = math.sqrt(2 * sit.a * f.d**2 / B)
        M[j] = Q[j] * hS * f.fill / (hS + f.s)
        mS = f.d / Q[j]
    return OrderPolicy(Q, M, hS, mS)


def coalition_special_order(sit: InventorySituation, S: Coalition) -> OrderPolicy:
    """Joint order sizes and shortages maximising the coalition's discount saving."""
    base = coalition_policy(sit, S)
    idx, hS, B = _coalition_terms(sit, S)
    D = math.fsum(sit.firms[j].d for j in idx)
    Q, M = {}, {}
    for j in idx:
        f = sit.firms[j]
        if f.d == 0 or B == 0:
            Q[j], M[j] = 0.0, 0.0
            continue
        Q[j] = base.Q[j] + sit.k * f.d * D / B
        M[j] = Q[j] * hS * f.fill / (hS + f.s)
    return OrderPolicy(Q, M, hS, base.mS)


def coalition_saving(sit: InventorySituation, S: Coalition) -> float:
    """Maximal saving ``k**2 (sum d)**2 / (4 a m_S**2)`` of the coalition."""
    idx, _, _ = _coalition_terms(sit, S)
    mS = coalition_policy(sit, S).mS
    if mS == 0:
        return 0.0
    D = math.fsum(sit.firms[j].d for j in idx)
    return sit.k**2 * D**2 / (4 * sit.a * mS**2)


def _cycle_and_liquidity(sit: InventorySituation, R: Coalition) -> tuple[float, float, float]:
    base = coalition_policy(sit, R)
    if base.mS == 0:
        raise InventoryError("coalition has zero total demand")
    special = coalition_special_order(sit, R)
    j = next(i for i in members(R) if sit.firms[i].d > 0)
    # time to the next order after the discounted one, and the order-size ratio
    wait = special.Q[j] / sit.firms[j].d
    liquidity = math.fsum(special.Q.values()) / math.fsum(base.Q.values())
    return base.mS, wait, liquidity


def indices(sit: InventorySituation, S: Coalition, T: Coalition) -> tuple[float, float, float]:
    """Order, waiting and liquidity indices between ``S`` and ``T``."""
    mS, tS, lS = _cycle_and_liquidity(sit, S)
    mT, tT, lT = _cycle_and_liquidity(sit, T)
    return mS / mT, tS / tT, lS / lT


def lambda_of(sit: InventorySituation, S: Coalition) -> float:
    """Discount probability of ``S`` under the non-discriminatory design."""
    if S == 0:
        raise InventoryError("coalition must be nonempty")
    if S == sit.grand:
        return sit.lambdaN
    mN = coalition_policy(sit, sit.grand).mS
    if mN == 0:
        raise InventoryError("grand coalition has zero total demand")
    mS = coalition_policy(sit, S).mS
    lam = sit.lambdaN * sit.alpha * mS**2 / mN**2
    if lam > 1:
        raise InventoryError(f"lambda({S:#b}) = {lam} exceeds 1; situation parameters are inconsistent")
    return lam


def discount_constant(sit: InventorySituation) -> float:
    """``lambda(N) alpha k**2 / (4 a m_N**2)``."""
    mN = coalition_policy(sit, sit.grand).mS
    if mN == 0:
        raise InventoryError("grand coalition has zero total demand")
    return sit.lambdaN * sit.alpha * sit.k**2 / (4 * sit.a * mN**2)


def build_id_game(sit: InventorySituation) -> PAdditiveGame:
    """Benefit game ``v(S) = K (sum_{j in S} d_j)**2`` as a 1/2-additive game."""
    K = discount_constant(sit)
    return PAdditiveGame(0.5, K * sit.demands() ** 2)


def build_inventory_cost_game(a: float, m) -> PAdditiveGame:
    """Cost game ``c(S) = 2a sqrt(sum m_i**2)`` as a 2-additive game."""
    _check_a(a)
    m = np.asarray(m, dtype=np.float64)
    if np.any(m < 0):
        raise InventoryError("order rates must be nonnegative")
    return PAdditiveGame(2.0, 2 * a * m)


def random_situation(
    rng: np.random.Generator,
    n: int,
    equal_h: bool = False,
    k: float | None = None,
    alpha: float | None = None,
) -> InventorySituation:
    """Random valid situation; ``equal_h`` gives every firm the same holding cost."""
    d = rng.uniform(0.5, 20.0, n)
    h = np.full(n, rng.uniform(0.5, 3.0)) if equal_h else rng.uniform(0.5, 3.0, n)
    firms = tuple(
        Firm(float(d[i]), float(h[i]), float(rng.uniform(0.5, 5.0)), float(d[i] * rng.uniform(1.2, 5.0)))
        for i in range(n)
    )
    P = float(rng.uniform(5.0, 50.0))
    return InventorySituation(
        firms,
        a=float(rng.uniform(1.0, 100.0)),
        k=float(rng.uniform(0.1, 0.5) * P) if k is None else k,
        P=P,
        alpha=float(rng.uniform(0.1, 1.0)) if alpha is None else alpha,
        lambdaN=float(rng.uniform(0.1, 1.0)),
    )
