"""
Sharing a one-off price discount
================================

Three retailers replenish the same item gradually and allow backorders.  The
supplier announces a temporary price cut; ordering together lets them place
one large special order and split the saving.
"""

import numpy as np

from coopgame import (
    Firm,
    InventorySituation,
    build_id_game,
    coalition_policy,
    coalition_saving,
    lambda_of,
    modified_soc,
    pmas_soc,
    saving_single,
    special_order,
)
from coopgame.game_core import labels
from coopgame.inventory import epq_optimal
from coopgame.verify import core_contains, Orientation

firms = (
    Firm(d=100, h=2, s=8, r=400),
    Firm(d=150, h=2, s=5, r=600),
    Firm(d=80, h=2, s=12, r=250),
)
sit = InventorySituation(firms, a=40, k=0.5, P=10, alpha=0.8, lambdaN=0.9)

# Alone, each firm would order its EPQ lot and enlarge one order when the discount hits.
for i, f in enumerate(firms, start=1):
    Q, M = epq_optimal(f, sit.a)
    Qb, Mb = special_order(f, sit.a, sit.k)
    print(f"firm {i}: Q*={Q:7.2f} M*={M:6.2f}  special Q={Qb:8.2f} M={Mb:7.2f}  saving={saving_single(f, sit.a, sit.k):7.2f}")

# Coalitions synchronise their cycles and hold stock at the cheapest rate.
print()
for S in range(1, 1 << sit.n):
    pol = coalition_policy(sit, S)
    print(f"{str(labels(S)):>10} orders/time={pol.mS:6.3f} saving={coalition_saving(sit, S):8.2f} "
          f"lambda={lambda_of(sit, S):.3f}")

# Expected savings form a 1/2-additive benefit game: v(S) = K (sum of demands)^2.
g = build_id_game(sit)
x = modified_soc(g)
print("\nexpected benefit of N:", round(g.value(g.grand), 4))
print("modified SOC split:", np.round(x, 4))
print("in the core:", core_contains(g.expand(), x, Orientation.BENEFIT).ok)

# Each firm's share only grows as more firms join.
y = pmas_soc(g)
print("firm 1 share as the coalition grows:", [round(float(y.table[S, 0]), 4) for S in (0b001, 0b011, 0b111)])
