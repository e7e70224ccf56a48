"""
Two 3-player games with a negative exponent
===========================================

Both games below belong to the p = -1 class.  We check membership, look at
which textbook properties survive, compute the core and walk through the
population monotonic allocation scheme that reaches the modified SOC-rule.
"""

from fractions import Fraction

import numpy as np

import coopgame as cg
from coopgame.verify import is_monotone


def frac(x):
    return str(Fraction(x).limit_denominator(1000))


# The first game: every player has positive stand-alone worth.
w1 = cg.game_from_table(3, {(1,): 1, (2,): 1 / 2, (3,): 1 / 3, (1, 2): 1 / 3,
                            (1, 3): 1 / 4, (2, 3): 1 / 5, (1, 2, 3): 1 / 6})
print("member of the p=-1 class:", cg.validate_membership(w1, -1).ok)

# Joining a coalition always lowers its cost here, yet the game is not concave.
for check in (lambda g: is_monotone(g, "decreasing", strict=True), cg.is_subadditive,
              cg.is_concave, lambda g: cg.is_permutationally_concave(g, cg.Orientation.COST)):
    print(" ", check(w1).describe())

# The core is a triangle; the bounds below are its projections on each axis.
b = cg.core_bounds(w1, cg.Orientation.COST)
for i in (1, 2, 3):
    lo, hi = b.interval(i)
    print(f"  x{i} in [{frac(lo)}, {frac(hi)}]")

g1 = cg.PAdditiveGame(-1, w1.singletons())
print("modified SOC-rule:", [frac(v) for v in cg.modified_soc(g1)])

y = cg.pmas_soc(g1)
for S in range(1, 8):
    print(f"  y^{cg.labels(S)} = {[frac(v) for v in y.allocation(S)]}")

# The second game has a null player, which makes it concave.
w2 = cg.game_from_table(3, {(1,): 1, (2,): 0, (3,): 1 / 2, (1, 2): 1,
                            (1, 3): 1 / 3, (2, 3): 1 / 2, (1, 2, 3): 1 / 3})
g2 = cg.PAdditiveGame(-1, w2.singletons())
print("\nsecond game concave:", bool(cg.is_concave(w2)))
print("monotone?", is_monotone(w2, "decreasing").describe())
print("modified SOC-rule:", [frac(v) for v in cg.modified_soc(g2)])
print("one-payer core point:", cg.single_payer_core_certificate(g2))

b2 = cg.core_bounds(w2, cg.Orientation.COST)
print("core intervals:", [tuple(frac(v) for v in b2.interval(i)) for i in (1, 2, 3)])
assert np.allclose(b2.interval(2), (0, 0))
