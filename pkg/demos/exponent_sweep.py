"""
How the exponent shapes a p-additive game
=========================================

Sample random games for a range of exponents and count how often each
property holds.  The class table predicts a clean switch at p = 1 for
convexity and concavity, and a dependence on the number of positive players
once p drops below zero.
"""

import numpy as np

from coopgame import PAdditiveGame, is_concave, is_convex, is_subadditive
from coopgame.padditive import classify, random_game
from coopgame.verify import is_monotone

rng = np.random.default_rng(7)

print(f"{'p':>5} {'incr':>5} {'convex':>7} {'concave':>8} {'subadd':>7}   predicted")
for p in (-2, -1, -0.5, 0.3, 0.5, 1, 1.5, 2, 3):
    games = [random_game(rng, 5, p).expand() for _ in range(40)]
    share = lambda check: np.mean([bool(check(g)) for g in games])
    prof = classify(p)
    print(
        f"{p:>5} {share(is_monotone):>5.2f} {share(is_convex):>7.2f} "
        f"{share(is_concave):>8.2f} {share(is_subadditive):>7.2f}   "
        f"convex={prof.convex} concave={prof.concave} ({prof.interpretation.value})"
    )

# With a negative exponent, concavity depends on how many players have positive worth.
print("\np = -1, five players")
for n_plus in range(1, 6):
    indiv = np.zeros(5)
    indiv[:n_plus] = rng.uniform(0.5, 2, n_plus)
    g = PAdditiveGame(-1, indiv).expand()
    print(f"  {n_plus} positive players: concave={bool(is_concave(g))}")
