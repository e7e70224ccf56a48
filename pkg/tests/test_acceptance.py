"""Acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL`` line with the measured
runtime and a short summary.  Run on its own with

    pytest tests/test_acceptance.py -v -s

or as a script: ``python tests/test_acceptance.py``.
"""

import math
import time
import warnings

import numpy as np
import pytest

from coopgame.game_core import Orientation, coalition, game_from_table, members
from coopgame.inventory import (
    Firm,
    build_id_game,
    build_inventory_cost_game,
    coalition_policy,
    cost_with_special,
    cost_without_special,
    indices,
    random_situation,
    saving_single,
    special_order,
)
from coopgame.padditive import PAdditiveGame, orientations, random_game, validate_membership
from coopgame.solutions import (
    SOC,
    builtin_counterexamples,
    check_p_transfer,
    check_pmas,
    modified_soc,
    pmas_soc,
    run_axioms,
    sample_battery,
)
from coopgame.verify import (
    core_bounds,
    core_contains,
    is_concave,
    is_convex,
    is_monotone,
    is_permutationally_concave,
    is_subadditive,
    is_totally_balanced,
)

COST = Orientation.COST
SEED = 20240601

STRICT = {(1,): 1, (2,): 1 / 2, (3,): 1 / 3, (1, 2): 1 / 3, (1, 3): 1 / 4, (2, 3): 1 / 5, (1, 2, 3): 1 / 6}
STRICT_PMAS = {
    (1,): [1], (2,): [1 / 2], (3,): [1 / 3],
    (1, 2): [1 / 9, 2 / 9], (1, 3): [1 / 16, 3 / 16], (2, 3): [2 / 25, 3 / 25],
    (1, 2, 3): [1 / 36, 2 / 36, 3 / 36],
}
WITH_NULL = {(1,): 1, (2,): 0, (3,): 1 / 2, (1, 2): 1, (1, 3): 1 / 3, (2, 3): 1 / 2, (1, 2, 3): 1 / 3}
WITH_NULL_PMAS = {
    (1,): [1], (2,): [0], (3,): [1 / 2],
    (1, 2): [1, 0], (1, 3): [1 / 9, 2 / 9], (2, 3): [0, 1 / 2],
    (1, 2, 3): [1 / 9, 0, 2 / 9],
}


class Tally:
    """Collects named failures for one criterion."""

    def __init__(self):
        self.failures = []
        self.notes = []

    def expect(self, ok, what):
        if not ok:
            self.failures.append(what)
        return ok

    def close(self, a, b, atol=0.0, rtol=0.0, what=""):
        a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
        ok = a.shape == b.shape and bool(np.all(np.abs(a - b) <= atol + rtol * np.abs(b)))
        return self.expect(ok, f"{what}: {a.tolist()} vs {b.tolist()}")


def _report(number, title, tally, elapsed, limit):
    tally.expect(elapsed < limit, f"runtime {elapsed:.2f}s exceeds {limit}s")
    status = "PASS" if not tally.failures else "FAIL"
    detail = "; ".join(tally.failures[:3]) if tally.failures else "; ".join(tally.notes)
    line = f"criterion {number}: {status} ({elapsed:.2f}s / {limit}s) {title}"
    if detail:
        line += f" | {detail}"
    print(line, flush=True)
    return not tally.failures


@pytest.fixture
def show(capsys):
    """Let the per-criterion line through pytest's capture."""

    def emit(*args):
        with capsys.disabled():
            return _report(*args)

    return emit


def _pmas_matches(tally, g, table, what):
    y = pmas_soc(g)
    for key, expected in table.items():
        tally.close(y.allocation(coalition(*key)), expected, atol=1e-12, what=f"{what} pmas at {key}")


def criterion_1():
    t = Tally()
    start = time.perf_counter()
    w = game_from_table(3, STRICT)
    t.expect(validate_membership(w, -1).ok, "membership at p=-1")
    g = PAdditiveGame(-1, w.singletons())
    t.close(modified_soc(g), [1 / 36, 2 / 36, 3 / 36], atol=1e-12, what="modified SOC")
    _pmas_matches(t, g, STRICT_PMAS, "strict_game")
    b = core_bounds(w, COST)
    t.close(b.lo, [-1 / 30, -1 / 12, -1 / 6], atol=1e-9, what="core lower bounds")
    t.close(b.hi, [5 / 12, 11 / 30, 17 / 60], atol=1e-9, what="core upper bounds")
    t.expect(bool(is_monotone(w, "decreasing", strict=True)), "strictly decreasing")
    t.expect(bool(is_subadditive(w)), "subadditive")
    t.expect(not is_concave(w), "not concave")
    t.expect(not is_permutationally_concave(w, COST), "not permutationally concave")
    t.expect(bool(is_totally_balanced(w, COST)), "totally balanced")
    return t, time.perf_counter() - start


def criterion_2():
    t = Tally()
    start = time.perf_counter()
    w = game_from_table(3, WITH_NULL)
    t.expect(validate_membership(w, -1).ok, "membership at p=-1")
    g = PAdditiveGame(-1, w.singletons())
    t.close(modified_soc(g), [1 / 9, 0, 2 / 9], atol=1e-12, what="modified SOC")
    _pmas_matches(t, g, WITH_NULL_PMAS, "null_game")
    b = core_bounds(w, COST)
    t.close([b.lo[1], b.hi[1]], [0, 0], atol=1e-9, what="x2 interval")
    t.close(b.interval(1), [-1 / 6, 1], atol=1e-9, what="x1 interval")
    t.close(b.interval(3), [-2 / 3, 1 / 2], atol=1e-9, what="x3 interval")
    t.expect(bool(is_concave(w)), "concave")
    t.expect(not is_monotone(w, "increasing") and not is_monotone(w, "decreasing"), "not monotone")
    t.expect(bool(is_subadditive(w)), "subadditive")
    return t, time.perf_counter() - start


def criterion_3():
    t = Tally()
    rng = np.random.default_rng(SEED + 3)
    start = time.perf_counter()
    total = 0
    for p in (0.3, 0.5, 1.0, 1.5, 2.0, 3.0):
        for _ in range(100):
            g = random_game(rng, int(rng.integers(3, 9)), p).expand()
            total += 1
            t.expect(bool(is_monotone(g, "increasing")), f"p={p} not monotone increasing")
            t.expect(bool(is_convex(g)) == (p <= 1), f"p={p} convexity verdict")
            t.expect(bool(is_concave(g)) == (p >= 1), f"p={p} concavity verdict")
    t.notes.append(f"{total} games, all verdicts as predicted")
    return t, time.perf_counter() - start


def criterion_4():
    t = Tally()
    rng = np.random.default_rng(SEED + 4)
    start = time.perf_counter()
    counts = {"all positive": 0, "some null": 0, "|N+|<=2": 0}
    for p in (-2.0, -1.0, -0.5):
        for _ in range(100):
            pg = random_game(rng, int(rng.integers(2, 7)), p, zero_prob=0.3)
            g = pg.expand()
            n_plus = int(np.count_nonzero(pg.indiv > 0))
            all_pos = n_plus == pg.n
            counts["all positive" if all_pos else "some null"] += 1
            counts["|N+|<=2"] += n_plus <= 2
            t.expect(bool(is_monotone(g, "decreasing", strict=True)) == all_pos, f"p={p} strict decrease {pg}")
            concave = bool(is_concave(g))
            t.expect(concave == (n_plus <= 2), f"p={p} concavity {pg}")
            t.expect(bool(is_permutationally_concave(g, COST)) == concave, f"p={p} permutational concavity {pg}")
            t.expect(bool(is_subadditive(g)), f"p={p} subadditivity {pg}")
            t.expect(bool(is_totally_balanced(g, COST)), f"p={p} total balancedness {pg}")
    t.notes.append(", ".join(f"{k}: {v}" for k, v in counts.items()))
    return t, time.perf_counter() - start


def _random_firm(rng):
    d = rng.uniform(0.5, 100)
    return Firm(d, rng.uniform(0.2, 5), rng.uniform(0.2, 10), d * rng.uniform(1.05, 8))


def criterion_5():
    t = Tally()
    rng = np.random.default_rng(SEED + 5)
    start = time.perf_counter()
    worst_grid = -np.inf
    for _ in range(50):
        f = _random_firm(rng)
        a, P = rng.uniform(1, 200), rng.uniform(2, 100)
        k = P * rng.uniform(0.01, 0.6)
        Qb, Mb = special_order(f, a, k)
        best = cost_without_special(f, a, P, k, Qb) - cost_with_special(f, a, P, k, Qb, Mb)
        s = saving_single(f, a, k)
        t.close(s, best, rtol=1e-6, what="saving against cost difference")
        for P2 in (P * 0.5, P * 3.0, P + 17.0):
            alt = cost_without_special(f, a, P2, k, Qb) - cost_with_special(f, a, P2, k, Qb, Mb)
            t.close(alt, best, rtol=1e-10, what="saving as the price varies")
        t.expect(saving_single(f, a, 0.0) == 0.0, "zero discount saving")
        # 200 x 200 alternatives around the optimum, shortages kept feasible
        Qs = np.linspace(0.3 * Qb, 2.0 * Qb, 200)
        frac = np.linspace(0.0, 1.0, 200)
        Q, F = np.meshgrid(Qs, frac, indexing="ij")
        M = F * Q * f.fill
        denom = 2 * f.d * f.fill
        tc_d = a + (f.h * (Q * f.fill - M) ** 2 + f.s * M**2) / denom + (P - k) * Q
        tc_n = np.vectorize(lambda q: cost_without_special(f, a, P, k, q))(Qs)[:, None]
        grid = tc_n - tc_d
        worst_grid = max(worst_grid, float((grid.max() - best) / abs(best)))
        t.expect(grid.max() <= best * (1 + 1e-12), f"grid point beats the special order by {grid.max() - best:.3e}")
    t.notes.append(f"best grid point relative to optimum: {worst_grid:+.2e}")
    return t, time.perf_counter() - start


def criterion_6():
    t = Tally()
    rng = np.random.default_rng(SEED + 6)
    start = time.perf_counter()
    worst = 0.0
    checked = 0
    for _ in range(50):
        n = int(rng.integers(2, 7))
        sit = random_situation(rng, n, equal_h=True)
        mN = coalition_policy(sit, sit.grand).mS
        for S in range(1, sit.grand):
            Im, It, Il = indices(sit, S, sit.grand)
            mS = coalition_policy(sit, S).mS
            lhs, rhs = Im * Il / It, mS**2 / mN**2
            worst = max(worst, abs(lhs - rhs) / rhs)
            checked += 1
            t.close(lhs, rhs, rtol=1e-9, what=f"index identity at {members(S)}")
        t.expect(validate_membership(build_id_game(sit).expand(), 0.5).ok, "id game membership at p=1/2")
    t.notes.append(f"{checked} coalitions, worst relative gap {worst:.1e}")
    return t, time.perf_counter() - start


def criterion_7():
    t = Tally()
    rng = np.random.default_rng(SEED + 7)
    start = time.perf_counter()
    pmas_checked = 0
    for p in (-1.0, 0.5, 1.0, 2.0):
        for _ in range(100):
            n = int(rng.integers(1, 11))
            pg = random_game(rng, n, p, zero_prob=0.2)
            g = pg.expand()
            x = modified_soc(pg)
            for o in orientations(p):
                res = core_contains(g, x, o)
                t.expect(res.ok, f"p={p} SOC outside the {o.value} core at {res.violator}")
            if n <= 8:
                pmas_checked += 1
                t.expect(bool(check_pmas(g, pmas_soc(pg), orientations(p)[0])), f"p={p} pmas check {pg}")
    t.notes.append(f"400 games in the core, {pmas_checked} pmas tables checked exhaustively")
    return t, time.perf_counter() - start


def criterion_8():
    t = Tally()
    start = time.perf_counter()
    batteries = {p: sample_battery(np.random.default_rng(SEED + 8), p, pairs=50) for p in (-1.0, 0.5, 2.0)}
    for p, battery in batteries.items():
        res = run_axioms(SOC, battery)
        for ax, chk in res.items():
            t.expect(chk.ok, f"modified SOC fails {ax} at p={p}: {chk.witness}")
    # independence of each triple on the p = 2 battery
    witnesses = []
    for sol in builtin_counterexamples():
        res = run_axioms(sol, batteries[2.0], sol.axioms)
        if t.expect(not res[sol.violates].ok, f"{sol.name} satisfies {sol.violates}"):
            witnesses.append(f"{sol.name} breaks {sol.violates}")
            t.expect(res[sol.violates].witness is not None, f"{sol.name} witness missing")
        for ax in sol.axioms:
            if ax != sol.violates:
                t.expect(res[ax].ok, f"{sol.name} fails {ax}: {res[ax].witness}")
    # at the other exponents two deviations are forced by the algebra: the
    # Shapley value equals the modified SOC-rule at p = 1/2, and w({i}) w(N)^(1-p)
    # has weighted payoff w({i}), which orders opposite to w({i})^p when p < 0
    forced = {(0.5, "Shapley value", "PT"), (-1.0, "individual worth times w(N)^(1-p)", "PMO")}
    seen = set()
    for p in (-1.0, 0.5):
        for sol in builtin_counterexamples():
            res = run_axioms(sol, batteries[p], sol.axioms)
            for ax in sol.axioms:
                if res[ax].ok != (ax != sol.violates):
                    seen.add((p, sol.name, ax))
    t.expect(seen <= forced, f"unexpected deviations {sorted(seen - forced)}")
    for p, name, ax in sorted(seen):
        t.notes.append(f"at p={p:g} {name} {'passes' if ax == 'PT' else 'fails'} {ax}")
    # the Shapley value must be caught on PT within the first 20 sampled pairs
    shap = builtin_counterexamples()[2]
    pairs = sample_battery(np.random.default_rng(SEED + 88), 2.0, pairs=20).pairs[:20]
    found = next((k for k, (g, h) in enumerate(pairs) if not check_p_transfer(shap, g, h)), None)
    t.expect(found is not None, "no Shapley PT violation in 20 pairs")
    t.notes.append(f"six triples independent at p=2; Shapley PT violation at pair {found}")
    return t, time.perf_counter() - start


def criterion_9():
    t = Tally()
    rng = np.random.default_rng(SEED + 9)
    start = time.perf_counter()
    for _ in range(50):
        n = int(rng.integers(1, 11))
        a = rng.uniform(0.5, 100)
        m = rng.uniform(0.1, 10, n)
        g = build_inventory_cost_game(a, m)
        c = g.expand()
        single = np.array([c[1 << i] for i in range(n)])
        expected = single**2 / math.fsum(single**2) * c[c.grand]
        t.close(modified_soc(g), expected, rtol=1e-9, what="SOC on an inventory cost game")
    return t, time.perf_counter() - start


CRITERIA = [
    (1, "p=-1 example, all players positive", criterion_1, 1.0),
    (2, "p=-1 example with a null player", criterion_2, 1.0),
    (3, "positive-exponent class battery", criterion_3, 30.0),
    (4, "negative-exponent battery", criterion_4, 120.0),
    (5, "single-firm optimality", criterion_5, 10.0),
    (6, "discount-ratio identity", criterion_6, 10.0),
    (7, "core and pmas battery", criterion_7, 60.0),
    (8, "axiom characterisations", criterion_8, 60.0),
    (9, "SOC on inventory cost games", criterion_9, 5.0),
]


@pytest.mark.parametrize("number,title,func,limit", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, func, limit, show):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        tally, elapsed = func()
    assert show(number, title, tally, elapsed, limit), tally.failures[:5]


if __name__ == "__main__":
    results = []
    for number, title, func, limit in CRITERIA:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            tally, elapsed = func()
        results.append(_report(number, title, tally, elapsed, limit))
    raise SystemExit(0 if all(results) else 1)
