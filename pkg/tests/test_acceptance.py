"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line; ``conftest.py`` prints them in the
terminal summary.  Run alone with ``pytest tests/test_acceptance.py``.
"""

import itertools
import math
import random
import time
from contextlib import contextmanager

import pytest

from omdist.cluster_tree import (
    instantiate,
    instantiate_euclidean,
    iter_nodes,
    leaf,
    node,
)
from omdist.constraints import ConstraintSet, Edge, OrderConstraint, StrictConstraint, WeakConstraint, before, closer
from omdist.fo_decide import Not, decide, evaluate, extensions, visit_bound
from omdist.inference import consistent, entails, negate
from omdist.omspace import od
from omdist.oracle import enum_trees, euclid_check, oracle_consistent, oracle_min_labels
from omdist.parsing import parse_constraints
from omdist.solver import num_labels, solve, solve_fast, solve_mixed

from strategies import random_formula

RESULTS = {}
FAMILY_SECONDS = []


@contextmanager
def criterion(number, title):
    detail = []
    try:
        yield detail
    except BaseException:
        RESULTS[number] = f"criterion {number:>2} FAIL  {title}  {'; '.join(detail)}"
        print(RESULTS[number])
        raise
    RESULTS[number] = f"criterion {number:>2} PASS  {title}  {'; '.join(detail)}"
    print(RESULTS[number])


def best_time(fn, repeat=200):
    best = math.inf
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


SCALES = ConstraintSet.of(closer("w", "x", "x", "v"), closer("x", "y", "y", "z"), closer("v", "z", "w", "y"))
CLASH = ConstraintSet.of(
    closer("v", "w", "z", "y"), closer("w", "x", "z", "y"), closer("x", "y", "z", "y"), closer("z", "y", "v", "z")
)


def test_1_scales():
    with criterion(1, "two-scale example tree") as note:
        tree = solve(SCALES)
        want = node(5, node(0, leaf("v"), leaf("z")), node(4, leaf("w"), leaf("x"), leaf("y")))
        assert tree == want
        assert solve_fast(SCALES) == want
        assert num_labels(SCALES) == 2
        assert len({n.label for n in iter_nodes(tree) if not n.is_leaf} - {0}) == 2
        secs = best_time(lambda: solve(SCALES))
        note.append(f"{secs * 1e3:.3f} ms")
        assert secs < 1e-3


def test_2_clash():
    with criterion(2, "inconsistent example fails in round one") as note:
        trace = []
        assert solve(CLASH, trace=trace) is None
        assert len(trace) == 1
        assert solve_fast(CLASH) is None
        secs = best_time(lambda: solve(CLASH))
        note.append(f"{secs * 1e3:.3f} ms")
        assert secs < 1e-3


def test_3_landmarks(data_dir):
    with criterion(3, "landmark entailment by refutation") as note:
        cs = parse_constraints((data_dir / "landmarks.cons").read_text()).constraint_set()
        query = closer("C", "E", "E", "V")
        assert consistent(cs)
        assert not consistent(cs.with_constraints(negate(query)))
        assert entails(cs, (), query)
        assert not entails(cs, (), closer("E", "V", "C", "E"))
        note.append("entailed")


# -- the exhaustive family ----------------------------------------------------------

SYMS = "abcd"
EDGES = [Edge.of(a, b) for a, b in itertools.combinations_with_replacement(SYMS, 2)]
STRICT = [StrictConstraint(s, l) for s in EDGES for l in EDGES]


def exhaustive_family():
    for r in range(4):
        for combo in itertools.combinations(STRICT, r):
            yield ConstraintSet(combo, declared=frozenset(SYMS))


@pytest.fixture(scope="module")
def family():
    """Every system of at most three strict constraints over four symbols, solved."""
    start = time.perf_counter()
    solved = [(cs, solve_fast(cs)) for cs in exhaustive_family()]
    FAMILY_SECONDS.append(time.perf_counter() - start)
    return solved


def random_mixed(rng):
    syms = "abcde"[: rng.randint(2, 5)]

    def edge():
        return Edge.of(rng.choice(syms), rng.choice(syms))

    strict = [StrictConstraint(edge(), edge()) for _ in range(rng.randint(0, 4))]
    weak = [WeakConstraint(edge(), edge()) for _ in range(rng.randint(0, 3))]
    order = [OrderConstraint(*rng.sample(syms, 2)) for _ in range(rng.randint(0, 2))]
    return ConstraintSet(tuple(strict), tuple(weak), tuple(order), frozenset(syms))


def test_4_oracle_agreement(family):
    with criterion(4, "solver verdicts equal the brute-force oracle") as note:
        start = time.perf_counter()
        consistent_count = 0
        for cs, tree in family:
            assert (tree is not None) == oracle_consistent(cs), cs
            assert (solve(cs) is None) == (tree is None), cs
            consistent_count += tree is not None
        rng = random.Random(2024)
        mixed = 10_000
        mixed_ok = 0
        for _ in range(mixed):
            cs = random_mixed(rng)
            verdict = solve_mixed(cs) is not None
            assert verdict == oracle_consistent(cs), cs
            mixed_ok += verdict
        secs = time.perf_counter() - start + sum(FAMILY_SECONDS)
        note.append(
            f"{len(family)} exhaustive ({consistent_count} consistent), "
            f"{mixed} mixed ({mixed_ok} consistent), {secs:.0f} s"
        )
        assert secs < 300


def test_5_min_labels(family):
    with criterion(5, "label count is minimal") as note:
        checked = 0
        for cs, tree in family:
            if tree is None:
                assert num_labels(cs) is None
                continue
            assert num_labels(cs) == oracle_min_labels(cs), cs
            checked += 1
        note.append(f"{checked} consistent systems")


def test_6_finite_b(family):
    with criterion(6, "Euclidean witness at B = n + 1") as note:
        B = len(SYMS) + 1
        cache = {}
        checked = 0
        for cs, tree in family:
            if tree is None:
                continue
            for dim in (1, 2):
                key = (tree, dim)
                if key not in cache:
                    cache[key] = instantiate_euclidean(tree, B, dim)
                assert euclid_check(cache[key], cs, B), (cs, dim)
                checked += 1
        note.append(f"{checked} checks, {len(cache)} distinct instantiations")


def test_7_first_order():
    with criterion(7, "decide duality and quantifier-free agreement") as note:
        rng = random.Random(7)
        pool = [t for n in (1, 2, 3, 4) for t in enum_trees("abcd"[:n])]
        pairs = 1000
        for _ in range(pairs):
            t = rng.choice(pool)
            f = random_formula(rng, sorted(t.symbols), quantifiers=rng.randint(0, 2))
            assert decide(t, f) != decide(t, Not(f)), (t, f)
            g = random_formula(rng, sorted(t.symbols), quantifiers=0)
            assert decide(t, g) == evaluate(g, instantiate(t), od), (t, g)
        note.append(f"{pairs} duality pairs, {pairs} quantifier-free")


def test_8_extension_bound():
    with criterion(8, "extension count and visit envelope") as note:
        worst = 0.0
        trees = 0
        for n in range(1, 7):
            for t in enum_trees("abcdef"[:n]):
                k = len(extensions(t, "x"))
                assert k < 4 * n * n, (t, k)
                worst = max(worst, k / (4 * n * n))
                trees += 1
        rng = random.Random(8)
        visits = 0
        for n in range(1, 7):
            for t in rng.sample(enum_trees("abcdef"[:n]), min(40, len(enum_trees("abcdef"[:n])))):
                f = random_formula(rng, sorted(t.symbols), quantifiers=2)
                stats = {}
                decide(t, f, stats=stats)
                assert stats["visited"] <= visit_bound(t, f)
                visits += 1
        note.append(f"{trees} trees, max count / 4n^2 = {worst:.2f}, {visits} decide runs")


# -- performance ------------------------------------------------------------------------

def satisfiable_system(n, s, seed=0):
    """``s`` constraints true in a random hierarchy over ``n`` symbols.

    Each picks a cluster N, a short edge inside N, and a long edge from N
    to a point outside it (half the time inside N's parent).
    """
    rng = random.Random(seed)
    syms = [f"s{i}" for i in range(n)]
    nodes = []
    stack = [(0, n, -1)]
    while stack:
        lo, hi, par = stack.pop()
        idx = len(nodes)
        nodes.append((lo, hi, par))
        if hi - lo < 2:
            continue
        k = rng.randint(2, min(4, hi - lo))
        bounds = [lo] + sorted(rng.sample(range(lo + 1, hi), k - 1)) + [hi]
        for a, b in zip(bounds, bounds[1:]):
            if b - a >= 2:
                stack.append((a, b, idx))
    inner = [i for i, (lo, hi, p) in enumerate(nodes) if hi - lo >= 2 and p >= 0]
    out = []
    for _ in range(s):
        lo, hi, p = nodes[rng.choice(inner)]
        a, b = rng.sample(range(lo, hi), 2)
        c = rng.randrange(lo, hi)
        plo, phi = (nodes[p][0], nodes[p][1]) if rng.random() < 0.5 else (0, n)
        while True:
            d = rng.randrange(plo, phi)
            if not lo <= d < hi:
                break
        out.append(closer(syms[a], syms[b], syms[c], syms[d]))
    return ConstraintSet(tuple(out), declared=frozenset(syms))


def test_9_performance():
    with criterion(9, "fast solver at n = 10^4") as note:
        n = 10_000
        sizes = (10_000, 100_000, 1_000_000)
        times = []
        for s in sizes:
            cs = satisfiable_system(n, s, seed=s)
            t = time.perf_counter()
            tree = solve_fast(cs)
            times.append(time.perf_counter() - t)
            assert tree is not None
        xs = [math.log(s) for s in sizes]
        ys = [math.log(t) for t in times]
        mx, my = sum(xs) / 3, sum(ys) / 3
        slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)
        note.append(", ".join(f"s={s}: {t:.2f} s" for s, t in zip(sizes, times)) + f", slope {slope:.2f}")
        assert times[1] < 5
        assert slope < 1.3


def test_10_schedule(data_dir):
    with criterion(10, "schedule orderings") as note:
        cs = parse_constraints((data_dir / "schedule.cons").read_text()).constraint_set()
        assert consistent(cs)
        for a, b in [("eb", "ec"), ("ec", "ed"), ("ed", "ei")]:
            assert entails(cs, (), before(a, b)), (a, b)
        assert not entails(cs, (), before("ec", "eh"))
        assert not entails(cs, (), before("eh", "ec"))
        note.append("b<c, c<d, d<i entailed; c vs h open")
