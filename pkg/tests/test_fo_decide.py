import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from omdist.cluster_tree import (
    TreeNode,
    _rebuild,
    canonical,
    induced_tree,
    instantiate,
    isomorphic,
    labels_of,
    leaf,
    node,
    relabel,
    validate,
)
from omdist.fo_decide import (
    And,
    Eq,
    Exists,
    Forall,
    FreeVariableMismatch,
    MuchCloser,
    NonClosedFormula,
    Not,
    Or,
    SymbolCollision,
    decide,
    decide_sentence,
    evaluate,
    extending_labels,
    extensions,
    free_vars,
    normalize,
    visit_bound,
)
from omdist.omspace import od
from omdist.oracle import enum_trees

from strategies import random_formula, trees

T1 = node(5, node(0, leaf("v"), leaf("z")), node(4, leaf("w"), leaf("x"), leaf("y")))
VW = node(1, leaf("V"), leaf("W"))
FIG3 = node(2, node(1, leaf("u"), leaf("v")), leaf("w"))


def remove_leaf(t, x):
    """Drop leaf x and splice out any node left with one child."""

    def fn(n, kids):
        if n.is_leaf:
            return n
        kids = [k for k in kids if k is not None and not (k.is_leaf and k.symbol == x)]
        if not kids:
            return None
        if len(kids) == 1:
            return kids[0]
        return TreeNode.node(n.label, kids)

    return _rebuild(t, fn)


class TestNormalize:
    def test_forall(self):
        f = normalize(Forall("X", Eq("X", "X")))
        assert f == Not(Exists("X", Not(Eq("X", "X"))))

    def test_or(self):
        f = normalize(Or(Eq("a", "b"), Eq("c", "d")))
        assert f == Not(And(Not(Eq("a", "b")), Not(Eq("c", "d"))))

    def test_normal_input(self):
        f = Exists("X", And(Eq("X", "a"), Not(MuchCloser("a", "X", "a", "b"))))
        assert normalize(f) == f

    def test_renames_apart(self):
        f = And(Exists("X", Eq("X", "a")), Exists("X", Eq("X", "b")))
        g = normalize(f, avoid={"a", "b"})
        assert g.left.var != g.right.var
        g2 = normalize(Exists("a", Eq("a", "a")), avoid={"a"})
        assert g2.var != "a"

    def test_shadowing(self):
        f = Exists("X", And(Eq("X", "a"), Exists("X", Not(Eq("X", "a")))))
        g = normalize(f)
        assert g.var != g.body.right.var
        assert free_vars(g) == {"a"}


class TestExtendingLabels:
    def test_one_label(self):
        assert extending_labels(node(1, leaf("a"), leaf("b"))) == [0, Fraction(1, 2), 1, 2]

    def test_single_leaf(self):
        assert extending_labels(leaf("a")) == [0, 1]

    def test_two_labels(self):
        t = node(5, node(2, leaf("a"), leaf("b")), leaf("c"))
        assert extending_labels(t) == [0, 1, 2, Fraction(7, 2), 5, 6]

    @given(trees(max_leaves=6))
    def test_count(self, t):
        k = len(labels_of(t)) - 1
        assert len(extending_labels(t)) == 2 * k + 2


class TestExtensions:
    def test_null(self):
        assert extensions(None, "x") == [leaf("x")]

    def test_single_leaf(self):
        out = extensions(leaf("y"), "x")
        assert out == [node(0, leaf("x"), leaf("y")), node(1, leaf("x"), leaf("y"))]

    def test_collision(self):
        with pytest.raises(SymbolCollision):
            extensions(T1, "w")

    def test_figure_shapes(self):
        out = extensions(FIG3, "x")
        assert node(3, FIG3, leaf("x")) in out
        assert node(2, node(1, leaf("u"), leaf("v"), leaf("x")), leaf("w")) in out
        assert node(2, node(1, leaf("u"), leaf("v")), leaf("w"), leaf("x")) in out
        assert node(2, node(Fraction(3, 2), node(1, leaf("u"), leaf("v")), leaf("x")), leaf("w")) in out
        assert node(2, node(1, leaf("u"), leaf("v")), node(0, leaf("w"), leaf("x"))) in out
        assert len(set(out)) == len(out)

    @given(trees(max_leaves=6))
    def test_valid_and_bounded(self, t):
        out = extensions(t, "q")
        n = len(t.symbols)
        assert len(out) < 4 * n * n
        for e in out:
            assert validate(e) == []
            assert e.symbols == t.symbols | {"q"}

    @given(trees(max_leaves=5))
    def test_removing_x_recovers_tree(self, t):
        for e in extensions(t, "q"):
            back = remove_leaf(e, "q")
            assert isomorphic(back, t)


def _midpoint_exponents(val):
    """Exponent grid for placing a new point: existing, midpoints, beyond both ends."""
    exps = sorted({q for p in val.values() for q, _ in p.terms} | {Fraction(0)})
    grid = set(exps)
    for a, b in zip(exps, exps[1:]):
        grid.add((a + b) / 2)
    grid.add(exps[0] - 1)
    grid.add(exps[-1] + 1)
    return sorted(grid)


class TestExtensionCompleteness:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_every_placement_is_covered(self, n):
        for t in enum_trees("abcd"[:n]):
            val = instantiate(t)
            ext = {_canon(e) for e in extensions(t, "x")}
            grid = _midpoint_exponents(val)
            candidates = set(val.values())
            for p in list(val.values()):
                for q in grid:
                    for c in (1, -1, 2):
                        candidates.add(p.shift(q, c))
            for point in candidates:
                induced = induced_tree({**val, "x": point})
                assert _canon(induced) in ext, (t, point)


def _canon(t):
    return canonical(t)


class TestDecide:
    def test_atom(self):
        assert decide(T1, MuchCloser("w", "x", "x", "v"))
        assert not decide(T1, MuchCloser("x", "v", "w", "x"))

    def test_equality(self):
        assert not decide(VW, Eq("V", "W"))
        assert decide(node(0, leaf("V"), leaf("W")), Eq("V", "W"))

    def test_unbounded_above(self):
        assert decide(VW, Exists("X", MuchCloser("V", "W", "W", "X")))

    def test_free_variable_check(self):
        with pytest.raises(FreeVariableMismatch):
            decide(VW, Eq("V", "Q"))

    def test_sentences(self):
        assert decide_sentence(Exists("X", Eq("X", "X")))
        assert decide_sentence(Exists("X", Exists("Y", Not(Eq("X", "Y")))))
        assert not decide_sentence(Exists("X", Exists("Y", MuchCloser("X", "Y", "X", "Y"))))

    def test_non_closed(self):
        with pytest.raises(NonClosedFormula):
            decide_sentence(Eq("a", "b"))

    def test_density(self):
        dense = Forall("X", Forall("Y", Or(Eq("X", "Y"), Exists("Z", And(Not(Eq("X", "Z")), MuchCloser("X", "Z", "X", "Y"))))))
        assert decide_sentence(dense)

    def test_bound_variable_named_like_leaf(self):
        # the quantified V is a new point, not the leaf V
        assert decide(VW, Exists("V", MuchCloser("V", "W", "V", "W"))) is False
        assert decide(VW, Exists("V", Not(Eq("V", "W"))))

    def test_visit_bound(self):
        f = Forall("X", Exists("Y", MuchCloser("X", "Y", "X", "W")))
        stats = {}
        decide(VW, f, stats=stats)
        assert 0 < stats["visited"] <= visit_bound(VW, f)


class TestDuality:
    def test_random_pairs(self):
        rng = random.Random(3)
        pool = [t for n in (1, 2, 3, 4) for t in enum_trees("abcd"[:n])]
        for _ in range(300):
            t = rng.choice(pool)
            f = random_formula(rng, sorted(t.symbols))
            assert decide(t, f) != decide(t, Not(f))

    @given(trees(max_leaves=4), st.randoms(use_true_random=False))
    def test_relabel_invariance(self, t, rnd):
        f = random_formula(rnd, sorted(t.symbols), quantifiers=1)
        labels = [l for l in labels_of(t) if l != 0]
        squeeze = {l: Fraction(i + 1, 3) for i, l in enumerate(labels)}
        squeeze[Fraction(0)] = Fraction(0)
        assert decide(t, f) == decide(relabel(t, squeeze), f)

    @given(trees(max_leaves=5), st.randoms(use_true_random=False))
    def test_quantifier_free_matches_points(self, t, rnd):
        f = random_formula(rnd, sorted(t.symbols), quantifiers=0)
        assert decide(t, f) == evaluate(f, instantiate(t), od)
