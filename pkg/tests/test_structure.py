from fractions import Fraction

import numpy as np
import pytest

from capos import (
    BuildParams,
    DegenerateDataError,
    FormalDecisionContext,
    InputError,
    NodeScope,
    Region,
    build_context,
    build_structure,
    classify_region,
    predict,
    rank_attributes,
    select_split,
    split,
)
from capos.causal import causal_factor
from capos.evaluate import resubstitution
from capos.structure import (
    ATTRIBUTE_EXHAUSTED,
    MAX_DEPTH,
    MIN_SAMPLES,
    NO_DEFINED_CANDIDATE,
    PURE_REGION,
)

import oracles
from conftest import random_context

LEAF_REASONS = {PURE_REGION, MIN_SAMPLES, NO_DEFINED_CANDIDATE, ATTRIBUTE_EXHAUSTED, MAX_DEPTH}


class TestRegions:
    def test_pure_positive(self):
        assert classify_region(1.0, BuildParams()) is Region.POSITIVE

    def test_seven_ninths_boundary(self):
        assert classify_region(7 / 9, BuildParams(alpha=0.85)) is Region.BOUNDARY

    def test_one_eighth_negative(self):
        assert classify_region(1 / 8, BuildParams(alpha=0.85)) is Region.NEGATIVE

    def test_thresholds_inclusive(self):
        p = BuildParams(alpha=0.75, beta=0.25)
        assert classify_region(0.75, p) is Region.POSITIVE
        assert classify_region(0.25, p) is Region.NEGATIVE

    def test_out_of_range(self):
        with pytest.raises(InputError):
            classify_region(1.5, BuildParams())

    @pytest.mark.parametrize("kw", [dict(alpha=0.2, beta=0.3), dict(alpha=1.1),
                                    dict(beta=-0.1), dict(min_split=0), dict(max_depth=-1)])
    def test_invalid_params(self, kw):
        with pytest.raises(InputError):
            BuildParams(**kw)

    def test_strict_preset(self):
        p = BuildParams.strict()
        assert (p.alpha, p.beta, p.min_split) == (1.0, 0.0, 2)


def node2_scope(ctx):
    absent, present = split(ctx, NodeScope.full(ctx), "clear")
    return present


class TestSplitting:
    def test_root_selects_clear(self, watermelon):
        assert select_split(watermelon, watermelon.attributes, NodeScope.full(watermelon)).attribute == "clear"

    def test_node2_selects_hard_slippery(self, watermelon):
        scope = node2_scope(watermelon)
        remaining = [a for a in watermelon.attributes if a != "clear"]
        assert select_split(watermelon, remaining, scope).attribute == "hard slippery"

    def test_constant_candidates(self):
        ctx = FormalDecisionContext.from_rows(["a", "b"], [[1, 0], [1, 0], [1, 0]], [1, 0, 1])
        assert select_split(ctx, ctx.attributes, NodeScope.full(ctx)) is None

    def test_focus_attribute_wins(self):
        # "f" is exactly the decision; "x" is declared first but weaker
        ctx = FormalDecisionContext.from_rows(
            ["x", "f"], [[1, 1], [0, 1], [1, 0], [0, 0], [0, 0], [1, 1]], [1, 1, 0, 0, 0, 1])
        s = select_split(ctx, ctx.attributes, NodeScope.full(ctx))
        assert s.attribute == "f" and s.cf == 0

    def test_watermelon_sides(self, watermelon):
        absent, present = split(watermelon, NodeScope.full(watermelon), "clear")
        assert (len(absent), len(present)) == (8, 9)
        assert present.conditioned == (("clear", True),)
        absent2, present2 = split(watermelon, present, "hard slippery")
        assert (len(absent2), len(present2)) == (3, 6)
        assert present2.conditioned == (("clear", True), ("hard slippery", True))

    def test_scope_matches_conditions(self, watermelon):
        _, present = split(watermelon, NodeScope.full(watermelon), "clear")
        a2, p2 = split(watermelon, present, "hard slippery")
        _, have, _ = oracles.watermelon()
        expect = {g - 1 for g, s in have.items() if "clear" in s and "hard slippery" not in s}
        assert set(a2.objects) == expect

    def test_single_object_side_empty(self, watermelon):
        with pytest.raises(DegenerateDataError):
            split(watermelon, NodeScope((0,)), "clear")

    def test_reconditioning_rejected(self, watermelon):
        _, present = split(watermelon, NodeScope.full(watermelon), "clear")
        with pytest.raises(InputError):
            split(watermelon, present, "clear")


class TestWatermelon:
    def test_watermelon_tree(self, watermelon, tree_params):
        s = build_structure(watermelon, tree_params)
        rows = [(n.id, n.level, n.split_attribute, n.size, Fraction(n.n_pos, n.size), n.region,
                 n.leaf_reason) for n in s.nodes()]
        assert rows == [
            (0, 0, "clear", 17, Fraction(9, 17), Region.BOUNDARY, None),
            (1, 1, None, 8, Fraction(1, 8), Region.NEGATIVE, PURE_REGION),
            (2, 1, "hard slippery", 9, Fraction(8, 9), Region.BOUNDARY, None),
            (3, 2, None, 3, Fraction(2, 3), Region.BOUNDARY, MIN_SAMPLES),
            (4, 2, None, 6, Fraction(1), Region.POSITIVE, PURE_REGION),
        ]
        assert round(s.root.score.nc, 3) == 0.877

    def test_alpha_085_stops_at_node2(self, watermelon):
        s = build_structure(watermelon, BuildParams(alpha=0.85))
        assert len(s.nodes()) == 3
        assert s.root.children[1].region is Region.POSITIVE

    def test_predict_row_three(self, watermelon, tree_params):
        s = build_structure(watermelon, tree_params)
        p = predict(s, watermelon.incidence[2])
        assert p.label == 1 and p.leaf_id == 4
        assert p.trace == (("clear", True), ("hard slippery", True))
        assert p.confidence == 1.0

    def test_predict_lacking_clear(self, watermelon, tree_params):
        s = build_structure(watermelon, tree_params)
        sample = {a: 1 for a in watermelon.attributes} | {"clear": 0}
        p = s.predict(sample)
        assert (p.label, p.leaf_id) == (0, 1)
        assert p.confidence == 7 / 8

    def test_boundary_leaf_majority(self, watermelon, tree_params):
        s = build_structure(watermelon, tree_params)
        sample = {a: 0 for a in watermelon.attributes} | {"clear": 1}
        p = s.predict(sample)
        assert (p.label, p.leaf_id) == (1, 3)

    def test_missing_attribute(self, watermelon, tree_params):
        s = build_structure(watermelon, tree_params)
        with pytest.raises(InputError):
            s.predict({"black": 1})
        with pytest.raises(InputError):
            s.predict([1, 0])

    def test_trace_matches_leaf(self, watermelon, tree_params):
        s = build_structure(watermelon, tree_params)
        leaves = {n.id: n for n in s.leaves()}
        for i in range(watermelon.n_objects):
            p = s.predict(watermelon.incidence[i])
            assert p.trace == leaves[p.leaf_id].scope.conditioned


class TestSmallCases:
    def test_constant_decision(self):
        ctx = FormalDecisionContext.from_rows(["a", "b"], [[1, 0], [0, 1], [1, 1]], [1, 1, 1])
        s = build_structure(ctx)
        assert s.root.is_leaf and s.root.region is Region.POSITIVE
        assert {s.predict([i, j]).label for i in (0, 1) for j in (0, 1)} == {1}

    def test_empty_context(self):
        ctx = FormalDecisionContext.from_rows(["a"], np.zeros((0, 1)), [])
        with pytest.raises(DegenerateDataError):
            build_structure(ctx)

    def test_max_depth(self, watermelon, tree_params):
        s = build_structure(watermelon, BuildParams(alpha=0.9, max_depth=0))
        assert s.root.is_leaf and s.root.leaf_reason == MAX_DEPTH
        assert s.predict(watermelon.incidence[0]).label == 1

    def test_attribute_exhausted(self):
        ctx = FormalDecisionContext.from_rows(["a"], [[1], [1], [0], [0], [1]], [1, 0, 0, 0, 1])
        s = build_structure(ctx, BuildParams.strict(min_split=1))
        reasons = {n.leaf_reason for n in s.leaves()}
        assert ATTRIBUTE_EXHAUSTED in reasons

    def test_no_defined_candidate(self):
        ctx = FormalDecisionContext.from_rows(["m"], [[1], [0], [0]], [0, 1, 1])
        s = build_structure(ctx, BuildParams.strict(min_split=1))
        assert s.root.is_leaf and s.root.leaf_reason == NO_DEFINED_CANDIDATE
        assert s.predict([1]).label == 1

    def test_prior_tie_predicts_zero(self):
        ctx = FormalDecisionContext.from_rows(["m"], [[1], [0]], [0, 1])
        s = build_structure(ctx, BuildParams.strict(min_split=1))
        assert s.root.is_leaf
        assert s.predict([0]).label == 0


class TestBalloons:
    def test_layers(self, balloons_raw):
        ctx, bmap = build_context(balloons_raw)
        s = build_structure(ctx, binarization=bmap)
        assert s.root.split_attribute.startswith("color_")
        internal = [n for n in s.nodes() if not n.is_leaf]
        assert [n.split_attribute.split("_")[0] for n in internal] == ["color", "size"]
        assert all(n.region is not Region.BOUNDARY for n in s.leaves())
        assert all(n.n_pos in (0, n.size) for n in s.leaves())
        assert sorted(n.size for n in s.leaves()) == [4, 8, 8]


def check_invariants(ctx, params):
    s = build_structure(ctx, params)
    nodes = s.nodes()
    assert [n.id for n in nodes] == list(range(len(nodes)))
    seen = []
    for n in s.leaves():
        seen.extend(n.scope.objects)
        assert n.leaf_reason in LEAF_REASONS
    assert sorted(seen) == list(range(ctx.n_objects))
    for n in nodes:
        path = n.scope.conditioned_attributes
        assert len(set(path)) == len(path) == n.level <= ctx.n_attributes
        expect = [g for g in range(ctx.n_objects)
                  if all(ctx.incidence[g, ctx.index_of(a)] == p for a, p in n.scope.conditioned)]
        assert list(n.scope.objects) == expect
        if n.region is not Region.BOUNDARY:
            assert n.is_leaf
        if n.is_leaf:
            assert n.split_attribute is None
            continue
        assert n.split_attribute not in path
        a, p = n.children
        assert set(a.scope.objects) | set(p.scope.objects) == set(n.scope.objects)
        assert not set(a.scope.objects) & set(p.scope.objects)
        assert a.size and p.size
        # split attains the maximal score among defined splittable candidates
        remaining = [m for m in ctx.attributes if m not in path]
        ok = [r for r in rank_attributes(ctx, remaining, n.scope)
              if r.defined and r.counts[0] and r.counts[2]]
        assert n.score.strength == max(r.strength for r in ok)
        assert n.split_attribute == ok[0].attribute
        # upper layers cover lower ones at the moment of selection
        for child in n.children:
            if child.is_leaf:
                continue
            c = causal_factor(ctx, child.split_attribute, n.scope)
            if c.defined:
                assert n.score.nc >= c.nc
    return s


@pytest.mark.parametrize("params", [BuildParams(), BuildParams.strict(min_split=1),
                                    BuildParams(alpha=0.7, beta=0.3, min_split=3, max_depth=4)],
                         ids=["default", "strict", "loose"])
def test_random_invariants(params):
    rng = np.random.default_rng(20261016)
    for _ in range(200):
        ctx = random_context(rng)
        s = check_invariants(ctx, params)
        again = build_structure(ctx, params)
        assert again.summary() == s.summary()


def test_resubstitution_strict():
    rng = np.random.default_rng(7)
    for _ in range(200):
        ctx = random_context(rng, max_objects=16, max_attributes=5)
        s = build_structure(ctx, BuildParams.strict(min_split=1))
        clashing = oracles.identical_opposite(ctx.incidence.tolist(), ctx.decision.tolist())
        leaf_of = {g: n for n in s.leaves() for g in n.scope.objects}
        for g in range(ctx.n_objects):
            if s.predict(ctx.incidence[g]).label != ctx.decision[g]:
                assert g in clashing or leaf_of[g].leaf_reason == NO_DEFINED_CANDIDATE


def test_resubstitution_counterexample():
    # object 0 is unique yet misclassified: its only distinguishing attribute
    # is held by no positive object, so no candidate is defined
    ctx = FormalDecisionContext.from_rows(["m"], [[1], [0], [0]], [0, 1, 1])
    s = build_structure(ctx, BuildParams.strict(min_split=1))
    assert oracles.identical_opposite(ctx.incidence.tolist(), ctx.decision.tolist()) == set()
    report = resubstitution(s, ctx)
    assert report.fp == 1 and report.tp == 2
