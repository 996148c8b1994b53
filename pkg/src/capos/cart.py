"""Gini-impurity CART over a binarized formal decision context.

Used as the comparison baseline: it shares the stopping rules, path-local
attribute exclusion and declaration-order tie-break of the causal structure,
and differs only in how the split attribute is chosen.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .causal import NodeScope
from .context import BinarizationMap, FormalDecisionContext
from .errors import DegenerateDataError, InputError
from .structure import (
    ATTRIBUTE_EXHAUSTED,
    MAX_DEPTH,
    MIN_SAMPLES,
    PURE_REGION,
    BuildParams,
    Prediction,
    Region,
    _TreeModel,
    classify_region,
    majority_label,
    split,
)

NO_GAIN = "no-gain"
# relative slack when deciding that a split strictly lowers impurity
_EPS = 1e-12


def gini(pos: int, neg: int) -> float:
    n = pos + neg
    if n < 1 or pos < 0 or neg < 0:
        raise InputError("gini of an empty node")
    p = pos / n
    return 1.0 - p * p - (1.0 - p) * (1.0 - p)


@dataclass(frozen=True)
class CartNode:
    id: int
    level: int
    scope: NodeScope
    n_pos: int
    impurity: float
    majority: int
    split_attribute: str | None = None
    children: tuple["CartNode", "CartNode"] | None = None
    leaf_reason: str | None = None
    # weighted child impurity of the chosen split
    split_impurity: float | None = None

    @property
    def size(self) -> int:
        return len(self.scope.objects)

    @property
    def positive_fraction(self) -> float:
        return self.n_pos / self.size

    @property
    def is_leaf(self) -> bool:
        return self.children is None


@dataclass(frozen=True, eq=False)
class CartTree(_TreeModel):
    root: CartNode
    params: BuildParams
    attributes: tuple[str, ...]
    fingerprint: str
    binarization: BinarizationMap | None = None

    def predict(self, sample) -> Prediction:
        return predict_cart(self, sample)


def _weighted(counts) -> float:
    n_p, n_pp, n_a, n_ap = (int(c) for c in counts)
    n = n_p + n_a
    return (n_p * gini(n_pp, n_p - n_pp) + n_a * gini(n_ap, n_a - n_ap)) / n


def build_cart(
    ctx: FormalDecisionContext,
    params: BuildParams | None = None,
    binarization: BinarizationMap | None = None,
) -> CartTree:
    """Greedy CART: split on the attribute with the lowest weighted Gini."""
    params = params or BuildParams()
    if ctx.n_objects == 0:
        raise DegenerateDataError("cannot build a tree on an empty context")
    ids = itertools.count()

    def grow(scope: NodeScope, level: int, ancestors: list) -> CartNode:
        node_id = next(ids)
        n = len(scope)
        n_pos = int(ctx.decision[list(scope.objects)].sum())
        impurity = gini(n_pos, n - n_pos)
        majority = majority_label(ancestors + [_Counts(n, n_pos)])
        leaf = dict(id=node_id, level=level, scope=scope, n_pos=n_pos,
                    impurity=impurity, majority=majority)
        if classify_region(n_pos / n, params) is not Region.BOUNDARY:
            return CartNode(**leaf, leaf_reason=PURE_REGION)
        if n < params.min_split:
            return CartNode(**leaf, leaf_reason=MIN_SAMPLES)
        if params.max_depth is not None and level >= params.max_depth:
            return CartNode(**leaf, leaf_reason=MAX_DEPTH)
        used = set(scope.conditioned_attributes)
        remaining = [a for a in ctx.attributes if a not in used]
        if not remaining:
            return CartNode(**leaf, leaf_reason=ATTRIBUTE_EXHAUSTED)
        best, best_val = None, None
        for a, c in zip(remaining, ctx.counts(scope.objects, remaining)):
            if c[0] == 0 or c[2] == 0:
                continue
            val = _weighted(c)
            if best_val is None or val < best_val:
                best, best_val = a, val
        if best is None or not best_val < impurity - _EPS * max(impurity, 1.0):
            return CartNode(**leaf, leaf_reason=NO_GAIN)
        absent, present = split(ctx, scope, best)
        here = ancestors + [_Counts(n, n_pos)]
        children = (grow(absent, level + 1, here), grow(present, level + 1, here))
        return CartNode(**leaf, split_attribute=best, children=children, split_impurity=best_val)

    root = grow(NodeScope.full(ctx), 0, [])
    return CartTree(root, params, ctx.attributes, ctx.fingerprint(), binarization)


@dataclass(frozen=True)
class _Counts:
    size: int
    n_pos: int


def predict_cart(tree: CartTree, sample) -> Prediction:
    path = tree.route(sample)
    leaf = path[-1]
    frac = leaf.positive_fraction
    label = leaf.majority
    return Prediction(label, leaf.id, leaf.scope.conditioned, frac if label else 1.0 - frac)
