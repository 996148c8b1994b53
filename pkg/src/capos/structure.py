"""Three-way causal attribute partial order structure (3WCAPOS).

The structure is a binary tree over a formal decision context. Each boundary
node re-ranks the attributes not yet used on its path by normalized causality
inside its own population and splits on the strongest one; nodes whose
positive fraction reaches ``alpha`` (or falls to ``beta``) are pure-region
leaves.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from .causal import CausalScore, NodeScope, rank_attributes
from .context import BinarizationMap, FormalDecisionContext
from .errors import DegenerateDataError, InputError


class Region(str, enum.Enum):
    POSITIVE = "POSITIVE"
    NEGATIVE = "NEGATIVE"
    BOUNDARY = "BOUNDARY"


PURE_REGION = "pure-region"
MIN_SAMPLES = "min-samples"
NO_DEFINED_CANDIDATE = "no-defined-candidate"
ATTRIBUTE_EXHAUSTED = "attribute-exhausted"
MAX_DEPTH = "max-depth"


@dataclass(frozen=True)
class BuildParams:
    alpha: float = 0.9
    beta: float = 0.15
    min_split: int = 4
    max_depth: int | None = None

    def __post_init__(self):
        if not 0 <= self.beta < self.alpha <= 1:
            raise InputError(f"need 0 <= beta < alpha <= 1, got alpha={self.alpha}, beta={self.beta}")
        if self.min_split < 1:
            raise InputError("min_split must be at least 1")
        if self.max_depth is not None and self.max_depth < 0:
            raise InputError("max_depth must be nonnegative")

    @classmethod
    def strict(cls, min_split: int = 2, max_depth: int | None = None) -> "BuildParams":
        """Literal purity: only all-positive or all-negative nodes are pure."""
        return cls(1.0, 0.0, min_split, max_depth)

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "min_split": self.min_split,
                "max_depth": self.max_depth}


def classify_region(positive_fraction: float, params: BuildParams) -> Region:
    if not 0 <= positive_fraction <= 1:
        raise InputError(f"positive fraction {positive_fraction} outside [0, 1]")
    if positive_fraction >= params.alpha:
        return Region.POSITIVE
    if positive_fraction <= params.beta:
        return Region.NEGATIVE
    return Region.BOUNDARY


@dataclass(frozen=True)
class StructureNode:
    id: int
    level: int
    scope: NodeScope
    n_pos: int
    region: Region
    split_attribute: str | None = None
    score: CausalScore | None = None
    children: tuple["StructureNode", "StructureNode"] | None = None
    leaf_reason: str | None = None

    @property
    def size(self) -> int:
        return len(self.scope.objects)

    @property
    def positive_fraction(self) -> float:
        return self.n_pos / self.size if self.size else 0.0

    @property
    def is_leaf(self) -> bool:
        return self.children is None


@dataclass(frozen=True)
class Prediction:
    label: int
    leaf_id: int
    trace: tuple[tuple[str, bool], ...]
    confidence: float

    def to_dict(self) -> dict:
        return {"label": self.label, "leaf_id": self.leaf_id,
                "trace": [[a, p] for a, p in self.trace], "confidence": self.confidence}

    @classmethod
    def from_dict(cls, d) -> "Prediction":
        return cls(d["label"], d["leaf_id"], tuple((a, p) for a, p in d["trace"]), d["confidence"])


def iter_nodes(root) -> Iterator:
    """Pre-order traversal, absent branch before present branch."""
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        if node.children is not None:
            stack.append(node.children[1])
            stack.append(node.children[0])


class _TreeModel:
    """Shared behavior of built trees: traversal and sample routing."""

    root: object
    attributes: tuple[str, ...]
    binarization: BinarizationMap | None

    def nodes(self) -> list:
        return list(iter_nodes(self.root))

    def leaves(self) -> list:
        return [n for n in iter_nodes(self.root) if n.children is None]

    def sample_vector(self, sample) -> Mapping[str, int]:
        if isinstance(sample, Mapping):
            return sample
        sample = list(np.asarray(sample).tolist())
        if len(sample) != len(self.attributes):
            raise InputError(f"sample has {len(sample)} values, expected {len(self.attributes)}")
        return dict(zip(self.attributes, sample))

    def route(self, sample) -> list:
        """Nodes visited from the root to a leaf."""
        values = self.sample_vector(sample)
        path = [self.root]
        node = self.root
        while node.children is not None:
            a = node.split_attribute
            if a not in values:
                raise InputError(f"sample lacks attribute {a!r}")
            v = values[a]
            if v not in (0, 1, True, False):
                raise InputError(f"attribute {a!r} must be 0 or 1, got {v!r}")
            node = node.children[1] if v else node.children[0]
            path.append(node)
        return path


def majority_label(path: Sequence) -> int:
    """Majority decision of the deepest node without a tie; prior tie gives 0."""
    for node in reversed(path):
        neg = node.size - node.n_pos
        if node.n_pos != neg:
            return int(node.n_pos > neg)
    return 0


@dataclass(frozen=True, eq=False)
class Structure(_TreeModel):
    root: StructureNode
    params: BuildParams
    attributes: tuple[str, ...]
    fingerprint: str
    binarization: BinarizationMap | None = None

    def predict(self, sample) -> Prediction:
        return predict(self, sample)

    def summary(self) -> list[dict]:
        """Per-node rows: level, node id, split attribute, size, fraction, region."""
        return [
            {
                "id": n.id, "level": n.level, "size": n.size, "n_pos": n.n_pos,
                "positive_fraction": n.positive_fraction, "region": n.region.value,
                "split_attribute": n.split_attribute,
                "nc": n.score.nc if n.score else None,
                "path": list(n.scope.conditioned), "leaf_reason": n.leaf_reason,
            }
            for n in self.nodes()
        ]


def predict(s: Structure, sample) -> Prediction:
    """Route ``sample`` (mapping or attribute-aligned sequence) to a leaf.

    POSITIVE leaves predict 1 and NEGATIVE leaves 0. A BOUNDARY leaf predicts
    its training majority, falling back to the nearest ancestor without a tie.
    """
    path = s.route(sample)
    leaf = path[-1]
    if leaf.region is Region.POSITIVE:
        label = 1
    elif leaf.region is Region.NEGATIVE:
        label = 0
    else:
        label = majority_label(path)
    frac = leaf.positive_fraction
    return Prediction(label, leaf.id, leaf.scope.conditioned, frac if label else 1.0 - frac)


def select_split(
    ctx: FormalDecisionContext, candidates, scope: NodeScope
) -> CausalScore | None:
    """Strongest defined candidate whose split leaves both sides nonempty."""
    candidates = list(candidates)
    if not candidates or not scope.objects:
        return None
    for score in rank_attributes(ctx, candidates, scope):
        if not score.defined:
            return None
        n_present, _, n_absent, _ = score.counts
        if n_present and n_absent:
            return score
    return None


def split(ctx: FormalDecisionContext, scope: NodeScope, m: str) -> tuple[NodeScope, NodeScope]:
    """Partition ``scope`` by presence of ``m``: ``(absent_side, present_side)``."""
    j = ctx.index_of(m)
    if m in scope.conditioned_attributes:
        raise InputError(f"attribute {m!r} is already conditioned in this scope")
    has = ctx.incidence[list(scope.objects), j].astype(bool) if scope.objects else np.zeros(0, bool)
    objs = np.asarray(scope.objects, dtype=np.intp)
    present, absent = tuple(objs[has].tolist()), tuple(objs[~has].tolist())
    if not present or not absent:
        raise DegenerateDataError(f"splitting on {m!r} leaves one side empty")
    return (
        NodeScope(absent, scope.conditioned + ((m, False),)),
        NodeScope(present, scope.conditioned + ((m, True),)),
    )


def build_structure(
    ctx: FormalDecisionContext,
    params: BuildParams | None = None,
    binarization: BinarizationMap | None = None,
) -> Structure:
    """Grow the structure depth-first from the whole context.

    A node becomes a leaf when its region is pure, it holds fewer than
    ``min_split`` objects, it sits at ``max_depth``, no attribute is left on
    its path, or no remaining attribute has a defined causal factor.
    """
    params = params or BuildParams()
    if ctx.n_objects == 0:
        raise DegenerateDataError("cannot build a structure on an empty context")
    ids = itertools.count()

    def grow(scope: NodeScope, level: int) -> StructureNode:
        node_id = next(ids)
        n_pos = int(ctx.decision[list(scope.objects)].sum())
        region = classify_region(n_pos / len(scope), params)
        leaf = dict(id=node_id, level=level, scope=scope, n_pos=n_pos, region=region)
        if region is not Region.BOUNDARY:
            return StructureNode(**leaf, leaf_reason=PURE_REGION)
        if len(scope) < params.min_split:
            return StructureNode(**leaf, leaf_reason=MIN_SAMPLES)
        if params.max_depth is not None and level >= params.max_depth:
            return StructureNode(**leaf, leaf_reason=MAX_DEPTH)
        used = set(scope.conditioned_attributes)
        remaining = [a for a in ctx.attributes if a not in used]
        if not remaining:
            return StructureNode(**leaf, leaf_reason=ATTRIBUTE_EXHAUSTED)
        best = select_split(ctx, remaining, scope)
        if best is None:
            return StructureNode(**leaf, leaf_reason=NO_DEFINED_CANDIDATE)
        absent, present = split(ctx, scope, best.attribute)
        children = (grow(absent, level + 1), grow(present, level + 1))
        return StructureNode(**leaf, split_attribute=best.attribute, score=best, children=children)

    root = grow(NodeScope.full(ctx), 0)
    return Structure(root, params, ctx.attributes, ctx.fingerprint(), binarization)
