"""Causal factor scoring of binary attributes against the decision.

The causal factor of attribute ``m`` within a population is

    CF(m) = p(c | do(m)) / p(c | m)

where the interventional term is estimated by ``p(c | m absent)`` inside the
same population. Its strength ``|ln CF|`` is squashed by a sigmoid into the
normalized causality ``NC`` in ``[1/2, 1]``; ``CF = 0`` maps to ``NC = 1``.
An attribute is undefined (never ranked above a defined one) when
``p(c | m) = 0`` or when either conditional has an empty population.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from .errors import InputError

if TYPE_CHECKING:
    from .context import FormalDecisionContext

LOG_ABS_OF_ZERO = sys.float_info.max


@dataclass(frozen=True)
class CausalScore:
    attribute: str
    cf: float | None
    log_abs: float | None
    nc: float | None
    defined: bool
    # n_present, n_present_pos, n_absent, n_absent_pos within the scope
    counts: tuple[int, int, int, int] = (0, 0, 0, 0)
    # max(CF, 1/CF) as an exact-ratio float; ranking key, inf for CF = 0
    strength: float = -1.0

    def to_dict(self) -> dict:
        return {
            "attribute": self.attribute,
            "cf": self.cf,
            "log_abs": self.log_abs,
            "nc": self.nc,
            "defined": self.defined,
            "counts": list(self.counts),
            "strength": None if math.isinf(self.strength) else self.strength,
        }

    @classmethod
    def from_dict(cls, d) -> "CausalScore":
        strength = d.get("strength")
        return cls(
            d["attribute"], d["cf"], d["log_abs"], d["nc"], d["defined"],
            tuple(d["counts"]), math.inf if strength is None else strength,
        )


@dataclass(frozen=True)
class NodeScope:
    """A population: the objects satisfying every (attribute, present) pair."""

    objects: tuple[int, ...]
    conditioned: tuple[tuple[str, bool], ...] = ()

    @classmethod
    def full(cls, ctx: "FormalDecisionContext") -> "NodeScope":
        return cls(tuple(range(ctx.n_objects)))

    @property
    def conditioned_attributes(self) -> tuple[str, ...]:
        return tuple(a for a, _ in self.conditioned)

    def __len__(self) -> int:
        return len(self.objects)


def normalized_causality(cf: float | None) -> float | None:
    """Sigmoid of ``|ln cf|``; 1 for ``cf = 0``, ``None`` passes through."""
    if cf is None:
        return None
    if cf < 0:
        raise InputError("causal factor must be nonnegative")
    if cf == 0:
        return 1.0
    # e^{|ln cf|} = max(cf, 1/cf), so the sigmoid reduces to 1 / (1 + 1/s)
    s = max(cf, 1.0 / cf)
    return 1.0 / (1.0 + 1.0 / s)


def _score(attribute: str, num: int, den: int, counts, defined: bool) -> CausalScore:
    """Score with ``CF = num / den`` for nonnegative integers ``num``, ``den``."""
    if not defined:
        return CausalScore(attribute, None, None, None, False, counts)
    if num == 0:
        return CausalScore(attribute, 0.0, LOG_ABS_OF_ZERO, 1.0, True, counts, math.inf)
    cf = num / den
    # computed from the reciprocal-symmetric ratio so exact ties score identically
    strength = max(num, den) / min(num, den)
    log_abs = math.log(strength)
    nc = 1.0 / (1.0 + 1.0 / strength)
    return CausalScore(attribute, cf, log_abs, nc, True, counts, strength)


def score_from_counts(attribute: str, counts: Sequence[int]) -> CausalScore:
    """Score from four-cell counts ``(n_m, n_m_pos, n_not_m, n_not_m_pos)``."""
    n_p, n_pp, n_a, n_ap = counts = tuple(int(c) for c in counts)
    defined = n_p > 0 and n_a > 0 and n_pp > 0
    # (n_ap / n_a) / (n_pp / n_p)
    return _score(attribute, n_ap * n_p, n_a * n_pp, counts, defined)


def exact_strength(counts: Sequence[int]) -> Fraction | None:
    """``max(CF, 1/CF)`` as a Fraction; None stands for CF = 0 (unbounded)."""
    n_p, n_pp, n_a, n_ap = (int(c) for c in counts)
    num, den = n_ap * n_p, n_a * n_pp
    if num == 0:
        return None
    return Fraction(max(num, den), min(num, den))


def _check(ctx: "FormalDecisionContext", m: str, scope: NodeScope) -> int:
    j = ctx.index_of(m)
    if m in scope.conditioned_attributes:
        raise InputError(f"attribute {m!r} is already conditioned in this scope")
    return j


def conditional_prob(ctx: "FormalDecisionContext", m: str, scope: NodeScope) -> Fraction | None:
    """``p(c | m)`` within ``scope``; ``None`` when no object in scope has ``m``."""
    _check(ctx, m, scope)
    n_p, n_pp, _, _ = ctx.counts(scope.objects, [m])[0]
    return Fraction(int(n_pp), int(n_p)) if n_p else None


def interventional_prob(
    ctx: "FormalDecisionContext", m: str, scope: NodeScope, adjust: Sequence[str] = ()
) -> Fraction | None:
    """Estimate of ``p(c | do(m))`` within ``scope``.

    The default estimator is ``p(c | m absent)``. ``adjust`` is experimental:
    it stratifies on the listed attributes and returns
    ``sum_z p(c | m absent, z) p(z)``, undefined if any populated stratum has
    no object lacking ``m``.
    """
    _check(ctx, m, scope)
    rows = np.asarray(scope.objects, dtype=np.intp)
    if not adjust:
        _, _, n_a, n_ap = ctx.counts(rows, [m])[0]
        return Fraction(int(n_ap), int(n_a)) if n_a else None
    if m in adjust:
        raise InputError("the adjustment set cannot contain the scored attribute")
    if rows.size == 0:
        return None
    has_m = ctx.column(m)[rows].astype(bool)
    dec = ctx.decision[rows].astype(bool)
    z = np.column_stack([ctx.column(a)[rows] for a in adjust]).astype(bool)
    total = Fraction(0)
    for stratum in product((False, True), repeat=len(adjust)):
        in_z = (z == np.array(stratum)).all(axis=1)
        n_z = int(in_z.sum())
        if n_z == 0:
            continue
        lacking = in_z & ~has_m
        n_lack = int(lacking.sum())
        if n_lack == 0:
            return None
        total += Fraction(int((lacking & dec).sum()), n_lack) * Fraction(n_z, rows.size)
    return total


def causal_factor(
    ctx: "FormalDecisionContext", m: str, scope: NodeScope, adjust: Sequence[str] = ()
) -> CausalScore:
    """Causal factor of ``m`` in ``scope`` with its normalized causality."""
    _check(ctx, m, scope)
    counts = ctx.counts(scope.objects, [m])[0]
    if not adjust:
        return score_from_counts(m, counts)
    p_do = interventional_prob(ctx, m, scope, adjust)
    p_m = conditional_prob(ctx, m, scope)
    if p_do is None or not p_m:
        return _score(m, 0, 1, counts, False)
    cf = p_do / p_m
    return _score(m, cf.numerator, cf.denominator, counts, True)


def rank_key(score: CausalScore, order: int) -> tuple:
    return (not score.defined, -score.strength, order)


def _settle_float_ties(scores: list[CausalScore], order: dict) -> list[CausalScore]:
    """Re-order runs of equal float strength by their exact ratios.

    Distinct ratios can round to the same float once counts grow large; the
    exact comparison keeps ranking faithful at any size.
    """
    out, i = [], 0
    while i < len(scores):
        j = i + 1
        while (j < len(scores) and scores[j].defined and scores[i].defined
               and scores[j].strength == scores[i].strength):
            j += 1
        run = scores[i:j]
        if len(run) > 1 and not math.isinf(run[0].strength):
            run.sort(key=lambda s: (-exact_strength(s.counts), order[s.attribute]))
        out.extend(run)
        i = j
    return out


def rank_attributes(
    ctx: "FormalDecisionContext",
    candidates: Iterable[str],
    scope: NodeScope,
    adjust: Sequence[str] = (),
) -> list[CausalScore]:
    """Score ``candidates`` in ``scope``, strongest first.

    Defined scores sort by NC descending with ties broken by attribute order
    in the context; undefined scores come last.
    """
    cands = sorted(set(candidates), key=ctx.index_of)
    if not cands:
        raise InputError("no candidate attributes to rank")
    for m in cands:
        _check(ctx, m, scope)
    if adjust:
        scores = [causal_factor(ctx, m, scope, adjust) for m in cands]
    else:
        counts = ctx.counts(scope.objects, cands).tolist()
        scores = [score_from_counts(m, c) for m, c in zip(cands, counts)]
    order = {m: ctx.index_of(m) for m in cands}
    ranked = sorted(scores, key=lambda s: rank_key(s, order[s.attribute]))
    return _settle_float_ties(ranked, order)
