"""Formal decision contexts and conversion of raw tables into them.

A raw table is parsed into a :class:`RawDataset` of typed columns. Each
column is then turned into binary attributes: 0/1 columns pass through,
discrete columns are one-hot expanded, and continuous columns are cut once at
the midpoint whose induced attribute has the largest normalized causality.
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from . import kernels
from .errors import DegenerateDataError, InputError

MISSING = frozenset({"", "?", "na", "n/a", "nan", "null", "none"})
TRUTHY = ("1", "yes", "y", "true", "t", "positive", "pos")

DISCRETE = "discrete"
CONTINUOUS = "continuous"


@dataclass(frozen=True)
class RawColumn:
    name: str
    kind: str
    values: tuple

    def distinct(self) -> list:
        """Distinct values in natural order (numeric when possible)."""
        return _natural_sort(set(self.values))


@dataclass(frozen=True)
class Schema:
    """Column typing and decision selection for :func:`parse_dataset`.

    Columns not listed in ``discrete`` or ``continuous`` are auto-typed:
    continuous when every value parses as a number, discrete otherwise.
    ``decision`` defaults to the last column.
    """

    decision: str | None = None
    positive_label: str | None = None
    discrete: tuple[str, ...] = ()
    continuous: tuple[str, ...] = ()
    id_column: str | None = None
    ignore: tuple[str, ...] = ()
    delimiter: str = ","


@dataclass(frozen=True)
class RawDataset:
    columns: tuple[RawColumn, ...]
    decision_name: str
    decision: tuple[int, ...]
    positive_label: str
    row_labels: tuple[str, ...]
    dropped_rows: int = 0

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    @property
    def n_rows(self) -> int:
        return len(self.decision)

    def column(self, name: str) -> RawColumn:
        for c in self.columns:
            if c.name == name:
                return c
        raise InputError(f"unknown column {name!r}")

    def row(self, i: int) -> dict:
        return {c.name: c.values[i] for c in self.columns}

    def subset(self, indices: Sequence[int]) -> "RawDataset":
        idx = list(indices)
        cols = tuple(
            RawColumn(c.name, c.kind, tuple(c.values[i] for i in idx)) for c in self.columns
        )
        return RawDataset(
            columns=cols,
            decision_name=self.decision_name,
            decision=tuple(self.decision[i] for i in idx),
            positive_label=self.positive_label,
            row_labels=tuple(self.row_labels[i] for i in idx),
        )

    def without(self, i: int) -> "RawDataset":
        return self.subset([j for j in range(self.n_rows) if j != i])


def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def _natural_sort(values: Iterable) -> list:
    values = list(values)
    if all(isinstance(v, (int, float)) or _is_number(str(v)) for v in values):
        return sorted(values, key=lambda v: (float(v), str(v)))
    return sorted(values, key=str)


def _truthy_value(values: Iterable[str]) -> str | None:
    lowered = {str(v).strip().lower(): v for v in values}
    for token in TRUTHY:
        if token in lowered:
            return lowered[token]
    return None


def parse_dataset(text: str, schema: Schema | None = None) -> RawDataset:
    """Parse delimiter-separated ``text`` (header row first) into a RawDataset.

    Rows with a missing entry in any used column are dropped and counted in
    ``dropped_rows``. The decision column must hold exactly two distinct
    values; the one named by ``schema.positive_label`` maps to 1. Without a
    declared label a conventional true-ish token (``1``, ``yes``, ``T`` ...)
    is used.
    """
    schema = schema or Schema()
    reader = csv.reader(io.StringIO(text), delimiter=schema.delimiter)
    lines = [(n, [cell.strip() for cell in row]) for n, row in enumerate(reader, 1)]
    lines = [(n, row) for n, row in lines if any(row)]
    if not lines:
        raise InputError("empty input")
    _, header = lines[0]
    if len(set(header)) != len(header):
        raise InputError("duplicate column names in header")
    decision = schema.decision or header[-1]
    for name in (decision, schema.id_column, *schema.discrete, *schema.continuous, *schema.ignore):
        if name is not None and name not in header:
            raise InputError(f"unknown column {name!r}")
    overlap = set(schema.discrete) & set(schema.continuous)
    if overlap:
        raise InputError(f"columns declared both discrete and continuous: {sorted(overlap)}")

    skip = {schema.id_column, *schema.ignore}
    used = [j for j, name in enumerate(header) if name not in skip]
    rows, labels, dropped = [], [], 0
    for n, row in lines[1:]:
        if len(row) != len(header):
            raise InputError(f"line {n}: expected {len(header)} fields, got {len(row)}")
        if any(row[j].lower() in MISSING for j in used):
            dropped += 1
            continue
        rows.append(row)
        labels.append(row[header.index(schema.id_column)] if schema.id_column else str(len(rows)))

    d_idx = header.index(decision)
    raw_decision = [r[d_idx] for r in rows]
    distinct = sorted(set(raw_decision))
    if len(distinct) != 2:
        raise DegenerateDataError(
            f"decision column {decision!r} has {len(distinct)} distinct value(s); exactly 2 required"
        )
    positive = schema.positive_label
    if positive is None:
        positive = _truthy_value(distinct)
        if positive is None:
            raise InputError(
                f"cannot infer the positive label among {distinct}; declare it explicitly"
            )
    elif positive not in distinct:
        raise InputError(f"positive label {positive!r} not among decision values {distinct}")

    columns = []
    for j, name in enumerate(header):
        if name in skip or j == d_idx:
            continue
        cells = [r[j] for r in rows]
        if name in schema.discrete:
            kind = DISCRETE
        elif name in schema.continuous:
            kind = CONTINUOUS
        else:
            kind = CONTINUOUS if cells and all(_is_number(c) for c in cells) else DISCRETE
        if kind == CONTINUOUS:
            try:
                values = tuple(float(c) for c in cells)
            except ValueError as exc:
                raise InputError(f"column {name!r} is declared continuous: {exc}") from None
            if not all(math.isfinite(v) for v in values):
                raise InputError(f"column {name!r} holds non-finite values")
        else:
            values = tuple(cells)
        columns.append(RawColumn(name, kind, values))

    return RawDataset(
        columns=tuple(columns),
        decision_name=decision,
        decision=tuple(int(v == positive) for v in raw_decision),
        positive_label=positive,
        row_labels=tuple(labels),
        dropped_rows=dropped,
    )


@dataclass(frozen=True, eq=False)
class FormalDecisionContext:
    """Objects x binary attributes incidence with one binary decision.

    Object sets are handled as sets of row indices; ``objects`` maps an index
    to its display label.
    """

    objects: tuple[str, ...]
    attributes: tuple[str, ...]
    incidence: np.ndarray
    decision: np.ndarray
    decision_name: str = "decision"
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        inc = np.array(self.incidence, dtype=np.uint8).reshape(len(self.objects), len(self.attributes))
        dec = np.array(self.decision, dtype=np.uint8).reshape(len(self.objects))
        if inc.size and inc.max() > 1 or dec.size and dec.max() > 1:
            raise InputError("incidence and decision entries must be 0 or 1")
        if len(set(self.attributes)) != len(self.attributes):
            raise InputError("attribute names must be unique")
        inc.setflags(write=False)
        dec.setflags(write=False)
        object.__setattr__(self, "incidence", inc)
        object.__setattr__(self, "decision", dec)
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "attributes", tuple(self.attributes))
        object.__setattr__(self, "_index", {a: i for i, a in enumerate(self.attributes)})

    @classmethod
    def from_rows(cls, attributes, rows, decision, objects=None, decision_name="decision"):
        rows = np.asarray(rows, dtype=np.uint8).reshape(len(decision), len(attributes))
        if objects is None:
            objects = [str(i + 1) for i in range(len(decision))]
        return cls(tuple(objects), tuple(attributes), rows, np.asarray(decision), decision_name)

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    def index_of(self, attribute: str) -> int:
        try:
            return self._index[attribute]
        except KeyError:
            raise InputError(f"unknown attribute {attribute!r}") from None

    def column(self, attribute: str) -> np.ndarray:
        return self.incidence[:, self.index_of(attribute)]

    def extent(self, attrs: Iterable[str]) -> frozenset[int]:
        """Objects having every attribute in ``attrs`` (all objects for none)."""
        mask = np.ones(self.n_objects, dtype=bool)
        for a in attrs:
            mask &= self.column(a).astype(bool)
        return frozenset(np.flatnonzero(mask).tolist())

    def intent(self, objs: Iterable[int]) -> frozenset[str]:
        """Attributes shared by every object in ``objs`` (all attributes for none)."""
        objs = list(objs)
        for g in objs:
            if not 0 <= g < self.n_objects:
                raise InputError(f"unknown object index {g!r}")
        shared = self.incidence[objs].all(axis=0) if objs else np.ones(self.n_attributes, bool)
        return frozenset(a for a, keep in zip(self.attributes, shared) if keep)

    def counts(self, rows: Sequence[int], attrs: Sequence[str]) -> np.ndarray:
        cols = [self.index_of(a) for a in attrs]
        return kernels.cell_counts(self.incidence, self.decision, rows, cols)

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update("\x1f".join(self.attributes).encode())
        h.update(b"\x1e")
        h.update(np.ascontiguousarray(self.incidence).tobytes())
        h.update(np.ascontiguousarray(self.decision).tobytes())
        return h.hexdigest()


IDENTITY = "identity"
ONE_HOT = "one_hot"
THRESHOLD = "threshold"


@dataclass(frozen=True)
class Rule:
    kind: str
    source: str
    attribute: str
    value: str | None = None
    threshold: float | None = None

    def apply(self, raw_value) -> int:
        if self.kind == IDENTITY:
            return int(_as_binary(raw_value))
        if self.kind == ONE_HOT:
            return int(str(raw_value) == self.value)
        if self.kind == THRESHOLD:
            return int(float(raw_value) >= self.threshold)
        raise InputError(f"unknown rule kind {self.kind!r}")

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "source": self.source, "attribute": self.attribute}
        if self.value is not None:
            d["value"] = self.value
        if self.threshold is not None:
            d["threshold"] = self.threshold
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "Rule":
        return cls(d["kind"], d["source"], d["attribute"], d.get("value"), d.get("threshold"))


@dataclass(frozen=True)
class BinarizationMap:
    """Rules turning a raw row into binary attributes, one rule per attribute."""

    rules: tuple[Rule, ...] = ()
    dropped: tuple[tuple[str, str], ...] = ()

    @property
    def attributes(self) -> tuple[str, ...]:
        return tuple(r.attribute for r in self.rules)

    @property
    def sources(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(r.source for r in self.rules))

    def apply(self, row: Mapping) -> np.ndarray:
        """Binary vector (aligned with :attr:`attributes`) for a raw row."""
        out = np.zeros(len(self.rules), dtype=np.uint8)
        for k, rule in enumerate(self.rules):
            if rule.source not in row:
                raise InputError(f"sample lacks column {rule.source!r}")
            value = row[rule.source]
            if str(value).strip().lower() in MISSING:
                raise InputError(f"sample has a missing value in column {rule.source!r}")
            try:
                out[k] = rule.apply(value)
            except ValueError:
                raise InputError(f"column {rule.source!r}: cannot apply {rule.kind} to {value!r}") from None
        return out

    def to_dict(self) -> dict:
        return {
            "rules": [r.to_dict() for r in self.rules],
            "dropped": [[c, why] for c, why in self.dropped],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "BinarizationMap":
        return cls(
            tuple(Rule.from_dict(r) for r in d["rules"]),
            tuple((c, why) for c, why in d.get("dropped", ())),
        )


def _as_binary(v) -> bool:
    if isinstance(v, str):
        v = v.strip()
        if v in ("0", "1"):
            return v == "1"
        return float(v) == 1.0
    return float(v) == 1.0


def _is_binary_column(col: RawColumn) -> bool:
    try:
        return set(float(v) for v in col.values) <= {0.0, 1.0} and (
            col.kind == CONTINUOUS or set(col.values) <= {"0", "1"}
        )
    except ValueError:
        return False


def binarize_discrete(col: RawColumn) -> list[tuple[str, np.ndarray]]:
    """One binary attribute ``<column>_<value>`` per distinct value."""
    if not col.values:
        raise DegenerateDataError(f"column {col.name!r} is empty")
    values = np.array([str(v) for v in col.values])
    return [
        (f"{col.name}_{v}", (values == str(v)).astype(np.uint8)) for v in col.distinct()
    ]


class Cut(NamedTuple):
    attribute: str
    column: np.ndarray
    threshold: float
    nc: float


def threshold_name(source: str, threshold: float) -> str:
    return f"{source}≥{threshold!r}"


def binarize_continuous(col: RawColumn, decision: Sequence[int]) -> Cut:
    """Single cut ``value >= s`` maximizing normalized causality.

    Candidate cuts are the midpoints between consecutive distinct values.
    Candidates with undefined causal factor are skipped. Among cuts of equal
    strength the one with the higher positive rate above the cut wins, then
    the smallest threshold.
    """
    from .causal import exact_strength, score_from_counts

    values = np.asarray(col.values, dtype=np.float64)
    decision = np.asarray(decision, dtype=np.uint8)
    if values.shape != decision.shape:
        raise InputError("column and decision lengths differ")
    if decision.size == 0 or decision.min() == decision.max():
        raise DegenerateDataError(f"column {col.name!r}: decision has a single class")
    thresholds, counts = kernels.threshold_counts(values, decision)
    if thresholds.size == 0:
        raise DegenerateDataError(f"column {col.name!r}: all values identical")
    n_p, n_pp, n_a, n_ap = counts.T.astype(np.float64)
    defined = (n_p > 0) & (n_a > 0) & (n_pp > 0)
    if not defined.any():
        raise DegenerateDataError(f"column {col.name!r}: no cut has a defined causal factor")
    num, den = n_ap * n_p, n_a * n_pp
    with np.errstate(divide="ignore", invalid="ignore"):
        strength = np.where(num == 0, np.inf, np.maximum(num, den) / np.minimum(num, den))
    strength[~defined] = -np.inf
    # float screening, then an exact comparison among the near-maximal cuts;
    # equal strength prefers the purer present side, then the smaller threshold
    top = strength.max()
    floor = top if np.isinf(top) else top * (1 - 1e-9)
    best_i, best_key = None, None
    for i in np.flatnonzero(strength >= floor).tolist():
        c = counts[i].tolist()
        exact = exact_strength(c)
        key = (math.inf if exact is None else exact, Fraction(c[1], c[0]))
        if best_key is None or key > best_key:
            best_i, best_key = i, key
    s = float(thresholds[best_i])
    nc = score_from_counts("", counts[best_i]).nc
    return Cut(threshold_name(col.name, s), (values >= s).astype(np.uint8), s, nc)


def build_context(
    raw: RawDataset, two_valued: str = "both"
) -> tuple[FormalDecisionContext, BinarizationMap]:
    """Convert ``raw`` into a formal decision context.

    0/1 columns become one attribute each; discrete columns are one-hot
    expanded; continuous columns get one threshold cut. With
    ``two_valued="indicator"`` a discrete column with exactly two values emits
    a single attribute for its true-ish value (or the value of the first row).
    Continuous columns that admit no usable cut are dropped and listed in
    ``BinarizationMap.dropped``.
    """
    if two_valued not in ("both", "indicator"):
        raise InputError(f"two_valued must be 'both' or 'indicator', not {two_valued!r}")
    rules, cols, dropped = [], [], []
    for col in raw.columns:
        if _is_binary_column(col):
            rules.append(Rule(IDENTITY, col.name, col.name))
            cols.append(np.array([_as_binary(v) for v in col.values], dtype=np.uint8))
        elif col.kind == DISCRETE:
            expanded = binarize_discrete(col)
            distinct = col.distinct()
            if two_valued == "indicator" and len(distinct) == 2:
                keep = _truthy_value(distinct) or col.values[0]
                expanded = [e for e, v in zip(expanded, distinct) if v == keep]
                distinct = [keep]
            for (name, column), v in zip(expanded, distinct):
                rules.append(Rule(ONE_HOT, col.name, name, value=str(v)))
                cols.append(column)
        else:
            try:
                cut = binarize_continuous(col, raw.decision)
            except DegenerateDataError as exc:
                dropped.append((col.name, str(exc)))
                continue
            rules.append(Rule(THRESHOLD, col.name, cut.attribute, threshold=cut.threshold))
            cols.append(cut.column)
    names = [r.attribute for r in rules]
    if len(set(names)) != len(names):
        raise InputError("binarization produced duplicate attribute names")
    incidence = np.column_stack(cols) if cols else np.zeros((raw.n_rows, 0), dtype=np.uint8)
    ctx = FormalDecisionContext(
        raw.row_labels, tuple(names), incidence, np.asarray(raw.decision), raw.decision_name
    )
    return ctx, BinarizationMap(tuple(rules), tuple(dropped))


def context_from_binary(raw: RawDataset) -> FormalDecisionContext:
    """Context of a dataset whose condition columns are all 0/1."""
    ctx, bmap = build_context(raw)
    if any(r.kind != IDENTITY for r in bmap.rules):
        raise InputError("dataset has non-binary columns")
    return ctx


def binarization_report(ctx: FormalDecisionContext, bmap: BinarizationMap) -> list[dict]:
    """One row per binary attribute: rule, source column and extent size."""
    sizes = ctx.incidence.sum(axis=0)
    out = []
    for rule, size in zip(bmap.rules, sizes):
        row = rule.to_dict()
        row["extent_size"] = int(size)
        out.append(row)
    return out
