"""Confusion-matrix metrics and leave-one-out evaluation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .cart import build_cart
from .context import RawDataset, build_context
from .errors import DegenerateDataError, InputError
from .structure import BuildParams, Prediction, build_structure

MODELS = ("3wcapos", "cart")


@dataclass(frozen=True)
class FoldRecord:
    index: int
    object: str
    prediction: Prediction
    truth: int
    fingerprint: str
    note: str | None = None

    def to_dict(self) -> dict:
        return {"index": self.index, "object": self.object,
                "prediction": self.prediction.to_dict(), "truth": self.truth,
                "fingerprint": self.fingerprint, "note": self.note}

    @classmethod
    def from_dict(cls, d) -> "FoldRecord":
        return cls(d["index"], d["object"], Prediction.from_dict(d["prediction"]),
                   d["truth"], d["fingerprint"], d.get("note"))


@dataclass(frozen=True)
class EvalReport:
    tp: int
    fp: int
    fn: int
    tn: int
    acc: float
    rec: float
    fpr: float
    pre: float
    f1: float
    # metrics whose denominator was zero (reported as 0)
    undefined: tuple[str, ...] = ()
    per_fold: tuple[FoldRecord, ...] = ()
    skipped: tuple[tuple[int, str], ...] = field(default=())

    @property
    def n(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def row(self) -> dict:
        return {"ACC": self.acc, "REC": self.rec, "FPR": self.fpr, "PRE": self.pre, "F1": self.f1}

    def to_dict(self) -> dict:
        return {
            "tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn,
            "acc": self.acc, "rec": self.rec, "fpr": self.fpr, "pre": self.pre, "f1": self.f1,
            "undefined": list(self.undefined),
            "per_fold": [r.to_dict() for r in self.per_fold],
            "skipped": [[i, why] for i, why in self.skipped],
        }

    @classmethod
    def from_dict(cls, d) -> "EvalReport":
        return cls(
            d["tp"], d["fp"], d["fn"], d["tn"], d["acc"], d["rec"], d["fpr"], d["pre"], d["f1"],
            tuple(d["undefined"]), tuple(FoldRecord.from_dict(r) for r in d["per_fold"]),
            tuple((i, why) for i, why in d["skipped"]),
        )


def _ratio(num: int, den: int, name: str, undefined: list) -> float:
    if den == 0:
        undefined.append(name)
        return 0.0
    return num / den


def metrics(preds: Sequence, truth: Sequence[int], per_fold=(), skipped=()) -> EvalReport:
    """ACC, REC, FPR, PRE and F1 from predicted and true binary labels.

    ``preds`` holds :class:`Prediction` objects or plain labels. A metric with
    a zero denominator is reported as 0 and named in ``undefined``.
    """
    if len(preds) != len(truth):
        raise InputError(f"{len(preds)} predictions for {len(truth)} labels")
    if not preds:
        raise InputError("no predictions to score")
    labels = [p.label if isinstance(p, Prediction) else int(p) for p in preds]
    tp = sum(1 for p, t in zip(labels, truth) if p == 1 and t == 1)
    fp = sum(1 for p, t in zip(labels, truth) if p == 1 and t == 0)
    fn = sum(1 for p, t in zip(labels, truth) if p == 0 and t == 1)
    tn = sum(1 for p, t in zip(labels, truth) if p == 0 and t == 0)
    undefined: list[str] = []
    acc = (tp + tn) / (tp + fp + fn + tn)
    rec = _ratio(tp, tp + fn, "rec", undefined)
    fpr = _ratio(fp, tn + fp, "fpr", undefined)
    pre = _ratio(tp, tp + fp, "pre", undefined)
    if rec + pre == 0:
        undefined.append("f1")
        f1 = 0.0
    else:
        f1 = 2 * rec * pre / (rec + pre)
    return EvalReport(tp, fp, fn, tn, acc, rec, fpr, pre, f1, tuple(undefined),
                      tuple(per_fold), tuple(skipped))


def _fit(model: str, ctx, params, bmap):
    if model == "3wcapos":
        return build_structure(ctx, params, bmap)
    if model == "cart":
        return build_cart(ctx, params, bmap)
    raise InputError(f"unknown model {model!r}; expected one of {MODELS}")


def loocv_compare(
    raw: RawDataset,
    params: BuildParams | None = None,
    models: Sequence[str] = MODELS,
    two_valued: str = "both",
    single_class: str = "constant",
) -> dict[str, EvalReport]:
    """Leave-one-out evaluation of several models on identical folds.

    Every fold re-binarizes the ``n - 1`` training rows (continuous cuts are
    searched again) and hands the same context to each model. A training
    split holding a single class either yields that constant prediction
    (``single_class="constant"``, noted on the fold record) or skips the fold
    (``single_class="skip"``); skipped folds are listed on the report.
    """
    params = params or BuildParams()
    if single_class not in ("constant", "skip"):
        raise InputError("single_class must be 'constant' or 'skip'")
    if raw.n_rows < 2:
        raise DegenerateDataError("leave-one-out needs at least two rows")
    if len(set(raw.decision)) != 2:
        raise DegenerateDataError("leave-one-out needs both classes present")
    for m in models:
        if m not in MODELS:
            raise InputError(f"unknown model {m!r}; expected one of {MODELS}")

    records = {m: [] for m in models}
    skipped = []
    for i in range(raw.n_rows):
        train = raw.without(i)
        note = None
        if len(set(train.decision)) < 2:
            if single_class == "skip":
                skipped.append((i, "training split holds a single class"))
                continue
            note = "single-class training split"
        try:
            ctx, bmap = build_context(train, two_valued)
            sample = bmap.apply(raw.row(i))
        except DegenerateDataError as exc:
            skipped.append((i, str(exc)))
            continue
        fp = ctx.fingerprint()
        for m in models:
            model = _fit(m, ctx, params, bmap)
            pred = model.predict(sample)
            records[m].append(FoldRecord(i, raw.row_labels[i], pred, raw.decision[i], fp, note))

    reports = {}
    for m in models:
        recs = records[m]
        if not recs:
            raise DegenerateDataError("every fold was skipped")
        reports[m] = metrics([r.prediction for r in recs], [r.truth for r in recs],
                             per_fold=recs, skipped=skipped)
    return reports


def loocv(raw: RawDataset, params: BuildParams | None = None, model: str = "3wcapos",
          two_valued: str = "both", single_class: str = "constant") -> EvalReport:
    """Leave-one-out report for a single model; see :func:`loocv_compare`."""
    return loocv_compare(raw, params, (model,), two_valued, single_class)[model]


def resubstitution(model, ctx) -> EvalReport:
    """Metrics of ``model`` re-applied to the context it was trained on."""
    preds = [model.predict(ctx.incidence[i]) for i in range(ctx.n_objects)]
    return metrics(preds, ctx.decision.tolist())
