"""Command-line interface.

    capos binarize DATA            binarization rules and extent sizes
    capos rank DATA                causal factor table of all attributes
    capos build DATA               grow a structure (optionally --dot/--json)
    capos evaluate DATA --loocv    leave-one-out metrics (optionally --baseline cart)
    capos predict --model M --input ROWS

Exit codes: 0 success, 1 input error, 2 degenerate data.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import datasets
from .cart import build_cart
from .causal import NodeScope, rank_attributes
from .context import Schema, binarization_report, build_context, parse_dataset
from .errors import CaposError, InputError
from .evaluate import loocv_compare
from .export import export_dot, export_json, load_json, to_document
from .structure import BuildParams, build_structure


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _split_list(value: str | None) -> tuple[str, ...]:
    if not value:
        return ()
    return tuple(v.strip() for v in value.split(",") if v.strip())


def _data_options(p):
    p.add_argument("data", help="delimited text file, or fixture:<name> for a bundled fixture")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--decision", help="decision column (default: last column)")
    p.add_argument("--positive-label", help="decision value mapped to 1")
    p.add_argument("--discrete", help="comma-separated columns to treat as discrete")
    p.add_argument("--continuous", help="comma-separated columns to treat as continuous")
    p.add_argument("--id", dest="id_column", help="column holding object labels")
    p.add_argument("--ignore", help="comma-separated columns to leave out")
    p.add_argument("--two-valued", choices=("both", "indicator"), default="both",
                   help="emit both attributes of a two-valued discrete column, or one indicator")
    p.add_argument("--format", choices=("text", "json"), default="text")


def _params_options(p):
    p.add_argument("--alpha", type=float, default=BuildParams.alpha)
    p.add_argument("--beta", type=float, default=BuildParams.beta)
    p.add_argument("--min-split", type=int, default=BuildParams.min_split)
    p.add_argument("--max-depth", type=int, default=None)
    p.add_argument("--strict-purity", action="store_true", help="alpha=1, beta=0")


def _params(args) -> BuildParams:
    if args.strict_purity:
        return BuildParams.strict(args.min_split, args.max_depth)
    return BuildParams(args.alpha, args.beta, args.min_split, args.max_depth)


def _load(args):
    if args.data.startswith("fixture:"):
        name = args.data.split(":", 1)[1]
        base = datasets.FIXTURES.get(name)
        if base is None:
            raise InputError(f"unknown fixture {name!r}; choose from {sorted(datasets.FIXTURES)}")
        text = datasets.fixture_text(name)
    else:
        base = Schema()
        try:
            text = Path(args.data).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {args.data}: {exc}") from None
    schema = Schema(
        decision=args.decision or base.decision,
        positive_label=args.positive_label or base.positive_label,
        discrete=_split_list(args.discrete) or base.discrete,
        continuous=_split_list(args.continuous) or base.continuous,
        id_column=args.id_column or base.id_column,
        ignore=_split_list(args.ignore) or base.ignore,
        delimiter=args.delimiter,
    )
    raw = parse_dataset(text, schema)
    if raw.dropped_rows:
        print(f"note: dropped {raw.dropped_rows} row(s) with missing values", file=sys.stderr)
    return raw


def _emit(args, payload, text):
    if args.format == "json":
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print(text)


def cmd_binarize(args):
    raw = _load(args)
    ctx, bmap = build_context(raw, args.two_valued)
    rows = binarization_report(ctx, bmap)
    if args.output:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["object", *ctx.attributes, ctx.decision_name])
        for label, inc, d in zip(ctx.objects, ctx.incidence.tolist(), ctx.decision.tolist()):
            w.writerow([label, *inc, d])
        Path(args.output).write_text(buf.getvalue())
    width = max([len(r["attribute"]) for r in rows] + [9])
    lines = [f"{'attribute':<{width}}  {'rule':<9}  {'source':<12}  g(m)"]
    for r in rows:
        lines.append(f"{r['attribute']:<{width}}  {r['kind']:<9}  {r['source']:<12}  {r['extent_size']}")
    for col, why in bmap.dropped:
        lines.append(f"dropped {col}: {why}")
    _emit(args, {"attributes": rows, "dropped": [list(d) for d in bmap.dropped],
                 "objects": ctx.n_objects}, "\n".join(lines))


def cmd_rank(args):
    raw = _load(args)
    ctx, _ = build_context(raw, args.two_valued)
    if not ctx.attributes:
        raise InputError("no binary attributes to rank")
    scores = rank_attributes(ctx, ctx.attributes, NodeScope.full(ctx))
    width = max([len(s.attribute) for s in scores] + [9])
    lines = [f"{'attribute':<{width}}  {'CF':>7}  {'|log CF|':>8}  {'NC':>6}"]
    for s in scores:
        if s.defined:
            log_abs = "inf" if s.cf == 0 else f"{s.log_abs:.3f}"
            lines.append(f"{s.attribute:<{width}}  {s.cf:7.3f}  {log_abs:>8}  {s.nc:6.3f}")
        else:
            lines.append(f"{s.attribute:<{width}}  {'undef':>7}  {'undef':>8}  {'undef':>6}")
    _emit(args, [s.to_dict() for s in scores], "\n".join(lines))


def _summary_text(model) -> str:
    lines = [f"{'level':>5}  {'node':>4}  {'split':<24}  {'size':>5}  {'v':>6}  region / leaf"]
    for n in model.nodes():
        region = getattr(n, "region", None)
        tag = region.value if region is not None else f"majority={n.majority}"
        if n.children is None:
            tag += f" ({n.leaf_reason})"
        lines.append(f"{n.level:>5}  {n.id:>4}  {n.split_attribute or '-':<24}  {n.size:>5}  "
                     f"{n.positive_fraction:6.3f}  {tag}")
    return "\n".join(lines)


def cmd_build(args):
    raw = _load(args)
    ctx, bmap = build_context(raw, args.two_valued)
    params = _params(args)
    model = (build_cart if args.baseline == "cart" else build_structure)(ctx, params, bmap)
    if args.dot:
        Path(args.dot).write_text(export_dot(model))
    if args.json:
        Path(args.json).write_text(export_json(model, stamp=args.stamp))
    _emit(args, to_document(model, stamp=args.stamp), _summary_text(model))


def cmd_evaluate(args):
    if not args.loocv:
        raise InputError("only --loocv evaluation is supported")
    raw = _load(args)
    models = ["3wcapos"] + (["cart"] if args.baseline == "cart" else [])
    reports = loocv_compare(raw, _params(args), models, args.two_valued)
    lines = [f"{'method':<8}  {'ACC':>5}  {'REC':>5}  {'FPR':>5}  {'PRE':>5}  {'F1':>5}"]
    for m, rep in reports.items():
        vals = "  ".join(f"{v:5.3f}" for v in rep.row().values())
        lines.append(f"{m.upper():<8}  {vals}")
        if rep.undefined:
            lines.append(f"  undefined (reported as 0): {', '.join(rep.undefined)}")
    skipped = next(iter(reports.values())).skipped
    if skipped:
        lines.append(f"skipped folds: {len(skipped)}")
    payload = {m: rep.to_dict() for m, rep in reports.items()}
    if args.json:
        Path(args.json).write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
    _emit(args, payload, "\n".join(lines))


def cmd_predict(args):
    try:
        model = load_json(Path(args.model).read_text())
        text = Path(args.input).read_text()
    except OSError as exc:
        raise InputError(str(exc)) from None
    rows = list(csv.DictReader(io.StringIO(text), delimiter=args.delimiter))
    if not rows:
        raise InputError("no input rows")
    binary_input = all(a in rows[0] for a in model.attributes)
    if not binary_input and model.binarization is None:
        raise InputError("model has no binarization map; input must give binary attributes")
    out = []
    for i, row in enumerate(rows, 1):
        row = {k.strip(): (v or "").strip() for k, v in row.items() if k is not None}
        if binary_input:
            sample = {}
            for a in model.attributes:
                if row[a] not in ("0", "1"):
                    raise InputError(f"row {i}: attribute {a!r} must be 0 or 1")
                sample[a] = int(row[a])
        else:
            sample = model.binarization.apply(row)
        pred = model.predict(sample)
        out.append({"row": i, **pred.to_dict()})
    text = "\n".join(
        f"{p['row']}\t{p['label']}\tleaf={p['leaf_id']}\t"
        + " ".join(f"{a}={'+' if v else '-'}" for a, v in p["trace"])
        for p in out
    )
    _emit(args, out, text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="capos", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("binarize", help="convert a table into binary attributes")
    _data_options(p)
    p.add_argument("--output", help="write the binary context as CSV")
    p.set_defaults(func=cmd_binarize)

    p = sub.add_parser("rank", help="causal factor ranking of all attributes")
    _data_options(p)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("build", help="build a structure")
    _data_options(p)
    _params_options(p)
    p.add_argument("--baseline", choices=("cart",), help="build the CART baseline instead")
    p.add_argument("--dot", help="write a Graphviz file")
    p.add_argument("--json", help="write the JSON model")
    p.add_argument("--stamp", action="store_true", help="add a creation timestamp to exports")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("evaluate", help="leave-one-out evaluation")
    _data_options(p)
    _params_options(p)
    p.add_argument("--loocv", action="store_true")
    p.add_argument("--baseline", choices=("cart",), help="also evaluate CART")
    p.add_argument("--json", help="write the full report (with per-fold traces)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("predict", help="classify rows with a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--delimiter", default=",")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_predict)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except CaposError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
