"""DOT and JSON serialization of built trees."""

from __future__ import annotations

import datetime as _dt
import json
from dataclasses import dataclass

from .cart import CartNode, CartTree
from .causal import CausalScore, NodeScope
from .context import BinarizationMap
from .errors import InputError
from .evaluate import EvalReport
from .structure import BuildParams, Region, Structure, StructureNode, iter_nodes

FORMAT = "capos-tree/1"

_FILL = {"POSITIVE": "#b7e1a1", "NEGATIVE": "#f4a6a6", "BOUNDARY": "#f6e8a6"}


@dataclass(frozen=True)
class DiagramDoc:
    nodes: tuple[dict, ...]
    edges: tuple[tuple[int, int, str], ...]
    metadata: dict


def _model_name(model) -> str:
    if isinstance(model, Structure):
        return "3wcapos"
    if isinstance(model, CartTree):
        return "cart"
    raise InputError(f"cannot export {type(model).__name__}")


def _region(node) -> str:
    if isinstance(node, StructureNode):
        return node.region.value
    return "POSITIVE" if node.majority else "NEGATIVE"


def diagram(model) -> DiagramDoc:
    """Node and edge lists of ``model`` in pre-order."""
    name = _model_name(model)
    nodes, edges = [], []
    for n in iter_nodes(model.root):
        counts = f"n={n.size} pos={n.n_pos} v={n.positive_fraction:.3f}"
        if n.children is None:
            label = f"{_region(n) if name == '3wcapos' else 'leaf ' + str(n.majority)}\n{counts}"
        else:
            label = f"{n.split_attribute}\n{counts}"
        entry = {"id": n.id, "label": label, "region": _region(n), "size": n.size,
                 "positive_fraction": n.positive_fraction, "level": n.level}
        if name == "3wcapos" and n.score is not None:
            entry["nc"] = n.score.nc
        nodes.append(entry)
        if n.children is not None:
            edges.append((n.id, n.children[0].id, "absent"))
            edges.append((n.id, n.children[1].id, "present"))
    meta = {"model": name, "params": model.params.to_dict(), "fingerprint": model.fingerprint}
    return DiagramDoc(tuple(nodes), tuple(edges), meta)


def _q(text) -> str:
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def export_dot(model) -> str:
    """Graphviz ``digraph`` of ``model``; nodes filled by region, ranked by level."""
    doc = diagram(model)
    lines = [f"digraph {_q(doc.metadata['model'])} {{",
             f"  graph [fingerprint={_q(doc.metadata['fingerprint'])}];",
             "  node [shape=box, style=filled];"]
    for n in doc.nodes:
        attrs = [f"label={_q(n['label'])}", f"region={_q(n['region'])}",
                 f"fillcolor={_q(_FILL[n['region']])}", f"level={n['level']}"]
        if "nc" in n:
            attrs.append(f"nc={_q(repr(n['nc']))}")
        lines.append(f"  n{n['id']} [{', '.join(attrs)}];")
    for parent, child, branch in doc.edges:
        lines.append(f"  n{parent} -> n{child} [label={_q(branch)}];")
    levels: dict[int, list[int]] = {}
    for n in doc.nodes:
        levels.setdefault(n["level"], []).append(n["id"])
    for lvl in sorted(levels):
        if len(levels[lvl]) > 1:
            members = "; ".join(f"n{i}" for i in levels[lvl])
            lines.append(f"  {{ rank=same; {members}; }}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _node_dict(n, parent, branch) -> dict:
    d = {
        "id": n.id, "level": n.level, "parent": parent, "branch": branch,
        "objects": list(n.scope.objects),
        "conditioned": [[a, p] for a, p in n.scope.conditioned],
        "n_pos": n.n_pos, "size": n.size,
        "positive_fraction": n.positive_fraction,
        "split_attribute": n.split_attribute,
        "leaf_reason": n.leaf_reason,
        "children": None if n.children is None else [c.id for c in n.children],
    }
    if isinstance(n, StructureNode):
        d["region"] = n.region.value
        d["score"] = None if n.score is None else n.score.to_dict()
    else:
        d["impurity"] = n.impurity
        d["majority"] = n.majority
        d["split_impurity"] = n.split_impurity
    return d


def to_document(model, report: EvalReport | None = None, stamp: bool = False) -> dict:
    name = _model_name(model)
    nodes = []
    stack = [(model.root, None, None)]
    while stack:
        n, parent, branch = stack.pop()
        nodes.append(_node_dict(n, parent, branch))
        if n.children is not None:
            stack.append((n.children[1], n.id, "present"))
            stack.append((n.children[0], n.id, "absent"))
    doc = {
        "format": FORMAT,
        "model": name,
        "params": model.params.to_dict(),
        "attributes": list(model.attributes),
        "fingerprint": model.fingerprint,
        "binarization": None if model.binarization is None else model.binarization.to_dict(),
        "nodes": nodes,
    }
    if report is not None:
        doc["evaluation"] = report.to_dict()
    if stamp:
        doc["stamp"] = {"created": _dt.datetime.now(_dt.timezone.utc).isoformat()}
    return doc


def export_json(model, report: EvalReport | None = None, stamp: bool = False) -> str:
    """Self-describing JSON document; :func:`load_json` reverses it."""
    return json.dumps(to_document(model, report, stamp), indent=2, ensure_ascii=False) + "\n"


def load_json(text: str, with_report: bool = False):
    """Rebuild a :class:`Structure` or :class:`CartTree` from :func:`export_json` output.

    With ``with_report=True`` returns ``(model, report_or_None)``.
    """
    doc = json.loads(text)
    if doc.get("format") != FORMAT:
        raise InputError(f"not a {FORMAT} document")
    params = BuildParams(**doc["params"])
    by_id = {d["id"]: d for d in doc["nodes"]}
    is_cart = doc["model"] == "cart"

    def make(node_id):
        d = by_id[node_id]
        scope = NodeScope(tuple(d["objects"]), tuple((a, bool(p)) for a, p in d["conditioned"]))
        children = None if d["children"] is None else tuple(make(c) for c in d["children"])
        if is_cart:
            return CartNode(d["id"], d["level"], scope, d["n_pos"], d["impurity"], d["majority"],
                            d["split_attribute"], children, d["leaf_reason"], d["split_impurity"])
        score = None if d["score"] is None else CausalScore.from_dict(d["score"])
        return StructureNode(d["id"], d["level"], scope, d["n_pos"], Region(d["region"]),
                             d["split_attribute"], score, children, d["leaf_reason"])

    root = make(0)
    bmap = None if doc["binarization"] is None else BinarizationMap.from_dict(doc["binarization"])
    cls = CartTree if is_cart else Structure
    model = cls(root, params, tuple(doc["attributes"]), doc["fingerprint"], bmap)
    if with_report:
        ev = doc.get("evaluation")
        return model, None if ev is None else EvalReport.from_dict(ev)
    return model
