"""JSON (de)serialization of models.

Schema: ``{"kind": ..., "dim": int, ...}`` with rationals written as ints
or ``"p/q"`` strings. ``model_from_dict(model_to_dict(m)) == m`` for every
model.
"""

import json

from .._rational import as_fraction, format_fraction
from ..exceptions import ParseError
from .diagrams import DecisionList, DecisionTree, Fbdd
from .ensemble import Ensemble
from .knn import KnnRegressor
from .linear import Perceptron, ReluNetwork
from .trees import AdditiveTreeModel

KINDS = ("fbdd", "dt", "dl", "perceptron", "relu", "knn", "atm", "ensemble")


def _fmt_vec(values):
    return [format_fraction(v) for v in values]


def model_to_dict(model):
    kind = model.kind
    out = {"kind": kind, "dim": model.dim}
    if kind in ("fbdd", "dt"):
        out["root"] = model.root
        out["nodes"] = [
            {"id": nid, "var": v, "low": lo, "high": hi}
            for nid, (v, lo, hi) in sorted(model.nodes.items())
        ]
        out["leaves"] = [
            {"id": lid, "value": format_fraction(val)} for lid, val in sorted(model.leaves.items())
        ]
    elif kind == "dl":
        out["rules"] = [
            {"literals": [[v, b] for v, b in lits], "label": label} for lits, label in model.rules
        ]
        out["default"] = model.default
    elif kind == "perceptron":
        out["weights"] = _fmt_vec(model.weights)
        out["bias"] = format_fraction(model.bias)
    elif kind == "relu":
        out["layers"] = [
            {"weights": [_fmt_vec(row) for row in W], "bias": _fmt_vec(b)} for W, b in model.layers
        ]
        out["classifier"] = model.classifier
    elif kind == "knn":
        out["vectors"] = [_fmt_vec(v) for v in model.vectors]
        out["labels"] = _fmt_vec(model.labels)
        out["k"] = model.k
    elif kind == "atm":
        out["trees"] = [model_to_dict(t) for t in model.trees]
    elif kind == "ensemble":
        out["aggregation"] = model.aggregation
        out["members"] = [model_to_dict(m) for m in model.members]
    else:
        raise ValueError(f"cannot serialize model kind {kind!r}")
    return out


def _rat(value, where):
    try:
        return as_fraction(value)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where}: {exc}") from None


def _require(data, key, where):
    if key not in data:
        raise ParseError(f"{where}: missing field {key!r}")
    return data[key]


def model_from_dict(data, where="model"):
    if not isinstance(data, dict):
        raise ParseError(f"{where}: expected an object")
    kind = _require(data, "kind", where)
    if kind not in KINDS:
        raise ParseError(f"{where}: unknown model kind {kind!r}")
    try:
        if kind in ("fbdd", "dt"):
            cls = Fbdd if kind == "fbdd" else DecisionTree
            nodes = {
                int(n["id"]): (int(n["var"]), int(n["low"]), int(n["high"]))
                for n in _require(data, "nodes", where)
            }
            leaves = {
                int(l["id"]): _rat(l["value"], where) for l in _require(data, "leaves", where)
            }
            model = cls(int(_require(data, "dim", where)), int(_require(data, "root", where)), nodes, leaves)
        elif kind == "dl":
            rules = [
                ([(int(v), int(b)) for v, b in r["literals"]], int(r["label"]))
                for r in _require(data, "rules", where)
            ]
            model = DecisionList(int(_require(data, "dim", where)), rules, int(data.get("default", 0)))
        elif kind == "perceptron":
            model = Perceptron(
                [_rat(w, where) for w in _require(data, "weights", where)],
                _rat(data.get("bias", 0), where),
            )
        elif kind == "relu":
            layers = [
                ([[_rat(v, where) for v in row] for row in layer["weights"]],
                 [_rat(v, where) for v in layer["bias"]])
                for layer in _require(data, "layers", where)
            ]
            model = ReluNetwork(int(_require(data, "dim", where)), layers, bool(data.get("classifier", False)))
        elif kind == "knn":
            model = KnnRegressor(
                [[_rat(v, where) for v in vec] for vec in _require(data, "vectors", where)],
                [_rat(v, where) for v in _require(data, "labels", where)],
                int(data.get("k", 1)),
            )
        elif kind == "atm":
            trees = [model_from_dict(t, f"{where}.trees[{i}]") for i, t in enumerate(_require(data, "trees", where))]
            if any(not isinstance(t, DecisionTree) for t in trees):
                raise ParseError(f"{where}: additive tree members must have kind 'dt'")
            model = AdditiveTreeModel(trees)
        else:
            members = [
                model_from_dict(m, f"{where}.members[{i}]")
                for i, m in enumerate(_require(data, "members", where))
            ]
            model = Ensemble(members, data.get("aggregation", "majority"))
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{where}: malformed {kind} model ({exc})") from None
    if "dim" in data and model.dim != int(data["dim"]):
        raise ParseError(f"{where}: declared dim {data['dim']} but model has dimension {model.dim}")
    return model


def dumps_model(model, **kwargs):
    return json.dumps(model_to_dict(model), **kwargs)


def loads_model(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return model_from_dict(data)


def load_model(path):
    with open(path) as fh:
        return loads_model(fh.read())
