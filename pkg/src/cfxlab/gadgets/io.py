"""Gadget serialization: the model JSON schema plus ``gadget`` and
``encoding`` blocks."""

import json

from .._rational import as_fraction, format_fraction
from ..exceptions import ParseError
from ..models.io import model_from_dict, model_to_dict
from .build import GadgetInstance
from .cnf import CnfFormula


def gadget_to_dict(g):
    out = model_to_dict(g.regressor)
    out["gadget"] = {
        "kind": g.kind,
        "M": format_fraction(g.M),
        "c": g.c,
        "x_orig": str(g.x_orig),
        "y_cf": 0,
        "lambda": 1,
        "num_vars": g.cnf.num_vars,
        "clauses": [list(c) for c in g.cnf.clauses],
    }
    out["encoding"] = g.encoding
    return out


def gadget_from_dict(data):
    try:
        meta = data["gadget"]
        body = {k: v for k, v in data.items() if k not in ("gadget", "encoding")}
        model = model_from_dict(body)
        cnf = CnfFormula(int(meta["num_vars"]), tuple(tuple(c) for c in meta["clauses"]))
        return GadgetInstance(meta["kind"], cnf, model, as_fraction(meta["M"]), dict(data.get("encoding", {})))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed gadget file: {exc}") from None


def dumps_gadget(g, **kwargs):
    return json.dumps(gadget_to_dict(g), **kwargs)


def load_gadget(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from None
    return gadget_from_dict(data)
