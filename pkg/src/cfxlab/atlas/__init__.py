"""Registry of known complexity classes for explanation problems.

Keys are ``(model family, problem kind, ensemble flag)``. Cells without a
known result come back as an explicit ``unknown`` record.
"""

import json
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from importlib import resources

MODEL_FAMILIES = (
    "any",
    "monotonic",
    "knn",
    "gnn",
    "perceptron",
    "relu",
    "extended-linear",
    "dt",
    "dl",
    "fbdd",
    "additive-trees",
    "random-forest",
)
PROBLEMS = (
    "classic-single",
    "classic-enumerate",
    "robust",
    "plausible",
    "global",
    "msr",
    "plausible-msr",
    "mca",
)
CLASSES = ("PTIME", "NP-hard", "NP-complete", "Σ2p-complete", "Dp-complete", "unknown")

_MODEL_ALIASES = {
    "relu-net": "relu",
    "relu-network": "relu",
    "mlp": "relu",
    "decision-tree": "dt",
    "decision-list": "dl",
    "knn-regressor": "knn",
    "additive-tree": "additive-trees",
    "atm": "additive-trees",
    "rf": "random-forest",
    "linear": "perceptron",
}
_PROBLEM_ALIASES = {
    "classic": "classic-single",
    "classic-cf": "classic-single",
    "single": "classic-single",
    "enumerate": "classic-enumerate",
    "robust-cf": "robust",
    "plausible-mcr": "plausible",
    "plausible-cf": "plausible",
}


@dataclass(frozen=True)
class AtlasEntry:
    model: str
    problem: str
    ensemble: bool
    complexity: str
    source: str = None
    caveats: tuple = field(default_factory=tuple)
    table: str = None

    @property
    def known(self):
        return self.complexity != "unknown"

    def to_dict(self):
        out = asdict(self)
        out["caveats"] = list(self.caveats)
        return out


def _norm(text, aliases):
    key = str(text).strip().lower().replace("_", "-").replace(" ", "-")
    return aliases.get(key, key)


def _flag(ensemble):
    if isinstance(ensemble, str):
        value = ensemble.strip().lower()
        if value in ("ensemble", "true", "1", "yes"):
            return True
        if value in ("single", "false", "0", "no"):
            return False
        raise ValueError(f"ensemble flag must be single or ensemble, got {ensemble!r}")
    return bool(ensemble)


@lru_cache(maxsize=1)
def _table():
    text = resources.files(__name__).joinpath("data/atlas.json").read_text(encoding="utf-8")
    out = {}
    for e in json.loads(text)["entries"]:
        entry = AtlasEntry(
            e["model"], e["problem"], bool(e["ensemble"]), e["class"], e["source"], tuple(e["caveats"]), e["table"]
        )
        key = (entry.model, entry.problem, entry.ensemble)
        if key in out:
            raise AssertionError(f"duplicate atlas cell {key}")
        out[key] = entry
    return out


def lookup(model, problem, ensemble=False):
    """Entry for one cell; an ``unknown`` record when no result is recorded."""
    key = (_norm(model, _MODEL_ALIASES), _norm(problem, _PROBLEM_ALIASES), _flag(ensemble))
    found = _table().get(key)
    if found is not None:
        return found
    return AtlasEntry(*key, complexity="unknown")


def dump():
    """Every populated cell, in data-file order."""
    return list(_table().values())


__all__ = ["AtlasEntry", "CLASSES", "MODEL_FAMILIES", "PROBLEMS", "dump", "lookup"]
