"""Problem specifications, partial instances and solutions (with JSON I/O)."""

from dataclasses import dataclass, field
from fractions import Fraction
import json
import os

from .._rational import as_fraction, format_fraction
from ..exceptions import InvalidSpec, ParseError
from ..models.base import BinaryInstance, Delta, as_instance
from ..models.io import load_model, model_from_dict, model_to_dict
from .costs import CostFunction

KINDS = (
    "classic-cf",
    "wachter",
    "mcr",
    "plausible-mcr",
    "robust-cf",
    "msr",
    "plausible-msr",
    "mca",
)
SEMIFACTUAL_KINDS = ("msr", "plausible-msr", "mca")
BOUNDED_KINDS = ("mcr", "plausible-mcr", "msr", "plausible-msr", "mca")


@dataclass(frozen=True)
class PartialInstance:
    """Instance whose unassigned features hold the default value (shown ``*``)."""

    assigned: dict
    n_features: int

    def __post_init__(self):
        assigned = {int(k): int(v) for k, v in dict(self.assigned).items()}
        if any(not 0 <= k < self.n_features for k in assigned):
            raise ValueError("assigned index out of range")
        if any(v not in (0, 1) for v in assigned.values()):
            raise ValueError("assigned values must be 0 or 1")
        object.__setattr__(self, "assigned", assigned)

    @classmethod
    def restrict(cls, x, subset):
        x = as_instance(x)
        return cls({i: x.bits[i] for i in subset}, x.dim)

    @property
    def dim(self):
        return self.n_features

    @property
    def support(self):
        return tuple(sorted(self.assigned))

    def __len__(self):
        return len(self.assigned)

    def canonical_completion(self):
        """Fill every unassigned feature with 0."""
        return BinaryInstance(tuple(self.assigned.get(i, 0) for i in range(self.n_features)))

    def __str__(self):
        return "".join(str(self.assigned[i]) if i in self.assigned else "*" for i in range(self.n_features))

    def __hash__(self):
        return hash((tuple(sorted(self.assigned.items())), self.n_features))


@dataclass(frozen=True)
class ProblemSpec:
    """One explanation problem instance.

    ``target`` is the requested output (counterfactual kinds only), ``k``
    the decision bound, ``lam`` the WACHTER trade-off weight, ``pi`` the
    plausibility classifier and ``model_set`` the finite family of model
    variants a robust counterfactual must satisfy.
    """

    kind: str
    model: object
    x_orig: BinaryInstance
    target: Fraction = None
    cost: CostFunction = field(default_factory=CostFunction)
    k: Fraction = None
    lam: Fraction = None
    pi: object = None
    model_set: tuple = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpec(f"unknown problem kind {self.kind!r}")
        object.__setattr__(self, "x_orig", as_instance(self.x_orig))
        if self.target is not None:
            object.__setattr__(self, "target", as_fraction(self.target))
        if self.k is not None:
            object.__setattr__(self, "k", as_fraction(self.k))
        if self.lam is not None:
            object.__setattr__(self, "lam", as_fraction(self.lam))
        if self.model_set is not None:
            object.__setattr__(self, "model_set", tuple(self.model_set))
        kind = self.kind
        if kind == "wachter" and (self.lam is None or self.lam <= 0):
            raise InvalidSpec("lambda must be positive")
        if kind != "wachter" and self.lam is not None:
            raise InvalidSpec("lambda is only meaningful for wachter problems")
        if kind in SEMIFACTUAL_KINDS:
            if self.target is not None:
                raise InvalidSpec(f"{kind} problems take no target")
        elif self.target is None:
            raise InvalidSpec(f"{kind} problems need a target")
        if kind in ("mcr", "plausible-mcr") and self.k is None:
            raise InvalidSpec(f"{kind} problems need a bound k")
        if (self.pi is not None) != kind.startswith("plausible"):
            raise InvalidSpec("pi must be given exactly for plausible-* problems")
        if (self.model_set is not None) != (kind == "robust-cf"):
            raise InvalidSpec("model_set must be given exactly for robust-cf problems")
        if kind == "robust-cf" and not self.model_set:
            raise InvalidSpec("model_set must be non-empty")
        if self.model is None and kind != "robust-cf":
            raise InvalidSpec("a model is required")
        self.cost.check_dim(self.x_orig.dim)

    @property
    def models(self):
        """Every model whose input dimension must match ``x_orig``."""
        out = [self.model] if self.model is not None else []
        out += list(self.model_set or ())
        if self.pi is not None:
            out.append(self.pi)
        return out

    def replace(self, **changes):
        from dataclasses import replace

        return replace(self, **changes)

    def to_dict(self):
        out = {"kind": self.kind, "x_orig": str(self.x_orig), "cost": self.cost.to_dict()}
        if self.model is not None:
            out["model"] = model_to_dict(self.model)
        if self.target is not None:
            out["target"] = format_fraction(self.target)
        if self.k is not None:
            out["k"] = format_fraction(self.k)
        if self.lam is not None:
            out["lambda"] = format_fraction(self.lam)
        if self.pi is not None:
            out["pi"] = model_to_dict(self.pi)
        if self.model_set is not None:
            out["model_set"] = [model_to_dict(m) for m in self.model_set]
        return out

    @classmethod
    def from_dict(cls, data, base_dir="."):
        if not isinstance(data, dict):
            raise ParseError("problem spec: expected an object")

        def model_ref(value, where):
            if isinstance(value, str):
                path = value if os.path.isabs(value) else os.path.join(base_dir, value)
                try:
                    return load_model(path)
                except OSError as exc:
                    raise ParseError(f"{where}: cannot read {value!r} ({exc.strerror})") from None
            return model_from_dict(value, where)

        try:
            kind = data["kind"]
            x = data["x_orig"]
        except KeyError as exc:
            raise ParseError(f"problem spec: missing field {exc.args[0]!r}") from None
        try:
            x_orig = BinaryInstance.from_string(x) if isinstance(x, str) else BinaryInstance(tuple(x))
            vals = {}
            for key, attr in (("target", "target"), ("k", "k"), ("lambda", "lam")):
                if data.get(key) is not None:
                    vals[attr] = as_fraction(data[key])
        except (TypeError, ValueError) as exc:
            raise ParseError(f"problem spec: {exc}") from None
        model = model_ref(data["model"], "model") if data.get("model") is not None else None
        pi = model_ref(data["pi"], "pi") if data.get("pi") is not None else None
        model_set = None
        if data.get("model_set") is not None:
            model_set = tuple(
                model_ref(m, f"model_set[{i}]") for i, m in enumerate(data["model_set"])
            )
        return cls(
            kind=kind,
            model=model,
            x_orig=x_orig,
            cost=CostFunction.from_dict(data.get("cost")),
            pi=pi,
            model_set=model_set,
            **vals,
        )


def load_spec(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from None
    return ProblemSpec.from_dict(data, base_dir=os.path.dirname(os.path.abspath(path)))


@dataclass(frozen=True)
class Solution:
    """Solver output. ``witness`` is a Delta (counterfactual kinds), a
    PartialInstance (MSR kinds) or a BinaryInstance (MCA)."""

    kind: str
    feasible: bool
    witness: object = None
    objective: Fraction = None
    certificate: dict = field(default_factory=dict)

    def point(self, x_orig):
        """The explanation instance itself (``x_orig`` with the flips applied)."""
        from ..models.base import apply_delta

        if isinstance(self.witness, Delta):
            return apply_delta(x_orig, self.witness)
        if isinstance(self.witness, PartialInstance):
            return self.witness.canonical_completion()
        return self.witness

    def to_dict(self):
        out = {"kind": self.kind, "feasible": self.feasible}
        w = self.witness
        if w is None:
            out["witness"] = None
        elif isinstance(w, Delta):
            out["witness"] = {"type": "delta", "flips": list(w.sorted())}
        elif isinstance(w, PartialInstance):
            out["witness"] = {"type": "partial", "bits": str(w), "support": list(w.support)}
        else:
            out["witness"] = {"type": "instance", "bits": str(w)}
        out["objective"] = None if self.objective is None else f"{self.objective.numerator}/{self.objective.denominator}"
        out["certificate"] = dict(self.certificate)
        return out

    @classmethod
    def from_dict(cls, data):
        w = data.get("witness")
        witness = None
        if w is not None:
            if w["type"] == "delta":
                witness = Delta(frozenset(w["flips"]))
            elif w["type"] == "partial":
                bits = w["bits"]
                witness = PartialInstance({i: int(c) for i, c in enumerate(bits) if c != "*"}, len(bits))
            else:
                witness = BinaryInstance.from_string(w["bits"])
        obj = data.get("objective")
        return cls(
            kind=data["kind"],
            feasible=bool(data["feasible"]),
            witness=witness,
            objective=None if obj is None else Fraction(obj),
            certificate=dict(data.get("certificate", {})),
        )

    def dumps(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)
