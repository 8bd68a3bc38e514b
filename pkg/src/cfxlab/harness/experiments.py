"""Seeded, byte-reproducible experiments over solvers and gadgets.

Each experiment returns a :class:`Report` with one row per trial and a
summary. Trials consume one shared ``numpy`` generator in trial order, so a
fixed seed fixes every row.
"""

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from statistics import median

from ..explain.costs import CostFunction, HAMMING
from ..explain.enumerate import DEFAULT_MAX_DIM
from ..explain.fast import fbdd_cf_fast, perceptron_mcr_fast
from ..explain.problem import ProblemSpec
from ..explain.solvers import solve_classic_cf, solve_msr
from ..explain.verify import verify_solution
from ..gadgets.build import GADGET_KINDS, build_gadget
from ..gadgets.check import reduce_sat, verify_gadget
from ..gadgets.cnf import brute_force_sat, random_restricted_cnf
from .generators import as_rng, random_fbdd, random_instance, random_perceptron
from .greedy import greedy_wachter

EXPERIMENTS = ("oracle-agreement", "gadget-soundness", "dichotomy", "scaling", "approximation-gap")


def _q(value):
    return None if value is None else str(Fraction(value))


@dataclass
class ExperimentConfig:
    """``d_range``/``v_range``/``c_range`` are inclusive ``(lo, hi)`` pairs.
    ``kind_v_range`` overrides ``v_range`` per gadget kind; ``clause_ratio``
    (if set) draws ``c = round(r * v)`` with ``r`` uniform in the range,
    clipped to ``c_range``."""

    experiment: str
    seed: int = 0
    trials: int = 100
    d_range: tuple = (1, 10)
    v_range: tuple = (3, 8)
    c_range: tuple = (1, 40)
    kinds: tuple = GADGET_KINDS
    families: tuple = ("perceptron", "fbdd")
    kind_v_range: dict = field(default_factory=dict)
    clause_ratio: tuple = None
    max_dim: int = DEFAULT_MAX_DIM

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
        for name in ("d_range", "v_range", "c_range"):
            lo, hi = getattr(self, name)
            if not 1 <= lo <= hi:
                raise ValueError(f"{name} must satisfy 1 <= lo <= hi")
            setattr(self, name, (int(lo), int(hi)))
        if self.d_range[1] > self.max_dim:
            raise ValueError(f"d_range upper end {self.d_range[1]} exceeds the cap {self.max_dim}")
        if self.trials < 0:
            raise ValueError("trials must be nonnegative")
        self.kinds = tuple(self.kinds)
        self.families = tuple(self.families)

    def v_range_for(self, kind):
        return tuple(self.kind_v_range.get(kind, self.v_range))

    def to_dict(self):
        out = asdict(self)
        out["kind_v_range"] = {k: list(v) for k, v in sorted(self.kind_v_range.items())}
        return out


@dataclass
class Report:
    experiment: str
    config: dict
    rows: list
    summary: dict

    def to_dict(self):
        return {"experiment": self.experiment, "config": self.config, "summary": self.summary, "rows": self.rows}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        cols = sorted({k for r in self.rows for k in r})
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            w.writerow(r)
        return buf.getvalue()

    def dumps(self, fmt="json"):
        return self.to_csv() if fmt == "csv" else self.to_json()

    def write(self, path, fmt="json"):
        with open(path, "w", newline="") as fh:
            fh.write(self.dumps(fmt))


def _draw(rng, lo_hi):
    lo, hi = lo_hi
    return int(rng.integers(lo, hi + 1))


def _draw_formula(rng, cfg, kind):
    v = _draw(rng, cfg.v_range_for(kind))
    v = max(v, 3)
    if cfg.clause_ratio is not None:
        r = rng.uniform(*cfg.clause_ratio)
        c = min(max(round(r * v), cfg.c_range[0]), cfg.c_range[1])
    else:
        c = _draw(rng, cfg.c_range)
    return random_restricted_cnf(v, c, rng)


def _oracle_agreement(cfg, rng):
    rows = []
    for t in range(cfg.trials):
        family = cfg.families[t % len(cfg.families)]
        d = _draw(rng, cfg.d_range)
        x = random_instance(rng, d)
        y = int(rng.integers(0, 2))
        if family == "perceptron":
            model, cost = random_perceptron(rng, d), HAMMING
            fast = perceptron_mcr_fast(model, x, y)
        else:
            model = random_fbdd(rng, d)
            if rng.random() < 0.5:
                cost = HAMMING
            else:
                cost = CostFunction("weighted-l1", tuple(int(w) for w in rng.integers(0, 9, size=d)))
            fast = fbdd_cf_fast(model, x, y, cost)
        spec = ProblemSpec("classic-cf", model, x, target=y, cost=cost)
        oracle = solve_classic_cf(spec, method="enumerate", max_dim=cfg.max_dim)
        agree = fast.feasible == oracle.feasible and fast.objective == oracle.objective
        if fast.feasible:
            agree = agree and not verify_solution(spec, fast)
        rows.append(
            {
                "trial": t,
                "family": family,
                "d": d,
                "cost": cost.kind,
                "fast": _q(fast.objective) if fast.feasible else "infeasible",
                "oracle": _q(oracle.objective) if oracle.feasible else "infeasible",
                "agree": agree,
            }
        )
    bad = sum(not r["agree"] for r in rows)
    return rows, {"trials": len(rows), "disagreements": bad, "line": f"disagreements: {bad}"}


def _gadget_soundness(cfg, rng):
    rows = []
    for t in range(cfg.trials):
        for kind in cfg.kinds:
            cnf = _draw_formula(rng, cfg, kind)
            red = reduce_sat(cnf, kind, max_dim=cfg.max_dim)
            truth = brute_force_sat(cnf) is not None
            valid = red.assignment is None or cnf.evaluate(red.assignment)
            rows.append(
                {
                    "trial": t,
                    "kind": kind,
                    "v": cnf.num_vars,
                    "c": cnf.num_clauses,
                    "M": _q(red.M),
                    "objective": _q(red.objective),
                    "reduction": "SAT" if red.satisfiable else "UNSAT",
                    "brute_force": "SAT" if truth else "UNSAT",
                    "assignment_valid": valid,
                    "ok": red.satisfiable == truth and valid,
                }
            )
    bad = sum(not r["ok"] for r in rows)
    sat = sum(r["brute_force"] == "SAT" for r in rows)
    return rows, {
        "formulas": len(rows),
        "satisfiable": sat,
        "unsatisfiable": len(rows) - sat,
        "mismatches": bad,
        "line": f"mismatches vs brute-force SAT: {bad}",
    }


def _dichotomy(cfg, rng):
    rows = []
    for t in range(cfg.trials):
        for kind in cfg.kinds:
            cnf = _draw_formula(rng, cfg, kind)
            g = build_gadget(cnf, kind)
            rep = verify_gadget(g, mode="exhaustive", cap=min(cfg.max_dim, 20))
            rows.append(
                {
                    "trial": t,
                    "kind": kind,
                    "v": cnf.num_vars,
                    "c": cnf.num_clauses,
                    "dim": g.dim,
                    "inputs": rep["inputs_checked"],
                    "outside": rep["violations_by_property"]["a"],
                    "violations": rep["violation_count"],
                }
            )
    outside = sum(r["outside"] for r in rows)
    total = sum(r["violations"] for r in rows)
    return rows, {
        "gadgets": len(rows),
        "inputs": sum(r["inputs"] for r in rows),
        "outside": outside,
        "violations": total,
        "line": f"outputs outside {{0}} ∪ [M,∞): {outside}",
    }


def _scaling(cfg, rng):
    rows = []
    for d in range(cfg.d_range[0], cfg.d_range[1] + 1):
        for t in range(cfg.trials):
            x = random_instance(rng, d)
            y = int(rng.integers(0, 2))
            p = random_perceptron(rng, d)
            f = random_fbdd(rng, d)
            rows.append(
                {
                    "d": d,
                    "trial": t,
                    "oracle_examined": 2**d,
                    "perceptron_examined": perceptron_mcr_fast(p, x, y).certificate["examined"],
                    "fbdd_examined": fbdd_cf_fast(f, x, y).certificate["examined"],
                    "msr_subsets_examined": solve_msr(ProblemSpec("msr", f, x), max_dim=cfg.max_dim).certificate[
                        "examined"
                    ],
                }
            )
    summary = {}
    for d in range(cfg.d_range[0], cfg.d_range[1] + 1):
        sub = [r for r in rows if r["d"] == d]
        if sub:
            summary[str(d)] = {
                k: median(r[k] for r in sub)
                for k in ("oracle_examined", "perceptron_examined", "fbdd_examined", "msr_subsets_examined")
            }
    return rows, {"median_counts_by_d": summary, "line": "counts of candidates examined (not timings)"}


def _approximation_gap(cfg, rng):
    rows, attempts = [], 0
    t = 0
    while len(rows) < cfg.trials:
        attempts += 1
        if attempts > 100 * max(cfg.trials, 1):
            raise RuntimeError("could not draw enough satisfiable formulas")
        kind = cfg.kinds[t % len(cfg.kinds)]
        cnf = _draw_formula(rng, cfg, kind)
        if brute_force_sat(cnf) is None:
            continue
        g = build_gadget(cnf, kind)
        exact = reduce_sat(cnf, kind, max_dim=cfg.max_dim).objective
        greedy, _, steps = greedy_wachter(g.regressor, g.x_orig, 0, 1)
        if exact == 0:
            ratio = Fraction(1) if greedy == 0 else None
        else:
            ratio = greedy / exact
        rows.append(
            {
                "trial": t,
                "kind": kind,
                "v": cnf.num_vars,
                "c": cnf.num_clauses,
                "exact": _q(exact),
                "greedy": _q(greedy),
                "greedy_steps": steps,
                "ratio": _q(ratio) if ratio is not None else "inf",
                "ratio_float": round(float(ratio), 6) if ratio is not None else None,
            }
        )
        t += 1
    finite = [Fraction(r["ratio"]) for r in rows if r["ratio"] != "inf"]
    ge1 = all(q >= 1 for q in finite)
    summary = {
        "instances": len(rows),
        "all_ratios_at_least_1": ge1,
        "exact_hits": sum(q == 1 for q in finite),
        "infinite_ratios": len(rows) - len(finite),
        "min_ratio": round(float(min(finite)), 6) if finite else None,
        "median_ratio": round(float(median(finite)), 6) if finite else None,
        "max_ratio": round(float(max(finite)), 6) if finite else None,
        "line": f"ratio >= 1 on all instances: {ge1}",
    }
    return rows, summary


_RUNNERS = {
    "oracle-agreement": _oracle_agreement,
    "gadget-soundness": _gadget_soundness,
    "dichotomy": _dichotomy,
    "scaling": _scaling,
    "approximation-gap": _approximation_gap,
}


def run_experiment(config):
    """Run one experiment; identical configs give byte-identical reports."""
    rng = as_rng(config.seed)
    rows, summary = _RUNNERS[config.experiment](config, rng)
    return Report(config.experiment, config.to_dict(), rows, summary)
