from fractions import Fraction

import numpy as np
import pytest

from cfxlab.explain import ProblemSpec, solve_wachter
from cfxlab.gadgets import build_gadget, random_restricted_cnf
from cfxlab.harness import EXPERIMENTS, ExperimentConfig, greedy_wachter, run_experiment
from cfxlab.harness.generators import random_fbdd, random_model


SMALL = {
    "oracle-agreement": dict(trials=40, d_range=(1, 8)),
    "gadget-soundness": dict(trials=4, v_range=(3, 6), clause_ratio=(2.0, 7.0)),
    "dichotomy": dict(trials=2, v_range=(3, 6)),
    "scaling": dict(trials=2, d_range=(2, 6)),
    "approximation-gap": dict(trials=6, v_range=(3, 6), clause_ratio=(1.0, 4.0)),
}


@pytest.mark.parametrize("name", EXPERIMENTS)
def test_reports_are_byte_identical(name):
    cfg = ExperimentConfig(name, seed=11, **SMALL[name])
    a, b = run_experiment(cfg), run_experiment(cfg)
    assert a.to_json() == b.to_json()
    assert a.to_csv() == b.to_csv()
    assert "line" in a.summary


def test_seed_changes_rows():
    a = run_experiment(ExperimentConfig("oracle-agreement", seed=1, trials=20))
    b = run_experiment(ExperimentConfig("oracle-agreement", seed=2, trials=20))
    assert a.rows != b.rows


def test_summaries():
    r = run_experiment(ExperimentConfig("oracle-agreement", seed=0, trials=100, d_range=(10, 10)))
    assert r.summary["line"] == "disagreements: 0"
    r = run_experiment(ExperimentConfig("gadget-soundness", seed=0, **SMALL["gadget-soundness"]))
    assert r.summary["line"] == "mismatches vs brute-force SAT: 0"
    r = run_experiment(ExperimentConfig("dichotomy", seed=0, **SMALL["dichotomy"]))
    assert r.summary["line"] == "outputs outside {0} ∪ [M,∞): 0"


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig("nope")
    with pytest.raises(ValueError):
        ExperimentConfig("scaling", d_range=(5, 2))
    with pytest.raises(ValueError):
        ExperimentConfig("scaling", d_range=(1, 30))


def test_write_csv(tmp_path):
    r = run_experiment(ExperimentConfig("scaling", trials=1, d_range=(2, 3)))
    path = tmp_path / "s.csv"
    r.write(path, "csv")
    head = path.read_text().splitlines()[0]
    assert "oracle_examined" in head


@pytest.mark.parametrize("seed", range(10))
def test_greedy_never_beats_exact(seed):
    rng = np.random.default_rng(seed)
    kind = ("relu", "atm", "knn")[seed % 3]
    g = build_gadget(random_restricted_cnf(5, 12, rng), kind)
    greedy, delta, _ = greedy_wachter(g.regressor, g.x_orig, 0, 1)
    exact = solve_wachter(g.spec()).objective
    assert greedy >= exact
    for family in ("relu", "knn", "atm"):
        m = random_model(rng, family, 6)
        spec = ProblemSpec("wachter", m, (0,) * 6, target=Fraction(3), lam=Fraction(1, 2))
        assert greedy_wachter(m, (0,) * 6, 3, Fraction(1, 2))[0] >= solve_wachter(spec).objective


def test_fbdd_generator_shares_nodes():
    shared = 0
    for seed in range(30):
        f = random_fbdd(np.random.default_rng(seed), 6, 15)
        parents = {}
        for _, lo, hi in f.nodes.values():
            for c in {lo, hi}:
                parents[c] = parents.get(c, 0) + 1
        shared += any(n in f.nodes and k > 1 for n, k in parents.items())
        assert f.problems() == []
    assert shared > 0
