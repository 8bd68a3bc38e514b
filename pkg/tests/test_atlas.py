import pytest
from hypothesis import given
from hypothesis import strategies as st

from cfxlab.atlas import CLASSES, MODEL_FAMILIES, PROBLEMS, dump, lookup

# populated cells per table, counted from the two published tables
COUNTERFACTUAL_CELLS = 21
SEMIFACTUAL_CELLS = 18


def test_entry_count():
    entries = dump()
    assert len(entries) == COUNTERFACTUAL_CELLS + SEMIFACTUAL_CELLS
    assert sum(e.table == "counterfactual" for e in entries) == COUNTERFACTUAL_CELLS
    assert sum(e.table == "semifactual" for e in entries) == SEMIFACTUAL_CELLS
    keys = [(e.model, e.problem, e.ensemble) for e in entries]
    assert len(set(keys)) == len(keys)
    assert all(e.complexity in CLASSES and e.complexity != "unknown" for e in entries)
    assert all(e.model in MODEL_FAMILIES and e.problem in PROBLEMS for e in entries)


@pytest.mark.parametrize(
    "model,problem,ensemble,expected",
    [
        ("ReLU Net", "classic-single", False, "NP-complete"),
        ("perceptron", "mca", False, "PTIME"),
        ("gnn", "robust", False, "unknown"),
        ("dt", "classic-enumerate", False, "PTIME"),
        ("fbdd", "classic-single", True, "NP-complete"),
        ("additive-trees", "classic-single", True, "NP-hard"),
        ("relu", "msr", False, "Σ2p-complete"),
        ("random-forest", "msr", True, "Dp-complete"),
        ("dl", "msr", False, "NP-hard"),
        ("any", "classic-enumerate", False, "NP-hard"),
        ("relu", "robust", True, "NP-hard"),
    ],
)
def test_spot_checks(model, problem, ensemble, expected):
    assert lookup(model, problem, ensemble).complexity == expected


def test_corollary_sources_and_caveats():
    assert lookup("relu", "robust", True).source == "Corollary 1"
    assert lookup("relu", "plausible", True).source == "Corollary 2"
    knn = lookup("knn", "classic-single")
    assert any("l1" in c for c in knn.caveats) and any("l2" in c for c in knn.caveats)
    assert lookup("perceptron", "plausible").caveats


def test_unknown_record_is_explicit():
    e = lookup("gnn", "mca", "ensemble")
    assert e.complexity == "unknown" and not e.known and e.source is None
    assert e.ensemble is True


@given(st.sampled_from(MODEL_FAMILIES), st.sampled_from(PROBLEMS), st.booleans())
def test_lookup_is_total_and_pure(model, problem, ensemble):
    a = lookup(model, problem, ensemble)
    assert a == lookup(model, problem, ensemble)
    assert a.complexity in CLASSES
