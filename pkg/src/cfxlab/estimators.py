"""scikit-learn style wrappers around the exact solvers.

Nothing is learned: ``fit`` only checks the wrapped model and records its
input width, so the explainers can sit at the end of a ``Pipeline``.
"""

from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import InvalidSpec
from .explain.costs import CostFunction
from .explain.problem import ProblemSpec
from .explain.solvers import solve
from .models.base import BinaryInstance, apply_delta
from .validation import check_binary_array


def _cost(cost):
    if isinstance(cost, CostFunction):
        return cost
    if cost in (None, "hamming", "l0"):
        return CostFunction()
    return CostFunction("weighted-l1", tuple(cost))


class _Explainer(TransformerMixin, BaseEstimator):
    def fit(self, X=None, y=None):
        if self.model is None:
            raise InvalidSpec("an explainer needs a model")
        self.model.check_valid()
        self.n_features_in_ = self.model.dim
        if X is not None:
            check_binary_array(X, self.n_features_in_)
        return self

    def _rows(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_binary_array(X, self.n_features_in_)
        return [BinaryInstance(tuple(int(b) for b in row)) for row in X]

    def explain(self, X):
        """One :class:`~cfxlab.explain.Solution` per row of ``X``."""
        return [solve(self._spec(x), max_dim=self.max_dim) for x in self._rows(X)]


class CounterfactualExplainer(_Explainer):
    """Exact counterfactuals for each row.

    ``target=None`` asks for the opposite class of a classifier. ``kind``
    is ``"classic-cf"``, ``"mcr"`` (needs ``k``) or ``"wachter"`` (needs
    ``lam``). ``transform`` returns the counterfactual points; rows with no
    counterfactual are filled with ``-1``.
    """

    def __init__(self, model=None, kind="classic-cf", target=None, cost="hamming", k=None, lam=None, max_dim=None):
        self.model = model
        self.kind = kind
        self.target = target
        self.cost = cost
        self.k = k
        self.lam = lam
        self.max_dim = max_dim

    def _spec(self, x):
        target = self.target
        if target is None:
            if not self.model.is_classifier:
                raise InvalidSpec("regressors need an explicit target")
            target = 1 - self.model.evaluate(x)
        return ProblemSpec(self.kind, self.model, x, target=target, cost=_cost(self.cost), k=self.k, lam=self.lam)

    def transform(self, X):
        rows = self._rows(X)
        out = np.full((len(rows), self.n_features_in_), -1, dtype=np.int8)
        for r, x in enumerate(rows):
            sol = solve(self._spec(x), max_dim=self.max_dim)
            if sol.feasible:
                out[r] = apply_delta(x, sol.witness).bits
        return out

    def costs(self, X):
        """Optimal objective per row (``None`` where infeasible)."""
        return [s.objective if s.feasible else None for s in self.explain(X)]


class SemifactualExplainer(_Explainer):
    """Minimum sufficient reasons (``kind="msr"``) or maximum-change
    semi-factuals (``kind="mca"``).

    ``transform`` returns, per row, the 0/1 mask of the sufficient features
    (msr) or the farthest same-output point (mca); infeasible rows are ``-1``.
    """

    def __init__(self, model=None, kind="msr", k=None, max_dim=None):
        self.model = model
        self.kind = kind
        self.k = k
        self.max_dim = max_dim

    def _spec(self, x):
        if self.kind not in ("msr", "mca"):
            raise InvalidSpec(f"SemifactualExplainer supports msr and mca, not {self.kind!r}")
        return ProblemSpec(self.kind, self.model, x, k=self.k)

    def transform(self, X):
        rows = self._rows(X)
        out = np.full((len(rows), self.n_features_in_), -1, dtype=np.int8)
        for r, x in enumerate(rows):
            sol = solve(self._spec(x), max_dim=self.max_dim)
            if not sol.feasible:
                continue
            if self.kind == "msr":
                out[r] = 0
                out[r, list(sol.witness.support)] = 1
            else:
                out[r] = sol.witness.bits
        return out

    def sizes(self, X):
        return [Fraction(s.objective) if s.feasible else None for s in self.explain(X)]
