"""Compile restricted 3-SAT formulas into WACHTER instances.

Each gadget regressor outputs 0 on encodings of satisfying assignments and
at least ``M`` on every other binary input, so with ``x_orig = 0``,
``y_cf = 0`` and ``lam = 1`` the optimal objective is at most
``(M-1)**2`` for satisfiable formulas and at least ``M**2`` otherwise.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .._rational import as_fraction, ceil_sqrt
from ..exceptions import InvalidSpec
from ..explain.costs import HAMMING
from ..explain.problem import ProblemSpec
from ..models.base import BinaryInstance
from ..models.diagrams import DecisionTree
from ..models.knn import KnnRegressor
from ..models.linear import ReluNetwork
from ..models.trees import AdditiveTreeModel

GADGET_KINDS = ("relu", "atm", "knn")


@dataclass(frozen=True, eq=False)
class GadgetInstance:
    kind: str
    cnf: object
    regressor: object
    M: Fraction
    encoding: dict = field(default_factory=dict)

    @property
    def dim(self):
        return self.regressor.dim

    @property
    def c(self):
        return self.cnf.num_clauses

    @property
    def x_orig(self):
        return BinaryInstance.zeros(self.dim)

    y_cf = Fraction(0)
    lam = Fraction(1)

    @property
    def sat_threshold(self):
        """Largest objective a satisfiable formula can have: ``(M-1)**2``."""
        return (self.M - 1) ** 2

    @property
    def unsat_threshold(self):
        return self.M**2

    def spec(self):
        return ProblemSpec("wachter", self.regressor, self.x_orig, target=0, cost=HAMMING, lam=1)


def default_bigm(max_value):
    """``max(2, ceil(sqrt(max_value)) + 1)``."""
    return Fraction(max(2, ceil_sqrt(max_value) + 1))


def _resolve_bigm(M, max_value):
    if M is None:
        return default_bigm(max_value)
    M = as_fraction(M)
    if M < 1 or (M - 1) ** 2 < max_value:
        raise InvalidSpec(f"invalid M {M}: need M >= sqrt({max_value}) + 1")
    return M


def relu_literal_index(lit):
    """Input coordinate of a literal: ``2(i-1)`` for ``x_i``, ``2(i-1)+1`` for ``not x_i``."""
    return 2 * (abs(lit) - 1) + (lit < 0)


def build_relu_gadget(cnf, M=None):
    """One hidden layer over ``2v`` literal inputs.

    Clause neuron: ``relu(M - M * sum(literal bits))`` is ``M`` iff no literal
    of the clause is on. Consistency neuron for variable ``i``:
    ``relu(M*p + M*n - M)`` is ``M`` iff both literal bits of ``i`` are on.
    The output neuron sums all hidden units with weight 1.
    """
    v = cnf.num_vars
    dim = 2 * v
    M = _resolve_bigm(M, dim)
    rows, bias = [], []
    for clause in cnf.clauses:
        row = [0] * dim
        for lit in clause:
            row[relu_literal_index(lit)] = -M
        rows.append(row)
        bias.append(M)
    for i in range(v):
        row = [0] * dim
        row[2 * i] = row[2 * i + 1] = M
        rows.append(row)
        bias.append(-M)
    out = ([[1] * len(rows)], [0])
    net = ReluNetwork(dim, ((rows, bias), out))
    encoding = {
        "inputs": "literals",
        "literal_index": {str(s * i): relu_literal_index(s * i) for i in range(1, v + 1) for s in (1, -1)},
        "clause_neurons": list(range(cnf.num_clauses)),
        "consistency_neurons": list(range(cnf.num_clauses, cnf.num_clauses + v)),
    }
    return GadgetInstance("relu", cnf, net, M, encoding)


def _clause_tree(clause, n_features, high):
    """Depth-3 tree: tests the clause's variables in order and reaches the
    ``high`` leaf only on its unique falsifying assignment."""
    nodes, leaves = {}, {}
    next_id = 0
    for depth, lit in enumerate(clause):
        var = abs(lit) - 1
        node, sat_leaf = next_id, next_id + 1
        next_id += 2
        leaves[sat_leaf] = Fraction(0)
        follow = next_id  # next test, or the high leaf after the last literal
        # the literal is true on the high branch for x_i and the low branch for not x_i
        nodes[node] = (var, follow, sat_leaf) if lit > 0 else (var, sat_leaf, follow)
    leaves[next_id] = high
    return DecisionTree(n_features, 0, nodes, leaves)


def build_atm_gadget(cnf, M=None):
    """Mean of one tree per clause; each tree is ``c*M`` on the clause's
    falsifying assignment and 0 elsewhere."""
    v, c = cnf.num_vars, cnf.num_clauses
    M = _resolve_bigm(M, v)
    trees = tuple(_clause_tree(cl, v, c * M) for cl in cnf.clauses)
    encoding = {"inputs": "variables", "trees": c}
    return GadgetInstance("atm", cnf, AdditiveTreeModel(trees), M, encoding)


def build_knn_gadget(cnf, M=None):
    """Eight stored vectors per clause, one per assignment of its variables.

    Coordinates outside the clause are fixed to 1/2, so every vector sits at
    the same base distance ``(v-3)/4`` from any binary input and only the
    three clause coordinates decide nearness. With ``k = c`` the neighbours
    are exactly the one matching vector per clause.
    """
    v, c = cnf.num_vars, cnf.num_clauses
    M = _resolve_bigm(M, v)
    half = Fraction(1, 2)
    vectors, labels = [], []
    for clause in cnf.clauses:
        vars_ = [abs(l) - 1 for l in clause]
        falsifying = tuple(0 if l > 0 else 1 for l in clause)
        for a in range(8):
            bits = tuple(a >> j & 1 for j in range(3))
            vec = [half] * v
            for var, b in zip(vars_, bits):
                vec[var] = Fraction(b)
            vectors.append(tuple(vec))
            labels.append(c * M if bits == falsifying else Fraction(0))
    model = KnnRegressor(tuple(vectors), tuple(labels), c)
    encoding = {"inputs": "variables", "vectors_per_clause": 8, "padding": "1/2"}
    return GadgetInstance("knn", cnf, model, M, encoding)


BUILDERS = {"relu": build_relu_gadget, "atm": build_atm_gadget, "knn": build_knn_gadget}


def build_gadget(cnf, kind="relu", M=None):
    if kind not in BUILDERS:
        raise InvalidSpec(f"unknown gadget kind {kind!r}")
    return BUILDERS[kind](cnf, M)
