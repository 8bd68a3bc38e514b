"""Restricted 3-SAT formulas: DIMACS I/O, a brute-force oracle, and a
seeded random generator."""

from dataclasses import dataclass

import numpy as np

from ..exceptions import ParseError


@dataclass(frozen=True)
class CnfFormula:
    """CNF whose every clause has exactly three literals over distinct variables.

    Literals are nonzero ints: ``+i`` is variable ``i`` (1-based), ``-i`` its
    negation.
    """

    num_vars: int
    clauses: tuple

    def __post_init__(self):
        clauses = tuple(tuple(int(l) for l in c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if int(self.num_vars) < 1:
            raise ValueError("a formula needs at least one variable")
        if not clauses:
            raise ValueError("a formula needs at least one clause")
        for c in clauses:
            _check_clause(c, self.num_vars)

    @property
    def num_clauses(self):
        return len(self.clauses)

    def clause_satisfied(self, clause, values):
        return any(values[abs(l)] == (l > 0) for l in clause)

    def evaluate(self, assignment):
        values = assignment.values if isinstance(assignment, Assignment) else assignment
        return all(self.clause_satisfied(c, values) for c in self.clauses)

    def evaluate_batch(self, A):
        """Satisfaction of each row of the 0/1 matrix ``A`` (column ``i-1`` is
        variable ``i``)."""
        A = np.asarray(A, dtype=bool)
        ok = np.ones(A.shape[0], dtype=bool)
        for c in self.clauses:
            sat = np.zeros(A.shape[0], dtype=bool)
            for l in c:
                col = A[:, abs(l) - 1]
                sat |= col if l > 0 else ~col
            ok &= sat
        return ok

    def unsatisfied(self, assignment):
        values = assignment.values if isinstance(assignment, Assignment) else assignment
        return sum(not self.clause_satisfied(c, values) for c in self.clauses)


def _check_clause(clause, num_vars):
    if len(clause) < 3:
        raise ParseError(f"fewer than three literals in clause {list(clause)}")
    if len(clause) > 3:
        raise ParseError(f"more than three literals in clause {list(clause)}")
    if 0 in clause:
        raise ParseError("literal 0 inside a clause")
    if len({abs(l) for l in clause}) != 3:
        raise ParseError(f"duplicate variable in clause {list(clause)}")
    for l in clause:
        if abs(l) > num_vars:
            raise ParseError(f"literal {l} exceeds declared variable count {num_vars}")


@dataclass(frozen=True)
class Assignment:
    """Total truth assignment: ``values[i]`` for variables ``1..v``."""

    values: dict

    @classmethod
    def from_bits(cls, bits):
        return cls({i + 1: bool(b) for i, b in enumerate(bits)})

    def to_bits(self):
        return tuple(int(self.values[i]) for i in range(1, len(self.values) + 1))

    def __str__(self):
        return " ".join(str(i if self.values[i] else -i) for i in sorted(self.values))


def parse_dimacs(text):
    """Parse DIMACS CNF text, strictly enforcing the restricted 3-SAT shape."""
    header = None
    clauses, current = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break  # SATLIB end marker
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise ParseError(f"line {lineno}: second header")
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"line {lineno}: malformed header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise ParseError(f"line {lineno}: malformed header {line!r}") from None
            if header[0] < 1 or header[1] < 1:
                raise ParseError(f"line {lineno}: malformed header {line!r}")
            continue
        if header is None:
            raise ParseError(f"line {lineno}: clause before the 'p cnf' header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"line {lineno}: bad literal {tok!r}") from None
            if lit == 0:
                _check_clause(current, header[0])
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if header is None:
        raise ParseError("missing 'p cnf' header")
    if current:
        raise ParseError("last clause is not terminated by 0")
    if len(clauses) != header[1]:
        raise ParseError(f"header declares {header[1]} clauses but {len(clauses)} were given")
    return CnfFormula(header[0], tuple(clauses))


def to_dimacs(cnf):
    lines = [f"p cnf {cnf.num_vars} {cnf.num_clauses}"]
    lines += [" ".join(map(str, c)) + " 0" for c in cnf.clauses]
    return "\n".join(lines) + "\n"


def load_dimacs(path):
    with open(path) as fh:
        return parse_dimacs(fh.read())


def brute_force_sat(cnf):
    """First satisfying assignment in counting order (bit ``i-1`` is
    variable ``i``), or None. Pure Python, independent of every gadget."""
    masks = []
    for c in cnf.clauses:
        pos = sum(1 << (l - 1) for l in c if l > 0)
        neg = sum(1 << (-l - 1) for l in c if l < 0)
        masks.append((pos, neg))
    full = (1 << cnf.num_vars) - 1
    for a in range(1 << cnf.num_vars):
        na = full ^ a
        if all((a & p) or (na & n) for p, n in masks):
            return Assignment({i + 1: bool(a >> i & 1) for i in range(cnf.num_vars)})
    return None


def random_restricted_cnf(num_vars, num_clauses, seed=None):
    """Clauses of three distinct variables drawn uniformly, with random signs."""
    if num_vars < 3:
        raise ValueError("restricted 3-SAT needs at least three variables")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    clauses = []
    for _ in range(num_clauses):
        vars_ = rng.choice(num_vars, size=3, replace=False) + 1
        signs = rng.integers(0, 2, size=3) * 2 - 1
        clauses.append(tuple(int(v * s) for v, s in zip(vars_, signs)))
    return CnfFormula(num_vars, tuple(clauses))
