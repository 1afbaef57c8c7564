"""Graph 3-colorability as lattice equations, with brute-force solvers.

For a graph on vertices 1..t the encoder introduces variables
``r_v, w_v, g_v`` (in that order, vertex by vertex, so k = 3t) and the
system::

    p_1 = meet over v of (r_v | w_v | g_v)                       = 1
    p_m = join over edges ij of (r_i & r_j) | (w_i & w_j) | (g_i & g_j) = 0

for m = 2..t. The system is solvable in B_n^k, for any n >= 1, exactly
when the graph is 3-colorable.

An edgeless graph has no join to form; its equations p_2.. are replaced
by ``r_1 & w_1 & g_1 = 0``, which every single-color assignment meets.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import CapacityError, ContractError, DomainError
from .lattice import LatticeElement, bottom, top
from .terms import Meet, Term, TermVector, Var, eval_vector, evaluate_bits, fold_join, fold_meet, parse_term

COLORS = ("r", "w", "g")
SOLVER_MAX_BITS = 24
ORACLE_MAX_VERTICES = 12
_CHUNK_BITS = 20


@dataclass(frozen=True)
class Graph:
    t: int
    edges: FrozenSet[Tuple[int, int]]

    def __post_init__(self):
        if self.t < 1:
            raise DomainError(f"a graph needs t >= 1 vertices, got {self.t}")
        normalized = set()
        for i, j in self.edges:
            if i == j:
                raise DomainError(f"loop at vertex {i}")
            i, j = min(i, j), max(i, j)
            if not 1 <= i < j <= self.t:
                raise DomainError(f"edge {{{i},{j}}} outside 1..{self.t}")
            normalized.add((i, j))
        object.__setattr__(self, "edges", frozenset(normalized))

    def sorted_edges(self) -> List[Tuple[int, int]]:
        return sorted(self.edges)

    def to_text(self) -> str:
        return "".join([f"t {self.t}\n"] + [f"e {i} {j}\n" for i, j in self.sorted_edges()])

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        t, edges = None, []
        for lineno, line in enumerate(text.splitlines(), 1):
            fields = line.split()
            if not fields or fields[0].startswith("#"):
                continue
            try:
                if fields[0] == "t" and len(fields) == 2:
                    t = int(fields[1])
                    continue
                if fields[0] == "e" and len(fields) == 3:
                    edges.append((int(fields[1]), int(fields[2])))
                    continue
            except ValueError:
                pass
            raise DomainError(f"line {lineno}: cannot parse {line!r}")
        if t is None:
            raise DomainError("graph text lacks a 't <count>' line")
        return cls(t, frozenset(edges))


def complete_graph(t: int) -> Graph:
    return Graph(t, frozenset(itertools.combinations(range(1, t + 1), 2)))


def cycle_graph(t: int) -> Graph:
    return Graph(t, frozenset((i, i % t + 1) for i in range(1, t + 1)))


def wheel_graph(rim: int) -> Graph:
    """A hub (vertex rim+1) joined to every vertex of a rim-cycle."""
    hub = rim + 1
    return Graph(hub, cycle_graph(rim).edges | {(v, hub) for v in range(1, rim + 1)})


def nonisomorphic_graphs(t: int) -> List[Graph]:
    """One representative per isomorphism class of graphs on t vertices."""
    pairs = list(itertools.combinations(range(1, t + 1), 2))
    perms = list(itertools.permutations(range(1, t + 1)))
    seen, reps = set(), []
    for mask in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        canon = min(
            tuple(sorted(tuple(sorted((p[i - 1], p[j - 1]))) for i, j in edges)) for p in perms
        )
        if canon not in seen:
            seen.add(canon)
            reps.append(Graph(t, frozenset(canon)))
    return reps


@dataclass(frozen=True)
class EquationSystem:
    """``lhs(x) = rhs`` over B_n with unknown x in B_n^k."""

    n: int
    k: int
    lhs: TermVector
    rhs: Tuple[LatticeElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "rhs", tuple(self.rhs))
        if self.lhs.arity != self.k:
            raise DomainError(f"left sides have arity {self.lhs.arity}, system declares k={self.k}")
        if len(self.rhs) != self.lhs.b:
            raise DomainError(f"{self.lhs.b} left sides but {len(self.rhs)} right sides")
        for u in self.rhs:
            if u.width != self.n:
                raise DomainError(f"right side of width {u.width} in a system over B_{self.n}")

    @property
    def b(self) -> int:
        return self.lhs.b

    def is_solution(self, x: Sequence[LatticeElement]) -> bool:
        if len(x) != self.k or any(c.width != self.n for c in x):
            return False
        return eval_vector(self.lhs, x) == self.rhs

    def to_text(self) -> str:
        lines = [f"eqsys n={self.n} k={self.k} b={self.b}"]
        lines += [f"{t}\t{u.to_hex()}" for t, u in zip(self.lhs, self.rhs)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "EquationSystem":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        m = re.fullmatch(r"\s*eqsys\s+n=(\d+)\s+k=(\d+)\s+b=(\d+)\s*", lines[0]) if lines else None
        if not m:
            raise DomainError("system text must start with 'eqsys n=<n> k=<k> b=<b>'")
        n, k, b = (int(g) for g in m.groups())
        if len(lines) - 1 != b:
            raise DomainError(f"header announces b={b} but {len(lines) - 1} equations follow")
        terms, rhs = [], []
        for line in lines[1:]:
            term_text, sep, hex_text = line.rpartition("\t")
            if not sep:
                raise DomainError(f"equation line lacks a tab separator: {line!r}")
            terms.append(parse_term(term_text, arity=k))
            rhs.append(LatticeElement.from_hex(hex_text, n))
        return cls(n, k, TermVector(k, tuple(terms)), tuple(rhs))


def color_var(v: int, color: str) -> Var:
    return Var(3 * (v - 1) + COLORS.index(color) + 1)


def vertex_term(v: int) -> Term:
    return fold_join([color_var(v, c) for c in COLORS])


def edge_term(i: int, j: int) -> Term:
    return fold_join([Meet(color_var(i, c), color_var(j, c)) for c in COLORS])


def encode_3coloring(g: Graph, n: int) -> EquationSystem:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    k = 3 * g.t
    b = max(g.t, 2)
    p1 = fold_meet([vertex_term(v) for v in range(1, g.t + 1)])
    if g.edges:
        pm = fold_join([edge_term(i, j) for i, j in g.sorted_edges()])
    else:
        pm = fold_meet([color_var(1, c) for c in COLORS])
    lhs = TermVector(k, (p1,) + (pm,) * (b - 1))
    rhs = (top(n),) + (bottom(n),) * (b - 1)
    return EquationSystem(n, k, lhs, rhs)


# Exhaustive solver
#
# A candidate x in B_n^k is the integer c whose bit (n*k - 1 - (j*n + a))
# holds atom a+1 of x_{j+1}; increasing c is lexicographic order on the
# bit string (x_1 atom 1, x_1 atom 2, ..., x_k atom n). Meet and join act
# atom by atom, so each atom slice of every equation can be evaluated for
# a whole block of candidates at once on bit-sliced masks.

def _position_masks(m: int) -> List[int]:
    """Mask q has bit c set iff bit q of c is set, for c < 2**m."""
    idx = np.arange(1 << m, dtype=np.uint32)
    return [
        int.from_bytes(np.packbits((idx >> q) & 1, bitorder="little").tobytes(), "little")
        for q in range(m)
    ]


def solve_system(sys: EquationSystem) -> Optional[Tuple[LatticeElement, ...]]:
    """Lexicographically least solution in B_n^k, or None if there is none."""
    total = sys.n * sys.k
    if total > SOLVER_MAX_BITS:
        raise CapacityError(
            f"exhaustive search over 2**{total} assignments exceeds the 2**{SOLVER_MAX_BITS} guard"
        )
    m = min(total, _CHUNK_BITS)
    low = _position_masks(m)
    full = (1 << (1 << m)) - 1
    for chunk in range(1 << (total - m)):
        # slice value of atom a of variable j for every candidate in the chunk
        def bit_mask(q):
            if q < m:
                return low[q]
            return full if chunk >> (q - m) & 1 else 0

        alive = full
        for a in range(sys.n):
            values = [bit_mask(total - 1 - (j * sys.n + a)) for j in range(sys.k)]
            for t, u in zip(sys.lhs, sys.rhs):
                v = evaluate_bits(t, values)
                alive &= v if u.bits >> a & 1 else ~v
                if not alive:
                    break
            if not alive:
                break
        if alive:
            c = ((alive & -alive).bit_length() - 1) | (chunk << m)
            return _decode_candidate(c, sys.n, sys.k)
    return None


def _decode_candidate(c: int, n: int, k: int) -> Tuple[LatticeElement, ...]:
    total = n * k
    comps = []
    for j in range(k):
        bits = 0
        for a in range(n):
            if c >> (total - 1 - (j * n + a)) & 1:
                bits |= 1 << a
        comps.append(LatticeElement(n, bits))
    return tuple(comps)


def iter_assignments(n: int, k: int):
    """All of B_n^k in the solver's lexicographic order (slow reference path)."""
    for c in range(1 << (n * k)):
        yield _decode_candidate(c, n, k)


def solve_system_naive(sys: EquationSystem) -> Optional[Tuple[LatticeElement, ...]]:
    """Reference solver: full evaluation of every candidate in order."""
    if sys.n * sys.k > SOLVER_MAX_BITS:
        raise CapacityError(f"2**{sys.n * sys.k} assignments exceed the guard")
    for x in iter_assignments(sys.n, sys.k):
        if sys.is_solution(x):
            return x
    return None


# Colorings

Coloring = Tuple[FrozenSet[str], ...]


def is_valid_coloring(c: Sequence[Iterable[str]], g: Graph) -> bool:
    if len(c) != g.t:
        return False
    sets = [frozenset(cv) for cv in c]
    if any(not cv or not cv <= set(COLORS) for cv in sets):
        return False
    return all(not (sets[i - 1] & sets[j - 1]) for i, j in g.edges)


def decode_coloring(sys: EquationSystem, solution: Sequence[LatticeElement], g: Graph) -> Coloring:
    """Read a coloring off a solution through atom 1: color c is in C_v iff atom 1 <= c_v."""
    if sys.k != 3 * g.t:
        raise DomainError(f"system has k={sys.k}, graph needs {3 * g.t} variables")
    if not sys.is_solution(solution):
        raise ContractError("the given assignment does not satisfy the system")
    coloring = tuple(
        frozenset(c for c in COLORS if solution[color_var(v, c).index - 1].bits & 1)
        for v in range(1, g.t + 1)
    )
    if not is_valid_coloring(coloring, g):  # pragma: no cover - would refute the reduction
        raise ContractError(f"decoded {coloring} is not a coloring")
    return coloring


def coloring_to_solution(c: Sequence[Iterable[str]], g: Graph, n: int) -> Tuple[LatticeElement, ...]:
    """Top for every (vertex, color) in the coloring, bottom elsewhere."""
    if not is_valid_coloring(c, g):
        raise DomainError(f"{c!r} is not a valid 3-coloring of the graph")
    x = []
    for cv in c:
        x += [top(n) if color in cv else bottom(n) for color in COLORS]
    return tuple(x)


def is_3colorable_oracle(g: Graph) -> Tuple[bool, Optional[Coloring]]:
    """Exhaustive single-color assignment over all 3**t maps."""
    if g.t > ORACLE_MAX_VERTICES:
        raise CapacityError(f"3-coloring oracle is limited to t <= {ORACLE_MAX_VERTICES}, got {g.t}")
    edges = g.sorted_edges()
    for assignment in itertools.product(range(3), repeat=g.t):
        if all(assignment[i - 1] != assignment[j - 1] for i, j in edges):
            return True, tuple(frozenset(COLORS[a]) for a in assignment)
    return False, None
