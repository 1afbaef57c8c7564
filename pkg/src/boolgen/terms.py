"""Constant-free lattice terms over variables x1..xk.

Terms are binary trees of ``Var``, ``Meet`` and ``Join`` nodes. On the
wire they are s-expressions::

    (| (& x1 x2) x3)

``&`` is meet and ``|`` is join. The parser also accepts more than two
operands, ``(& x1 x2 x3)``, folding them to the left; the printer always
emits the binary form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DomainError, GenerationError, TermSyntaxError
from .lattice import LatticeElement, join, meet

__all__ = [
    "Var",
    "Meet",
    "Join",
    "Term",
    "TermVector",
    "evaluate",
    "eval_vector",
    "parse_term",
    "format_term",
    "fold_meet",
    "fold_join",
    "random_term",
    "random_term_vector",
    "SizeParams",
]

RETRY_BUDGET = 1000


@dataclass(frozen=True)
class Var:
    index: int  # 1-based

    def __post_init__(self):
        if self.index < 1:
            raise DomainError(f"variable index must be >= 1, got {self.index}")

    def __str__(self):
        return f"x{self.index}"


@dataclass(frozen=True)
class Meet:
    left: "Term"
    right: "Term"

    def __str__(self):
        return f"(& {self.left} {self.right})"


@dataclass(frozen=True)
class Join:
    left: "Term"
    right: "Term"

    def __str__(self):
        return f"(| {self.left} {self.right})"


Term = Union[Var, Meet, Join]


def fold_meet(terms: Sequence[Term]) -> Term:
    return reduce(Meet, terms)


def fold_join(terms: Sequence[Term]) -> Term:
    return reduce(Join, terms)


def max_var(t: Term) -> int:
    if isinstance(t, Var):
        return t.index
    return max(max_var(t.left), max_var(t.right))


def node_count(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + node_count(t.left) + node_count(t.right)


def evaluate(t: Term, h: Sequence[LatticeElement]) -> LatticeElement:
    """Value of ``t`` with ``x_i := h[i-1]``."""
    if isinstance(t, Var):
        if t.index > len(h):
            raise DomainError(f"x{t.index} has no value in a vector of dimension {len(h)}")
        return h[t.index - 1]
    if isinstance(t, Meet):
        return meet(evaluate(t.left, h), evaluate(t.right, h))
    return join(evaluate(t.left, h), evaluate(t.right, h))


def evaluate_bits(t: Term, values: Sequence[int]) -> int:
    """Like ``evaluate`` on raw integers; no width checks.

    Since meet and join act bitwise, ``values`` may equally hold
    bit-sliced candidate masks.
    """
    if isinstance(t, Var):
        return values[t.index - 1]
    if isinstance(t, Meet):
        return evaluate_bits(t.left, values) & evaluate_bits(t.right, values)
    return evaluate_bits(t.left, values) | evaluate_bits(t.right, values)


@dataclass(frozen=True)
class TermVector:
    arity: int
    components: Tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise DomainError("a term vector needs b >= 1 components")
        if self.arity < 1:
            raise DomainError(f"arity must be >= 1, got {self.arity}")
        for t in self.components:
            if max_var(t) > self.arity:
                raise DomainError(f"term {t} uses a variable beyond arity {self.arity}")

    @property
    def b(self) -> int:
        return len(self.components)

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def to_text(self) -> str:
        lines = [f"termvec k={self.arity} b={self.b}"]
        lines += [format_term(t) for t in self.components]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "TermVector":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise TermSyntaxError("empty term vector", 0)
        m = re.fullmatch(r"\s*termvec\s+k=(\d+)\s+b=(\d+)\s*", lines[0])
        if not m:
            raise TermSyntaxError(f"bad header {lines[0]!r}", 0)
        k, b = int(m.group(1)), int(m.group(2))
        if len(lines) - 1 != b:
            raise DomainError(f"header announces b={b} but {len(lines) - 1} terms follow")
        return cls(k, tuple(parse_term(ln, arity=k) for ln in lines[1:]))


def eval_vector(p: TermVector, h: Sequence[LatticeElement]) -> Tuple[LatticeElement, ...]:
    if p.arity > len(h):
        raise DomainError(f"term vector of arity {p.arity} evaluated on a vector of dimension {len(h)}")
    return tuple(evaluate(t, h) for t in p.components)


# Wire syntax

_TOKEN = re.compile(r"\s*(?:(\()|(\))|([&|])|x(\d+)|(\S))")


def _tokens(text: str):
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        start = m.end() - len(m.group().lstrip())
        if m.group(5) is not None:
            raise TermSyntaxError(f"unexpected character {m.group(5)!r}", start)
        yield m.lastindex, m.group(m.lastindex), start
        pos = m.end()
    yield None, None, len(text)


def parse_term(text: str, arity: Optional[int] = None) -> Term:
    """Parse one s-expression term; ``arity`` bounds the variable indices."""
    tokens = _tokens(text)
    current = [next(tokens)]

    def advance():
        current[0] = next(tokens)

    def expr() -> Term:
        kind, value, pos = current[0]
        if kind == 4:
            index = int(value)
            if index < 1:
                raise TermSyntaxError("variables are numbered from x1", pos)
            if arity is not None and index > arity:
                raise TermSyntaxError(f"x{index} exceeds arity {arity}", pos)
            advance()
            return Var(index)
        if kind == 1:
            advance()
            kind, op, pos = current[0]
            if kind != 3:
                raise TermSyntaxError("expected '&' or '|'", pos)
            advance()
            args = []
            while current[0][0] not in (2, None):
                args.append(expr())
            if current[0][0] is None:
                raise TermSyntaxError("unbalanced parenthesis, unexpected end of input", current[0][2])
            if len(args) < 2:
                raise TermSyntaxError(f"'{op}' needs at least two operands", pos)
            advance()
            return fold_meet(args) if op == "&" else fold_join(args)
        if kind is None:
            raise TermSyntaxError("unexpected end of input", pos)
        raise TermSyntaxError(f"unexpected {value!r}", pos)

    result = expr()
    if current[0][0] is not None:
        raise TermSyntaxError("trailing input", current[0][2])
    return result


def format_term(t: Term) -> str:
    return str(t)


# Random generation

@dataclass(frozen=True)
class SizeParams:
    """Shape of random terms: total node count in [min_nodes, max_nodes]
    (only odd counts are possible for binary trees) and the probability
    of choosing a join at an internal node."""

    min_nodes: int = 5
    max_nodes: int = 15
    join_bias: float = 0.5

    def __post_init__(self):
        if not 1 <= self.min_nodes <= self.max_nodes:
            raise DomainError(f"need 1 <= min_nodes <= max_nodes, got {self.min_nodes}, {self.max_nodes}")
        if self.max_nodes == self.min_nodes and self.min_nodes % 2 == 0:
            raise DomainError(f"no binary term has exactly {self.min_nodes} nodes")
        if not 0.0 <= self.join_bias <= 1.0:
            raise DomainError(f"join_bias must lie in [0, 1], got {self.join_bias}")

    def odd_sizes(self) -> List[int]:
        lo = self.min_nodes | 1
        return list(range(lo, self.max_nodes + 1, 2))


def random_term(k: int, size: int, join_bias: float, rng: np.random.Generator) -> Term:
    """A uniformly shaped random term with exactly ``size`` nodes (odd)."""
    if size == 1:
        return Var(int(rng.integers(1, k + 1)))
    internal = (size - 1) // 2
    left_internal = int(rng.integers(0, internal))
    left = random_term(k, 2 * left_internal + 1, join_bias, rng)
    right = random_term(k, size - 1 - (2 * left_internal + 1), join_bias, rng)
    return Join(left, right) if rng.random() < join_bias else Meet(left, right)


def random_term_vector(
    b: int,
    k: int,
    size_params: SizeParams = SizeParams(),
    seed: int = 0,
    h: Optional[Sequence[LatticeElement]] = None,
    retries: int = RETRY_BUDGET,
) -> TermVector:
    """``b`` independent random k-ary terms.

    Component ``i`` is drawn from a stream keyed by ``(seed, i)``. When
    a master key ``h`` is given, any term whose value at ``h`` is one of
    the components of ``h`` is redrawn, so that no ``p_i(h)`` reveals a
    key component directly.
    """
    if b < 1 or k < 1:
        raise DomainError(f"need b >= 1 and k >= 1, got b={b}, k={k}")
    if h is not None and len(h) < k:
        raise DomainError(f"master key has dimension {len(h)}, terms use {k} variables")
    sizes = size_params.odd_sizes()
    forbidden = {c.bits for c in h} if h is not None else set()
    values = [c.bits for c in h] if h is not None else None
    terms = []
    for i in range(b):
        rng = np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, i])
        for _ in range(retries):
            t = random_term(k, sizes[int(rng.integers(len(sizes)))], size_params.join_bias, rng)
            if values is None or evaluate_bits(t, values) not in forbidden:
                terms.append(t)
                break
        else:
            raise GenerationError(
                f"no admissible term for component {i} after {retries} draws; "
                f"the key may collapse every small term onto one of its components"
            )
    return TermVector(k, tuple(terms))
