"""Generating sets of B_n.

A set G generates B_n (n >= 2) exactly when every atom is the meet of
the members of G above it. Reading the generators column-wise gives a
handy reformulation used by the vectorised paths below: give atom ``i``
the *signature* ``S_i = {j : atom i <= g_j}``. The meet of the
generators above atom ``i`` contains atom ``i'`` iff ``S_i`` is a
subset of ``S_i'``, so G generates iff the n signatures are pairwise
incomparable, i.e. form an n-element antichain of subsets of
``{1..|G|}``. Sperner's bound on such antichains is where ``lasp``
comes from.
"""

from __future__ import annotations

import itertools
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from .errors import CapacityError, DimensionError, DomainError, UnsupportedWidthError
from .lattice import LatticeElement, lasp

logger = logging.getLogger(__name__)

CLOSURE_MAX_WIDTH = 16
BRUTEFORCE_MAX_WIDTH = 8


@dataclass(frozen=True)
class GeneratingVector:
    """An ordered k-tuple of elements of B_n; components may repeat."""

    n: int
    components: Tuple[LatticeElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise DomainError("a generating vector needs at least one component")
        for c in self.components:
            if c.width != self.n:
                raise DimensionError(f"component of width {c.width} in a vector over B_{self.n}")

    @property
    def k(self) -> int:
        return len(self.components)

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def is_generating(self) -> bool:
        return is_generating(self.components, self.n)

    def to_hex(self) -> List[str]:
        return [c.to_hex() for c in self.components]


@dataclass
class SampleReport:
    n: int
    k: int
    trials: int
    generating_count: int
    seed: int
    elapsed: float = field(default=0.0, compare=False)

    @property
    def ratio(self) -> float:
        return self.generating_count / self.trials if self.trials else 0.0

    def to_line(self) -> str:
        return (
            f"n={self.n} k={self.k} tested={self.trials} "
            f"generating={self.generating_count} seed={self.seed} seconds={self.elapsed:.3f}"
        )


def _require_width(n: int) -> None:
    if n < 2:
        raise UnsupportedWidthError(
            f"generation is only defined here for n >= 2 (B_1 has no generating set "
            f"under binary meet and join), got n={n}"
        )


def _check_members(G: Sequence[LatticeElement], n: int) -> None:
    for g in G:
        if g.width != n:
            raise DimensionError(f"element of width {g.width} given for B_{n}")


def is_generating(G: Iterable[LatticeElement], n: int) -> bool:
    """True iff G generates B_n under binary meet and join.

    Every atom ``a`` must equal the meet of ``{g in G : a <= g}``; an
    empty meet is the top and so fails for n >= 2.
    """
    _require_width(n)
    G = list(G)
    if not G:
        raise DomainError("G must be nonempty")
    _check_members(G, n)
    full = (1 << n) - 1
    for i in range(n):
        m = full
        for g in G:
            if g.bits >> i & 1:
                m &= g.bits
        if m != 1 << i:
            return False
    return True


def closure_oracle(G: Iterable[LatticeElement], n: int) -> Set[LatticeElement]:
    """Sublattice generated by G, by pairwise meets and joins to a fixed point."""
    if n > CLOSURE_MAX_WIDTH:
        raise CapacityError(f"closure_oracle is limited to n <= {CLOSURE_MAX_WIDTH}, got {n}")
    G = list(G)
    _check_members(G, n)
    closed = {g.bits for g in G}
    frontier = set(closed)
    while frontier:
        new = set()
        for a in frontier:
            for b in closed:
                for c in (a & b, a | b):
                    if c not in closed:
                        new.add(c)
        closed |= new
        frontier = new
    return {LatticeElement(n, b) for b in closed}


def antichain_subsets(k: int, count: int) -> List[Tuple[int, ...]]:
    """The first ``count`` floor(k/2)-subsets of {1..k} in lexicographic order."""
    chosen = list(itertools.islice(itertools.combinations(range(1, k + 1), k // 2), count))
    if len(chosen) < count:
        raise DomainError(f"only {len(chosen)} middle subsets of a {k}-set, {count} requested")
    return chosen


def construct_genset(n: int) -> GeneratingVector:
    """A generating vector of B_n with the minimum number lasp(n) of components.

    The atoms of B_n are identified, in order, with the first n middle
    layer subsets H_1..H_n of {1..k}; component j is the element whose
    atoms are ``{i : j in H_i}``.
    """
    _require_width(n)
    k = lasp(n)
    H = antichain_subsets(k, n)
    columns = [0] * k
    for i, subset in enumerate(H):
        for j in subset:
            columns[j - 1] |= 1 << i
    return GeneratingVector(n, tuple(LatticeElement(n, c) for c in columns))


# Vectorised criterion

def _generating_mask(candidates: np.ndarray, n: int) -> np.ndarray:
    """Row-wise generating test for an (m, k) array of element bit patterns.

    Works on the signature reformulation; each atom's signature is a
    k-bit integer so this needs k <= 63.
    """
    m, k = candidates.shape
    shifts = np.arange(n, dtype=np.int64)
    # (m, k, n) membership of atom i in generator j
    member = (candidates[:, :, None] >> shifts) & 1
    weights = np.left_shift(np.int64(1), np.arange(k, dtype=np.int64))
    sig = np.einsum("mkn,k->mn", member, weights)
    ok = np.ones(m, dtype=bool)
    for a, b in itertools.combinations(range(n), 2):
        sa, sb = sig[:, a], sig[:, b]
        ok &= (sa & ~sb) != 0
        ok &= (sb & ~sa) != 0
    return ok


def _bit_matrix_generating(B: np.ndarray) -> bool:
    """Generating test for an (n, k) 0/1 matrix whose columns are the components.

    ``C[i, i']`` counts generators above atom i but not above atom i';
    a zero off the diagonal means atom i' survives in the meet for atom i.
    The diagonal is always zero, so exactly n zeros means generating.
    """
    F = B.astype(np.float32)
    C = F @ (1.0 - F).T
    return int(np.count_nonzero(C == 0)) == B.shape[0]


def min_genset_size_bruteforce(n: int, batch: int = 1 << 18) -> int:
    """Least k such that some k-subset of B_n generates, by exhaustive search.

    Subsets are scanned in lexicographic order of their element values and
    the search stops at the first generating one.
    """
    _require_width(n)
    if n > BRUTEFORCE_MAX_WIDTH:
        raise CapacityError(f"bruteforce search is limited to n <= {BRUTEFORCE_MAX_WIDTH}, got {n}")
    for k in range(1, n + 1):
        if find_generating_subset(n, k, batch) is not None:
            return k
    raise AssertionError("the atoms always generate")  # pragma: no cover


def find_generating_subset(n: int, k: int, batch: int = 1 << 18) -> Optional[Tuple[int, ...]]:
    """Lexicographically first generating k-subset of B_n, or None."""
    _require_width(n)
    if n > BRUTEFORCE_MAX_WIDTH:
        raise CapacityError(f"bruteforce search is limited to n <= {BRUTEFORCE_MAX_WIDTH}, got {n}")
    size = 1 << n
    if k > size:
        return None
    # split each k-subset into a prefix (looped in lex order) and a tail of
    # r elements taken from a precomputed lex table; the tails usable after
    # a prefix ending in ``a`` are the rows whose first entry exceeds ``a``
    r = min(k, 3)
    tails = np.array(list(itertools.combinations(range(size), r)), dtype=np.int64)
    firsts = tails[:, 0]
    for prefix in itertools.combinations(range(size), k - r):
        start = int(np.searchsorted(firsts, prefix[-1] + 1)) if prefix else 0
        for lo in range(start, len(tails), batch):
            chunk = tails[lo:lo + batch]
            cand = np.empty((len(chunk), k), dtype=np.int64)
            cand[:, :k - r] = prefix
            cand[:, k - r:] = chunk
            hits = np.flatnonzero(_generating_mask(cand, n))
            if hits.size:
                return tuple(int(x) for x in cand[hits[0]])
    return None


# Monte-Carlo sampling

def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    # counter-style keying: each trial's stream depends only on (seed, trial)
    return np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, trial])


def random_vector_matrix(n: int, k: int, seed: int, trial: int) -> np.ndarray:
    """The (n, k) 0/1 matrix of trial ``trial``; column j is component j."""
    rng = _trial_rng(seed, trial)
    raw = rng.integers(0, 256, size=(k, (n + 7) // 8), dtype=np.uint8)
    bits = np.unpackbits(raw, axis=1, bitorder="little")[:, :n]
    return np.ascontiguousarray(bits.T)


def random_vector(n: int, k: int, seed: int, trial: int) -> GeneratingVector:
    """Trial ``trial`` of the sampler as lattice elements (not necessarily generating)."""
    B = random_vector_matrix(n, k, seed, trial)
    comps = []
    for j in range(k):
        packed = np.packbits(B[:, j], bitorder="little").tobytes()
        comps.append(LatticeElement(n, int.from_bytes(packed, "little")))
    return GeneratingVector(n, tuple(comps))


def _count_range(n: int, k: int, seed: int, start: int, stop: int) -> int:
    return sum(_bit_matrix_generating(random_vector_matrix(n, k, seed, t)) for t in range(start, stop))


def sample_generating_vectors(
    n: int, k: int, trials: int, seed: int, workers: int = 1
) -> SampleReport:
    """Draw ``trials`` uniform vectors from B_n^k and count the generating ones.

    Trial ``t`` is drawn from a stream keyed by ``(seed, t)`` so the count
    does not depend on ``workers``. A sequential run interrupted with
    Ctrl-C returns a report over the trials completed so far.
    """
    _require_width(n)
    if k < 1 or trials < 1:
        raise DomainError(f"need k >= 1 and trials >= 1, got k={k}, trials={trials}")
    if workers < 1:
        raise DomainError(f"workers must be positive, got {workers}")
    t0 = time.perf_counter()
    done, count = 0, 0
    if workers == 1:
        try:
            for t in range(trials):
                count += _bit_matrix_generating(random_vector_matrix(n, k, seed, t))
                done += 1
        except KeyboardInterrupt:
            logger.warning("sampling interrupted after %d of %d trials", done, trials)
    else:
        bounds = np.linspace(0, trials, workers + 1).astype(int)
        with ProcessPoolExecutor(max_workers=min(workers, os.cpu_count() or 1)) as pool:
            futures = [
                pool.submit(_count_range, n, k, seed, int(lo), int(hi))
                for lo, hi in zip(bounds[:-1], bounds[1:])
            ]
            count = sum(f.result() for f in futures)
        done = trials
    return SampleReport(n, k, done, count, seed, time.perf_counter() - t0)
