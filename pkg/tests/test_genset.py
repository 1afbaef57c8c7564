import itertools
import random

import numpy as np
import pytest

from boolgen.errors import CapacityError, DimensionError, DomainError, UnsupportedWidthError
from boolgen.genset import (
    GeneratingVector,
    SampleReport,
    _bit_matrix_generating,
    _generating_mask,
    antichain_subsets,
    closure_oracle,
    construct_genset,
    find_generating_subset,
    is_generating,
    min_genset_size_bruteforce,
    random_vector,
    random_vector_matrix,
    sample_generating_vectors,
)
from boolgen.lattice import LatticeElement, atoms, lasp, meet


def E(s):
    return LatticeElement.from_bitstring(s)


def generates_by_closure(G, n):
    return len(closure_oracle(G, n)) == 2**n


# closure oracle

def test_closure_singleton():
    x = E("0110")
    assert closure_oracle([x], 4) == {x}


def test_closure_two_atoms_of_B2():
    assert closure_oracle([E("10"), E("01")], 2) == {E("00"), E("10"), E("01"), E("11")}


def test_closure_atoms_of_B3():
    assert len(closure_oracle(atoms(3), 3)) == 8


def test_closure_capacity():
    with pytest.raises(CapacityError):
        closure_oracle([LatticeElement(17, 1)], 17)


# is_generating examples, each cross-checked with the closure oracle

@pytest.mark.parametrize(
    "G, n, expected",
    [
        (["10", "01"], 2, True),
        (["10", "11"], 2, False),
        (["100", "010", "001"], 3, True),
        (["110", "011"], 3, False),
        (["110", "011", "101"], 3, True),
    ],
)
def test_is_generating_examples(G, n, expected):
    G = [E(s) for s in G]
    assert generates_by_closure(G, n) is expected
    assert is_generating(G, n) is expected


def test_is_generating_construct_6():
    G = construct_genset(6)
    assert is_generating(G.components, 6)
    assert generates_by_closure(G.components, 6)


def test_is_generating_errors():
    with pytest.raises(UnsupportedWidthError):
        is_generating([E("1")], 1)
    with pytest.raises(DomainError):
        is_generating([], 3)
    with pytest.raises(DimensionError):
        is_generating([E("10"), E("100")], 2)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_oracle_equivalence_random(n):
    rng = random.Random(1000 + n)
    for _ in range(1000):
        size = rng.randint(1, 2**n)
        G = [LatticeElement(n, b) for b in rng.sample(range(2**n), size)]
        assert is_generating(G, n) == generates_by_closure(G, n)


@pytest.mark.parametrize("n", [2, 3])
def test_oracle_equivalence_exhaustive(n):
    universe = [LatticeElement(n, b) for b in range(2**n)]
    for r in range(1, len(universe) + 1):
        for G in itertools.combinations(universe, r):
            assert is_generating(G, n) == generates_by_closure(G, n)


def test_duplicates_do_not_matter():
    G = construct_genset(10)
    doubled = list(G.components) + list(G.components)
    assert is_generating(doubled, 10)
    assert GeneratingVector(10, doubled).k == 2 * G.k


# construction

def test_construct_n2():
    G = construct_genset(2)
    assert G.k == 2
    assert list(G) == atoms(2)


def test_construct_n6_structure():
    assert antichain_subsets(4, 6) == [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    G = construct_genset(6)
    expected = [[1, 2, 3], [1, 4, 5], [2, 4, 6], [3, 5, 6]]
    assert [x.atom_indices() for x in G] == expected
    assert meet(G[0], G[1]) == LatticeElement.from_atoms(6, [1])
    assert meet(G[2], G[3]) == LatticeElement.from_atoms(6, [6])


def test_construct_n1000():
    G = construct_genset(1000)
    assert G.k == 13
    assert G.is_generating()


@pytest.mark.parametrize("n", list(range(2, 60)) + [99, 100, 252, 253, 462, 924, 925, 1000, 1716, 2000])
def test_construct_grid(n):
    G = construct_genset(n)
    assert G.k == lasp(n)
    assert is_generating(G.components, n)


@pytest.mark.parametrize("n", [6, 20, 70, 500])
def test_construction_antichain(n):
    H = [set(h) for h in antichain_subsets(lasp(n), n)]
    assert len({frozenset(h) for h in H}) == n
    for a, b in itertools.combinations(H, 2):
        assert not a <= b and not b <= a


def test_construct_rejects_n1():
    with pytest.raises(UnsupportedWidthError):
        construct_genset(1)


# exhaustive minimum

@pytest.mark.parametrize("n, expected", [(2, 2), (3, 3), (4, 4), (5, 4), (6, 4)])
def test_min_genset_bruteforce(n, expected):
    assert min_genset_size_bruteforce(n) == expected == lasp(n)


def test_find_generating_subset_is_lex_first():
    # n=3, k=3: brute force over python combinations agrees
    universe = range(8)
    first = next(
        c for c in itertools.combinations(universe, 3) if is_generating([LatticeElement(3, b) for b in c], 3)
    )
    assert find_generating_subset(3, 3) == first
    assert find_generating_subset(3, 2) is None


def test_bruteforce_capacity():
    with pytest.raises(CapacityError):
        min_genset_size_bruteforce(9)
    with pytest.raises(UnsupportedWidthError):
        min_genset_size_bruteforce(1)


@pytest.mark.parametrize("n, k", [(4, 3), (5, 4), (6, 4)])
def test_vectorised_mask_agrees(n, k):
    rng = np.random.default_rng(n * 10 + k)
    cand = rng.integers(0, 2**n, size=(500, k))
    mask = _generating_mask(cand, n)
    for row, ok in zip(cand, mask):
        assert ok == is_generating([LatticeElement(n, int(b)) for b in row], n)


def test_bit_matrix_agrees():
    for trial in range(300):
        n, k = 12, 5
        h = random_vector(n, k, seed=3, trial=trial)
        assert _bit_matrix_generating(random_vector_matrix(n, k, 3, trial)) == h.is_generating()
    B = np.array([[c.bits >> i & 1 for c in construct_genset(70)] for i in range(70)], dtype=np.uint8)
    assert _bit_matrix_generating(B)


# sampler

def test_random_vector_is_seeded():
    assert random_vector(50, 4, 1, 0) == random_vector(50, 4, 1, 0)
    assert random_vector(50, 4, 1, 0) != random_vector(50, 4, 1, 1)
    assert random_vector(50, 4, 1, 0) != random_vector(50, 4, 2, 0)


def test_sampler_k_below_lasp_never_generates():
    report = sample_generating_vectors(1000, 12, 100, seed=5)
    assert report.generating_count == 0
    assert report.trials == 100


def test_sampler_worker_independence():
    a = sample_generating_vectors(60, 28, 120, seed=11)
    b = sample_generating_vectors(60, 28, 120, seed=11, workers=3)
    assert a == b
    assert 0 < a.generating_count < a.trials


def test_sampler_determinism():
    a = sample_generating_vectors(200, 20, 50, seed=2)
    b = sample_generating_vectors(200, 20, 50, seed=2)
    assert a.generating_count == b.generating_count


def test_report_line():
    r = SampleReport(1000, 50, 100000, 59003, 7, 1.5)
    assert r.to_line() == "n=1000 k=50 tested=100000 generating=59003 seed=7 seconds=1.500"
    assert r.ratio == pytest.approx(0.59003)


def test_sampler_validation():
    with pytest.raises(UnsupportedWidthError):
        sample_generating_vectors(1, 5, 10, 0)
    with pytest.raises(DomainError):
        sample_generating_vectors(10, 0, 10, 0)
    with pytest.raises(DomainError):
        sample_generating_vectors(10, 5, 0, 0)
