import random
from fractions import Fraction

import pytest

from ladderfilt import linalg
from ladderfilt.linalg import SparseMatrix, echelon_pivots, rank, suffix_ranks

from oracles import rational_rank


def random_matrix(rng, nrows, ncols, density=0.3, rank_hint=None):
    if rank_hint is not None:
        # product of random factors so the rank is at most rank_hint
        A = [[Fraction(rng.randint(-5, 5), rng.choice((1, 2, 3))) for _ in range(rank_hint)] for _ in range(nrows)]
        B = [[rng.randint(-3, 3) for _ in range(ncols)] for _ in range(rank_hint)]
        return [[sum(A[i][k] * B[k][j] for k in range(rank_hint)) for j in range(ncols)] for i in range(nrows)]
    return [[Fraction(rng.randint(-9, 9), rng.randint(1, 4)) if rng.random() < density else 0
             for _ in range(ncols)] for _ in range(nrows)]


def to_sparse(rows, ncols):
    return SparseMatrix(ncols, [{j: v for j, v in enumerate(r) if v} for r in rows])


def test_modular_rank_agrees_with_rational_rank():
    rng = random.Random(7)
    for trial in range(120):
        nr, nc = rng.randint(1, 30), rng.randint(1, 30)
        hint = rng.choice((None, None, rng.randint(1, min(nr, nc))))
        rows = random_matrix(rng, nr, nc, rng.choice((0.1, 0.3, 0.7)), hint)
        assert rank(to_sparse(rows, nc)) == rational_rank(rows), trial


def test_rational_rank_helpers_agree():
    rng = random.Random(1)
    rows = random_matrix(rng, 12, 10, 0.4)
    assert linalg.rational_rank(rows) == rational_rank(rows)


def test_zero_and_empty():
    assert rank(SparseMatrix(5)) == 0
    assert rank(SparseMatrix(3, [{0: 0, 1: 0}])) == 0


def test_entries_divisible_by_a_prime_do_not_break_rank():
    p = linalg.PRIMES[0]
    M = SparseMatrix(2, [{0: p, 1: 1}, {0: 2 * p, 1: 2}])
    assert rank(M) == 1
    M = SparseMatrix(2, [{0: Fraction(1, p), 1: 1}, {0: 1}])
    assert rank(M) == 2


def test_pivots_are_leftmost():
    M = SparseMatrix(4, [{2: 1, 3: 1}, {0: 1, 2: 1}, {0: 1, 3: 1}])
    assert sorted(echelon_pivots(M)) == [0, 2, 3]
    assert suffix_ranks([0, 2, 3], 4) == [3, 2, 2, 1, 0]


def test_dump_and_load_roundtrip(tmp_path):
    M = SparseMatrix(4, [{0: Fraction(1, 3), 3: -2}, {1: 5}])
    path = tmp_path / "m.txt"
    M.dump(path)
    assert path.read_text().splitlines()[1] == "0 0 1/3"
    N = SparseMatrix.load(path)
    assert N.rows == M.rows and N.ncols == 4


def test_column_index_checked():
    with pytest.raises(IndexError):
        SparseMatrix(2, [{2: 1}])
