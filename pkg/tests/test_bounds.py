import pytest

from ladderfilt.bounds import (MissingEntry, MuTable, bb_bound, bound_row, computed_mu_table,
                               conjecture3, lambda0_dim_bound, mu_indices, sandwich, sqnum)
from ladderfilt.errors import InfeasibleError
from ladderfilt.ladders import t_set


@pytest.mark.parametrize("n,q", [(0, 0), (1, 0), (2, 0), (3, 1), (4, 1), (5, 2), (6, 3), (12, 12)])
def test_sqnum(n, q):
    assert sqnum(n) == q


def test_sqnum_negative_is_zero():
    assert sqnum(-1) == sqnum(-6) == 0


def test_sqnum_shift_identity():
    for n in range(101):
        assert 1 + sqnum(n) + n // 2 == sqnum(n + 3)


@pytest.mark.parametrize("n,b", [(0, 1), (3, 2), (6, 4)])
def test_lambda0_bound(n, b):
    assert lambda0_dim_bound(n) == b


@pytest.mark.parametrize("m,u,v", [(5, 2, 2), (12, 2, 9), (6, 6, 1), (7, 4, 3), (4, 0, 2)])
def test_conjecture3(m, u, v):
    assert conjecture3(m, u) == v


def test_conjecture3_rejects_odd_u():
    with pytest.raises(ValueError):
        conjecture3(5, 3)


def test_mu_indices_follow_t_set():
    for j, o, e in mu_indices(8, 4):
        assert (0, o, e) in t_set(j, 4)


def _zero_table(m, u, d=1):
    t = MuTable()
    for j, o, e in mu_indices(m, u):
        t.set(j, u, o, e, d if (j, o, e) == (u, 0, 0) else 0, "supplied")
    return t


@pytest.mark.parametrize("m,u", [(5, 2), (8, 2), (7, 4), (9, 4), (8, 6)])
def test_single_term_collapse(m, u):
    t = _zero_table(m, u, d=3)
    extra = sqnum(m - 6) if u == 4 else 0
    assert bb_bound(m, u, t) == (1 + sqnum(m - u)) * 3 + extra


def test_bound_is_monotone():
    t = _zero_table(8, 4)
    base = bb_bound(8, 4, t)
    for key in list(t.entries):
        v, p = t.entries[key]
        t.set(*key, v + 1, p)
        assert bb_bound(8, 4, t) >= base
        t.set(*key, v, p)


def test_missing_entry_names_index():
    with pytest.raises(MissingEntry) as err:
        bb_bound(5, 2, MuTable())
    assert "(2,2,0,0)" in str(err.value)
    assert err.value.exit_code == 5


def test_mutable_roundtrip(tmp_path):
    t = _zero_table(6, 2)
    t.set(6, 2, 0, 1, 0, "assumed-zero")
    path = tmp_path / "mu.rows"
    t.dump(path)
    back = MuTable.load(path)
    assert back.entries == t.entries
    assert back.assumed() == [(6, 2, 0, 1)]


def test_computed_bound_sharp_small():
    t = computed_mu_table(6, 2)
    assert [bb_bound(m, 2, t) for m in range(2, 7)] == [1, 1, 1, 2, 2]


def test_sandwich_forces_top_entry():
    t = computed_mu_table(4, 4)
    entries = {e.index: e for e in sandwich(4, 4, 1, t)}
    assert entries[(4, 4, 0, 1)].proven_nonzero


def test_sandwich_single_term():
    t = _zero_table(2, 2)
    (entry,) = sandwich(2, 2, 1, t)
    assert entry.forced == 1 and entry.proven_nonzero


def test_sandwich_infeasible():
    t = _zero_table(5, 2, d=0)
    with pytest.raises(InfeasibleError):
        sandwich(5, 2, 2, t)


def test_bound_row():
    assert bound_row(6, 2, 2, 2) == "6,2,2,2,yes"
    assert bound_row(6, 2, 3, 2) == "6,2,3,2,no"
    assert bound_row(6, 2, 3, None) == "6,2,3,,"
