import random

import pytest

from ladderfilt.diagram import canonicalize, enumerate_diagrams, theta
from ladderfilt.errors import PreconditionError
from ladderfilt.ladders import (add_square, admissible, complete_reduction, delta,
                                filtration_dims, ladder_diagram, ladder_report, maximal_ladders,
                                reduce_square, s, t_set)
from ladderfilt.relations import quotient_dim


def test_t_set_examples():
    assert t_set(1, 0) == [(0, 0, 0)]
    assert t_set(4, 4) == [(0, 0, 0), (0, 0, 1)]
    assert t_set(6, 4) == [(0, 0, 0), (0, 0, 1), (0, 0, 2), (0, 1, 0), (1, 0, 1)]


def test_t_set_is_sorted_and_starts_at_zero():
    for m in range(1, 10):
        for u in range(0, m + 2):
            ts = t_set(m, u)
            assert ts == sorted(ts) and ts[0] == (0, 0, 0)
            assert all(admissible(m, u, t) for t in ts)


@pytest.mark.parametrize("n,expected", [(2, (0, 0, 1)), (3, (0, 1, 0)), (4, (1, 0, 1)),
                                        (5, (1, 1, 0)), (6, (2, 0, 1))])
def test_delta_of_single_ladders(n, expected):
    assert delta(ladder_diagram(n)) == expected


def test_t_set_empty_without_diagrams():
    # cyclomatic number m - u + 1 < 0
    assert t_set(3, 5) == []


def test_theta_has_no_ladder():
    assert ladder_report(theta()).delta == (0, 0, 0)


def test_reduction_examples():
    D = ladder_diagram(5)
    E = reduce_square(D, maximal_ladders(D)[0])
    assert (E.m, delta(E)) == (D.m - 2, (0, 1, 0))
    F = complete_reduction(ladder_diagram(6))
    assert F.m == ladder_diagram(6).m - 4 and delta(F) == (0, 0, 1)
    with pytest.raises(PreconditionError):
        reduce_square(ladder_diagram(3), maximal_ladders(ladder_diagram(3))[0])


def test_completely_reduced_input_is_fixed():
    for D in enumerate_diagrams(5, 4).values():
        if delta(D)[0] == 0:
            assert complete_reduction(D) is D


def test_add_then_reduce_is_identity():
    for D in enumerate_diagrams(6, 4).values():
        for L in maximal_ladders(D):
            E = add_square(D, L)
            assert delta(E)[0] == delta(D)[0] + 1
            long = [M for M in maximal_ladders(E) if M.rungs == L.rungs + 2]
            assert any(canonicalize(reduce_square(E, M)) == canonicalize(D) for M in long)


def test_square_insertion_raises_f():
    for D in enumerate_diagrams(5, 4).values():
        if maximal_ladders(D):
            assert delta(s(D))[0] == delta(D)[0] + 1


def test_reduction_order_independence_sample():
    rng = random.Random(5)
    bases = [D for D in enumerate_diagrams(6, 4).values() if len(maximal_ladders(D)) >= 1]
    for _ in range(40):
        D = rng.choice(bases)
        for _ in range(rng.randint(2, 3)):
            D = add_square(D, rng.choice(maximal_ladders(D)))
        ref = canonicalize(complete_reduction(D))
        assert canonicalize(complete_reduction(D, random.Random(rng.random()))) == ref


def test_delta_is_admissible_small():
    for m in range(1, 6):
        for u in range(0, 2 * m + 1):
            for D in enumerate_diagrams(m, u).values():
                assert admissible(m, u, delta(D))


@pytest.mark.parametrize("m,u,t,dim_g", [(1, 0, (0, 0, 0), 1), (2, 2, (0, 0, 0), 1),
                                         (4, 4, (0, 0, 1), 1), (6, 4, (1, 0, 1), 1)])
def test_table_entries(m, u, t, dim_g):
    assert filtration_dims(m, u)[t][1] == dim_g


@pytest.mark.parametrize("m,u", [(3, 2), (4, 4), (5, 4), (6, 4), (6, 6)])
def test_quotients_telescope(m, u):
    dims = filtration_dims(m, u)
    assert sum(g for _, g in dims.values()) == quotient_dim(m, u, ["IHX", "x"])
    assert dims[(0, 0, 0)][0] == quotient_dim(m, u, ["IHX", "x"])
