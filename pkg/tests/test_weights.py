import random
from itertools import islice

import pytest

from ladderfilt.diagram import build, canonicalize, closed_classes, enumerate_diagrams, parse, theta
from ladderfilt.lincomb import LinearCombination
from ladderfilt.relations import _ihx_vectors
from ladderfilt.weights import (Certificate, NPolynomial, certify_nonzero, combination_weight,
                                gl_weight, so_weight, symmetrized_weight, tensor_weight, weight)

DUMBBELL = build(2, 0, [(0, 1), (3, 4), (2, 5)])


def test_theta_golden_values():
    assert gl_weight(theta()).as_list() == [0, -2, 0, 2]
    assert so_weight(theta()).as_list() == [0, 2, -3, 1]


def test_theta_against_tensor_oracle():
    for n in (2, 3, 4):
        assert gl_weight(theta())(n) == round(tensor_weight(theta(), "gl", n))
    for n in (3, 4, 5):
        assert so_weight(theta())(n) == pytest.approx(2 * tensor_weight(theta(), "so", n))


def test_loop_edge_gives_zero():
    assert not gl_weight(DUMBBELL)
    assert not so_weight(DUMBBELL)


def _small_diagrams():
    for m, u in [(1, 0), (2, 0), (3, 0), (4, 0), (1, 2), (2, 2), (3, 2), (3, 4), (4, 2), (4, 4)]:
        for D in enumerate_diagrams(m, u).values():
            yield m, D


def test_state_sum_matches_tensor_contraction():
    rng = random.Random(5)
    for m, D in _small_diagrams():
        order = list(range(D.u))
        rng.shuffle(order)
        for n in (2, 3):
            gl = weight(D, "gl", order)(n)
            assert gl == round(tensor_weight(D, "gl", n, order))
            so = weight(D, "so", order)(n)
            assert so == pytest.approx(2 ** m * tensor_weight(D, "so", n, order), abs=1e-6)


def test_ihx_vectors_vanish():
    count = 0
    for m, u in [(2, 0), (3, 0), (4, 0), (2, 2), (3, 2), (4, 2)]:
        for D in enumerate_diagrams(m, u).values():
            for vec in _ihx_vectors(D):
                if not vec.terms:
                    continue
                for algebra in ("gl", "so"):
                    assert not combination_weight(vec, algebra), (m, u, vec)
                count += 1
    assert count >= 50


def test_as_relation_vanishes():
    D = next(iter(closed_classes(2).values()))
    code, sign = canonicalize(D)
    assert sign
    flipped = LinearCombination({code: 1}) + LinearCombination({code: 1})
    assert combination_weight(flipped, "gl") == gl_weight(parse(code)) * 2
    # a vertex reversal is the negative diagram
    inv = list(D.inv)
    a, b = 1, 2
    pa, pb = inv[a], inv[b]
    inv[a], inv[b] = pb, pa
    inv[pa], inv[pb] = b, a
    R = type(D)(tuple(inv), D.n3)
    assert gl_weight(R) == gl_weight(D) * -1


def test_bilinearity():
    rng = random.Random(1)
    codes = list(enumerate_diagrams(4, 0))
    for _ in range(10):
        x, y = rng.sample(codes, 2)
        a, b = rng.randint(-3, 3), rng.randint(-3, 3)
        lc = LinearCombination({x: a}) + LinearCombination({y: b})
        want = gl_weight(parse(x)) * a + gl_weight(parse(y)) * b
        assert combination_weight(lc, "gl") == want


def test_certificates():
    assert certify_nonzero(theta()).serialize() == "020000000100010001 closed gl 0,-2,0,2"
    (D,) = enumerate_diagrams(2, 2).values()
    assert certify_nonzero(D).serialize() == \
        "04000001010001000100020103 symmetrized gl 0,4,0,-4"


def test_zero_combination_is_unknown():
    assert certify_nonzero(LinearCombination()) is None
    assert certify_nonzero(DUMBBELL) is None


def test_certificate_roundtrip():
    line = "04000001010001000100020103 symmetrized gl 0,4,0,-4"
    assert Certificate.parse(line).serialize() == line


def test_symmetrized_weight_is_well_defined_on_codes():
    for D in islice(enumerate_diagrams(3, 2).values(), 5):
        code, sign = canonicalize(D)
        assert symmetrized_weight(D) == symmetrized_weight(parse(code)) * sign


def test_npolynomial_normalizes():
    p = NPolynomial({0: 1, 2: 0}) - NPolynomial({0: 1})
    assert not p and p.as_list() == [] and p == 0


def test_unknown_algebra():
    with pytest.raises(ValueError):
        weight(theta(), "sp")
