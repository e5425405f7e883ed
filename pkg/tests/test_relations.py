import pytest

from ladderfilt import relations as R
from ladderfilt.diagram import canonicalize, enumerate_diagrams, theta
from ladderfilt.errors import ParseError
from ladderfilt.ladders import ladder_diagram
from ladderfilt.lincomb import LinearCombination

from oracles import count_embeddings

CORPUS = ["IHX", "LI", "LIHX", "LL", "LS", "pentagon", "s", "star", "t", "x"]


def test_shipped_corpus():
    S = R.load_schemas()
    assert sorted(S) == CORPUS
    assert all(S[name].provenance for name in CORPUS)
    assert S["x"].is_kill_family
    assert S["LS"].variables == ["n"]
    assert S["LL"].variables == ["k", "n"]


def test_corpus_hash_is_stable():
    assert R.corpus_hash() == R.corpus_hash()
    assert len(R.corpus_hash()) == 16


@pytest.mark.parametrize("text,needle", [
    ("schema a\nends 3\nterm 1\n  vertex v\n  rotation v 1 2 3\nterm 1\n  strand 1 2\n", "end arity"),
    ("schema a\nends 3\nterm 1\n  vertex v\n  rotation v 1 2 x\n", "used 1 times"),
    ("schema a\nends 3\nterm 1\n  frob\n", "unknown keyword"),
    ("ends 3\n", "before any schema"),
    ("schema a\nends 4\nterm 1\n  ladder A n+ odd 1 2 3 4\n", "rung expression"),
])
def test_parse_errors(text, needle):
    with pytest.raises(ParseError, match=needle):
        R.parse_schemas(text)


def test_parse_error_carries_line_number():
    with pytest.raises(ParseError) as info:
        R.parse_schemas("schema a\nends 3\nterm one\n")
    assert info.value.lineno == 3


@pytest.mark.parametrize("name,values", [("LS", {"n": 3}), ("LS", {"n": 5}), ("s", {}),
                                         ("LL", {"n": 0, "k": 0}), ("LL", {"n": 2, "k": 1})])
def test_instantiation_is_homogeneous(name, values):
    terms = R.instantiate(R.load_schemas()[name], **values)
    assert len({len(F.rot) for _, F in terms}) == 1


def test_instantiation_rejects_wrong_parity():
    with pytest.raises(ValueError):
        R.instantiate(R.load_schemas()["LS"], n=4)


def test_single_vertex_embeds_six_ways_in_theta():
    F = R.Fragment(((1, 2, 3),), (), 3)
    assert len(R.match(theta(), F)) == 6
    assert len(R.match(theta(), F, allow_reversal=True)) == 12


@pytest.mark.parametrize("m,u", [(1, 0), (2, 2), (3, 2), (4, 2)])
def test_matcher_agrees_with_brute_force(m, u):
    patterns = [R.instantiate(R.load_schemas()["IHX"])[0][1],
                R.Fragment(((1, 2, 3),), (), 3),
                R.instantiate(R.load_schemas()["s"])[0][1]]
    for D in enumerate_diagrams(m, u).values():
        for F in patterns:
            if len(F.rot) <= D.n3:
                assert len(R.match(D, F)) == count_embeddings(D, F.rot, F.ends)


def _leg_swap(D, a, b):
    perm = list(range(len(D.inv)))
    base = 3 * D.n3
    perm[base + a], perm[base + b] = base + b, base + a
    return D.relabel(perm)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_instantiated_ladder_relation_matches_drawn_ladder(n):
    sch = R.parse_schemas("schema swap\nends 4\nterm 1\n  ladder A n any 1 2 3 4\n"
                          "term -1\n  ladder A n any 2 1 3 4\n")[0]
    host = ladder_diagram(n)
    expected = LinearCombination.from_signed([(1, canonicalize(host)),
                                              (-1, canonicalize(_leg_swap(host, 0, 1)))])
    got = {v.key() for v in R.schema_vectors(host, sch, {"n": n}) if v}
    if expected:
        assert expected.key() in got
    else:
        assert not got


def test_ihx_quotient_and_trivial_cases():
    assert R.quotient_dim(2, 2) == 1
    assert R.quotient_dim(2, 2, []) == len(enumerate_diagrams(2, 2))
    assert R.relation_vectors(2, 2, []) == []


@pytest.mark.parametrize("m,u", [(3, 0), (4, 2), (4, 4), (5, 4)])
def test_adding_schemas_never_increases_dimension(m, u):
    assert R.quotient_dim(m, u, ["IHX", "x"]) <= R.quotient_dim(m, u, ["IHX"]) <= R.quotient_dim(m, u, [])


@pytest.mark.parametrize("name", ["s", "LS", "LIHX", "LI"])
def test_reconstructed_ladder_schemas_hold(name):
    S = R.load_schemas()
    for m, u in [(5, 4), (6, 4), (7, 6)]:
        assert R.holds(S[name], m, u)


@pytest.mark.parametrize("name", ["s", "LS", "LIHX"])
def test_wrong_sign_variants_fail(name):
    text = S_TEXT[name]
    assert not R.holds(R.parse_schemas(text)[0], 6, 4)


S_TEXT = {
    "s": "schema s\nends 4\nterm 1\n  ladder A 2 even 1 2 3 4\nterm 1\n  ladder A 2 even 2 1 3 4\n",
    "LS": "schema LS\nends 4\nterm 1\n  ladder A n odd 1 2 3 4\nterm 1\n  ladder A n odd 2 1 3 4\n",
    "LIHX": ("schema LIHX\nends 4\nterm 1\n  ladder A n odd 1 2 3 4\nterm -1\n  ladder A n odd 1 3 2 4\n"
             "term 1\n  ladder A n odd 1 4 2 3\n"),
}


def test_kill_schemas_hold():
    S = R.load_schemas()
    assert R.holds(S["t"], 6, 4)
    assert R.holds(S["star"], 8, 5)
    assert R.holds(S["pentagon"], 8, 5)
