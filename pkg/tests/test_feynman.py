import pytest

from ladderfilt import feynman as F
from ladderfilt.errors import ParseError, PreconditionError, StructureError
from ladderfilt.ladders import delta, delta_of_code

DEGREES = [(3, 2, 0, 0), (4, 2, 1, 0), (4, 4, 0, 1), (5, 4, 1, 0), (6, 4, 1, 1), (6, 6, 0, 0), (7, 6, 0, 2)]


@pytest.mark.parametrize("deg", DEGREES)
def test_canonical_roundtrip(deg):
    for code, G in F.enumerate_feynman(deg).items():
        assert F.canonicalize_feynman(G) == (code, 1)
        assert G.degree == deg
        H = F.from_text(F.to_text(G))
        assert F.canonicalize_feynman(H) == (code, 1)


@pytest.mark.parametrize("deg", DEGREES)
def test_r_preserves_degree_and_builds_the_ladders(deg):
    m, u, p, q = deg
    for G in F.enumerate_feynman(deg).values():
        D = F.r(G)
        assert (D.m, D.u) == (m, u)
        if F.excess(G) == 0:
            assert delta(D) == (0, p, q)


def test_phi_adds_free_squares():
    for G in F.enumerate_feynman((4, 4, 0, 1)).values():
        img = F.phi(1, G)
        for code in img.terms:
            assert delta_of_code(code)[0] == 1
    with pytest.raises(PreconditionError):
        F.phi(1, next(iter(F.enumerate_feynman((3, 2, 0, 0)).values())))


def test_photon_edges_must_pair_photon_ends():
    with pytest.raises(StructureError):
        F.FeynmanGraph((F.PHOTON, F.NORMAL), (3, 4, 5, 0, 1, 2))


def test_text_format_fields():
    G = next(iter(F.enumerate_feynman((4, 4, 0, 1)).values()))
    text = F.to_text(G)
    assert "vertextype tetravalent univalent univalent univalent univalent" in text
    assert "edgetype normal normal normal normal" in text


@pytest.mark.parametrize("deg,value", [((1, 0, 0, 0), 1), ((2, 2, 0, 0), 1), ((4, 4, 0, 1), 1),
                                       ((5, 4, 1, 0), 0), ((6, 6, 0, 0), 1), ((4, 2, 0, 1), 0),
                                       ((5, 2, 1, 0), 0)])
def test_mu_values(deg, value):
    assert F.mu(*deg) == value


def test_forbidden_short_cycles():
    for G in F.enumerate_feynman((5, 2, 0, 0)).values():
        why = F.forbidden(G, 5)
        cycles = {len(v) for v, _ in F.simple_cycles(G, 3)}
        if 1 in cycles or 2 in cycles or 3 in cycles:
            assert why in ("cycle1", "cycle2", "cycle3")
        else:
            assert why is None


def test_pattern_file_parsing(tmp_path):
    good = tmp_path / "ok.cycles"
    good.write_text("# a square with one photon edge\ncycle sq p~pnn\n")
    (pat,) = F.load_patterns(good)
    assert pat.name == "sq" and pat.photon == (True, False, False, False)
    bad = tmp_path / "bad.cycles"
    bad.write_text("cycle sq nxn\n")
    with pytest.raises(ParseError):
        F.load_patterns(bad)
    assert F.load_patterns() == []


@pytest.mark.parametrize("m,u,p,q,f", [(4, 4, 0, 1, 0), (4, 4, 0, 1, 1), (5, 4, 1, 0, 0),
                                       (5, 4, 0, 1, 1), (6, 6, 0, 0, 0), (4, 2, 0, 1, 0),
                                       (5, 2, 1, 0, 0), (6, 4, 0, 2, 0)])
def test_relations_and_kills_map_to_zero(m, u, p, q, f):
    assert F.validate_cell(m, u, p, q, f) == {}
