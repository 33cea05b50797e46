import json
import time
from pathlib import Path

import numpy as np
import pytest

from ovalis import trigonal as TR
from ovalis.trigonal import Run, Tangency, TrigonalLScheme

FIXTURES = Path(TR.__file__).parent / "data" / "fixtures"


def cyclic_contains(seq, pattern):
    doubled = list(seq) * 2
    return any(doubled[i:i + len(pattern)] == list(pattern) for i in range(len(seq)))


def _copy(c):
    return TR.Completion.from_json(json.loads(json.dumps(c.to_json())))


def _found(rg, n):
    r = TR.search_completion(rg, n)
    assert r.status == "Found", r
    return r.completion


# --- encoding ---------------------------------------------------------------------

def test_oval_and_bridge_patterns():
    ls = TrigonalLScheme(2, (Tangency("up"), Run("three"), Tangency("down"), Run("one")))
    rg = TR.encode_real_graph(ls)
    assert cyclic_contains(rg.vertices, ["x", "*", "o", "*", "x"])
    assert cyclic_contains(rg.vertices, ["x", "o", "x"])
    assert rg.count("x") == 2


def test_same_side_gaps_have_no_o_vertex():
    ls = TrigonalLScheme(2, (Tangency("up"), Run("three"), Tangency("up"), Run("one")))
    rg = TR.encode_real_graph(ls)
    assert rg.vertices == ("x", "x")
    assert set(rg.colors) == {"solid", "dotted"}


def test_odd_degree_twists_at_infinity():
    ls = TrigonalLScheme(1, (Tangency("up"), Run("three"), Tangency("up"), Run("one")))
    assert TR.encode_real_graph(ls).count("o") == 1


def test_hyperbolic_even_is_a_dotted_circle():
    rg = TR.encode_real_graph(TR.load_lscheme(FIXTURES / "hyperbolic_n2.json"))
    assert rg.vertices == () and rg.colors == ("dotted",)


def test_lscheme_validation():
    with pytest.raises(TR.TrigonalError):
        TrigonalLScheme(1, (Tangency("up"), Run("one"), Tangency("down"), Run("one")))
    with pytest.raises(TR.TrigonalError):
        TrigonalLScheme(1, (Run("one"), Run("three")))
    with pytest.raises(TR.TrigonalError):
        TrigonalLScheme.from_json({"n": 1, "word": [{"event": "tangency", "side": "left"}, {"run": "one"}]})


def test_lscheme_json_round_trip():
    ls = TR.load_lscheme(FIXTURES / "cubiche_DP1_1.json")
    assert TrigonalLScheme.from_json(ls.to_json()) == ls


def test_real_graph_parity():
    with pytest.raises(TR.TrigonalError):
        TR.RealGraph(("x",) * 7, ("dotted", "solid") * 3 + ("dotted",))


# --- tracing ----------------------------------------------------------------------

def test_padded_hyperbolic_polynomial():
    # y^3 - (1 + x^2) y + 0.1 x^3: three real roots in every fibre
    p = TR.TrigonalPolynomial(1, (-1, 0, -1), (0, 0, 0, 0.1))
    ls = TR.trace_trigonal_polynomial(p)
    assert not ls.tangencies
    assert ls.gaps() == ["three"]


def test_double_root_is_degenerate():
    # Delta(0) = Delta'(0) = 0
    p = TR.TrigonalPolynomial(1, (-3, 1, 1), (2, -1, 0, 1))
    with pytest.raises(TR.DegenerateDiscriminant):
        TR.trace_trigonal_polynomial(p)


def test_vanishing_discriminant_is_degenerate():
    p = TR.TrigonalPolynomial(1, (-3,), (2,))
    with pytest.raises(TR.DegenerateDiscriminant):
        TR.trace_trigonal_polynomial(p)


def test_degree_bounds():
    with pytest.raises(TR.TrigonalError):
        TR.TrigonalPolynomial(1, (0, 0, 0, 1), (1,))


def test_random_round_trips():
    rng = np.random.default_rng(20240611)
    done = 0
    while done < 24:
        n = 1 + done % 2
        p = TR.random_polynomial(n, rng)
        try:
            ls = TR.trace_trigonal_polynomial(p)
        except TR.DegenerateDiscriminant:
            continue
        rg = TR.encode_real_graph(ls)
        assert rg.count("x") == len(ls.tangencies)
        c = _found(rg, n)
        assert TR.is_valid_completion(c, n, rg) == []
        assert TR.is_valid_completion(_copy(c), n, rg) == []
        done += 1


# --- search -----------------------------------------------------------------------

@pytest.mark.parametrize("name,n", [("cubiche_DP1_1.json", 2), ("hyperbolic_n2.json", 2)])
def test_fixtures_complete(name, n):
    ls = TR.load_lscheme(FIXTURES / name)
    rg = TR.encode_real_graph(ls)
    c = _found(rg, n)
    assert TR.is_valid_completion(c, n, rg) == []


def test_too_many_cusps_is_not_completable():
    n = 1
    rg = TR.RealGraph(("x",) * (6 * n + 2), ("dotted", "solid") * (3 * n + 1))
    t = time.perf_counter()
    r = TR.search_completion(rg, n)
    assert r.status == "NotCompletable"
    assert time.perf_counter() - t < 1.0


def test_vertexless_solid_circle_odd_degree_is_not_completable():
    r = TR.search_completion(TR.RealGraph((), ("solid",)), 1)
    assert r.status == "NotCompletable"


def test_budget_exhaustion_reports_unknown():
    rg = TR.encode_real_graph(TR.load_lscheme(FIXTURES / "cubiche_DP1_1.json"))
    r = TR.search_completion(rg, 2, node_limit=3)
    assert r.status == "Unknown"


# --- checker ----------------------------------------------------------------------

@pytest.fixture(scope="module")
def cubiche():
    rg = TR.encode_real_graph(TR.load_lscheme(FIXTURES / "cubiche_DP1_1.json"))
    return rg, _found(rg, 2)


def test_o_relabelled_as_star(cubiche):
    rg, c = cubiche
    bad = _copy(c)
    v = next(v for v, k in bad.kinds.items() if k == "o")
    bad.kinds[v] = "*"
    msgs = TR.is_valid_completion(bad, 2, rg)
    assert any(m.startswith("2:") for m in msgs)


def test_mixed_colours_at_monochrome_vertex():
    rg = TR.RealGraph(("o",), ("dotted",))
    c = _copy(_found(rg, 1))
    v = next(v for v, k in c.kinds.items() if k == "m")
    e = c.rotation[v][1][0]
    t, h, col, real = c.edges[e]
    c.edges[e] = (t, h, "bold" if col != "bold" else "solid", real)
    assert any(m.startswith("6:") for m in TR.is_valid_completion(c, 1, rg))


def test_wrong_degree_breaks_vertex_totals(cubiche):
    rg, c = cubiche
    assert any(m.startswith("3:") for m in TR.is_valid_completion(c, 3, rg))


def test_wrong_real_graph_is_reported(cubiche):
    _, c = cubiche
    other = TR.RealGraph(("x", "x"), ("solid", "dotted"))
    assert any(m.startswith("1:") for m in TR.is_valid_completion(c, 2, other))


def test_broken_rotation_is_structural(cubiche):
    rg, c = cubiche
    bad = _copy(c)
    v = next(iter(bad.rotation))
    bad.rotation[v] = bad.rotation[v][:-1]
    assert any(m.startswith("structure:") for m in TR.is_valid_completion(bad, 2, rg))


def test_completion_json_round_trip(cubiche):
    _, c = cubiche
    assert _copy(c).to_json() == c.to_json()
