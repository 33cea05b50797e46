import random
from pathlib import Path

import pytest

import oracles
from ovalis import topology as TP
from ovalis import trees as T
from ovalis.scheme import Scheme, SphereArrangement, parse, parse_refined, parse_sphere

FIX = Path(__file__).resolve().parents[1] / "src" / "ovalis" / "data" / "fixtures"
FORESTS = [(), ((),), ((), ()), (((),),)]  # nothing, "1", "2", "<1>"


def load(name):
    return TP.load_json(FIX / name)


# --- fixtures -------------------------------------------------------------------

def test_degeneration_fixture_gives_the_example_scheme():
    s = TP.half_from_json(load("ex_12_3_S.json"))
    t = TP.half_from_json(load("ex_12_3_T.json"))
    assert s.source and t.source
    got = TP.glue_degeneration(s, t, 1)
    assert got.code == parse("<1>+<2>:3:0:0", "DP2").code
    other = TP.glue_degeneration(s, t, 2)
    assert other.code != got.code and other.ovals == got.ovals


def test_double_cover_fixture():
    p = TP.plane_pair_from_json(load("double_cover_DP2.json"))
    assert TP.dp2_lift(p).code == parse("1:1:0:0", "DP2").code


def test_gluing_needs_a_choice_for_two_disk_sides():
    s = TP.half_from_json(load("ex_12_3_S.json"))
    t = TP.half_from_json(load("ex_12_3_T.json"))
    with pytest.raises(TP.TopologyError):
        TP.glue_degeneration(s, t, None)
    assert [c for c, _ in TP.enumerate_gluings(s, t)] == [1, 2]


# --- simple cases -------------------------------------------------------------------

def test_empty_double_curve_is_a_plain_union():
    s = TP.MarkedHalf((parse_sphere("3"),), "none")
    t = TP.MarkedHalf((SphereArrangement(),), "none")
    got = TP.enumerate_gluings(s, t)
    assert len(got) == 1 and got[0][1].code == parse("3:0", "DP2").code
    empty_quadric = TP.MarkedHalf((), "none")
    assert TP.glue_degeneration(s, empty_quadric).code == parse("3", "DP2").code


def test_disks_and_annulus_give_one_sphere_per_choice():
    w = TP.Disk(2, ((0, 1),))
    s = TP.MarkedHalf(kind="two_disks", disks=(w, TP.Disk(2, ((0, 1),), ovals=((0, ((),)),))))
    radial = TP.Annulus(2, ((("o", 0), ("i", 0)), (("o", 1), ("i", 1))))
    caps = TP.Annulus(2, ((("o", 0), ("o", 1)), (("i", 0), ("i", 1))))
    for ann, want in ((radial, "2"), (caps, "<<1>>")):
        got = TP.enumerate_gluings(s, TP.MarkedHalf(kind="annulus", annulus=ann))
        assert len(got) == 2
        assert all(sch.code == parse(want, "DP2").code for _, sch in got)
        # the annulus side may come first
        flipped = TP.glue_degeneration(TP.MarkedHalf(kind="annulus", annulus=ann), s, 1)
        assert flipped.code == got[0][1].code


def test_errors():
    with pytest.raises(TP.TopologyError, match="cross"):
        TP.Disk(4, ((0, 2), (1, 3)))
    with pytest.raises(TP.TopologyError):
        TP.Disk(4, ((0, 1),))
    with pytest.raises(TP.TopologyError, match="cross"):
        TP.Annulus(4, ((("o", 0), ("o", 2)), (("o", 1), ("o", 3)), (("i", 0), ("i", 1)), (("i", 2), ("i", 3))))
    with pytest.raises(TP.TopologyError, match="differ"):
        TP.glue_disks(TP.Disk(2, ((0, 1),)), TP.Disk(4, ((0, 1), (2, 3))))
    bad = {"marked": {"kind": "two_disks", "boundary": 3, "arcs": []}}
    with pytest.raises(TP.TopologyError, match="odd"):
        TP.half_from_json(bad)


# --- random gluings against the union-find circle oracle ------------------------------

def random_disk(rng, points, forests=True):
    chords = oracles.random_noncrossing(points, rng)
    ovals = ()
    if forests and rng.random() < 0.5:
        ovals = ((rng.randrange(max(points, 1)), T.normalize(rng.choice(FORESTS[1:]))),)
    return TP.Disk(points, tuple(chords), ovals)


def test_random_two_disk_gluings_match_cycle_oracle():
    rng = random.Random(20240601)
    for case in range(1200):
        k = rng.randint(0, 6)
        p = 2 * k
        w1, w2, h1, h2 = (random_disk(rng, p) for _ in range(4))
        s = TP.MarkedHalf((), "two_disks", (w1, w2))
        t = TP.MarkedHalf((), "two_disks", (h1, h2))
        choice, reflect = rng.choice((1, 2)), rng.random() < 0.5
        got = TP.glue_degeneration(s, t, choice, reflect)
        a, b = (h1, h2) if choice == 1 else (h2, h1)

        def hm(d):
            if not reflect or p == 0:
                return d.chords
            return [((p - 1 - x) % p, (p - 1 - y) % p) for x, y in d.chords]

        def closed(*ds):
            return sum(T.rooted_size(f) - 1 for d in ds for _, f in d.ovals)

        per_sphere = sorted([
            oracles.circle_count(w1.chords, hm(a)) + closed(w1, a),
            oracles.circle_count(w2.chords, hm(b)) + closed(w2, b),
        ])
        assert got.k == 2
        assert sorted(x.ovals for x in got.spheres) == per_sphere, case


def test_random_gluing_sphere_is_a_valid_tree():
    rng = random.Random(7)
    for _ in range(300):
        p = 2 * rng.randint(1, 5)
        a = TP.glue_disks(random_disk(rng, p), random_disk(rng, p))
        assert len(a.adjacency) == a.ovals + 1


# --- random plane pairs against the doubling oracle ------------------------------------

def test_random_plane_pairs_match_doubling_oracle():
    rng = random.Random(99)
    for case in range(600):
        disks, want = [], []
        for _ in range(4):
            root = oracles.random_face_tree(rng, rng.randint(0, 5), FORESTS)
            n, chords, ovals = oracles.chord_walk(root)
            ovals = tuple((s, T.normalize(f)) for s, f in ovals if f)
            disks.append(TP.Disk(n, tuple(chords), ovals))
            want.append(SphereArrangement.from_forest(T.normalize(oracles.doubled_region_tree(root))))
        got = TP.dp2_lift(TP.PlanePair(tuple(disks)))
        assert got.code == Scheme("DP2", tuple(want)).code, case


def test_lift_examples():
    empty = TP.PlanePair(tuple(TP.Disk(0) for _ in range(4)))
    assert TP.dp2_lift(empty).code == parse("0:0:0:0", "DP2").code
    one = TP.PlanePair((TP.Disk(0, (), ((0, ((),)),)),) + tuple(TP.Disk(0) for _ in range(3)))
    assert TP.dp2_lift(one).code == parse("2:0:0:0", "DP2").code
    with pytest.raises(TP.TopologyError):
        TP.dp2_lift(TP.PlanePair((TP.Disk(1, (), (), ray=0),)))


# --- degree one ------------------------------------------------------------------------

def cone(vertex, ovals=(), positive=None):
    positive = positive if positive is not None else tuple(i < 2 for i in range(len(ovals)))
    return TP.ConePair(vertex, tuple(ovals), positive)


def test_dp1_generatrix_gives_pseudo_line():
    v = TP.VertexDisk(TP.Disk(1, (), (), ray=0), 0)
    c = cone(v, [TP.Disk(0)] * 4)
    assert TP.dp1_lift(c).code == parse("J|0:0:0:0", "DP1").code


def test_dp1_empty_curve():
    v = TP.VertexDisk(TP.Disk(0), 0)
    c = cone(v, [TP.Disk(0)] * 4)
    assert TP.dp1_lift(c).code == parse("0|0:0:0:0", "DP1").code


def test_dp1_circle_in_positive_oval():
    v = TP.VertexDisk(TP.Disk(0), 0)
    ovals = [TP.Disk(0, (), ((0, ((),)),))] + [TP.Disk(0)] * 3
    got = TP.dp1_lift(cone(v, ovals), refined=True)
    assert got.code == parse_refined("0|2:0:0:0").code == parse_refined("0|<1>:0:0:0").code


def test_dp1_refined_needs_labels():
    v = TP.VertexDisk(TP.Disk(0), 0)
    with pytest.raises(TP.TopologyError):
        TP.dp1_lift(cone(v, [TP.Disk(0)] * 4, positive=(None,) * 4), refined=True)
