import pytest

from coxtop.coxmatrix import CoxeterMatrix
from coxtop.chambers import (
    ChamberError,
    digon_building,
    fano_building,
    parse_chamber_system,
    product_building,
    projective_plane_building,
    residues,
    thin_building,
    verify_building,
    w_distance,
)


def mk(labels, pairs):
    return CoxeterMatrix(tuple(labels), {frozenset((s, t)): m for s, t, m in pairs})


A2 = mk("st", [("s", "t", 3)])
B2 = mk("st", [("s", "t", 4)])


class TestThin:
    def test_a1(self):
        sys = thin_building(mk("s", []))
        assert sys.size == 2
        assert len(sys.panels["s"]) == 1

    def test_a2(self):
        sys = thin_building(A2)
        assert sys.size == 6
        for s in "st":
            assert len(sys.panels[s]) == 3
            assert all(len(b) == 2 for b in sys.panels[s])

    def test_b2(self):
        assert thin_building(B2).size == 8

    def test_subset(self):
        mat = mk("abc", [("a", "b", 3), ("b", "c", 3)])
        sys = thin_building(mat, "ab")
        assert sys.size == 6


class TestDigon:
    def test_thin_case(self):
        sys = digon_building(2, 2)
        assert sys.size == 4

    def test_33(self):
        sys = digon_building(3, 3)
        assert sys.size == 9
        for s in "st":
            assert all(len(b) == 3 for b in sys.panels[s])

    def test_23(self):
        sys = digon_building(2, 3)
        assert sys.size == 6
        assert all(len(b) == 2 for b in sys.panels["s"])
        assert all(len(b) == 3 for b in sys.panels["t"])

    def test_too_small(self):
        with pytest.raises(ChamberError):
            digon_building(1, 3)


class TestProjectivePlane:
    def test_fano_counts(self):
        sys = fano_building()
        assert sys.size == 21
        assert len(sys.panels["s"]) == 7 and len(sys.panels["t"]) == 7
        assert all(len(b) == 3 for b in sys.panels["s"])
        assert all(len(b) == 3 for b in sys.panels["t"])

    def test_order3_counts(self):
        sys = projective_plane_building(3)
        assert sys.size == 52
        assert all(len(b) == 4 for b in sys.panels["s"])

    def test_s_residues_are_points(self):
        sys = fano_building()
        rs = residues(sys, "s")
        assert len(rs) == 7 and all(len(r.chambers) == 3 for r in rs)

    def test_unsupported_order(self):
        with pytest.raises(ChamberError):
            projective_plane_building(4)


class TestProduct:
    def test_thin_squares(self):
        a = thin_building(mk("a", []))
        b = thin_building(mk("b", []))
        p = product_building(a, b)
        assert p.size == 4
        assert p.matrix.m("a", "b") == 2

    def test_fano_times_a1(self):
        p = product_building(fano_building(), thin_building(mk("u", [])))
        assert p.size == 42
        assert set(p.matrix.labels) == {"s", "t", "u"}

    def test_collision(self):
        with pytest.raises(ChamberError):
            product_building(fano_building(), thin_building(mk("s", [])))


class TestResidues:
    def test_empty_type_singletons(self):
        sys = thin_building(A2)
        rs = residues(sys, ())
        assert len(rs) == 6 and all(len(r.chambers) == 1 for r in rs)

    def test_thin_a2_s(self):
        sys = thin_building(A2)
        rs = residues(sys, "s")
        assert len(rs) == 3 and all(len(r.chambers) == 2 for r in rs)

    def test_refinement(self):
        sys = fano_building()
        small = residues(sys, "s")
        big = residues(sys, "st")
        assert len(big) == 1
        for r in small:
            assert set(r.chambers) <= set(big[0].chambers)


class TestWDistance:
    def test_identity(self):
        sys = thin_building(A2)
        assert w_distance(sys, 3, 3).length == 0

    def test_thin_formula(self):
        sys = thin_building(A2)
        table = sys.element_table()
        for i in range(sys.size):
            for j in range(sys.size):
                w = w_distance(sys, i, j, table)
                expect = table.multiply_word(table.inverse(i), table.elements[j].word)
                assert w.index == expect

    def test_symmetry(self):
        sys = fano_building()
        table = sys.element_table()
        for i in range(0, sys.size, 5):
            for j in range(0, sys.size, 5):
                w = w_distance(sys, i, j, table)
                v = w_distance(sys, j, i, table)
                assert table.inverse(w.index) == v.index

    def test_fano_point_adjacency(self):
        sys = fano_building()
        blk = next(iter(sys.panels["s"]))  # chambers sharing a point
        chambers = sorted(blk)
        w = w_distance(sys, chambers[0], chambers[1])
        assert w.word == ("s",)


class TestVerify:
    def test_fano_passes(self):
        report = verify_building(fano_building())
        assert report.passed
        heawood = [c for c in report.residue_checks if c["pair"] == ["s", "t"]]
        assert heawood[0]["girth"] == 6 and heawood[0]["diameter"] == 3

    def test_digon33_passes(self):
        report = verify_building(digon_building(3, 3))
        assert report.passed
        check = report.residue_checks[0]
        assert check["girth"] == 4 and check["diameter"] == 2

    def test_product_passes(self):
        p = product_building(fano_building(), thin_building(mk("u", [])))
        assert verify_building(p).passed

    def test_plane3_passes(self):
        report = verify_building(projective_plane_building(3))
        assert report.passed
        check = report.residue_checks[0]
        assert check["girth"] == 6 and check["diameter"] == 3

    def test_thin_all_pass(self):
        for mat in (A2, B2, mk("abc", [("a", "b", 3), ("b", "c", 3)])):
            assert verify_building(thin_building(mat)).passed

    def test_hexagon_with_digon_type_fails(self):
        # six chambers in a cycle pretend to have commuting generators;
        # the rank-2 residue is a 3-gon, not a 2-gon, and minimal
        # galleries of types sts and tst disagree in the group
        mat = mk("st", [])
        panels = {
            "s": (frozenset({0, 1}), frozenset({2, 3}), frozenset({4, 5})),
            "t": (frozenset({1, 2}), frozenset({3, 4}), frozenset({5, 0})),
        }
        from coxtop.chambers import ChamberSystem

        sys_bad = ChamberSystem(mat, panels, 6)
        report = verify_building(sys_bad)
        assert not report.residues_ok and not report.passed
        with pytest.raises(ChamberError):
            w_distance(sys_bad, 0, 3)

    def test_small_panel_fails(self):
        mat = mk("s", [])
        sys_bad = type(thin_building(mat))(
            mat, {"s": (frozenset({0, 1}), frozenset({2}))}, 3
        )
        report = verify_building(sys_bad)
        assert not report.panel_sizes_ok and not report.passed


def test_constructor_panels_are_regular():
    # every constructor produces panels of one size per generator
    systems = [
        thin_building(A2),
        thin_building(B2),
        digon_building(2, 3),
        fano_building(),
        projective_plane_building(3),
        product_building(fano_building(), thin_building(mk("u", []))),
    ]
    for sys_ in systems:
        for s in sys_.matrix.labels:
            sizes = {len(b) for b in sys_.panels[s]}
            assert len(sizes) == 1, (s, sizes)


class TestTextFormat:
    def test_roundtrip(self):
        sys = digon_building(2, 3)
        text = sys.to_text()
        back = parse_chamber_system(text)
        assert back.size == sys.size
        assert back.matrix.labels == sys.matrix.labels
        for s in sys.matrix.labels:
            assert sorted(back.panels[s], key=min) == sorted(sys.panels[s], key=min)

    def test_fano_roundtrip_verifies(self):
        text = fano_building().to_text()
        back = parse_chamber_system(text)
        assert verify_building(back).passed

    def test_bad_panel(self):
        with pytest.raises(ChamberError):
            parse_chamber_system("gens s\nchambers 2\npanel s: {0}\n")
