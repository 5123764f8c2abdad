import pytest

from coxtop.chambers import digon_building, fano_building, thin_building
from coxtop.coxmatrix import INF, CoxeterMatrix
from coxtop.hc import (
    duality_check,
    graded_module_report,
    hc_standard_realization,
    thin_multiplicity_series,
    vcd,
)
from coxtop.intlinalg import OMEGA, AbGroup, GradedGroup


def mk(labels, pairs):
    return CoxeterMatrix(tuple(labels), {frozenset((s, t)): m for s, t, m in pairs})


A2 = mk("st", [("s", "t", 3)])
FREE3 = mk("stu", [("s", "t", INF), ("t", "u", INF), ("s", "u", INF)])
TRIANGLE333 = mk("abc", [("a", "b", 3), ("b", "c", 3), ("a", "c", 3)])
DINF = mk("st", [("s", "t", INF)])
# right-angled system whose nerve is a 4-cycle: D-infinity x D-infinity
RA4 = mk(
    "abcd",
    [("a", "c", INF), ("b", "d", INF)],
)
# triangle group free product with one more involution: nerve = circle + point
MIXED = mk(
    "abcd",
    [
        ("a", "b", 3),
        ("b", "c", 3),
        ("a", "c", 3),
        ("a", "d", INF),
        ("b", "d", INF),
        ("c", "d", INF),
    ],
)


class TestVcd:
    def test_free_product(self):
        assert vcd(FREE3).value == 1

    def test_infinite_dihedral(self):
        assert vcd(DINF).value == 1

    def test_triangle(self):
        assert vcd(TRIANGLE333).value == 2

    def test_right_angled_4_cycle(self):
        assert vcd(RA4).value == 2

    def test_finite_flagged(self):
        report = vcd(A2)
        assert report.value == 0 and report.w_finite


class TestDuality:
    def test_free_product(self):
        report = duality_check(FREE3)
        assert report.is_duality and report.dimension == 1

    def test_triangle(self):
        report = duality_check(TRIANGLE333)
        assert report.is_duality and report.dimension == 2

    def test_mixed_concentration_fails(self):
        report = duality_check(MIXED)
        assert not report.is_duality
        offenders = {tuple(T) for T, _ in report.offending}
        assert () in offenders

    def test_finite_trivial(self):
        report = duality_check(A2)
        assert report.is_duality and report.dimension == 0


class TestGrowth:
    def test_empty_type_identity_only(self):
        for mat in (FREE3, TRIANGLE333, DINF):
            series = thin_multiplicity_series(mat, (), 6)
            assert series.coefficients == (1, 0, 0, 0, 0, 0, 0)

    def test_free_product_powers_of_two(self):
        series = thin_multiplicity_series(FREE3, ("s",), 8)
        assert series.coefficients == (0, 1, 2, 4, 8, 16, 32, 64, 128)

    def test_finite_a2_degenerate(self):
        series = thin_multiplicity_series(A2, ("s",), 4)
        assert series.coefficients == (0, 1, 1, 0, 0)

    def test_total_matches_ball(self):
        from coxtop.groups import enumerate_ball
        from itertools import combinations

        ball = enumerate_ball(FREE3, 5)
        total = [0] * 6
        for r in range(4):
            for T in combinations("stu", r):
                try:
                    series = thin_multiplicity_series(FREE3, T, 5)
                except ValueError:
                    continue
                for i, a in enumerate(series.coefficients):
                    total[i] += a
        assert tuple(total) == ball.counts_by_length()

    def test_nonspherical_rejected(self):
        with pytest.raises(ValueError):
            thin_multiplicity_series(FREE3, ("s", "t"), 3)


class TestHcReport:
    def test_free_product_thin(self):
        report = hc_standard_realization(FREE3, "thin", growth_radius=4)
        assert report.totals.degrees() == [1]
        assert report.totals[1].free == OMEGA
        by_type = {c.type: c for c in report.contributions}
        assert by_type[()].multiplicity == 1
        assert by_type[()].local[1] == AbGroup(2)
        for s in "stu":
            c = by_type[(s,)]
            assert c.multiplicity == OMEGA
            assert c.local[1] == AbGroup(1)
            assert c.series.coefficients[1] == 1

    def test_triangle_thin_affine(self):
        report = hc_standard_realization(TRIANGLE333, "thin")
        assert report.totals == GradedGroup({2: AbGroup(1)})

    def test_finite_concrete_matches_cross_check(self):
        from coxtop.complexes import davis_chamber
        from coxtop.realization import formula_cross_check

        sys = digon_building(3, 3)
        report = hc_standard_realization(sys.matrix, sys)
        cross = formula_cross_check(sys, davis_chamber(sys.matrix))
        assert report.totals == cross.assembled == cross.realized

    def test_finite_thin_builds_concrete(self):
        report = hc_standard_realization(A2, "thin")
        assert report.w_finite
        assert report.totals == GradedGroup({0: AbGroup(1)})

    def test_regular_symbolic(self):
        report = hc_standard_realization(FREE3, ("regular", {"s": 2, "t": 2, "u": 2}))
        assert report.totals[1].free == OMEGA
        by_type = {c.type: c for c in report.contributions}
        assert by_type[()].multiplicity == OMEGA  # thick: not quantified

    def test_regular_needs_infinite(self):
        with pytest.raises(ValueError):
            hc_standard_realization(A2, ("regular", {"s": 2, "t": 2}))

    def test_type_mismatch(self):
        b2 = mk("st", [("s", "t", 4)])
        with pytest.raises(ValueError):
            hc_standard_realization(b2, fano_building())

    def test_fano_is_type_a2(self):
        report = hc_standard_realization(A2, fano_building())
        assert report.totals == GradedGroup({0: AbGroup(1)})


class TestInvariants:
    @pytest.mark.parametrize("mat", [FREE3, DINF, TRIANGLE333, RA4, MIXED])
    def test_vcd_is_top_degree_of_thin_report(self, mat):
        report = hc_standard_realization(mat, "thin")
        assert vcd(mat).value == report.totals.top_degree()

    @pytest.mark.parametrize("mat", [FREE3, TRIANGLE333])
    def test_duality_implies_concentrated_free(self, mat):
        d = duality_check(mat)
        assert d.is_duality
        report = hc_standard_realization(mat, "thin")
        assert report.totals.degrees() == [d.dimension]
        assert report.totals.is_free()


class TestGradedModules:
    def test_fano(self):
        sys = fano_building()
        report = graded_module_report(sys.matrix, sys)
        assert report.matches_hc
        ranks = {p: g.total_free_rank() for p, g in report.rows}
        assert sum(r for r in ranks.values()) == report.totals.total_free_rank()

    def test_thin_a2(self):
        sys = thin_building(A2)
        report = graded_module_report(sys.matrix, sys)
        assert report.matches_hc
        # p = 0 row: H(K, K^S) = 0 for spherical type, times D^0 rank 1
        p0 = dict(report.rows)[0]
        assert p0 == GradedGroup({})

    def test_zero_row_beyond_max(self):
        sys = thin_building(A2)
        report = graded_module_report(sys.matrix, sys)
        assert max(p for p, _ in report.rows) == 2
