"""Unit tests for local analysis and the singular locus."""

import unittest

from src.fnc_galois.errors import InvalidParams, NotOnCurve
from src.fnc_galois.fncurve import points_on_curve
from src.fnc_galois.geom import ProjLine, ProjPoint, enumerate_plane, is_rational
from src.fnc_galois.local import (
    CASES,
    chart_matrix,
    classify_point,
    expected_profile,
    find_singular_points,
    intersection_multiplicity,
    multiplicity_at,
    point_kind,
    predicted_singular,
    ramification_candidates,
    singular_points_over,
    singularity_case,
    tangent_cone_at,
)

from .support import LISTED_CURVES, base_points, params, point, working


class TestCaseTable(unittest.TestCase):

    def test_m_greater_than_one(self):
        p = params(2, 5, 2)
        self.assertEqual(singularity_case(p, in_S=False, in_base_plane=False), "a-i")
        self.assertEqual(singularity_case(p, in_S=True, in_base_plane=False), "a-ii")
        self.assertEqual(singularity_case(p, in_S=True, in_base_plane=True), "a-iii")

    def test_m_one_odd_q(self):
        p = params(3, 4, 1)
        self.assertEqual(singularity_case(p, in_S=False, in_base_plane=False), "b-i")
        self.assertEqual(singularity_case(p, in_S=True, in_base_plane=False), "b-ii")
        self.assertIsNone(singularity_case(p, in_S=True, in_base_plane=True))

    def test_m_one_q_two(self):
        p = params(2, 4, 1)
        self.assertEqual(singularity_case(p, in_S=False, in_base_plane=False), "c")
        self.assertIsNone(singularity_case(p, in_S=True, in_base_plane=False))

    def test_expected_profiles(self):
        p = params(2, 5, 3)
        self.assertEqual(tuple(vars(expected_profile(p, "a-i")).values()), (8, 1, 9, False))
        self.assertEqual(tuple(vars(expected_profile(p, "a-ii")).values()), (7, 1, 8, False))
        self.assertEqual(tuple(vars(expected_profile(p, "a-iii")).values()), (6, 6, 30, True))
        self.assertEqual(tuple(vars(expected_profile(params(3, 4, 1), "b-ii")).values()), (2, 1, 3, False))
        with self.assertRaises(InvalidParams):
            expected_profile(p, "d")

    def test_ramification_candidates(self):
        p = params(3, 4, 1)
        self.assertEqual(ramification_candidates(p, "b-i"), (3, 4))
        self.assertEqual(ramification_candidates(p, "b-ii"), (2, 3))
        self.assertEqual(ramification_candidates(params(2, 3, 2), "a-iii"), (1,))
        for case in CASES:
            self.assertTrue(ramification_candidates(params(2, 5, 2), case))


class TestPredictedLocus(unittest.TestCase):

    def test_m_greater_than_one_is_a_subplane(self):
        wc = working(2, 5, 3)
        for P in base_points(wc):
            self.assertTrue(predicted_singular(wc.params, P))
        self.assertTrue(predicted_singular(wc.params, point(wc, "(1 : 0 : 0)")))

    def test_q_two_excludes_fq_lines(self):
        wc = working(2, 3, 1)
        # every point of P^2(GF(4)) lies on a GF(2)-line
        plane = enumerate_plane(wc.ctx, 2, 2)
        self.assertFalse(any(predicted_singular(wc.params, P) for P in plane))


class TestCharts(unittest.TestCase):

    def test_chart_moves_origin_to_point(self):
        wc = working(2, 3, 1)
        for text in ("(1 : t : t^2)", "(0 : 1 : t)", "(0 : 0 : 1)", "(1 : 0 : 0)"):
            Q = point(wc, text)
            for variant in (0, 1):
                M = chart_matrix(Q, variant)
                self.assertTrue(M.det())
                self.assertEqual(M.apply(ProjPoint.of(wc.ctx, [0, 0, 1])), Q)


class TestSmoothPoints(unittest.TestCase):

    def setUp(self):
        self.wc = working(2, 3, 1)

    def test_quartic_is_smooth(self):
        self.assertEqual(singular_points_over(self.wc, self.wc.ext), [])
        report = find_singular_points(self.wc)
        self.assertEqual(report.found_count, 0)
        self.assertEqual(report.predicted_count, 0)
        self.assertTrue(report.match)

    def test_smooth_point_multiplicity_and_tangent(self):
        Q = points_on_curve(self.wc, self.wc.ext)[0]
        self.assertEqual(multiplicity_at(self.wc, Q), 1)
        self.assertEqual(point_kind(self.wc, Q), "smooth")
        tangent = ProjLine.of(self.wc.ctx, self.wc.gradient(Q))
        self.assertGreaterEqual(intersection_multiplicity(self.wc, tangent, Q), 2)

    def test_off_curve(self):
        P = point(self.wc, "(1 : 0 : 0)")
        self.assertEqual(point_kind(self.wc, P), "off")
        with self.assertRaises(NotOnCurve):
            multiplicity_at(self.wc, P)

    def test_intersection_needs_incidence(self):
        Q = next(R for R in points_on_curve(self.wc, self.wc.ext) if R.coords[0])
        x_axis = ProjLine.of(self.wc.ctx, [1, 0, 0])
        with self.assertRaises(ValueError):
            intersection_multiplicity(self.wc, x_axis, Q)


class TestOrdinarySingularities(unittest.TestCase):
    """(q, n, m) = (2, 3, 2): the singular locus is P^2(GF(2)), all case a-iii."""

    def setUp(self):
        self.wc = working(2, 3, 2)

    def test_report(self):
        report = find_singular_points(self.wc)
        self.assertEqual(report.found_count, 7)
        self.assertEqual(report.predicted_count, 7)
        self.assertTrue(report.match, report.mismatches)
        self.assertEqual(report.by_case(), {"a-iii": 7})
        self.assertEqual(report.verified_within, "verified within GF(2^2)")

    def test_records(self):
        for P in base_points(self.wc):
            rec = classify_point(self.wc, P)
            self.assertEqual(rec.multiplicity, 2)
            self.assertTrue(rec.ordinary)
            self.assertEqual(len(rec.tangent_lines), 2)
            for T, imult in rec.tangent_lines:
                self.assertEqual(imult, 6)
                self.assertFalse(is_rational(T, 2, 1))
            self.assertEqual(point_kind(self.wc, P), "ordinary")

    def test_cone_is_split_and_squarefree(self):
        cone = tangent_cone_at(self.wc, point(self.wc, "(0 : 0 : 1)"))
        self.assertTrue(cone.split)
        self.assertTrue(cone.squarefree)
        self.assertEqual(cone.form.degree, 2)

    def test_multiplicity_independent_of_chart(self):
        for P in base_points(self.wc):
            self.assertEqual(multiplicity_at(self.wc, P, 0), multiplicity_at(self.wc, P, 1))

    def test_record_serialization(self):
        row = classify_point(self.wc, point(self.wc, "(1 : 1 : 1)")).to_dict()
        self.assertEqual(row["mult"], 2)
        self.assertEqual(row["case"], "a-iii")
        self.assertTrue(row["in_S"])
        self.assertTrue(row["in_Fq"])
        self.assertEqual(len(row["tangents"]), 2)
        self.assertFalse(row["order_from_intersection"])


class TestUnibranchSingularities(unittest.TestCase):

    def test_case_b_ii(self):
        # (3, 3, 1): P^2(GF(9)) minus P^2(GF(3)); every such point lies on a GF(3)-line
        report = find_singular_points(working(3, 3, 1))
        self.assertEqual(report.found_count, 78)
        self.assertTrue(report.match, report.mismatches[:5])
        self.assertEqual(report.by_case(), {"b-ii": 78})
        rec = report.records[0]
        self.assertEqual(rec.multiplicity, 2)
        self.assertEqual([i for _, i in rec.tangent_lines], [3])
        self.assertFalse(rec.ordinary)

    def test_case_c(self):
        # (2, 4, 1): P^2(GF(8)) minus the 49 points on GF(2)-lines
        wc = working(2, 4, 1)
        report = find_singular_points(wc)
        self.assertEqual(report.found_count, 24)
        self.assertTrue(report.match, report.mismatches[:5])
        self.assertEqual(report.by_case(), {"c": 24})
        self.assertEqual(point_kind(wc, report.records[0].point), "unibranch")

    def test_cases_a(self):
        # (2, 5, 2): P^2(GF(8)) splits into 24 + 42 + 7 points
        report = find_singular_points(working(2, 5, 2))
        self.assertTrue(report.match, report.mismatches[:5])
        self.assertEqual(report.by_case(), {"a-i": 24, "a-ii": 42, "a-iii": 7})
        profiles = {rec.case: (rec.multiplicity, [i for _, i in rec.tangent_lines]) for rec in report.records}
        self.assertEqual(profiles["a-i"], (4, [5]))
        self.assertEqual(profiles["a-ii"], (3, [4]))
        self.assertEqual(profiles["a-iii"][0], 2)

    def test_max_ext_must_cover_the_locus(self):
        with self.assertRaises(InvalidParams):
            find_singular_points(working(2, 5, 2), max_ext=2)


class TestListedCurves(unittest.TestCase):
    """Degree and singular locus of every tabulated (q, n, m)."""

    EXPECTED = {
        (2, 3, 1): (4, {}),
        (2, 3, 2): (6, {"a-iii": 7}),
        (3, 3, 1): (18, {"b-ii": 78}),
        (3, 3, 2): (24, {"a-iii": 13}),
        (2, 4, 1): (12, {"c": 24}),
        (2, 4, 3): (18, {"a-iii": 7}),
        (2, 5, 2): (30, {"a-i": 24, "a-ii": 42, "a-iii": 7}),
        (2, 5, 3): (34, {"a-ii": 14, "a-iii": 7}),
        (2, 5, 4): (42, {"a-iii": 7}),
    }

    def test_table_covers_listed_curves(self):
        self.assertEqual(sorted(self.EXPECTED), sorted(LISTED_CURVES))

    def test_degree_and_cases(self):
        for (q, n, m), (degree, cases) in self.EXPECTED.items():
            with self.subTest(q=q, n=n, m=m):
                wc = working(q, n, m)
                self.assertEqual(wc.curve.degree, degree)
                self.assertEqual(wc.curve.D2 * wc.curve.F, wc.curve.D1)
                report = find_singular_points(wc)
                self.assertTrue(report.match, report.mismatches[:5])
                self.assertEqual(report.by_case(), cases)
                self.assertEqual(report.found_count, sum(cases.values()))
                self.assertEqual(report.predicted_count, sum(cases.values()))


if __name__ == "__main__":
    unittest.main()
