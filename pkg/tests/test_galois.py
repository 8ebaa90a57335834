"""Unit tests for Galois point certification."""

import tempfile
import unittest
from pathlib import Path

import numpy as np

from src.fnc_galois.config import EngineConfig
from src.fnc_galois.errors import InvalidParams, UnsplitFiber
from src.fnc_galois.geom import ProjLine, is_rational, pencil
from src.fnc_galois.galois import (
    BranchIndex,
    FiberData,
    Rule,
    Verdict,
    _check_fiber,
    analyze_point,
    certify_galois,
    linear_deck_group,
    obstruction_check,
    parse_candidates,
    projection_degree,
    ramification_profile,
    scan,
    semidirect_relations,
    summarize,
)

from .support import base_points, point, working

QUICK = EngineConfig(line_budget=20, pencil_max_lines=10)


class TestFiberRules(unittest.TestCase):
    """Synthetic fibers on the quartic's working field."""

    def setUp(self):
        self.wc = working(2, 3, 1)
        self.rational = ProjLine.of(self.wc.ctx, [1, 1, 0])
        self.irrational = point(self.wc, "(1 : t : 0)")
        self.irrational = ProjLine.of(self.wc.ctx, self.irrational.coords)
        self.A = point(self.wc, "(1 : t : t^2)")
        self.B = point(self.wc, "(0 : 1 : t^3)")
        self.C = point(self.wc, "(1 : 1 : t^5)")

    def fiber(self, line, *branches):
        return FiberData(line, list(branches))

    def test_divisibility(self):
        fiber = self.fiber(self.rational, BranchIndex(self.A, 0, 3), BranchIndex(self.B, 0, 1))
        obstruction = _check_fiber(self.wc, fiber, 4, "off")
        self.assertEqual(obstruction.rule, Rule.DIVISIBILITY)
        self.assertEqual(obstruction.witnesses, [self.A])

    def test_equal_indices(self):
        fiber = self.fiber(self.rational, BranchIndex(self.A, 0, 2), BranchIndex(self.B, 0, 1),
                           BranchIndex(self.C, 0, 1))
        obstruction = _check_fiber(self.wc, fiber, 4, "off")
        self.assertEqual(obstruction.rule, Rule.EQUAL_INDICES)

    def test_candidate_fiber_sum(self):
        ok = self.fiber(self.rational,
                        BranchIndex(self.A, 0, None, (2, 3), source="unibranch-candidates"),
                        BranchIndex(self.B, 0, 2))
        self.assertIsNone(_check_fiber(self.wc, ok, 4, "off"))

        too_many = self.fiber(self.rational,
                              BranchIndex(self.A, 0, None, (2, 3), source="unibranch-candidates"),
                              BranchIndex(self.B, 0, 2), BranchIndex(self.C, 0, 2))
        self.assertEqual(_check_fiber(self.wc, too_many, 4, "off").rule, Rule.FIBER_SUM)

    def test_no_common_candidate(self):
        fiber = self.fiber(self.rational,
                           BranchIndex(self.A, 0, None, (1,), source="unibranch-candidates"),
                           BranchIndex(self.B, 0, None, (2, 4), source="unibranch-candidates"))
        self.assertEqual(_check_fiber(self.wc, fiber, 4, "off").rule, Rule.EQUAL_INDICES)

    def test_rationality_of_ramified_lines(self):
        self.assertFalse(is_rational(self.irrational, 2, 1))
        fiber = self.fiber(self.irrational, BranchIndex(self.A, 0, 2), BranchIndex(self.B, 0, 2))
        self.assertEqual(_check_fiber(self.wc, fiber, 4, "off").rule, Rule.RATIONALITY)
        # the same fiber is fine on a GF(2)-line
        fiber.line = self.rational
        self.assertIsNone(_check_fiber(self.wc, fiber, 4, "off"))

    def test_rationality_for_smooth_centers(self):
        fiber = self.fiber(self.irrational, BranchIndex(self.A, 0, 2), BranchIndex(self.B, 0, 2),
                           BranchIndex(self.C, 0, 2, source="center-smooth"))
        obstruction = _check_fiber(self.wc, fiber, 6, "smooth")
        self.assertEqual(obstruction.rule, Rule.RATIONALITY)
        self.assertEqual(len(obstruction.witnesses), 2)

    def test_tangent_rationality(self):
        fiber = self.fiber(self.irrational, BranchIndex(self.C, 0, 2, source="center-smooth"))
        self.assertEqual(_check_fiber(self.wc, fiber, 2, "smooth").rule, Rule.TANGENT_RATIONALITY)

    def test_unramified_fiber(self):
        fiber = self.fiber(self.irrational, *(BranchIndex(P, 0, 1) for P in (self.A, self.B, self.C)))
        self.assertIsNone(_check_fiber(self.wc, fiber, 3, "off"))

    def test_serialization(self):
        b = BranchIndex(self.A, 1, None, (3, 4), source="unibranch-candidates")
        self.assertEqual(b.values, (3, 4))
        self.assertEqual(b.to_dict()["e"], [3, 4])
        self.assertEqual(Verdict.GALOIS.value, "GALOIS-certified")


class TestRamificationProfile(unittest.TestCase):

    def test_fibers_over_base_pencil(self):
        wc = working(2, 3, 1)
        P = point(wc, "(1 : 0 : 0)")
        for L in pencil(P, 2, 3):
            try:
                fiber = ramification_profile(wc, P, L)
            except UnsplitFiber as exc:
                self.assertFalse(exc.fiber.split)
                self.assertGreaterEqual(exc.needed_ext, 2)
                self.assertLess(exc.fiber.exact_sum(), 4)
            else:
                self.assertEqual(fiber.exact_sum(), 4)

    def test_line_must_contain_center(self):
        wc = working(2, 3, 1)
        P = point(wc, "(1 : 0 : 0)")
        with self.assertRaises(ValueError):
            ramification_profile(wc, P, ProjLine.of(wc.ctx, [1, 0, 0]))

    def test_ordinary_singular_points_split_into_branches(self):
        wc = working(2, 3, 2)
        P, Q = point(wc, "(1 : 0 : 0)"), point(wc, "(0 : 1 : 0)")
        L = ProjLine.of(wc.ctx, [0, 0, 1])
        fiber = ramification_profile(wc, P, L)
        at_Q = [b for b in fiber.branches if b.point == Q]
        self.assertEqual(len(at_Q), 2)
        self.assertTrue(all(b.exact == 1 and b.source == "ordinary-split" for b in at_Q))


class TestPositiveCertification(unittest.TestCase):

    def test_quartic_base_points(self):
        wc = working(2, 3, 1)
        for P in base_points(wc):
            self.assertEqual(projection_degree(wc, P), 4)
            verdict = certify_galois(wc, P)
            self.assertEqual(verdict.verdict, Verdict.GALOIS)
            self.assertEqual(verdict.deck_order, 4)
            self.assertTrue(verdict.relations)

    def test_singular_centers(self):
        wc = working(2, 3, 2)
        for P in base_points(wc):
            self.assertEqual(projection_degree(wc, P), 4)
            verdict = certify_galois(wc, P)
            self.assertEqual(verdict.verdict, Verdict.GALOIS)
            self.assertEqual(verdict.deck_order, 4)

    def test_odd_characteristic(self):
        for m in (1, 2):
            wc = working(3, 3, m)
            points = base_points(wc)
            self.assertEqual(len(points), 13)
            for P in points:
                with self.subTest(m=m, point=str(P)):
                    verdict = certify_galois(wc, P)
                    self.assertEqual(verdict.verdict, Verdict.GALOIS)
                    self.assertEqual(verdict.degree, 18)
                    self.assertEqual(verdict.deck_order, 18)
                    self.assertTrue(verdict.relations)

    def test_deck_elements_fix_the_center(self):
        wc = working(2, 3, 1)
        P = point(wc, "(1 : 1 : 0)")
        for el in linear_deck_group(wc, P):
            self.assertEqual(el.matrix.apply(P), P)

    def test_deck_search_field_must_divide(self):
        with self.assertRaises(InvalidParams):
            linear_deck_group(working(2, 3, 1), point(working(2, 3, 1), "(1 : 0 : 0)"), search_ext=4)

    def test_relations_need_elements(self):
        self.assertFalse(semidirect_relations([]))


class TestNegativeCertification(unittest.TestCase):

    def test_tangent_index_does_not_divide(self):
        # the center branch along a tangent has e = 30 - 6 = 24, degree 34 - 6 = 28
        wc = working(2, 5, 3)
        P = point(wc, "(1 : 0 : 0)")
        verdict = analyze_point(wc, P, QUICK, 1, np.random.default_rng(0))
        self.assertEqual(verdict.degree, 28)
        self.assertEqual(verdict.verdict, Verdict.NOT_GALOIS)
        self.assertEqual(verdict.obstruction.rule, Rule.DIVISIBILITY)

    def test_n_minus_m_one(self):
        wc = working(2, 4, 3)
        P = point(wc, "(0 : 0 : 1)")
        verdict = obstruction_check(wc, P, QUICK)
        self.assertEqual(verdict.degree, 12)
        self.assertEqual(verdict.verdict, Verdict.NOT_GALOIS)
        self.assertEqual(verdict.obstruction.rule, Rule.DIVISIBILITY)

    def test_no_galois_points_for_n_four(self):
        wc = working(2, 4, 1)
        verdicts = scan(wc, base_points(wc), QUICK)
        self.assertEqual(summarize(verdicts)["galois"], 0)
        for v in verdicts:
            if v.verdict is Verdict.NOT_GALOIS:
                self.assertIsNotNone(v.obstruction.rule)

    def test_mixed_candidates_are_never_galois(self):
        # base points, sampled GF(q^2)-points and points off the curve
        for q, n, m in [(2, 4, 1), (2, 4, 3), (2, 5, 2), (2, 5, 3)]:
            with self.subTest(q=q, n=n, m=m):
                wc = working(q, n, m)
                candidates = parse_candidates(wc, ["base", "ext:2:20", "offcurve:20"], seed=0)
                summary = summarize(scan(wc, candidates, EngineConfig(), seed=0, threads=4))
                self.assertEqual(summary, {"galois": 0, "not_galois": len(candidates),
                                           "inconclusive": 0})


class TestScan(unittest.TestCase):

    def setUp(self):
        self.wc = working(2, 3, 1)

    def test_base_scan(self):
        verdicts = scan(self.wc, base_points(self.wc), QUICK)
        self.assertEqual(summarize(verdicts), {"galois": 7, "not_galois": 0, "inconclusive": 0})
        row = verdicts[0].to_dict()
        self.assertEqual(set(row), {"point", "degree", "deck_order", "verdict", "obstruction",
                                    "lines_examined", "unsplit_lines"})
        self.assertIsNone(row["obstruction"])

    def test_thread_count_does_not_change_results(self):
        candidates = parse_candidates(self.wc, ["offcurve:3"], seed=4)
        serial = [v.to_dict() for v in scan(self.wc, candidates, QUICK, seed=4, threads=1)]
        threaded = [v.to_dict() for v in scan(self.wc, candidates, QUICK, seed=4, threads=3)]
        self.assertEqual(serial, threaded)

    def test_empty_scan(self):
        self.assertEqual(scan(self.wc, []), [])

    def test_candidate_specs(self):
        self.assertEqual(len(parse_candidates(self.wc, ["base"])), 7)
        self.assertEqual(len(parse_candidates(self.wc, ["ext:2"])), 21)
        self.assertEqual(len(parse_candidates(self.wc, ["base", "ext:2"])), 21)
        sampled = parse_candidates(self.wc, ["ext:6:5"], seed=1)
        self.assertEqual(len(sampled), 5)
        self.assertEqual(sampled, parse_candidates(self.wc, ["ext:6:5"], seed=1))
        for P in parse_candidates(self.wc, ["offcurve:4"]):
            self.assertFalse(self.wc.on_curve(P))

    def test_candidate_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "points.txt"
            path.write_text("# centers\n(1 : 0 : 0)\n\n(0 : 1 : t)\n")
            points = parse_candidates(self.wc, [str(path)])
        self.assertEqual([str(P) for P in points], ["(1 : 0 : 0)", "(0 : 1 : t)"])

    def test_bad_specs(self):
        for spec in ("bogus", "ext:x", "ext:4", "offcurve:2:5"):
            with self.assertRaises(InvalidParams):
                parse_candidates(self.wc, [spec])


if __name__ == "__main__":
    unittest.main()
