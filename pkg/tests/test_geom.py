"""Unit tests for projective points, lines and matrices."""

import unittest

from src.fnc_galois.errors import FieldError
from src.fnc_galois.field import field_ctx
from src.fnc_galois.geom import (
    Mat3,
    ProjLine,
    ProjPoint,
    enumerate_plane,
    field_of_definition,
    fq_lines,
    fq_lines_through,
    frobenius_collinearity,
    intersection,
    is_rational,
    lies_on_fq_line,
    line_through,
    moore_determinant,
    pencil,
    points_on_line,
)


class TestPoints(unittest.TestCase):

    def setUp(self):
        self.ctx = field_ctx(2, 3)

    def test_normalization(self):
        P = ProjPoint.of(self.ctx, [0, 3, 6])
        self.assertEqual(P.coords[:2], (0, 1))
        with self.assertRaises(ValueError):
            ProjPoint.of(self.ctx, [0, 0, 0])

    def test_scalar_multiples_are_equal(self):
        c = 5
        P = ProjPoint.of(self.ctx, [1, 2, 3])
        Q = ProjPoint.of(self.ctx, [self.ctx.mul(c, v) for v in (1, 2, 3)])
        self.assertEqual(P, Q)

    def test_parse_and_str(self):
        P = ProjPoint.parse(self.ctx, "(1 : t : t+1)")
        self.assertEqual(P.coords, (1, 2, 3))
        self.assertEqual(str(P), "(1 : t : t+1)")
        with self.assertRaises(ValueError):
            ProjPoint.parse(self.ctx, "(1 : t)")

    def test_enumerate_plane_sizes(self):
        self.assertEqual(len(enumerate_plane(field_ctx(2, 1), 2, 1)), 7)
        self.assertEqual(len(enumerate_plane(field_ctx(2, 4), 2, 2)), 21)
        self.assertEqual(len(enumerate_plane(field_ctx(3, 2), 9, 1)), 91)
        self.assertEqual(len(set(enumerate_plane(self.ctx, 2, 3))), 73)

    def test_field_of_definition(self):
        self.assertEqual(field_of_definition(ProjPoint.parse(self.ctx, "(1 : t : 0)"), 2), 3)
        self.assertEqual(field_of_definition(ProjPoint.parse(self.ctx, "(1 : 1 : 0)"), 2), 1)
        big = field_ctx(2, 6)
        for P in enumerate_plane(big, 2, 2):
            self.assertTrue(is_rational(P, 2, 2))
            self.assertIn(field_of_definition(P, 2), (1, 2))


class TestLines(unittest.TestCase):

    def setUp(self):
        self.ctx = field_ctx(2, 3)

    def test_line_through_contains_both(self):
        P = ProjPoint.parse(self.ctx, "(1 : t : t^2)")
        Q = ProjPoint.parse(self.ctx, "(0 : 1 : t+1)")
        L = line_through(P, Q)
        self.assertTrue(L.contains(P))
        self.assertTrue(L.contains(Q))
        with self.assertRaises(ValueError):
            line_through(P, P)

    def test_intersection(self):
        L1 = ProjLine.parse(self.ctx, "(1 : 0 : t)")
        L2 = ProjLine.parse(self.ctx, "(0 : 1 : 1)")
        R = intersection(L1, L2)
        self.assertTrue(L1.contains(R))
        self.assertTrue(L2.contains(R))

    def test_basis_points_lie_on_line(self):
        L = ProjLine.parse(self.ctx, "(1 : t : t^2)")
        A, B = L.basis()
        self.assertNotEqual(A, B)
        self.assertTrue(L.contains(A) and L.contains(B))

    def test_points_on_line(self):
        L = ProjLine.parse(field_ctx(2, 2), "(1 : 1 : 0)")
        self.assertEqual(len(points_on_line(L, 2, 1)), 3)
        self.assertEqual(len(points_on_line(L, 2, 2)), 5)

    def test_fq_lines(self):
        lines = fq_lines(self.ctx, 2)
        self.assertEqual(len(lines), 7)
        for P in enumerate_plane(self.ctx, 2, 1):
            self.assertEqual(len(fq_lines_through(P, 2)), 3)

    def test_lies_on_fq_line(self):
        self.assertTrue(lies_on_fq_line(ProjPoint.parse(self.ctx, "(1 : 1 : 0)"), 2))
        # on x + y + z = 0
        self.assertTrue(lies_on_fq_line(ProjPoint.parse(self.ctx, "(1 : t : t+1)"), 2))
        # 1, t, t^2 are independent over GF(2)
        self.assertFalse(lies_on_fq_line(ProjPoint.parse(self.ctx, "(1 : t : t^2)"), 2))

    def test_fq_line_points_are_counted_once(self):
        # |S| over GF(8) is 7 lines of 9 points minus overlaps: 7*9 - 2*7 = 49
        S = [P for P in enumerate_plane(self.ctx, 2, 3) if lies_on_fq_line(P, 2)]
        self.assertEqual(len(S), 49)

    def test_moore_determinant_cuts_out_fq_lines_odd_q(self):
        ctx = field_ctx(3, 3)
        D2 = moore_determinant(ctx, 3)
        lines = fq_lines(ctx, 3)
        self.assertEqual(len(lines), 13)
        plane = enumerate_plane(ctx, 3, 3)
        self.assertEqual(len(plane), 757)
        on_lines = 0
        for R in plane:
            covered = any(L.contains(R) for L in lines)
            self.assertEqual(D2.evaluate(R) == 0, covered, str(R))
            self.assertEqual(frobenius_collinearity(R, 3) == 0, covered, str(R))
            self.assertEqual(lies_on_fq_line(R, 3), covered, str(R))
            on_lines += covered
        # 13 lines of 28 points, each GF(3)-point shared by 4 of them
        self.assertEqual(on_lines, 13 * 28 - 13 * 3)

    def test_pencil(self):
        P = ProjPoint.parse(self.ctx, "(1 : 0 : 1)")
        lines = pencil(P, 2, 1)
        self.assertEqual(len(set(lines)), 3)
        self.assertTrue(all(L.contains(P) for L in lines))
        self.assertEqual(len(set(pencil(P, 2, 3))), 9)
        with self.assertRaises(FieldError):
            pencil(ProjPoint.parse(self.ctx, "(1 : t : 0)"), 2, 1)


class TestMatrices(unittest.TestCase):

    def setUp(self):
        self.ctx = field_ctx(3, 2)

    def test_inverse(self):
        A = Mat3.of(self.ctx, [(1, 2, 0), (0, 1, 5), (3, 0, 1)])
        self.assertTrue(A.det())
        self.assertEqual(A @ A.inverse(), Mat3.identity(self.ctx))
        self.assertEqual(A.inverse() @ A, Mat3.identity(self.ctx))

    def test_singular(self):
        A = Mat3.of(self.ctx, [(1, 2, 0), (2, 1, 0), (0, 0, 0)])
        with self.assertRaises(FieldError):
            A.inverse()

    def test_apply_and_columns(self):
        P = ProjPoint.parse(self.ctx, "(1 : t : 2)")
        M = Mat3.from_columns(self.ctx, [(1, 0, 0), P.coords, (0, 0, 1)])
        self.assertEqual(M.apply(ProjPoint.of(self.ctx, [0, 1, 0])), P)

    def test_normalized(self):
        A = Mat3.of(self.ctx, [(0, 2, 0), (0, 0, 2), (2, 0, 0)])
        N, factor = A.normalized()
        self.assertEqual(N.rows[0][1], 1)
        self.assertEqual(self.ctx.mul(2, factor), 1)


if __name__ == "__main__":
    unittest.main()
