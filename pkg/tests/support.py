"""Shared curve builders for the test suite."""

from src.fnc_galois.fncurve import CurveParams, build_curve, working_curve
from src.fnc_galois.geom import ProjPoint, enumerate_plane

# The (q, n, m) = (2, 3, 1) curve, a smooth plane quartic over GF(2).
QUARTIC_POLY = (
    "x^4 + x^2*y^2 + x^2*y*z + x^2*z^2 + x*y^2*z + x*y*z^2 + y^4 + y^2*z^2 + z^4"
)

# (q, n, m) triples whose singular points and Galois points are tabulated
LISTED_CURVES = [
    (2, 3, 1), (2, 3, 2), (3, 3, 1), (3, 3, 2), (2, 4, 1),
    (2, 4, 3), (2, 5, 2), (2, 5, 3), (2, 5, 4),
]


def params(q: int, n: int, m: int) -> CurveParams:
    return CurveParams(q, n, m)


def curve(q: int, n: int, m: int):
    return build_curve(CurveParams(q, n, m))


def working(q: int, n: int, m: int, ext=None):
    return working_curve(CurveParams(q, n, m), ext)


def base_points(wc) -> list:
    """ℙ²(GF(q)) inside the working field of wc."""
    return enumerate_plane(wc.ctx, wc.params.q, 1)


def point(wc, text: str) -> ProjPoint:
    return ProjPoint.parse(wc.ctx, text)
