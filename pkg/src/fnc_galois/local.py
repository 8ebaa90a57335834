"""Local analysis at points of F: multiplicity, tangent cone, intersection
multiplicity with lines, and the classification of the singular locus.

Singular points fall into six cases according to whether m > 1, whether the
point lies on a GF(q)-line (the set S), whether it is GF(q)-rational, and
whether q = 2:

    a-i    m > 1, off S                     mult q^m,     one tangent, order q^m + 1
    a-ii   m > 1, on S, not GF(q)-rational  mult q^m − 1, one tangent, order q^m
    a-iii  m > 1, GF(q)-rational            mult q^m − q, ordinary, every tangent order q^n − q
    b-i    m = 1, q > 2, off S              mult q,       one tangent, order q + 1
    b-ii   m = 1, q > 2, on S, not rational mult q − 1,   one tangent, order q
    c      m = 1, q = 2, off S              mult 2,       one tangent, order 3
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from rich.console import Console

from .errors import ConsistencyError, InvalidParams, NotOnCurve
from .fncurve import CurveParams, WorkingCurve
from .geom import (
    Mat3,
    ProjLine,
    ProjPoint,
    field_of_definition,
    is_rational,
    lies_on_fq_line,
    line_through,
    plane_arrays,
)
from .poly import BinaryForm, Root, squarefree_and_roots, vanish_order

console = Console(stderr=True)

CASES = ("a-i", "a-ii", "a-iii", "b-i", "b-ii", "c")


@dataclass(frozen=True)
class ExpectedProfile:
    multiplicity: int
    tangent_count: int
    tangent_order: int
    ordinary: bool


@dataclass
class TangentCone:
    """Lowest-degree part of F at a point, in the chart coordinates (x, y)."""

    form: BinaryForm
    roots: List[Tuple[Root, int]]
    tangents: List[ProjLine]
    squarefree: bool
    split: bool


@dataclass
class SingularRecord:
    point: ProjPoint
    multiplicity: int
    tangent_lines: List[Tuple[ProjLine, int]]
    in_S: bool
    in_base_plane: bool
    case: Optional[str]
    ordinary: bool
    split: bool = True
    cone: Optional[BinaryForm] = None
    mismatches: List[str] = field(default_factory=list)

    @property
    def unibranch(self) -> bool:
        return not self.ordinary

    def to_dict(self) -> Dict:
        return {
            "point": str(self.point),
            "mult": self.multiplicity,
            "case": self.case,
            "ordinary": self.ordinary,
            "tangents": [{"line": str(L), "imult": i} for L, i in self.tangent_lines],
            "in_S": self.in_S,
            "in_Fq": self.in_base_plane,
            "split": self.split,
            # tangent orders at unibranch points are plane intersection multiplicities
            "order_from_intersection": self.unibranch,
        }


@dataclass
class SingularityReport:
    params: CurveParams
    max_ext: int
    records: List[SingularRecord]
    predicted_count: int
    mismatches: List[str]

    @property
    def found_count(self) -> int:
        return len(self.records)

    @property
    def match(self) -> bool:
        return not self.mismatches

    @property
    def verified_within(self) -> str:
        return f"verified within GF({self.params.q}^{self.max_ext})"

    def by_case(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for rec in self.records:
            key = rec.case or "unpredicted"
            counts[key] = counts.get(key, 0) + 1
        return counts


# -- charts -----------------------------------------------------------------------


def chart_matrix(Q: ProjPoint, variant: int = 0) -> Mat3:
    """Invertible M with M·(0, 0, 1) = Q.

    The columns are the two standard basis vectors other than the pivot
    coordinate of Q, then Q itself. The pivot is the last nonzero coordinate
    for variant 0 and the first for variant 1.
    """
    nonzero = [i for i, c in enumerate(Q.coords) if c]
    pivot = nonzero[-1] if variant == 0 else nonzero[0]
    axes = [a for a in range(3) if a != pivot]
    columns = []
    for a in axes:
        e = [0, 0, 0]
        e[a] = 1
        columns.append(e)
    columns.append(list(Q.coords))
    return Mat3.from_columns(Q.ctx, columns)


def _local_terms(wc: WorkingCurve, Q: ProjPoint, variant: int):
    if not wc.on_curve(Q):
        raise NotOnCurve(f"{Q} is not on the curve")
    M = chart_matrix(Q, variant)
    G = wc.F.transform(M.rows)
    d = G.degree
    order = min(d - k for (_, _, k) in G.terms)
    return M, G, order


def multiplicity_at(wc: WorkingCurve, Q: ProjPoint, variant: int = 0) -> int:
    """Minimal total degree of the dehomogenized F after moving Q to (0:0:1)."""
    if not wc.on_curve(Q):
        raise NotOnCurve(f"{Q} is not on the curve")
    if any(wc.gradient(Q)):
        return 1
    return _local_terms(wc, Q, variant)[2]


def tangent_cone_at(wc: WorkingCurve, Q: ProjPoint, variant: int = 0) -> TangentCone:
    """Tangent cone at Q and its linear factors over the working field."""
    ctx = wc.ctx
    M, G, mu = _local_terms(wc, Q, variant)
    d = G.degree
    coeffs = [0] * (mu + 1)
    for (i, j, k), c in G.terms.items():
        if k == d - mu:
            coeffs[j] = c
    form = BinaryForm(ctx, coeffs)
    roots, squarefree = squarefree_and_roots(form, wc.params.q, wc.ext)
    tangents = []
    for (s, t), _ in roots:
        direction = ProjPoint.of(ctx, M.apply_vector((s, t, 0)))
        tangents.append(line_through(Q, direction))
    split = sum(mult for _, mult in roots) == mu
    if not split:
        console.print(f"[yellow]Warning: tangent cone at {Q} does not split over GF({wc.params.q}^{wc.ext})[/yellow]")
    return TangentCone(form=form, roots=roots, tangents=tangents, squarefree=squarefree, split=split)


def intersection_multiplicity(wc: WorkingCurve, L: ProjLine, Q: ProjPoint) -> int:
    """I_Q(F, L): vanishing order at Q of F restricted to L."""
    if not L.contains(Q):
        raise ValueError(f"{Q} does not lie on {L}")
    A, B = L.basis()
    other = A if A != Q else B
    G = wc.restrict(Q, other)
    return vanish_order(G, 1, 0)


# -- classification ---------------------------------------------------------------


def singularity_case(params: CurveParams, in_S: bool, in_base_plane: bool) -> Optional[str]:
    """Case label of a singular point, or None where no singular point is expected."""
    if params.m > 1:
        if not in_S:
            return "a-i"
        return "a-iii" if in_base_plane else "a-ii"
    if params.q > 2:
        if in_base_plane:
            return None
        return "b-ii" if in_S else "b-i"
    return None if in_S else "c"


def expected_profile(params: CurveParams, case: str) -> ExpectedProfile:
    q, n, m = params.q, params.n, params.m
    table = {
        "a-i": ExpectedProfile(q ** m, 1, q ** m + 1, False),
        "a-ii": ExpectedProfile(q ** m - 1, 1, q ** m, False),
        "a-iii": ExpectedProfile(q ** m - q, q ** m - q, q ** n - q, True),
        "b-i": ExpectedProfile(q, 1, q + 1, False),
        "b-ii": ExpectedProfile(q - 1, 1, q, False),
        "c": ExpectedProfile(2, 1, 3, False),
    }
    if case not in table:
        raise InvalidParams(f"unknown singularity case {case!r}")
    return table[case]


def ramification_candidates(params: CurveParams, case: str) -> Tuple[int, ...]:
    """Admissible ramification indices at a singular point of the given case."""
    qm = params.q ** params.m
    if case in ("a-i", "b-i", "c"):
        return (qm, qm + 1)
    if case in ("a-ii", "b-ii"):
        return (qm - 1, qm)
    if case == "a-iii":
        return (1,)
    raise InvalidParams(f"unknown singularity case {case!r}")


def predicted_singular(params: CurveParams, P: ProjPoint) -> bool:
    """Whether P belongs to the singular locus predicted for these parameters."""
    q, n, m = params.q, params.n, params.m
    delta = field_of_definition(P, q)
    if m > 1:
        return (n - m) % delta == 0
    if (n - 1) % delta:
        return False
    if q > 2:
        return delta > 1
    return not lies_on_fq_line(P, q)


def classify_point(wc: WorkingCurve, Q: ProjPoint) -> SingularRecord:
    """Full record for a singular point; cached on the working curve."""
    with wc.lock:
        cached = wc.records.get(Q)
    if cached is not None:
        return cached

    params = wc.params
    cone = tangent_cone_at(wc, Q)
    mu = cone.form.degree
    tangents = [(T, intersection_multiplicity(wc, T, Q)) for T in cone.tangents]
    in_S = lies_on_fq_line(Q, params.q)
    in_base = is_rational(Q, params.q, 1)
    case = singularity_case(params, in_S, in_base)
    ordinary = cone.squarefree and cone.split and len(tangents) == mu
    record = SingularRecord(
        point=Q,
        multiplicity=mu,
        tangent_lines=tangents,
        in_S=in_S,
        in_base_plane=in_base,
        case=case,
        ordinary=ordinary,
        split=cone.split,
        cone=cone.form,
    )
    record.mismatches = _compare_with_case(params, record)
    with wc.lock:
        wc.records.setdefault(Q, record)
        return wc.records[Q]


def _compare_with_case(params: CurveParams, rec: SingularRecord) -> List[str]:
    if rec.case is None:
        return [f"{rec.point}: singular but no case applies"]
    want = expected_profile(params, rec.case)
    out = []
    if rec.multiplicity != want.multiplicity:
        out.append(f"{rec.point}: multiplicity {rec.multiplicity}, expected {want.multiplicity}")
    if rec.ordinary != want.ordinary:
        out.append(f"{rec.point}: ordinary={rec.ordinary}, expected {want.ordinary}")
    if len(rec.tangent_lines) != want.tangent_count:
        out.append(f"{rec.point}: {len(rec.tangent_lines)} tangent(s), expected {want.tangent_count}")
    for L, imult in rec.tangent_lines:
        if imult != want.tangent_order:
            out.append(f"{rec.point}: tangent {L} has order {imult}, expected {want.tangent_order}")
    return out


def singular_points_over(wc: WorkingCurve, j: int) -> List[ProjPoint]:
    """Singular points of F in ℙ²(GF(q^j)), by vectorized evaluation of F and its partials."""
    if wc.ext % j:
        raise InvalidParams(f"GF(q^{j}) is not a subfield of GF(q^{wc.ext})")
    xs, ys, zs = plane_arrays(wc.ctx, wc.params.q, j)
    mask = wc.F.evaluate_many(xs, ys, zs) == 0
    for partial in (wc.Fx, wc.Fy, wc.Fz):
        if partial.is_zero:
            continue
        xs, ys, zs = xs[mask], ys[mask], zs[mask]
        mask = partial.evaluate_many(xs, ys, zs) == 0
    return [ProjPoint(wc.ctx, (int(a), int(b), int(c)))
            for a, b, c in zip(xs[mask], ys[mask], zs[mask])]


def predicted_points_over(wc: WorkingCurve, j: int) -> List[ProjPoint]:
    xs, ys, zs = plane_arrays(wc.ctx, wc.params.q, j)
    points = [ProjPoint(wc.ctx, (int(a), int(b), int(c))) for a, b, c in zip(xs, ys, zs)]
    return [P for P in points if predicted_singular(wc.params, P)]


def find_singular_points(wc: WorkingCurve, max_ext: Optional[int] = None) -> SingularityReport:
    """Scan ℙ²(GF(q^j)) for j ≤ max_ext and compare with the predicted locus."""
    params = wc.params
    if max_ext is None:
        max_ext = params.n - 1
    if max_ext < params.n - params.m:
        raise InvalidParams(f"max_ext must be at least n - m = {params.n - params.m}")
    key = f"singular:{max_ext}"
    with wc.lock:
        cached = wc.cache.get(key)
    if cached is not None:
        return cached

    found: Dict[ProjPoint, None] = {}
    predicted: Dict[ProjPoint, None] = {}
    for j in range(1, max_ext + 1):
        for P in singular_points_over(wc, j):
            found.setdefault(P)
        for P in predicted_points_over(wc, j):
            predicted.setdefault(P)

    mismatches: List[str] = []
    records = []
    for P in sorted(found):
        rec = classify_point(wc, P)
        records.append(rec)
        mismatches.extend(rec.mismatches)
        if P not in predicted:
            console.print(f"[yellow]Warning: unpredicted singular point {P}[/yellow]")
            mismatches.append(f"{P}: singular but not in the predicted locus")
    for P in sorted(predicted):
        if P not in found:
            mismatches.append(f"{P}: predicted singular but F is smooth there")

    report = SingularityReport(params=params, max_ext=max_ext, records=records,
                               predicted_count=len(predicted), mismatches=mismatches)
    with wc.lock:
        wc.cache[key] = report
    return report


def singular_locus(wc: WorkingCurve) -> List[SingularRecord]:
    """Singular records over the default search range, shared by the projection engine."""
    return find_singular_points(wc).records


def point_kind(wc: WorkingCurve, P: ProjPoint) -> str:
    """'off', 'smooth', 'ordinary' or 'unibranch'."""
    if not wc.on_curve(P):
        return "off"
    if any(wc.gradient(P)):
        return "smooth"
    rec = classify_point(wc, P)
    if rec.multiplicity < 2:
        raise ConsistencyError(f"{P} has vanishing gradient but multiplicity {rec.multiplicity}")
    return "ordinary" if rec.ordinary else "unibranch"
