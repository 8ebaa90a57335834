"""Projection of F from a point P.

Positive direction: a point is certified Galois when the linear maps fixing
every line through P and stabilizing F form a group whose order equals the
degree of the projection. Negative direction: the ramification indices along
lines through P are checked against what a Galois covering allows (every
index divides the degree, indices in one fiber agree, a smooth ramification
point lies on a GF(q)-line). A single violated constraint with its witness
line certifies that P is not Galois.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from rich.console import Console

from .config import EngineConfig
from .errors import ConsistencyError, FieldError, InvalidParams, UnsplitFiber
from .fncurve import WorkingCurve, stabilizes
from .geom import (
    Mat3,
    ProjLine,
    ProjPoint,
    enumerate_plane,
    field_of_definition,
    fq_lines_through,
    is_rational,
    line_through,
    pencil,
    point_on_line,
)
from .local import (
    classify_point,
    multiplicity_at,
    point_kind,
    ramification_candidates,
    singular_locus,
)
from .poly import BinaryForm

console = Console(stderr=True)


class Verdict(str, Enum):
    GALOIS = "GALOIS-certified"
    NOT_GALOIS = "NOT-GALOIS-certified"
    INCONCLUSIVE = "INCONCLUSIVE"


class Rule(str, Enum):
    DIVISIBILITY = "R1-divisibility"
    EQUAL_INDICES = "R2-equal-indices"
    FIBER_SUM = "R3-fiber-sum"
    RATIONALITY = "R4-rationality"
    TANGENT_RATIONALITY = "R5-tangent-rationality"


@dataclass(frozen=True)
class BranchIndex:
    """Ramification index of one branch over a point of F ∩ L.

    `exact` is None when only a candidate set is known.
    """

    point: ProjPoint
    branch_id: int
    exact: Optional[int]
    candidates: Tuple[int, ...] = ()
    source: str = "smooth-exact"

    @property
    def values(self) -> Tuple[int, ...]:
        return (self.exact,) if self.exact is not None else self.candidates

    def to_dict(self) -> Dict:
        return {
            "point": str(self.point),
            "branch": self.branch_id,
            "e": self.exact if self.exact is not None else list(self.candidates),
            "source": self.source,
        }


@dataclass
class FiberData:
    line: ProjLine
    branches: List[BranchIndex]
    split: bool = True
    residual: Optional[BinaryForm] = None

    def exact_sum(self) -> int:
        return sum(b.exact for b in self.branches if b.exact is not None)

    def common_values(self) -> set:
        common = None
        for b in self.branches:
            common = set(b.values) if common is None else common & set(b.values)
        return common or set()


@dataclass
class Obstruction:
    rule: Rule
    line: ProjLine
    witnesses: List[ProjPoint]
    detail: str = ""

    def to_dict(self) -> Dict:
        return {
            "rule": self.rule.value,
            "line": str(self.line),
            "witnesses": [str(W) for W in self.witnesses],
            "detail": self.detail,
        }


@dataclass
class DeckElement:
    """Normalized matrix B with F∘B = scalar·F; `shape` is (γ, μ, β) in the chart moving P to (0:1:0)."""

    matrix: Mat3
    scalar: int
    shape: Tuple[int, int, int]

    def to_dict(self) -> Dict:
        ctx = self.matrix.ctx
        return {"matrix": self.matrix.to_json(), "scalar": ctx.format(self.scalar)}


@dataclass
class GaloisVerdict:
    center: ProjPoint
    degree: int
    verdict: Verdict
    deck: List[DeckElement] = field(default_factory=list)
    obstruction: Optional[Obstruction] = None
    lines_examined: int = 0
    unsplit_lines: int = 0
    relations: Optional[bool] = None

    @property
    def deck_order(self) -> int:
        return len(self.deck)

    def to_dict(self) -> Dict:
        return {
            "point": str(self.center),
            "degree": self.degree,
            "deck_order": self.deck_order,
            "verdict": self.verdict.value,
            "obstruction": self.obstruction.to_dict() if self.obstruction else None,
            "lines_examined": self.lines_examined,
            "unsplit_lines": self.unsplit_lines,
        }


def projection_degree(wc: WorkingCurve, P: ProjPoint) -> int:
    """deg F minus the multiplicity of P on F (0 off the curve)."""
    if not wc.on_curve(P):
        return wc.degree
    return wc.degree - multiplicity_at(wc, P)


# -- positive direction -----------------------------------------------------------


def _conjugator(P: ProjPoint) -> Mat3:
    """Invertible M with P as its second column, so M·(0, 1, 0) = P."""
    x, y, _ = P.coords
    ex, ey, ez = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    if y:
        columns = (ex, P.coords, ez)
    elif x:
        columns = (ey, P.coords, ez)
    else:
        columns = (ex, P.coords, ey)
    return Mat3.from_columns(P.ctx, columns)


def _subfield_values(wc: WorkingCurve, j: int) -> List[int]:
    if wc.ext % j:
        raise InvalidParams(f"GF(q^{j}) is not a subfield of GF(q^{wc.ext})")
    return [int(a) for a in wc.ctx.subfield(wc.params.e * j)]


def _probes(FM, ctx, count: int = 3) -> List[Tuple[int, int, int]]:
    rng = np.random.default_rng(0)
    found = []
    while len(found) < count:
        v = tuple(int(c) for c in rng.integers(0, ctx.size, 3))
        if FM.evaluate(v):
            found.append(v)
    return found


def linear_deck_group(wc: WorkingCurve, P: ProjPoint, search_ext: int = 1) -> List[DeckElement]:
    """Matrices fixing every line through P and stabilizing F, over GF(q^search_ext).

    P is moved to (0:1:0) by a fixed M; there the candidates are
    (x, y, z) ↦ (x, γx + μy + βz, z). Survivors are conjugated back and the
    resulting set is checked to be closed under composition.
    """
    ctx = wc.ctx
    d = wc.degree
    values = _subfield_values(wc, search_ext)
    M = _conjugator(P)
    M_inv = M.inverse()
    FM = wc.F.transform(M.rows)
    probes = _probes(FM, ctx)
    base = [FM.evaluate(v) for v in probes]
    lead = FM.leading_monomial()

    deck: List[DeckElement] = []
    for mu in values:
        if not mu:
            continue
        for gamma in values:
            for beta in values:
                ratio = None
                for v, fv in zip(probes, base):
                    image = (v[0], ctx.add(ctx.add(ctx.mul(gamma, v[0]), ctx.mul(mu, v[1])),
                                           ctx.mul(beta, v[2])), v[2])
                    r = ctx.div(FM.evaluate(image), fv)
                    if ratio is None:
                        ratio = r
                    elif r != ratio:
                        ratio = None
                        break
                if ratio is None:
                    continue
                G = FM.substitute(1, (gamma, mu, beta))
                if lead not in G.terms:
                    continue
                lam = ctx.div(G.terms[lead], FM.terms[lead])
                if G != FM.scale(lam):
                    continue
                S = Mat3(ctx, ((1, 0, 0), (gamma, mu, beta), (0, 0, 1)))
                B, c = (M @ S @ M_inv).normalized()
                deck.append(DeckElement(B, ctx.mul(lam, ctx.pow(c, d)), (gamma, mu, beta)))

    keys = {el.matrix.rows for el in deck}
    for a in deck:
        for b in deck:
            if (a.matrix @ b.matrix).normalized()[0].rows not in keys:
                raise ConsistencyError(f"deck set at {P} is not closed under composition")
    return deck


def _fixes_pencil(P: ProjPoint, B: Mat3) -> bool:
    ctx = P.ctx
    if B.apply(P) != P:
        return False
    samples = [ProjPoint.of(ctx, v) for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1))]
    checked = 0
    for R in samples:
        if R == P or checked == 3:
            continue
        if not line_through(P, R).contains(B.apply(R)):
            return False
        checked += 1
    return True


def semidirect_relations(deck: Sequence[DeckElement]) -> bool:
    """σ_{γ,β}σ_{γ',β'} = σ_{γ+γ',β+β'} and τ_μ σ_{γ,β} τ_μ⁻¹ = σ_{μγ,μβ} among the elements."""
    if not deck:
        return False
    ctx = deck[0].matrix.ctx
    table = {el.shape: el.matrix for el in deck}
    sigmas = [el for el in deck if el.shape[1] == 1]
    taus = [el for el in deck if el.shape[0] == 0 and el.shape[2] == 0]

    def same(A: Mat3, key) -> bool:
        return key in table and A.normalized()[0] == table[key]

    for a in sigmas:
        for b in sigmas:
            key = (ctx.add(a.shape[0], b.shape[0]), 1, ctx.add(a.shape[2], b.shape[2]))
            if not same(a.matrix @ b.matrix, key):
                return False
    for t in taus:
        mu = t.shape[1]
        t_inv = t.matrix.inverse()
        for s in sigmas:
            key = (ctx.mul(mu, s.shape[0]), 1, ctx.mul(mu, s.shape[2]))
            if not same(t.matrix @ s.matrix @ t_inv, key):
                return False
    return True


def certify_galois(wc: WorkingCurve, P: ProjPoint, search_ext: int = 1) -> GaloisVerdict:
    """GALOIS-certified when the linear deck group has order equal to the degree."""
    degree = projection_degree(wc, P)
    deck = linear_deck_group(wc, P, search_ext)
    verdict = GaloisVerdict(center=P, degree=degree, verdict=Verdict.INCONCLUSIVE, deck=deck)
    if len(deck) != degree:
        return verdict
    for el in deck:
        lam = stabilizes(wc, el.matrix)
        if lam is None or lam.value != el.scalar:
            raise ConsistencyError(f"deck element {el.matrix} does not stabilize F")
        if not _fixes_pencil(P, el.matrix):
            raise ConsistencyError(f"deck element {el.matrix} moves a line through {P}")
    verdict.relations = semidirect_relations(deck)
    verdict.verdict = Verdict.GALOIS
    return verdict


# -- ramification data ------------------------------------------------------------


def _center_source(kind: str) -> str:
    return {"smooth": "center-smooth", "ordinary": "center-ordinary"}.get(kind, "center-unibranch")


def ramification_profile(wc: WorkingCurve, P: ProjPoint, L: ProjLine, policy: str = "exact",
                         name_extension: bool = True) -> FiberData:
    """Branch indices over the point of ℙ¹ given by L.

    Smooth Q: e = I_Q(F, L). Unibranch singular Q: e = I_Q(F, L), or the
    admissible set for its case under the `candidates` policy. Ordinary Q of
    multiplicity μ: μ branches with e = 1, except that a tangent L gives one
    branch e = I_Q − (μ − 1). Center P on F: one branch with e = I_P − m(P)
    when I_P > m(P).
    """
    if not L.contains(P):
        raise ValueError(f"{L} does not pass through {P}")
    ctx = wc.ctx
    A, B = L.basis()
    other = A if A != P else B
    G = wc.restrict(P, other)
    roots = G.roots(ctx.subfield(ctx.k))

    branches: List[BranchIndex] = []
    for (s, t), imult in roots:
        if t == 0:
            continue
        Q = point_on_line(L, P, other, s, t)
        if any(wc.gradient(Q)):
            branches.append(BranchIndex(Q, 0, imult, source="smooth-exact"))
            continue
        rec = classify_point(wc, Q)
        if rec.ordinary:
            mu = rec.multiplicity
            tangent_e = imult - (mu - 1) if imult > mu else 1
            for i in range(mu):
                branches.append(BranchIndex(Q, i, tangent_e if i == 0 else 1, source="ordinary-split"))
            continue
        cands = ramification_candidates(wc.params, rec.case) if rec.case else ()
        if policy == "candidates" and cands:
            branches.append(BranchIndex(Q, 0, None, cands, source="unibranch-candidates"))
        else:
            branches.append(BranchIndex(Q, 0, imult, cands, source="unibranch-exact"))

    if wc.on_curve(P):
        kind = point_kind(wc, P)
        m_P = 1 if kind == "smooth" else classify_point(wc, P).multiplicity
        i_P = next((mult for (s, t), mult in roots if t == 0), 0)
        if i_P > m_P:
            branch_id = 0
            if kind == "ordinary":
                tangents = [T for T, _ in classify_point(wc, P).tangent_lines]
                branch_id = tangents.index(L) if L in tangents else 0
            branches.append(BranchIndex(P, branch_id, i_P - m_P, source=_center_source(kind)))

    found = sum(mult for _, mult in roots)
    if found < G.degree:
        fiber = FiberData(L, branches, split=False)
        residual = G.residual(roots)
        fiber.residual = residual
        needed = residual.splitting_degree() if name_extension else None
        where = f"; splits over a degree-{needed} extension" if needed else ""
        raise UnsplitFiber(f"{L} meets F outside GF(q^{wc.ext}){where}",
                           fiber=fiber, residual=residual, needed_ext=needed)
    return FiberData(L, branches)


# -- negative direction ------------------------------------------------------------


def _check_fiber(wc: WorkingCurve, fiber: FiberData, degree: int, center_kind: str) -> Optional[Obstruction]:
    L = fiber.line
    q = wc.params.q
    branches = fiber.branches

    for b in branches:
        if not any(degree % e == 0 for e in b.values):
            return Obstruction(Rule.DIVISIBILITY, L, [b.point],
                               f"e={b.exact if b.exact is not None else list(b.candidates)} does not divide {degree}")

    exact = [b for b in branches if b.exact is not None]
    for b in exact:
        if b.exact != exact[0].exact:
            return Obstruction(Rule.EQUAL_INDICES, L, [exact[0].point, b.point],
                               f"indices {exact[0].exact} and {b.exact} in one fiber")
    common = fiber.common_values()
    if branches and not common:
        return Obstruction(Rule.EQUAL_INDICES, L, [b.point for b in branches if b.exact is None][:2],
                           "no common index across the fiber")

    if fiber.split and branches and not any(c * len(branches) == degree for c in common):
        return Obstruction(Rule.FIBER_SUM, L, [branches[0].point],
                           f"{len(branches)} branches with indices {sorted(common)} cannot sum to {degree}")

    if is_rational(L, q, 1):
        return None
    smooth = [b for b in branches if b.source == "smooth-exact"]
    ramified = [b for b in smooth if b.exact >= 2]
    if ramified and center_kind in ("off", "ordinary", "unibranch"):
        return Obstruction(Rule.RATIONALITY, L, [ramified[0].point],
                           f"smooth ramification point (e={ramified[0].exact}) on a line not defined over GF({q})")
    if ramified and center_kind == "smooth":
        others = [b for b in smooth if b.point != ramified[0].point]
        if others:
            return Obstruction(Rule.RATIONALITY, L, [ramified[0].point, others[0].point],
                               "smooth ramification point and a further smooth point on a line not defined "
                               f"over GF({q})")
    if center_kind == "smooth":
        center = [b for b in branches if b.source == "center-smooth" and b.exact >= 2]
        if center:
            return Obstruction(Rule.TANGENT_RATIONALITY, L, [center[0].point],
                               f"tangent at the center (e={center[0].exact}) not defined over GF({q})")
    return None


def _candidate_lines(wc: WorkingCurve, P: ProjPoint, config: EngineConfig,
                     rng: np.random.Generator) -> Iterator[ProjLine]:
    ctx = wc.ctx
    q = wc.params.q
    seen = set()

    def fresh(L: ProjLine) -> bool:
        if L.coords in seen:
            return False
        seen.add(L.coords)
        return True

    if wc.on_curve(P):
        grad = wc.gradient(P)
        tangents = [ProjLine.of(ctx, grad)] if any(grad) else [T for T, _ in classify_point(wc, P).tangent_lines]
        for T in tangents:
            if fresh(T):
                yield T
    for rec in singular_locus(wc):
        if rec.point != P:
            L = line_through(P, rec.point)
            if fresh(L):
                yield L
    for L in fq_lines_through(P, q):
        if fresh(L):
            yield L
    delta = field_of_definition(P, q)
    for j in range(delta, wc.ext + 1, delta):
        if wc.ext % j:
            continue
        if q ** j + 1 > config.pencil_max_lines:
            break
        for L in pencil(P, q, j):
            if fresh(L):
                yield L
    for _ in range(config.line_budget):
        coords = [int(c) for c in rng.integers(0, ctx.size, 3)]
        if not any(coords):
            continue
        R = ProjPoint.of(ctx, coords)
        if R == P:
            continue
        L = line_through(P, R)
        if fresh(L):
            yield L


def obstruction_check(wc: WorkingCurve, P: ProjPoint, config: Optional[EngineConfig] = None,
                      rng: Optional[np.random.Generator] = None) -> GaloisVerdict:
    """Search lines through P for a fiber a Galois covering could not have."""
    config = config or EngineConfig()
    rng = rng if rng is not None else np.random.default_rng(0)
    degree = projection_degree(wc, P)
    kind = point_kind(wc, P)
    verdict = GaloisVerdict(center=P, degree=degree, verdict=Verdict.INCONCLUSIVE)
    if degree <= 1:
        return verdict

    for L in _candidate_lines(wc, P, config, rng):
        verdict.lines_examined += 1
        try:
            fiber = ramification_profile(wc, P, L, config.unibranch_policy, name_extension=False)
        except UnsplitFiber as exc:
            verdict.unsplit_lines += 1
            fiber = exc.fiber
        if fiber.split and config.unibranch_policy == "exact" and fiber.exact_sum() != degree:
            raise ConsistencyError(
                f"branch indices on {L} sum to {fiber.exact_sum()}, projection degree is {degree}"
            )
        obstruction = _check_fiber(wc, fiber, degree, kind)
        if obstruction is not None:
            verdict.verdict = Verdict.NOT_GALOIS
            verdict.obstruction = obstruction
            break

    if verdict.unsplit_lines:
        console.print(f"[yellow]Warning: {verdict.unsplit_lines} line(s) through {P} "
                      f"skipped as unsplit over GF({wc.params.q}^{wc.ext})[/yellow]")
    return verdict


# -- scanning ---------------------------------------------------------------------


def _sample_points(wc: WorkingCurve, j: int, count: int, rng: np.random.Generator,
                   off_curve: bool = False) -> List[ProjPoint]:
    values = _subfield_values(wc, j)
    points: Dict[ProjPoint, None] = {}
    for _ in range(200 * max(count, 1)):
        if len(points) >= count:
            break
        coords = [values[int(i)] for i in rng.integers(0, len(values), 3)]
        if not any(coords):
            continue
        R = ProjPoint.of(wc.ctx, coords)
        if off_curve and wc.on_curve(R):
            continue
        points.setdefault(R)
    return sorted(points)


def _read_points(wc: WorkingCurve, path: Path) -> List[ProjPoint]:
    points = []
    with open(path, "r") as f:
        for raw in f:
            line = raw.strip()
            if line and not line.startswith("#"):
                points.append(ProjPoint.parse(wc.ctx, line))
    return points


def parse_candidates(wc: WorkingCurve, specs: Sequence[str], seed: int = 0) -> List[ProjPoint]:
    """Expand candidate specs: base, ext:J, ext:J:COUNT, offcurve:COUNT[:J], or a file of points."""
    rng = np.random.default_rng(seed)
    q = wc.params.q
    out: Dict[ProjPoint, None] = {}
    for spec in specs:
        parts = spec.split(":")
        try:
            if spec == "base":
                found = enumerate_plane(wc.ctx, q, 1)
            elif parts[0] == "ext" and len(parts) in (2, 3):
                j = int(parts[1])
                if len(parts) == 2:
                    _subfield_values(wc, j)
                    found = enumerate_plane(wc.ctx, q, j)
                else:
                    found = _sample_points(wc, j, int(parts[2]), rng)
            elif parts[0] == "offcurve" and len(parts) in (2, 3):
                j = int(parts[2]) if len(parts) == 3 else wc.ext
                found = _sample_points(wc, j, int(parts[1]), rng, off_curve=True)
            elif Path(spec).is_file():
                found = _read_points(wc, Path(spec))
            else:
                raise InvalidParams(f"unknown candidate spec {spec!r}")
        except InvalidParams:
            raise
        except (ValueError, FieldError) as e:
            raise InvalidParams(f"bad candidate spec {spec!r}: {e}") from e
        for P in found:
            out.setdefault(P)
    return list(out)


def analyze_point(wc: WorkingCurve, P: ProjPoint, config: EngineConfig, search_ext: int,
                  rng: np.random.Generator) -> GaloisVerdict:
    """Both engines on one candidate; they must never contradict each other."""
    positive = certify_galois(wc, P, search_ext)
    negative = obstruction_check(wc, P, config, rng)
    if positive.verdict is Verdict.GALOIS:
        if negative.verdict is Verdict.NOT_GALOIS:
            raise ConsistencyError(f"{P} is both GALOIS-certified and NOT-GALOIS-certified")
        positive.lines_examined = negative.lines_examined
        positive.unsplit_lines = negative.unsplit_lines
        return positive
    negative.deck = positive.deck
    return negative


def scan(wc: WorkingCurve, candidates: Sequence[ProjPoint], config: Optional[EngineConfig] = None,
         search_ext: int = 1, seed: int = 0, threads: int = 1,
         on_done: Optional[Callable[[GaloisVerdict], None]] = None) -> List[GaloisVerdict]:
    """Verdicts for every candidate, in candidate order.

    Each candidate draws its random lines from its own generator seeded by
    (seed, index), so results do not depend on the thread count.
    """
    config = config or EngineConfig()
    if not candidates:
        return []
    singular_locus(wc)

    def run(indexed: Tuple[int, ProjPoint]) -> GaloisVerdict:
        index, P = indexed
        result = analyze_point(wc, P, config, search_ext, np.random.default_rng([seed, index]))
        if on_done is not None:
            on_done(result)
        return result

    jobs = list(enumerate(candidates))
    if threads <= 1:
        return [run(job) for job in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run, jobs))


def summarize(verdicts: Sequence[GaloisVerdict]) -> Dict[str, int]:
    counts = {"galois": 0, "not_galois": 0, "inconclusive": 0}
    for v in verdicts:
        if v.verdict is Verdict.GALOIS:
            counts["galois"] += 1
        elif v.verdict is Verdict.NOT_GALOIS:
            counts["not_galois"] += 1
        else:
            counts["inconclusive"] += 1
    return counts
