import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable

from src.floyd.automorphism import (
    AutWord,
    Translation,
    apply_edge,
    apply_point,
    apply_vertex,
    axis_vertices,
    classify,
    invert,
)
from src.floyd.errors import InvalidAddress, InvalidConfig, PreconditionFailed, ToleranceUnattainable
from src.floyd.floyd_metric import (
    Enclosure,
    ExactRational,
    FloydFunction,
    MetricSpec,
    eta_inf,
    floyd_distance,
    h_at,
    ratio,
    resolve_tol,
)
from src.floyd.tree_core import Point, TreeConfig
from src.utils.logger import Logger
from src.utils.rationals import format_rational
from src.utils.settings import get_setting_int

logger = Logger("analysis")


@dataclass(frozen=True, slots=True)
class SampleSpec:
    vertex_depth: int
    boundary_preperiod_max: int = 0
    boundary_period_max: int = 0
    seed: int | None = None
    extra: int = 0

    def __post_init__(self):
        for name in ("vertex_depth", "boundary_preperiod_max", "boundary_period_max", "extra"):
            if getattr(self, name) < 0:
                raise InvalidAddress(f"{name} must be >= 0, got {getattr(self, name)}")


@dataclass(frozen=True, slots=True)
class RatioReport:
    sup_ratio: Enclosure
    inf_ratio: Enclosure
    sup_witness: tuple[Point, Point]
    inf_witness: tuple[Point, Point]


def sample_points(tree: TreeConfig, sample: SampleSpec) -> list[Point]:
    points: list[Point] = list(tree.vertices(sample.vertex_depth))
    if sample.boundary_period_max > 0:
        points.extend(tree.boundary_points(sample.boundary_preperiod_max, sample.boundary_period_max))
    if sample.seed is not None and sample.extra:
        rng = random.Random(sample.seed)
        seen = set(points)
        for _ in range(sample.extra):
            depth = rng.randint(0, sample.vertex_depth + 2)
            v = tree.vertex(*[rng.randrange(tree.arity(i)) for i in range(depth)])
            if v not in seen:
                seen.add(v)
                points.append(v)
    return points


class _Extremes:
    # при равенстве остаётся первая пара
    def __init__(self):
        self.sup = None
        self.inf = None

    def offer(self, value: Enclosure, witness: tuple) -> None:
        if self.sup is None or value.hi > self.sup[0].hi:
            self.sup = (value, witness)
        if self.inf is None or value.lo < self.inf[0].lo:
            self.inf = (value, witness)

    def report(self) -> RatioReport:
        if self.sup is None:
            one = ExactRational(Fraction(1))
            return RatioReport(one, one, (), ())
        return RatioReport(self.sup[0], self.inf[0], self.sup[1], self.inf[1])


def _check_depth(D: int) -> None:
    if D < 0:
        raise InvalidConfig(f"depth must be >= 0, got {D}")


def depth_change_bound(g: AutWord, D: int) -> int:
    _check_depth(D)
    return max(abs(apply_vertex(g, v).depth - v.depth) for v in g.tree.vertices(D))


def edge_ratio_bound(g: AutWord, H: FloydFunction, D: int) -> RatioReport:
    _check_depth(D)
    extremes = _Extremes()
    for edge in g.tree.edges(D):
        image = apply_edge(g, edge)
        value = ExactRational(h_at(H, image.depth) / h_at(H, edge.depth))
        extremes.offer(value, (edge.parent, edge.child))
    return extremes.report()


def predicted_edge_factor(g: AutWord, H: FloydFunction) -> Fraction | None:
    verdict = classify(g)
    if not isinstance(verdict, Translation) or verdict.T != 1:
        raise PreconditionFailed("Predicted factor needs a unitary translation", details={"kind": verdict.kind})
    eta = eta_inf(H).eta_star
    if eta == 0:
        return None
    return (1 / eta) ** (1 + 2 * verdict.d0)


def axis_adjacent_ratio(g: AutWord, H: FloydFunction, r: int) -> Fraction:
    verdict = classify(g)
    if not isinstance(verdict, Translation) or verdict.T != 1:
        raise PreconditionFailed(
            "Axis ratio needs a unitary translation",
            details={"kind": verdict.kind, "T": getattr(verdict, "T", 0)},
        )
    if r < 0:
        raise PreconditionFailed(f"r must be >= 0, got {r}")
    y = axis_vertices(g, r + 2)
    spec = MetricSpec(g.tree, H)
    near = floyd_distance(spec, y[r], y[r + 1])
    far = floyd_distance(spec, y[r + 1], y[r + 2])
    return near.lo / far.lo


def _pairwise(points: list[Point], measure: Callable[[Point, Point], Enclosure]) -> RatioReport:
    extremes = _Extremes()
    for p, q in combinations(points, 2):
        extremes.offer(measure(p, q), (p, q))
    return extremes.report()


def _certified_ratio(numerator: Callable, denominator: Callable, tol: Fraction) -> Enclosure:
    rounds = get_setting_int("ratio_refine_rounds", 8)
    step = tol
    for _ in range(rounds + 1):
        value = ratio(numerator(step), denominator(step))
        if value.width <= tol:
            return value
        step /= 16
    raise ToleranceUnattainable(
        f"Ratio width {format_rational(value.width)} exceeds tolerance {format_rational(tol)} after {rounds} rounds",
        details={"tol": str(tol), "width": str(value.width), "rounds": rounds},
    )


def empirical_bilipschitz(g: AutWord, spec: MetricSpec, sample: SampleSpec, tol=None) -> RatioReport:
    tol = resolve_tol(tol)
    points = sample_points(spec.tree, sample)
    images = {point: apply_point(g, point) for point in points}

    def measure(p: Point, q: Point) -> Enclosure:
        return _certified_ratio(
            lambda step: floyd_distance(spec, images[p], images[q], step),
            lambda step: floyd_distance(spec, p, q, step),
            tol,
        )

    report = _pairwise(points, measure)
    logger.write(
        f"[ESTIMATE] points={len(points)} sup_hi={format_rational(report.sup_ratio.hi)} "
        f"inf_lo={format_rational(report.inf_ratio.lo)}"
    )
    return report


def identity_map_bilipschitz(spec1: MetricSpec, spec2: MetricSpec, sample: SampleSpec, tol=None) -> RatioReport:
    if spec1.tree != spec2.tree:
        raise InvalidAddress("Metrics live on trees of different valency")
    tol = resolve_tol(tol)
    points = sample_points(spec1.tree, sample)

    def measure(p: Point, q: Point) -> Enclosure:
        return _certified_ratio(
            lambda step: floyd_distance(spec1, p, q, step),
            lambda step: floyd_distance(spec2, p, q, step),
            tol,
        )

    report = _pairwise(points, measure)
    logger.write(
        f"[IDENTITY] points={len(points)} sup_hi={format_rational(report.sup_ratio.hi)} "
        f"inf_lo={format_rational(report.inf_ratio.lo)}"
    )
    return report


@dataclass(frozen=True, slots=True)
class SufficiencyReport:
    d0: int
    depth_change: int
    edge_sup: Fraction
    inverse_edge_sup: Fraction
    factor: Fraction | None

    @property
    def holds(self) -> bool:
        if self.depth_change > 1 + 2 * self.d0:
            return False
        if self.factor is None:
            return False
        return self.edge_sup <= self.factor and self.inverse_edge_sup <= self.factor


def sufficiency_check(g: AutWord, H: FloydFunction, D: int) -> SufficiencyReport:
    factor = predicted_edge_factor(g, H)
    verdict = classify(g)
    report = SufficiencyReport(
        d0=verdict.d0,
        depth_change=depth_change_bound(g, D),
        edge_sup=edge_ratio_bound(g, H, D).sup_ratio.hi,
        inverse_edge_sup=edge_ratio_bound(invert(g), H, D).sup_ratio.hi,
        factor=factor,
    )
    logger.write(
        f"[SUFFICIENCY] d0={report.d0} depth_change={report.depth_change} "
        f"edge_sup={format_rational(report.edge_sup)} holds={report.holds}"
    )
    return report
