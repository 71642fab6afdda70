from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import ClassVar, Mapping

from src.floyd.errors import InvalidAddress, InvalidConfig, ToleranceUnattainable
from src.floyd.tree_core import (
    BoundaryAddress,
    EdgeInterior,
    EdgeRef,
    Point,
    TreeConfig,
    VertexAddress,
    boundary_lcp_depth,
    combinatorial_distance,
    in_cone,
    lcp_depth,
    ray_prefix,
    vertex_boundary_lcp,
)
from src.utils.settings import get_setting_int, get_setting_rational


# -------- Оценки интервалами --------
class Enclosure:
    __slots__ = ()

    @property
    def lo(self) -> Fraction:
        raise NotImplementedError

    @property
    def hi(self) -> Fraction:
        raise NotImplementedError

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_exact(self) -> bool:
        return isinstance(self, ExactRational)

    def contains(self, value) -> bool:
        return self.lo <= value <= self.hi

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExactRational(Fraction(other))
        if not isinstance(other, Enclosure):
            return NotImplemented
        if isinstance(self, ExactRational) and isinstance(other, ExactRational):
            return ExactRational(self.value + other.value)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __mul__(self, factor):
        if not isinstance(factor, (int, Fraction)):
            return NotImplemented
        factor = Fraction(factor)
        if isinstance(self, ExactRational):
            return ExactRational(self.value * factor)
        low, high = sorted((self.lo * factor, self.hi * factor))
        return Interval(low, high)

    __rmul__ = __mul__


@dataclass(frozen=True, slots=True)
class ExactRational(Enclosure):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))

    @property
    def lo(self) -> Fraction:
        return self.value

    @property
    def hi(self) -> Fraction:
        return self.value


@dataclass(frozen=True, slots=True)
class Interval(Enclosure):
    low: Fraction
    high: Fraction

    def __post_init__(self):
        object.__setattr__(self, "low", Fraction(self.low))
        object.__setattr__(self, "high", Fraction(self.high))
        if self.low > self.high:
            raise ValueError(f"Empty interval [{self.low}, {self.high}]")

    @property
    def lo(self) -> Fraction:
        return self.low

    @property
    def hi(self) -> Fraction:
        return self.high


def ratio(numerator: Enclosure, denominator: Enclosure) -> Enclosure:
    if denominator.lo <= 0 or numerator.lo < 0:
        raise ValueError("ratio needs a nonnegative numerator and a positive denominator")
    if numerator.is_exact and denominator.is_exact:
        return ExactRational(numerator.lo / denominator.lo)
    return Interval(numerator.lo / denominator.hi, numerator.hi / denominator.lo)


def resolve_tol(tol) -> Fraction:
    if tol is None:
        return get_setting_rational("default_tol", Fraction(1, 10**6))
    tol = Fraction(tol)
    if tol <= 0:
        raise InvalidConfig(f"Tolerance must be positive, got {tol}")
    return tol


# -------- Функции Флойда --------
@dataclass(frozen=True, slots=True)
class GeometricTail:
    # h(r) = a * q**(r - m), r >= m
    a: Fraction
    q: Fraction
    kind: ClassVar[str] = "geometric"

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "q", Fraction(self.q))
        if self.a <= 0:
            raise InvalidConfig(f"tail.a must be positive, got {self.a}")
        if not 0 < self.q < 1:
            raise InvalidConfig(f"tail.q must lie in (0, 1), got {self.q}")

    def term(self, j: int) -> Fraction:
        return self.a * self.q ** j


@dataclass(frozen=True, slots=True)
class PowerTail:
    # h(r) = (r + 1)**(-s), r >= m
    s: int
    kind: ClassVar[str] = "power"

    def __post_init__(self):
        s = Fraction(self.s)
        if s.denominator != 1 or s <= 1:
            raise InvalidConfig(f"tail.s must be an integer >= 2, got {self.s}")
        object.__setattr__(self, "s", int(s))

    def value_at(self, r: int) -> Fraction:
        return Fraction(1, (r + 1) ** self.s)


@dataclass(frozen=True, slots=True)
class SubGeometricTail:
    # h(r) = a * q**((r - m)**2), r >= m
    a: Fraction
    q: Fraction
    kind: ClassVar[str] = "subgeometric"

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "q", Fraction(self.q))
        if self.a <= 0:
            raise InvalidConfig(f"tail.a must be positive, got {self.a}")
        if not 0 < self.q < 1:
            raise InvalidConfig(f"tail.q must lie in (0, 1), got {self.q}")

    def term(self, j: int) -> Fraction:
        return self.a * self.q ** (j * j)


Tail = GeometricTail | PowerTail | SubGeometricTail


@dataclass(frozen=True, slots=True)
class FloydFunction:
    prefix: tuple[Fraction, ...]
    tail: Tail

    def __post_init__(self):
        prefix = tuple(Fraction(value) for value in self.prefix)
        for index, value in enumerate(prefix):
            if value <= 0:
                raise InvalidConfig(f"prefix entry h({index}) must be positive, got {value}")
        object.__setattr__(self, "prefix", prefix)
        if not isinstance(self.tail, (GeometricTail, PowerTail, SubGeometricTail)):
            raise InvalidConfig(f"Unsupported tail {self.tail!r}")

    @property
    def m(self) -> int:
        return len(self.prefix)

    @classmethod
    def geometric(cls, a, q, prefix=()) -> "FloydFunction":
        return cls(tuple(prefix), GeometricTail(Fraction(a), Fraction(q)))

    @classmethod
    def power(cls, s, prefix=()) -> "FloydFunction":
        return cls(tuple(prefix), PowerTail(s))

    @classmethod
    def subgeometric(cls, a, q, prefix=()) -> "FloydFunction":
        return cls(tuple(prefix), SubGeometricTail(Fraction(a), Fraction(q)))


def h_at(H: FloydFunction, r: int) -> Fraction:
    if r < 0:
        raise InvalidConfig(f"h is defined on r >= 0, got {r}")
    if r < H.m:
        return H.prefix[r]
    tail = H.tail
    if isinstance(tail, PowerTail):
        return tail.value_at(r)
    return tail.term(r - H.m)


def _first_root_above(s: int, bound: Fraction) -> int:
    high = 1
    while high ** s < bound:
        high *= 2
    low = high // 2 + 1 if high > 1 else 1
    while low < high:
        middle = (low + high) // 2
        if middle ** s >= bound:
            high = middle
        else:
            low = middle + 1
    return high


def _geometric_remainder(tail: GeometricTail, start: int, tol: Fraction, force_interval: bool) -> Enclosure:
    if not force_interval:
        return ExactRational(tail.term(start) / (1 - tail.q))
    budget = get_setting_int("tail_term_budget", 10**6)
    partial = Fraction(0)
    j = start
    while True:
        term = tail.term(j)
        # remainder from j on lies in [term, term / (1 - q)]
        if term * tail.q / (1 - tail.q) <= tol:
            return Interval(partial + term, partial + term / (1 - tail.q))
        partial += term
        j += 1
        if j - start > budget:
            raise ToleranceUnattainable(details={"tail": "geometric", "tol": str(tol)})


def _power_remainder(tail: PowerTail, first_k: int, tol: Fraction) -> Enclosure:
    # сумма k**(-s) по k >= first_k, хвост оценён интегралами
    s = tail.s
    budget = get_setting_int("tail_term_budget", 10**6)
    cutoff = max(_first_root_above(s, 2 / tol), first_k - 1, 1)
    count = cutoff - first_k + 1
    if count > budget:
        raise ToleranceUnattainable(
            f"Power tail needs {count} terms for tolerance {tol}",
            details={"tail": "power", "terms": count, "budget": budget},
        )
    low = Fraction(0)
    high = Fraction(0)
    if count > 0:
        grid = -(-4 * count * tol.denominator // tol.numerator)
        low_num = 0
        high_num = 0
        for k in range(first_k, cutoff + 1):
            power = k ** s
            low_num += grid // power
            high_num += -(-grid // power)
        low = Fraction(low_num, grid)
        high = Fraction(high_num, grid)
    low += Fraction(1, (s - 1) * (cutoff + 1) ** (s - 1))
    high += Fraction(1, (s - 1) * cutoff ** (s - 1))
    return Interval(low, high)


def _subgeometric_remainder(tail: SubGeometricTail, start: int, tol: Fraction) -> Enclosure:
    budget = get_setting_int("tail_term_budget", 10**6)
    partial = Fraction(0)
    j = start
    while True:
        term = tail.term(j)
        majorant = term / (1 - tail.q ** (2 * j + 1))
        if majorant - term <= tol:
            return Interval(partial + term, partial + majorant)
        partial += term
        j += 1
        if j - start > budget:
            raise ToleranceUnattainable(details={"tail": "subgeometric", "tol": str(tol)})


def tail_sum(H: FloydFunction, R: int, tol=None, *, force_interval: bool = False) -> Enclosure:
    tol = resolve_tol(tol)
    if R < 0:
        raise InvalidConfig(f"R must be >= 0, got {R}")
    head = sum(H.prefix[R:], Fraction(0))
    start = max(R - H.m, 0)
    tail = H.tail
    if isinstance(tail, GeometricTail):
        rest = _geometric_remainder(tail, start, tol, force_interval)
    elif isinstance(tail, PowerTail):
        rest = _power_remainder(tail, H.m + start + 1, tol)
    else:
        rest = _subgeometric_remainder(tail, start, tol)
    return rest + head


# -------- Метрика Флойда --------
@dataclass(frozen=True, slots=True)
class MetricSpec:
    tree: TreeConfig
    h: FloydFunction
    base: VertexAddress | None = None

    def __post_init__(self):
        if self.base is None:
            object.__setattr__(self, "base", self.tree.root)
        if self.base.n != self.tree.n:
            raise InvalidAddress("Base vertex belongs to a tree of different valency")


def edge_distance_to_base(spec: MetricSpec, edge: EdgeRef) -> int:
    return min(
        combinatorial_distance(spec.base, edge.parent),
        combinatorial_distance(spec.base, edge.child),
    )


def edge_length(spec: MetricSpec, edge: EdgeRef) -> Fraction:
    return h_at(spec.h, edge_distance_to_base(spec, edge))


@lru_cache(maxsize=200_000)
def _potential(spec: MetricSpec, v: VertexAddress) -> Fraction:
    # length of the path from the root vertex to v under spec's edge lengths
    if v.is_root:
        return Fraction(0)
    return _potential(spec, v.parent) + edge_length(spec, EdgeRef(v))


def _vertex_distance(spec: MetricSpec, u: VertexAddress, v: VertexAddress) -> Fraction:
    branch = u.prefix(lcp_depth(u, v))
    return _potential(spec, u) + _potential(spec, v) - 2 * _potential(spec, branch)


def radial(spec: MetricSpec, v: VertexAddress) -> Fraction:
    _check_point(spec, v)
    return _vertex_distance(spec, spec.base, v)


def _descent(spec: MetricSpec, p: BoundaryAddress, L: int, tol: Fraction) -> Enclosure:
    shared = vertex_boundary_lcp(spec.base, p)
    start = max(L, shared)
    finite = sum(
        (edge_length(spec, EdgeRef(ray_prefix(p, k + 1))) for k in range(L, start)),
        Fraction(0),
    )
    # past `start` an edge of root depth k lies at distance k + |base| - 2*shared from base
    return tail_sum(spec.h, start + spec.base.depth - 2 * shared, tol) + finite


def _check_point(spec: MetricSpec, point: Point) -> None:
    if point.n != spec.tree.n:
        raise InvalidAddress(
            "Point belongs to a tree of different valency",
            details={"point": str(point), "n": spec.tree.n},
        )


def _lies_below(child: VertexAddress, point: Point) -> bool:
    if isinstance(point, VertexAddress):
        return child.is_prefix_of(point)
    if isinstance(point, EdgeInterior):
        return child.is_prefix_of(point.edge.child)
    return in_cone(child, point)


def _from_edge_interior(spec: MetricSpec, P: EdgeInterior, Q: Point, tol: Fraction) -> Enclosure:
    edge = P.edge
    length = edge_length(spec, edge)
    if isinstance(Q, EdgeInterior) and Q.edge == edge:
        return ExactRational(abs(P.t - Q.t) * length)
    if _lies_below(edge.child, Q):
        return floyd_distance(spec, edge.child, Q, tol) + (1 - P.t) * length
    return floyd_distance(spec, edge.parent, Q, tol) + P.t * length


def floyd_distance(spec: MetricSpec, P: Point, Q: Point, tol=None) -> Enclosure:
    tol = resolve_tol(tol)
    _check_point(spec, P)
    _check_point(spec, Q)
    if isinstance(P, BoundaryAddress) and isinstance(Q, BoundaryAddress):
        if P == Q:
            return ExactRational(Fraction(0))
        L = boundary_lcp_depth(P, Q)
        return _descent(spec, P, L, tol / 2) + _descent(spec, Q, L, tol / 2)
    if isinstance(P, BoundaryAddress):
        P, Q = Q, P
    if isinstance(P, EdgeInterior):
        return _from_edge_interior(spec, P, Q, tol)
    if isinstance(Q, EdgeInterior):
        return _from_edge_interior(spec, Q, P, tol)
    if isinstance(Q, BoundaryAddress):
        L = vertex_boundary_lcp(P, Q)
        climb = _potential(spec, P) - _potential(spec, P.prefix(L))
        return _descent(spec, Q, L, tol) + climb
    return ExactRational(_vertex_distance(spec, P, Q))


# -------- Условие eta* > 0 и сравнимость --------
class Limit(Enum):
    LIMIT = "limit"

    def __str__(self) -> str:
        return self.value


LIMIT = Limit.LIMIT


@dataclass(frozen=True, slots=True)
class EtaReport:
    eta_star: Fraction
    witness: int | Limit


def eta_inf(H: FloydFunction) -> EtaReport:
    m = H.m
    candidates = [(h_at(H, r + 1) / h_at(H, r), r) for r in range(m)]
    tail = H.tail
    if isinstance(tail, SubGeometricTail):
        # ratios a*q**(2k+1) tend to 0 and are never attained
        return EtaReport(Fraction(0), LIMIT)
    if isinstance(tail, GeometricTail):
        candidates.append((tail.q, m))
    else:
        # ((r+1)/(r+2))**s increases towards 1, the first tail ratio is the smallest
        candidates.append((Fraction(m + 1, m + 2) ** tail.s, m))
    best = min(value for value, _ in candidates)
    witness = next(index for value, index in candidates if value == best)
    return EtaReport(best, witness)


def is_lipschitz_compactification(H: FloydFunction) -> bool:
    return eta_inf(H).eta_star > 0


@dataclass(frozen=True, slots=True)
class Comparability:
    constant: Fraction
    witness: int


def comparability(H1: FloydFunction, H2: FloydFunction) -> Comparability | None:
    t1, t2 = H1.tail, H2.tail
    if type(t1) is not type(t2):
        return None
    if isinstance(t1, GeometricTail) and t1.q != t2.q:
        return None
    if isinstance(t1, PowerTail) and t1.s != t2.s:
        return None
    if isinstance(t1, SubGeometricTail) and (t1.q != t2.q or H1.m != H2.m):
        # equal q with shifted offsets still leaves a ratio q**(linear in r)
        return None
    # the pointwise ratio is constant from max(m1, m2) on
    horizon = max(H1.m, H2.m)
    best = None
    for r in range(horizon + 1):
        value = h_at(H1, r) / h_at(H2, r)
        spread = max(value, 1 / value)
        if best is None or spread > best.constant:
            best = Comparability(spread, r)
    return best


# -------- Восстановление h по длинам рёбер --------
@dataclass(frozen=True)
class EdgeLengthAssignment:
    tree: TreeConfig
    depth_limit: int
    explicit: Mapping[EdgeRef, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.depth_limit < 0:
            raise InvalidConfig(f"depth must be >= 0, got {self.depth_limit}")
        normalized = {}
        for edge, value in self.explicit.items():
            value = Fraction(value)
            if edge.child.n != self.tree.n:
                raise InvalidAddress(f"Edge {edge} belongs to a tree of different valency")
            if edge.depth >= self.depth_limit:
                raise InvalidConfig(f"Edge {edge} has depth {edge.depth} >= {self.depth_limit}")
            if value <= 0:
                raise InvalidConfig(f"Edge {edge} must have positive length, got {value}")
            normalized[edge] = value
        missing = [edge for edge in self.tree.edges(self.depth_limit - 1) if edge not in normalized]
        if missing:
            raise InvalidConfig(
                f"{len(missing)} edge(s) of depth < {self.depth_limit} have no length, first {missing[0]}",
                details={"missing": [str(edge) for edge in missing[:10]]},
            )
        object.__setattr__(self, "explicit", normalized)

    def by_depth(self) -> dict[int, list[Fraction]]:
        grouped: dict[int, list[Fraction]] = {r: [] for r in range(self.depth_limit)}
        for edge, value in self.explicit.items():
            grouped[edge.depth].append(value)
        return grouped


def induced_assignment(tree: TreeConfig, H: FloydFunction, D: int, base: VertexAddress | None = None) -> EdgeLengthAssignment:
    spec = MetricSpec(tree, H, base)
    lengths = {edge: edge_length(spec, edge) for edge in tree.edges(D - 1)}
    return EdgeLengthAssignment(tree, D, lengths)


def reconstruct_floyd(A: EdgeLengthAssignment) -> tuple[Fraction, ...]:
    return tuple(min(values) for values in A.by_depth().values())


def depth_spread(A: EdgeLengthAssignment) -> tuple[Fraction, ...]:
    return tuple(max(values) / min(values) for values in A.by_depth().values())
