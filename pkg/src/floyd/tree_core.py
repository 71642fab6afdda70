from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Iterator

from src.floyd.errors import InvalidAddress, InvalidConfig
from src.utils.rationals import format_letters, format_rational


class Depth(Enum):
    INFINITE = "infinite"

    def __str__(self) -> str:
        return self.value


INFINITE = Depth.INFINITE


def _check_letters(letters: tuple[int, ...], n: int, offset: int = 0) -> None:
    for index, letter in enumerate(letters, start=offset):
        bound = n if index == 0 else n - 1
        if not isinstance(letter, int) or isinstance(letter, bool) or not 0 <= letter < bound:
            raise InvalidAddress(
                f"Letter {letter!r} at position {index} is outside [0, {bound})",
                details={"letters": list(letters), "n": n},
            )


@dataclass(frozen=True, slots=True)
class VertexAddress:
    letters: tuple[int, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        _check_letters(self.letters, self.n)

    @property
    def depth(self) -> int:
        return len(self.letters)

    @property
    def is_root(self) -> bool:
        return not self.letters

    @property
    def parent(self) -> "VertexAddress":
        if not self.letters:
            raise InvalidAddress("The base vertex has no parent")
        return VertexAddress(self.letters[:-1], self.n)

    def child(self, letter: int) -> "VertexAddress":
        return VertexAddress(self.letters + (letter,), self.n)

    def prefix(self, length: int) -> "VertexAddress":
        return VertexAddress(self.letters[:length], self.n)

    def is_prefix_of(self, other: "VertexAddress") -> bool:
        return other.letters[: len(self.letters)] == self.letters

    def __str__(self) -> str:
        return f"v:{format_letters(self.letters)}"


@dataclass(frozen=True, slots=True)
class EdgeRef:
    child: VertexAddress

    def __post_init__(self):
        if self.child.depth < 1:
            raise InvalidAddress("An edge is named by its deeper endpoint, depth >= 1")

    @property
    def parent(self) -> VertexAddress:
        return self.child.parent

    @property
    def depth(self) -> int:
        return self.child.depth - 1

    def __str__(self) -> str:
        return str(self.child)


@dataclass(frozen=True, slots=True)
class EdgeInterior:
    # t отсчитывается от родителя
    edge: EdgeRef
    t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "t", Fraction(self.t))
        if not 0 < self.t < 1:
            raise InvalidAddress(f"Edge parameter must lie in (0, 1), got {self.t}")

    @property
    def n(self) -> int:
        return self.edge.child.n

    def __str__(self) -> str:
        return f"e:{format_letters(self.edge.child.letters)}@{format_rational(self.t)}"


def _primitive_root(word: tuple[int, ...]) -> tuple[int, ...]:
    size = len(word)
    for d in range(1, size + 1):
        if size % d == 0 and word[:d] * (size // d) == word:
            return word[:d]
    return word


@dataclass(frozen=True, slots=True)
class BoundaryAddress:
    preperiod: tuple[int, ...]
    period: tuple[int, ...]
    n: int

    def __post_init__(self):
        preperiod = tuple(self.preperiod)
        period = tuple(self.period)
        if not period:
            raise InvalidAddress("Boundary period must be nonempty")
        _check_letters(preperiod, self.n)
        # period letters occur at positions >= 1 once the word repeats
        _check_letters(period, self.n, offset=1)
        period = _primitive_root(period)
        while preperiod and preperiod[-1] == period[-1]:
            preperiod = preperiod[:-1]
            period = period[-1:] + period[:-1]
        object.__setattr__(self, "preperiod", preperiod)
        object.__setattr__(self, "period", period)

    def letter(self, index: int) -> int:
        if index < len(self.preperiod):
            return self.preperiod[index]
        return self.period[(index - len(self.preperiod)) % len(self.period)]

    def word(self, length: int) -> tuple[int, ...]:
        return tuple(self.letter(i) for i in range(length))

    def __str__(self) -> str:
        return f"b:{format_letters(self.preperiod)};{format_letters(self.period)}"


TreePoint = VertexAddress | EdgeInterior
Point = VertexAddress | EdgeInterior | BoundaryAddress


@dataclass(frozen=True, slots=True)
class AxisCoordinate:
    m: int
    departure: tuple[int, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "departure", tuple(self.departure))
        for index, letter in enumerate(self.departure):
            bound = self.n - 2 if index == 0 else self.n - 1
            if not isinstance(letter, int) or not 0 <= letter < bound:
                raise InvalidAddress(
                    f"Departure letter {letter!r} at position {index} is outside [0, {bound})",
                    details={"m": self.m, "departure": list(self.departure)},
                )


@dataclass(frozen=True, slots=True)
class TreeConfig:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 3:
            raise InvalidConfig(f"Valency must be an integer >= 3, got {self.n!r}")

    @property
    def root(self) -> VertexAddress:
        return VertexAddress((), self.n)

    def vertex(self, *letters: int) -> VertexAddress:
        return VertexAddress(letters, self.n)

    def boundary(self, preperiod, period) -> BoundaryAddress:
        return canonical_boundary(self, preperiod, period)

    def arity(self, depth: int) -> int:
        return self.n if depth == 0 else self.n - 1

    def children(self, v: VertexAddress) -> list[VertexAddress]:
        return [v.child(c) for c in range(self.arity(v.depth))]

    def neighbors(self, v: VertexAddress) -> list[VertexAddress]:
        around = self.children(v)
        if not v.is_root:
            around.insert(0, v.parent)
        return around

    def vertices(self, max_depth: int) -> Iterator[VertexAddress]:
        def walk(v: VertexAddress):
            yield v
            if v.depth < max_depth:
                for c in self.children(v):
                    yield from walk(c)
        if max_depth >= 0:
            yield from walk(self.root)

    def edges(self, max_depth: int) -> Iterator[EdgeRef]:
        for v in self.vertices(max_depth + 1):
            if not v.is_root:
                yield EdgeRef(v)

    def ball_size(self, depth: int) -> int:
        return 1 + self.n * ((self.n - 1) ** depth - 1) // (self.n - 2)

    def boundary_points(self, preperiod_max: int, period_max: int) -> list[BoundaryAddress]:
        found = set()
        for pre_len in range(preperiod_max + 1):
            pre_alphabets = [range(self.arity(i)) for i in range(pre_len)]
            for pre in product(*pre_alphabets):
                for per_len in range(1, period_max + 1):
                    for per in product(range(self.n - 1), repeat=per_len):
                        point = BoundaryAddress(pre, per, self.n)
                        if len(point.preperiod) <= preperiod_max and len(point.period) <= period_max:
                            found.add(point)
        return sorted(found, key=lambda p: (len(p.preperiod), p.preperiod, len(p.period), p.period))


def _same_config(*items) -> int:
    sizes = {item.n for item in items}
    if len(sizes) != 1:
        raise InvalidAddress("Addresses belong to trees of different valency", details={"n": sorted(sizes)})
    return sizes.pop()


def lcp_depth(u: VertexAddress, v: VertexAddress) -> int:
    _same_config(u, v)
    k = 0
    for a, b in zip(u.letters, v.letters):
        if a != b:
            break
        k += 1
    return k


def combinatorial_distance(u: VertexAddress, v: VertexAddress) -> int:
    return u.depth + v.depth - 2 * lcp_depth(u, v)


def geodesic(u: VertexAddress, v: VertexAddress) -> list[VertexAddress]:
    k = lcp_depth(u, v)
    up = [u.prefix(length) for length in range(u.depth, k - 1, -1)]
    down = [v.prefix(length) for length in range(k + 1, v.depth + 1)]
    return up + down


def canonical_boundary(tree: TreeConfig, preperiod, period) -> BoundaryAddress:
    return BoundaryAddress(tuple(preperiod), tuple(period), tree.n)


def ray_prefix(p: BoundaryAddress, K: int) -> VertexAddress:
    if K < 0:
        raise InvalidAddress(f"Ray depth must be >= 0, got {K}")
    return VertexAddress(p.word(K), p.n)


def boundary_lcp_depth(p: BoundaryAddress, q: BoundaryAddress) -> int | Depth:
    _same_config(p, q)
    if p == q:
        return INFINITE
    # distinct eventually periodic words differ before this bound
    bound = max(len(p.preperiod), len(q.preperiod)) + lcm(len(p.period), len(q.period))
    for index in range(bound + 1):
        if p.letter(index) != q.letter(index):
            return index
    raise AssertionError(f"canonical forms {p} and {q} differ but their words agree")


def vertex_boundary_lcp(v: VertexAddress, p: BoundaryAddress) -> int:
    _same_config(v, p)
    k = 0
    for index, letter in enumerate(v.letters):
        if p.letter(index) != letter:
            break
        k += 1
    return k


def in_cone(x: VertexAddress, p: BoundaryAddress) -> bool:
    return vertex_boundary_lcp(x, p) == x.depth


# -------- Координаты вдоль канонической оси --------
def to_axis(v: VertexAddress) -> AxisCoordinate:
    letters = v.letters
    if not letters:
        return AxisCoordinate(0, (), v.n)
    first = letters[0]
    if first >= 2:
        return AxisCoordinate(0, (first - 2,) + letters[1:], v.n)
    run = 0
    while 1 + run < len(letters) and letters[1 + run] == 0:
        run += 1
    m = (1 + run) if first == 0 else -(1 + run)
    rest = letters[1 + run:]
    if not rest:
        return AxisCoordinate(m, (), v.n)
    return AxisCoordinate(m, (rest[0] - 1,) + rest[1:], v.n)


def from_axis(c: AxisCoordinate) -> VertexAddress:
    if c.m == 0:
        if not c.departure:
            return VertexAddress((), c.n)
        return VertexAddress((c.departure[0] + 2,) + c.departure[1:], c.n)
    head = (0 if c.m > 0 else 1,) + (0,) * (abs(c.m) - 1)
    if not c.departure:
        return VertexAddress(head, c.n)
    return VertexAddress(head + (c.departure[0] + 1,) + c.departure[1:], c.n)
