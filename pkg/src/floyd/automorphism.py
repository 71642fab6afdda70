import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

from src.floyd.errors import InvalidAddress, InvalidConfig, PreconditionFailed, VerificationError
from src.floyd.tree_core import (
    AxisCoordinate,
    BoundaryAddress,
    EdgeInterior,
    EdgeRef,
    Point,
    TreeConfig,
    VertexAddress,
    combinatorial_distance,
    from_axis,
    geodesic,
    to_axis,
)


@dataclass(frozen=True, slots=True)
class LocalPermutation:
    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if sorted(self.images) != list(range(len(self.images))):
            raise InvalidConfig(f"Not a permutation of [0, {len(self.images)}): {list(self.images)}")

    @property
    def arity(self) -> int:
        return len(self.images)

    @property
    def is_identity(self) -> bool:
        return all(image == index for index, image in enumerate(self.images))

    def __call__(self, letter: int) -> int:
        return self.images[letter]

    def inverse(self) -> "LocalPermutation":
        images = [0] * len(self.images)
        for index, image in enumerate(self.images):
            images[image] = index
        return LocalPermutation(tuple(images))


@dataclass(frozen=True)
class FinitaryPortrait:
    tree: TreeConfig
    perms: Mapping[VertexAddress, LocalPermutation] = field(default_factory=dict)
    depth: int = 1

    def __post_init__(self):
        perms = dict(self.perms)
        for address, perm in perms.items():
            if address.n != self.tree.n:
                raise InvalidAddress(f"Portrait address {address} belongs to a tree of different valency")
            if address.depth >= self.depth:
                raise InvalidAddress(f"Portrait address {address} is not above depth {self.depth}")
            expected = self.tree.arity(address.depth)
            if perm.arity != expected:
                raise InvalidConfig(
                    f"Permutation at {address} has arity {perm.arity}, expected {expected}",
                    details={"address": str(address)},
                )
        object.__setattr__(self, "perms", perms)

    def __hash__(self):
        return hash((self.tree, self.depth, frozenset(self.perms.items())))

    def perm_at(self, address: VertexAddress) -> LocalPermutation | None:
        return self.perms.get(address)

    def rewrite(self, letters: tuple[int, ...]) -> tuple[int, ...]:
        out: list[int] = []
        for index, letter in enumerate(letters):
            if index >= self.depth:
                out.extend(letters[index:])
                break
            perm = self.perms.get(VertexAddress(tuple(out), self.tree.n))
            out.append(perm(letter) if perm else letter)
        return tuple(out)

    def preimage(self, letters: tuple[int, ...]) -> tuple[int, ...]:
        out: list[int] = []
        for index, letter in enumerate(letters):
            if index >= self.depth:
                out.extend(letters[index:])
                break
            perm = self.perms.get(VertexAddress(letters[:index], self.tree.n))
            out.append(perm.inverse()(letter) if perm else letter)
        return tuple(out)

    def inverse(self) -> "FinitaryPortrait":
        # the inverse reads its permutation at u where we read ours at the image of u
        perms = {
            VertexAddress(self.preimage(address.letters), self.tree.n): perm.inverse()
            for address, perm in self.perms.items()
        }
        return FinitaryPortrait(self.tree, perms, self.depth)


class Shift(Enum):
    SIGMA = "sigma"
    SIGMA_INV = "sigma_inv"

    @property
    def step(self) -> int:
        return 1 if self is Shift.SIGMA else -1

    def inverse(self) -> "Shift":
        return Shift.SIGMA_INV if self is Shift.SIGMA else Shift.SIGMA


SIGMA = Shift.SIGMA
SIGMA_INV = Shift.SIGMA_INV

Generator = FinitaryPortrait | Shift


@dataclass(frozen=True)
class AutWord:
    # слово применяется справа налево: (g1, g2) = g1 после g2
    tree: TreeConfig
    word: tuple[Generator, ...] = ()

    def __post_init__(self):
        word = tuple(self.word)
        for generator in word:
            if isinstance(generator, FinitaryPortrait):
                if generator.tree != self.tree:
                    raise InvalidAddress("Portrait belongs to a tree of different valency")
            elif not isinstance(generator, Shift):
                raise InvalidAddress(f"Unknown generator {generator!r}")
        object.__setattr__(self, "word", word)

    def __len__(self) -> int:
        return len(self.word)


def identity(tree: TreeConfig) -> AutWord:
    return AutWord(tree, ())


def compose(g: AutWord, h: AutWord) -> AutWord:
    if g.tree != h.tree:
        raise InvalidAddress("Cannot compose automorphisms of different trees")
    return AutWord(g.tree, g.word + h.word)


def invert(g: AutWord) -> AutWord:
    return AutWord(g.tree, tuple(generator.inverse() for generator in reversed(g.word)))


def power(g: AutWord, k: int) -> AutWord:
    base = g if k >= 0 else invert(g)
    return AutWord(g.tree, base.word * abs(k))


def conjugate(g: AutWord, by: AutWord) -> AutWord:
    return compose(compose(by, g), invert(by))


# -------- Действие на вершинах --------
def _shift_vertex(shift: Shift, v: VertexAddress) -> VertexAddress:
    c = to_axis(v)
    return from_axis(AxisCoordinate(c.m + shift.step, c.departure, c.n))


def _apply_generator(generator: Generator, v: VertexAddress) -> VertexAddress:
    if isinstance(generator, Shift):
        return _shift_vertex(generator, v)
    return VertexAddress(generator.rewrite(v.letters), v.n)


def apply_vertex(g: AutWord, v: VertexAddress) -> VertexAddress:
    if v.n != g.tree.n:
        raise InvalidAddress("Vertex belongs to a tree of different valency")
    for generator in reversed(g.word):
        v = _apply_generator(generator, v)
    return v


def apply_edge(g: AutWord, edge: EdgeRef) -> EdgeRef:
    ends = (apply_vertex(g, edge.parent), apply_vertex(g, edge.child))
    return EdgeRef(max(ends, key=lambda v: v.depth))


# -------- Действие на границе --------
def _with_new_head(p: BoundaryAddress, consumed: int, head: tuple[int, ...]) -> BoundaryAddress:
    if consumed <= len(p.preperiod):
        rest = p.preperiod[consumed:]
        return BoundaryAddress(head + rest, p.period, p.n)
    offset = (consumed - len(p.preperiod)) % len(p.period)
    return BoundaryAddress(head, p.period[offset:] + p.period[:offset], p.n)


def _portrait_boundary(portrait: FinitaryPortrait, p: BoundaryAddress) -> BoundaryAddress:
    # letters at positions >= depth are left alone
    consumed = max(portrait.depth, len(p.preperiod))
    return _with_new_head(p, consumed, portrait.rewrite(p.word(consumed)))


def _shift_boundary(shift: Shift, p: BoundaryAddress) -> BoundaryAddress:
    # a word agreeing with an axis end on pre + one period + one letter is that end
    consumed = len(p.preperiod) + len(p.period) + 1
    c = to_axis(VertexAddress(p.word(consumed), p.n))
    if not c.departure:
        return p
    head = from_axis(AxisCoordinate(c.m + shift.step, c.departure, c.n))
    return _with_new_head(p, consumed, head.letters)


def apply_boundary(g: AutWord, p: BoundaryAddress) -> BoundaryAddress:
    if p.n != g.tree.n:
        raise InvalidAddress("Boundary point belongs to a tree of different valency")
    for generator in reversed(g.word):
        if isinstance(generator, Shift):
            p = _shift_boundary(generator, p)
        else:
            p = _portrait_boundary(generator, p)
    return p


def apply_point(g: AutWord, point: Point) -> Point:
    if isinstance(point, BoundaryAddress):
        return apply_boundary(g, point)
    if isinstance(point, VertexAddress):
        return apply_vertex(g, point)
    # edge interior: the image keeps its distance from the image of the parent
    parent = apply_vertex(g, point.edge.parent)
    child = apply_vertex(g, point.edge.child)
    if child.depth > parent.depth:
        return EdgeInterior(EdgeRef(child), point.t)
    return EdgeInterior(EdgeRef(parent), 1 - point.t)


def portrait_on_ball(portrait: FinitaryPortrait, depth: int) -> dict[VertexAddress, VertexAddress]:
    word = AutWord(portrait.tree, (portrait,))
    return {v: apply_vertex(word, v) for v in portrait.tree.vertices(depth)}


# -------- Классификация --------
@dataclass(frozen=True, slots=True)
class EllipticVertex:
    fixed: VertexAddress
    kind = "elliptic"


@dataclass(frozen=True, slots=True)
class Inversion:
    edge: EdgeRef
    kind = "inversion"


@dataclass(frozen=True, slots=True)
class Translation:
    T: int
    axis_point: VertexAddress
    d0: int
    kind = "translation"


Classification = EllipticVertex | Inversion | Translation


def displacement(g: AutWord, v: VertexAddress) -> int:
    return combinatorial_distance(v, apply_vertex(g, v))


def classify(g: AutWord) -> Classification:
    root = g.tree.root
    image = apply_vertex(g, root)
    k1 = combinatorial_distance(root, image)
    k2 = combinatorial_distance(root, apply_vertex(g, image))
    T = max(0, k2 - k1)
    path = geodesic(root, image)
    if T >= 1:
        d0 = (k1 - T) // 2
        axis_point = path[d0]
        if displacement(g, axis_point) != T:
            raise VerificationError(
                "Axis point is not displaced by the translation length",
                details={"axis_point": str(axis_point), "T": T},
            )
        return Translation(T, axis_point, d0)
    if k1 % 2 == 0:
        fixed = path[k1 // 2]
        if apply_vertex(g, fixed) != fixed:
            raise VerificationError("Midpoint vertex is not fixed", details={"vertex": str(fixed)})
        return EllipticVertex(fixed)
    a, b = path[k1 // 2], path[k1 // 2 + 1]
    if apply_vertex(g, a) != b or apply_vertex(g, b) != a:
        raise VerificationError("Middle edge is not inverted", details={"edge": f"{a} {b}"})
    return Inversion(EdgeRef(max((a, b), key=lambda v: v.depth)))


def translation_length(g: AutWord) -> int:
    verdict = classify(g)
    return verdict.T if isinstance(verdict, Translation) else 0


def _require_translation(g: AutWord) -> Translation:
    verdict = classify(g)
    if not isinstance(verdict, Translation):
        raise PreconditionFailed(
            f"Automorphism is not a translation ({verdict.kind})",
            details={"kind": verdict.kind},
        )
    return verdict


def axis_vertices(g: AutWord, count: int) -> list[VertexAddress]:
    # y_0 = axis_point, дальше к притягивающему концу
    verdict = _require_translation(g)
    path = [verdict.axis_point]
    current = verdict.axis_point
    while len(path) <= count:
        following = apply_vertex(g, current)
        path.extend(geodesic(current, following)[1:])
        current = following
    return path[: count + 1]


def axis_ray_prefix(g: AutWord, K: int) -> VertexAddress:
    verdict = _require_translation(g)
    current = verdict.axis_point
    while current.depth < K:
        current = apply_vertex(g, current)
    return current.prefix(K)


def repelling_ray_prefix(g: AutWord, K: int) -> VertexAddress:
    return axis_ray_prefix(invert(g), K)


# -------- Случайные слова --------
def random_portrait(tree: TreeConfig, depth: int, rng: random.Random) -> FinitaryPortrait:
    perms = {}
    for v in tree.vertices(depth - 1):
        images = list(range(tree.arity(v.depth)))
        rng.shuffle(images)
        perm = LocalPermutation(tuple(images))
        if not perm.is_identity:
            perms[v] = perm
    return FinitaryPortrait(tree, perms, max(depth, 1))


def random_word(tree: TreeConfig, length: int, portrait_depth: int, rng: random.Random) -> AutWord:
    word = []
    for _ in range(length):
        pick = rng.randrange(3)
        if pick == 0:
            word.append(random_portrait(tree, rng.randint(1, portrait_depth), rng))
        else:
            word.append(SIGMA if pick == 1 else SIGMA_INV)
    return AutWord(tree, tuple(word))
