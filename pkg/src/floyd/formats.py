import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from src.floyd.automorphism import (
    AutWord,
    Classification,
    EllipticVertex,
    FinitaryPortrait,
    Inversion,
    LocalPermutation,
    Shift,
)
from src.floyd.errors import ParseError
from src.floyd.floyd_metric import (
    EdgeLengthAssignment,
    Enclosure,
    FloydFunction,
    GeometricTail,
    MetricSpec,
    PowerTail,
    SubGeometricTail,
)
from src.floyd.lipschitz_analysis import RatioReport
from src.floyd.tree_core import (
    BoundaryAddress,
    EdgeInterior,
    EdgeRef,
    Point,
    TreeConfig,
    VertexAddress,
)
from src.utils.rationals import format_letters, format_rational, parse_letters, parse_rational

_KEY_VALUE_RE = re.compile(r"^([A-Za-z_.]+)\s*=\s*(.*)$")
_PERM_RE = re.compile(r"^perm\s+(\S+)\s*=\s*(.+)$")
_EDGE_RE = re.compile(r"^edge\s+(\S+)\s*=\s*(.+)$")
_VERTEX_RE = re.compile(r"^v:([\d,]*)$")
_BOUNDARY_RE = re.compile(r"^b:([\d,]*);([\d,]+)$")
_EDGE_POINT_RE = re.compile(r"^e:([\d,]+)@(\S+)$")

_TAIL_KEYS = {
    "geometric": ("tail.a", "tail.q"),
    "power": ("tail.s",),
    "subgeometric": ("tail.a", "tail.q"),
}


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ParseError(f"File not found: {path}")
    except (OSError, UnicodeDecodeError) as error:
        raise ParseError(f"Cannot read {path}: {error}")


def _content_lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def _key_values(text: str) -> dict[str, tuple[int, str]]:
    values: dict[str, tuple[int, str]] = {}
    for number, line in _content_lines(text):
        match = _KEY_VALUE_RE.match(line)
        if not match:
            raise ParseError(f"Line {number}: expected `key = value`", details={"line": line})
        key, value = match.group(1), match.group(2).strip()
        if key in values:
            raise ParseError(f"Line {number}: duplicate key {key!r}")
        values[key] = (number, value)
    return values


def _parse_int(value: str, key: str) -> int:
    if not re.fullmatch(r"[+-]?\d+", value):
        raise ParseError(f"{key} must be an integer, got {value!r}")
    return int(value)


# -------- Файлы функции Флойда --------
@dataclass(frozen=True, slots=True)
class FloydFile:
    tree: TreeConfig
    h: FloydFunction
    base: VertexAddress

    @property
    def spec(self) -> MetricSpec:
        return MetricSpec(self.tree, self.h, self.base)


def parse_floyd(text: str) -> FloydFile:
    values = _key_values(text)
    if "n" not in values:
        raise ParseError("Missing key `n`")
    if "tail.kind" not in values:
        raise ParseError("Missing key `tail.kind`")
    kind = values["tail.kind"][1]
    if kind not in _TAIL_KEYS:
        raise ParseError(f"Unknown tail.kind {kind!r}", details={"allowed": sorted(_TAIL_KEYS)})
    allowed = {"n", "prefix", "base", "tail.kind", *_TAIL_KEYS[kind]}
    unknown = sorted(set(values) - allowed)
    if unknown:
        raise ParseError(f"Unknown keys for tail.kind = {kind}: {', '.join(unknown)}")
    missing = [key for key in _TAIL_KEYS[kind] if key not in values]
    if missing:
        raise ParseError(f"Missing keys: {', '.join(missing)}")

    tree = TreeConfig(_parse_int(values["n"][1], "n"))
    prefix_text = values.get("prefix", (0, ""))[1]
    prefix = tuple(parse_rational(part) for part in prefix_text.split(",")) if prefix_text else ()
    if kind == "power":
        tail = PowerTail(parse_rational(values["tail.s"][1]))
    else:
        a = parse_rational(values["tail.a"][1])
        q = parse_rational(values["tail.q"][1])
        tail = GeometricTail(a, q) if kind == "geometric" else SubGeometricTail(a, q)
    base = VertexAddress(parse_letters(values.get("base", (0, "-"))[1]), tree.n)
    return FloydFile(tree, FloydFunction(prefix, tail), base)


def serialize_floyd(floyd: FloydFile) -> str:
    lines = [f"n = {floyd.tree.n}"]
    if floyd.h.prefix:
        lines.append("prefix = " + ", ".join(format_rational(value) for value in floyd.h.prefix))
    if not floyd.base.is_root:
        lines.append(f"base = {format_letters(floyd.base.letters)}")
    tail = floyd.h.tail
    lines.append(f"tail.kind = {tail.kind}")
    if isinstance(tail, PowerTail):
        lines.append(f"tail.s = {tail.s}")
    else:
        lines.append(f"tail.a = {format_rational(tail.a)}")
        lines.append(f"tail.q = {format_rational(tail.q)}")
    return "\n".join(lines) + "\n"


def load_floyd(path: str | Path) -> FloydFile:
    return parse_floyd(read_text(path))


# -------- Файлы автоморфизмов --------
def _parse_address(text: str, tree: TreeConfig) -> VertexAddress:
    return VertexAddress(parse_letters(text), tree.n)


def parse_automorphism(text: str, tree: TreeConfig) -> AutWord:
    word = []
    block: dict[VertexAddress, LocalPermutation] | None = None
    block_start = 0
    for number, line in _content_lines(text):
        if block is not None:
            if line == "}":
                depth = max((address.depth for address in block), default=0) + 1
                word.append(FinitaryPortrait(tree, block, depth))
                block = None
                continue
            match = _PERM_RE.match(line)
            if not match:
                raise ParseError(f"Line {number}: expected `perm <address> = <images>` or `}}`")
            address = _parse_address(match.group(1), tree)
            if address in block:
                raise ParseError(f"Line {number}: duplicate permutation at {address}")
            block[address] = LocalPermutation(parse_letters(match.group(2)))
            continue
        if line == "portrait {":
            block = {}
            block_start = number
        elif line in (Shift.SIGMA.value, Shift.SIGMA_INV.value):
            word.append(Shift(line))
        else:
            raise ParseError(f"Line {number}: unknown token {line!r}")
    if block is not None:
        raise ParseError(f"Line {block_start}: portrait block is not closed")
    return AutWord(tree, tuple(word))


def serialize_automorphism(g: AutWord) -> str:
    lines = []
    for generator in g.word:
        if isinstance(generator, Shift):
            lines.append(generator.value)
            continue
        lines.append("portrait {")
        for address in sorted(generator.perms, key=lambda v: (v.depth, v.letters)):
            images = format_letters(generator.perms[address].images)
            where = format_letters(address.letters) or "-"
            lines.append(f"  perm {where} = {images}")
        lines.append("}")
    return "\n".join(lines) + ("\n" if lines else "")


def load_automorphism(path: str | Path, tree: TreeConfig) -> AutWord:
    return parse_automorphism(read_text(path), tree)


# -------- Файлы длин рёбер --------
def parse_edge_lengths(text: str) -> EdgeLengthAssignment:
    header: dict[str, str] = {}
    lengths: dict[EdgeRef, Fraction] = {}
    pending = []
    for number, line in _content_lines(text):
        edge_match = _EDGE_RE.match(line)
        if edge_match:
            pending.append((number, edge_match.group(1), edge_match.group(2)))
            continue
        match = _KEY_VALUE_RE.match(line)
        if not match or match.group(1) not in ("n", "depth"):
            raise ParseError(f"Line {number}: expected `n = …`, `depth = …` or `edge <address> = p/q`")
        if match.group(1) in header:
            raise ParseError(f"Line {number}: duplicate key {match.group(1)!r}")
        header[match.group(1)] = match.group(2).strip()
    for key in ("n", "depth"):
        if key not in header:
            raise ParseError(f"Missing key `{key}`")
    tree = TreeConfig(_parse_int(header["n"], "n"))
    for number, address, value in pending:
        edge = EdgeRef(_parse_address(address, tree))
        if edge in lengths:
            raise ParseError(f"Line {number}: duplicate edge {edge}")
        lengths[edge] = parse_rational(value)
    return EdgeLengthAssignment(tree, _parse_int(header["depth"], "depth"), lengths)


def serialize_edge_lengths(assignment: EdgeLengthAssignment) -> str:
    lines = [f"n = {assignment.tree.n}", f"depth = {assignment.depth_limit}"]
    for edge in sorted(assignment.explicit, key=lambda e: (e.child.depth, e.child.letters)):
        lines.append(f"edge {format_letters(edge.child.letters)} = {format_rational(assignment.explicit[edge])}")
    return "\n".join(lines) + "\n"


# -------- Точки и вывод --------
def parse_point(text: str, tree: TreeConfig) -> Point:
    text = (text or "").strip()
    match = _VERTEX_RE.match(text)
    if match:
        return VertexAddress(parse_letters(match.group(1)), tree.n)
    match = _BOUNDARY_RE.match(text)
    if match:
        return BoundaryAddress(parse_letters(match.group(1)), parse_letters(match.group(2)), tree.n)
    match = _EDGE_POINT_RE.match(text)
    if match:
        child = VertexAddress(parse_letters(match.group(1)), tree.n)
        return EdgeInterior(EdgeRef(child), parse_rational(match.group(2)))
    raise ParseError(f"Not a point: {text!r}", details={"syntax": "v:0,1 | b:pre;per | e:0,1@p/q"})


def format_value(value: Enclosure) -> str:
    if value.is_exact:
        return format_rational(value.lo)
    return f"[{format_rational(value.lo)}, {format_rational(value.hi)}]"


def format_enclosure(value: Enclosure) -> str:
    if value.is_exact:
        return f"exact {format_rational(value.lo)}"
    return f"interval [{format_rational(value.lo)}, {format_rational(value.hi)}]"


def format_classification(verdict: Classification) -> str:
    if isinstance(verdict, EllipticVertex):
        return f"elliptic fixed={verdict.fixed}"
    if isinstance(verdict, Inversion):
        return f"inversion edge={verdict.edge}"
    return f"translation T={verdict.T} axis={verdict.axis_point} d0={verdict.d0}"


def format_report(report: RatioReport) -> list[str]:
    def witness(pair) -> str:
        return "(" + ", ".join(str(point) for point in pair) + ")"

    return [
        f"sup = {format_value(report.sup_ratio)} @ {witness(report.sup_witness)}",
        f"inf = {format_value(report.inf_ratio)} @ {witness(report.inf_witness)}",
    ]

