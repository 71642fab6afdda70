from fractions import Fraction

import pytest

from src.floyd.automorphism import SIGMA, SIGMA_INV, EllipticVertex, FinitaryPortrait, Inversion, Translation
from src.floyd.errors import InvalidAddress, InvalidConfig, ParseError
from src.floyd.floyd_metric import (
    ExactRational,
    GeometricTail,
    Interval,
    PowerTail,
    SubGeometricTail,
    induced_assignment,
)
from src.floyd.formats import (
    format_classification,
    format_enclosure,
    format_report,
    load_floyd,
    parse_automorphism,
    parse_edge_lengths,
    parse_floyd,
    parse_point,
    serialize_automorphism,
    serialize_edge_lengths,
    serialize_floyd,
)
from src.floyd.lipschitz_analysis import RatioReport
from src.floyd.tree_core import EdgeInterior, EdgeRef
from src.utils.rationals import format_rational, parse_letters, parse_rational

GEOMETRIC = """\
# h(r) = 2^-r
n = 3
tail.kind = geometric
tail.a = 1
tail.q = 1/2
"""

AUTOMORPHISM = """\
sigma
portrait {
  perm - = 1,0,2
  perm 0 = 1,0
}
sigma_inv
"""


# -------- Рациональные числа --------
@pytest.mark.parametrize("text, value", [("3", Fraction(3)), ("-1/2", Fraction(-1, 2)), (" 4/6 ", Fraction(2, 3))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["", "0.5", "1/0", "1e3", "a/b", "1/-2"])
def test_parse_rational_rejects(text):
    with pytest.raises(ParseError):
        parse_rational(text)


def test_format_rational():
    assert format_rational(Fraction(6, 3)) == "2"
    assert format_rational(Fraction(-1, 4)) == "-1/4"


def test_parse_letters():
    assert parse_letters("-") == ()
    assert parse_letters("") == ()
    assert parse_letters("0, 1,2") == (0, 1, 2)
    with pytest.raises(ParseError):
        parse_letters("0;1")


# -------- Файлы функции Флойда --------
def test_parse_geometric_file():
    floyd = parse_floyd(GEOMETRIC)
    assert floyd.tree.n == 3
    assert floyd.h.prefix == ()
    assert floyd.h.tail == GeometricTail(Fraction(1), Fraction(1, 2))
    assert floyd.base == floyd.tree.root


def test_parse_other_tails():
    power = parse_floyd("n = 4\ntail.kind = power\ntail.s = 2\nprefix = 3, 1/2\n")
    assert power.h.tail == PowerTail(2)
    assert power.h.prefix == (3, Fraction(1, 2))
    sub = parse_floyd("n = 3\ntail.kind = subgeometric\ntail.a = 2\ntail.q = 1/3\nbase = 0,1\n")
    assert sub.h.tail == SubGeometricTail(Fraction(2), Fraction(1, 3))
    assert sub.base == sub.tree.vertex(0, 1)


@pytest.mark.parametrize(
    "text",
    [
        "tail.kind = geometric\ntail.a = 1\ntail.q = 1/2\n",
        "n = 3\ntail.a = 1\ntail.q = 1/2\n",
        "n = 3\ntail.kind = cubic\n",
        "n = 3\nn = 3\ntail.kind = power\ntail.s = 2\n",
        "n = 3\ntail.kind = power\ntail.s = 2\ntail.q = 1/2\n",
        "n = 3\ntail.kind = geometric\ntail.a = 1\n",
        "n = 3\ntail.kind = geometric\ntail.a = 1\ntail.q = 0.5\n",
        "n = three\ntail.kind = power\ntail.s = 2\n",
        "n = 3\nthis is not a pair\n",
    ],
)
def test_malformed_floyd_files(text):
    with pytest.raises(ParseError):
        parse_floyd(text)


def test_invalid_floyd_values():
    with pytest.raises(InvalidConfig):
        parse_floyd("n = 2\ntail.kind = power\ntail.s = 2\n")
    with pytest.raises(InvalidConfig):
        parse_floyd("n = 3\ntail.kind = geometric\ntail.a = 1\ntail.q = 2\n")
    with pytest.raises(InvalidAddress):
        parse_floyd("n = 3\ntail.kind = power\ntail.s = 2\nbase = 0,2\n")


@pytest.mark.parametrize(
    "text",
    [
        GEOMETRIC,
        "n = 4\nprefix = 3, 1/2\nbase = 1,0\ntail.kind = power\ntail.s = 3\n",
        "n = 3\ntail.kind = subgeometric\ntail.a = 2/3\ntail.q = 1/5\n",
    ],
)
def test_floyd_serialization_is_a_fixed_point(text):
    once = serialize_floyd(parse_floyd(text))
    assert serialize_floyd(parse_floyd(once)) == once
    assert parse_floyd(once) == parse_floyd(text)


def test_load_missing_file(tmp_path):
    with pytest.raises(ParseError):
        load_floyd(tmp_path / "absent.floyd")


def test_load_undecodable_file(tmp_path):
    path = tmp_path / "binary.floyd"
    path.write_bytes(b"\xff\xfe\x00n = 3")
    with pytest.raises(ParseError):
        load_floyd(path)


# -------- Файлы автоморфизмов --------
def test_parse_automorphism(t3):
    g = parse_automorphism(AUTOMORPHISM, t3)
    assert len(g) == 3
    assert g.word[0] is SIGMA and g.word[2] is SIGMA_INV
    portrait = g.word[1]
    assert isinstance(portrait, FinitaryPortrait)
    assert portrait.depth == 2
    assert portrait.perm_at(t3.root).images == (1, 0, 2)
    assert portrait.perm_at(t3.vertex(0)).images == (1, 0)


def test_empty_automorphism_file(t3):
    assert len(parse_automorphism("# nothing here\n\n", t3)) == 0
    assert serialize_automorphism(parse_automorphism("", t3)) == ""


def test_automorphism_serialization(t3):
    text = serialize_automorphism(parse_automorphism(AUTOMORPHISM, t3))
    assert text == AUTOMORPHISM
    messy = "  sigma  \nportrait {\nperm 0 = 1,0\n   perm - = 1, 0, 2\n}\nsigma_inv # back\n"
    assert serialize_automorphism(parse_automorphism(messy, t3)) == AUTOMORPHISM


@pytest.mark.parametrize(
    "text",
    [
        "sigmaa\n",
        "portrait {\n  perm - = 1,0,2\n",
        "portrait {\n  swap - = 1,0,2\n}\n",
        "portrait {\n  perm - = 1,0,2\n  perm - = 0,1,2\n}\n",
        "}\n",
    ],
)
def test_malformed_automorphism_files(t3, text):
    with pytest.raises(ParseError):
        parse_automorphism(text, t3)


def test_invalid_portraits(t3):
    with pytest.raises(InvalidConfig):
        parse_automorphism("portrait {\n  perm - = 1,1,2\n}\n", t3)
    with pytest.raises(InvalidConfig):
        parse_automorphism("portrait {\n  perm 0 = 1,0,2\n}\n", t3)
    with pytest.raises(InvalidAddress):
        parse_automorphism("portrait {\n  perm 3 = 1,0\n}\n", t3)


# -------- Файлы длин рёбер --------
def test_edge_length_file(t3, geo_half):
    text = "n = 3\ndepth = 2\nedge 0 = 1\nedge 1 = 1\nedge 2 = 1\n" + "".join(
        f"edge {a},{b} = 1/2\n" for a in range(3) for b in range(2)
    )
    assignment = parse_edge_lengths(text)
    assert assignment == induced_assignment(t3, geo_half, 2)
    once = serialize_edge_lengths(assignment)
    assert parse_edge_lengths(once) == assignment
    assert serialize_edge_lengths(parse_edge_lengths(once)) == once
    assert once.splitlines()[:3] == ["n = 3", "depth = 2", "edge 0 = 1"]


@pytest.mark.parametrize(
    "text",
    [
        "depth = 1\nedge 0 = 1\n",
        "n = 3\nedge 0 = 1\n",
        "n = 3\ndepth = 1\nedge 0 = 1\nedge 0 = 1\n",
        "n = 3\ndepth = 1\nwidth = 2\n",
        "n = 3\ndepth = 1\nedge 0 = x\n",
    ],
)
def test_malformed_edge_files(text):
    with pytest.raises(ParseError):
        parse_edge_lengths(text)


def test_edge_file_must_cover_every_edge():
    with pytest.raises(InvalidConfig):
        parse_edge_lengths("n = 3\ndepth = 1\nedge 0 = 1\n")
    with pytest.raises(InvalidConfig):
        parse_edge_lengths("n = 3\ndepth = 2\nedge 0 = 1\nedge 1 = 1\nedge 2 = 1\n")


# -------- Точки и вывод --------
def test_parse_point(t3):
    assert parse_point("v:", t3) == t3.root
    assert parse_point("v:0,1", t3) == t3.vertex(0, 1)
    assert parse_point("b:;0", t3) == t3.boundary((), (0,))
    assert parse_point("b:0,1;1,1", t3) == t3.boundary((0,), (1,))
    assert parse_point("e:0,1@1/3", t3) == EdgeInterior(EdgeRef(t3.vertex(0, 1)), Fraction(1, 3))


@pytest.mark.parametrize("text", ["x:0", "v0", "b:0", "b:0;", "e:@1/2", "e:0@0.5", ""])
def test_parse_point_rejects(t3, text):
    with pytest.raises(ParseError):
        parse_point(text, t3)


@pytest.mark.parametrize("text", ["v:3", "v:0,2", "b:;2", "e:0@2"])
def test_parse_point_invalid_address(t3, text):
    with pytest.raises(InvalidAddress):
        parse_point(text, t3)


def test_point_text_round_trip(t3):
    for point in list(t3.vertices(2)) + t3.boundary_points(1, 2):
        assert parse_point(str(point), t3) == point


def test_format_enclosure():
    assert format_enclosure(ExactRational(Fraction(4))) == "exact 4"
    assert format_enclosure(Interval(Fraction(1, 2), Fraction(3, 4))) == "interval [1/2, 3/4]"


def test_format_classification(t3):
    assert format_classification(Translation(1, t3.root, 0)) == "translation T=1 axis=v: d0=0"
    assert format_classification(EllipticVertex(t3.root)) == "elliptic fixed=v:"
    assert format_classification(Inversion(EdgeRef(t3.vertex(1)))) == "inversion edge=v:1"


def test_format_report(t3):
    zero = t3.boundary((), (0,))
    report = RatioReport(
        ExactRational(Fraction(2)),
        Interval(Fraction(1, 3), Fraction(1, 2)),
        (t3.root, t3.vertex(0)),
        (t3.vertex(1), zero),
    )
    assert format_report(report) == [
        "sup = 2 @ (v:, v:0)",
        "inf = [1/3, 1/2] @ (v:1, b:;0)",
    ]
