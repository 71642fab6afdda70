from functools import wraps
from pathlib import Path
from typing import Callable, List, Optional

import typer

from src.floyd.automorphism import (
    axis_ray_prefix,
    classify,
    identity,
    repelling_ray_prefix,
    translation_length,
)
from src.floyd.errors import FloydError, InvalidConfig
from src.floyd.floyd_metric import (
    comparability,
    depth_spread,
    eta_inf,
    floyd_distance,
    is_lipschitz_compactification,
    reconstruct_floyd,
    resolve_tol,
)
from src.floyd.formats import (
    format_classification,
    format_enclosure,
    format_report,
    load_automorphism,
    load_floyd,
    parse_edge_lengths,
    parse_point,
    read_text,
)
from src.floyd.lipschitz_analysis import (
    SampleSpec,
    empirical_bilipschitz,
    identity_map_bilipschitz,
    sufficiency_check,
)
from src.floyd.svg import write_ball
from src.utils.logger import Logger
from src.utils.rationals import format_rational, parse_rational

app = typer.Typer(help="Floyd metrics on regular trees: distances, automorphisms, Lipschitz checks.")

logger = Logger("cli")

TreeOption = typer.Option(..., "--tree", help="Floyd function file")
AutOption = typer.Option(..., "--aut", help="Automorphism file")
TolOption = typer.Option(None, "--tol", help="Tolerance p/q for interval results")


def _command(name: str) -> Callable:
    # тело команды возвращает строки вывода; печать только после успеха
    def decorator(body: Callable) -> Callable:
        @wraps(body)
        def run(*args, **kwargs):
            logger.ensure_log_dir()
            try:
                lines = body(*args, **kwargs)
            except FloydError as error:
                logger.write(f"[ERROR] {name}: {error.code} {error.message}")
                typer.echo(f"error: {error.message}", err=True)
                raise typer.Exit(code=error.exit_code)
            logger.write(f"[{name.upper()}] ok")
            typer.echo("\n".join(lines))

        return app.command(name)(run)

    return decorator


def _tol(value: Optional[str]):
    return resolve_tol(parse_rational(value) if value is not None else None)


@_command("dist")
def dist(
    p: str = typer.Argument(..., help="Point: v:<letters> | b:<pre>;<per> | e:<letters>@p/q"),
    q: str = typer.Argument(..., help="Second point"),
    tree: Path = TreeOption,
    tol: Optional[str] = TolOption,
) -> list[str]:
    floyd = load_floyd(tree)
    P = parse_point(p, floyd.tree)
    Q = parse_point(q, floyd.tree)
    return [format_enclosure(floyd_distance(floyd.spec, P, Q, _tol(tol)))]


@_command("classify")
def classify_cmd(tree: Path = TreeOption, aut: Path = AutOption) -> list[str]:
    floyd = load_floyd(tree)
    g = load_automorphism(aut, floyd.tree)
    return [format_classification(classify(g))]


@_command("tlen")
def tlen(tree: Path = TreeOption, aut: Path = AutOption) -> list[str]:
    floyd = load_floyd(tree)
    return [f"T = {translation_length(load_automorphism(aut, floyd.tree))}"]


@_command("axis")
def axis(
    tree: Path = TreeOption,
    aut: Path = AutOption,
    depth: int = typer.Option(4, "--depth", min=0, help="Prefix depth K"),
) -> list[str]:
    floyd = load_floyd(tree)
    g = load_automorphism(aut, floyd.tree)
    return [
        f"axis = {axis_ray_prefix(g, depth)}",
        f"repelling = {repelling_ray_prefix(g, depth)}",
    ]


@_command("check")
def check(
    tree: Path = TreeOption,
    aut: Optional[Path] = typer.Option(None, "--aut", help="Unitary translation to test"),
    depth: int = typer.Option(8, "--depth", min=0, help="Ball depth for the edge scan"),
) -> list[str]:
    floyd = load_floyd(tree)
    report = eta_inf(floyd.h)
    lines = [
        f"eta* = {format_rational(report.eta_star)}",
        f"witness = {report.witness}",
        f"lipschitz = {'yes' if is_lipschitz_compactification(floyd.h) else 'no'}",
    ]
    if aut is not None:
        result = sufficiency_check(load_automorphism(aut, floyd.tree), floyd.h, depth)
        factor = "none" if result.factor is None else format_rational(result.factor)
        lines += [
            f"d0 = {result.d0}",
            f"depth change = {result.depth_change}",
            f"factor = {factor}",
            f"edge sup = {format_rational(result.edge_sup)}",
            f"inverse edge sup = {format_rational(result.inverse_edge_sup)}",
            f"bounds hold = {'yes' if result.holds else 'no'}",
        ]
    return lines


@_command("compare")
def compare(tree: List[Path] = typer.Option(..., "--tree", help="Two Floyd function files")) -> list[str]:
    if len(tree) != 2:
        raise InvalidConfig(f"compare needs --tree exactly twice, got {len(tree)}")
    first, second = (load_floyd(path) for path in tree)
    result = comparability(first.h, second.h)
    if result is None:
        return ["not comparable"]
    return [f"comparable C = {format_rational(result.constant)}"]


@_command("estimate")
def estimate(
    tree: List[Path] = typer.Option(..., "--tree", help="Floyd function file; repeat for the identity map"),
    aut: Optional[Path] = typer.Option(None, "--aut", help="Automorphism file"),
    depth: int = typer.Option(4, "--depth", min=0, help="Sampled vertex depth"),
    pre: int = typer.Option(0, "--pre", min=0, help="Max boundary preperiod"),
    per: int = typer.Option(0, "--per", min=0, help="Max boundary period"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed for extra random vertices"),
    extra: int = typer.Option(0, "--extra", min=0, help="Number of extra random vertices"),
    tol: Optional[str] = TolOption,
) -> list[str]:
    sample = SampleSpec(depth, pre, per, seed, extra)
    specs = [load_floyd(path).spec for path in tree]
    if aut is not None:
        if len(specs) != 1:
            raise InvalidConfig("estimate with --aut takes a single --tree")
        report = empirical_bilipschitz(load_automorphism(aut, specs[0].tree), specs[0], sample, _tol(tol))
    elif len(specs) == 2:
        report = identity_map_bilipschitz(specs[0], specs[1], sample, _tol(tol))
    elif len(specs) == 1:
        report = empirical_bilipschitz(identity(specs[0].tree), specs[0], sample, _tol(tol))
    else:
        raise InvalidConfig(f"estimate takes one or two --tree files, got {len(specs)}")
    return format_report(report)


@_command("reconstruct")
def reconstruct(tree: Path = typer.Option(..., "--tree", help="Edge-length file")) -> list[str]:
    assignment = parse_edge_lengths(read_text(tree))
    table = reconstruct_floyd(assignment)
    spread = depth_spread(assignment)
    return [
        "h = " + ", ".join(format_rational(value) for value in table),
        "spread = " + ", ".join(format_rational(value) for value in spread),
    ]


@_command("ball-svg")
def ball_svg(
    tree: Path = TreeOption,
    depth: int = typer.Option(..., "--depth", help="Ball depth K"),
    out: Path = typer.Option(..., "--out", help="SVG output path"),
    tol: Optional[str] = TolOption,
) -> list[str]:
    floyd = load_floyd(tree)
    count = write_ball(floyd.spec, depth, out, _tol(tol))
    return [f"wrote {out} ({count} vertices)"]


def main():
    app()
