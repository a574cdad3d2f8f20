"""Command-line front door. Graphs are named by shorthand (hn:<n>, k<n>,
path:<file>) and formulas inline or @file; every sampled mode requires an
explicit seed so runs are bit-reproducible."""

from __future__ import annotations

import json
import os
import sys
from fractions import Fraction

import click

from . import convergence, efgame, evaluate, strategy
from .evaluate import pairing_to_json
from .formula import (
    FormulaError,
    FormulaFamily,
    build_threshold_formula,
    family_from_lines,
    format_formula,
    free_variables,
    parse_formula,
    quantifier_depth,
    root_indices,
    threshold_bounds,
)
from .graph import (
    CapExceeded,
    Graph,
    GraphError,
    generate_hn,
    complete_graph,
    graph_to_text,
    is_universal,
    load_graph,
    restricted_matrix,
    shadow,
)

DOMAIN_ERRORS = (
    FormulaError,
    GraphError,
    evaluate.PairingError,
    evaluate.EvalError,
    efgame.GameError,
    convergence.ConvergenceError,
    OSError,
)


def budget_override(default: int) -> int:
    env = os.environ.get("FOLIM_BUDGET")
    return int(env) if env else default


def parse_graph_spec(spec: str) -> Graph:
    if spec.startswith("hn:"):
        return generate_hn(int(spec[3:]))
    if spec.startswith("path:"):
        return load_graph(spec[5:])
    if spec.startswith("k") and spec[1:].isdigit():
        return complete_graph(int(spec[1:]))
    if os.path.exists(spec):
        return load_graph(spec)
    raise GraphError(f"unknown graph spec {spec!r}")


def parse_formula_spec(spec: str):
    if spec.startswith("@"):
        with open(spec[1:]) as fh:
            return parse_formula(fh.read().strip())
    return parse_formula(spec)


def parse_family_spec(specs) -> FormulaFamily:
    lines = []
    for spec in specs:
        if spec.startswith("@"):
            with open(spec[1:]) as fh:
                lines.extend(fh.read().splitlines())
        else:
            lines.append(spec)
    return family_from_lines(lines)


def emit(data, fmt: str, text_fn=None):
    if fmt == "json":
        click.echo(json.dumps(data))
    else:
        click.echo(text_fn(data) if text_fn else data)


class Cli(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.exceptions.Exit:
            raise
        except click.UsageError:
            raise
        except CapExceeded as exc:
            click.echo(json.dumps({"error": "cap", "reason": str(exc)}), err=True)
            sys.exit(1)
        except DOMAIN_ERRORS as exc:
            click.echo(
                json.dumps({"error": type(exc).__name__, "reason": str(exc)}),
                err=True,
            )
            sys.exit(1)


@click.group(cls=Cli)
def main():
    """First-order convergence laboratory."""


fmt_opt = click.option(
    "--format", "fmt", type=click.Choice(["json", "text", "csv"]), default="text"
)


@main.command("parse")
@click.option("--formula", "formula_spec", required=True)
@fmt_opt
def cmd_parse(formula_spec, fmt):
    f = parse_formula_spec(formula_spec)
    data = {
        "formula": format_formula(f),
        "depth": quantifier_depth(f),
        "free_variables": sorted(free_variables(f)),
        "roots": sorted(root_indices(f)),
    }
    emit(data, fmt, lambda d: d["formula"])


@main.command("eval")
@click.option("--graph", "graph_spec", required=True)
@click.option("--formula", "formula_spec", required=True)
@click.option("--assign", default="", help="e.g. x1=3,x2=0")
@click.option("--roots", default="", help="comma-separated root vertices")
@fmt_opt
def cmd_eval(graph_spec, formula_spec, assign, roots, fmt):
    g = parse_graph_spec(graph_spec)
    if roots:
        g = g.with_roots([int(x) for x in roots.split(",")])
    f = parse_formula_spec(formula_spec)
    asg = {}
    for part in filter(None, assign.split(",")):
        name, _, value = part.partition("=")
        asg[int(name.strip().lstrip("x"))] = int(value)
    value = evaluate.satisfies(g, f, asg)
    emit({"value": value}, fmt, lambda d: str(d["value"]).lower())


@main.command("stone")
@click.option("--graph", "graph_spec", required=True)
@click.option("--formula", "formula_spec", required=True)
@click.option("--roots", default="")
@click.option("--mc", is_flag=True)
@click.option("--samples", type=int, default=10000)
@click.option("--seed", type=int, default=None)
@click.option("--confidence", type=float, default=0.99)
@click.option("--distinct", is_flag=True, help="tuples without repetition")
@fmt_opt
def cmd_stone(graph_spec, formula_spec, roots, mc, samples, seed, confidence, distinct, fmt):
    g = parse_graph_spec(graph_spec)
    if roots:
        g = g.with_roots([int(x) for x in roots.split(",")])
    f = parse_formula_spec(formula_spec)
    if mc:
        if seed is None:
            raise click.UsageError("--seed is required with --mc")
        est = evaluate.stone_pairing_mc(g, f, samples, seed, confidence, distinct)
        emit(
            pairing_to_json(est),
            fmt,
            lambda d: f"{d['value']} +/- {d['radius']:.6f}",
        )
    else:
        value = evaluate.stone_pairing_exact(
            g, f, budget=budget_override(evaluate.EXACT_BUDGET), distinct=distinct
        )
        emit(
            pairing_to_json(value),
            fmt,
            lambda d: d["value"],
        )


@main.command("threshold")
@click.option("--graph", "graph_spec", default=None)
@click.option("--formula", "formula_spec", required=True)
@click.option("--n", "group_size", type=int, required=True)
@click.option("--a", type=str, required=True)
@click.option("--b", type=str, required=True)
@click.option("--mode", type=click.Choice(["mc", "build", "bounds"]), default="mc")
@click.option("--groups", type=int, default=1000)
@click.option("--seed", type=int, default=None)
@fmt_opt
def cmd_threshold(graph_spec, formula_spec, group_size, a, b, mode, groups, seed, fmt):
    """Count-threshold formula: sampled pairing, explicit construction,
    or just the clamped index range."""
    f = parse_formula_spec(formula_spec)
    a, b = Fraction(a), Fraction(b)
    if mode == "bounds":
        lo, hi = threshold_bounds(group_size, a, b)
        emit({"lo": lo, "hi": hi}, fmt, lambda d: f"{d['lo']}..{d['hi']}")
        return
    if mode == "build":
        built = build_threshold_formula(
            f, group_size, a, b, cap=budget_override(10**6)
        )
        emit({"formula": format_formula(built)}, fmt, lambda d: d["formula"])
        return
    if seed is None:
        raise click.UsageError("--seed is required in mc mode")
    if graph_spec is None:
        raise click.UsageError("--graph is required in mc mode")
    g = parse_graph_spec(graph_spec)
    est = evaluate.stone_threshold_mc(g, f, group_size, a, b, groups, seed)
    emit(
        pairing_to_json(est), fmt, lambda d: f"{d['value']} +/- {d['radius']:.6f}"
    )


@main.group("gen")
def gen():
    """Graph generators."""


@gen.command("hn")
@click.option("--n", type=int, required=True)
@fmt_opt
def cmd_gen_hn(n, fmt):
    g = generate_hn(n, cap=budget_override(20))
    if fmt == "json":
        click.echo(json.dumps(g.to_json()))
    else:
        click.echo(graph_to_text(g), nl=False)


@main.command("universal")
@click.option("--graph", "graph_spec", required=True)
@click.option("--l", "mult", type=int, required=True)
@fmt_opt
def cmd_universal(graph_spec, mult, fmt):
    g = parse_graph_spec(graph_spec)
    value = is_universal(g, mult)
    emit({"universal": value, "l": mult}, fmt, lambda d: str(d["universal"]).lower())


@main.command("shadow")
@click.option("--graph", "graph_spec", required=True)
@click.option("--vertices", default="")
@click.option("--l", "mult", type=int, required=True)
@fmt_opt
def cmd_shadow(graph_spec, vertices, mult, fmt):
    g = parse_graph_spec(graph_spec)
    w = [int(x) for x in vertices.split(",")] if vertices else []
    s = shadow(g, w, mult)
    emit(
        s.to_json(),
        fmt,
        lambda d: "\n".join(
            f"{v['pattern'] or '(null)'} x{v['multiplicity']}" for v in d["vectors"]
        )
        or "(empty)",
    )


@main.command("matrix")
@click.option("--graph", "graph_spec", required=True)
@click.option("--vertices", default="")
@fmt_opt
def cmd_matrix(graph_spec, vertices, fmt):
    g = parse_graph_spec(graph_spec)
    w = [int(x) for x in vertices.split(",")] if vertices else []
    m = restricted_matrix(g, w)
    emit(
        m.to_json(),
        fmt,
        lambda d: "\n".join("".join(map(str, row)) for row in d["entries"]) or "(0x0)",
    )


@main.group("ef")
def ef():
    """Ehrenfeucht-Fraisse games."""


@ef.command("solve")
@click.option("--left", "left_spec", required=True)
@click.option("--right", "right_spec", required=True)
@click.option("--rounds", type=int, required=True)
@click.option("--pairs", default="", help="pre-played pairs v:w,...")
@fmt_opt
def cmd_ef_solve(left_spec, right_spec, rounds, pairs, fmt):
    gl = parse_graph_spec(left_spec)
    gr = parse_graph_spec(right_spec)
    played = []
    for part in filter(None, pairs.split(",")):
        v, _, w = part.partition(":")
        played.append((int(v), int(w)))
    winner = efgame.solve(
        gl, gr, played, rounds, size_cap=budget_override(efgame.SOLVER_SIZE_CAP)
    )
    emit({"winner": winner}, fmt, lambda d: d["winner"])


def _human_spoiler(pos: efgame.Position, rng):
    click.echo(
        f"round with {pos.rounds_left} left; pairs so far: {list(pos.pairs)}"
    )
    side = click.prompt("side", type=click.Choice(["left", "right"]))
    g = pos.left if side == "left" else pos.right
    v = click.prompt(f"vertex (0..{g.n - 1})", type=int)
    return side, v


def _make_agents(gl, gr, rounds, spoiler_kind, duplicator_kind):
    spoilers = {
        "human": _human_spoiler,
        "random": efgame.random_spoiler,
        "minimax": efgame.minimax_spoiler,
    }
    if duplicator_kind == "lmkey":
        dup = strategy.as_agent(init_lmkey(gl, gr, rounds))
    else:
        dups = {
            "random": efgame.random_duplicator,
            "mirror": efgame.mirror_duplicator,
            "minimax": efgame.minimax_duplicator,
        }
        dup = dups[duplicator_kind]
    return spoilers[spoiler_kind], dup


def init_lmkey(gl, gr, rounds):
    return strategy.init_state(gl, gr, [], [], rounds)


@ef.command("play")
@click.option("--left", "left_spec", required=True)
@click.option("--right", "right_spec", required=True)
@click.option("--rounds", type=int, required=True)
@click.option(
    "--spoiler",
    type=click.Choice(["human", "random", "minimax"]),
    default="human",
)
@click.option(
    "--duplicator",
    type=click.Choice(["random", "mirror", "minimax", "lmkey"]),
    default="minimax",
)
@click.option("--seed", type=int, default=None)
@fmt_opt
def cmd_ef_play(left_spec, right_spec, rounds, spoiler, duplicator, seed, fmt):
    gl = parse_graph_spec(left_spec)
    gr = parse_graph_spec(right_spec)
    if seed is None:
        if spoiler == "random" or duplicator == "random":
            raise click.UsageError("--seed is required with random agents")
        seed = 0
    sp, dup = _make_agents(gl, gr, rounds, spoiler, duplicator)
    result = efgame.play(gl, gr, [], [], rounds, sp, dup, seed=seed)
    emit(
        result.to_json(),
        fmt,
        lambda d: "\n".join(
            [f"winner: {d['winner']}"]
            + [
                f"  round {m['round']}: spoiler {m['side']} {m['vertex']}"
                f" -> {m['response']}"
                for m in d["transcript"]
            ]
        ),
    )


@main.command("converge")
@click.option("--formula", "formula_specs", multiple=True, required=True)
@click.option("--from", "n_lo", type=int, required=True)
@click.option("--to", "n_hi", type=int, required=True)
@click.option("--mode", type=click.Choice(["exact", "mc"]), default="exact")
@click.option("--samples", type=int, default=10000)
@click.option("--seed", type=int, default=None)
@click.option("--tol", type=float, default=0.02)
@fmt_opt
def cmd_converge(formula_specs, n_lo, n_hi, mode, samples, seed, tol, fmt):
    family = parse_family_spec(formula_specs)
    if mode == "mc" and seed is None:
        raise click.UsageError("--seed is required in mc mode")
    t = convergence.trajectory(
        family,
        convergence.hn_sequence(n_lo, n_hi),
        mode=mode,
        samples=samples,
        seed=seed or 0,
        budget=budget_override(evaluate.EXACT_BUDGET),
    )
    limits = convergence.estimate_limit(t, tol) if len(t.points) >= 3 else None
    if fmt == "csv":
        click.echo(t.to_csv(), nl=False)
        return
    data = {
        "points": [
            {
                "n": pt.label,
                "values": [t.value(pt, i) for i in range(len(family))],
            }
            for pt in t.points
        ],
        "limits": limits,
    }
    emit(
        data,
        fmt,
        lambda d: "\n".join(
            [f"n={p['n']}: " + ", ".join(f"{v:.6f}" for v in p["values"]) for p in d["points"]]
            + [f"limit proxy: {d['limits']}"]
        ),
    )


@main.command("roots")
@click.option("--graph", "graph_spec", required=True)
@click.option("--formula", "formula_specs", multiple=True, required=True)
@click.option("--targets", required=True, help="comma-separated values")
@click.option("--m", "m", type=int, required=True)
@click.option("--budget", type=int, default=10**6)
@click.option("--seed", type=int, default=0)
@fmt_opt
def cmd_roots(graph_spec, formula_specs, targets, m, budget, seed, fmt):
    g = parse_graph_spec(graph_spec)
    family = parse_family_spec(formula_specs)
    target_values = [Fraction(x) for x in targets.split(",")]
    result = convergence.find_roots(
        g, family, target_values, m, budget=budget_override(budget), seed=seed
    )
    emit(
        result.to_json(),
        fmt,
        lambda d: f"roots {d['roots']} delta {d['delta']:.9f} ({d['mode']})",
    )


@main.command("shadowprob")
@click.option("--n", type=int, required=True)
@click.option("--p", type=int, required=True)
@click.option("--l", "mult", type=int, required=True)
@click.option("--mode", type=click.Choice(["exact", "mc"]), default="exact")
@click.option("--samples", type=int, default=10**5)
@click.option("--seed", type=int, default=None)
@fmt_opt
def cmd_shadowprob(n, p, mult, mode, samples, seed, fmt):
    if mode == "mc" and seed is None:
        raise click.UsageError("--seed is required in mc mode")
    value = convergence.tuple_shadow_probability(
        n,
        p,
        mult,
        mode=mode,
        budget=budget_override(10**6),
        samples=samples,
        seed=seed or 0,
    )
    if isinstance(value, Fraction):
        emit(
            {"value": f"{value.numerator}/{value.denominator}", "exact": True},
            fmt,
            lambda d: d["value"],
        )
    else:
        emit(
            pairing_to_json(value),
            fmt,
            lambda d: f"{d['value']} +/- {d['radius']:.6f}",
        )


@main.command("counterexample")
@click.option("--from", "n_lo", type=int, default=2)
@click.option("--to", "n_hi", type=int, default=10)
@fmt_opt
def cmd_counterexample(n_lo, n_hi, fmt):
    report = convergence.counterexample_report(n_lo, n_hi)
    if fmt == "json":
        click.echo(json.dumps(report.to_json()))
    else:
        click.echo(report.to_text(), nl=False)


@main.command("serve")
@click.option("--addr", default="127.0.0.1:8765")
def cmd_serve(addr):
    import uvicorn

    from .server import create_app

    host, _, port = addr.rpartition(":")
    uvicorn.run(create_app(), host=host or "127.0.0.1", port=int(port))


if __name__ == "__main__":
    main()
