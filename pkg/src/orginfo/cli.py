"""Command-line entry point: ``orginfo <command> ...``."""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .charts import emit_svg_chart
from .experiments import (
    NumericalFailure,
    SweepConfig,
    csv_text,
    dimension_sweep,
    parse_grid,
    raw_csv_text,
    spectral_bounds_experiment,
)
from .graph_core import Graph, GraphError, graph_from_edgelist, graph_from_json, make_special
from .org_model import ModelError, OrgModel, Prior, expected_payoff, model_from_json
from .signal_design import (
    SignalDesign,
    design_gain,
    informativeness,
    optimal_signal,
    phase_diagram,
    plus_one_gains,
    posterior_covariance,
)
from .spectral import ConvergenceError, laplacian_report
from .validation import validate_model

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _finite(x):
    return None if isinstance(x, float) and math.isinf(x) else x


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def load_graph(path: str, n: int | None = None) -> Graph:
    text = _read(path)
    if path.endswith(".json") or text.lstrip().startswith("{"):
        return graph_from_json(text)
    if n is None:
        raise UsageError("edge-list graphs need --n")
    return graph_from_edgelist(text, n)


def load_model(args) -> OrgModel:
    path = args.model_file or args.model
    if path:
        model = model_from_json(_read(path))
        if args.beta is not None or args.beta_tilde is not None:
            beta_tilde = args.beta_tilde
            if beta_tilde is None and not model.symmetric_mode:
                beta_tilde = model.beta_tilde
            # a symmetric model stays symmetric when only --beta is overridden
            model = OrgModel(
                model.g,
                model.g_tilde,
                model.beta if args.beta is None else args.beta,
                beta_tilde,
                model.prior,
            )
        return model
    if not args.graph or args.beta is None:
        raise UsageError("give a model file, or --graph and --beta")
    g = load_graph(args.graph, args.n)
    if args.synergy in (None, "complete"):
        g_tilde = make_special("complete", g.n)
    else:
        g_tilde = load_graph(args.synergy, g.n)
    return OrgModel(g, g_tilde, args.beta, args.beta_tilde, Prior())


def design_to_obj(model: OrgModel, design: SignalDesign) -> dict:
    obj = {
        "n": model.n,
        "dimension": design.dimension,
        "disclosed_indices": design.disclosed_indices.tolist(),
        "weights": design.weights.T.tolist(),
        "omegas": design.omegas.tolist(),
        "includes_average": design.includes_average,
        "gain": design_gain(model, design),
        "expected_payoff": expected_payoff(model, posterior_covariance(design, model.prior)),
    }
    if design.is_orthonormal() and model.prior.rho == 0.0:
        obj["informativeness"] = informativeness(design).tolist()
    else:
        cov = posterior_covariance(design, model.prior)
        obj["informativeness"] = (np.diag(cov) / model.prior.sigma2).tolist()
    if model.synergy_complete:
        if model.symmetric_mode:
            obj["phases"] = [
                {
                    "beta_lo": p.beta_lo,
                    "beta_hi": _finite(p.beta_hi),
                    "dimension": p.dimension,
                    "disclosed_eigenvalue_classes": list(p.disclosed_eigenvalue_classes),
                }
                for p in phase_diagram(model.g)
            ]
        gains = plus_one_gains(model.g, model.beta, model.beta_tilde, model.prior.sigma2)
        obj["plus_one_best_target"] = _best(gains)
    return obj


def _best(gains: np.ndarray) -> int:
    best = gains.max()
    return int(np.nonzero(gains >= best - 1e-10 * max(1.0, abs(best)))[0][0])


def _emit(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_spectrum(args) -> int:
    path = args.graph_file or args.graph
    if not path:
        raise UsageError("spectrum needs a graph file")
    report = laplacian_report(load_graph(path, args.n))
    _emit(report.to_json_obj(), args.out)
    return EXIT_OK


def cmd_analyze(args) -> int:
    model = load_model(args)
    _emit(design_to_obj(model, optimal_signal(model)), args.out)
    return EXIT_OK


def cmd_plus_one(args) -> int:
    model = load_model(args)
    if not model.synergy_complete:
        raise UsageError("plus-one requires a complete synergy graph")
    gains = plus_one_gains(model.g, model.beta, model.beta_tilde, model.prior.sigma2)
    _emit({"gains": gains.tolist(), "best_target": _best(gains)}, args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    model = load_model(args)
    checks = validate_model(model)
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status}  {c.name}" + (f"  ({c.detail})" if c.detail else ""))
    return EXIT_OK if all(c.passed for c in checks) else EXIT_NUMERICAL


def _sweep_config(args, need_grid: bool) -> SweepConfig:
    data = {}
    if args.config:
        try:
            data = json.loads(_read(args.config))
        except json.JSONDecodeError as exc:
            raise UsageError(f"malformed config: {exc}") from exc
    family = data.get("model")
    p = args.p if args.p is not None else data.get("p")
    m_attach = args.m_attach if args.m_attach is not None else data.get("m_attach")
    if args.p is not None:
        family = "er"
    elif args.m_attach is not None:
        family = "ba"
    if family is None:
        raise UsageError("choose a model with --p (Erdos-Renyi) or --m-attach (Barabasi-Albert)")
    grid = data.get("grid", ())
    if args.grid is not None:
        grid = args.grid
    if isinstance(grid, str):
        grid = parse_grid(grid)
    if need_grid and not grid:
        raise UsageError("sweep needs --grid a:b:step")
    n = args.n if args.n is not None else data.get("n")
    samples = args.samples if args.samples is not None else data.get("samples", 100)
    seed = args.seed if args.seed is not None else data.get("seed", 0)
    if n is None:
        raise UsageError("need --n")
    return SweepConfig(family, int(n), int(samples), tuple(grid), int(seed), p, m_attach)


def cmd_sweep(args) -> int:
    config = _sweep_config(args, need_grid=True)
    result = dimension_sweep(config, keep_samples=args.raw)
    text = csv_text(result)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        if args.raw:
            out = Path(args.out)
            out.with_name(out.stem + "_raw" + out.suffix).write_text(raw_csv_text(result), encoding="utf-8")
    else:
        sys.stdout.write(text)
        if args.raw:
            sys.stdout.write("\n" + raw_csv_text(result))
    if args.svg:
        emit_svg_chart(result, args.svg, "line_errorbar")
    return EXIT_OK


def cmd_bounds(args) -> int:
    config = _sweep_config(args, need_grid=False)
    result = spectral_bounds_experiment(config)
    text = csv_text(result)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.svg:
        emit_svg_chart(result, args.svg, "scatter")
    print(json.dumps(result.violations), file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="orginfo", description="Optimal public information design on networks.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def model_args(p, handler):
        p.add_argument("model", nargs="?", help="model JSON file")
        p.add_argument("--model", dest="model_file", metavar="FILE")
        p.add_argument("--graph", metavar="FILE", help="incentive graph (JSON or edge list)")
        p.add_argument("--synergy", metavar="complete|FILE")
        p.add_argument("--beta", type=float)
        p.add_argument("--beta-tilde", type=float)
        p.add_argument("--n", type=int, help="node count for edge-list graphs")
        p.add_argument("--out", metavar="PATH")
        p.set_defaults(func=handler)

    p = sub.add_parser("spectrum", help="Laplacian spectrum report")
    p.add_argument("graph", nargs="?")
    p.add_argument("--graph", dest="graph_file", metavar="FILE")
    p.add_argument("--n", type=int)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_spectrum)

    model_args(sub.add_parser("analyze", help="optimal signal for one model"), cmd_analyze)
    model_args(sub.add_parser("plus-one", help="plus-one policy gains"), cmd_plus_one)
    model_args(sub.add_parser("validate", help="run invariant checks on one model"), cmd_validate)

    for name, handler, helptext in (
        ("sweep", cmd_sweep, "signal dimension across a 1/beta grid"),
        ("bounds", cmd_bounds, "spectral radius / connectivity vs degree"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("config", nargs="?", help="experiment config JSON")
        p.add_argument("--n", type=int)
        p.add_argument("--p", type=float)
        p.add_argument("--m-attach", type=int)
        p.add_argument("--samples", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--grid", metavar="a:b:step")
        p.add_argument("--out", metavar="PATH")
        p.add_argument("--svg", metavar="PATH")
        p.add_argument("--raw", action="store_true", help="also emit the per-sample dimension matrix")
        p.set_defaults(func=handler)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, NumericalFailure, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (GraphError, ModelError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
