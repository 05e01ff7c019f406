"""Command-line interface: run searches, score single designs, export URDF.

Exit codes: 0 success, 2 validation/usage error, 3 I/O error, 4 internal
error.  All stochastic behavior is pinned by --seed; the default output
directory can be set through the MORPHOFORGE_OUT environment variable.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from .archive import ParetoArchive, export_csv, export_pareto, export_pareto_json, extract_pareto, hypervolume
from .ik import IkConfig
from .modules import RobotDesign, ValidationError, decode_genome, parse_design
from .nsga2 import OptimizerConfig, ProgressEvent, run
from .objectives import derive_seed, eval_design, solve_targets
from .scenario import BUILTIN_NAMES, Scenario, builtin_scenario, load_scenario
from .urdf import export_urdf

_DEFAULT_OUT = "morphoforge-out"


@dataclass(frozen=True)
class RunManifest:
    """A fully validated optimize invocation, built before any computation."""

    scenario: Scenario
    optimizer: OptimizerConfig
    ik: IkConfig
    out_dir: Path
    workers: int
    figures: bool
    progress: bool


def _resolve_scenario(spec: str) -> Scenario:
    if spec in BUILTIN_NAMES:
        return builtin_scenario(spec)
    path = Path(spec)
    if path.exists():
        return load_scenario(path)
    raise ValidationError(
        f"scenario {spec!r} is neither a builtin ({', '.join(BUILTIN_NAMES)}) nor an existing file"
    )


def _resolve_ik(scenario: Scenario, args, seed: int) -> IkConfig:
    cfg = scenario.resolve_ik(seed=seed)
    overrides = {}
    if args.ik_lambda is not None:
        overrides["damping"] = args.ik_lambda
    if args.ik_iters is not None:
        overrides["max_iterations"] = args.ik_iters
    if args.ik_tol is not None:
        overrides["residual_tolerance"] = args.ik_tol
    if args.ik_restarts is not None:
        overrides["restarts"] = args.ik_restarts
    return replace(cfg, **overrides) if overrides else cfg


def _add_ik_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("ik overrides")
    group.add_argument("--ik-restarts", type=int, help="IK restart attempts per target")
    group.add_argument("--ik-lambda", type=float, help="damped-least-squares damping factor")
    group.add_argument("--ik-iters", type=int, help="max IK iterations per restart")
    group.add_argument("--ik-tol", type=float, help="IK residual tolerance")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="morphoforge",
        description="Multi-objective design search over modular serial robots.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    opt = sub.add_parser("optimize", help="run the evolutionary search and export the archive")
    opt.add_argument("--scenario", required=True, help=f"builtin name ({', '.join(BUILTIN_NAMES)}) or YAML path")
    opt.add_argument("--evaluations", type=int, default=10_000, help="total objective evaluations")
    opt.add_argument("--population", type=int, default=100, help="population size (even)")
    opt.add_argument("--seed", type=int, default=0, help="run seed; fixes every random choice")
    opt.add_argument("--workers", type=int, default=1, help="parallel evaluation processes")
    opt.add_argument(
        "--out",
        default=None,
        help="output directory (default: $MORPHOFORGE_OUT or ./" + _DEFAULT_OUT + ")",
    )
    opt.add_argument("--progress", action="store_true", help="stream JSON progress lines to stderr")
    opt.add_argument("--no-figures", action="store_true", help="skip rendering report figures")
    _add_ik_flags(opt)
    opt.set_defaults(handler=cmd_optimize)

    ev = sub.add_parser("evaluate", help="score one design string against a scenario")
    ev.add_argument("--design", required=True, help="design string, e.g. Y:0.3,P:0.25,S:0.2,F:0.01,F:0.01,F:0.01")
    ev.add_argument("--scenario", required=True, help="builtin name or YAML path")
    ev.add_argument("--seed", type=int, default=0, help="seed for IK restarts")
    _add_ik_flags(ev)
    ev.set_defaults(handler=cmd_evaluate)

    ex = sub.add_parser("export-urdf", help="write a URDF file for a design string")
    ex.add_argument("--design", required=True, help="design string, e.g. Y:0.3,P:0.25,F:0.01")
    ex.add_argument("--out", required=True, help="output URDF path")
    ex.add_argument("--name", default="morphoforge_robot", help="robot name attribute")
    ex.set_defaults(handler=cmd_export_urdf)

    return parser


def _make_manifest(args) -> RunManifest:
    scenario = _resolve_scenario(args.scenario)
    optimizer = OptimizerConfig(
        population_size=args.population,
        total_evaluations=args.evaluations,
        seed=args.seed,
    )
    ik_config = _resolve_ik(scenario, args, seed=args.seed)
    if args.workers < 1:
        raise ValidationError(f"--workers must be >= 1, got {args.workers}")
    out_dir = Path(args.out or os.environ.get("MORPHOFORGE_OUT") or _DEFAULT_OUT)
    return RunManifest(
        scenario=scenario,
        optimizer=optimizer,
        ik=ik_config,
        out_dir=out_dir,
        workers=args.workers,
        figures=not args.no_figures,
        progress=args.progress,
    )


def _print_progress(event: ProgressEvent) -> None:
    line = json.dumps(
        {
            "evaluations": event.evaluations,
            "best_e_task": event.best_task_error,
            "front_size": event.front_size,
        }
    )
    print(line, file=sys.stderr, flush=True)


def _summarize(archive: ParetoArchive, out_dir: Path) -> None:
    front = extract_pareto(archive)
    worst = (
        max(r.task_error for r in archive.records) + 1.0,
        max(r.design_cost for r in archive.records) + 1.0,
    )
    hv = hypervolume([r.objectives for r in front], worst)
    print(f"scenario {archive.scenario_name}: {len(archive)} evaluations, "
          f"{len(front)} Pareto solutions, hypervolume {hv:.6g}")
    print(f"{'dof':>4} {'e_task':>12} {'e_design':>12}  modules")
    for record in sorted(front, key=lambda r: (r.design_cost, r.eval_index)):
        design = decode_genome(record.genome)
        print(f"{design.dof:>4} {record.task_error:>12.6g} {record.design_cost:>12.6g}  {design.letters}")
    print(f"artifacts written to {out_dir}")


def cmd_optimize(args) -> int:
    manifest = _make_manifest(args)
    out_dir = manifest.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)

    archive = run(
        manifest.scenario,
        manifest.optimizer,
        manifest.ik,
        progress=_print_progress if manifest.progress else None,
        workers=manifest.workers,
    )

    export_csv(archive, out_dir / "archive.csv")
    export_pareto(archive, out_dir / "pareto.csv")
    export_pareto_json(archive, out_dir / "pareto.json")
    for record in extract_pareto(archive):
        design = decode_genome(record.genome)
        urdf_path = out_dir / f"pareto_{record.eval_index:06d}_{design.letters}.urdf"
        urdf_path.write_text(export_urdf(design, name=f"{archive.scenario_name}_{record.eval_index}"), encoding="utf-8")
    if manifest.figures:
        from . import plotting

        plotting.save_archive_scatter(archive, out_dir / "archive.png")
        plotting.save_front_detail(archive, out_dir / "pareto.png")

    _summarize(archive, out_dir)
    return 0


def cmd_evaluate(args) -> int:
    scenario = _resolve_scenario(args.scenario)
    design = parse_design(args.design)
    base = _resolve_ik(scenario, args, seed=args.seed)
    cfg = replace(base, seed=derive_seed(base.seed, design.letters.encode("ascii")))

    results = solve_targets(design, scenario, cfg)
    total_cost, joint_cost, length_cost = eval_design(design)
    task_error = sum(r.residual_norm for r in results)

    print(f"design   {design.letters}  dof {design.dof}  total_length {design.total_length:.6g} m")
    print(f"e_design {total_cost:.9g}  (joints {joint_cost} + length {length_cost:.9g})")
    print(f"e_task   {task_error:.9g}  over {len(results)} targets")
    print(f"{'target':>6} {'residual':>14} {'converged':>10}  joint_values")
    for i, result in enumerate(results):
        joints = "[" + ", ".join(f"{v:.6g}" for v in result.q) + "]"
        print(f"{i:>6} {result.residual_norm:>14.8g} {str(result.converged).lower():>10}  {joints}")
    return 0


def cmd_export_urdf(args) -> int:
    design = parse_design(args.design)
    text = export_urdf(design, name=args.name)
    path = Path(args.out)
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write URDF to {path}: {exc}") from exc
    print(f"wrote {path}  modules {design.letters}  dof {design.dof}  total_length {design.total_length:.6g} m")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # internal invariant violation
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
