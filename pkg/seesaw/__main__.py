"""
Command-line interface for the seesaw hurdle toolkit.

Entry point: python -m seesaw <subcommand>

Subcommands: eval | region | optimize | simulate | figure2 | recommend.
Exit codes: 0 success, 2 validation or hypothesis failure, 3 I/O failure,
130 interrupted, 1 unexpected error.
"""

import argparse
import logging
import sys
from typing import Dict, List, Optional, Sequence

from seesaw.analysis.closed_form import evaluate
from seesaw.analysis.hurdles import cross_check, optimal_hurdle
from seesaw.analysis.regions import seesaw_check, threshold_curve
from seesaw.config.model_file import load_model_file
from seesaw.config.settings import settings
from seesaw.config.setup_logging import setup_logging
from seesaw.estimation.estimator import estimate_moments, recommend
from seesaw.estimation.history import ingest
from seesaw.exceptions import AssumptionViolationError, RecommendationRefused, SeesawError
from seesaw.models.regimes import (
    MODEL_TYPES,
    HurdlePolicy,
    Regime,
    RegimeModel,
    build_model,
    model_parameters,
)
from seesaw.simulation.engine import (
    BatchResult,
    SimulationConfig,
    convergence_report,
    export_trajectory,
    run,
)
from seesaw.utils.exporter import ResultExporter

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_INTERRUPTED = 130

# Flag destination -> model field
MODEL_FLAGS = ("mu", "sigma", "rho", "mu_u", "mu_v", "sigma_u", "sigma_v", "p_u", "n", "delta", "priority_probs")
# Run settings a model file may also carry
RUN_KEYS = ("z", "z_u", "z_v", "horizon", "seed", "batch")


def _float_list(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text: str) -> List[int]:
    try:
        return [int(float(item)) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _output_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--format", choices=["table", "json", "csv"], default=None,
                        help="Output format (default from settings)")
    parent.add_argument("--out", default=None, help="Output path (default stdout)")
    parent.add_argument("--log-level", default=None, help="Console log level")
    return parent


def _model_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--regime", choices=[r.value for r in Regime], default=None,
                        help="Distributional regime (default sym, or the model file's)")
    parent.add_argument("--config", default=None, help="Model file with a [regime] header")
    parent.add_argument("--relaxed", action="store_true",
                        help="Require only a negative sum of means (asymmetric regime)")
    parent.add_argument("--mu", type=float)
    parent.add_argument("--sigma", type=float)
    parent.add_argument("--rho", type=float)
    parent.add_argument("--mu-u", dest="mu_u", type=float)
    parent.add_argument("--mu-v", dest="mu_v", type=float)
    parent.add_argument("--sigma-u", dest="sigma_u", type=float)
    parent.add_argument("--sigma-v", dest="sigma_v", type=float)
    parent.add_argument("--p-u", dest="p_u", type=float, help="Probability u is the tested dimension")
    parent.add_argument("--n", type=int, help="Dimensions (multi regime)")
    parent.add_argument("--delta", type=float, help="Degrees of freedom (t regime)")
    parent.add_argument("--priority-probs", dest="priority_probs", type=_float_list,
                        help="Comma-separated priority probabilities (multi regime)")
    return parent


def _hurdle_flags(parser: argparse.ArgumentParser, default_z: Optional[float] = 0.0):
    parser.add_argument("--z", type=float, default=None, help=f"Hurdle (default {default_z})")
    parser.add_argument("--z-u", dest="z_u", type=float, default=None, help="Hurdle when u is tested (asym)")
    parser.add_argument("--z-v", dest="z_v", type=float, default=None, help="Hurdle when v is tested (asym)")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with every subcommand."""
    output = _output_parent()
    model = _model_parent()
    parser = argparse.ArgumentParser(
        prog="seesaw",
        description="Hurdle rates and seesaw-experimentation analysis for A/B testing programs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", parents=[model, output], help="Closed-form long-run performance")
    _hurdle_flags(p_eval)

    sub.add_parser("region", parents=[model, output], help="Seesaw sufficient-condition check")

    p_opt = sub.add_parser("optimize", parents=[model, output], help="Optimal hurdle rate")
    p_opt.add_argument("--cross-check", action="store_true", help="Also locate the optimum numerically")

    p_sim = sub.add_parser("simulate", parents=[model, output], help="Monte Carlo simulation")
    _hurdle_flags(p_sim)
    p_sim.add_argument("--horizon", type=int, default=None, help="Periods per replication")
    p_sim.add_argument("--seed", type=int, default=None, help="Master seed")
    p_sim.add_argument("--batch", type=int, default=None, help="Independent replications")
    p_sim.add_argument("--workers", type=int, default=None, help="Threads for batch replications")
    p_sim.add_argument("--t-scaling", dest="t_scaling", choices=["scale", "covariance"], default=None)
    p_sim.add_argument("--trajectory", default=None, help="Write the per-period trajectory CSV here")
    p_sim.add_argument("--checkpoints", type=_int_list, default=None,
                       help="Comma-separated period counts for a convergence report")

    p_fig = sub.add_parser("figure2", parents=[output], help="Maximum seesaw correlation versus alpha")
    p_fig.add_argument("--alpha-start", type=float, default=None)
    p_fig.add_argument("--alpha-stop", type=float, default=None)
    p_fig.add_argument("--alpha-step", type=float, default=None)
    p_fig.add_argument("--deltas", type=_float_list, default=None, help="Comma-separated degrees of freedom")

    p_rec = sub.add_parser("recommend", parents=[output], help="Hurdle recommendation from historical tests")
    p_rec.add_argument("csv_path", help="Historical records CSV")
    p_rec.add_argument("--regime", choices=[Regime.SYMMETRIC.value, Regime.ASYMMETRIC.value],
                       default=Regime.SYMMETRIC.value)
    p_rec.add_argument("--relaxed", action="store_true")
    return parser


# ---------------------------------------------------------------------------
# Resolution
# ---------------------------------------------------------------------------

def resolve_inputs(args: argparse.Namespace):
    """
    Merge the model file (if any) with command-line flags; flags win.

    Returns:
        (validated model, run settings taken from the file)
    """
    regime = None
    params: Dict[str, object] = {}
    if args.config:
        regime, params = load_model_file(args.config)
    run_defaults = {key: params.pop(key) for key in RUN_KEYS if key in params}

    if args.regime:
        regime = Regime(args.regime)
    regime = regime or Regime.SYMMETRIC

    fields = MODEL_TYPES[regime].model_fields
    for name in MODEL_FLAGS:
        value = getattr(args, name, None)
        if value is not None and name in fields:
            params[name] = tuple(value) if name == "priority_probs" else value
        elif value is not None:
            logger.warning(f"--{name.replace('_', '-')} does not apply to the {regime.value} regime; ignored")

    model = build_model(regime, params, relaxed=args.relaxed)
    return model, run_defaults


def resolve_policy(args: argparse.Namespace, model: RegimeModel, run_defaults: Dict[str, object]) -> HurdlePolicy:
    z = args.z if args.z is not None else run_defaults.get("z")
    z_u = args.z_u if args.z_u is not None else run_defaults.get("z_u")
    z_v = args.z_v if args.z_v is not None else run_defaults.get("z_v")
    if z_u is not None or z_v is not None:
        if model.regime != Regime.ASYMMETRIC:
            raise ValueError("--z-u/--z-v apply to the asym regime only; use --z")
        if z_u is None or z_v is None:
            raise ValueError("give both --z-u and --z-v")
        return HurdlePolicy.pair(z_u, z_v)
    z = 0.0 if z is None else z
    if model.regime == Regime.ASYMMETRIC:
        return HurdlePolicy.pair(z, z)
    return HurdlePolicy.scalar(z)


def _parameters(model: RegimeModel, args: argparse.Namespace, **extra) -> Dict[str, object]:
    return {**model_parameters(model), "relaxed": bool(getattr(args, "relaxed", False)), **extra}


def _exporter(args: argparse.Namespace, default_format: Optional[str] = None) -> ResultExporter:
    return ResultExporter(args.format or default_format, args.out)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_eval(args: argparse.Namespace) -> int:
    model, run_defaults = resolve_inputs(args)
    policy = resolve_policy(args, model, run_defaults)
    value = evaluate(model, policy)
    parameters = _parameters(model, args, **policy.model_dump(exclude_none=True))
    _exporter(args).export("Long-run average performance", parameters, value.to_dict())
    return EXIT_OK


def cmd_region(args: argparse.Namespace) -> int:
    model, _ = resolve_inputs(args)
    verdict = seesaw_check(model)
    notes = []
    if verdict.negative_at_zero and not verdict.predicted:
        notes.append("performance at a zero hurdle is negative although the sufficient condition does not hold")
    _exporter(args).export("Seesaw region check", _parameters(model, args), verdict.to_dict(), notes=notes)
    return EXIT_OK


def cmd_optimize(args: argparse.Namespace) -> int:
    model, _ = resolve_inputs(args)
    if args.cross_check:
        result = cross_check(model).to_dict()
    else:
        result = optimal_hurdle(model).to_dict()
    _exporter(args).export("Optimal hurdle rate", _parameters(model, args), result)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    model, run_defaults = resolve_inputs(args)
    policy = resolve_policy(args, model, run_defaults)
    config = SimulationConfig(
        model=model,
        policy=policy,
        horizon=(
            args.horizon if args.horizon is not None
            else int(run_defaults.get("horizon", settings.default_horizon))
        ),
        seed=args.seed if args.seed is not None else int(run_defaults.get("seed", settings.default_seed)),
        batch=args.batch if args.batch is not None else int(run_defaults.get("batch", 1)),
        t_scaling=args.t_scaling,
        trajectory=bool(args.trajectory),
        workers=args.workers,
    )
    parameters = {**config.to_dict(), "relaxed": args.relaxed}
    closed_form = evaluate(model, policy).value
    exporter = _exporter(args)

    if args.checkpoints:
        rows = [p.to_dict() for p in convergence_report(config, args.checkpoints)]
        exporter.export("Convergence report", parameters, {"closed_form": closed_form}, rows=rows)
        return EXIT_OK

    outcome = run(config)
    if isinstance(outcome, BatchResult):
        first = outcome.replications[0]
        result = {
            "batch": outcome.batch,
            "pooled_mean": outcome.pooled_mean,
            "pooled_std_error": outcome.pooled_std_error,
            "closed_form": closed_form,
        }
        rows = [r.to_dict() for r in outcome.replications]
    else:
        first = outcome
        result = {**outcome.to_dict(), "closed_form": closed_form}
        rows = None

    if args.trajectory:
        export_trajectory(first, args.trajectory)
    exporter.export("Monte Carlo simulation", parameters, result, rows=rows)
    return EXIT_OK


def cmd_figure2(args: argparse.Namespace) -> int:
    grid = settings.with_alpha_grid(
        figure2_alpha_start=args.alpha_start,
        figure2_alpha_stop=args.alpha_stop,
        figure2_alpha_step=args.alpha_step,
    )
    alphas = grid.figure2_alphas()
    deltas = args.deltas if args.deltas is not None else list(settings.figure2_deltas)
    rows = threshold_curve(alphas, deltas)
    parameters = {
        "alpha_start": grid.figure2_alpha_start,
        "alpha_stop": grid.figure2_alpha_stop,
        "alpha_step": grid.figure2_alpha_step,
        "deltas": deltas,
    }
    _exporter(args, "csv").export("Maximum correlation leading to seesaw", parameters, rows=rows)
    return EXIT_OK


def cmd_recommend(args: argparse.Namespace) -> int:
    report = ingest(args.csv_path)
    estimated = estimate_moments(report.records)
    recommendation = recommend(estimated, args.regime, relaxed=args.relaxed)
    payload = recommendation.to_dict()
    notes = [str(e) for e in report.errors]
    if notes:
        payload["skipped_rows"] = notes
    parameters = {**recommendation.parameters, "csv_path": args.csv_path}
    _exporter(args, "json").export("Hurdle recommendation", parameters, payload, notes=payload["caveats"])
    return EXIT_OK


COMMANDS = {
    "eval": cmd_eval,
    "region": cmd_region,
    "optimize": cmd_optimize,
    "simulate": cmd_simulate,
    "figure2": cmd_figure2,
    "recommend": cmd_recommend,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments, run one subcommand and map failures to exit codes.

    Args:
        argv: Arguments without the program name (sys.argv[1:] if not provided)

    Returns:
        Process exit code
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(level=args.log_level)
    logger.debug(f"Running {args.command}")

    try:
        return COMMANDS[args.command](args)
    except AssumptionViolationError as e:
        for violation in e.violations:
            logger.error(f"Invalid model: {violation}")
        return EXIT_VALIDATION
    except RecommendationRefused as e:
        for condition in e.conditions:
            logger.error(f"Recommendation refused: {condition}")
        return EXIT_VALIDATION
    except SeesawError as e:
        logger.error(str(e))
        return EXIT_VALIDATION
    except OSError as e:
        logger.error(f"I/O failure: {e}")
        return EXIT_IO
    except ValueError as e:
        logger.error(str(e))
        return EXIT_VALIDATION


def cli():
    """Command-line interface entry point."""
    try:
        exit_code = main()
        sys.exit(exit_code)
    except KeyboardInterrupt:
        logger.info("\nInterrupted by user")
        sys.exit(EXIT_INTERRUPTED)
    except Exception as e:
        logger.error(f"Unexpected error: {e}", exc_info=True)
        sys.exit(EXIT_UNEXPECTED)


if __name__ == "__main__":
    cli()
