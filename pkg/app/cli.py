"""
Command-line entry point for Wind Causality Studio

    windcaus --config scenario.toml --out out/ ball 0,0 0.5
    windcaus --config builtin:punctured_plane ladder --reverify

Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure,
3 internal invariant violation. Diagnostics go to standard error; the task
result is printed as JSON on standard output and artifacts land in --out.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from app.config import configure_logging, parse_resolution, settings
from app.errors import ConfigError, UsageError, exit_code_for
from app.output.writers import dumps_json
from app.scenario.builtins import builtin_names, get_builtin
from app.scenario.scenario_config import ScenarioConfig, load_config
from app.tasks import get_task

logger = logging.getLogger("cli")

BUILTIN_PREFIX = "builtin:"

EPILOG = (
    "Points are comma-separated (x,y), events (t,x,y). Put `--` before positionals "
    "that start with a minus sign, e.g. `dist -- -1,0 1,0`. "
    f"Built-in scenarios: {', '.join(builtin_names())}."
)


def _common() -> argparse.ArgumentParser:
    # SUPPRESS keeps a flag given before the command from being reset by the subparser
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="Scenario file, or builtin:NAME")
    common.add_argument("--out", default=argparse.SUPPRESS, help=f"Artifact directory (default {settings.output_dir})")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="Random seed for probes and sampling")
    common.add_argument("--resolution", default=argparse.SUPPRESS, help="Grid resolution NxM")
    common.add_argument("--horizon", type=float, default=argparse.SUPPRESS, help="Largest parameter length")
    common.add_argument("--dt", type=float, default=argparse.SUPPRESS, help="Front propagation step")
    common.add_argument("--log-level", default=argparse.SUPPRESS, help="Logging level")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="windcaus",
        description="Causality of wind Finslerian structures on CSTK spacetimes",
        epilog=EPILOG,
        parents=[common],
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    commands.add_parser("regions", parents=[common], help="Mild / critical / strong region map")

    norm = commands.add_parser("norm", parents=[common], help="F and F_l at (p, v) pairs")
    norm.add_argument("samples", nargs="+", metavar="PX,PY,VX,VY")

    ball = commands.add_parser("ball", parents=[common], help="c-ball and open ball masks with SVG contour")
    ball.add_argument("center", metavar="X,Y")
    ball.add_argument("r", type=float)
    ball.add_argument("--direction", choices=["forward", "backward"], default="forward")

    dist = commands.add_parser("dist", parents=[common], help="F-separation between two points")
    dist.add_argument("x", metavar="X,Y")
    dist.add_argument("y", metavar="X,Y")

    geodesic = commands.add_parser("geodesic", parents=[common], help="Geodesic integration or shooting")
    geodesic.add_argument("start", metavar="X,Y")
    geodesic.add_argument("--to", dest="target", metavar="X,Y", help="Shoot geodesics to this point")
    geodesic.add_argument("--velocity", metavar="VX,VY", help="Initial velocity for integration")
    geodesic.add_argument("--length", type=float, help="Parameter length for integration")
    geodesic.add_argument("--step", type=float, dest="step", help="Output sample spacing")
    geodesic.add_argument("--metric", choices=["F", "F_l"], default="F")

    causal = commands.add_parser("causal", parents=[common], help="Chronological / causal query between events")
    causal.add_argument("p", metavar="T,X,Y")
    causal.add_argument("q", metavar="T,X,Y")
    causal.add_argument("--relation", choices=["chronological", "causal", "both"], default="both")
    causal.add_argument("--via", choices=["forward", "backward"], default="forward")
    causal.add_argument("--no-horismos", dest="horismos", action="store_false")
    causal.add_argument("--time-function", action="store_true")
    causal.add_argument("--strong-causality", action="store_true")

    ladder = commands.add_parser("ladder", parents=[common], help="Causal ladder classification")
    ladder.add_argument("--reverify", action="store_true", help="Re-run the probe behind every witness")

    crosscheck = commands.add_parser("crosscheck", parents=[common], help="Front vs HJB vs sampler agreement")
    crosscheck.add_argument("center", metavar="X,Y")
    crosscheck.add_argument("r", type=float)
    crosscheck.add_argument("--count", type=int, default=2000)
    return parser


def resolve_config(reference: str) -> ScenarioConfig:
    """Scenario from a file path or ``builtin:NAME``"""
    if reference.startswith(BUILTIN_PREFIX):
        try:
            return get_builtin(reference[len(BUILTIN_PREFIX):])
        except KeyError as e:
            raise UsageError(str(e.args[0])) from e
    return load_config(reference)


def _params(args: argparse.Namespace) -> Dict[str, Any]:
    command = args.command
    if command == "norm":
        return {"samples": args.samples}
    if command == "ball":
        return {"center": args.center, "r": args.r, "direction": args.direction}
    if command == "dist":
        return {"x": args.x, "y": args.y}
    if command == "geodesic":
        params = {"start": args.start, "metric": args.metric}
        for key, value in (("target", args.target), ("velocity", args.velocity), ("length", args.length), ("dt", args.step)):
            if value is not None:
                params[key] = value
        return params
    if command == "causal":
        return {
            "p": args.p,
            "q": args.q,
            "relation": args.relation,
            "via": args.via,
            "horismos": args.horismos,
            "time_function": args.time_function,
            "strong_causality": args.strong_causality,
        }
    if command == "ladder":
        return {"reverify": args.reverify}
    if command == "crosscheck":
        return {"center": args.center, "r": args.r, "count": args.count}
    return {}


def run_command(args: argparse.Namespace) -> Dict[str, Any]:
    """Load the scenario, apply overrides and execute the command's task"""
    reference = getattr(args, "config", None)
    if not reference:
        raise UsageError("--config is required (a scenario file or builtin:NAME)")
    resolution = getattr(args, "resolution", None)
    try:
        resolution = parse_resolution(resolution) if resolution else None
    except ValueError as e:
        raise UsageError(str(e)) from e
    config = resolve_config(reference).with_overrides(
        resolution=resolution,
        horizon=getattr(args, "horizon", None),
        dt=getattr(args, "dt", None),
        seed=getattr(args, "seed", None),
    )
    out = Path(getattr(args, "out", settings.output_dir))
    return get_task(args.command).execute(config, _params(args), out=out)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 1

    configure_logging(getattr(args, "log_level", None))
    try:
        result = run_command(args)
    except ConfigError as e:
        for diagnostic in e.diagnostics:
            print(f"{getattr(args, 'config', '')}: {diagnostic}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        code = exit_code_for(e)
        if code == 3:
            logger.exception(f"Internal failure in {args.command}")
        print(f"error: {e}", file=sys.stderr)
        return code

    sys.stdout.write(dumps_json(result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
