import argparse
import logging
import os
import sys
from typing import List, Optional

from .config import configure_logging, settings
from .exceptions import ScenarioError
from .schemas.report import RunReport
from .schemas.scenario import ScenarioConfig, SimMode
from .schemas.simlog import Outcome
from .services import export, harness
from .services.events import detect_events, max_lyapunov_increase
from .services.scenario import load_scenario

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BREAKDOWN = 2


class UsageError(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors with exit code 1; 2 is reserved for a breakdown"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="helmguard",
        description="Backstepping trajectory tracking for an underactuated vessel with a CBF-QP safety filter",
    )
    parser.add_argument("--version", action="version", version=f"{settings.APP_NAME} {settings.VERSION}")
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="Simulate one scenario and write its log and report")
    run_parser.add_argument("--scenario", required=True, help="Path to scenario JSON")
    run_parser.add_argument("--mode", choices=[mode.value for mode in SimMode], default=None,
                            help="reference applies tau_ref directly, qp applies the safety filter")
    run_parser.add_argument("--out", default=settings.OUTPUT_DIR, help="Output directory")
    run_parser.add_argument("--dt", type=float, default=None, help="Override the step size, s")
    run_parser.add_argument("--duration", type=float, default=None, help="Override the run length, s")

    compare_parser = commands.add_parser("compare", help="Run a scenario in two modes side by side")
    compare_parser.add_argument("--scenario", required=True, help="Path to scenario JSON")
    compare_parser.add_argument("--out", default=settings.OUTPUT_DIR, help="Output directory")
    compare_parser.add_argument(
        "--modes",
        nargs=2,
        choices=[mode.value for mode in SimMode],
        default=[SimMode.REFERENCE.value, SimMode.QP.value],
        help="The two modes to compare (default: reference qp)",
    )
    return parser


def execute(cfg: ScenarioConfig, out_dir: str) -> RunReport:
    """Run one scenario and write <name>_<mode>.csv and <name>_<mode>.json"""
    log = harness.run(cfg)
    events = detect_events(log, cfg.cbf)
    if cfg.mode == SimMode.QP:
        max_lyapunov_increase(log)

    stem = os.path.join(out_dir, f"{cfg.name}_{cfg.mode.value}")
    csv_path = export.write_log_csv(log, f"{stem}.csv")
    report = export.build_report(log, events, files=[csv_path, f"{stem}.json"])
    export.write_report(report, f"{stem}.json")
    return report


def cmd_run(args: argparse.Namespace) -> int:
    overrides = {"dt": args.dt, "duration": args.duration, "mode": args.mode}
    cfg = load_scenario(args.scenario, overrides)
    report = execute(cfg, args.out)
    print(export.summary_table([report]))
    return EXIT_OK if report.outcome == Outcome.COMPLETED else EXIT_BREAKDOWN


def cmd_compare(args: argparse.Namespace) -> int:
    first, second = (SimMode(mode) for mode in args.modes)
    if first == second:
        raise UsageError(f"compare needs two different modes, got {first.value} twice")

    base = load_scenario(args.scenario)
    reports = [execute(harness.with_mode(base, mode), args.out) for mode in (first, second)]
    path = os.path.join(args.out, "compare.json")
    export.write_report(export.compare_report(base.name, reports), path)
    print(export.summary_table(reports))
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        handler = cmd_run if args.command == "run" else cmd_compare
        return handler(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ScenarioError as e:
        print(f"error: {e}", file=sys.stderr)
        for line in e.diagnostics:
            print(f"  {line}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"Could not write output: {str(e)}")
        print(f"error: cannot write output: {e}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        sys.stdout.flush()


if __name__ == "__main__":
    sys.exit(main())
