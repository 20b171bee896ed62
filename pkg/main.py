#!/usr/bin/env python3
"""
Main entry point for the spin chain simulator
Runs adiabatic scans, step-count sweeps, regime maps and pulse compilation
"""
import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

from src.config.experiment_config import ExperimentConfig
from src.models.data_models import ControlKnob
from src.services.experiment_service import DEFAULT_M_LIST, ExperimentService
from src.utils.error_handler import (
    ConfigurationError, InvalidParameterError, PlanCompilationError, SimulationError,
    get_error_handler,
)
from src.utils.logging_config import LoggingConfig, setup_logging

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2

VERBS = ("run", "msweep", "phasescan", "compile-pulse", "selftest")


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--case", choices=["A", "B", "custom"], help="named parameter set")
    common.add_argument("--config", help="flat section.key = value experiment file")
    common.add_argument("--M", type=int, dest="steps", help="number of scan steps")
    common.add_argument("--T", type=float, dest="total_time", help="total scan time")
    common.add_argument("--no-decoherence", action="store_true", help="ideal evolution")
    common.add_argument("--evolution", choices=["trotter", "exact"])
    common.add_argument("--out", help="CSV output path (default stdout)")
    common.add_argument("--seed", type=int)
    common.add_argument("--workers", type=int, help="worker threads for sweeps")
    common.add_argument("--sharpness", type=float, help="sinh schedule sharpness")
    common.add_argument("--substeps", type=int, help="Trotter sub-steps per segment")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")

    parser = argparse.ArgumentParser(prog="spinsim", description="Three-spin Ising chain simulator")
    verbs = parser.add_subparsers(dest="verb", required=True)

    verbs.add_parser("run", parents=[common], help="adiabatic scan of one case")

    msweep = verbs.add_parser("msweep", parents=[common], help="minimum fidelity versus step count")
    msweep.add_argument("--m-list", type=_int_list, default=list(DEFAULT_M_LIST),
                        help="comma-separated step counts")

    phasescan = verbs.add_parser("phasescan", parents=[common], help="ground-state regime map")
    phasescan.add_argument("--knob", choices=["j2", "j3"], help="scan one coupling only")
    phasescan.add_argument("--grid", type=int, default=21, help="samples per axis")

    pulse = verbs.add_parser("compile-pulse", parents=[common], help="NMR schedule for one step")
    pulse.add_argument("--tau", type=float, help="step length (default T/M/substeps)")
    pulse.add_argument("--control", type=float, help="control value (default scan end)")

    verbs.add_parser("selftest", parents=[common], help="fast analytic checks")
    return parser


class SpinSimRunner:
    """Main runner for the simulator CLI"""

    def __init__(self):
        self.config: Optional[ExperimentConfig] = None
        self.service: Optional[ExperimentService] = None
        self.logger = logging.getLogger(__name__)

    def load_config(self, args: argparse.Namespace) -> ExperimentConfig:
        """Case defaults, then config file, then environment, then flags"""
        config = ExperimentConfig.for_case(args.case) if args.case else None
        if args.config:
            config = ExperimentConfig.from_file(args.config, config)
        config = ExperimentConfig.from_env(config)
        if args.case and config.case != args.case:
            raise ConfigurationError(f"--case {args.case} conflicts with configured case {config.case}")

        overrides: Dict[str, Any] = {
            key: getattr(args, key)
            for key in ("steps", "total_time", "evolution", "out", "seed", "workers",
                        "sharpness", "substeps")
            if getattr(args, key) is not None
        }
        if args.no_decoherence:
            overrides["decoherence_enabled"] = False
        return config.with_overrides(**overrides)

    def setup(self, args: argparse.Namespace) -> bool:
        """Load and validate configuration"""
        setup_logging({"log_level": args.log_level} if args.log_level else None)
        self.logger = logging.getLogger(__name__)

        self.config = self.load_config(args)
        self.logger.info("Configuration loaded", extra={"config": self.config.to_dict()})

        if not self.config.validate():
            self.logger.error("Configuration validation failed")
            return False

        self.service = ExperimentService(self.config)
        return True

    def execute(self, args: argparse.Namespace) -> int:
        """Run the selected verb"""
        if args.verb == "run":
            _, summary = self.service.run_case()
            self.logger.info("Run summary", extra=summary.to_dict())
        elif args.verb == "msweep":
            self.service.run_msweep(args.m_list)
        elif args.verb == "phasescan":
            knob = ControlKnob(args.knob) if args.knob else None
            self.service.run_phase_scan(args.grid, knob)
        elif args.verb == "compile-pulse":
            self.service.compile_pulse(args.tau, args.control)
        elif args.verb == "selftest":
            results = self.service.selftest()
            for result in results:
                print(f"{'PASS' if result.passed else 'FAIL'} {result.name}: {result.detail}")
            return EXIT_OK if all(r.passed for r in results) else EXIT_RUNTIME
        return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    args = build_parser().parse_args(argv)
    runner = SpinSimRunner()

    try:
        if not runner.setup(args):
            return EXIT_CONFIG
        LoggingConfig.log_experiment_event("start", {"verb": args.verb, "case": runner.config.case},
                                           component="spinsim")
        exit_code = runner.execute(args)
        LoggingConfig.log_experiment_event("complete", {"verb": args.verb, "exit_code": exit_code},
                                           component="spinsim")
        return exit_code

    except (ConfigurationError, InvalidParameterError, PlanCompilationError) as e:
        runner.logger.error(f"Invalid experiment: {e}")
        LoggingConfig.log_experiment_event("error", {"verb": args.verb, "error": str(e)},
                                           component="spinsim")
        return EXIT_CONFIG
    except SimulationError as e:
        runner.logger.error(f"Simulation failed: {e}")
        LoggingConfig.log_experiment_event("error", {"verb": args.verb, "error": str(e)},
                                           component="spinsim")
        return EXIT_RUNTIME
    except Exception as e:
        runner.logger.error(f"Fatal error: {e}", exc_info=True)
        return EXIT_RUNTIME
    finally:
        handler = get_error_handler()
        stats = handler.get_error_stats()
        if stats["total_errors"]:
            runner.logger.debug("Recorded errors", extra={
                "by_category": stats["by_category"], "by_component": stats["by_component"],
                "last_error": handler.get_error_summary(hours=1)["last_error"],
            })


if __name__ == "__main__":
    exit_code = main()
    sys.exit(exit_code)
