import argparse
import asyncio
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional

from config import DEFAULT_JOBS, LOG_LEVEL, OUT_DIRECTORY, VERSION

from handlers.handlers import register_handlers
from handlers.model_check import register_check_handlers
from handlers.study import register_study_handlers
from utils.common_utils import EXIT_ERROR

# Configure logging
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL, logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="workbench",
        description="Strain-limiting viscoelasticity workbench: Picard solver, oracle and diagnostics.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    parser.add_argument("--out", default=OUT_DIRECTORY, help="output directory (env SLV_OUT_DIR)")
    parser.add_argument("--strict-smallness", action="store_true",
                        help="treat a failed smallness check as an error")
    parser.add_argument("--jobs", type=int, default=DEFAULT_JOBS, help="scenarios run in parallel")

    subparsers = parser.add_subparsers(dest="command", required=True)
    register_handlers(subparsers)
    register_study_handlers(subparsers)
    register_check_handlers(subparsers)
    return parser


def run_directory(out: str, scenario_path: str) -> str:
    return os.path.join(out, os.path.splitext(os.path.basename(scenario_path))[0])


def _scenario_call(args: argparse.Namespace, path: str) -> int:
    out_dir = run_directory(args.out, path)
    if args.command == "convergence":
        return args.handler(path, out_dir=out_dir, levels=args.levels, solver=args.solver)
    return args.handler(path, out_dir=out_dir, strict_smallness=args.strict_smallness)


async def run_batch(args: argparse.Namespace) -> List[int]:
    """One worker per scenario, at most --jobs at a time; outputs are isolated per scenario name."""
    loop = asyncio.get_running_loop()
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        tasks = [loop.run_in_executor(pool, _scenario_call, args, path) for path in args.scenario]
        return list(await asyncio.gather(*tasks))


def dispatch(args: argparse.Namespace) -> int:
    if args.batch:
        names = [run_directory(args.out, p) for p in args.scenario]
        if len(set(names)) != len(names):
            logger.error("Scenario file names must be unique within one batch")
            return EXIT_ERROR
        if len(args.scenario) == 1 or args.jobs <= 1:
            codes = [_scenario_call(args, path) for path in args.scenario]
        else:
            logger.info(f"Running {len(args.scenario)} scenarios with {args.jobs} workers")
            codes = asyncio.run(run_batch(args))
        for path, code in zip(args.scenario, codes):
            logger.info(f"{os.path.basename(path)}: exit {code}")
        return EXIT_ERROR if EXIT_ERROR in codes else max(codes)

    if args.command == "compare":
        return args.handler(args.first, args.second, out_dir=args.out, tol=args.tol)
    if args.command == "model-check":
        return args.handler(args.model_name, out_dir=args.out)
    return args.handler(out_dir=args.out)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return dispatch(args)
    except KeyboardInterrupt:
        logger.info("Interrupted")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
