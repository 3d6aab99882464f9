#!/usr/bin/env python3
"""
Command-line interface of the experiment runner.

Every subcommand runs one experiment kind, from a JSON config or from the
smoke defaults, and writes tables, a summary, a plot script and a manifest.
"""
import argparse
import asyncio
import logging
import sys
from typing import List, Optional

from expcli.defaults import SMOKE_SETTINGS, default_config
from expcli.errors import ConfigInvalid, IoFailure
from expcli.models import ExperimentConfig, RunManifest
from expcli.runner import run_async

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARTIAL = 3

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="expcli",
        description="Numerical experiments on twisted ergodic integrals of translation flows",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python -m expcli stratum-info --seed 1
  python -m expcli twisted-sweep --seed 7 --out results/sweep --threads 4
  python -m expcli kz-exponents --config configs/kz_h2.json --format json

Exit codes:
  0  success
  2  invalid configuration
  3  some tasks failed (see manifest.json)
        """
    )
    subparsers = parser.add_subparsers(dest="kind", required=True, metavar="EXPERIMENT")
    for kind in SMOKE_SETTINGS:
        sub = subparsers.add_parser(kind, help=f"Run the {kind} experiment")
        sub.add_argument('--config', type=str, help='JSON config file (smoke defaults when omitted)')
        sub.add_argument('--seed', type=int, help='Root seed (required without --config)')
        sub.add_argument('--out', type=str, help='Output directory (overrides output_dir)')
        sub.add_argument('--threads', type=int, help='Worker threads (overrides threads)')
        sub.add_argument('--format', choices=['csv', 'json'], help='Table format (overrides format)')
        sub.add_argument('--verbose', action='store_true', help='Enable verbose output')
    return parser


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    """
    Config from --config (or smoke defaults) with the CLI flags applied.

    Raises:
        ConfigInvalid: If the config is invalid, its kind disagrees with the
            subcommand, or no seed is available
        IoFailure: If the config file cannot be read
    """
    overrides = {"output_dir": args.out, "threads": args.threads, "format": args.format}
    if args.config:
        config = ExperimentConfig.from_file(args.config)
        if config.kind != args.kind:
            raise ConfigInvalid(f"Config file is for '{config.kind}', not '{args.kind}'")
        return config.with_overrides(seed=args.seed, **overrides)
    if args.seed is None:
        raise ConfigInvalid("A seed is required: pass --seed N or a config file")
    return default_config(args.kind, args.seed, **overrides)


def print_summary(manifest: RunManifest, output_dir: str) -> None:
    failed = manifest.failed
    status = "✅" if not failed else "⚠️ "
    print(f"{status} {manifest.kind}: {len(manifest.tasks) - len(failed)}/{len(manifest.tasks)} tasks ok "
          f"in {manifest.wall_time:.2f}s")
    print(f"📁 Output: {output_dir}")
    for entry in manifest.files:
        print(f"  • {entry.path} ({entry.size} bytes)")
    for task in failed:
        print(f"❌ {task.name}: {task.message}")


async def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and return the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format=LOG_FORMAT,
        stream=sys.stderr,
    )

    try:
        config = load_config(args)
    except (ConfigInvalid, IoFailure) as e:
        print(f"❌ {e}")
        return EXIT_CONFIG

    try:
        manifest = await run_async(config, verbose=args.verbose)
    except ConfigInvalid as e:
        print(f"❌ {e}")
        return EXIT_CONFIG
    except IoFailure as e:
        print(f"❌ {e}")
        return EXIT_PARTIAL

    print_summary(manifest, config.output_dir)
    return manifest.exit_code


def entrypoint() -> None:
    sys.exit(asyncio.run(main()))


if __name__ == "__main__":
    entrypoint()
