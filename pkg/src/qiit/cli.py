"""Command-line entry point: ``qiit run | reproduce | goldens``."""

import argparse
import logging
import sys

from .config import ConfigError, load_config
from .models import DeskLimitError


def _parser():
    p = argparse.ArgumentParser(prog="qiit", description="quantum integrated information engine")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--workers", type=int, default=None, help="worker processes")
        sp.add_argument("--out-dir", default=None, help="output directory")
        sp.add_argument("--force-large", action="store_true",
                        help="allow networks with d**n > 4096")

    r = sub.add_parser("run", help="run one experiment config")
    r.add_argument("--config", required=True, help="INI experiment file")
    r.add_argument("--seed", type=int, default=None,
                   help="seed for single-sample dynamics (GUE/Haar)")
    r.add_argument("--cross-check", action="store_true",
                   help="compare lemma and brute-force partitioned structures")
    r.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE",
                   help="override a config key (repeatable)")
    common(r)

    f = sub.add_parser("reproduce", help="emit the data of a figure")
    f.add_argument("figure", help="fig2-solid, fig2-gue, fig3a, fig3b, fig5 or fig5-inset")
    f.add_argument("--seed", type=int, default=0, help="first GUE seed")
    f.add_argument("--sizes", default="3,4,5", help="network sizes for scaling figures")
    f.add_argument("--points", type=int, default=None, help="sweep grid points")
    common(f)

    sub.add_parser("goldens", help="check the published example values")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            from .runner import run
            overrides = list(args.set)
            if args.workers is not None:
                overrides.append(f"output.workers={args.workers}")
            if args.out_dir is not None:
                overrides.append(f"output.dir={args.out_dir}")
            if args.force_large:
                overrides.append("output.force_large=true")
            if args.cross_check:
                overrides.append("task.cross_check=true")
            if args.seed is not None:
                overrides.append(f"dynamics.seed={args.seed}")
            rec = run(load_config(args.config, overrides))
            print(rec.summary())
        elif args.command == "reproduce":
            from .figures import reproduce
            sizes = tuple(int(s) for s in args.sizes.split(","))
            rec = reproduce(args.figure, args.out_dir or "out", args.workers or 1, sizes,
                            args.force_large, args.points, args.seed)
            print(rec.summary())
        else:
            from .goldens import goldens
            rows = goldens(sys.stdout)
            return 0 if all(g.ok for g in rows) else 1
    except (ConfigError, DeskLimitError, ValueError) as exc:
        print(f"qiit: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
