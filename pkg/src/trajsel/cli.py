"""Command line entry point: ``trajsel <stage> [--config path] [--key value ...]``."""
import argparse
import logging
import sys
from pathlib import Path

from .pipeline import STAGES, MissingStage, load_config, run_stage
from .pipeline.config import CONFIG_KEYS, DESK, parse_value

log = logging.getLogger("trajsel")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="trajsel", description="Trajectory-based algorithm selection pipeline.")
    p.add_argument("stage", choices=STAGES + ("all",))
    p.add_argument("--config", help="flat 'key = value' configuration file")
    p.add_argument("--desk", action="store_true", help="start from the reduced desk-scale configuration")
    p.add_argument("-v", "--verbose", action="store_true")
    for key in CONFIG_KEYS:
        p.add_argument("--" + key.replace("_", "-"), dest=key, metavar="VALUE")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        overrides = dict(DESK) if args.desk else {}
        for key in CONFIG_KEYS:
            v = getattr(args, key)
            if v is not None:
                overrides[key] = parse_value(key, v)
        cfg = load_config(args.config, **overrides)
    except (ValueError, KeyError, OSError) as exc:
        print(f"trajsel: configuration error: {exc}", file=sys.stderr)
        return 2
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(cfg.to_text())
    stages = STAGES if args.stage == "all" else (args.stage,)
    for name in stages:
        log.info("stage %s", name)
        try:
            run_stage(name, cfg, out)
        except (MissingStage, ValueError) as exc:
            print(f"trajsel: stage '{name}' failed: {exc}", file=sys.stderr)
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
