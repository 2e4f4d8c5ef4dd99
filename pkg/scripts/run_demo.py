#!/usr/bin/env python3
"""Drive the full pipeline over the generated demo corpus.

Equivalent to calling the eight CLI stages by hand; prints the report at
the end.  Use make_demo_corpus.py first (or pass a directory that
already holds run.ini).
"""

import argparse
import sys
from pathlib import Path

from storynets.cli import STAGES, main as cli_main


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("demo_dir", nargs="?", default="demo", type=Path)
    args = parser.parse_args()
    config = args.demo_dir / "run.ini"
    if not config.exists():
        sys.exit(f"no {config}; run scripts/make_demo_corpus.py {args.demo_dir} first")
    for stage in STAGES:
        print(f"== {stage}")
        code = cli_main([stage, "--config", str(config)])
        if code != 0:
            sys.exit(f"stage {stage} failed with exit code {code}")


if __name__ == "__main__":
    main()
