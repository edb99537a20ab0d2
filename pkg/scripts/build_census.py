"""Rebuild the shipped census files from their constructions.

    python scripts/build_census.py [--check]

With --check, exit 1 if any shipped file differs from a fresh build.
"""
import argparse
import pathlib
import sys

from cuspiso.triangulation.census import CENSUS_NAMES, build_entry
from cuspiso.triangulation.fileformat import serialize_triangulation

DATA = pathlib.Path(__file__).resolve().parents[1] / "src" / "cuspiso" / "data"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--check", action="store_true")
    args = ap.parse_args(argv)
    stale = []
    for name in CENSUS_NAMES:
        text = serialize_triangulation(build_entry(name))
        path = DATA / f"{name}.tri"
        if args.check:
            if not path.exists() or path.read_text(encoding="utf-8") != text:
                stale.append(name)
        else:
            path.write_text(text, encoding="utf-8")
            print(f"wrote {path}")
    if stale:
        print("stale census files: " + ", ".join(stale))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
