"""Command-line front end.

Exit status: 0 all checks pass, 1 a check failed or an internal error,
2 mathematical obstruction (``manifold`` with mu >= n+2), 3 usage error.
"""

from __future__ import annotations

import argparse
import sys
import traceback

from .pipeline import COMMANDS, run, run_many, weight_grid
from .report import batch_to_dict, emit_json

EXIT_OK, EXIT_FAIL, EXIT_OBSTRUCTION, EXIT_USAGE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _weights(text: str) -> tuple:
    try:
        w = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"weights must be comma-separated integers: {text!r}")
    if any(v <= 0 for v in w):
        raise argparse.ArgumentTypeError(f"weights must be positive: {text!r}")
    return w


def _grid(text: str) -> tuple:
    try:
        nmax, wmax = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be 'nmax,wmax': {text!r}")
    if nmax < 1 or wmax < 1:
        raise argparse.ArgumentTypeError(f"grid bounds must be positive: {text!r}")
    return nmax, wmax


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="limfrob",
                description="Exact checks for the family u1+...+un + x/(u1^w1...un^wn).")
    p.add_argument("command", choices=COMMANDS)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--weights", type=_weights, help="comma-separated positive integers")
    src.add_argument("--grid", type=_grid, metavar="NMAX,WMAX",
                     help="batch over all weight multisets with n <= NMAX, w_i <= WMAX")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for --grid")
    return p


def _exit_code(reports) -> int:
    if not all(r.passed for r in reports):
        return EXIT_FAIL
    if any(r.obstruction and r.command == "manifold" for r in reports):
        return EXIT_OBSTRUCTION
    return EXIT_OK


def render(reports, fmt: str, batch: bool) -> str:
    if fmt == "json":
        return emit_json(batch_to_dict(reports) if batch else reports[0].to_dict())
    text = "\n\n".join(r.to_text() for r in reports)
    if batch:
        ok = sum(r.passed for r in reports)
        text += f"\n\nBATCH {'PASS' if ok == len(reports) else 'FAIL'} {ok}/{len(reports)}"
    return text


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.grid:
            reports = run_many(args.command, weight_grid(*args.grid), max(1, args.jobs))
        else:
            reports = [run(args.command, args.weights)]
        out = render(reports, args.format, batch=bool(args.grid))
    except Exception:  # noqa: BLE001
        traceback.print_exc()
        return EXIT_FAIL
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    else:
        print(out)
    return _exit_code(reports)


if __name__ == "__main__":
    sys.exit(main())
