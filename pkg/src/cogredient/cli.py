"""Command-line front end.

Exit codes: 0 success, 1 a verification reported failures, 2 parse error,
3 invalid matrix (non-symmetric or degenerate), 4 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional

from .localring import RingContext, RingSpecError, make_ring
from .matrix import Matrix, random_symmetric_invertible
from .oracle import DEFAULT_BUDGET, BudgetExceededError, verify_classification
from .reduction import DegenerateFormError, NotSymmetricError, classify, reduce

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_BUDGET = 4


class DocumentError(ValueError):
    """A matrix document is malformed."""


# --- documents ---------------------------------------------------------------


def parse_matrix_document(doc, ring_spec: Optional[str] = None):
    """Validate a MatrixDocument (already JSON-decoded); return ``(spec, ring, Matrix)``."""
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    spec = doc.get("ring", ring_spec)
    if not isinstance(spec, str):
        raise DocumentError("missing ring spec")
    try:
        ring = make_ring(spec)
        if ring_spec is not None and make_ring(ring_spec) != ring:
            raise DocumentError(f"--ring {ring_spec} does not match document ring {spec}")
    except RingSpecError as exc:
        raise DocumentError(str(exc)) from exc
    entries = doc.get("entries")
    n = doc.get("n", len(entries) if isinstance(entries, list) else None)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DocumentError(f"invalid rank {n!r}")
    if not isinstance(entries, list) or len(entries) != n:
        raise DocumentError(f"entries must be a list of {n} rows")
    rows = []
    for row in entries:
        if not isinstance(row, list) or len(row) != n:
            raise DocumentError(f"every row must have {n} entries")
        try:
            rows.append(tuple(ring.coerce(x) for x in row))
        except RingSpecError as exc:
            raise DocumentError(str(exc)) from exc
    return spec, ring, Matrix(ring, tuple(rows))


def matrix_document(spec: str, S: Matrix) -> dict:
    return {"ring": spec, "n": S.n_rows, "entries": S.encode()}


def result_document(S: Matrix, mode: str = "reduce", with_witness: bool = True, verify: bool = False) -> dict:
    """ResultDocument for ``classify`` (form only) or ``reduce`` (form, witness, target)."""
    if mode == "classify":
        return {"form": classify(S).to_dict(), "verified": False}
    w = reduce(S)
    doc = {"form": w.form.to_dict()}
    if with_witness:
        doc["P"] = w.P.encode()
    doc["target"] = w.target.encode()
    doc["verified"] = bool(verify and w.verify(S))
    return doc


def dumps(doc) -> str:
    return json.dumps(doc) + "\n"


def _read_json(path: Optional[str]):
    try:
        if path is None or path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DocumentError(f"cannot read {path or 'stdin'}: {exc}") from exc


def _write(text: str, path: Optional[str]):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _fail(code: int, msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


# --- commands ----------------------------------------------------------------


def _process(doc, ring_spec, mode, verify=False, with_witness=True):
    """Returns ``(exit_code, result_or_message)``."""
    try:
        _, _, S = parse_matrix_document(doc, ring_spec)
        return EXIT_OK, result_document(S, mode, with_witness, verify)
    except DocumentError as exc:
        return EXIT_PARSE, str(exc)
    except (NotSymmetricError, DegenerateFormError) as exc:
        return EXIT_INVALID, str(exc)


def _process_file(args):
    path, ring_spec, mode, verify, with_witness = args
    try:
        doc = _read_json(path)
    except DocumentError as exc:
        return EXIT_PARSE, str(exc)
    return _process(doc, ring_spec, mode, verify, with_witness)


def _run_matrix_command(args, mode: str) -> int:
    verify = getattr(args, "verify", False)
    with_witness = not getattr(args, "no_witness", False)
    if args.input_dir:
        files = sorted(Path(args.input_dir).glob("*.json"))
        jobs = [(str(f), args.ring, mode, verify, with_witness) for f in files]
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(_process_file, jobs))
        else:
            results = [_process_file(j) for j in jobs]
        lines, worst = [], EXIT_OK
        for f, (code, res) in zip(files, results):
            if code == EXIT_OK:
                lines.append(json.dumps({"file": f.name, "result": res}))
            else:
                lines.append(json.dumps({"file": f.name, "error": res, "exit": code}))
                worst = worst or code
        _write("".join(line + "\n" for line in lines), args.output)
        return worst
    code, res = _process_file((args.input, args.ring, mode, verify, with_witness))
    if code != EXIT_OK:
        return _fail(code, res)
    _write(dumps(res), args.output)
    return EXIT_OK


def cmd_classify(args) -> int:
    return _run_matrix_command(args, "classify")


def cmd_reduce(args) -> int:
    return _run_matrix_command(args, "reduce")


def _ring_arg(spec: str) -> RingContext:
    try:
        return make_ring(spec)
    except RingSpecError as exc:
        raise DocumentError(str(exc)) from exc


def cmd_oracle(args) -> int:
    try:
        ring = _ring_arg(args.ring)
        report = verify_classification(ring, args.n, budget=args.budget, sample=args.sample, spec=args.ring)
    except DocumentError as exc:
        return _fail(EXIT_PARSE, str(exc))
    except BudgetExceededError as exc:
        return _fail(EXIT_BUDGET, str(exc))
    _write(dumps(report.to_dict()), args.output)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_random(args) -> int:
    try:
        ring = _ring_arg(args.ring)
    except DocumentError as exc:
        return _fail(EXIT_PARSE, str(exc))
    if args.n < 1 or args.count < 0:
        return _fail(EXIT_PARSE, "--n must be >= 1 and --count >= 0")
    rng = random.Random(args.seed)
    out = []
    for _ in range(args.count):
        S = random_symmetric_invertible(ring, args.n, rng)
        out.append(json.dumps(matrix_document(args.ring, S)) + "\n")
    _write("".join(out), args.output)
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    return EXIT_OK if run_selftest(verbose=True) else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cogredient",
        description="Classify symmetric bilinear forms over finite local rings of odd characteristic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def matrix_io(p):
        p.add_argument("--ring", help="ring spec; optional when the document names its ring")
        src = p.add_mutually_exclusive_group()
        src.add_argument("--input", help="matrix document (default: stdin)")
        src.add_argument("--input-dir", help="classify every *.json document in a directory")
        p.add_argument("--output", help="output file (default: stdout)")
        p.add_argument("--jobs", type=int, default=1, help="worker processes for --input-dir")

    p = sub.add_parser("classify", help="standard form of a matrix, without witness")
    matrix_io(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("reduce", help="standard form together with a witness P")
    matrix_io(p)
    p.add_argument("--verify", action="store_true", help="check P S P^T == target by multiplication")
    p.add_argument("--no-witness", action="store_true", help="omit P from the output")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("oracle", help="exhaustive orbit check on a tiny ring")
    p.add_argument("--ring", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--sample", type=int, help="reduce only this many seeded-random matrices")
    p.add_argument("--output")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("random", help="seeded random symmetric invertible matrices (JSON lines)")
    p.add_argument("--ring", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--output")
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("selftest", help="run the built-in invariant checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors, which is our parse-error code
        return int(exc.code or 0)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
