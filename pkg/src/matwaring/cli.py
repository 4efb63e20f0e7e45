"""``matwaring`` command line.

Every subcommand prints one JSON report on standard output.  Exit codes:
0 solved / verdict emitted / true, 2 not in image / false, 3 unresolved /
unknown verdict, 64 usage or parse error, 70 internal invariant violation.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
import time

from .arithmetic import ToleranceProfile
from .decomposer import (
    NOT_IN_IMAGE,
    SOLVED,
    UNKNOWN,
    make_instance,
    non_surjectivity_witness,
    reduce,
    solve,
    verdict,
)
from .exceptions import (
    DimensionMismatch,
    IllConditioned,
    InvariantViolation,
    NonConvergence,
    NotAPowerError,
    OutOfRegime,
    ParseError,
    Singular,
)
from .io import dumps, format_scalar, matrix_document, read_matrix
from .jordan import jordan_form
from .linalg import eye, mat_pow, matmul, norm_inf, to_approx_matrix
from .powers import is_kth_power, matrix_kth_root
from .selftest import random_matrix, run_all

EXIT_OK, EXIT_NO, EXIT_UNKNOWN, EXIT_USAGE, EXIT_INTERNAL = 0, 2, 3, 64, 70

__all__ = ["main", "build_parser"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _default_precision():
    value = os.environ.get("WARING_PRECISION")
    if value is None:
        return 256
    try:
        return int(value)
    except ValueError:
        raise SystemExit(f"WARING_PRECISION must be an integer, got {value!r}") from None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None, help="working precision in bits (default 256 or $WARING_PRECISION)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--deterministic", action="store_true", help="omit timing fields from the report")

    p = _Parser(prog="matwaring", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("verdict", parents=[common], help="surjectivity verdict for (n, k, r0)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--r0", type=int, required=True)

    s = sub.add_parser("solve", parents=[common], help="decompose a target")
    s.add_argument("--a1", required=True)
    s.add_argument("--a2", required=True)
    s.add_argument("--target", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--retries", type=int, default=64)

    s = sub.add_parser("jordan", parents=[common], help="Jordan form with similarity")
    s.add_argument("--matrix", required=True)

    s = sub.add_parser("root", parents=[common], help="matrix k-th root")
    s.add_argument("--matrix", required=True)
    s.add_argument("--k", type=int, required=True)

    s = sub.add_parser("ispower", parents=[common], help="is the matrix a k-th power")
    s.add_argument("--matrix", required=True)
    s.add_argument("--k", type=int, required=True)

    s = sub.add_parser("certify", parents=[common], help="non-surjectivity witness for x1^k + A2 x2^k")
    s.add_argument("--a2", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--trials", type=int, default=100)

    sub.add_parser("selftest", parents=[common], help="run the acceptance checks")
    return p


def _profile(args):
    bits = args.precision if args.precision is not None else _default_precision()
    if bits < 64:
        raise ValueError(f"precision must be at least 64 bits, got {bits}")
    return ToleranceProfile(precision_bits=bits, seed=args.seed)


def _report(args, profile, **fields):
    out = {"command": args.command}
    params = {"seed": args.seed, "precision": profile.precision_bits}
    params.update(fields.pop("parameters", {}))
    out["parameters"] = params
    out.update(fields)
    return out


def _cmd_verdict(args, profile):
    v = verdict(args.n, args.k, args.r0)
    report = _report(args, profile, parameters={"n": args.n, "k": args.k, "r0": args.r0}, **v.to_dict())
    for key in ("n", "k", "r0"):
        report.pop(key)
    return report, EXIT_UNKNOWN if v.tag == UNKNOWN else EXIT_OK


def _cmd_solve(args, profile):
    A1, A2, C = read_matrix(args.a1), read_matrix(args.a2), read_matrix(args.target)
    inst = make_instance(A1, A2, args.k, C, profile=profile)
    r = solve(inst, seed=args.seed, retries=args.retries)
    r0 = reduce(make_instance(A1, A2, args.k, profile=profile)).layout.r0
    params = {"n": inst.n, "k": args.k, "r0": r0, "retries": args.retries}
    fields = {"status": r.tag, "route": r.route, "attempts": r.attempts}
    if r.tag == SOLVED:
        fields["residual"] = str(r.residual)
        fields["X1"] = matrix_document(r.X1, profile.precision_bits)
        fields["X2"] = matrix_document(r.X2, profile.precision_bits)
        code = EXIT_OK
    elif r.tag == NOT_IN_IMAGE:
        fields["certificate"] = r.certificate
        code = EXIT_NO
    else:
        code = EXIT_UNKNOWN
    return _report(args, profile, parameters=params, **fields), code


def _cmd_jordan(args, profile):
    M = read_matrix(args.matrix)
    d = jordan_form(M, profile)
    blocks = [{"eigenvalue": format_scalar(lam, profile.precision_bits), "size": m} for lam, m in d.structure.blocks]
    fields = {
        "blocks": blocks,
        "r0": d.structure.r0,
        "P": matrix_document(d.P, profile.precision_bits),
        "J": matrix_document(d.J, profile.precision_bits),
        "residual": str(d.residual),
    }
    return _report(args, profile, parameters={"n": M.shape[0]}, **fields), EXIT_OK


def _cmd_root(args, profile):
    M = read_matrix(args.matrix)
    try:
        X = matrix_kth_root(M, args.k, profile)
    except NotAPowerError as exc:
        fields = {"status": "not_a_power", "reason": str(exc)}
        return _report(args, profile, parameters={"n": M.shape[0], "k": args.k}, **fields), EXIT_NO
    res = norm_inf(mat_pow(X, args.k) - to_approx_matrix(M, profile), profile)
    fields = {"status": "ok", "residual": str(res), "root": matrix_document(X, profile.precision_bits)}
    return _report(args, profile, parameters={"n": M.shape[0], "k": args.k}, **fields), EXIT_OK


def _cmd_ispower(args, profile):
    M = read_matrix(args.matrix)
    ok, witness = is_kth_power(M, args.k, profile)
    fields = {"is_kth_power": ok, "witness": list(witness) if ok else None}
    return _report(args, profile, parameters={"n": M.shape[0], "k": args.k}, **fields), EXIT_OK if ok else EXIT_NO


def _cmd_certify(args, profile):
    A2 = read_matrix(args.a2)
    n = A2.shape[0]
    red = reduce(make_instance(eye(n), A2, args.k, profile=profile))
    Ct, checker = non_surjectivity_witness(red.layout, args.k, profile)
    C = matmul(matmul(red.g_inv, Ct), red.g)
    rng = random.Random(args.seed)
    passed = sum(checker(random_matrix(rng, n, 5, integer=True)) for _ in range(args.trials))
    fields = {
        "witness": matrix_document(C, profile.precision_bits),
        "trials": args.trials,
        "obstructed": passed,
        "all_obstructed": passed == args.trials,
    }
    params = {"n": n, "k": args.k, "r0": red.layout.r0}
    code = EXIT_OK if passed == args.trials else EXIT_INTERNAL
    return _report(args, profile, parameters=params, **fields), code


def _cmd_selftest(args, profile):
    results = run_all(seed=args.seed, out=sys.stderr)
    fields = {
        "passed": all(r.passed for r in results),
        "criteria": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
    }
    return _report(args, profile, **fields), EXIT_OK if fields["passed"] else EXIT_INTERNAL


COMMANDS = {
    "verdict": _cmd_verdict,
    "solve": _cmd_solve,
    "jordan": _cmd_jordan,
    "root": _cmd_root,
    "ispower": _cmd_ispower,
    "certify": _cmd_certify,
    "selftest": _cmd_selftest,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    start = time.perf_counter()
    try:
        profile = _profile(args)
        report, code = COMMANDS[args.command](args, profile)
    except (ParseError, DimensionMismatch, OutOfRegime, Singular, ValueError, OSError) as exc:
        print(dumps({"command": args.command, "error": type(exc).__name__, "message": str(exc)}))
        return EXIT_USAGE
    except (InvariantViolation, IllConditioned, NonConvergence) as exc:
        print(dumps({"command": args.command, "error": type(exc).__name__, "message": str(exc)}))
        return EXIT_INTERNAL
    if not args.deterministic:
        report["elapsed_seconds"] = round(time.perf_counter() - start, 6)
    print(dumps(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
