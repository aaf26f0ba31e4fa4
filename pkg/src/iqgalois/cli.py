"""Command-line front end: classify, survey, tables, verify.

Exit codes: 0 success, 1 usage or internal error, 2 invalid discriminant.
Discriminants are accepted negative (-d -20) or as |D| with --abs.
"""

import argparse
import json
import os
import random
import sys

from .classify import classify, verdict_description
from .discriminant import NotFundamental, NotImaginary, validate
from .idealgen import QuadraticInteger
from .localtest import (
    build_context,
    generic_membership,
    local_unit_image,
    subgroup_index,
    two_classification,
    two_direct_check,
)
from .quadform import class_group, compose, enumerate_reduced_forms, inverse
from .quadform import principal_form, reduce_form
from .survey import SurveyConfig, persist, scan, table1, table2, table3


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage problems; keep 2 for bad discriminants only
        return 0 if exc.code in (0, None) else 1
    if args.command is None:
        parser.print_help()
        return 1
    try:
        return args.func(args)
    except (NotFundamental, NotImaginary) as exc:
        print(f"invalid discriminant: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iqgalois",
        description="Minimality of the absolute abelian Galois group "
        "of imaginary quadratic fields",
    )
    sub = parser.add_subparsers(dest="command")

    p_cls = sub.add_parser("classify", help="classify one discriminant")
    p_cls.add_argument("-d", "--discriminant", type=int, required=True)
    p_cls.add_argument("--abs", action="store_true", help="interpret the value as |D|")
    p_cls.add_argument("--json", action="store_true", help="machine-readable output")
    p_cls.set_defaults(func=_cmd_classify)

    p_sur = sub.add_parser("survey", help="scan a range of |D| and persist rows")
    p_sur.add_argument("--min", type=int, default=3)
    p_sur.add_argument("--max", type=int, required=True)
    p_sur.add_argument("--primes", type=str, default="2,3,5,7")
    p_sur.add_argument("--mode", choices=("TABLE1", "TABLE2", "TABLE3", "RAW"), default="RAW")
    p_sur.add_argument("--out", type=str, required=True)
    p_sur.add_argument("--format", choices=("csv", "json"), default="csv")
    p_sur.add_argument("--workers", type=int, default=_default_workers())
    p_sur.add_argument("--checkpoint", type=str, default=None)
    p_sur.set_defaults(func=_cmd_survey)

    p_tab = sub.add_parser("tables", help="reproduce the splitting tables")
    p_tab.add_argument("--table", type=int, choices=(1, 2, 3), required=True)
    p_tab.add_argument("--p", type=int, default=3)
    p_tab.add_argument("--N", type=int, default=300)
    p_tab.add_argument("--B", type=int, default=100_000)
    p_tab.add_argument("--bound", type=int, default=6000, help="|D| bound for table 1")
    p_tab.add_argument("--max-p", type=int, default=7, help="largest class number for table 1")
    p_tab.add_argument("--csv", action="store_true", help="emit CSV instead of aligned text")
    p_tab.set_defaults(func=_cmd_tables)

    p_ver = sub.add_parser("verify", help="run oracle cross-check suites")
    p_ver.add_argument("--suite", choices=("forms", "local", "two", "all"), default="all")
    p_ver.add_argument("--bound", type=int, default=100_000, help="|D| sweep bound for 'two'")
    p_ver.set_defaults(func=_cmd_verify)
    return parser


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get("IQGALOIS_WORKERS", "1")))
    except ValueError:
        return 1


def _cmd_classify(args) -> int:
    value = args.discriminant
    if args.abs:
        value = -abs(value)
    record = classify(value)
    if args.json:
        print(json.dumps(record.to_dict(), indent=1, sort_keys=True))
    else:
        print(f"D = {record.discriminant}")
        print(f"h = {record.h}, class group {list(record.class_group) or [1]}")
        print(f"2-rank = {record.two_rank}")
        for p, status in record.per_prime:
            print(f"  p = {p}: {status}")
        print(f"verdict: {record.verdict}")
        print(verdict_description(record))
    return 0


def _cmd_survey(args) -> int:
    primes = tuple(int(p) for p in args.primes.split(",") if p)
    config = SurveyConfig(
        d_min=args.min,
        d_max=args.max,
        primes=primes,
        mode=args.mode,
        workers=args.workers,
        checkpoint_path=args.checkpoint,
    )
    rows = list(scan(config))
    persist(rows, args.out, args.format)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_tables(args) -> int:
    if args.table == 1:
        rows = table1(args.max_p, args.bound)
        if args.csv:
            print("p,count,nonsplit,split_discriminants")
            for p in sorted(rows):
                r = rows[p]
                print(f"{p},{r.count},{r.nonsplit}," + "|".join(map(str, r.split_discriminants)))
        else:
            print(f"{'p':>3} {'#fields':>8} {'#nonsplit':>10}  -D for split fields")
            for p in sorted(rows):
                r = rows[p]
                span = ", ".join(map(str, r.split_discriminants)) or "-"
                print(f"{p:>3} {r.count:>8} {r.nonsplit:>10}  {span}")
    elif args.table == 2:
        r = table2(args.p, args.N, args.B)
        print(f"p={r.p} N={r.n_fields} B={r.lower_bound} p*f_p={r.normalized:.3f}")
    else:
        r = table3(args.p, args.N, args.B)
        parts = []
        for tag in ("split", "inert", "ramified"):
            v = r.by_behavior[tag]
            parts.append(f"{tag}={'-' if v is None else f'{v:.3f}'}(n={r.counts[tag]})")
        print(f"p={r.p} N={r.n_fields} B={r.lower_bound} p*f_p={r.overall:.3f} " + " ".join(parts))
    return 0


def _cmd_verify(args) -> int:
    suites = ("forms", "local", "two") if args.suite == "all" else (args.suite,)
    ok = True
    for suite in suites:
        failures = _VERIFIERS[suite](args)
        status = "ok" if not failures else "FAILED"
        print(f"suite {suite}: {status}")
        for item in failures[:5]:
            print(f"  {item}")
        ok = ok and not failures
    return 0 if ok else 1


def _verify_forms(args) -> list[str]:
    """Group laws and dual-backend agreement on sampled discriminants."""
    rng = random.Random(20240)
    failures = []
    for D in (-23, -47, -84, -479, -1051, -3299):
        forms = enumerate_reduced_forms(D)
        one = principal_form(D)
        for _ in range(50):
            f, g, k = (rng.choice(forms) for _ in range(3))
            if compose(compose(f, g), k) != compose(f, compose(g, k)):
                failures.append(f"associativity broke at D={D}: {f} {g} {k}")
            if compose(f, g) != compose(g, f):
                failures.append(f"commutativity broke at D={D}: {f} {g}")
            if compose(f, one) != reduce_form(f) or compose(f, inverse(f)) != one:
                failures.append(f"identity/inverse law broke at D={D}: {f}")
        d = validate(D)
        if class_group(d, "enumerate").h != class_group(d, "bsgs").h:
            failures.append(f"backends disagree at D={D}")
    return failures


def _verify_local(args) -> list[str]:
    """Closed forms against the enumerative engine, plus quotient sizes."""
    rng = random.Random(757)
    failures = []
    cases = {
        (3, -23), (3, -7), (3, -15), (3, -39), (5, -19), (5, -23), (5, -20),
        (7, -47), (7, -4), (7, -7), (11, -7), (11, -15), (11, -11),
        (13, -4), (13, -8), (13, -39),
    }
    for p, D in sorted(cases):
        d = validate(D)
        ctx = build_context(d, p)
        if p <= 7 and subgroup_index(ctx) != p * p:
            failures.append(f"quotient index at (p={p}, D={D}) is not p^2")
        done = 0
        while done < 100:
            u = rng.randrange(-6 * p * p, 6 * p * p)
            v = rng.randrange(-6 * p * p, 6 * p * p)
            if (u - v * D) % 2:
                u += 1
            try:
                alpha = QuadraticInteger(u, v, D)
            except ValueError:
                continue
            if alpha.norm == 0 or alpha.norm % p == 0:
                continue
            done += 1
            if local_unit_image(ctx, alpha).trivial != generic_membership(ctx, alpha).trivial:
                failures.append(f"engines disagree at (p={p}, D={D}) on {alpha}")
                break
    return failures


def _verify_two(args) -> list[str]:
    """Family classification against the direct mod-8 computation."""
    from .discriminant import genus_two_rank
    from .survey import fundamental_mask

    failures = []
    bound = args.bound
    mask = fundamental_mask(3, bound + 1)
    import numpy as np

    for m in (np.nonzero(mask)[0] + 3).tolist():
        d = validate(-int(m))
        if d.num_prime_divisors != 2:
            continue
        a = two_classification(d, genus_two_rank(d))
        b = two_direct_check(d)
        if a != b:
            failures.append(f"D={-m}: families say {a}, direct check says {b}")
    return failures


_VERIFIERS = {"forms": _verify_forms, "local": _verify_local, "two": _verify_two}


if __name__ == "__main__":
    sys.exit(main())
