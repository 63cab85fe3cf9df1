"""Command-line front end.

Exit codes: 0 when everything evaluated/passed, 1 when a scan or identity
suite reported failures (or a fit came back unstable), 2 for usage errors.
"""

from __future__ import annotations

import argparse
import sys

from .bernoulli import bernoulli_exact, bernoulli_mod
from .compositions import parse_composition, stuffle
from .congruences import (
    STATUS_FAIL,
    InsufficientPrimes,
    fit_coefficient,
    fit_families,
    reports_to_csv,
    reports_to_json,
    run_scan,
)
from .exactnum import is_prime, primes_in_range
from .identities import probe_thm31_random, run_thm21_suite, run_thm31_suite
from .mhs import mhs_exact, mhs_mod, weighted_sum2, weighted_sum3

__all__ = ["build_parser", "main", "parse_primes"]


def parse_primes(spec: str) -> list[int]:
    """Expand a prime spec: either an inclusive range "a..b" or a comma
    list "5,7,11" of odd primes.  Ranges silently drop anything below 3;
    explicit lists are validated entry by entry."""
    spec = spec.strip()
    if ".." in spec:
        lo_text, _, hi_text = spec.partition("..")
        try:
            lo, hi = int(lo_text), int(hi_text)
        except ValueError:
            raise ValueError(f"bad prime range {spec!r}; expected a..b") from None
        primes = [p for p in primes_in_range(lo, hi) if p >= 3]
    else:
        primes = []
        for token in spec.split(","):
            token = token.strip()
            if not token:
                continue
            try:
                v = int(token)
            except ValueError:
                raise ValueError(f"bad prime {token!r}") from None
            if v < 3 or not is_prime(v):
                raise ValueError(f"{v} is not an odd prime")
            primes.append(v)
    if not primes:
        raise ValueError(f"no odd primes selected by {spec!r}")
    return sorted(set(primes))


def _cmd_eval(args: argparse.Namespace) -> int:
    chosen = [
        (kind, text)
        for kind, text in (("mhs", args.mhs), ("wsum2", args.wsum2), ("wsum3", args.wsum3))
        if text is not None
    ]
    if len(chosen) != 1:
        args.parser.error("give exactly one of --mhs, --wsum2, --wsum3")
    if (args.n is None) == (args.prime is None):
        args.parser.error("give exactly one of --n or --prime")
    kind, text = chosen[0]
    try:
        parts = parse_composition(text)
        if kind == "mhs":
            if args.n is not None:
                out = mhs_exact(parts, args.n)
            else:
                out = mhs_mod(parts, args.prime, args.e)
        elif kind == "wsum2":
            if len(parts) != 3:
                raise ValueError("--wsum2 needs exactly three exponents")
            s1, s2, s3 = parts
            if args.n is not None:
                out = weighted_sum2(s1, s2, s3, n=args.n)
            else:
                out = weighted_sum2(s1, s2, s3, p=args.prime, e=args.e)
        else:
            if len(parts) != 4:
                raise ValueError("--wsum3 needs exactly four exponents")
            s1, s2, s3, s4 = parts
            if args.n is not None:
                out = weighted_sum3(s1, s2, s3, s4, n=args.n)
            else:
                out = weighted_sum3(s1, s2, s3, s4, p=args.prime, e=args.e)
    except (ValueError, ArithmeticError) as exc:
        args.parser.error(str(exc))
    print(out)
    return 0


def _cmd_stuffle(args: argparse.Namespace) -> int:
    try:
        a = parse_composition(args.a)
        b = parse_composition(args.b)
    except ValueError as exc:
        args.parser.error(str(exc))
    print(stuffle(a, b))
    return 0


def _cmd_bernoulli(args: argparse.Namespace) -> int:
    try:
        if args.prime is None:
            print(bernoulli_exact(args.n))
        else:
            print(bernoulli_mod(args.n, args.prime, args.e))
    except (ValueError, ArithmeticError) as exc:
        args.parser.error(str(exc))
    return 0


def _cmd_identity(args: argparse.Namespace) -> int:
    reports = []
    try:
        if args.thm == "2.1":
            smax = args.smax if args.smax is not None else 4
            nmax = args.nmax if args.nmax is not None else 40
            reports.append(run_thm21_suite(smax=smax, nmax=nmax))
        else:
            smax = args.smax if args.smax is not None else 3
            if args.at_primes:
                nvalues = tuple(p - 1 for p in parse_primes(args.at_primes))
            else:
                nvalues = (4, 6, 10, 12)
            reports.append(run_thm31_suite(smax=smax, nvalues=nvalues))
            if args.probes:
                nmax = args.nmax if args.nmax is not None else 40
                reports.append(
                    probe_thm31_random(
                        args.probes, smax=smax, nmax=nmax, seed=args.seed
                    )
                )
    except ValueError as exc:
        args.parser.error(str(exc))
    total_failures = 0
    for rep in reports:
        total_failures += len(rep.failures)
        print(f"{rep.identity}: {rep.points} instances, {len(rep.failures)} failures")
        for inst in rep.failures[:5]:
            print(
                f"  exponents={inst.exponents} n={inst.n}"
                f" lhs={inst.lhs} rhs={inst.rhs}"
            )
    return 1 if total_failures else 0


def _cmd_scan(args: argparse.Namespace) -> int:
    try:
        primes = parse_primes(args.primes)
        reports = run_scan(args.check, primes, jobs=args.jobs)
    except ValueError as exc:
        args.parser.error(str(exc))
    if args.format == "csv":
        sys.stdout.write(reports_to_csv(reports))
    elif args.format == "json":
        sys.stdout.write(reports_to_json(reports))
    else:
        tally = {"pass": 0, "fail": 0, "skipped": 0}
        for r in reports:
            tally["fail" if r.status == STATUS_FAIL else
                  "pass" if r.status == "pass" else "skipped"] += 1
            line = f"{r.check_id}  p={r.p}  {r.status}"
            if r.status == STATUS_FAIL:
                line += f"  lhs={r.lhs}  rhs={r.rhs}"
            if r.note:
                line += f"  [{r.note}]"
            print(line)
        print(
            f"{len(reports)} primes: {tally['pass']} pass,"
            f" {tally['fail']} fail, {tally['skipped']} skipped"
        )
    return 1 if any(r.status == STATUS_FAIL for r in reports) else 0


def _cmd_fit(args: argparse.Namespace) -> int:
    families = fit_families()
    fam = families.get(args.family)
    if fam is None:
        args.parser.error(
            f"unknown family {args.family!r}; known: {', '.join(sorted(families))}"
        )
    try:
        primes = parse_primes(args.primes)
        w = args.w if args.w is not None else fam.w
        result = fit_coefficient(fam.lhs, w, primes, t=fam.t, e=fam.e, name=fam.name)
    except (InsufficientPrimes, ValueError) as exc:
        args.parser.error(str(exc))
    if result.coefficient is None:
        print("unstable")
        return 1
    print(result.coefficient)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mhslab",
        description=(
            "Multiple harmonic sums: exact values, stuffle products, Bernoulli"
            " numbers, identity suites, congruence scans and coefficient fits."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    ev = sub.add_parser("eval", help="evaluate a sum exactly or in Z/p^e")
    ev.add_argument("--mhs", metavar="PARTS", help='composition, e.g. "(1,2)"')
    ev.add_argument(
        "--wsum2", metavar="S1,S2,S3", help="sum of H^(s1) H^(s3) / j^s2"
    )
    ev.add_argument(
        "--wsum3", metavar="S1,S2,S3,S4", help="sum of H^(s1) H^(s3) H^(s4) / j^s2"
    )
    ev.add_argument("--n", type=int, help="upper limit; exact rational output")
    ev.add_argument(
        "--prime", type=int, help="odd prime; evaluates at n = p-1 in Z/p^e"
    )
    ev.add_argument("--e", type=int, default=1, choices=(1, 2, 3))
    ev.set_defaults(func=_cmd_eval, parser=ev)

    st = sub.add_parser("stuffle", help="expand a product of two sums")
    st.add_argument("--a", required=True, metavar="PARTS")
    st.add_argument("--b", required=True, metavar="PARTS")
    st.set_defaults(func=_cmd_stuffle, parser=st)

    be = sub.add_parser("bernoulli", help="Bernoulli number, exact or mod p^e")
    be.add_argument("--n", required=True, type=int)
    be.add_argument("--prime", type=int)
    be.add_argument("--e", type=int, default=1, choices=(1, 2, 3))
    be.set_defaults(func=_cmd_bernoulli, parser=be)

    idn = sub.add_parser("identity", help="verify a polynomial identity suite")
    idn.add_argument("--thm", required=True, choices=("2.1", "3.1"))
    idn.add_argument("--smax", type=int, help="largest exponent per slot")
    idn.add_argument("--nmax", type=int, help="largest n (2.1 grid / 3.1 probes)")
    idn.add_argument(
        "--at-primes",
        dest="at_primes",
        metavar="P1,P2,...",
        help="for 3.1: evaluate at n = p-1 for each listed prime",
    )
    idn.add_argument(
        "--probes", type=int, default=0, help="extra random points for 3.1"
    )
    idn.add_argument("--seed", type=int, default=1729)
    idn.set_defaults(func=_cmd_identity, parser=idn)

    sc = sub.add_parser("scan", help="run a congruence check over primes")
    sc.add_argument("--check", required=True, metavar="CHECK_ID")
    sc.add_argument("--primes", required=True, metavar="A..B|P1,P2,...")
    sc.add_argument("--format", choices=("text", "csv", "json"), default="text")
    sc.add_argument("--jobs", type=int, help="worker processes (default: MHSLAB_THREADS or CPU count)")
    sc.set_defaults(func=_cmd_scan, parser=sc)

    ft = sub.add_parser("fit", help="fit c in lhs = c p^t B_{p-w} across primes")
    ft.add_argument("--family", required=True)
    ft.add_argument("--w", type=int, help="override the family's Bernoulli offset")
    ft.add_argument("--primes", required=True, metavar="A..B|P1,P2,...")
    ft.set_defaults(func=_cmd_fit, parser=ft)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
