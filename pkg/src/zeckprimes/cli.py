"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 property or tolerance violation,
3 resource limit.  Reports go to stdout (or ``--output``); diagnostics and
progress go to stderr.  Flags override values from the config file named by
``--config`` or the ``ZECKPRIMES_CONFIG`` environment variable.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from typing import Callable, Sequence

import numpy as np

from . import detection, markov, numeration
from .config import Settings
from .errors import ResourceLimitError, ToleranceViolation
from .report import ExperimentReport

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2
        raise UsageError(f"{self.prog}: {message}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}")


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def _cplx(z: complex) -> dict:
    return {"re": z.real, "im": z.imag, "abs": abs(z)}


class Outcome:
    """Rows and summary produced by a handler, plus an optional failed check."""

    def __init__(self, rows=None, summary=None, violation: str | None = None, text: str | None = None):
        self.rows = rows or []
        self.summary = summary or {}
        self.violation = violation
        self.text = text


def _check(summary: dict, name: str, observed: float, threshold: float, enforce: bool) -> str | None:
    passed = observed <= threshold
    summary[f"{name}_observed"] = observed
    summary[f"{name}_threshold"] = threshold
    summary[f"{name}_pass"] = passed
    if enforce and not passed:
        return f"{name}: observed {observed:.6g} exceeds threshold {threshold:.6g}"
    return None


# handlers ------------------------------------------------------------------

def cmd_expand(args, settings) -> Outcome:
    digits = numeration.zeck_expand(args.n)
    rows = [{"index": k, "fib": numeration.fib(k)} for k in reversed(digits.indices)]
    text = f"{digits if digits.bits else ''}\n" + " ".join(str(k) for k in reversed(digits.indices))
    return Outcome(rows, {"n": args.n, "digits": str(digits) if digits.bits else "", "sz": len(rows)},
                   text=text.rstrip("\n") if digits.bits else "")


def cmd_sz(args, settings) -> Outcome:
    value = numeration.sz(args.n)
    return Outcome([{"n": args.n, "sz": value}], {"sz": value}, text=str(value))


def cmd_detect(args, settings) -> Outcome:
    n = np.arange(args.n, args.n + args.count, dtype=np.int64)
    lam = args.lam
    if args.method == "tiling":
        found = detection.tiling_classify_array(n, lam)
        direct = numeration.digits_array(n, [lam])[lam]
    else:
        func = detection.detect_lowdigits_array if args.method == "interval" else detection.detect_via_B_array
        found = func(n, lam)
        direct = numeration.v_array(n, lam)
    rows = [{"n": int(a), "detected": int(b), "direct": int(c), "agree": bool(b == c)}
            for a, b, c in zip(n, found, direct)]
    mismatches = int(np.count_nonzero(found != direct))
    summary = {"method": args.method, "lambda": lam, "mismatches": mismatches}
    violation = None
    # the tiling is only approximate, so mismatches there are data, not failures
    if args.method != "tiling" and mismatches:
        violation = f"{mismatches} detection mismatches"
    text = "\n".join(str(r["detected"]) for r in rows)
    return Outcome(rows, summary, violation, text=text)


def cmd_markov(args, settings) -> Outcome:
    if args.what == "pgf":
        v = complex(args.v, args.v_im)
        value = markov.pgf_Sn(v, args.n)
        mean, var = markov.mean_var_Sn(args.n)
        dist = markov.distribution_Sn(args.n) if args.n <= 200 else []
        rows = [{"s": s, "probability": float(p), "exact": str(p)} for s, p in enumerate(dist)]
        summary = {"pgf": _cplx(value), "mean": float(mean), "variance": float(var),
                   "mean_exact": str(mean), "variance_exact": str(var)}
        return Outcome(rows, summary)
    positions, values = args.positions, args.values
    if len(positions) != len(values):
        raise UsageError("--positions and --values need the same length")
    if args.what == "joint":
        prob = markov.joint_prob(positions, values)
        return Outcome([{"positions": " ".join(map(str, positions)), "values": " ".join(map(str, values)),
                         "probability": float(prob), "exact": str(prob)}],
                       {"probability": float(prob)})
    chain = float(markov.joint_prob(positions, values))
    if args.source == "integers":
        observed = markov.empirical_joint_integers(args.x, positions, values)
    elif args.source == "primes":
        observed = markov.empirical_joint_primes(args.x, positions, values, settings.threads)
    else:
        # positions are digit indices from 2; paths are indexed from 0
        paths = markov.sample_paths(max(positions) - 1, args.samples, args.seed)
        hit = np.ones(args.samples, dtype=bool)
        for k, b in zip(positions, values):
            hit &= paths[:, k - 2] == b
        observed = float(hit.mean())
    return Outcome([{"source": args.source, "observed": observed, "chain": chain,
                     "abs_err": abs(observed - chain)}],
                   {"abs_err": abs(observed - chain)})


def cmd_fourier(args, settings) -> Outcome:
    from .harmonic import fourier

    if args.what == "gtilde":
        lam_max = args.lambda_max or args.lam
        rows = []
        for lam in range(args.lam, lam_max + 1):
            if args.beta is None:
                rows.append({"lambda": lam, "sup_abs": fourier.gtilde_sup(lam, args.theta, args.grid)})
            else:
                row = {"lambda": lam, **{f"matrix_{k}": v for k, v in
                                         _cplx(fourier.fourier_Gtilde_matrix(lam, args.theta, args.beta)).items()}}
                if lam <= fourier.MAX_DIRECT_LAMBDA:
                    direct = fourier.fourier_Gtilde_direct(lam, args.theta, args.beta)
                    row.update({f"direct_{k}": v for k, v in _cplx(direct).items()})
                rows.append(row)
        summary = {}
        if args.beta is None and len(rows) >= 2:
            const, rate = fourier.fit_decay([r["lambda"] for r in rows], [r["sup_abs"] for r in rows])
            summary = {"fitted_C": const, "fitted_rate": rate}
        return Outcome(rows, summary)
    if args.what == "G":
        if args.h is None:
            values = fourier.fourier_G_all(args.lam, args.theta)
            rows = [{"h": h, **_cplx(complex(z))} for h, z in enumerate(values)]
        else:
            rows = [{"h": args.h, **_cplx(fourier.fourier_G(args.lam, args.theta, args.h))}]
        return Outcome(rows, {"lambda": args.lam})
    value = fourier.omega(args.theta, args.t, args.N, args.lam)
    return Outcome([{"t": args.t, **_cplx(value)}], {"omega": _cplx(value)})


def cmd_gowers(args, settings) -> Outcome:
    from .harmonic import build_g_lambda, gowers_u2_exact, gowers_u3_drop, gowers_u3_estimate, unimodular

    def f(lam):
        return unimodular(build_g_lambda(lam), args.theta)

    if args.what == "u2":
        value = gowers_u2_exact(f(args.lam))
        return Outcome([{"lambda": args.lam, "u2": value}], {"u2": value})
    if args.what == "u3":
        est, se = gowers_u3_estimate(f(args.lam), args.samples, args.seed)
        return Outcome([{"lambda": args.lam, "u3": est, "stderr": se}], {"u3": est, "stderr": se})
    lam_max = args.lambda_max
    rows = []
    for lam in range(args.lam, lam_max + 1):
        _progress(f"gowers decay: lambda={lam}")
        row = {"lambda": lam, "u2": gowers_u2_exact(f(lam))}
        if args.u3:
            row["u3"], row["u3_stderr"] = gowers_u3_estimate(f(lam), args.samples, args.seed)
        rows.append(row)
    summary = {"u2_strictly_decreasing": all(a["u2"] > b["u2"] for a, b in zip(rows, rows[1:]))}
    if args.u3:
        drops = [gowers_u3_drop(f(lam), f(lam + 1), args.samples, args.seed) for lam in range(args.lam, lam_max)]
        for row, (drop, se) in zip(rows[1:], drops):
            row["u3_drop"], row["u3_drop_stderr"] = drop, se
        summary["u3_drops_beyond_3se"] = all(d > 3 * s for d, s in drops)
    ok = summary["u2_strictly_decreasing"] and summary.get("u3_drops_beyond_3se", True)
    return Outcome(rows, summary, None if ok or not args.check else "Gowers norms did not decrease")


def cmd_discrepancy(args, settings) -> Outcome:
    from .harmonic import discrepancy

    rows = []
    for N in args.N:
        d = discrepancy.discrepancy_nalpha(N)
        bound = discrepancy.bounded_quotient_bound(N)
        rows.append({"N": N, "D_N": d, "N_D_N": N * d, "bound": bound, "holds": N * d <= bound})
    ok = all(r["holds"] for r in rows)
    return Outcome(rows, {"all_hold": ok}, None if ok else "discrepancy bound violated")


def cmd_vaaler(args, settings) -> Outcome:
    from .harmonic.vaaler import coefficient_bounds_hold, envelope_violation, vaaler

    interval = (args.alpha, args.beta)
    A, B = vaaler(interval, args.H)
    rows = [{"h": h, "a_re": A.coefficient(h).real, "a_im": A.coefficient(h).imag,
             "b_re": B.coefficient(h).real, "b_im": B.coefficient(h).imag}
            for h in range(-args.H, args.H + 1)]
    worst = envelope_violation(interval, args.H, args.grid)
    coef_ok = coefficient_bounds_hold(A, B, args.beta - args.alpha)
    summary = {"envelope_max_excess": worst, "envelope_holds": worst <= 1e-12, "coefficient_bounds_hold": coef_ok}
    ok = worst <= 1e-12 and coef_ok
    return Outcome(rows, summary, None if ok else "Vaaler envelope or coefficient bound failed")


def cmd_primes(args, settings) -> Outcome:
    from .primes import experiments as ex

    threads = settings.threads
    what = args.what
    if what in ("hist", "local-clt", "residue", "expsum", "charfn"):
        _progress(f"sieving primes up to {args.x} with {threads} thread(s)")
    if what == "hist":
        hist = ex.sz_histogram_primes(args.x, threads)
        return Outcome([{"k": k, "count": c} for k, c in sorted(hist.items())], {"pi": sum(hist.values())})
    if what == "local-clt":
        rows, summary = ex.local_clt_table(args.x, threads)
        v1 = _check(summary, "sup_rel_error", summary["sup_rel_error"], settings.clt_sup_tol, args.check)
        v2 = _check(summary, "modal_rel_error", summary["modal_rel_error"], settings.clt_modal_tol, args.check)
        return Outcome(rows, summary, v1 or v2)
    if what == "residue":
        counts = ex.residue_counts(args.x, args.m, threads)
        total = sum(counts.values())
        rows = [{"class": a, "count": c, "share": c / total} for a, c in counts.items()]
        summary = {"pi": total}
        dev = max(abs(c / total - 1 / args.m) for c in counts.values())
        return Outcome(rows, summary, _check(summary, "deviation", dev, settings.residue_tol, args.check))
    if what == "min-sz":
        rows = []
        for k in range(args.k_min, args.k_max + 1):
            p = ex.smallest_prime_with_sz(k, args.index_bound)
            rows.append({"k": k, "prime": p if p is not None else "",
                         "sz": numeration.sz(p) if p is not None else ""})
        missing = [r["k"] for r in rows if r["prime"] == ""]
        return Outcome(rows, {"missing": missing})
    if what == "fib-scan":
        rows = [{"index": k, "certainty": c, "digits": len(str(f))} for k, f, c in ex.fibonacci_prime_rows(args.max_index)]
        return Outcome(rows, {"indices": [r["index"] for r in rows]})
    if what == "expsum":
        funcs: dict[str, Callable[[float, int, int], complex]] = {
            "p": ex.exp_sum_primes, "sz": ex.exp_sum_sz_primes, "mangoldt": ex.exp_sum_sz_mangoldt}
        rows = []
        for theta in args.theta:
            value = funcs[args.kind](theta, args.x, threads)
            row = {"theta": theta, **_cplx(value)}
            if args.kind == "p" and theta != round(theta):
                row["shape"] = ex.expsum_shape(theta, args.x)
                row["ratio"] = abs(value) / row["shape"]
            rows.append(row)
        total = sum(ex.sz_histogram_primes(args.x, threads).values())
        return Outcome(rows, {"kind": args.kind, "pi": total})
    # charfn
    rows = []
    for t in args.t:
        full = ex.char_fn_primes(t, args.x, None, threads)
        row = {"t": t, "full_re": full.real, "full_im": full.imag}
        if args.nu is not None:
            trunc = ex.char_fn_primes(t, args.x, args.nu, threads)
            chain = ex.char_fn_chain(t, args.x, args.nu)
            row.update({"truncated_re": trunc.real, "truncated_im": trunc.imag,
                        "chain_re": chain.real, "chain_im": chain.imag,
                        "full_vs_truncated": abs(full - trunc), "truncated_vs_chain": abs(trunc - chain)})
        row["gaussian"] = math.exp(-t * t / 2)
        rows.append(row)
    return Outcome(rows, {"nu": args.nu})


def cmd_lod(args, settings) -> Outcome:
    from .primes import experiments as ex

    value = ex.lod_statistic(args.x, args.eps, args.theta)
    D = int(math.floor(args.x ** (1 - args.eps) + 1e-9))
    scale = args.x * math.log(args.x) ** 2.75
    return Outcome([{"x": args.x, "eps": args.eps, "theta": args.theta, "D": D, "statistic": value,
                     "normalised": value / scale}], {"statistic": value, "normalised": value / scale})


# parser ---------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["text", "csv", "json"], default=None,
                        help="output format (default: text for expand/sz/detect, csv otherwise)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=None, help="worker threads for prime sieving")
    common.add_argument("--output", default=None, help="write the report to this file")
    common.add_argument("--config", default=None, help="key=value config file")
    common.add_argument("--check", action="store_true", help="exit 2 when a tolerance check fails")
    common.add_argument("--no-timing", action="store_true", help="omit wall-clock fields")
    common.add_argument("--quiet", action="store_true", help="suppress progress messages")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="zeckprimes", description="Zeckendorf digits, golden-ratio dynamics and primes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("expand", parents=[common], help="Zeckendorf expansion of n")
    p.add_argument("n", type=_nonneg_int)
    p.set_defaults(handler=cmd_expand, text_default=True)

    p = sub.add_parser("sz", parents=[common], help="Zeckendorf digit sum of n")
    p.add_argument("n", type=_nonneg_int)
    p.set_defaults(handler=cmd_sz, text_default=True)

    p = sub.add_parser("detect", parents=[common], help="detect low digits from n*phi")
    p.add_argument("--n", type=_nonneg_int, required=True)
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--method", choices=["interval", "parallelogram", "tiling"], default="interval")
    p.add_argument("--count", type=int, default=1, help="also detect n+1 .. n+count-1")
    p.set_defaults(handler=cmd_detect, text_default=True)

    p = sub.add_parser("markov", help="digit Markov chain")
    msub = p.add_subparsers(dest="what", required=True, parser_class=_Parser)
    q = msub.add_parser("pgf", parents=[common])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--v", type=float, default=1.0)
    q.add_argument("--v-im", type=float, default=0.0)
    for name in ("joint", "empirical"):
        q = msub.add_parser(name, parents=[common])
        q.add_argument("--positions", type=_int_list, required=True)
        q.add_argument("--values", type=_int_list, required=True)
        if name == "empirical":
            q.add_argument("--x", type=int, default=10**6)
            q.add_argument("--source", choices=["integers", "primes", "chain"], default="integers")
            q.add_argument("--samples", type=int, default=100_000)
    p.set_defaults(handler=cmd_markov)

    p = sub.add_parser("fourier", help="Zeckendorf Fourier sums")
    fsub = p.add_subparsers(dest="what", required=True, parser_class=_Parser)
    q = fsub.add_parser("gtilde", parents=[common])
    q.add_argument("--lambda", dest="lam", type=int, required=True)
    q.add_argument("--lambda-max", type=int, default=None)
    q.add_argument("--theta", type=float, default=0.5)
    q.add_argument("--beta", type=float, default=None, help="omit to take the sup over a beta grid")
    q.add_argument("--grid", type=int, default=1024)
    q = fsub.add_parser("G", parents=[common])
    q.add_argument("--lambda", dest="lam", type=int, required=True)
    q.add_argument("--theta", type=float, default=0.5)
    q.add_argument("--h", type=int, default=None)
    q = fsub.add_parser("omega", parents=[common])
    q.add_argument("--lambda", dest="lam", type=int, required=True)
    q.add_argument("--theta", type=float, default=0.5)
    q.add_argument("--t", type=int, required=True)
    q.add_argument("--N", type=int, default=10**5)
    p.set_defaults(handler=cmd_fourier)

    p = sub.add_parser("gowers", help="Gowers norms of e(theta g_lambda)")
    gsub = p.add_subparsers(dest="what", required=True, parser_class=_Parser)
    for name in ("u2", "u3", "decay"):
        q = gsub.add_parser(name, parents=[common])
        q.add_argument("--lambda", dest="lam", type=int, required=name != "decay", default=4)
        q.add_argument("--theta", type=float, default=0.5)
        q.add_argument("--samples", type=int, default=256)
        if name == "decay":
            q.add_argument("--lambda-max", type=int, default=14)
            q.add_argument("--u3", action="store_true", help="include U3 estimates")
    p.set_defaults(handler=cmd_gowers)

    p = sub.add_parser("discrepancy", parents=[common], help="discrepancy of n*phi mod 1")
    p.add_argument("--N", type=_int_list, default=[10**3, 10**4, 10**5, 10**6])
    p.set_defaults(handler=cmd_discrepancy)

    p = sub.add_parser("vaaler", parents=[common], help="Vaaler polynomials for an interval")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--H", type=int, default=16)
    p.add_argument("--grid", type=int, default=10_000)
    p.set_defaults(handler=cmd_vaaler)

    p = sub.add_parser("primes", help="digit statistics of primes")
    psub = p.add_subparsers(dest="what", required=True, parser_class=_Parser)
    for name in ("hist", "local-clt", "residue", "expsum", "charfn"):
        q = psub.add_parser(name, parents=[common])
        q.add_argument("--x", type=int, required=True)
        if name == "residue":
            q.add_argument("--m", type=int, required=True)
        if name == "expsum":
            q.add_argument("--theta", type=_float_list, required=True)
            q.add_argument("--kind", choices=["p", "sz", "mangoldt"], default="sz")
        if name == "charfn":
            q.add_argument("--t", type=_float_list, default=[0.0, 0.5, 1.0, 1.5, 2.0])
            q.add_argument("--nu", type=float, default=None)
    q = psub.add_parser("min-sz", parents=[common])
    q.add_argument("--k-min", type=int, default=1)
    q.add_argument("--k-max", type=int, default=15)
    q.add_argument("--index-bound", type=int, default=None)
    q = psub.add_parser("fib-scan", parents=[common])
    q.add_argument("--max-index", type=int, default=450)
    p.set_defaults(handler=cmd_primes)

    p = sub.add_parser("lod", parents=[common], help="level-of-distribution statistic")
    p.add_argument("--x", type=int, default=10**4)
    p.add_argument("--eps", type=float, default=1 / 3)
    p.add_argument("--theta", type=float, default=0.5)
    p.set_defaults(handler=cmd_lod)
    return parser


# driver ---------------------------------------------------------------------

_QUIET = [False]


def _progress(message: str) -> None:
    if not _QUIET[0]:
        print(f"[zeckprimes] {message}", file=sys.stderr, flush=True)


def _segment_progress(done: int, total: int) -> None:
    step = max(1, total // 10)
    if done == total or done % step == 0:
        _progress(f"segments {done}/{total}")


def _params(args) -> dict:
    skip = {"handler", "text_default", "format", "output", "config", "quiet", "no_timing", "seed",
            "command", "what"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def run(argv: Sequence[str] | None = None) -> int:
    from .primes import sieve

    try:
        args = build_parser().parse_args(argv)
        settings = Settings.load(args.config)
        if args.threads is not None:
            if args.threads < 1:
                raise UsageError("--threads must be at least 1")
            settings.threads = args.threads
        args.threads = settings.threads
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as exc:
        print(f"zeckprimes: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    _QUIET[0] = args.quiet
    sieve.progress_hook = None if args.quiet else _segment_progress
    sieve.memory_budget = settings.memory_budget
    start = time.perf_counter()
    try:
        outcome = args.handler(args, settings)
    except UsageError as exc:
        print(f"zeckprimes: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"zeckprimes: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ToleranceViolation as exc:
        print(f"zeckprimes: violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (ValueError, OverflowError) as exc:
        print(f"zeckprimes: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        sieve.progress_hook = None
        sieve.memory_budget = sieve.DEFAULT_MEMORY_BUDGET
    elapsed = time.perf_counter() - start

    fmt = args.format or ("text" if getattr(args, "text_default", False) else "csv")
    name = args.command + (f" {args.what}" if getattr(args, "what", None) else "")
    report = ExperimentReport(name, _params(args), args.seed, outcome.rows, outcome.summary,
                              None if args.no_timing else round(elapsed, 3))
    if fmt == "text":
        body = (outcome.text if outcome.text is not None else report.to_csv(not args.no_timing).rstrip("\n")) + "\n"
    else:
        body = report.render(fmt, not args.no_timing)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)
    if outcome.violation:
        print(f"zeckprimes: violation: {outcome.violation}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
