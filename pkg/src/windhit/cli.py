"""Command-line surface: evaluate formulas, draw samples, run the
verification suite, and emit plot-ready data.

Every command is a pure function of its flags: identical invocations
produce byte-identical output.  Randomized commands require --seed.
Exit codes: 0 success, 1 verification-suite failure, 2 invalid arguments,
3 numerical non-convergence.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from . import laws, paths, verify
from ._backend import BACKEND_NAME, set_num_threads
from .errors import DomainError, NonConvergenceError, StepUnderflowError
from .laws import ConeSpec, OuSpec
from .numerics import SeriesTruncation
from .paths import RngStream

EXIT_OK = 0
EXIT_SUITE_FAILURE = 1
EXIT_INVALID_ARGS = 2
EXIT_NON_CONVERGENCE = 3


def parse_grid(spec: str) -> np.ndarray:
    """Parse `start:stop:count` (linear), `log:start:stop:count`
    (log-spaced), or a single number."""
    body = spec
    log = False
    if spec.startswith("log:"):
        log = True
        body = spec[len("log:"):]
    parts = body.split(":")
    try:
        if len(parts) == 1:
            return np.asarray([float(parts[0])])
        if len(parts) != 3:
            raise ValueError
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise DomainError(
            "grid must be 'start:stop:count', 'log:start:stop:count', or a "
            "single number; got %r" % spec)
    if count < 1:
        raise DomainError("grid count must be >= 1")
    if count == 1:
        return np.asarray([start])
    if log:
        if start <= 0 or stop <= 0:
            raise DomainError("log grid endpoints must be positive")
        return np.geomspace(start, stop, count)
    return np.linspace(start, stop, count)


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "%.17g" % float(v)


def _emit(args, columns, rows, meta=None):
    """Write rows as CSV (header + 17-significant-digit floats) or JSON."""
    if args.format == "json":
        body = [dict(zip(columns, [r if isinstance(r, str) else
                                   (bool(r) if isinstance(r, (bool, np.bool_))
                                    else (int(r) if isinstance(r, (int, np.integer))
                                          else float(r)))
                          for r in row])) for row in rows]
        doc = {"columns": list(columns), "rows": body}
        if meta:
            doc.update(meta)
        text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    else:
        lines = []
        if meta:
            for k in sorted(meta):
                lines.append("# %s=%s" % (k, meta[k]))
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(r if isinstance(r, str) else _fmt(r)
                                  for r in row))
        text = "\n".join(lines) + "\n"
    _write_out(args, text)


def _write_out(args, text: str):
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_density(args) -> int:
    cone = ConeSpec(args.c)
    grid = parse_grid(args.t)
    if (grid <= 0).any():
        raise DomainError("density grid times must be positive")
    if args.adaptive:
        kw = {"tail_tol": args.tail_tol}
        if args.K is not None:
            kw["K"] = args.K
        if args.N is not None:
            kw["N"] = args.N
        trunc = SeriesTruncation(**kw)
    else:
        if args.K is None or args.N is None:
            raise DomainError("fixed truncation needs --K and --N "
                              "(or pass --adaptive)")
        trunc = SeriesTruncation(K=args.K, N=args.N, adaptive=False)
    rows = []
    for t in grid:
        val = laws.exit_cone_density_full(float(t), cone, trunc)
        rows.append((t, val.value, val.negative_warning))
    _emit(args, ("t", "density", "negative_warning"), rows)
    return EXIT_OK


_LAPLACE_KINDS = {
    "one-sided": lambda x, cone: laws.laplace_one_sided(x, cone.c),
    "q-normalized": lambda x, cone: laws.q_laplace(x, cone.c),
    "inverse-time": lambda x, cone: laws.p_laplace_from_phi(x, cone.c),
    "two-sided": laws.laplace_two_sided,
    "range": laws.laplace_range,
}


def cmd_laplace(args) -> int:
    cone = ConeSpec(args.c)
    fn = _LAPLACE_KINDS[args.kind]
    grid = parse_grid(args.x)
    if (grid < 0).any():
        raise DomainError("transform arguments must be >= 0")
    rows = [(x, fn(float(x), cone)) for x in grid]
    _emit(args, ("x", "value"), rows)
    return EXIT_OK


def cmd_moments(args) -> int:
    if args.second == args.fourth:
        raise DomainError("choose exactly one of --second / --fourth")
    c = args.c
    if not c > 0:
        raise DomainError("c must be positive")
    if args.second:
        name = "second_moment"
        val = (laws.sinh_moment2_integral(c) if args.integral
               else laws.sinh_moment2(c))
    else:
        if not c < math.pi / 8:
            raise DomainError("the fourth moment is finite only for "
                              "c < pi/8")
        name = "fourth_moment"
        val = (laws.sinh_moment4_integral(c) if args.integral
               else laws.sinh_moment4(c))
    _emit(args, ("c", name), [(c, val)])
    return EXIT_OK


def _sample_values(args, law: str, n: int, rng: RngStream) -> np.ndarray:
    c = args.c
    if law in ("exit-cone", "exit-cone-one-sided"):
        cone = ConeSpec(_require(c, "--c"))
        dt = args.dt if args.dt is not None else cone.c ** 2 / 2000.0
        one = law.endswith("one-sided")
        if one:
            log_t, _ = paths.exit_cone_log_batch(cone, args.z0, dt, n, rng,
                                                 one_sided=True)
            return log_t  # heavy tail: emit log(T), which never overflows
        return paths.exit_cone_batch(cone, args.z0, dt, n, rng).values
    if law == "one-sided-hit":
        return paths.one_sided_hit_batch(_require(c, "--c"), n, rng).values
    if law == "two-sided-hit":
        cc = _require(c, "--c")
        dt = args.dt if args.dt is not None else cc ** 2 / 2000.0
        return paths.two_sided_hit_batch(cc, dt, n, rng).values
    if law == "range-exit":
        cc = _require(c, "--c")
        dt = args.dt if args.dt is not None else cc ** 2 / 2000.0
        la, _tr, _th = paths.range_exit_log_batch(cc, dt, n, rng)
        return np.exp(la)
    if law in ("winding-hit", "winding-hit-sup"):
        if args.b is None:
            raise DomainError("--b is required for %s" % law)
        sup = law.endswith("sup")
        vals = np.empty(n)
        for i in range(n):
            vals[i] = paths.sample_winding_at_indep_hit(
                args.b, args.mode, rng.advance(i), sup=sup)
        return vals
    if law == "ou-exit":
        cone = ConeSpec(_require(c, "--c"))
        ou = OuSpec(lam=args.lam, D=args.D, z0=args.z0)
        dt = args.dt if args.dt is not None else cone.c ** 2 / 2000.0
        mode = "direct" if args.mode == "direct" else "exact"
        return paths.ou_exit_batch(cone, ou, dt, n, rng, mode=mode).values
    if law == "exp-functional":
        dt = args.dt if args.dt is not None else 1e-3
        log_a, _beta = paths.exp_functional_log_batch(args.u, dt, n, rng)
        return np.exp(log_a)
    if law == "cauchy":
        return paths.cauchy_batch(args.scale, n, rng).values
    raise DomainError("unknown law %r" % law)


def _require(value, flag: str) -> float:
    if value is None:
        raise DomainError("%s is required for this law" % flag)
    return value


def cmd_sample(args) -> int:
    if args.n < 1:
        raise DomainError("--n must be >= 1")
    rng = RngStream(args.seed, 0)
    values = _sample_values(args, args.law, args.n, rng)
    name = "log_value" if args.law == "exit-cone-one-sided" else "value"
    rows = [(i, v) for i, v in enumerate(values)]
    _emit(args, ("stream_id", name), rows,
          meta={"master_seed": args.seed, "law": args.law})
    return EXIT_OK


def cmd_spitzer(args) -> int:
    grid = parse_grid(args.t)
    rows = []
    for i, t in enumerate(grid):
        rep = verify.spitzer_limit_check(float(t), args.n,
                                         RngStream(args.seed, i * 10 ** 7))
        rows.append((t, rep.n, rep.statistic, rep.threshold, rep.passed))
    _emit(args, ("t", "n", "ks_statistic", "threshold", "pass"), rows,
          meta={"master_seed": args.seed})
    return EXIT_OK


def cmd_verify(args) -> int:
    names = None if args.suite == "all" else [s.strip()
                                              for s in args.suite.split(",")]
    if names is not None:
        known = set(verify.suite_names())
        bad = [nm for nm in names if nm not in known]
        if bad:
            raise DomainError("unknown checks: %s (known: %s)"
                              % (", ".join(bad),
                                 ", ".join(verify.suite_names())))
    report = verify.run_suite(args.seed, samples=args.samples, names=names)
    report["backend"] = BACKEND_NAME
    text = json.dumps(report, indent=1, sort_keys=True) + "\n"
    _write_out(args, text)
    return EXIT_OK if report["pass"] else EXIT_SUITE_FAILURE


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_output_flags(p, formats=("csv", "json")):
    p.add_argument("--format", choices=formats, default=formats[0],
                   help="output format (default %(default)s)")
    p.add_argument("--out", metavar="FILE",
                   help="write output to FILE instead of stdout")
    p.add_argument("--threads", type=int, default=None,
                   help="kernel thread count (default: WINDHIT_THREADS "
                        "or all available); never affects values")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="windhit",
        description="Hitting-time laws of the planar Brownian winding "
                    "process: closed forms, exact-in-law samplers, and "
                    "statistical verification.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("density",
                       help="series density of the symmetric-cone exit time")
    p.add_argument("--c", type=float, required=True, help="cone half-angle")
    p.add_argument("--t", required=True,
                   help="time grid start:stop:count (prefix log: for "
                        "log spacing)")
    p.add_argument("--K", type=int, help="fixed outer truncation order")
    p.add_argument("--N", type=int, help="fixed inner truncation order")
    p.add_argument("--adaptive", action="store_true",
                   help="adaptive truncation to --tail-tol")
    p.add_argument("--tail-tol", type=float, default=1e-12)
    _add_output_flags(p)
    p.set_defaults(fn=cmd_density)

    p = sub.add_parser("laplace", help="transform evaluation on a grid")
    p.add_argument("--kind", choices=sorted(_LAPLACE_KINDS), required=True)
    p.add_argument("--c", type=float, required=True, help="cone half-angle")
    p.add_argument("--x", required=True, help="argument grid")
    _add_output_flags(p)
    p.set_defaults(fn=cmd_laplace)

    p = sub.add_parser("moments", help="closed-form exit-time moments")
    p.add_argument("--second", action="store_true")
    p.add_argument("--fourth", action="store_true")
    p.add_argument("--integral", action="store_true",
                   help="evaluate the integral form instead of the "
                        "closed form")
    p.add_argument("--c", type=float, required=True, help="cone half-angle")
    _add_output_flags(p)
    p.set_defaults(fn=cmd_moments)

    p = sub.add_parser("sample", help="draw reproducible Monte Carlo samples")
    p.add_argument("--law", required=True,
                   choices=["exit-cone", "exit-cone-one-sided",
                            "one-sided-hit", "two-sided-hit", "range-exit",
                            "winding-hit", "winding-hit-sup", "ou-exit",
                            "exp-functional", "cauchy"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--c", type=float, help="cone half-angle / barrier")
    p.add_argument("--b", type=float, help="independent-hit level")
    p.add_argument("--u", type=float, default=1.0,
                   help="horizon for exp-functional")
    p.add_argument("--scale", type=float, default=1.0, help="cauchy scale")
    p.add_argument("--z0", type=float, default=1.0, help="start modulus")
    p.add_argument("--dt", type=float, help="grid step (default c^2/2000)")
    p.add_argument("--lam", type=float, default=0.0, help="OU rate")
    p.add_argument("--D", type=float, default=0.5, help="OU diffusivity")
    p.add_argument("--mode", choices=["exact", "simulated", "direct"],
                   default="exact")
    _add_output_flags(p)
    p.set_defaults(fn=cmd_sample)

    p = sub.add_parser("spitzer",
                       help="KS distance of 2*theta_t/ln(t) from Cauchy(1)")
    p.add_argument("--t", required=True, help="horizon grid (each >= 1e4)")
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--seed", type=int, required=True)
    _add_output_flags(p)
    p.set_defaults(fn=cmd_spitzer)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--suite", default="all",
                   help="'all' or comma-separated check names")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(fn=cmd_verify)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    threads = args.threads
    if threads is None:
        env = os.environ.get("WINDHIT_THREADS", "").strip()
        threads = int(env) if env else None
    if threads is not None:
        set_num_threads(threads)
    try:
        return args.fn(args)
    except (DomainError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INVALID_ARGS
    except (NonConvergenceError, StepUnderflowError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_NON_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
