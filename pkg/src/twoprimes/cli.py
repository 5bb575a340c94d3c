"""Command-line entry point: one subcommand per operation, JSON/CSV/JSONL artifacts plus a run manifest."""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import warnings
from datetime import datetime, timezone
from importlib import resources

from . import SCHEMA_VERSION, __version__
from .errors import TwoPrimesError, ValidationError
from .interval import RealInterval, check_precision

USAGE_EXIT = 2


# ------------------------------------------------------------- plumbing
def _int(text: str) -> int:
    """Integer that also accepts 1e7-style input."""
    try:
        return int(text)
    except ValueError:
        v = float(text)
        if v != int(v):
            raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
        return int(v)


def _int_list(text: str) -> list[int]:
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if ":" in part:
            a, b = part.split(":")
            out.extend(range(_int(a), _int(b) + 1))
        elif part:
            out.append(_int(part))
    return out


def _float_list(text: str) -> list[float]:
    return [float(p) for p in str(text).split(",") if p.strip()]


def _cache_id() -> str:
    data = resources.files("twoprimes.data").joinpath("mersenne.txt").read_bytes()
    return "mersenne.txt:sha256:" + hashlib.sha256(data).hexdigest()[:16]


def _iv(iv: RealInterval, places: int = 20) -> dict:
    return iv.to_json(places)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=str) + "\n"


class Run:
    """Collects artifacts for one invocation and writes them under ``out``."""

    def __init__(self, args):
        self.args = args
        self.outputs: list[str] = []
        os.makedirs(args.out, exist_ok=True)

    def path(self, suffix: str) -> str:
        return os.path.join(self.args.out, f"{self.args.command}{suffix}")

    def _write(self, suffix: str, text: str) -> str:
        p = self.path(suffix)
        with open(p, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        self.outputs.append(p)
        return p

    def json(self, payload: dict, suffix: str = ".json") -> dict:
        body = {"schema_version": SCHEMA_VERSION, "subcommand": self.args.command, **payload}
        self._write(suffix, _dump(body))
        return body

    def csv(self, rows: list[dict], suffix: str = ".csv") -> None:
        if not rows:
            self._write(suffix, "")
            return
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        self._write(suffix, buf.getvalue())

    def jsonl(self, rows: list[dict], suffix: str = ".jsonl") -> None:
        self._write(suffix, "".join(json.dumps(r, sort_keys=True) + "\n" for r in rows))


def _manifest(args, params: dict, started: str, status: str, code: int, error: dict | None, outputs) -> None:
    body = {
        "schema_version": SCHEMA_VERSION,
        "subcommand": args.command,
        "parameters": params,
        "precision": args.precision,
        "versions": {"twoprimes": __version__, "schema": SCHEMA_VERSION, "factor_cache": _cache_id()},
        "started": started,
        "finished": datetime.now(timezone.utc).isoformat(),
        "status": status,
        "exit_code": code,
        "error": error,
        "outputs": list(outputs),
    }
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, f"{args.command}.manifest.json"), "w", encoding="utf-8") as fh:
        fh.write(_dump(body))


def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise _UsageError(f"{args.command}: missing required option(s) {flags}")


class _UsageError(Exception):
    pass


# ------------------------------------------------------------ handlers
def cmd_s0(args, run: Run):
    from .s0calc import compute_s0, parsell_from_parts, parsell_s0, s0_from_parts, validate_config

    if args.lambda1 is not None:
        _need(args, "lambda2", "mus")
        cfg = validate_config({"lambda1": args.lambda1, "lambda2": args.lambda2, "mus": args.mus,
                               "ratio1": args.ratio1, "ratio2": args.ratio2, "eta": args.eta or "0.1",
                               "epsilon": args.epsilon, "ratio_class": args.ratio_class}, mode="s0")
        res = (parsell_s0(cfg, args.parsell, args.precision) if args.parsell
               else compute_s0(cfg, args.B, args.precision))
        payload = {"config": cfg.to_json(), "result": res.to_json()}
    else:
        _need(args, "q1", "q2", "abs_l1l2", "eta")
        if args.parsell:
            res = parsell_from_parts(args.q1, args.q2, args.abs_l1l2, args.eta, args.parsell, args.precision)
        else:
            _need(args, "ratio_class")
            res = s0_from_parts(args.q1, args.q2, args.abs_l1l2, args.eta, args.ratio_class,
                                args.B, args.precision)
        payload = {"inputs": {"q1": args.q1, "q2": args.q2, "abs_l1l2": args.abs_l1l2, "eta": args.eta,
                              "class": args.ratio_class}, "result": res.to_json()}
    return run.json(payload)


def cmd_constants(args, run: Run):
    from .s0calc import big_C, printed_C, rounded
    from .singular import constants_table, default_c0

    rows = constants_table(default_c0(args.precision), args.precision)
    up = {"C": printed_C("chen"), "C_conjectural": printed_C("conjectural")}
    near = {"C": rounded(big_C("chen", precision=args.precision), 10),
            "C_conjectural": rounded(big_C("conjectural", precision=args.precision), 10)}
    run.csv(rows)
    return run.json({"constants": rows, "printed_upper_10": up, "rounded_nearest_10": near})


def cmd_singular(args, run: Run):
    from .singular import bound_comparison, crossover_scan, default_c0, divisor_chain_scan

    c0 = default_c0(args.precision)
    payload = {}
    if args.n is not None:
        r = bound_comparison(args.n, c0)
        payload["comparison"] = {k: (_iv(v) if isinstance(v, RealInterval) else v) for k, v in r.items()}
    if args.chain is not None:
        payload["chain"] = divisor_chain_scan(args.chain, c0)
    if args.crossover is not None:
        lo, hi = args.crossover
        payload["crossover"] = crossover_scan(lo, hi, c0)
    if not payload:
        raise _UsageError("singular: give --n, --chain or --crossover")
    return run.json(payload)


def cmd_c0(args, run: Run):
    from .singular import compute_c0

    c0 = compute_c0(args.prime_bound, args.precision, args.tail)
    return run.json({"prime_bound": args.prime_bound, "tail": args.tail, "c0": _iv(c0, args.precision)})


def cmd_rkk(args, run: Run):
    from .powers2 import rep_table

    _need(args, "k", "L")
    t = rep_table(args.k, args.L)
    run.csv([{"m": m, "count": c} for m, c in sorted(t.counts.items())])
    return run.json({"k": t.k, "L": t.L, "total": t.total, "support": len(t.counts),
                     "zero_count": t[0], "table": json.loads(t.to_json())})


def cmd_skl(args, run: Run):
    from .powers2 import s1_closed, s_kl
    from .singular import default_c0

    _need(args, "k", "L")
    c0 = default_c0(args.precision)
    out = {"k": args.k, "L": args.L, "S": _iv(s_kl(args.k, args.L, c0))}
    if args.k == 1 and args.L >= 2:
        out["S_closed_form"] = _iv(s1_closed(args.L, c0))
    return run.json(out)


def cmd_a_estimate(args, run: Run):
    from .powers2 import a1_curve, a_estimate
    from .singular import default_c0

    c0 = default_c0(args.precision)
    Ls = args.L_values or list(range(2, 31))
    if args.k == 1:
        rows = a1_curve(Ls, c0)
    else:
        rows = []
        for L in Ls:
            a = a_estimate(args.k, L, c0)
            lo, hi = a.decimal_bounds(15)
            rows.append({"L": L, "a_lo": lo, "a_hi": hi})
    run.csv(rows)
    return run.json({"k": args.k, "rows": rows})


def cmd_gmeasure(args, run: Run):
    from .levelset import level_set_measure

    _need(args, "L", "nu")
    return run.json(level_set_measure(args.L, args.nu, args.tol).to_json())


def cmd_decay(args, run: Run):
    from .levelset import decay_report

    _need(args, "nu")
    Ls = args.L_values or list(range(8, 17))
    rep = decay_report(args.nu, Ls, args.tol)
    run.csv(rep["rows"])
    return run.json(rep)


def cmd_dissect(args, run: Run):
    from .expsums import dissect

    _need(args, "x")
    return run.json(dissect(args.x, args.epsilon, args.mu_norm).to_json())


def cmd_kernel_check(args, run: Run):
    from .expsums import k_hat_check

    ts = args.t or [0.0]
    etas = args.eta_grid or [1.0]
    rows = []
    for eta in etas:
        for t in ts:
            r = k_hat_check(t, eta, args.T, args.tol)
            r["abs_error"] = abs(r["value"] - r["exact"])
            r["within"] = r["abs_error"] <= 1e-6 + r["tail_bound"]
            rows.append(r)
    run.csv(rows)
    return run.json({"rows": rows})


def cmd_major_arc(args, run: Run):
    from .majorarc import j_lower_bound, j_side_conditions, major_arc_j, major_arc_j_quad

    _need(args, "x", "lambda1", "lambda2")
    l1, l2 = float(_coef(args.lambda1)), float(_coef(args.lambda2))
    eta = float(_coef(args.eta or "1"))
    eps = float(args.epsilon)
    rows = []
    for u in args.u or [0.0]:
        j = major_arc_j(u, args.x, eta, l1, l2, eps)
        rows.append({"u": u, "J": j, "J_quad": major_arc_j_quad(u, args.x, eta, l1, l2, eps),
                     "lower_bound": j_lower_bound(args.x, eta, l1, l2, eps),
                     "side_conditions": j_side_conditions(u, args.x, eta, l1, l2, eps)})
    run.csv(rows)
    # constant in the major-arc main term, eta^2 X times this
    c1 = (1 - 4 * l1 * eps) / (2 * abs(l1 * l2))
    return run.json({"rows": rows, "main_term_constant": c1})


def cmd_integrate(args, run: Run):
    from .majorarc import integrate_i

    _need(args, "x", "lambda1", "lambda2", "mus")
    mus = [float(_coef(m)) for m in _split(args.mus)]
    r = integrate_i(args.region, float(_coef(args.lambda1)), float(_coef(args.lambda2)), mus,
                    float(_coef(args.gamma)), float(_coef(args.eta or "1")), args.x, float(args.epsilon),
                    s=args.s, quad_tol=args.tol, side=args.side, L=args.L)
    return run.json(r)


def cmd_selberg(args, run: Run):
    from .ntcore import selberg_integral

    _need(args, "x", "h")
    v = selberg_integral(args.x, args.h, float(args.epsilon))
    return run.json({"X": args.x, "h": args.h, "epsilon": float(args.epsilon), "integral": v})


def cmd_twin(args, run: Run):
    from .ntcore import ScaleParams, twin_count_Z
    from .singular import default_c0, s_full, sprime_of

    _need(args, "x", "n")
    params = ScaleParams(args.x, float(args.epsilon))
    z = twin_count_Z(params, args.n, weighted=not args.unweighted)
    out = {"X": args.x, "epsilon": float(args.epsilon), "n": args.n, "weighted": not args.unweighted, "Z": z}
    sv = sprime_of(args.n, args.precision)
    if sv.complete:
        c0 = default_c0(args.precision)
        out["singular_series"] = _iv(2 * c0 * sv.sprime_interval)
    return run.json(out)


def _search_cfg(args):
    from .s0calc import validate_config

    _need(args, "lambda1", "lambda2", "mus")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return validate_config({"lambda1": args.lambda1, "lambda2": args.lambda2, "mus": args.mus,
                                "ratio1": args.ratio1, "ratio2": args.ratio2, "gamma": args.gamma,
                                "eta": args.eta or "0.1", "epsilon": args.epsilon}, mode="search")


def cmd_search(args, run: Run):
    from .search import find_solutions

    _need(args, "x")
    cfg = _search_cfg(args)
    res = find_solutions(cfg, args.x, args.s, args.limit, args.L, args.precision, args.jobs)
    run.jsonl([r.to_json() for r in res.solutions])
    return run.json({"config": cfg.to_json(), **res.to_json()})


def cmd_count(args, run: Run):
    from .search import count_n

    _need(args, "x")
    cfg = _search_cfg(args)
    return run.json({"config": cfg.to_json(),
                     **count_n(cfg, args.x, args.s, args.L, args.precision, args.jobs)})


def cmd_density(args, run: Run):
    from .search import density_report

    cfg = _search_cfg(args)
    grid = args.x_grid or [100.0, 1000.0, 10000.0]
    rows = density_report(cfg, grid, args.s, args.L, args.precision, args.jobs)
    run.csv(rows)
    return run.json({"config": cfg.to_json(), "rows": rows})


def cmd_paper_examples(args, run: Run):
    from .s0calc import paper_examples

    rows = paper_examples(args.precision)
    flat = [{k: v for k, v in r.items() if k != "quotient"} for r in rows]
    run.csv(flat)
    print(f"{'instance':<14} {'formula':<26} {'computed':>8} {'reported':>8}  discrepancy")
    for r in flat:
        print(f"{r['instance']:<14} {r['formula']:<26} {r['computed']:>8} {r['reported']:>8}  {r['discrepancy']}")
    return run.json({"rows": rows})


def _split(text) -> list[str]:
    return [m.strip() for m in (text if isinstance(text, list) else str(text).split(",")) if str(m).strip()]


def _coef(text):
    from .s0calc import Coefficient

    return Coefficient(str(text)).interval(30).mid


# -------------------------------------------------------------- parser
_CSV_HELP = {
    "constants": "CSV columns: name, lo, hi, precision, provenance",
    "rkk": "CSV columns: m, count",
    "a-estimate": "CSV columns: L, S_lo, S_hi, a_lo, a_hi (k=1); L, a_lo, a_hi otherwise",
    "decay": "CSV columns: L, nu, measure_lo, measure_hi, cells_resolved, lipschitz_bound, tol, budget_exhausted",
    "kernel-check": "CSV columns: t, eta, value, exact, quad_error, tail_bound, abs_error, within",
    "major-arc": "CSV columns: u, J, J_quad, lower_bound, side_conditions",
    "density": "CSV columns: X, L, count, undecided, reference, ratio",
    "paper-examples": "CSV columns: instance, formula, computed, reported, discrepancy",
    "search": "JSONL: one solution per line with p1, p2, ms, value, residual, residual_upper",
}


def _coeff_args(p, with_mus=True):
    p.add_argument("--lambda1")
    p.add_argument("--lambda2")
    if with_mus:
        p.add_argument("--mus", help="comma-separated mu coefficients (decimals or expressions)")
        p.add_argument("--ratio1")
        p.add_argument("--ratio2")
        p.add_argument("--gamma", default="0")
    p.add_argument("--eta")
    p.add_argument("--epsilon", default="0.1")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="out", help="artifact directory (default: out)")
    common.add_argument("--config", help="flat key=value file; explicit flags win")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    common.add_argument("--seed", type=int, default=0, help="reserved; no command draws random numbers")
    common.add_argument("--precision", type=int, default=30, help="working precision in decimal digits")

    parser = argparse.ArgumentParser(prog="twoprimes", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="command")

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_, epilog=_CSV_HELP.get(name))
        p.set_defaults(handler=fn)
        return p

    p = add("s0", cmd_s0, "threshold s0 from parts or from a full coefficient config")
    p.add_argument("--q1", type=_int)
    p.add_argument("--q2", type=_int)
    p.add_argument("--abs-l1l2", dest="abs_l1l2")
    p.add_argument("--class", dest="ratio_class", choices=["algebraic", "transcendental"])
    p.add_argument("--B", default="chen", help="chen, conjectural or a number")
    p.add_argument("--parsell", choices=["published", "refined"])
    _coeff_args(p)

    add("constants", cmd_constants, "constants table with provenance")

    p = add("singular", cmd_singular, "singular-series bounds for n, or range scans")
    p.add_argument("--n", type=_int)
    p.add_argument("--chain", type=_int, metavar="N_MAX")
    p.add_argument("--crossover", type=_int, nargs=2, metavar=("LO", "HI"))

    p = add("c0", cmd_c0, "certified twin prime constant")
    p.add_argument("--prime-bound", type=_int, default=10**7)
    p.add_argument("--tail", choices=["primezeta", "elementary"], default="primezeta")

    p = add("rkk", cmd_rkk, "representation counts r_{k,k}(m)")
    p.add_argument("--k", type=_int)
    p.add_argument("--L", type=_int)

    p = add("skl", cmd_skl, "S(k, L) as an interval")
    p.add_argument("--k", type=_int)
    p.add_argument("--L", type=_int)

    p = add("a-estimate", cmd_a_estimate, "finite-L estimates of A(k)")
    p.add_argument("--k", type=_int, default=1)
    p.add_argument("--L", dest="L_values", type=_int_list, help="list such as 2:30 or 10,20,30")

    p = add("gmeasure", cmd_gmeasure, "level-set measure of |G| > nu L")
    p.add_argument("--L", type=_int)
    p.add_argument("--nu", type=float)
    p.add_argument("--tol", type=float, default=1e-7)

    p = add("decay", cmd_decay, "level-set measure over a range of L")
    p.add_argument("--nu", type=float)
    p.add_argument("--L", dest="L_values", type=_int_list)
    p.add_argument("--tol", type=float, default=1e-7)

    p = add("dissect", cmd_dissect, "major/minor/trivial arc boundaries")
    p.add_argument("--x", type=float)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--mu-norm", type=float, default=1.0)

    p = add("kernel-check", cmd_kernel_check, "quadrature check of the Fejer kernel transform")
    p.add_argument("--t", type=_float_list)
    p.add_argument("--eta", dest="eta_grid", type=_float_list)
    p.add_argument("--T", type=float, default=1e5)
    p.add_argument("--tol", type=float, default=1e-9)

    p = add("major-arc", cmd_major_arc, "J(u) exactly and by quadrature, with its lower bound")
    p.add_argument("--u", type=_float_list)
    p.add_argument("--x", type=float)
    _coeff_args(p, with_mus=False)

    p = add("integrate", cmd_integrate, "integral of the full integrand over one region")
    p.add_argument("--region", choices=["major", "minor", "trivial"], default="major")
    p.add_argument("--side", choices=["both", "pos", "neg"], default="both")
    p.add_argument("--x", type=float)
    p.add_argument("--s", type=_int)
    p.add_argument("--L", type=_int)
    p.add_argument("--tol", type=float, default=1e-8)
    _coeff_args(p)

    p = add("selberg", cmd_selberg, "Selberg integral of theta over short intervals")
    p.add_argument("--x", type=float)
    p.add_argument("--h", type=float)
    p.add_argument("--epsilon", default="0.1")

    p = add("twin", cmd_twin, "weighted prime pairs with difference 2n")
    p.add_argument("--x", type=float)
    p.add_argument("--n", type=_int)
    p.add_argument("--epsilon", default="0.1")
    p.add_argument("--unweighted", action="store_true")

    for name, fn, help_ in (("search", cmd_search, "list certified solutions"),
                            ("count", cmd_count, "count certified solutions"),
                            ("density", cmd_density, "solution counts over a grid of X")):
        p = add(name, fn, help_)
        _coeff_args(p)
        p.add_argument("--s", type=_int)
        p.add_argument("--L", type=_int)
        if name == "density":
            p.add_argument("--x-grid", type=_float_list)
        else:
            p.add_argument("--x", type=float)
        if name == "search":
            p.add_argument("--limit", type=_int)

    add("paper-examples", cmd_paper_examples, "worked s0 instances beside the reported values")
    return parser


def _read_config(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for no, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValidationError(f"{path}:{no}: expected key=value")
            k, v = line.split("=", 1)
            out[k.strip().replace("-", "_")] = v.strip()
    return out


def _apply_config(parser, sub_parser, argv, args):
    """Re-parse with config values as defaults so explicit flags keep priority."""
    conf = _read_config(args.config)
    known = {a.dest: a for a in sub_parser._actions}
    unknown = sorted(set(conf) - set(known))
    if unknown:
        raise ValidationError(f"unknown config keys: {', '.join(unknown)}")
    defaults = {}
    for k, v in conf.items():
        act = known[k]
        if act.type is not None:
            v = act.type(v)
        elif isinstance(act, argparse._StoreTrueAction):
            v = v.lower() in ("1", "true", "yes")
        defaults[k] = v
    sub_parser.set_defaults(**defaults)
    return parser.parse_args(argv)


def _params(args) -> dict:
    skip = {"handler", "out", "config", "jobs"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--opt -expr`` into ``--opt=-expr``; argparse only accepts negative numbers."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if (tok.startswith("--") and "=" not in tok and nxt is not None and nxt.startswith("-")
                and not nxt.startswith("--") and nxt != "-h"):
            out.append(f"{tok}={nxt}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    argv = _glue_negative_values(sys.argv[1:] if argv is None else list(argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return USAGE_EXIT
    started = datetime.now(timezone.utc).isoformat()
    run = None
    try:
        if args.config:
            sub_parser = parser._subparsers._group_actions[0].choices[args.command]
            args = _apply_config(parser, sub_parser, argv, args)
        check_precision(args.precision)
        run = Run(args)
        payload = args.handler(args, run)
        if args.command != "paper-examples":
            print(_dump(payload), end="")
        _manifest(args, _params(args), started, "ok", 0, None, run.outputs)
        return 0
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        code, err = USAGE_EXIT, {"type": "usage", "message": str(exc)}
    except TwoPrimesError as exc:
        code = exc.exit_code
        err = {"type": type(exc).__name__, "message": str(exc)}
        for attr in ("limit", "achieved", "estimate", "candidates"):
            if getattr(exc, attr, None) is not None:
                err[attr] = getattr(exc, attr)
        if getattr(exc, "partial", None):
            err["partial_results"] = True
        print(f"error: {err['type']}: {exc}", file=sys.stderr)
    except (ValueError, OSError) as exc:
        code, err = ValidationError.exit_code, {"type": type(exc).__name__, "message": str(exc)}
        print(f"error: {err['type']}: {exc}", file=sys.stderr)
    _manifest(args, _params(args), started, "error", code, err, run.outputs if run else [])
    return code


if __name__ == "__main__":
    raise SystemExit(main())
