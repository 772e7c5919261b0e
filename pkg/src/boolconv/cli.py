"""Command-line front end.

Verbs working on a scenario config (``--config``): ``invert``, ``tails``,
``verify`` and ``report`` (all outputs). Verbs working on inline measures
(``family:key=value,...``): ``eval``, ``convolve``, ``power``, ``bn``.

Exit status: 0 when everything ran and every requested verification passed,
1 when a verification failed, 2 for configuration errors, 3 for numerical
errors. Errors are also written as a key-value record (``error.report``).
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import mpmath as mp

from . import asymptotics as A
from . import boolean_max as bm
from . import transforms as T
from .boolean_conv import bool_add, bool_add_power, bool_mult
from .config import ScenarioConfig, build, load, parse_inline
from .errors import AtomProximity, BoolConvError, ConfigError, InvalidParameter, MomentError, NotApplicable, OutOfRegion
from .free_additive import belinschi_nica, free_power
from .inversion import atoms, density_at, tail_mass, total_mass
from .measures import Measure
from .precision import as_mpc, working_precision

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
KIND_FOR_VERB = {"invert": ("invert",), "tails": ("tails",), "verify": ("verify", "contrast"), "report": None}
fmt = A.fmt


@dataclass
class JobResult:
    index: int
    files: list
    verdict: bool | None
    summary: str


# ------------------------------------------------------------------ small writers


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    return buf.getvalue()


def kv_text(pairs) -> str:
    return "".join(f"{k} = {v}\n" for k, v in pairs)


def write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _slug(s) -> str:
    return "".join(c if c.isalnum() else "_" for c in str(s))


# ------------------------------------------------------------------ output jobs


def _floats(xs):
    return [str(x) for x in xs]


def _grid(out, target, cfg):
    if "y" in out:
        return _floats(out["y"])
    m = target if isinstance(target, Measure) else None
    if m is None:
        raise ConfigError("a 'y' list is required when the target is not a base measure")
    n = int(out.get("points", 9))
    if "tail_levels" in out:
        hi, lo = (float(v) for v in out["tail_levels"])
        return A.tail_window(m, hi, lo, n)
    return A.trusted_window(m, cfg.precision, n=n)


def _tail_of(obj, y):
    if isinstance(obj, bm.DistFunction):
        return obj.tail(y), 0
    if isinstance(obj, Measure):
        return obj.tail(y), 0
    est = tail_mass(obj, y)
    return est.value, est.error


def _job_invert(k, out, env, cfg):
    name = out["target"]
    h = env[name]
    if isinstance(h, bm.DistFunction):
        raise ConfigError(f"{name!r} is a distribution function; use a 'tails' output")
    lo, hi = (str(v) for v in out.get("window", (-10, 10)))
    found = atoms(h, (lo, hi))
    files = [(f"{k:02d}_invert_{_slug(name)}_atoms.csv", csv_text(["x", "mass"], found))]
    if "x" in out:
        rows = []
        for x in _floats(out["x"]):
            try:
                rows.append((x, density_at(h, x)))
            except AtomProximity:
                rows.append((x, math.nan))
        files.append((f"{k:02d}_invert_{_slug(name)}_density.csv", csv_text(["x", "density"], rows)))
    pairs = [("kind", "invert"), ("target", name), ("precision", cfg.precision), ("atoms", len(found))]
    if out.get("total_mass", True):
        pairs.append(("total_mass", fmt(total_mass(h))))
    files.append((f"{k:02d}_invert_{_slug(name)}.report", kv_text(pairs)))
    return JobResult(k, files, None, f"invert {name}: {len(found)} atom(s)")


def _job_tails(k, out, env, cfg):
    name = out["target"]
    obj = env[name]
    ys = _grid(out, obj, cfg)
    rows = [(y, *_tail_of(obj, y)) for y in ys]
    files = [(f"{k:02d}_tails_{_slug(name)}.csv", csv_text(["y", "tail", "error"], rows))]
    return JobResult(k, files, None, f"tails {name}: {len(rows)} point(s)")


def _verify(out, env, cfg):
    th = out["theorem"]
    m = env[out["target"]]
    tol = cfg.tolerance(th)
    if th in ("T3.1", "T3.2", "T3.3", "T3.4", "T3.5"):
        ys = _floats(out["y"]) if "y" in out else (_grid(out, m, cfg) if "tail_levels" in out else None)
        return A.verify_remainder(m, th, ys, p=out.get("p"), convention=out.get("convention", "printed"),
                                  tol=tol, precision=cfg.precision, method=out.get("method", "analytic"))
    if th == "Burgers":
        samples = [(s[0], mp.mpc(s[1], s[2])) for s in out.get("samples", [[0.5, 1, 1], [1, 0, 2]])]
        exact = [env[e] for e in out.get("exact", [])]
        return A.verify_burgers(m, exact, samples, tol_order=tol, precision=cfg.precision)
    if th == "P6.6":
        return A.prop66_ratio(m, _grid(out, m, cfg), p=out.get("p"), tol=tol, precision=cfg.precision)
    if th == "E2.4":
        return A.max_trio(m, int(out.get("n", 2)), _grid(out, m, cfg), 1 - tol, 1 + tol)
    ys = _grid(out, m, cfg)
    if th == "T2.2":
        return A.subexp_ratio(m, int(out.get("n", 2)), ys, tol, precision=cfg.precision)
    if th == "P2.3":
        return A.one_large_jump(m, int(out.get("n", 2)), ys, tol, precision=cfg.precision)
    if th == "T2.5":
        return A.bt_tail_equivalence(m, out.get("t", 1), ys, tol, precision=cfg.precision)
    nu = env[out["nu"]] if "nu" in out else None
    if nu is None:
        raise ConfigError(f"verify {th} needs a second measure 'nu'")
    if th == "T2.6":
        return A.breiman_boolean(m, nu, ys, c=out.get("c"), tol=tol, precision=cfg.precision)
    if th == "R5.3":
        return A.remark53_scenario(m, nu, ys, tol, precision=cfg.precision)
    return A.mult_index(m, nu, ys, tol, precision=cfg.precision)  # L5.1


def _job_verify(k, out, env, cfg):
    th, name = out["theorem"], out["target"]
    stem = f"{k:02d}_verify_{_slug(th)}_{_slug(name)}"
    header = [("kind", "verify"), ("theorem_id", th), ("target", name), ("precision", cfg.precision), ("seed", cfg.seed)]
    try:
        rep = _verify(out, env, cfg)
    except (NotApplicable, OutOfRegion, MomentError) as e:
        text = kv_text(header + [("verdict", "fail"), ("status", type(e).__name__), ("reason", str(e))])
        return JobResult(k, [(stem + ".report", text)], False, f"{th} {name}: FAIL ({type(e).__name__}: {e})")
    files = [(stem + ".report", kv_text(header[2:]) + rep.to_keyvalue())]
    for rel in rep.relations:
        files.append((f"{stem}_{_slug(rel.name)}.csv", rep.to_csv(rel.name)))
    return JobResult(k, files, rep.verdict, rep.summary())


def _job_contrast(k, out, env, cfg):
    name = out["target"]
    m, nu = env[name], env[out["nu"]]
    rep = A.classical_breiman_mc(m, nu, _grid(out, m, cfg), samples=int(out.get("samples", 1_000_000)),
                                 seed=cfg.seed, tol=cfg.tolerance("classical_breiman"))
    stem = f"{k:02d}_contrast_{_slug(name)}_{_slug(out['nu'])}"
    header = kv_text([("kind", "contrast"), ("target", name), ("nu", out["nu"]), ("seed", cfg.seed)])
    return JobResult(k, [(stem + ".report", header + rep.to_keyvalue()), (stem + ".csv", rep.to_csv())],
                     rep.verdict, rep.summary())


JOBS = {"invert": _job_invert, "tails": _job_tails, "verify": _job_verify, "contrast": _job_contrast}


def run_output(cfg: ScenarioConfig, k: int) -> JobResult:
    with working_precision(cfg.precision):
        env = build(cfg)
        out = cfg.outputs[k]
        return JOBS[out["kind"]](k, out, env, cfg)


def run(config_path, out_dir="out", precision=None, workers=1, seed=None, kinds=None, theorem=None) -> int:
    """Run the outputs of a config, write artifacts into ``out_dir`` and return the exit status."""
    try:
        cfg = load(config_path)
        if precision is not None:
            cfg = replace(cfg, precision=precision)
        if seed is not None:
            cfg = replace(cfg, seed=int(seed))
        picked = [k for k, o in enumerate(cfg.outputs)
                  if (kinds is None or o["kind"] in kinds) and (theorem is None or o.get("theorem") == theorem)]
        if not picked:
            raise ConfigError("no outputs of the requested kind in config")
        if workers > 1 and len(picked) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(run_output, [cfg] * len(picked), picked))
        else:
            results = [run_output(cfg, k) for k in picked]
    except (ConfigError, InvalidParameter) as e:
        return _fail(out_dir, EXIT_CONFIG, e)
    except (BoolConvError, ArithmeticError, ValueError) as e:
        return _fail(out_dir, EXIT_NUMERIC, e)
    lines = [("config", cfg.source), ("precision", cfg.precision), ("seed", cfg.seed)]
    for r in results:
        for name, text in r.files:
            write_atomic(os.path.join(out_dir, name), text)
        lines.append((f"output.{r.index:02d}", r.summary))
        print(r.summary)
    verdicts = [r.verdict for r in results if r.verdict is not None]
    ok = all(verdicts)
    lines.append(("verdict", "pass" if ok else "fail"))
    write_atomic(os.path.join(out_dir, "run.report"), kv_text(lines))
    return EXIT_OK if ok else EXIT_FAILED


def _fail(out_dir, code, exc) -> int:
    text = kv_text([("status", "error"), ("error_type", type(exc).__name__), ("message", str(exc).replace("\n", " ")),
                    ("exit_code", code)])
    sys.stderr.write(text)
    if out_dir:
        write_atomic(os.path.join(out_dir, "error.report"), text)
    return code


# ------------------------------------------------------------------ inline verbs


TRANSFORMS = {
    "cauchy": T.cauchy, "F": T.f_transform, "K": T.k_transform, "psi": T.psi,
    "eta": T.eta, "B": T.b_transform, "invB": T.inv_b,
}
_TRANSFORM_NAMES = {k.lower(): k for k in TRANSFORMS}


def _transform_name(text):
    try:
        return _TRANSFORM_NAMES[text.lower()]
    except KeyError:
        raise argparse.ArgumentTypeError(f"unknown transform {text!r}; choose from {', '.join(sorted(TRANSFORMS))}")


def _resolve(text, env):
    return env[text] if env and text in env else parse_inline(text)


def _emit(obj, args, label):
    """Tails at ``--y`` or atoms in ``--window`` (and density at ``--x``) of a composed handle."""
    files = []
    if args.y:
        rows = [(y, *_tail_of(obj, y)) for y in args.y]
        files.append((f"{label}_tails.csv", csv_text(["y", "tail", "error"], rows)))
    else:
        lo, hi = args.window
        files.append((f"{label}_atoms.csv", csv_text(["x", "mass"], atoms(obj, (lo, hi)))))
        if args.x:
            rows = []
            for x in args.x:
                try:
                    rows.append((x, density_at(obj, x)))
                except AtomProximity:
                    rows.append((x, math.nan))
            files.append((f"{label}_density.csv", csv_text(["x", "density"], rows)))
    return files


def _inline(args) -> int:
    env = build(load(args.config)) if args.config else None
    with working_precision(args.precision or "double"):
        try:
            if args.verb == "eval":
                m = _resolve(args.measure, env)
                fn = TRANSFORMS[args.transform]
                rows = []
                for p in args.points:
                    z = as_mpc(p)
                    v = mp.mpc(fn(m, z))
                    rows.append((z.real, z.imag, v.real, v.imag))
                files = [("eval.csv", csv_text(["z_re", "z_im", "re", "im"], rows))]
            elif args.verb == "convolve":
                a, b = _resolve(args.a, env), _resolve(args.b, env)
                h = bool_mult(a, b) if args.mult else bool_add(a, b)
                files = _emit(h, args, "convolve")
            elif args.verb == "power":
                m = _resolve(args.measure, env)
                h = free_power(m, args.t) if args.free else bool_add_power(m, args.t)
                files = _emit(h, args, "power")
            else:
                h = belinschi_nica(_resolve(args.measure, env), args.t)
                files = _emit(h, args, "bn")
        except (ConfigError, InvalidParameter) as e:
            return _fail(args.out, EXIT_CONFIG, e)
        except (BoolConvError, ArithmeticError, ValueError) as e:
            return _fail(args.out, EXIT_NUMERIC, e)
    for name, text in files:
        if args.out:
            write_atomic(os.path.join(args.out, name), text)
        else:
            sys.stdout.write(text)
    return EXIT_OK


# ------------------------------------------------------------------ argparse


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="scenario TOML file")
    common.add_argument("--precision", choices=("double", "extended"))
    common.add_argument("--workers", type=int, default=int(os.environ.get("BOOLCONV_WORKERS", 1)))
    common.add_argument("--out", help="output directory")
    common.add_argument("--seed", type=int, help="seed for Monte-Carlo outputs (overrides the config)")

    p = argparse.ArgumentParser(prog="boolconv", description="Boolean convolutions and their tail asymptotics.")
    sub = p.add_subparsers(dest="verb", required=True)

    for verb in ("invert", "tails", "verify", "report"):
        sp = sub.add_parser(verb, parents=[common], help=f"run the {verb} outputs of a config" if verb != "report"
                            else "run every output of a config")
        if verb == "verify":
            sp.add_argument("--theorem", help="only this theorem id")

    ev = sub.add_parser("eval", parents=[common], help="evaluate a transform at points")
    ev.add_argument("transform", type=_transform_name, help="one of " + ", ".join(sorted(TRANSFORMS)) + " (any case)")
    ev.add_argument("measure", help="family:key=value,... or a name from --config")
    ev.add_argument("points", nargs="+", help="complex points such as 1j or -0.1")

    def emitters(sp):
        sp.add_argument("--y", nargs="+", help="tail levels to evaluate")
        sp.add_argument("--window", nargs=2, default=("-10", "10"), metavar=("LO", "HI"))
        sp.add_argument("--x", nargs="+", help="density evaluation points")

    cv = sub.add_parser("convolve", parents=[common], help="Boolean sum (or product with --mult) of two measures")
    cv.add_argument("a")
    cv.add_argument("b")
    cv.add_argument("--mult", action="store_true")
    emitters(cv)
    pw = sub.add_parser("power", parents=[common], help="Boolean power (free power with --free)")
    pw.add_argument("measure")
    pw.add_argument("--t", required=True)
    pw.add_argument("--free", action="store_true")
    emitters(pw)
    bn = sub.add_parser("bn", parents=[common], help="Belinschi-Nica map")
    bn.add_argument("measure")
    bn.add_argument("--t", required=True)
    emitters(bn)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.verb in KIND_FOR_VERB:
        if not args.config:
            return _fail(args.out, EXIT_CONFIG, ConfigError(f"{args.verb} needs --config"))
        return run(args.config, args.out or "out", args.precision, max(1, args.workers), args.seed,
                   KIND_FOR_VERB[args.verb], getattr(args, "theorem", None))
    try:
        return _inline(args)
    except (ConfigError, InvalidParameter) as e:
        return _fail(args.out, EXIT_CONFIG, e)


if __name__ == "__main__":
    sys.exit(main())
