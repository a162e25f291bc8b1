"""Experiment runner: ``hhft <command> [options]``.

Every command writes its artifact (JSON report or CSV table) to ``--out`` when
given and prints one verdict line.  Exit codes: 0 pass, 1 fail or
inconclusive, 2 usage or configuration error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import sys
from typing import Optional

import numpy as np

from . import groups as G
from . import harmonics as Hm
from . import lipschitz as L
from . import spaces as S
from . import theorems as Th
from . import transform as T
from .errors import ArgumentError, ConfigurationError, ResourceError
from .zoo import FunctionSpec

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _env_seed() -> int:
    raw = os.environ.get("HHFT_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigurationError(f"HHFT_SEED must be an integer, got {raw!r}") from None


def _env_threads() -> Optional[int]:
    raw = os.environ.get("HHFT_THREADS")
    if raw is None:
        return None
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise ConfigurationError(f"HHFT_THREADS must be a positive integer, got {raw!r}")
    return n


def _floats(text: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigurationError(f"bad number list {text!r}") from None


def _tolerances(text: Optional[str]) -> Th.TolerancesProfile:
    tol = Th.TolerancesProfile()
    if not text:
        return tol
    names = {f.name: f.type for f in dataclasses.fields(tol)}
    for tok in text.split(","):
        key, eq, val = tok.partition("=")
        key = key.strip()
        if not eq or key not in names:
            raise ConfigurationError(f"bad tolerance token {tok!r}")
        try:
            setattr(tol, key, int(val) if key == "min_doublings" else float(val))
        except ValueError:
            raise ConfigurationError(f"bad tolerance token {tok!r}") from None
    return tol


# ---------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser, group=True, function=True):
    p.add_argument("--config", help="JSON file of option defaults (flags take precedence)")
    p.add_argument("--out", help="artifact path (JSON report or CSV table)")
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", help="tolerance overrides, e.g. modulus_slope=0.1,log_exponent=0.3")
    if group:
        p.add_argument("--group", default="t1", help="t1, t2, t3, su2 or s2")
        p.add_argument("--band", type=float, help="cutoff on <xi>")
        p.add_argument("--label-max", type=int,
                       help="band given as the top label (twice-spin on su2, degree on s2)")
    if function:
        p.add_argument("--function", help="family:key=value,... e.g. tail:alpha=0.5,d=1")


def _fit_opts(p: argparse.ArgumentParser):
    p.add_argument("--radii", type=int, help="number of radii in the modulus schedule")
    p.add_argument("--directions", type=int, help="shift directions per radius")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="hhft", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="build a spectrum and write its JSON")
    _common(p)
    p.add_argument("--roundtrip", action="store_true",
                   help="also synthesize on the quadrature grid and transform back")

    p = sub.add_parser("modulus", help="L^p modulus of continuity (CSV h,omega,ratio_alpha)")
    _common(p)
    _fit_opts(p)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--side", default="left", choices=["left", "right"])
    p.add_argument("--alpha", type=float, help="fit and compare the slope against alpha")
    p.add_argument("--grid", action="store_true", help="measure by quadrature on the grid")
    p.add_argument("--r-min", type=float, help="smallest radius (default 2 / band)")
    p.add_argument("--r-max", type=float, help="largest radius (default 0.5)")

    p = sub.add_parser("titchmarsh-a", help="l^beta membership of <xi> fhat")
    _common(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--n", type=int)
    p.add_argument("--betas", help="comma-separated exponents to probe")

    p = sub.add_parser("titchmarsh-b", help="tail decay versus L^2 modulus")
    _common(p)
    _fit_opts(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--mode", default="forward", choices=["forward", "reverse"])
    p.add_argument("--tail-csv", help="also write the tail table (N,tail,ratio)")

    p = sub.add_parser("dini", help="log-corrected tails and moduli")
    _common(p)
    _fit_opts(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--d", type=float, default=0.0)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--mode", default="forward", choices=["forward", "reverse", "endpoint"])
    p.add_argument("--tail-csv", help="also write the tail table (N,tail,ratio)")

    p = sub.add_parser("multiplier", help="Bessel potential lifts the Lipschitz order")
    _common(p)
    _fit_opts(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--tail-only", action="store_true")

    p = sub.add_parser("duren", help="head and tail sums of c_k = k^(b-a-1) (log k)^d")
    _common(p, group=False, function=False)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--d", type=float, default=0.0)
    p.add_argument("--kmax", type=int, default=10 ** 6)
    p.add_argument("--csv", help="also write the table (N,head,tail)")

    p = sub.add_parser("weyl", help="eigenvalue counting and the dimension series")
    _common(p, function=False)
    p.add_argument("--lambdas", default="32,64")
    p.add_argument("--series-band", type=float, default=256.0)

    p = sub.add_parser("hausdorff-young", help="||fhat||_q <= ||f||_p on random band functions")
    _common(p)
    p.add_argument("--p", type=float, default=1.5)
    p.add_argument("--trials", type=int, default=10)

    p = sub.add_parser("lift-check", help="class-I structure of lifted sphere functions")
    _common(p, group=False, function=False)
    p.add_argument("--band", type=float)
    p.add_argument("--label-max", type=int, default=16)
    p.add_argument("--shifts", type=int, default=10)
    return ap


def _config_path(argv: list) -> Optional[str]:
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def _apply_config(ap: argparse.ArgumentParser, argv: list) -> argparse.Namespace:
    """Parse ``argv`` with defaults from ``--config``; explicit flags win."""
    path = _config_path(argv)
    command = next((a for a in argv if not a.startswith("-")), None)
    subs = ap._subparsers._group_actions[0].choices
    if path is None or command not in subs:
        return ap.parse_args(argv)
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigurationError("config must be a JSON object")
    sub = subs[command]
    cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
    if cfg.pop("command", command) != command:
        raise ConfigurationError("config command does not match the command line")
    known = {a.dest: a for a in sub._actions}
    unknown = sorted(set(cfg) - set(known) - {"config", "help"})
    if unknown:
        raise ConfigurationError(f"unknown config keys: {', '.join(unknown)}")
    for key in cfg:
        known[key].required = False
    sub.set_defaults(**cfg)
    return ap.parse_args(argv)


# ---------------------------------------------------------------------------
# helpers


def _group(args) -> G.GroupDescriptor:
    return G.parse_group(args.group)


def _band(args, g: G.GroupDescriptor) -> float:
    if getattr(args, "label_max", None) is not None:
        return G.band_for_label(g, args.label_max)
    if args.band is None:
        raise ConfigurationError("--band or --label-max is required")
    return float(args.band)


def _fit_profile(args) -> Th.FitProfile:
    fit = Th.FitProfile()
    if getattr(args, "radii", None):
        fit.radii = args.radii
    if getattr(args, "directions", None):
        fit.directions = args.directions
    return fit


def _spectrum(args, g, band, seed) -> T.Spectrum:
    if not args.function:
        raise ConfigurationError("--function is required")
    return FunctionSpec.parse(args.function, band, seed).build(g)


def _write_json(path: Optional[str], obj):
    if path:
        with open(path, "w") as fh:
            json.dump(obj, fh, indent=1, sort_keys=False)
            fh.write("\n")


def _write_csv(path: Optional[str], header, rows):
    if not path:
        return
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow(["%.17g" % v for v in row])


def _tail_rows(s: T.Spectrum, alpha: float, fit: Th.FitProfile, model="power"):
    Ns = fit.tail_grid(Th._signal_band(s), model)
    return [(N, t, t * N ** (2 * alpha)) for N, t in zip(Ns, S.tail_sums(s, Ns))]


def _report(cmd: str, rep: Th.CheckReport, out: Optional[str]) -> int:
    _write_json(out, rep.to_json())
    print(f"{cmd}: {rep.verdict} margin={rep.margin:.6g}")
    return EXIT_PASS if rep.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# commands


def cmd_spectrum(args, seed, tol) -> int:
    g = _group(args)
    band = _band(args, g)
    s = _spectrum(args, g, band, seed)
    _write_json(args.out, s.to_json())
    if not args.roundtrip:
        print(f"spectrum: pass points={len(s)} norm={s.norm():.17g}")
        return EXIT_PASS
    f = T.inverse(s, Hm.build_grid(g, band))
    back = T.forward(f, band)
    err = (back - s).norm() / max(s.norm(), 1e-300)
    ok = err <= 1e-9
    print(f"spectrum: {'pass' if ok else 'fail'} points={len(s)} roundtrip={err:.3g}")
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_modulus(args, seed, tol) -> int:
    g = _group(args)
    band = _band(args, g)
    s = _spectrum(args, g, band, seed)
    fit = _fit_profile(args)
    radii = fit.radius_grid(Th._signal_band(s))
    if args.r_min is not None or args.r_max is not None:
        radii = L.default_radii(fit.radii, args.r_max or fit.r_hi, args.r_min or radii[-1])
    src = T.inverse(s, Hm.build_grid(g, band)) if args.grid or args.p != 2 else s
    curve = L.modulus(src, args.p, radii, args.side, fit.directions, seed)
    if args.out:
        L.write_modulus_csv(curve, args.out, args.alpha)
    if args.alpha is None:
        print(f"modulus: pass radii={len(radii)} flags={len(curve.monotonicity_flags)}")
        return EXIT_PASS
    rep = L.fit_modulus(curve, drop=0)
    margin = rep.exponent_b - args.alpha
    ok = rep.reliable and abs(margin) <= tol.modulus_slope
    print(f"modulus: {'pass' if ok else 'fail'} margin={margin:.6g} alpha_hat={rep.exponent_b:.6g}")
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_titchmarsh_a(args, seed, tol) -> int:
    g = _group(args)
    s = _spectrum(args, g, _band(args, g), seed)
    betas = _floats(args.betas) if args.betas else None
    return _report("titchmarsh-a", Th.check_titchmarsh_a(s, args.alpha, args.p, args.n, betas, tol),
                   args.out)


def _input(args, g, band, seed, d=0.0):
    if args.mode == "reverse" or not args.function:
        if args.mode != "reverse":
            raise ConfigurationError("--function is required in forward mode")
        return Th.TailLaw(g, args.alpha, d, band, seed)
    return _spectrum(args, g, band, seed)


def cmd_titchmarsh_b(args, seed, tol) -> int:
    g = _group(args)
    band = _band(args, g)
    x = _input(args, g, band, seed)
    fit = _fit_profile(args)
    rep = Th.check_titchmarsh_b(x, args.alpha, args.mode, tol, fit, seed)
    if args.tail_csv:
        s = x.build() if isinstance(x, Th.TailLaw) else x
        _write_csv(args.tail_csv, ["N", "tail", "ratio"], _tail_rows(s, args.alpha, fit))
    return _report("titchmarsh-b", rep, args.out)


def cmd_dini(args, seed, tol) -> int:
    g = _group(args)
    band = _band(args, g)
    fit = _fit_profile(args)
    if args.mode == "endpoint":
        s = _spectrum(args, g, band, seed)
        return _report("dini", Th.check_dini_a(s, args.alpha, args.d, args.p, None, tol), args.out)
    x = _input(args, g, band, seed, args.d)
    rep = Th.check_dini(x, args.alpha, args.d, args.mode, tol, fit, seed)
    if args.tail_csv:
        s = x.build() if isinstance(x, Th.TailLaw) else x
        model = "power_log" if args.d else "power"
        _write_csv(args.tail_csv, ["N", "tail", "ratio"], _tail_rows(s, args.alpha, fit, model))
    return _report("dini", rep, args.out)


def cmd_multiplier(args, seed, tol) -> int:
    g = _group(args)
    s = _spectrum(args, g, _band(args, g), seed)
    rep = Th.check_multiplier_regularity(s, args.alpha, args.gamma, tol, _fit_profile(args), seed,
                                         args.tail_only)
    return _report("multiplier", rep, args.out)


def cmd_duren(args, seed, tol) -> int:
    rep = Th.duren_check(None, args.a, args.b, args.d, args.kmax, tol)
    if args.csv:
        _write_csv(args.csv, ["N", "head", "tail"], Th.duren_table(args.a, args.b, args.d, args.kmax))
    return _report("duren", rep, args.out)


def cmd_weyl(args, seed, tol) -> int:
    rep = Th.check_weyl(_group(args), _floats(args.lambdas), series_band=args.series_band, tol=tol)
    return _report("weyl", rep, args.out)


def cmd_hausdorff_young(args, seed, tol) -> int:
    g = _group(args)
    band = _band(args, g)
    grid = Hm.build_grid(g, band)
    family = args.function or "random"
    reports = []
    for i in range(args.trials):
        s = FunctionSpec.parse(family, band, seed + i).build(g)
        reports.append(Th.hausdorff_young_check(T.inverse(s, grid), args.p))
    worst = max(reports, key=lambda r: r.margin)
    ok = all(r.passed for r in reports)
    _write_json(args.out, {"name": "hausdorff_young", "p": args.p, "trials": args.trials,
                           "verdict": "pass" if ok else "fail", "seed": seed,
                           "reports": [r.to_json() for r in reports]})
    print(f"hausdorff-young: {'pass' if ok else 'fail'} worst_margin={worst.margin:.6g}")
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_lift_check(args, seed, tol) -> int:
    band = args.band if args.band is not None else G.band_for_label(G.Sphere2, args.label_max)
    return _report("lift-check", Th.lift_check(band, seed, args.shifts), args.out)


COMMANDS = {
    "spectrum": cmd_spectrum,
    "modulus": cmd_modulus,
    "titchmarsh-a": cmd_titchmarsh_a,
    "titchmarsh-b": cmd_titchmarsh_b,
    "dini": cmd_dini,
    "multiplier": cmd_multiplier,
    "duren": cmd_duren,
    "weyl": cmd_weyl,
    "hausdorff-young": cmd_hausdorff_young,
    "lift-check": cmd_lift_check,
}


def run(argv: Optional[list] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    ap = build_parser()
    try:
        args = _apply_config(ap, argv)
        _env_threads()
        seed = args.seed if args.seed is not None else _env_seed()
        tol = _tolerances(args.tol)
        with np.errstate(all="ignore"):
            return COMMANDS[args.command](args, seed, tol)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigurationError, ArgumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResourceError, MemoryError) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


def main():
    sys.exit(run())
