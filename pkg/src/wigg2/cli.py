"""Command-line front end.

Subcommands: fig1, g2, pn, count, homodyne, sweep, estimate-loss.

Outputs are CSV (with '#'-prefixed manifest comment headers, 12
significant digits, LF endings) or JSON; a run manifest with output
checksums is written beside each file output.  Identical manifests
reproduce identical bytes.

Exit codes: 0 success, 2 usage, 3 domain/guard error, 4 statistical
instability.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys

import numpy as np

from . import __version__
from .counting import (CountingConfig, g2_estimate_clicks, simulate_hbt)
from .errors import DomainError, FitError, StatisticalError
from .fock import photon_number_distribution
from .loss import infer_loss
from .moments import fig1_table, g2_gaussian, weyl_moments_analytic
from .states import (GaussianState, attenuate, coherent, squeezed_vacuum,
                     thermal)
from .tomography import (DEFAULT_ANGLES, estimate_covariance,
                         g2_from_reconstruction, hwp_sweep, simulate_homodyne)

EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_STATISTICAL = 4


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def _write_text(path: str, text: str):
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _write_manifest(out_path: str, subcommand: str, params: dict, outputs: dict):
    manifest = {
        "subcommand": subcommand,
        "params": params,
        "version": __version__,
        "outputs": {name: _sha256(text) for name, text in outputs.items()},
    }
    _write_text(out_path + ".manifest.json",
                json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _manifest_comment(subcommand: str, params: dict) -> str:
    items = ", ".join(f"{k}={v}" for k, v in sorted(params.items()))
    return f"# wigg2 {__version__} {subcommand}: {items}\n"


def _load_config(path: str) -> dict:
    """Flat key=value file; '#' comments and blank lines ignored."""
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise DomainError(f"config line not key=value: {line!r}")
            k, v = line.split("=", 1)
            out[k.strip().replace("-", "_")] = v.strip()
    return out


def _apply_config(args: argparse.Namespace):
    """Config supplies defaults; explicit flags override.  We detect
    'explicit' by comparing against the subcommand parser defaults."""
    if not getattr(args, "config", None):
        return
    parser = args.subparser
    cfg = _load_config(args.config)
    for k, v in cfg.items():
        if not hasattr(args, k):
            continue
        if getattr(args, k) == parser.get_default(k):
            default = parser.get_default(k)
            cast = type(default) if default is not None else str
            if cast is bool:
                v = v.lower() in ("1", "true", "yes")
            else:
                v = cast(v)
            setattr(args, k, v)


# ---------------------------------------------------------------------------
# state flags shared by g2 / pn / count / homodyne


def _add_state_flags(p: argparse.ArgumentParser):
    p.add_argument("--coherent", nargs=2, type=float, metavar=("X0", "P0"))
    p.add_argument("--thermal", type=float, metavar="NBAR")
    p.add_argument("--squeezed", nargs=2, type=float, metavar=("S", "ANGLE_RAD"))
    p.add_argument("--file", type=str, metavar="STATE_JSON")
    p.add_argument("--attenuate", type=float, metavar="ETA")


def _state_from_args(args) -> GaussianState:
    chosen = [name for name in ("coherent", "thermal", "squeezed", "file")
              if getattr(args, name) is not None]
    if len(chosen) != 1:
        raise _Usage("exactly one of --coherent/--thermal/--squeezed/--file required")
    if args.coherent is not None:
        state = coherent(*args.coherent)
    elif args.thermal is not None:
        state = thermal(args.thermal)
    elif args.squeezed is not None:
        state = squeezed_vacuum(*args.squeezed)
    else:
        with open(args.file) as fh:
            state = GaussianState.from_dict(json.load(fh))
    if args.attenuate is not None:
        state = attenuate(state, args.attenuate)
    return state


class _Usage(Exception):
    pass


# ---------------------------------------------------------------------------
# subcommands


def cmd_fig1(args):
    if not (0.0 < args.n_min < args.n_max) or args.points < 2:
        raise _Usage("need 0 < n_min < n_max and points >= 2")
    grid = np.logspace(math.log10(args.n_min), math.log10(args.n_max), args.points)
    rows = fig1_table(grid)
    params = {"n_min": args.n_min, "n_max": args.n_max, "points": args.points}
    lines = [_manifest_comment("fig1", params),
             "n,g2_coherent,g2_thermal,g2_squeezed\n"]
    for n, gc, gt, gs in rows:
        lines.append(f"{_fmt(n)},{_fmt(gc)},{_fmt(gt)},{_fmt(gs)}\n")
    text = "".join(lines)
    _write_text(args.out, text)
    _write_manifest(args.out, "fig1", params, {args.out: text})
    return 0


def cmd_g2(args):
    state = _state_from_args(args)
    m = weyl_moments_analytic(state)
    g = g2_gaussian(state, epsilon=args.epsilon)
    print(json.dumps({
        "g2": g.value,
        "mean_photon": g.mean_photon,
        "moments": {"nw": m.nw, "nw2": m.nw2},
    }, indent=2))
    return 0


def cmd_pn(args):
    state = _state_from_args(args)
    dist = photon_number_distribution(state, args.n_max, tol=args.tol)
    params = {"n_max": args.n_max, "tol": args.tol}
    lines = [_manifest_comment("pn", params),
             f"# tail_mass={_fmt(dist.tail_mass)}\n", "n,p\n"]
    for n, p in enumerate(dist.probs):
        lines.append(f"{n},{_fmt(p)}\n")
    text = "".join(lines)
    if args.out:
        _write_text(args.out, text)
        _write_manifest(args.out, "pn", params, {args.out: text})
    else:
        sys.stdout.write(text)
    return 0


def cmd_count(args):
    state = _state_from_args(args)
    cfg = CountingConfig(
        n_windows=args.windows, eta_det=args.eta_det, dark_prob=args.dark_prob,
        split=args.split, seed=args.seed, n_max=args.n_max, workers=args.workers,
    )
    rec = simulate_hbt(state, cfg)
    value, err = g2_estimate_clicks(rec)
    params = {"windows": args.windows, "eta_det": args.eta_det,
              "dark_prob": args.dark_prob, "split": args.split,
              "seed": args.seed, "n_max": args.n_max, "theta_deg": args.theta_deg}
    lines = [_manifest_comment("count", params),
             "theta_deg,g2_direct,g2_direct_err,n1,n2,nc,n_windows\n",
             f"{_fmt(args.theta_deg)},{_fmt(value)},{_fmt(err)},"
             f"{rec.n1},{rec.n2},{rec.nc},{rec.n_windows}\n"]
    text = "".join(lines)
    if args.out:
        _write_text(args.out, text)
        _write_manifest(args.out, "count", params, {args.out: text})
    else:
        sys.stdout.write(text)
    return 0


def _parse_angles_deg(spec: str) -> list[float]:
    try:
        return [float(tok) for tok in spec.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise _Usage(f"malformed angle list {spec!r}") from exc


def cmd_homodyne(args):
    state = _state_from_args(args)
    angles = ([math.radians(a) for a in _parse_angles_deg(args.angles)]
              if args.angles else list(DEFAULT_ANGLES))
    data = simulate_homodyne(state, angles, args.per_angle, args.eta_hd, args.seed)
    params = {"per_angle": args.per_angle, "eta_hd": args.eta_hd,
              "seed": args.seed, "angles": args.angles or "default12"}
    lines = [f"# seed={args.seed}, eta={_fmt(args.eta_hd)}\n", "theta_rad,x\n"]
    for theta, samples in zip(data.angles, data.samples):
        for x in samples:
            lines.append(f"{_fmt(theta)},{_fmt(x)}\n")
    text = "".join(lines)
    if args.out:
        _write_text(args.out, text)
        _write_manifest(args.out, "homodyne", params, {args.out: text})
    else:
        sys.stdout.write(text)
    if args.reconstruct:
        rec = estimate_covariance(data, boot_seed=args.seed)
        g = g2_from_reconstruction(rec, epsilon=args.epsilon)
        print(json.dumps({
            "cov_raw": {"vxx": rec.raw_cov[0], "vpp": rec.raw_cov[1],
                        "vxp": rec.raw_cov[2]},
            "cov": rec.state.to_dict()["cov"],
            "mean": rec.state.to_dict()["mean"],
            "g2": g.value, "g2_ci": [g.ci_low, g.ci_high],
            "bootstrap_guarded": g.n_guarded,
        }, indent=2))
    return 0


def cmd_sweep(args):
    thetas = _parse_angles_deg(args.thetas)
    if not thetas:
        raise _Usage("empty angle list")
    counting = CountingConfig(
        n_windows=args.windows, eta_det=args.eta_det, dark_prob=args.dark_prob,
        split=args.split, seed=args.seed, n_max=args.n_max, workers=args.workers,
    )
    rows = hwp_sweep(args.r, thetas, counting,
                     per_angle=args.per_angle, eta_hd=args.eta_hd, seed=args.seed)
    params = {"r": args.r, "thetas": args.thetas, "windows": args.windows,
              "eta_det": args.eta_det, "dark_prob": args.dark_prob,
              "split": args.split, "per_angle": args.per_angle,
              "eta_hd": args.eta_hd, "seed": args.seed, "n_max": args.n_max}
    lines = [_manifest_comment("sweep", params),
             "theta_deg,g2_analytic,g2_direct,g2_direct_err,"
             "g2_homodyne,g2_ci_low,g2_ci_high,vx,vp\n"]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in (
            row.theta_deg, row.g2_analytic, row.g2_direct, row.g2_direct_err,
            row.g2_homodyne, row.g2_ci_low, row.g2_ci_high, row.vx, row.vp,
        )) + "\n")
    text = "".join(lines)
    _write_text(args.out, text)
    _write_manifest(args.out, "sweep", params, {args.out: text})
    return 0


def cmd_estimate_loss(args):
    if args.from_sweep:
        if args.g2 is not None or args.vx is not None:
            raise _Usage("--from-sweep conflicts with --g2/--vx")
        rows = [line for line in open(args.from_sweep)
                if not line.startswith("#") and not line.startswith("theta_deg")]
        try:
            fields = rows[args.row].rstrip("\n").split(",")
        except IndexError:
            raise _Usage(f"sweep file has no row {args.row}")
        g2 = float(fields[2])   # direct-counting estimate (loss-immune)
        vx = float(fields[7])
    else:
        if args.g2 is None or args.vx is None:
            raise _Usage("need --g2 and --vx (or --from-sweep FILE --row K)")
        g2, vx = args.g2, args.vx
    inf = infer_loss(g2, vx)
    report = {
        "g2": g2, "vx_measured": vx,
        "nw_pure": inf.nw_pure, "vx_pure": inf.vx_pure,
        "eta": inf.eta, "eta_ci": None,
        "warnings": list(inf.warnings),
    }
    print(json.dumps(report, indent=2))
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wigg2",
        description="g2(0) of Gaussian states from Wigner moments, with "
                    "photon-counting and homodyne cross checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fig1", help="three reference g2 curves vs mean photon number")
    p.add_argument("--n-min", type=float, default=0.01)
    p.add_argument("--n-max", type=float, default=10.0)
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--out", type=str, required=True)
    p.add_argument("--config", type=str)
    p.set_defaults(func=cmd_fig1, subparser=p)

    p = sub.add_parser("g2", help="analytic g2(0) and Weyl moments of a state")
    _add_state_flags(p)
    p.add_argument("--epsilon", type=float, default=1e-9)
    p.add_argument("--config", type=str)
    p.set_defaults(func=cmd_g2, subparser=p)

    p = sub.add_parser("pn", help="photon-number distribution of a state")
    _add_state_flags(p)
    p.add_argument("--n-max", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", type=str)
    p.add_argument("--config", type=str)
    p.set_defaults(func=cmd_pn, subparser=p)

    p = sub.add_parser("count", help="Monte-Carlo HBT counting simulation")
    _add_state_flags(p)
    p.add_argument("--windows", type=int, default=1_000_000)
    p.add_argument("--eta-det", type=float, default=1.0)
    p.add_argument("--dark-prob", type=float, default=0.0)
    p.add_argument("--split", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-max", type=int, default=64)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--theta-deg", type=float, default=0.0,
                   help="label column echoed into the CSV")
    p.add_argument("--out", type=str)
    p.add_argument("--config", type=str)
    p.set_defaults(func=cmd_count, subparser=p)

    p = sub.add_parser("homodyne", help="simulate homodyne samples, optionally reconstruct")
    _add_state_flags(p)
    p.add_argument("--angles", type=str,
                   help="comma-separated LO angles in degrees (default: 12 uniform)")
    p.add_argument("--per-angle", type=int, default=10_000)
    p.add_argument("--eta-hd", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, default=1e-9)
    p.add_argument("--reconstruct", action="store_true")
    p.add_argument("--out", type=str)
    p.add_argument("--config", type=str)
    p.set_defaults(func=cmd_homodyne, subparser=p)

    p = sub.add_parser("sweep", help="HWP sweep: analytic vs counting vs homodyne")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--thetas", type=str, default="0,5,10,15,20,22.5,25,30,35,40,45",
                   help="comma-separated HWP angles in degrees")
    p.add_argument("--windows", type=int, default=1_000_000)
    p.add_argument("--eta-det", type=float, default=1.0)
    p.add_argument("--dark-prob", type=float, default=0.0)
    p.add_argument("--split", type=float, default=0.5)
    p.add_argument("--per-angle", type=int, default=10_000)
    p.add_argument("--eta-hd", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-max", type=int, default=64)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=str, required=True)
    p.add_argument("--config", type=str)
    p.set_defaults(func=cmd_sweep, subparser=p)

    p = sub.add_parser("estimate-loss", help="infer transmissivity from g2 + variance")
    p.add_argument("--g2", type=float)
    p.add_argument("--vx", type=float)
    p.add_argument("--from-sweep", type=str, metavar="SWEEP_CSV")
    p.add_argument("--row", type=int, default=0)
    p.add_argument("--config", type=str)
    p.set_defaults(func=cmd_estimate_loss, subparser=p)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        return args.func(args)
    except _Usage as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, FitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except StatisticalError as exc:
        print(f"statistical error: {exc}", file=sys.stderr)
        return EXIT_STATISTICAL


if __name__ == "__main__":
    sys.exit(main())
