"""Command-line front end.

Every subcommand writes one table (CSV with a single header row, or a JSON
list of objects with the same fields) to ``--out`` or standard output.

Exit codes: 0 success, 2 usage error, 3 invalid input, 4 numerical
non-convergence.
"""
import argparse
import configparser
import csv
import io
import json
import math
import sys

import numpy as np

from . import darkstate, ed_oracle, kernels, meanfield, phasemap, spectra
from .errors import LambdaDickeError, NonConvergence
from .model import ModelParams, critical_couplings

PARAM_KEYS = ("e1", "delta", "Delta", "omega1", "omega2", "g1", "g2")
REQUIRED = ("delta", "Delta", "omega1", "omega2")
EPS_COLS = ("eps_xm", "eps_xp", "eps_xpm", "eps_xpp")

EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_NONCONVERGENCE = 4


# -- output -------------------------------------------------------------------

def _fmt(v, precision):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        if math.isnan(v):
            return ""
        return format(float(v), f".{precision}g")
    return str(v)


def _json_value(v, precision):
    if v is None:
        return None
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        if math.isnan(v):
            return None
        return float(format(float(v), f".{precision}g"))
    return str(v)


def render(columns, rows, fmt="csv", precision=12) -> str:
    """Serialize ``rows`` (dicts keyed by ``columns``) deterministically."""
    if fmt == "json":
        data = [{c: _json_value(r.get(c), precision) for c in columns} for r in rows]
        return json.dumps(data, indent=2, allow_nan=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c), precision) for c in columns])
    return buf.getvalue()


def _emit(args, columns, rows):
    text = render(columns, rows, args.format, args.precision)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)


def _eps_fields(spec):
    if spec is None:
        return {c: math.nan for c in EPS_COLS}
    return dict(zip(EPS_COLS, (float(x) for x in spec.eps)))


# -- parameters ---------------------------------------------------------------

def read_config(path):
    """Flat ``key = value`` file; ``#`` starts a comment."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    cp.optionxform = str
    with open(path) as fh:
        cp.read_string("[params]\n" + fh.read())
    out = {}
    for key, val in cp["params"].items():
        if key not in PARAM_KEYS:
            raise ValueError(f"unknown config key {key!r}")
        out[key] = float(val)
    return out


def _params(parser, args):
    values = {"e1": 0.0, "g1": 0.0, "g2": 0.0}
    if args.config:
        try:
            values.update(read_config(args.config))
        except (OSError, ValueError, configparser.Error) as exc:
            parser.error(f"cannot read config: {exc}")
    for key in PARAM_KEYS:
        v = getattr(args, key)
        if v is not None:
            values[key] = v
    missing = [k for k in REQUIRED if k not in values]
    if missing:
        parser.error("missing parameter(s): " + ", ".join("--" + k for k in missing))
    return ModelParams(**values)


def _precision(text):
    p = int(text)
    if not 6 <= p <= 17:
        raise argparse.ArgumentTypeError("precision must be in [6, 17]")
    return p


def _common():
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    g = common.add_argument_group("model parameters")
    g.add_argument("--e1", type=float, help="energy of level 1 (default 0)")
    g.add_argument("--delta", type=float, help="E2 - E1")
    g.add_argument("--Delta", type=float, help="E3 - E1")
    g.add_argument("--omega1", type=float)
    g.add_argument("--omega2", type=float)
    g.add_argument("--g1", type=float, help="default 0")
    g.add_argument("--g2", type=float, help="default 0")
    g.add_argument("--config", help="flat key=value parameter file; flags take precedence")
    o = common.add_argument_group("output")
    o.add_argument("--out", help="output path (default stdout)")
    o.add_argument("--format", choices=("csv", "json"), default="csv")
    o.add_argument("--precision", type=_precision, default=12, help="significant digits, 6-17")
    return common


# -- subcommands --------------------------------------------------------------

def cmd_critical(p, args):
    cc = critical_couplings(p)
    tp = phasemap.triple_point(p)
    cols = ["g1c", "g2c1", "g2c2", "g2c", "triple_g1", "triple_g2"]
    return cols, [dict(g1c=cc.g1c, g2c1=cc.g2c1, g2c2=cc.g2c2, g2c=cc.g2c,
                       triple_g1=tp.g1, triple_g2=tp.g2)]


CLASSIFY_COLS = ["phase", "candidate", "is_winner", "valid", "stability", "energy", "energy_rel",
                 "psi1sq", "psi2sq", "psi3sq", "phi1sq", "phi2sq", *EPS_COLS, "degenerate"]


def cmd_classify(p, args):
    res = meanfield.classify(p, args.tol)
    rows = []
    for c in res.candidates:
        row = dict(phase=res.label, candidate=c.label, is_winner=c is res.winner, valid=c.valid,
                   stability=c.stability, energy=c.energy_per_particle,
                   energy_rel=c.energy_per_particle - p.e1,
                   degenerate="|".join(str(x) for x in res.degenerate))
        if c.point is not None:
            pt = c.point
            row.update(psi1sq=pt.psi1**2, psi2sq=pt.psi2**2, psi3sq=pt.psi3**2,
                       phi1sq=pt.phi1**2, phi2sq=pt.phi2**2)
        row.update(_eps_fields(phasemap.phase_spectrum(c.label, p) if c.valid else None))
        rows.append(row)
    return CLASSIFY_COLS, rows


SWEEP_COLS = ["g1", "g2", "phase", "energy", "psi2sq", "psi3sq", "phi1sq", "phi2sq", *EPS_COLS]


def cmd_sweep(p, args):
    cells = phasemap.sweep_grid(p, args.g1_range, args.g2_range, args.n1, args.n2, args.tol)
    rows = []
    for c in cells:
        row = dict(g1=c.g1, g2=c.g2, phase=c.phase, energy=c.energy)
        row.update(zip(("psi2sq", "psi3sq", "phi1sq", "phi2sq"), c.order_params))
        row.update(_eps_fields(c.spectrum))
        rows.append(row)
    return SWEEP_COLS, rows


def cmd_surface(p, args):
    """Reduced energy on an ``n x n`` grid of ``[-1, 1]^2`` in ``(Psi2, Psi3)``.

    The frame-1 surface is a polynomial on the closed disk and coincides with
    the frame-2 surface there, so the rim needs no separate chart.  Cells
    outside the disk have empty energy fields.
    """
    xs = np.linspace(-1.0, 1.0, args.n)
    f = meanfield.frame(p, 1)
    surf = kernels.reduced_surface(xs, xs, *f.args)
    dark = p.delta == 0.0
    rows = []
    for i, y in enumerate(xs):
        for j, x in enumerate(xs):
            e = float(surf[i, j])
            row = dict(psi2=x, psi3=y, energy=e, energy_rel=e - p.e1)
            if dark and not math.isnan(e):
                row["dark_stable"] = darkstate.dark_stability(abs(float(x)), p).stable
            rows.append(row)
    cols = ["psi2", "psi3", "energy", "energy_rel"] + (["dark_stable"] if dark else [])
    return cols, rows


SPECTRUM_COLS = ["phase", *EPS_COLS, "stable", "x", "Dbar", "dbar", "eta", "omega1m", "omega2m",
                 "lam", "gtilde_x", "gtilde_xp"]


def cmd_spectrum(p, args):
    label = meanfield.PhaseLabel(args.phase) if args.phase else meanfield.classify(p).label
    if label is meanfield.PhaseLabel.DARK:
        spec = darkstate.dark_spectrum_general(args.psi2, p)
        row = dict(phase=label, stable=spec.stable)
        row.update(_eps_fields(spec))
        return SPECTRUM_COLS, [row]
    spec = spectra.spectrum_closed_form(label, p)
    b = spec.branch
    row = dict(phase=label, stable=spec.stable, x=b.x, Dbar=b.Dbar, dbar=b.dbar, eta=b.eta,
               omega1m=b.omega1m, omega2m=b.omega2m, lam=b.lam,
               gtilde_x=b.gtilde_x, gtilde_xp=b.gtilde_xp)
    row.update(_eps_fields(spec))
    return SPECTRUM_COLS, [row]


def cmd_dark(p, args):
    cols = ["psi2", "psi1", "coherence", "stable", "marginal", "psi2_max",
            "eps0", "eps1", "eps2", "eps3"]
    rows = []
    for pt in darkstate.dark_manifold_scan(p, args.n_points):
        row = dict(psi2=pt.psi2, psi1=pt.psi1, coherence=pt.coherence_density, stable=pt.stable,
                   marginal=pt.marginal, psi2_max=pt.psi2_max)
        row.update(zip(("eps0", "eps1", "eps2", "eps3"), (float(e) for e in pt.eps)))
        rows.append(row)
    return cols, rows


def cmd_boundary(p, args):
    cc = critical_couplings(p)
    lo, hi = args.g2_range if args.g2_range else (cc.g2c2, 3.0 * cc.g2c2)
    rows = []
    for g2 in np.linspace(lo, hi, args.n):
        g2 = float(g2)
        rows.append(dict(g2=g2, g1_formula=phasemap.boundary_blue_red(g2, p),
                         g1_rootfind=phasemap.boundary_blue_red_bisection(g2, p)))
    return ["g2", "g1_formula", "g1_rootfind"], rows


ED_COLS = ["n_particles", "cutoff1", "cutoff2", "dim", "ground_energy", "energy_per_particle",
           "occ1", "occ2", "occ3", "photon1", "photon2", "parity1", "parity2", "coherence12",
           "gap", "residual", "cutoff_converged"]


def cmd_ed(p, args):
    rows = []
    for n in args.n:
        cfg = ed_oracle.EDConfig(n, p, args.cutoff1, args.cutoff2, dim_cap=args.dim_cap)
        r = ed_oracle.ground_state(cfg, check_cutoff=not args.no_cutoff_check)
        row = {k: getattr(r, k) for k in ("n_particles", "cutoff1", "cutoff2", "dim", "ground_energy",
                                          "energy_per_particle", "coherence12", "gap", "residual",
                                          "cutoff_converged")}
        row.update(zip(("occ1", "occ2", "occ3"), r.occupations))
        row.update(zip(("photon1", "photon2"), r.photon_densities))
        row.update(zip(("parity1", "parity2"), r.parities))
        rows.append(row)
    return ED_COLS, rows


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="lambdadicke", allow_abbrev=False,
                                     description="Mean-field and exact-diagonalization tools "
                                                 "for the two-mode Lambda Dicke model.")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("critical", parents=[common], help="critical couplings and triple point")
    s.set_defaults(func=cmd_critical)

    s = sub.add_parser("classify", parents=[common], help="all mean-field candidates at one point")
    s.add_argument("--tol", type=float, default=1e-9, help="energy degeneracy tolerance")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("sweep", parents=[common], help="phase classification on a coupling grid")
    s.add_argument("--g1-range", type=float, nargs=2, required=True, metavar=("LO", "HI"))
    s.add_argument("--g2-range", type=float, nargs=2, required=True, metavar=("LO", "HI"))
    s.add_argument("--n1", type=int, required=True)
    s.add_argument("--n2", type=int, required=True)
    s.add_argument("--tol", type=float, default=1e-9)
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("surface", parents=[common], help="reduced energy surface over the disk")
    s.add_argument("--n", type=_positive_int, default=41)
    s.set_defaults(func=cmd_surface)

    s = sub.add_parser("spectrum", parents=[common], help="excitation energies")
    s.add_argument("--phase", choices=[x.value for x in meanfield.PhaseLabel
                                       if x is not meanfield.PhaseLabel.COEXISTING],
                   help="default: the ground-state phase")
    s.add_argument("--psi2", type=float, default=0.0, help="dark-manifold coordinate")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("dark", parents=[common], help="scan of the delta = 0 dark manifold")
    s.add_argument("--n-points", type=_positive_int, default=21)
    s.set_defaults(func=cmd_dark)

    s = sub.add_parser("boundary", parents=[common], help="blue/red phase boundary")
    s.add_argument("--g2-range", type=float, nargs=2, metavar=("LO", "HI"),
                   help="default: g2c2 to 3 g2c2")
    s.add_argument("--n", type=_positive_int, default=21)
    s.set_defaults(func=cmd_boundary)

    s = sub.add_parser("ed", parents=[common], help="finite-N exact diagonalization")
    s.add_argument("--n", type=_positive_int, nargs="+", required=True, help="particle number(s)")
    s.add_argument("--cutoff1", type=_positive_int)
    s.add_argument("--cutoff2", type=_positive_int)
    s.add_argument("--dim-cap", type=_positive_int, default=ed_oracle.DIM_CAP)
    s.add_argument("--no-cutoff-check", action="store_true",
                   help="skip the doubled-cutoff convergence check")
    s.set_defaults(func=cmd_ed)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        params = _params(parser, args)
        columns, rows = args.func(params, args)
    except NonConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (LambdaDickeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _emit(args, columns, rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
