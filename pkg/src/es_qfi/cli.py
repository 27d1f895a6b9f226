"""``es-qfi`` command line.

Frequencies and ``epsilon`` are given in units of ``gamma``; ``--gamma``
rescales the physical outputs. Angles are radians unless ``--phi-over-pi``.
Exit status: 0 ok, 2 invalid input, 3 evaluation on a resolvent pole.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import artifacts
from .errors import InvalidParams, PoleError
from .estimation import (
    HomodyneConfig,
    homodyne_optimal_lo,
    homodyne_simulate,
    noon_counting_config,
    noon_simulate,
)
from .gwsm import gwsm_spectrum
from .optimize import Axis, landscape_all, offsurface_scan, sweep_oqfi
from .qfi import (
    coherent_qfi,
    coherent_qfi_fidelity_oracle,
    noon_qfi,
    noon_qfi_fidelity_oracle,
    oqfi_value,
)
from .resonator import SystemParams, build_model, identity_residuals, omega_eigenvalues, transfer_k
from .smallcomplex import IDENTITY, adjoint
from .states import ModeState, NoonSpec, optimal_coherent_probe, optimal_noon_probe

EXIT_INVALID = 2
EXIT_SINGULAR = 3


class CliError(Exception):
    pass


# --------------------------------------------------------------------------
# helpers


def _phi(args, value=None) -> float:
    v = args.phi if value is None else value
    return v * math.pi if args.phi_over_pi else v


def _params(args) -> SystemParams:
    g = args.gamma
    return SystemParams(rho=args.rho, phi=_phi(args), epsilon=args.epsilon * g, gamma=g)


def _photons(args) -> float:
    return args.nbar if args.state == "coherent" else args.n


def _mat(m) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def _emit(args, payload: dict, summary: str) -> None:
    if getattr(args, "out", None):
        artifacts.atomic_write_text(args.out, artifacts.dumps_json(payload))
    print(summary)


def _axis(name: str, text: str, scale: float = 1.0) -> Axis:
    ax = Axis.parse(name, text)
    return Axis(name, ax.lo * scale, ax.hi * scale, ax.count)


# --------------------------------------------------------------------------
# subcommands


def cmd_model(args) -> int:
    p = _params(args)
    omega = args.omega * p.gamma
    m = build_model(p)
    om_p, om_m = omega_eigenvalues(p)
    k = transfer_k(p, omega)
    res = identity_residuals(p)
    res["k_unitarity"] = float(np.linalg.norm(adjoint(k) @ k - IDENTITY))
    report = {
        "params": {"rho": p.rho, "phi": p.phi, "epsilon": p.epsilon, "gamma": p.gamma},
        "omega": omega,
        "S": _mat(m.s), "B": _mat(m.b), "H_tilde": _mat(m.h_tilde), "H_eff": _mat(m.h_eff),
        "Omega_plus": [om_p.real, om_p.imag], "Omega_minus": [om_m.real, om_m.imag],
        "K": _mat(k),
        "residuals": res,
        "singular_point": False,
    }
    spec = gwsm_spectrum(p, omega)
    report["gwsm_eigenvalues"] = [spec.lambda_minus, spec.lambda_plus]
    report["near_singular"] = spec.near_singular
    text = artifacts.dumps_json(report)
    if args.out:
        artifacts.atomic_write_text(args.out, text)
    sys.stdout.write(text)
    return 0


def _load_probe(path):
    with open(path, encoding="utf-8") as fh:
        d = json.load(fh)
    return NoonSpec.from_dict(d) if d.get("kind") == "noon" else ModeState.from_dict(d)


def cmd_qfi(args) -> int:
    p = _params(args)
    if args.probe:
        probe = _load_probe(args.probe)
    elif args.state == "coherent":
        probe = optimal_coherent_probe(p, args.nbar)
    else:
        probe = optimal_noon_probe(p, args.n)
    if isinstance(probe, NoonSpec):
        gen, orc = noon_qfi(p, probe), noon_qfi_fidelity_oracle(p, probe)
    else:
        gen, orc = coherent_qfi(p, probe), coherent_qfi_fidelity_oracle(p, probe)
    payload = {"generator": gen.to_dict(), "fidelity_limit": orc.to_dict()}
    _emit(args, payload, f"qfi {artifacts.fmt(gen.value)} oracle {artifacts.fmt(orc.value)}")
    return 0


def cmd_oqfi(args) -> int:
    p = _params(args)
    res = oqfi_value(p, args.state, _photons(args))
    _emit(args, res.to_dict(), f"oqfi {artifacts.fmt(res.value)}")
    return 0


def cmd_sweep(args) -> int:
    if not args.out:
        raise CliError("sweep needs --out")
    phi_scale = math.pi if args.phi_over_pi else 1.0
    grid = sweep_oqfi(
        args.state, _axis("rho", args.rho_axis), _axis("phi", args.phi_axis, phi_scale),
        epsilon=args.epsilon * args.gamma, photons=_photons(args), gamma=args.gamma,
    )
    artifacts.write_grid(grid, args.out, args.format)
    print(f"sweep max {artifacts.fmt(np.nanmax(grid.values))} "
          f"min {artifacts.fmt(np.nanmin(grid.values))} flagged {int(grid.flags.sum())}")
    return 0


def cmd_landscape(args) -> int:
    if not args.out:
        raise CliError("landscape needs --out")
    grid = landscape_all(_phi(args), _axis("omega", args.omega_axis),
                         _axis("epsilon", args.epsilon_axis), rho=args.rho, gamma=args.gamma)
    artifacts.write_grid(grid, args.out, args.format)
    print(f"landscape cells {grid.values.size} flagged {int(grid.flags.sum())}")
    return 0


def cmd_offsurface(args) -> int:
    if not args.out:
        raise CliError("offsurface needs --out")
    p = SystemParams(rho=args.rho, phi=_phi(args), gamma=args.gamma)
    grid = offsurface_scan(p, _axis("epsilon", args.epsilon_axis), args.state, _photons(args))
    artifacts.write_grid(grid, args.out, args.format)
    print(f"offsurface max {artifacts.fmt(np.nanmax(grid.values))} flagged {int(grid.flags.sum())}")
    return 0


def cmd_simulate(args) -> int:
    p = _params(args)
    eps_true = p.epsilon if args.epsilon_true is None else args.epsilon_true * p.gamma
    if args.scheme == "homodyne":
        beta = optimal_coherent_probe(p, args.nbar)
        lo = homodyne_optimal_lo(p, beta, args.n_lo)
        report = homodyne_simulate(HomodyneConfig(p, beta, lo), eps_true, args.m, args.seed)
    else:
        report = noon_simulate(noon_counting_config(p, args.n), eps_true, args.m, args.seed)
    if args.append:
        report.append_jsonl(args.append)
    _emit(args, report.to_dict(),
          f"simulate {report.scheme} ratio {artifacts.fmt(report.ratio)} "
          f"sigma_stat {artifacts.fmt(report.sigma_stat)}")
    return 0


def cmd_snr(args) -> int:
    from .estimation import snr_lau_clerk

    p = _params(args)
    beta = optimal_coherent_probe(p, args.nbar)
    d = args.delta * p.gamma
    snr = snr_lau_clerk(p, d, beta)
    qfi = coherent_qfi(p, beta).value
    payload = {"snr": snr, "qfi": qfi, "delta": d, "ratio": snr / (d * d * qfi) if qfi else None}
    _emit(args, payload, f"snr {artifacts.fmt(snr)}")
    return 0


PLOT_SCRIPT = '''\
"""Plot a grid written by `es-qfi sweep|landscape|offsurface --format csv`."""
import sys

import matplotlib.pyplot as plt
import numpy as np

path = sys.argv[1]
axes = []
rows = []
with open(path) as fh:
    for line in fh:
        if line.startswith("# axis,"):
            _, name, lo, hi, n = line.strip().split(",")
            axes.append((name, np.linspace(float(lo), float(hi), int(n))))
        elif not line.startswith("#"):
            rows.append(line.strip().split(","))
data = np.array([[float(v) for v in r[1:]] for r in rows[1:]])
if len(axes) == 1:
    plt.plot(axes[0][1], data[:, 0])
    plt.xlabel(axes[0][0])
else:
    (rname, r), (cname, c) = axes
    plt.pcolormesh(c, r, data, shading="auto")
    plt.xlabel(cname)
    plt.ylabel(rname)
    plt.colorbar()
plt.savefig(sys.argv[2] if len(sys.argv) > 2 else path + ".png", dpi=150)
'''


def cmd_plot_script(args) -> int:
    if args.out:
        artifacts.atomic_write_text(args.out, PLOT_SCRIPT)
    else:
        sys.stdout.write(PLOT_SCRIPT)
    return 0


# --------------------------------------------------------------------------
# parser


def _add_params(sp, rho=0.0, phi=0.0):
    sp.add_argument("--rho", type=float, default=rho)
    sp.add_argument("--phi", type=float, default=phi, help="radians (see --phi-over-pi)")
    sp.add_argument("--phi-over-pi", action="store_true", help="read phi in units of pi")
    sp.add_argument("--epsilon", type=float, default=0.0, help="units of gamma")
    sp.add_argument("--gamma", type=float, default=1.0)


def _add_state(sp):
    sp.add_argument("--state", choices=("coherent", "noon"), default="coherent")
    sp.add_argument("--nbar", type=float, default=1.0, help="coherent mean photon number")
    sp.add_argument("--n", type=int, default=1, help="NOON photon number")


def _add_out(sp, formats=False):
    sp.add_argument("--out", default=None)
    if formats:
        sp.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="es-qfi", description=__doc__.splitlines()[0])
    ap.add_argument("--config", default=None,
                    help="JSON file of option defaults (keys are option names)")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("model", help="print S, B, H_tilde, Omega, K and identity residuals")
    _add_params(sp)
    sp.add_argument("--omega", type=float, default=0.0)
    _add_out(sp)
    sp.set_defaults(func=cmd_model)

    sp = sub.add_parser("qfi", help="generator and fidelity-limit QFI of a probe")
    _add_params(sp)
    _add_state(sp)
    sp.add_argument("--probe", default=None, help="probe JSON (default: optimal probe)")
    _add_out(sp)
    sp.set_defaults(func=cmd_qfi)

    sp = sub.add_parser("oqfi", help="frequency-optimised QFI")
    _add_params(sp)
    _add_state(sp)
    _add_out(sp)
    sp.set_defaults(func=cmd_oqfi)

    sp = sub.add_parser("sweep", help="o-QFI over a (rho, phi) grid")
    _add_state(sp)
    sp.add_argument("--rho", dest="rho_axis", default="0:1:11", help="lo:hi:count")
    sp.add_argument("--phi", dest="phi_axis", default="0:3.141592653589793:11", help="lo:hi:count")
    sp.add_argument("--phi-over-pi", action="store_true")
    sp.add_argument("--epsilon", type=float, default=0.0)
    sp.add_argument("--gamma", type=float, default=1.0)
    _add_out(sp, formats=True)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("landscape", help="A_ll over an (epsilon, omega) grid")
    sp.add_argument("--rho", type=float, default=1.0)
    sp.add_argument("--phi", type=float, default=0.0)
    sp.add_argument("--phi-over-pi", action="store_true")
    sp.add_argument("--gamma", type=float, default=1.0)
    sp.add_argument("--omega", dest="omega_axis", default="-1:1:201")
    sp.add_argument("--epsilon", dest="epsilon_axis", default="-1:1:201")
    _add_out(sp, formats=True)
    sp.set_defaults(func=cmd_landscape)

    sp = sub.add_parser("offsurface", help="o-QFI versus epsilon at fixed rho, phi")
    sp.add_argument("--rho", type=float, default=1.0)
    sp.add_argument("--phi", type=float, default=math.pi / 4)
    sp.add_argument("--phi-over-pi", action="store_true")
    sp.add_argument("--gamma", type=float, default=1.0)
    sp.add_argument("--epsilon", dest="epsilon_axis", default="-0.45:0:10")
    _add_state(sp)
    _add_out(sp, formats=True)
    sp.set_defaults(func=cmd_offsurface)

    sp = sub.add_parser("simulate", help="Monte Carlo estimator vs Cramer-Rao bound")
    sp.add_argument("--scheme", choices=("homodyne", "noon"), required=True)
    _add_params(sp)
    sp.add_argument("--epsilon-true", type=float, default=None, help="units of gamma")
    sp.add_argument("--m", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--nbar", type=float, default=2.0)
    sp.add_argument("--n-lo", type=float, default=1e6)
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--append", default=None, help="append the report to a JSON-lines file")
    _add_out(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("snr", help="linear-response signal-to-noise of the optimal probe")
    _add_params(sp)
    sp.add_argument("--delta", type=float, default=1e-3, help="signal epsilon, units of gamma")
    sp.add_argument("--nbar", type=float, default=1.0)
    _add_out(sp)
    sp.set_defaults(func=cmd_snr)

    sp = sub.add_parser("plot-script", help="emit a matplotlib script for CSV grids")
    _add_out(sp)
    sp.set_defaults(func=cmd_plot_script)
    return ap


def _apply_config(ap, argv):
    """Re-parse with defaults from ``--config``; unknown keys are an error."""
    args = ap.parse_args(argv)
    if not args.config:
        return args
    with open(args.config, encoding="utf-8") as fh:
        cfg = json.load(fh)
    sub = ap._subparsers._group_actions[0].choices[args.command]
    known = {a.dest for a in sub._actions}
    unknown = sorted(set(cfg) - known)
    if unknown:
        raise CliError(f"unknown config keys: {', '.join(unknown)}")
    sub.set_defaults(**cfg)
    return ap.parse_args(argv)


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = _apply_config(ap, argv)
        return args.func(args)
    except PoleError as exc:
        print(json.dumps({"singular_point": True, "magnitude": exc.magnitude, "error": str(exc)}))
        return EXIT_SINGULAR
    except (InvalidParams, CliError, ValueError, OSError) as exc:
        print(f"es-qfi: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
