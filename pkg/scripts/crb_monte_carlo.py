"""Monte Carlo check that both measurement schemes reach the Cramer-Rao bound.

Appends one JSON line per run to ``<out>/crb_runs.jsonl``.

    python scripts/crb_monte_carlo.py --out results/ --seed 7
"""

import argparse
import math
import pathlib

from es_qfi.estimation import (
    HomodyneConfig,
    homodyne_optimal_lo,
    homodyne_simulate,
    noon_counting_config,
    noon_simulate,
)
from es_qfi.resonator import SystemParams
from es_qfi.states import optimal_coherent_probe


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--m", type=int, nargs="+", default=[10_000, 100_000, 1_000_000])
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    log = out / "crb_runs.jsonl"

    full = SystemParams(rho=1, phi=0)
    beta = optimal_coherent_probe(full, 2.0)
    hom = HomodyneConfig(full, beta, homodyne_optimal_lo(full, beta, 1e6))
    cnt = noon_counting_config(SystemParams(rho=1, phi=math.pi / 4), 2)

    print(f"{'scheme':9s} {'m':>9s} {'MSE*m*I':>9s} {'z':>6s} {'FI':>10s} {'QFI':>10s}")
    for m in args.m:
        for rep in (homodyne_simulate(hom, 0.0, m, args.seed), noon_simulate(cnt, 0.0, m, args.seed)):
            rep.append_jsonl(log)
            z = (rep.ratio - 1) / rep.sigma_stat
            print(f"{rep.scheme:9s} {m:9d} {rep.ratio:9.4f} {z:+6.2f} {rep.classical_fi:10.3f} "
                  f"{rep.qfi:10.3f}")


if __name__ == "__main__":
    main()
