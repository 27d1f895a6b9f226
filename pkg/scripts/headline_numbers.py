"""Table of frequency-optimised QFI values at the landmark configurations."""

import math

from es_qfi.optimize import optimize_spectrum
from es_qfi.qfi import oqfi_value
from es_qfi.resonator import SystemParams

CONFIGS = {
    "diabolic (rho=0)": SystemParams(rho=0),
    "rho=1, phi=0": SystemParams(rho=1, phi=0),
    "rho=1, phi=pi/4": SystemParams(rho=1, phi=math.pi / 4),
}


def main():
    for name, p in CONFIGS.items():
        opt = optimize_spectrum(p)
        print(f"{name}: lambda_max {opt.lambda_max:.6f} at {opt.omega_max:+.6f}, "
              f"lambda_min {opt.lambda_min:.6f} at {opt.omega_min:+.6f}")
        for n in (1, 2, 3, 4):
            coh = oqfi_value(p, "coherent", n).value
            noon = oqfi_value(p, "noon", n).value
            print(f"    N = nbar = {n}: coherent {coh:9.3f}   NOON {noon:9.3f}")


if __name__ == "__main__":
    main()
