"""Fit ||rho(gamma)|| <= K3 (c^2+d^2)^K4 for symmetric powers and check the explicit-product chain."""

import argparse
import time

from lvvmf.rep import bound_chain, enumerated_words, fit_polynomial_exponent, sym_power_rep
from lvvmf.sl2z import EichlerWord


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--mmax", type=int, default=4)
    ap.add_argument("--cmax", type=int, default=200, help="fit and validation range")
    ap.add_argument("--chain-cmax", type=int, default=100)
    args = ap.parse_args()
    print("m  K4       K3           alpha    viol  inv_viol  worst_ratio  chain_viol  secs")
    for m in range(args.mmax + 1):
        t0 = time.perf_counter()
        rep = sym_power_rep(m)
        chain_bad = sum(not bound_chain(rep, w, inverse=inv).ok
                        for _, w in enumerated_words(args.chain_cmax, args.chain_cmax)
                        if isinstance(w, EichlerWord) for inv in (False, True))
        k = fit_polynomial_exponent(rep, args.cmax)
        print(f"{m}  {k.K4:.5f}  {k.K3:11.5g}  {k.alpha:.5f}  {k.violations:4d}  "
              f"{k.inverse_violations:8d}  {k.worst_ratio:.8f}   {chain_bad:9d}  "
              f"{time.perf_counter() - t0:.1f}")


if __name__ == "__main__":
    main()
