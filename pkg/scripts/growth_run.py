"""Coefficient growth, slash covariance and fundamental-domain sup for the named examples."""

import argparse

from lvvmf import growth as gh


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--examples", nargs="*", default=sorted(gh.EXAMPLES))
    ap.add_argument("--nmin", type=int, default=100)
    ap.add_argument("--nmax", type=int, default=2000)
    ap.add_argument("--slash-cmax", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    taus = gh.sample_taus(6, seed=args.seed)
    gammas = gh.slash_gammas(args.slash_cmax)
    for name in args.examples:
        F = gh.build_named(name, args.nmax)
        g = gh.coefficient_growth(F, args.nmin, args.nmax)
        s = gh.slash_check(F, gammas, taus)
        beta = "none" if g.beta is None else f"{g.beta:.4f}"
        line = (f"{name:14s} k={F.k:3d} {F.kind:12s} beta={beta:8s} bound={g.bound:.4f} "
                f"slash_err={s.max_rel_error:.1e}")
        if F.kind == "cuspidal":
            sups = [gh.fundamental_domain_sup(F, F.k / 2, 0, height_cap=cap).sup for cap in (25, 50)]
            line += f" fd_sup={sups[0]:.6g}/{sups[1]:.6g}"
        print(line)


if __name__ == "__main__":
    main()
