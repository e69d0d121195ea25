"""Exhaustive decomposition sweep: round trip, signs, first-column dichotomy, product bounds."""

import argparse
import csv
import sys
import time

from lvvmf.sweeps import word_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cmax", type=int, default=200)
    ap.add_argument("--dmax", type=int, default=200)
    ap.add_argument("--workers", type=int, default=None, help="default: LVVMF_THREADS or 1")
    ap.add_argument("--csv", help="write per-gamma rows here")
    args = ap.parse_args()
    t0 = time.perf_counter()
    sw = word_sweep(args.cmax, args.dmax, keep_rows=bool(args.csv), workers=args.workers)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            out = csv.writer(fh)
            out.writerow(["c", "d", "nu", "length", "max_ratio", "lame"])
            for r in sw.rows:
                out.writerow([r.c, r.d, r.nu, r.length, r.max_ratio, f"{r.lame:.6f}"])
    for k, v in sw.summary().items():
        print(f"{k}: {v}")
    print(f"elapsed: {time.perf_counter() - t0:.1f}s")
    for name in ("roundtrip_failures", "sign_failures", "dichotomy_failures", "prop3_failures"):
        for msg in getattr(sw, name)[:5]:
            print(f"{name}: {msg}")
    sys.exit(0 if sw.ok else 1)


if __name__ == "__main__":
    main()
