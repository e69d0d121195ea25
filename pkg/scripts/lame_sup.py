"""Lame-ratio supremum: Fibonacci family against every enumerated class."""

import argparse
import time

from lvvmf.sl2z import fibonacci_family, lame_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cmax", type=int, default=2000, help="enumeration bound on c")
    ap.add_argument("--fib-cmax", type=int, default=10**4, help="Fibonacci family bound on c")
    args = ap.parse_args()
    fam = fibonacci_family(args.fib_cmax)
    for nu, c, r in fam:
        print(f"fib nu={nu:3d} c={c:8d} ratio={r:.6f}")
    t0 = time.perf_counter()
    sw = lame_sweep(args.cmax)
    fib_sup = max(r for *_, r in fam)
    print(f"Fibonacci sup {fib_sup:.9f}")
    print(f"enumerated sup {sw.sup_ratio:.9f} at (a, c) = {sw.argmax}, {sw.classes} classes, "
          f"{time.perf_counter() - t0:.1f}s")
    print("PASS" if sw.sup_ratio <= fib_sup else "FAIL")


if __name__ == "__main__":
    main()
