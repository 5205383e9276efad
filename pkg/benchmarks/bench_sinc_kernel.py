"""Time the numba and numpy sinc-sum kernels against each other.

    python3 benchmarks/bench_sinc_kernel.py --terms 100000 1000000 --repeat 5
"""
import argparse
import timeit

from bernpart import _kernels


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--terms", type=int, nargs="+", default=[10_000, 100_000, 1_000_000])
    parser.add_argument("--x2", type=float, default=0.25, help="x squared")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = {"numpy": _kernels.sinc_tail_numpy}
    if _kernels.HAVE_NUMBA:
        _kernels.sinc_tail_numba(args.x2, 10)  # compile outside the timed region
        backends["numba"] = _kernels.sinc_tail_numba
    else:
        print("numba unavailable or disabled; timing numpy only")

    print(f"{'terms':>10}  {'backend':<6}  {'best ms':>9}  {'sum':>22}")
    for terms in args.terms:
        for name, fn in backends.items():
            best = min(timeit.repeat(lambda: fn(args.x2, terms), number=1, repeat=args.repeat))
            total, _ = fn(args.x2, terms)
            print(f"{terms:>10}  {name:<6}  {best * 1e3:>9.3f}  {total:>22.17g}")


if __name__ == "__main__":
    main()
