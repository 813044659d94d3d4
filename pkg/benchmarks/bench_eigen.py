"""Compare the compiled and numpy eigensolver kernels.

    python benchmarks/bench_eigen.py --dims 50 100 300 --repeat 3

Times the bare symmetric eigensolver on a d x d Gram matrix and the full
topic extraction for a d x n document, for each available backend, with
LAPACK (numpy.linalg.eigh) as a reference line.
"""
import argparse
import time

import numpy as np

import hidden_topics.linalg as linalg
from hidden_topics.linalg import _eigen_py
from hidden_topics.topics import extract_topics

try:
    from hidden_topics.linalg import _eigen
except ImportError:
    _eigen = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--dims", type=int, nargs="+", default=[50, 100, 300])
    parser.add_argument("--words", type=int, default=1000, help="columns n of the document matrix")
    parser.add_argument("-K", type=int, default=15)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    kernels = {"python": _eigen_py.symmetric_eigh}
    if _eigen is not None:
        kernels["cython"] = _eigen.symmetric_eigh
    else:
        print("compiled kernel not available; timing the fallback only")

    rng = np.random.default_rng(args.seed)
    print(f"{'d':>5} {'kernel':>8} {'eigh (s)':>10} {'extract (s)':>12} {'max |dλ|':>10}")
    for d in args.dims:
        W = rng.normal(size=(d, args.words))
        G = W @ W.T
        ref = np.linalg.eigvalsh(G)
        t = best_of(lambda: np.linalg.eigh(G), args.repeat)
        print(f"{d:>5} {'lapack':>8} {t:>10.4f} {'-':>12} {0.0:>10.1e}")
        for name, fn in kernels.items():
            evals, _ = fn(G)
            t_eig = best_of(lambda: fn(G), args.repeat)
            linalg.symmetric_eigh = fn
            t_ext = best_of(lambda: extract_topics(W, args.K), args.repeat)
            err = np.abs(evals - ref).max() / ref.max()
            print(f"{d:>5} {name:>8} {t_eig:>10.4f} {t_ext:>12.4f} {err:>10.1e}")


if __name__ == "__main__":
    main()
