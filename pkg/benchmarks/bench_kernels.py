"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Each backend runs in its own interpreter because the backend is fixed at
import time by NEWSFRAMES_DISABLE_NUMBA. The first (compiling) call is
excluded from the timings.
"""

import argparse
import json
import os
import subprocess
import sys
import timeit


def _cases():
    import numpy as np

    from newsframes import _kernels as K
    from newsframes.frames import draw_null_samples
    from newsframes.lexicon import default_lexicon

    rng = np.random.default_rng(0)

    n = 40
    heads = np.zeros(n, dtype=np.int64)
    for i in range(1, n):
        heads[i] = int(rng.integers(1, i + 1))
    keep = rng.random(n) < 0.6

    lex = default_lexicon()
    samples = draw_null_samples(lex.vocabulary_size, 60, 300, seed=1)
    member = lex.membership()

    nodes, m = 300, 3000
    src = rng.integers(0, nodes, m)
    dst = (src + rng.integers(1, nodes, m)) % nodes
    w = rng.integers(1, 4, m).astype(np.float64)
    comm = rng.integers(0, 12, nodes)

    ln = 80
    lsrc = rng.integers(0, ln, 300)
    ldst = (lsrc + rng.integers(1, ln, 300)) % ln
    lw = np.ones(300)
    pos = rng.random((ln, 2))

    from newsframes.graphstats import louvain
    from newsframes.netbuild import BuildConfig, Tfmn

    gedges = {}
    for a, b, ww in zip(src.tolist(), dst.tolist(), w.tolist()):
        key = (f"n{min(a, b):03d}", f"n{max(a, b):03d}")
        gedges[key] = (int(ww), 0)
    net = Tfmn.from_parts({}, gedges, BuildConfig())

    return {
        "louvain (300 nodes, ~3000 edges)": lambda: louvain(net, seed=1),
        "tree_pairs (40 tokens, d<=3)": lambda: K.tree_pairs(heads, keep, 3),
        "sample_counts (300 x 60)": lambda: K.sample_counts(samples, member),
        "community_sums (3000 edges)": lambda: K.community_sums(src, dst, w, comm, 12, nodes),
        "fr_layout (80 nodes, 100 it)": lambda: K.fr_layout(pos.copy(), lsrc, ldst, lw, 100, 0.1, 0.1, K.LAYOUT_GRID),
    }


def _worker(repeat: int) -> None:
    from newsframes import _kernels

    out = {"backend": _kernels.BACKEND, "timings": {}}
    for name, fn in _cases().items():
        fn()  # warm-up / JIT compile
        number = 20
        best = min(timeit.repeat(fn, number=number, repeat=repeat)) / number
        out["timings"][name] = best
    print(json.dumps(out))


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.worker:
        _worker(args.repeat)
        return 0
    results = {}
    for flag in ("0", "1"):
        env = dict(os.environ, NEWSFRAMES_DISABLE_NUMBA=flag)
        proc = subprocess.run([sys.executable, __file__, "--worker", "--repeat", str(args.repeat)],
                              env=env, capture_output=True, text=True, check=True)
        r = json.loads(proc.stdout)
        results[r["backend"]] = r["timings"]
    print(f"{'kernel':34s} {'numba':>12s} {'numpy':>12s} {'speedup':>8s}")
    for name in results["numpy"]:
        a = results.get("numba", {}).get(name)
        b = results["numpy"][name]
        if a is None:
            print(f"{name:34s} {'n/a':>12s} {b * 1e6:10.1f}us")
        else:
            print(f"{name:34s} {a * 1e6:10.1f}us {b * 1e6:10.1f}us {b / a:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
