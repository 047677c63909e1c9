"""Time the hot kernels under the numba and pure-numpy backends.

Each backend runs in its own process because ``ICNN_JIT`` is read at import.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--batch 64]
"""

import argparse
import json
import os
import subprocess
import sys
import timeit


def measure(repeat, batch):
    import numpy as np

    from icnn import BACKEND, arch as A, kernels as K
    from icnn.sliced import IncrementPlan, assemble, backward_batch, forward_batch
    from icnn import tensor as T

    rng = np.random.default_rng(0)
    x = rng.standard_normal((batch, 20, 24, 24)).astype(np.float32)
    img = rng.standard_normal((batch, 1, 28, 28)).astype(np.float32)
    pooled, arg = K.maxpool_forward(x, 2, 2)
    cols = K.im2col(img, 5, 1)
    arch = A.lenet()
    net = assemble(arch, IncrementPlan.single(arch), 0)
    head = net.new_head(1)
    params = net.subnet_params(1, head)
    labels = rng.integers(0, 10, batch)

    def train_step():
        scores, cache = forward_batch(arch, params, img, keep=True)
        _, g = T.softmax_xent_batch(scores, labels)
        backward_batch(arch, params, cache, g)

    cases = {
        "im2col 5x5": lambda: K.im2col(img, 5, 1),
        "col2im 5x5": lambda: K.col2im(cols, img.shape, 5, 1),
        "maxpool fwd": lambda: K.maxpool_forward(x, 2, 2),
        "maxpool bwd": lambda: K.maxpool_backward(pooled, arg, x.shape),
        "avgpool fwd": lambda: K.avgpool_forward(x, 2, 2),
        "avgpool bwd": lambda: K.avgpool_backward(pooled, x.shape, 2, 2),
        "lenet fwd+bwd": train_step,
    }
    out = {}
    for name, fn in cases.items():
        fn()    # warm-up, includes jit compilation
        t = timeit.Timer(fn)
        n, _ = t.autorange()
        out[name] = min(t.repeat(repeat, n)) / n
    return BACKEND, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--batch", type=int, default=64)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.child:
        backend, times = measure(args.repeat, args.batch)
        print(json.dumps({"backend": backend, "times": times}))
        return

    results = {}
    for flag in ("1", "0"):
        env = dict(os.environ, ICNN_JIT=flag)
        r = subprocess.run([sys.executable, __file__, "--child", "--repeat", str(args.repeat),
                            "--batch", str(args.batch)], env=env, capture_output=True, text=True, check=True)
        d = json.loads(r.stdout.strip().splitlines()[-1])
        results[d["backend"]] = d["times"]
    nb, np_ = results.get("numba"), results["numpy"]
    print(f"batch {args.batch}, best of {args.repeat}; times in ms")
    print(f"{'kernel':<16}{'numba':>10}{'numpy':>10}{'speedup':>10}")
    for name in np_:
        a = nb[name] * 1e3 if nb else float("nan")
        b = np_[name] * 1e3
        print(f"{name:<16}{a:>10.3f}{b:>10.3f}{b / a:>9.2f}x")


if __name__ == "__main__":
    main()
