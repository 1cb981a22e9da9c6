"""Time the numba and numpy kernel backends on the training hot path.

    python benchmarks/bench_kernels.py [--pairs 40] [--repeat 200]

Reports per-call time of ``pair_bell`` and ``batch_prob_minus`` for each
backend, the max absolute disagreement between them, and the wall time of a
full 50-epoch batch training run on Iris 0 vs 1 with each backend (measured in
a subprocess, since the backend is fixed at import).
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from bellqc import kernels, qsim

TRAIN_SNIPPET = """
import time
from bellqc import data, training
ds = data.select_binary(data.load_csv(data.iris_path()), 0, 1)
tr, te = data.split(ds, data.SplitSpec(40, 10, 0))
Xp, Xm = tr.by_label()
t = time.perf_counter()
training.train(training.TrainConfig(epochs=50, seed=0), Xp, Xm)
print(time.perf_counter() - t)
"""


def time_call(fn, args, repeat):
    fn(*args)  # warm-up / compile
    t = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - t) / repeat


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--pairs", type=int, default=40)
    ap.add_argument("--dim", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=200)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    Xp = rng.normal(size=(args.pairs, args.dim))
    Xm = rng.normal(size=(args.pairs, args.dim))
    w = rng.normal(size=args.dim)
    U = qsim.su2_matrix(*rng.uniform(-np.pi, np.pi, 3))
    B = qsim.bell_operator()

    results = {}
    for name, impl in kernels.implementations().items():
        results[name] = impl.pair_bell(Xp, Xm, w, U, B)
        t_bell = time_call(impl.pair_bell, (Xp, Xm, w, U, B), args.repeat)
        t_prob = time_call(impl.batch_prob_minus, (Xp, w, U), args.repeat)
        print(f"{name:6s} pair_bell {t_bell * 1e6:9.2f} us   batch_prob_minus {t_prob * 1e6:9.2f} us")
    if len(results) == 2:
        diff = np.max(np.abs(results["numba"] - results["numpy"]))
        print(f"max |numba - numpy| = {diff:.3e}")

    for flag in ("0", "1"):
        env = dict(os.environ, BELLQC_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", TRAIN_SNIPPET], env=env,
                             capture_output=True, text=True, check=True)
        label = "numba" if flag == "0" else "numpy"
        print(f"{label:6s} 50-epoch Iris training: {float(out.stdout):.3f} s")


if __name__ == "__main__":
    main()
