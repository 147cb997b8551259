"""Compiled vs pure tableau kernels on the workloads that dominate sweeps.

Run:  python benchmarks/bench_kernels.py [--quick]

Times (a) isolated kernel operations and (b) a full Clifford-only trajectory
at the largest acceptance system size, under both backends.  The pure
backend is selected in a subprocess via MIPTKIT_FORCE_PURE=1 so the
comparison uses identical code paths otherwise.
"""

import json
import os
import subprocess
import sys
import time

import numpy as np


def bench_kernels(reps: int):
    from miptkit import backend
    from miptkit.clifford import sample_clifford1, sample_clifford2
    from miptkit.circuit import CircuitParams, run_trajectory
    from miptkit.tableau import StabilizerTableau

    rng = np.random.default_rng(0)
    n = 64
    tab = StabilizerTableau.zero_state(n)
    grng = np.random.default_rng(1)
    for t in range(1, 9):  # scramble a bit first
        for a in range(t % 2, n - 1, 2):
            tab.apply_clifford(sample_clifford2(grng), (a, a + 1))

    out = {"backend": backend.BACKEND_NAME}

    gates = [sample_clifford2(grng) for _ in range(64)]
    t0 = time.perf_counter()
    for _ in range(reps):
        for i, g in enumerate(gates):
            backend.apply_lookup2(tab.x_words, tab.z_words, tab.signs,
                                  (2 * i) % (n - 1), (2 * i) % (n - 1) + 1,
                                  g.perm, g.sign)
    out["apply_lookup2_us"] = (time.perf_counter() - t0) / (reps * len(gates)) * 1e6

    g1 = sample_clifford1(grng)
    t0 = time.perf_counter()
    for _ in range(reps * 64):
        backend.apply_lookup1(tab.x_words, tab.z_words, tab.signs, 17, g1.perm, g1.sign)
    out["apply_lookup1_us"] = (time.perf_counter() - t0) / (reps * 64) * 1e6

    t0 = time.perf_counter()
    for i in range(reps * 16):
        site = i % n
        piv = backend.measure_prepare(tab.x_words, tab.z_words, n, site)
        if piv < 0:
            backend.measure_deterministic(tab.x_words, tab.z_words, tab.signs, n, site)
        else:
            backend.measure_update_random(tab.x_words, tab.z_words, tab.signs,
                                          n, site, piv, int(rng.random() < 0.5))
    out["measure_us"] = (time.perf_counter() - t0) / (reps * 16) * 1e6

    t0 = time.perf_counter()
    for _ in range(reps):
        backend.rank_left_half(tab.x_words, tab.z_words, n)
    out["rank_us"] = (time.perf_counter() - t0) / reps * 1e6

    params = CircuitParams(n_qubits=64, p=0.16, eta=0.0, beta=1.0, engine="tableau")
    t0 = time.perf_counter()
    run_trajectory(params, seed=7)
    out["trajectory_n64_s"] = time.perf_counter() - t0
    return out


def main():
    quick = "--quick" in sys.argv
    reps = 20 if quick else 100
    if os.environ.get("_BENCH_CHILD"):
        print(json.dumps(bench_kernels(reps)))
        return
    results = []
    for force_pure in ("0", "1"):
        env = dict(os.environ, _BENCH_CHILD="1", MIPTKIT_FORCE_PURE=force_pure,
                   OPENBLAS_NUM_THREADS="1", OMP_NUM_THREADS="1")
        proc = subprocess.run([sys.executable, __file__] + sys.argv[1:],
                              env=env, capture_output=True, text=True, check=True)
        results.append(json.loads(proc.stdout.strip().splitlines()[-1]))
    names = {
        "apply_lookup2_us": "two-site gate conjugation (us)",
        "apply_lookup1_us": "single-site gate conjugation (us)",
        "measure_us": "Z measurement (us)",
        "rank_us": "half-chain GF(2) rank (us)",
        "trajectory_n64_s": "full N=64, 4N-step trajectory (s)",
    }
    a, b = results
    print(f"{'workload':44} {a['backend']:>10} {b['backend']:>10} {'speedup':>8}")
    for key, label in names.items():
        print(f"{label:44} {a[key]:10.2f} {b[key]:10.2f} {b[key] / a[key]:7.1f}x")


if __name__ == "__main__":
    main()
