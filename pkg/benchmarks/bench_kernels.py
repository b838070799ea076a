"""Time the numba kernels against the pure-numpy fallback.

Each backend runs in its own interpreter because the switch is read at
import time.  Usage::

    python benchmarks/bench_kernels.py [--repeat 3] [--only numba]

The first numba call per kernel includes compilation (or a cache load);
the table reports the best of ``--repeat`` warm runs, plus the cold run.
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOADS = {
    "exact_expander_n14": (
        "g = generate({'kind': 'gnp', 'n': 14, 'p': 0.5, 'seed': 1})\n"
        "run = lambda: check_robust_expander(g, ExpanderParams(0.05, 1), 'exact')"
    ),
    "sampled_expander_n300": (
        "g = generate({'kind': 'gnp', 'n': 300, 'p': 0.05, 'seed': 2})\n"
        "run = lambda: check_robust_expander(g, ExpanderParams(0.05, 1), 'sampled', trials=200)"
    ),
    "crux_exact_k8q3": (
        "gs = [generate({'kind': 'complete', 'n': 8}), generate({'kind': 'hypercube', 'dim': 3})]\n"
        "run = lambda: [crux_exact(g, '1/2') for g in gs]"
    ),
    "pipeline_gnp128": (
        "g = generate({'kind': 'gnp', 'n': 128, 'p': 0.3, 'seed': 3})\n"
        "run = lambda: pipeline_find_subdivision(g)"
    ),
}

RUNNER = """
import json, time
from crux_subdiv import backend_name, generate
from crux_subdiv.expansion import ExpanderParams, check_robust_expander
from crux_subdiv.crux import crux_exact
from crux_subdiv.pipeline import pipeline_find_subdivision
{setup}
t0 = time.perf_counter(); run(); cold = time.perf_counter() - t0
warm = []
for _ in range({repeat}):
    t0 = time.perf_counter(); run(); warm.append(time.perf_counter() - t0)
print(json.dumps({{"backend": backend_name(), "cold": cold, "warm": min(warm)}}))
"""


def measure(backend: str, setup: str, repeat: int) -> dict:
    env = dict(os.environ, CRUX_SUBDIV_BACKEND=backend)
    code = RUNNER.format(setup=setup, repeat=repeat)
    proc = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--only", choices=("numba", "numpy"))
    ap.add_argument("--workload", choices=sorted(WORKLOADS), action="append")
    args = ap.parse_args(argv)
    backends = [args.only] if args.only else ["numba", "numpy"]
    names = args.workload or list(WORKLOADS)

    print(f"{'workload':<24}{'backend':<8}{'cold s':>10}{'warm s':>10}")
    for name in names:
        warm = {}
        for backend in backends:
            res = measure(backend, WORKLOADS[name], args.repeat)
            warm[backend] = res["warm"]
            print(f"{name:<24}{res['backend']:<8}{res['cold']:>10.3f}{res['warm']:>10.3f}")
        if len(warm) == 2 and warm["numba"] > 0:
            print(f"{'':<24}speedup {warm['numpy'] / warm['numba']:.1f}x")


if __name__ == "__main__":
    main()
