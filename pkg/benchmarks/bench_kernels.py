"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat N]

Prints a table of median wall times per call and the speedup. The
end-to-end row times one optimizer cell in a subprocess per backend, since
the backend is chosen once at import.
"""

import argparse
import os
import statistics
import subprocess
import sys
import timeit

import numpy as np

from qcomm import kernels


def _median(fn, repeat):
    t = timeit.Timer(fn)
    number, _ = t.autorange()
    return statistics.median(x / number for x in t.repeat(repeat, number))


def _cell_time(pure: bool, n: int, q: float) -> float:
    code = (
        "import time; from qcomm.optimizer import OptimizeConfig, optimize_cell;"
        f"t=time.perf_counter(); optimize_cell(OptimizeConfig(n={n}, q={q}, restarts=4, seed=1));"
        "print(time.perf_counter()-t)"
    )
    env = dict(os.environ)
    env.pop("QCOMM_PURE_PYTHON", None)
    if pure:
        env["QCOMM_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    mods = kernels.backends()
    if "cython" not in mods:
        print("compiled backend not built; only the Python backend is available", file=sys.stderr)
    rng = np.random.default_rng(0)
    rows = []
    for n in (4, 8):
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        rows.append((f"index_sums n={n}", {k: (lambda m=m, a=a, b=b: m.index_sums(a, b)) for k, m in mods.items()}))
    for n in (5, 10, 15):
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        rows.append((f"lift_a n={n}", {k: (lambda m=m, a=a: m.lift_a(a, 0.5)) for k, m in mods.items()}))
        rows.append((f"lift_b n={n}", {k: (lambda m=m, a=a: m.lift_b(a, 0.5)) for k, m in mods.items()}))

    print(f"{'kernel':<18}{'python':>12}{'cython':>12}{'speedup':>10}")
    for name, fns in rows:
        t = {k: _median(f, args.repeat) for k, f in fns.items()}
        py, cy = t.get("python"), t.get("cython")
        sp = f"{py / cy:9.1f}x" if cy else "       n/a"
        print(f"{name:<18}{py * 1e3:10.3f}ms{(cy or float('nan')) * 1e3:10.3f}ms{sp}")

    py = _cell_time(True, 10, 0.5)
    cy = _cell_time(False, 10, 0.5) if "cython" in mods else float("nan")
    print(f"{'cell n=10 (4 rs)':<18}{py * 1e3:10.1f}ms{cy * 1e3:10.1f}ms{py / cy:9.1f}x")


if __name__ == "__main__":
    main()
