"""Compare the compiled and pure-Python polynomial kernels.

    python3 benchmarks/bench_kernels.py [--repeat N] [--seed N] [--json]

Times ``mul`` and ``translate`` on random sparse polynomials, checks that
both backends return identical dicts, and times one module-axiom sweep
end to end with each backend.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import subprocess
import sys
import time

from divzero import _kernels_py
from divzero.poly import Poly
from divzero.scalar import Scalar

try:
    from divzero import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def _random_terms(rng: random.Random, n: int, size: int, deg: int) -> dict:
    terms = {}
    for _ in range(size):
        e = tuple(rng.randint(0, deg) for _ in range(n))
        terms[e] = Scalar(rng.randint(-20, 20) or 1) / rng.randint(1, 10)
    return Poly(n, terms).terms


def _time(fn, cases, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for args in cases:
            fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_table(seed: int, repeat: int) -> list[dict]:
    rng = random.Random(seed)
    rows = []
    for n, size, deg in ((2, 8, 4), (3, 12, 4), (4, 16, 3)):
        pairs = [(_random_terms(rng, n, size, deg), _random_terms(rng, n, size, deg))
                 for _ in range(200)]
        shifts = [(a, tuple(rng.randint(-4, 4) for _ in range(n))) for a, _ in pairs]
        for op, cases in (("mul", pairs), ("translate", shifts)):
            row = {"op": op, "n": n, "terms": size, "cases": len(cases),
                   "python_s": _time(getattr(_kernels_py, op), cases, repeat)}
            if _kernels_c is not None:
                fc = getattr(_kernels_c, op)
                row["cython_s"] = _time(fc, cases, repeat)
                row["speedup"] = row["python_s"] / row["cython_s"]
                row["identical"] = all(fc(*c) == getattr(_kernels_py, op)(*c) for c in cases)
            rows.append(row)
    return rows


_SWEEP = ("from divzero.suites import run_suite; from divzero.sampling import SuiteConfig;"
          "import time; t=time.perf_counter();"
          "r=run_suite('module-axioms', SuiteConfig(n=3, samples=100, seed={seed}));"
          "print(time.perf_counter()-t, r['pass'])")


def sweep(seed: int, pure: bool) -> tuple[float, bool]:
    env = dict(os.environ)
    if pure:
        env["DIVZERO_PURE_PYTHON"] = "1"
    else:
        env.pop("DIVZERO_PURE_PYTHON", None)
    out = subprocess.run([sys.executable, "-c", _SWEEP.format(seed=seed)], env=env,
                         capture_output=True, text=True, check=True).stdout.split()
    return float(out[0]), out[1] == "True"


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    rows = kernel_table(args.seed, args.repeat)
    sweeps = {"python": sweep(args.seed, True)}
    if _kernels_c is not None:
        sweeps["cython"] = sweep(args.seed, False)
    if args.json:
        print(json.dumps({"kernels": rows, "module_axiom_sweep": sweeps}, indent=2))
        return 0
    print(f"{'op':<10}{'n':>3}{'terms':>7}{'python s':>11}{'cython s':>11}{'speedup':>9}  same")
    for r in rows:
        print(f"{r['op']:<10}{r['n']:>3}{r['terms']:>7}{r['python_s']:>11.4f}"
              f"{r.get('cython_s', float('nan')):>11.4f}{r.get('speedup', float('nan')):>9.2f}"
              f"  {r.get('identical', '-')}")
    for name, (secs, ok) in sweeps.items():
        print(f"module-axioms sweep (n=3, 300 checks), {name}: {secs:.2f} s, pass={ok}")
    return 0 if all(r.get("identical", True) for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
