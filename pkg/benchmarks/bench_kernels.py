"""Compare the compiled and pure-Python steppers.

    python benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Times the raw kernel (one outward sweep from the peak) and the full
``solve_for_gamma`` + ``measure`` pipeline for each available backend.
Reports the best of ``--repeat`` runs.
"""

import argparse
import json
import math
import timeit

from nliouville import integrator
from nliouville.dimension import Dimension
from nliouville.quadrature import log_grid
from nliouville.quantization import alpha0_from_gamma
from nliouville.radial_ode import SolveConfig, measure, peak_expansion, solve_for_gamma

CASES = [(2, 8 * math.pi), (3, math.pi), (4, 50.0)]


def kernel_call(backend, n, gamma, rtol):
    fn = integrator.get_backend(backend)
    a0 = alpha0_from_gamma(gamma, Dimension(n))
    s_out = log_grid(1.0, 1e8, 50)[1:]
    y0 = peak_expansion(a0, n, math.exp(1e-6))
    return lambda: fn(n, 1e-6, y0, s_out, rtol, rtol * 1e-3, 1e-6, 1_000_000)


def pipeline_call(backend, n, gamma, rtol):
    cfg = SolveConfig(rel_tol=rtol, abs_tol=rtol * 1e-3)
    dim = Dimension(n)
    return lambda: measure(solve_for_gamma(gamma, dim, cfg, backend=backend))


def best_of(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--rtol", type=float, default=1e-11)
    ap.add_argument("--json", help="also write the results here")
    args = ap.parse_args()

    backends = integrator.available_backends()
    rows = []
    for n, gamma in CASES:
        for what, make in (("kernel", kernel_call), ("pipeline", pipeline_call)):
            times = {b: best_of(make(b, n, gamma, args.rtol), args.repeat) for b in backends}
            if what == "kernel":
                steps = kernel_call(backends[0], n, gamma, args.rtol)()[1]
            else:
                cfg = SolveConfig(rel_tol=args.rtol, abs_tol=args.rtol * 1e-3)
                steps = solve_for_gamma(gamma, Dimension(n), cfg).meta["steps"]
            rows.append({"case": what, "n": n, "gamma": gamma, "steps": int(steps),
                         **{f"{b}_ms": 1e3 * t for b, t in times.items()}})

    head = f"{'case':9} {'n':>2} {'gamma':>8} {'steps':>6} " + " ".join(f"{b + ' ms':>11}" for b in backends)
    if "cython" in backends:
        head += f" {'speedup':>8}"
    print(head)
    for r in rows:
        line = f"{r['case']:9} {r['n']:>2} {r['gamma']:>8.3f} {r['steps']:>6} "
        line += " ".join(f"{r[b + '_ms']:>11.3f}" for b in backends)
        if "cython" in backends:
            line += f" {r['python_ms'] / r['cython_ms']:>7.1f}x"
        print(line)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"backends": backends, "rtol": args.rtol, "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
