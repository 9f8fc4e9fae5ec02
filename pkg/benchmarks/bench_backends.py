"""Benchmark the compiled stepping kernel against the pure-numpy fallback.

Runs the same propagation workload through both backends and reports
wall-clock times plus the cross-backend agreement of the final state.

    python benchmarks/bench_backends.py [--repeats N]
"""

import argparse
import time

import numpy as np

from jjphotond import _rk
from jjphotond.liouville import assemble, build_space, pure_state, unvec, vec
from jjphotond.params import baseline_config, validate

try:
    from jjphotond import _rkcore
except ImportError:
    _rkcore = None


CASES = (
    ("baseline n=1, 200 ns @ 0.05 ns", dict(n=1, t_end=200.0, stride=0.05)),
    ("three photons, 200 ns @ 0.05 ns", dict(n=3, t_end=200.0, stride=0.05)),
    ("bandwidth-style point, 74 ns, 2 snapshots", dict(n=1, t_end=74.0, stride=74.0)),
)


def run_case(kernel, lv, rho0, t_end, stride, repeats):
    times = np.arange(0.0, t_end + stride / 2, stride)
    y0 = vec(rho0)
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        out, n_acc, n_rej, status = kernel.propagate(
            lv.matrix, y0, times, 1e-9, 1e-12, lv.dim, np.inf, 1e-8)
        best = min(best, time.perf_counter() - t0)
    assert status == 0
    return best, unvec(out[-1], lv.dim), n_acc


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    base = validate(baseline_config())
    print(f"{'case':<45} {'python':>10} {'compiled':>10} {'speedup':>8}  agreement")
    for label, cfg in CASES:
        p = base.updated(n_init=cfg["n"], n_max=cfg["n"])
        space = build_space(p.n_max)
        lv = assemble(p, space)
        rho0 = pure_state(space, 0, p.n_init)

        t_py, final_py, steps = run_case(_rk, lv, rho0, cfg["t_end"],
                                         cfg["stride"], args.repeats)
        if _rkcore is None:
            print(f"{label:<45} {t_py:>9.3f}s {'n/a':>10} {'':>8}  "
                  f"(compiled kernel not built; {steps} steps)")
            continue
        t_cy, final_cy, _ = run_case(_rkcore, lv, rho0, cfg["t_end"],
                                     cfg["stride"], args.repeats)
        agreement = np.max(np.abs(final_py - final_cy))
        print(f"{label:<45} {t_py:>9.3f}s {t_cy:>9.3f}s {t_py / t_cy:>7.1f}x"
              f"  max|diff|={agreement:.1e} ({steps} steps)")


if __name__ == "__main__":
    main()
