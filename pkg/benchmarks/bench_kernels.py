"""Time the batched IK kernel: numba loops vs vectorised numpy vs plain python.

    python3 benchmarks/bench_kernels.py --samples 100000

The scalar object route (solve_position / solve_velocity / solve_acceleration
per sample) is timed on a smaller slice since it is orders of magnitude slower.
"""
import argparse
import time

import numpy as np

from prp3 import PlatformState, default_geometry, solve_acceleration, solve_position, solve_velocity
from prp3 import _kernels


def best_of(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def random_batch(rng, n):
    poses = np.column_stack([rng.uniform(-0.1, 0.1, n), rng.uniform(-0.1, 0.1, n),
                             rng.uniform(-1.0, 0.9, n)])
    vels = rng.uniform(-0.2, 0.2, (n, 3))
    accs = rng.uniform(-0.2, 0.2, (n, 3))
    return poses, vels, accs


def scalar_route(geom, poses, vels, accs):
    out = np.empty((len(poses), 3, 6))
    for i in range(len(poses)):
        state = PlatformState.from_arrays(poses[i], vels[i], accs[i])
        sol = solve_position(geom, state.pose)
        rates = solve_velocity(geom, state, sol)
        acc = solve_acceleration(geom, state, sol, rates)
        for leg in range(3):
            out[i, leg] = (sol[leg].lambda10, sol[leg].lambda32, rates[leg].v10,
                           rates[leg].v32, acc[leg].gamma10, acc[leg].gamma32)
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=100_000)
    ap.add_argument("--scalar-samples", type=int, default=2_000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    geom = default_geometry()
    poses, vels, accs = random_batch(np.random.default_rng(args.seed), args.samples)
    kw = dict(tol=1e-9)
    args_k = (geom, poses, vels, accs)

    rows = []
    ref, _ = _kernels.ik_batch(*args_k, backend="numpy", **kw)
    rows.append(("numpy (vectorised)", best_of(lambda: _kernels.ik_batch(*args_k, backend="numpy", **kw),
                                                args.repeat), args.samples, 0.0))
    if _kernels.njit is not None:
        t0 = time.perf_counter()
        got, _ = _kernels.ik_batch(*args_k, backend="numba", **kw)
        print(f"numba first call (compile or cache load): {time.perf_counter() - t0:.3f} s")
        rows.append(("numba (@njit loops)",
                     best_of(lambda: _kernels.ik_batch(*args_k, backend="numba", **kw), args.repeat),
                     args.samples, float(np.max(np.abs(got - ref)))))
    else:
        print("numba disabled or not installed, skipping the jit backend")

    m = min(args.scalar_samples, args.samples)
    small = (poses[:m], vels[:m], accs[:m])
    py_args = (float(geom.rail_offset), np.asarray(geom.alpha, dtype=float),
               np.ascontiguousarray(geom.base_anchors[:, :2]),
               float(geom.platform_anchor[1]), float(geom.platform_anchor[2]), *small, 1e-9)
    got, _ = _kernels._ik_loops(*py_args)
    rows.append(("python loops (no jit)", best_of(lambda: _kernels._ik_loops(*py_args), 1), m,
                 float(np.max(np.abs(got - ref[:m])))))
    got = scalar_route(geom, *small)
    rows.append(("scalar object route", best_of(lambda: scalar_route(geom, *small), 1), m,
                 float(np.max(np.abs(got - ref[:m])))))

    print(f"{'backend':24s} {'samples':>8s} {'total s':>10s} {'us/sample':>10s} {'max |diff|':>11s}")
    for name, dt, n, diff in rows:
        print(f"{name:24s} {n:8d} {dt:10.4f} {1e6 * dt / n:10.3f} {diff:11.2e}")


if __name__ == "__main__":
    main()
