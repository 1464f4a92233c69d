"""Throughput comparison: compiled membership kernel vs the numpy fallback.

Run:  python benchmarks/bench_kernels.py [--points 2000000]

The two backends return bit-identical masks (asserted here), so the only
difference is speed.  Region membership is the hot kernel behind every Monte
Carlo mean in the package.
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from qnslab import _kernels_py
from qnslab.geometry import Ball
from qnslab.quadrature import QuadratureSpec, mean_over_ball
from qnslab.fields import indicator_field
from qnslab.regions import Polygon, Rect, Region

try:
    from qnslab import _kernels

    BACKENDS = [("compiled", _kernels), ("python", _kernels_py)]
except ImportError:
    print("compiled kernel not built; benchmarking the fallback only")
    BACKENDS = [("python", _kernels_py)]


def make_regions():
    ring = [Ball((math.cos(t), math.sin(t)), 0.5) for t in np.linspace(0, 2 * math.pi, 10, endpoint=False)]
    gon = Polygon(tuple((math.cos(t), math.sin(t)) for t in np.linspace(0, 2 * math.pi, 24, endpoint=False)))
    return {
        "single ball": Region((Ball((0.0, 0.0), 1.0),)),
        "10-ball ring": Region(tuple(ring)),
        "mixed (ball+rect+24-gon)": Region((Ball((0.0, 0.0), 1.0), Rect((-1.0, -1.0), (1.0, 1.0)), gon)),
    }


def bench_membership(n_points: int):
    rng = np.random.Generator(np.random.PCG64(0))
    pts = np.ascontiguousarray(rng.uniform(-2.0, 2.0, size=(n_points, 2)))
    print(f"\nmembership kernel, {n_points:,} points")
    print(f"{'region':<28}{'backend':<10}{'Mpts/s':>9}{'speedup':>9}")
    for name, region in make_regions().items():
        d = region._data
        rates = {}
        masks = {}
        for backend_name, impl in BACKENDS:
            impl.contains_many(d.dim, d.types, d.closed, d.offsets, d.payload, pts[:1000])  # warm up
            t0 = time.perf_counter()
            masks[backend_name] = impl.contains_many(d.dim, d.types, d.closed, d.offsets, d.payload, pts)
            dt = time.perf_counter() - t0
            rates[backend_name] = n_points / dt / 1e6
        if len(masks) == 2:
            assert np.array_equal(np.asarray(masks["compiled"]), np.asarray(masks["python"])), name
        base = rates.get("python", next(iter(rates.values())))
        for backend_name, rate in rates.items():
            print(f"{name:<28}{backend_name:<10}{rate:9.1f}{rate / base:9.2f}x")


def bench_mean(n_samples: int = 200_000):
    import qnslab.backend as backend_mod

    omega = Region((Ball((0.0, 0.0), 2.0),))
    support = Region((Ball((0.0, 0.0), 1.0, closed=True),))
    chi = indicator_field(support, omega)
    spec = QuadratureSpec(method="mc", target_rel_error=1e-4, max_samples=n_samples, seed=3)
    print(f"\nend-to-end indicator ball mean, {n_samples:,} samples (active backend: {backend_mod.backend_name()})")
    results = {}
    for backend_name, impl in BACKENDS:
        backend_mod.contains_many = impl.contains_many
        t0 = time.perf_counter()
        res = mean_over_ball(chi, Ball((0.2, 0.1), 1.5), spec)
        dt = time.perf_counter() - t0
        results[backend_name] = (res, dt)
        print(f"  {backend_name:<10} mean={res.mean:.6f}  stderr={res.stderr:.2e}  {dt * 1e3:8.1f} ms")
    backend_mod.contains_many = BACKENDS[0][1].contains_many
    if len(results) == 2:
        a, b = results["compiled"][0], results["python"][0]
        assert a == b, "backends disagree on the estimate"
        print("  estimates are bit-identical across backends")


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--points", type=int, default=2_000_000)
    args = parser.parse_args()
    bench_membership(args.points)
    bench_mean()
