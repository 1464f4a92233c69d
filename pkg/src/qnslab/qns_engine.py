"""Mean-value inequality test battery.

Estimates the best multiplicative constant K for the ball-mean inequality
``u(x) <= K * mean_B u`` over finite probe grids (a certified lower bound for
the true constant; pass verdicts carry standard-error slack), runs the
analogous test over similarity images of a marked set, converts between the
ball and image constants, measures indicator densities, checks scale-function
admissibility, and evaluates scale-homogeneous shape functionals.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

log = logging.getLogger(__name__)

from .fields import DomainError, Field
from .geometry import Ball, Similarity, unit_ball_volume
from .quadrature import ContainmentError, QuadratureSpec, mean_over_ball, mean_over_image
from .radius_sets import RadiusSet, log_eps_net
from .regions import MarkedSet, Rect, Region

DEFAULT_PROBE_SPEC = QuadratureSpec(method="mc", target_rel_error=0.1, max_samples=8192)


# -- ball probe grids ----------------------------------------------------------


@dataclass(frozen=True)
class BallProbeGrid:
    """Tensor grid of centers times log-spaced radii.

    Radii may be restricted to a radius set; probes whose closed ball leaves
    the domain are skipped and counted, not fatal.
    """

    center_resolution: int = 9
    radii_per_center: int = 8
    radius_range: Optional[tuple[float, float]] = None
    radius_set: Optional[RadiusSet] = None

    def centers(self, inside: Region) -> np.ndarray:
        lo, hi = inside.bbox
        margin = 1e-9 * float(np.max(hi - lo))
        axes = [np.linspace(lo[k] + margin, hi[k] - margin, self.center_resolution) for k in range(inside.dim)]
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=1)
        return pts[inside.contains_many(pts).astype(bool)]

    def radii(self, omega: Region) -> list[float]:
        if self.radius_range is not None:
            r_lo, r_hi = self.radius_range
        else:
            lo, hi = omega.bbox
            r_hi = 0.49 * float(np.min(hi - lo))
            r_lo = r_hi / 64.0
        if r_lo <= 0 or r_hi < r_lo:
            raise ValueError("invalid probe radius range")
        if self.radius_set is None:
            return list(np.geomspace(r_lo, r_hi, self.radii_per_center))
        out: list[float] = []
        if self.radius_set.form == "elements":
            out = [e for e in self.radius_set.elements if r_lo <= e <= r_hi]
        else:
            if self.radius_set.form == "intervals":
                ivs = self.radius_set.intervals
            else:
                ivs = self.radius_set.family.intervals_between(r_lo, r_hi)
            for a, b in ivs:
                a2, b2 = max(a, r_lo), min(b, r_hi)
                if a2 > b2:
                    continue
                if a2 == b2:
                    out.append(a2)
                else:
                    out.extend(np.geomspace(a2, b2, max(2, self.radii_per_center // 2)))
        return sorted(set(out))


@dataclass
class ProbeOutcome:
    center: tuple[float, ...]
    radius: float
    value: float
    mean: float
    stderr: float
    ratio: float


@dataclass
class KEstimate:
    """Supremum of u(x) / (ball mean of u) over a finite probe grid."""

    k_hat: float
    witness: Optional[dict]
    probes_used: int
    probes_skipped: int
    stderr_max: float
    vacuous: bool
    seed: int
    workers: int
    method: str
    note: str = "K_hat is a certified lower bound for the true constant; pass verdicts use stderr slack"

    def to_json(self) -> dict:
        return {
            "verdict": "vacuously-true" if self.vacuous else "estimated",
            "K_hat": self.k_hat,
            "witness": self.witness,
            "probes": {"used": self.probes_used, "skipped": self.probes_skipped},
            "seed": self.seed,
            "worker_count": self.workers,
            "quadrature": {"method": self.method, "stderr_max": self.stderr_max},
            "note": self.note,
        }


def _iter_ball_probes(u: Field, omega: Region, grid: BallProbeGrid, spec: QuadratureSpec):
    """Yield (index, center, radius, value, MeanResult); skip containment violations."""
    centers = grid.centers(omega)
    radii = grid.radii(omega)
    idx = 0
    skipped = 0
    for c in centers:
        c_t = tuple(float(v) for v in c)
        for r in radii:
            idx += 1
            probe_spec = spec.child(f"ball:{idx}")
            try:
                res = mean_over_ball(u, Ball(c_t, float(r)), probe_spec)
            except ContainmentError as exc:
                log.debug("probe %d skipped: %s", idx, exc)
                skipped += 1
                continue
            val = float(u.evaluate_many(np.asarray([c_t]), check_domain=False)[0])
            yield idx, c_t, float(r), val, res
    yield -skipped - 1, None, 0.0, 0.0, None  # sentinel carrying the skip count


def estimate_K(
    u: Field,
    omega: Region,
    probes: BallProbeGrid = BallProbeGrid(),
    spec: QuadratureSpec = DEFAULT_PROBE_SPEC,
) -> KEstimate:
    """Largest observed ratio u(x) / mean over the probe grid.

    Probes with u(x) = 0 = mean are vacuous and skipped.  The reduction is
    order-independent: ties in the ratio break on the probe index.
    """
    if omega.dim != u.dim:
        raise ValueError("field and region dimensions differ")
    best = (-math.inf, -1)
    witness = None
    used = 0
    skipped = 0
    stderr_max = 0.0
    for idx, c, r, val, res in _iter_ball_probes(u, omega, probes, spec):
        if res is None:
            skipped = -idx - 1
            continue
        if res.mean <= 0.0:
            if val <= 0.0:
                continue  # 0/0 probe: the inequality is vacuous there
            ratio = math.inf
        else:
            ratio = val / res.mean
        used += 1
        stderr_max = max(stderr_max, res.stderr)
        if (ratio, -idx) > (best[0], -best[1]):
            best = (ratio, idx)
            witness = {"center": list(c), "radius": r, "value": val, "mean": res.mean, "stderr": res.stderr}
    if used == 0:
        return KEstimate(0.0, None, 0, skipped, 0.0, True, spec.seed, spec.workers, spec.method)
    return KEstimate(best[0], witness, used, skipped, stderr_max, False, spec.seed, spec.workers, spec.method)


@dataclass
class CheckReport:
    passed: bool
    k: float
    failures: list
    probes_used: int
    probes_skipped: int
    stderr_max: float
    seed: int
    workers: int
    method: str

    def to_json(self) -> dict:
        return {
            "verdict": "pass" if self.passed else "fail",
            "K": self.k,
            "failures": self.failures,
            "probes": {"used": self.probes_used, "skipped": self.probes_skipped},
            "seed": self.seed,
            "worker_count": self.workers,
            "quadrature": {"method": self.method, "stderr_max": self.stderr_max},
        }


def check_K(
    u: Field,
    omega: Region,
    k: float,
    probes: BallProbeGrid = BallProbeGrid(),
    spec: QuadratureSpec = DEFAULT_PROBE_SPEC,
) -> CheckReport:
    """Verify u(x) <= K * mean + 3 * stderr at every admissible probe."""
    if k < 1:
        raise ValueError("the mean-inequality constant must satisfy K >= 1")
    failures = []
    used = 0
    skipped = 0
    stderr_max = 0.0
    for idx, c, r, val, res in _iter_ball_probes(u, omega, probes, spec):
        if res is None:
            skipped = -idx - 1
            continue
        used += 1
        stderr_max = max(stderr_max, res.stderr)
        if val > k * res.mean + 3.0 * res.stderr:
            failures.append(
                {"center": list(c), "radius": r, "value": val, "mean": res.mean,
                 "stderr": res.stderr, "ratio": (val / res.mean if res.mean > 0 else math.inf)}
            )
    return CheckReport(not failures, k, failures, used, skipped, stderr_max, spec.seed, spec.workers, spec.method)


@dataclass
class DensityReport:
    inf_ratio: float
    witness: Optional[dict]
    k: float
    compatible: bool
    probes_used: int
    probes_skipped: int
    seed: int

    def to_json(self) -> dict:
        return {
            "verdict": "ok" if self.compatible else "not QNS-compatible",
            "inf_ratio": self.inf_ratio,
            "K": self.k if self.compatible else "inf",
            "witness": self.witness,
            "probes": {"used": self.probes_used, "skipped": self.probes_skipped},
            "seed": self.seed,
        }


def indicator_density(
    gamma: Region,
    omega: Region,
    probes: BallProbeGrid = BallProbeGrid(),
    spec: QuadratureSpec = DEFAULT_PROBE_SPEC,
) -> DensityReport:
    """Infimum over probes of m(Γ ∩ B) / m(B), for probe centers in Γ.

    The reciprocal of a positive infimum is the indicator's mean-inequality
    constant; an infimum at 0 (within slack) reports the pair as not
    QNS-compatible.
    """
    from .fields import indicator_field

    u = indicator_field(gamma, omega)
    worst = (math.inf, -1)
    witness = None
    used = 0
    skipped = 0
    centers = probes.centers(gamma)
    radii = probes.radii(omega)
    idx = 0
    for c in centers:
        c_t = tuple(float(v) for v in c)
        for r in radii:
            idx += 1
            probe_spec = spec.child(f"density:{idx}")
            try:
                res = mean_over_ball(u, Ball(c_t, float(r)), probe_spec)
            except ContainmentError:
                skipped += 1
                continue
            used += 1
            if (res.mean, idx) < (worst[0], worst[1]):
                worst = (res.mean, idx)
                witness = {"center": list(c_t), "radius": float(r), "mean": res.mean, "stderr": res.stderr}
    inf_ratio = worst[0] if used else math.inf
    tol = 3.0 * (witness["stderr"] if witness else 0.0)
    compatible = used > 0 and inf_ratio > tol
    return DensityReport(
        inf_ratio, witness, (1.0 / inf_ratio if inf_ratio > 0 else math.inf),
        compatible, used, skipped, spec.seed,
    )


# -- ball/image constant conversion ---------------------------------------------


def image_constant_from_ball_constant(k: float, d: MarkedSet) -> float:
    """The image-mean constant implied by a ball-mean constant: K * (R/r)^n."""
    if k < 1:
        raise ValueError("need K >= 1")
    return k * (d.outer_radius / d.inner_radius) ** d.dim


def ball_constant_from_image_constant(c: float, d: MarkedSet) -> float:
    """The ball-mean constant implied by an image-mean constant: C * v_n R^n / m(D)."""
    if c < 1:
        raise ValueError("need C >= 1")
    return c * unit_ball_volume(d.dim) * d.outer_radius**d.dim / d.measure


# -- the generalized (similarity image) test -------------------------------------


@dataclass(frozen=True)
class ScaleFunction:
    """A positive function of the similarity scale, sampled on a log grid."""

    fn: Callable[[float], float]
    window: tuple[float, float]
    grid: int = 2048

    def sample(self) -> tuple[np.ndarray, np.ndarray]:
        ks = np.geomspace(self.window[0], self.window[1], self.grid)
        vals = np.array([self.fn(float(k)) for k in ks])
        if np.any(vals <= 0) or not np.all(np.isfinite(vals)):
            raise ValueError("scale function must be positive and finite on the window")
        return ks, vals

    def c_bound(self) -> float:
        ks, vals = self.sample()
        return float(np.max(vals / ks))


@dataclass(frozen=True)
class SimilarityProbeGrid:
    """Probes h = (scale, rotation/reflection, translation) with h(p_D) = x."""

    center_resolution: int = 7
    scales_per_center: int = 6
    scale_range: Optional[tuple[float, float]] = None
    rotations: int = 4
    include_reflections: bool = True

    def orthogonal_parts(self, dim: int) -> list[np.ndarray]:
        if dim != 2:
            raise ValueError("similarity probes are 2-D")
        parts = []
        for i in range(self.rotations):
            theta = 2.0 * math.pi * i / self.rotations
            c, s = math.cos(theta), math.sin(theta)
            parts.append(np.array([[c, -s], [s, c]]))
        if self.include_reflections:
            parts.append(np.array([[1.0, 0.0], [0.0, -1.0]]))
        return parts

    def scales(self, omega: Region, d: MarkedSet) -> np.ndarray:
        if self.scale_range is not None:
            k_lo, k_hi = self.scale_range
        else:
            lo, hi = omega.bbox
            k_hi = 0.49 * float(np.min(hi - lo)) / d.outer_radius
            k_lo = k_hi / 64.0
        return np.geomspace(k_lo, k_hi, self.scales_per_center)


def generalized_test(
    u: Field,
    omega: Region,
    d: MarkedSet,
    f: Optional[ScaleFunction],
    sims: SimilarityProbeGrid = SimilarityProbeGrid(),
    spec: QuadratureSpec = DEFAULT_PROBE_SPEC,
) -> KEstimate:
    """Supremum of u(x) * norm(h) / integral of u over h(D).

    With ``f`` given the normalizer is f(scale)^n; otherwise it is the measure
    of h(D) (so the ratio is u(x) over the image mean).  Inadmissible
    similarities (image leaving the domain) are skipped; an empty admissible
    set reports a vacuous pass.
    """
    if not (u.dim == omega.dim == d.dim == 2):
        raise ValueError("the generalized test is 2-D")
    if f is not None:
        f.sample()  # rejects nonpositive scale functions up front
    p_d = np.asarray(d.marked_point)
    grid = BallProbeGrid(center_resolution=sims.center_resolution)
    centers = grid.centers(omega)
    scales = sims.scales(omega, d)
    parts = sims.orthogonal_parts(2)
    hull = _admissibility_samples(d)
    base_spec = spec if spec.method != "grid" else replace(spec, method="mc")
    m_d = d.measure
    best = (-math.inf, -1)
    witness = None
    used = 0
    skipped = 0
    stderr_max = 0.0
    idx = 0
    for c in centers:
        x = np.asarray(c, dtype=np.float64)
        for k in scales:
            for T in parts:
                idx += 1
                h = Similarity(float(k), T, tuple(x - float(k) * (T @ p_d)))
                mapped = h.apply_many(hull)
                if not omega.contains_many(mapped).astype(bool).all():
                    skipped += 1
                    continue
                probe_spec = base_spec.child(f"sim:{idx}")
                try:
                    res = mean_over_image(u, d, h, probe_spec)
                except DomainError:
                    skipped += 1
                    continue
                val = float(u.evaluate_many(x[None, :], check_domain=False)[0])
                integral = res.mean * (float(k) ** 2) * m_d
                if f is None:
                    norm = (float(k) ** 2) * m_d  # == m(h(D))
                else:
                    norm = f.fn(float(k)) ** 2
                if integral <= 0.0:
                    if val <= 0.0:
                        continue
                    ratio = math.inf
                else:
                    ratio = val * norm / integral
                used += 1
                stderr_max = max(stderr_max, res.stderr)
                if (ratio, -idx) > (best[0], -best[1]):
                    best = (ratio, idx)
                    witness = {
                        "center": [float(v) for v in x],
                        "scale": float(k),
                        "mean": res.mean,
                        "stderr": res.stderr,
                    }
    if used == 0:
        return KEstimate(0.0, None, 0, skipped, 0.0, True, spec.seed, spec.workers, spec.method)
    return KEstimate(best[0], witness, used, skipped, stderr_max, False, spec.seed, spec.workers, spec.method)


def _admissibility_samples(d: MarkedSet, n: int = 192) -> np.ndarray:
    """Boundary plus a few interior points of D, used to pre-check h(D) ⊆ Ω."""
    pts = d.region.boundary_samples(n)
    inner = np.asarray(d.marked_point)[None, :]
    return np.concatenate([pts, inner], axis=0)


# -- scale-function admissibility -------------------------------------------------


@dataclass
class ThresholdSetReport:
    t: float
    intervals: list
    eps_star: float
    log_gaps: list
    growing: bool
    admissible_at_t: bool


@dataclass
class FAdmissibilityReport:
    c_window: float
    entries: list
    admissible: bool
    window: tuple[float, float]
    eps_threshold: float

    def to_json(self) -> dict:
        def enc(x):
            return "inf" if isinstance(x, float) and math.isinf(x) else x

        return {
            "verdict": "admissible on window" if self.admissible else "not admissible",
            "c_window": self.c_window,
            "window": list(self.window),
            "eps_threshold": self.eps_threshold,
            "thresholds": [
                {
                    "t": e.t,
                    "intervals": e.intervals,
                    "eps_star": enc(e.eps_star),
                    "log_gaps": e.log_gaps,
                    "growing": e.growing,
                    "admissible_at_t": e.admissible_at_t,
                }
                for e in self.entries
            ],
        }


def _threshold_set_intervals(f: ScaleFunction, t: float, refine: int = 40) -> list[tuple[float, float]]:
    """Intervals of {k in window : f(k) >= t*k}, endpoints refined by bisection."""
    ks, vals = f.sample()
    mask = vals >= t * ks
    out = []
    i = 0
    n = len(ks)

    def g(k: float) -> float:
        return f.fn(k) - t * k

    while i < n:
        if not mask[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and mask[j + 1]:
            j += 1
        lo = ks[i]
        hi = ks[j]
        if i > 0:
            a, b = ks[i - 1], ks[i]
            for _ in range(refine):
                mid = math.sqrt(a * b)
                if g(mid) >= 0:
                    b = mid
                else:
                    a = mid
            lo = b
        if j + 1 < n:
            a, b = ks[j], ks[j + 1]
            for _ in range(refine):
                mid = math.sqrt(a * b)
                if g(mid) >= 0:
                    a = mid
                else:
                    b = mid
            hi = a
        if hi > lo:
            out.append((float(lo), float(hi)))
        i = j + 1
    return out


def f_admissibility(
    f: ScaleFunction,
    t_grid: tuple[float, ...] = (0.5, 0.75, 1.0, 1.25),
    eps_threshold: float = 1.0,
) -> FAdmissibilityReport:
    """Window admissibility of a scale function.

    Reports the minimal linear bound c on the window, and for each threshold t
    the set {f >= t*k} with the ε-net radius of its log image.  Admissible on
    the window when some threshold yields a small ε-net radius without the
    low-end log-gaps growing (growth toward the window's lower end is the
    divergence signature, reported as such).
    """
    c_window = f.c_bound()
    entries = []
    admissible = False
    for t in t_grid:
        ivs = _threshold_set_intervals(f, t)
        if not ivs:
            entries.append(ThresholdSetReport(t, [], math.inf, [], False, False))
            continue
        a_t = RadiusSet("intervals", f.window, intervals=tuple(ivs))
        eps = log_eps_net(a_t).eps_star
        gaps = []
        for g in a_t.window_gaps():
            if g["headless"]:
                continue
            gaps.append(float(math.log(min(g["hi"], f.window[1]) / g["lo"])))
        growing = len(gaps) >= 3 and gaps[0] == max(gaps) and gaps[0] > gaps[1] > gaps[2]
        ok = (eps <= eps_threshold) and not growing
        admissible = admissible or ok
        entries.append(
            ThresholdSetReport(t, [[a, b] for a, b in ivs[:64]], eps, gaps[:64], growing, ok)
        )
    return FAdmissibilityReport(c_window, entries, admissible, f.window, eps_threshold)


# -- scale-homogeneous shape functionals ------------------------------------------


def _boundary_length(d: Region) -> float:
    if len(d.primitives) != 1:
        raise ValueError("shape functionals take a single-primitive 2-D region")
    p = d.primitives[0]
    if isinstance(p, Ball):
        if p.dim != 2:
            raise ValueError("shape functionals are 2-D")
        return 2.0 * math.pi * p.radius
    if isinstance(p, Rect):
        if p.dim != 2:
            raise ValueError("shape functionals are 2-D")
        return 2.0 * ((p.hi[0] - p.lo[0]) + (p.hi[1] - p.lo[1]))
    edges = 0.0
    v = p.vertices
    for i in range(len(v)):
        x0, y0 = v[i]
        x1, y1 = v[(i + 1) % len(v)]
        edges += math.hypot(x1 - x0, y1 - y0)
    return edges


PHI_KINDS = ("boundary_h1", "perimeter", "isoperimetric_deficit")


def phi_functional(kind: str, d: Region, h: Similarity) -> float:
    """Scale-homogeneous functionals of the image h(D) for disk/polygon D.

    boundary_h1 and perimeter are the boundary length of h(D); the
    isoperimetric deficit is sqrt(L^2 - 4*pi*area), positive exactly for
    non-disks, so a disk input is rejected for that kind.
    """
    if kind not in PHI_KINDS:
        raise ValueError(f"unknown functional kind {kind!r}")
    length = _boundary_length(d)
    if kind in ("boundary_h1", "perimeter"):
        return h.scale * length
    if isinstance(d.primitives[0], Ball):
        raise ValueError("the isoperimetric deficit of a disk is 0; the functional must stay positive")
    area = d.measure()
    return h.scale * math.sqrt(length * length - 4.0 * math.pi * area)
