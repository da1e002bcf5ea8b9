"""Volume of the bounded-Hessian polytope: exact in the 3-dimensional case
(n = 2) by vertex enumeration, Monte Carlo with an annealed ball sequence for
n >= 3, facet weights by central finite differences, and the determinant
diagnostic built on the weighted-Laplacian spectrum.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

from .errors import PreconditionError, TrihiveError
from .ops import log_pseudo_det
from .polytope import (MEAN_ZERO, ConstraintSystem, HessianBound, _bound,
                       build_constraints)

TWO_E = 2.0 * math.e


@dataclass(frozen=True)
class VolumeEstimate:
    """Lebesgue volume in the polytope's own m-dimensional subspace."""

    value: float
    std_error: float
    method: str              # "exact3d" or "mc"
    sample_count: int
    levels: int

    def f_n(self, n: int) -> float:
        """Per-vertex scale |P|^(1/(n^2-1))."""
        return self.value ** (1.0 / (n * n - 1))


def helmert_basis(dim: int) -> np.ndarray:
    """Orthonormal rows spanning the sum-zero subspace of R^dim.

    Row k is (1, .., 1, -k, 0, .., 0) / sqrt(k (k+1)) with k ones.
    """
    rows = np.zeros((dim - 1, dim))
    for k in range(1, dim):
        rows[k - 1, :k] = 1.0
        rows[k - 1, k] = -k
        rows[k - 1] /= math.sqrt(k * (k + 1.0))
    return rows


def _subspace_rows(sys: ConstraintSystem) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Dense inequality rows in orthonormal coordinates of the mean-zero
    subspace, the rhs, and the basis itself."""
    if sys.variant != MEAN_ZERO:
        raise PreconditionError("volume routines use the mean-zero variant")
    basis = helmert_basis(sys.n * sys.n)
    dense = sys.matrix.toarray() @ basis.T
    return dense, sys.rhs.copy(), basis


def exact_volume_3d(sys: ConstraintSystem) -> VolumeEstimate:
    """Vertex enumeration over all row triples, then convex-hull volume.

    Only n = 2 (dimension 3) is supported; the 12 rows give at most 220
    candidate triples, so brute force is exact and instant.
    """
    if sys.n != 2:
        raise PreconditionError(f"exact volume needs n = 2, got n = {sys.n}")
    rows, rhs, _ = _subspace_rows(sys)
    verts = []
    for trio in itertools.combinations(range(rows.shape[0]), 3):
        sub = rows[list(trio)]
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        v = np.linalg.solve(sub, rhs[list(trio)])
        if np.all(rows @ v <= rhs + 1e-9):
            verts.append(v)
    pts = np.unique(np.round(np.array(verts), 12), axis=0)
    hull = ConvexHull(pts)
    return VolumeEstimate(float(hull.volume), 0.0, "exact3d", 0, 0)


@dataclass(frozen=True)
class MCVolumeConfig:
    """Annealed-volume controls; seed is required for reproducibility.

    steps_per_sample / burn_in of None scale with the body dimension m
    (2 m and 50 m), which keeps the batch-means error bars honest: with a
    fixed small step count the chain autocorrelation grows with m and the
    reported standard error understates the seed-to-seed spread.
    """

    seed: int
    samples_per_level: int = 3000
    steps_per_sample: int | None = None
    burn_in: int | None = None
    batches: int = 20

    def __post_init__(self):
        if self.samples_per_level < self.batches * 2:
            raise TrihiveError("too few samples per level for batch errors")

    def resolved(self, m: int) -> tuple[int, int]:
        steps = max(4, 2 * m) if self.steps_per_sample is None else self.steps_per_sample
        burn = max(200, 50 * m) if self.burn_in is None else self.burn_in
        return steps, burn


def _ball_log_volume(m: int, r: float) -> float:
    return 0.5 * m * math.log(math.pi) + m * math.log(r) - math.lgamma(0.5 * m + 1.0)


def _hit_and_run_ball(rows: np.ndarray, rhs: np.ndarray, radius: float,
                      x: np.ndarray, rng: np.random.Generator,
                      steps: int) -> np.ndarray:
    """Walk in {rows y <= rhs} intersected with the origin ball."""
    m = x.size
    r2 = radius * radius
    for _ in range(steps):
        d = rng.standard_normal(m)
        d /= np.linalg.norm(d)
        ad = rows @ d
        slack = rhs - rows @ x
        np.maximum(slack, 0.0, out=slack)
        pos = ad > 1e-14
        neg = ad < -1e-14
        t_hi = np.min(slack[pos] / ad[pos]) if np.any(pos) else math.inf
        t_lo = np.max(slack[neg] / ad[neg]) if np.any(neg) else -math.inf
        # ball: |x + t d|^2 = r^2 with |d| = 1
        xd = float(x @ d)
        disc = xd * xd - float(x @ x) + r2
        if disc <= 0.0:
            continue
        root = math.sqrt(disc)
        t_lo = max(t_lo, -xd - root)
        t_hi = min(t_hi, -xd + root)
        if t_hi <= t_lo:
            continue
        x = x + (t_lo + (t_hi - t_lo) * rng.random()) * d
    return x


def mc_volume_halfspaces(rows: np.ndarray, rhs: np.ndarray,
                         cfg: MCVolumeConfig, r_min: float | None = None,
                         r_max: float | None = None) -> VolumeEstimate:
    """Annealed Monte Carlo volume of {y : rows y <= rhs} in R^m.

    The ball of radius r_min (inscribed by default) gives the closed-form
    base; radii then grow by 2^(1/m) per level until the whole body is
    covered, and each level's shrink ratio is estimated by hit-and-run
    restricted to the current ball intersection.  The standard error comes
    from batch means pushed through the log-product.
    """
    rows = np.asarray(rows, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    m = rows.shape[1]
    if np.min(rhs) <= 0.0:
        raise PreconditionError("origin must be strictly interior")
    norms = np.linalg.norm(rows, axis=1)
    if r_min is None:
        r_min = float(np.min(rhs / norms))
    if r_max is None:
        raise TrihiveError("r_max is required when no constraint system is given")
    levels = max(0, math.ceil(m * math.log2(r_max / r_min)))
    radii = [r_min * 2.0 ** (i / m) for i in range(levels + 1)]
    steps, burn = cfg.resolved(m)
    log_v = _ball_log_volume(m, r_min)
    var_log = 0.0
    total = 0
    for i in range(1, levels + 1):
        rng = np.random.Generator(np.random.PCG64(
            np.random.SeedSequence((cfg.seed, i))))
        x = np.zeros(m)
        x = _hit_and_run_ball(rows, rhs, radii[i], x, rng, burn)
        inner2 = radii[i - 1] ** 2
        hits = np.empty(cfg.samples_per_level)
        for j in range(cfg.samples_per_level):
            x = _hit_and_run_ball(rows, rhs, radii[i], x, rng, steps)
            hits[j] = 1.0 if float(x @ x) <= inner2 else 0.0
        total += cfg.samples_per_level
        p = float(hits.mean())
        if p <= 0.0:
            raise TrihiveError(f"annealing level {i} saw no inner-ball hits")
        log_v += -math.log(p)
        # batch means absorb chain autocorrelation
        bmeans = hits.reshape(cfg.batches, -1).mean(axis=1)
        var_p = float(bmeans.var(ddof=1)) / cfg.batches
        var_log += var_p / (p * p)
    value = math.exp(log_v)
    return VolumeEstimate(value, value * math.sqrt(var_log), "mc",
                          total, levels)


def outer_radius(sys: ConstraintSystem) -> float:
    """Euclidean radius bound n * max ||x||_inf via one LP per signed vertex."""
    rows, rhs, basis = _subspace_rows(sys)
    best = 0.0
    for v in range(sys.n * sys.n):
        for sign in (1.0, -1.0):
            res = linprog(-sign * basis[:, v], A_ub=rows, b_ub=rhs,
                          bounds=[(None, None)] * rows.shape[1],
                          method="highs")
            if not res.success:
                raise TrihiveError(f"radius LP failed at vertex {v}: {res.message}")
            best = max(best, abs(float(res.fun)))
    return sys.n * best


def mc_volume(sys: ConstraintSystem, cfg: MCVolumeConfig) -> VolumeEstimate:
    rows, rhs, _ = _subspace_rows(sys)
    return mc_volume_halfspaces(rows, rhs, cfg, r_max=outer_radius(sys))


def _volume(n: int, s, cfg: MCVolumeConfig | None) -> VolumeEstimate:
    sys = build_constraints(n, s, MEAN_ZERO)
    if n == 2:
        return exact_volume_3d(sys)
    if cfg is None:
        raise TrihiveError("n >= 3 volume needs a Monte Carlo config")
    return mc_volume(sys, cfg)


@dataclass(frozen=True)
class FacetWeights:
    """Scaled volume derivatives (w0, w1, w2) at (n, s), step h."""

    w0: float
    w1: float
    w2: float
    n: int
    s: HessianBound
    h: float

    def as_array(self) -> np.ndarray:
        return np.array([self.w0, self.w1, self.w2], dtype=float)


def _shell_samples(n: int, s_arr: np.ndarray, cfg: MCVolumeConfig,
                   count: int, seed_tag: int) -> np.ndarray:
    """Uniform fields from P_n(s) for ratio estimators, as (count, n^2)."""
    from .sampling import SamplerConfig, sample_uniform

    sys = build_constraints(n, s_arr, MEAN_ZERO)
    scfg = SamplerConfig(master_seed=cfg.seed * 1000 + seed_tag,
                         burn_in=2000, thinning=2 * n * n)
    batch = sample_uniform(sys, scfg, count)
    return batch.values.reshape(count, -1)


def facet_weights(n: int, s, h: float | None = None,
                  cfg: MCVolumeConfig | None = None) -> FacetWeights:
    """Central differences of the volume in each bound component, over n^2.

    n = 2 differentiates the exact volume.  For n >= 3 the two shifted
    volumes per class come from shell ratios: a common batch from P_n(s)
    gives vol(s - h e_r)/vol(s) as the fraction of samples still feasible
    after tightening class r, and a batch from P_n(s + h e_r) gives
    vol(s)/vol(s + h e_r) the same way, so one Monte Carlo volume of P_n(s)
    anchors all six shifted values (common random numbers across classes).
    """
    s = _bound(s)
    s_arr = s.as_array()
    if h is None:
        h = (1e-3 if n == 2 else 0.05) * float(np.min(s_arr))
    nsq = n * n
    if n == 2:
        vols = []
        for r in range(3):
            for sign in (1.0, -1.0):
                shifted = s_arr.copy()
                shifted[r] += sign * h
                vols.append(_volume(2, shifted, None).value)
        w = [(vols[2 * r] - vols[2 * r + 1]) / (2.0 * h * nsq) for r in range(3)]
        return FacetWeights(*w, n=n, s=s, h=h)
    if cfg is None:
        raise TrihiveError("n >= 3 facet weights need a Monte Carlo config")
    base = _volume(n, s_arr, cfg)
    count = max(2000, cfg.samples_per_level)
    base_batch = _shell_samples(n, s_arr, cfg, count, seed_tag=0)
    base_sys = build_constraints(n, s_arr, MEAN_ZERO)
    w = []
    for r in range(3):
        tight = s_arr.copy()
        tight[r] -= h
        tight_rhs = np.repeat(tight, nsq)
        inside = np.all(base_sys.matrix @ base_batch.T
                        <= tight_rhs[:, None] + 1e-12, axis=0)
        v_minus = base.value * float(inside.mean())

        wide = s_arr.copy()
        wide[r] += h
        wide_batch = _shell_samples(n, wide, cfg, count, seed_tag=1 + r)
        base_rhs = np.repeat(s_arr, nsq)
        keep = np.all(base_sys.matrix @ wide_batch.T
                      <= base_rhs[:, None] + 1e-12, axis=0)
        frac = float(keep.mean())
        if frac <= 0.0:
            raise TrihiveError(f"no overlap samples for class {r}")
        v_plus = base.value / frac
        w.append((v_plus - v_minus) / (2.0 * h * nsq))
    return FacetWeights(*w, n=n, s=s, h=h)


@dataclass(frozen=True)
class DetBoundReport:
    """The diagnostic |det_hat|^(1/m) |P|^(1/m) and its 2e comparison."""

    product: float
    bound_ok: bool
    volume: float
    weights: FacetWeights


def det_bound_report(n: int, s, cfg: MCVolumeConfig | None = None) -> DetBoundReport:
    """Normalized-weight pseudo-determinant scale against the 2e cap.

    Weights are divided by the volume before entering the spectrum, and the
    m-th roots of |pseudo det| and volume are combined in log space.
    """
    s = _bound(s)
    vol = _volume(n, s.as_array(), cfg)
    weights = facet_weights(n, s, cfg=cfg)
    m = n * n - 1
    w_hat = weights.as_array() / vol.value
    log_det = log_pseudo_det(n, w_hat)
    product = math.exp((log_det + math.log(vol.value)) / m)
    return DetBoundReport(product, product <= TWO_E, vol.value, weights)


def euler_residual(n: int, s, volume: float, weights: FacetWeights) -> float:
    """Relative residual of sum_r s_r w_r = ((n^2-1)/n^2) |P|."""
    s = _bound(s)
    lhs = float(s.as_array() @ weights.as_array())
    rhs = (n * n - 1) / (n * n) * volume
    return abs(lhs - rhs) / abs(rhs)


def volume_report(n: int, s, cfg: MCVolumeConfig | None = None) -> dict:
    """JSON-ready summary used by the command line."""
    s = _bound(s)
    est = _volume(n, s.as_array(), cfg)
    weights = facet_weights(n, s, cfg=cfg)
    w_hat = weights.as_array() / est.value
    m = n * n - 1
    det_product = math.exp((log_pseudo_det(n, w_hat) + math.log(est.value)) / m)
    return {
        "schema": "trihive.volume.v1",
        "n": n,
        "s": list(s.as_array()),
        "method": est.method,
        "volume": est.value,
        "std_error": est.std_error,
        "f_n": est.f_n(n),
        "weights": list(weights.as_array()),
        "euler_residual": euler_residual(n, s, est.value, weights),
        "det_product": det_product,
    }
