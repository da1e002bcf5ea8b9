"""Uniform sampling from the bounded-Hessian polytope by hit-and-run.

The walk lives on the polytope's affine subspace (mean-zero, or anchored at
vertex 0).  Each step draws a Gaussian direction projected onto the subspace,
intersects the line with all inequality rows by ratio tests, and jumps to a
uniform point of the resulting chord.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (DegenerateDirectionError, PreconditionError,
                     TrihiveError)
from .polytope import ANCHORED, MEAN_ZERO, ConstraintSystem, build_constraints

_ZERO_DIR_TOL = 1e-14


@dataclass(frozen=True)
class SamplerConfig:
    """Reproducibility knobs.

    burn_in / thinning of None select the defaults 20 n^4 and n^2.  The
    per-chain generator is PCG64 seeded with SeedSequence((master_seed,
    chain_index)), so batches are reproducible and chains independent.
    """

    master_seed: int
    burn_in: int | None = None
    thinning: int | None = None
    chains: int = 1

    def __post_init__(self):
        if self.burn_in is not None and self.burn_in < 0:
            raise TrihiveError("burn_in must be nonnegative")
        if self.thinning is not None and self.thinning < 1:
            raise TrihiveError("thinning must be at least 1")
        if self.chains < 1:
            raise TrihiveError("chains must be at least 1")

    def resolved(self, n: int) -> tuple[int, int]:
        burn = 20 * n ** 4 if self.burn_in is None else self.burn_in
        thin = n * n if self.thinning is None else self.thinning
        return burn, thin


@dataclass
class SampleBatch:
    """Fields drawn from the polytope, with full provenance."""

    n: int
    s: tuple
    config: SamplerConfig
    chain_ids: np.ndarray          # (count,)
    values: np.ndarray             # (count, n, n)

    def __len__(self) -> int:
        return self.values.shape[0]


def chord(sys: ConstraintSystem, x: np.ndarray, d: np.ndarray,
          tol: float = 1e-9) -> tuple[float, float]:
    """Maximal interval [t_lo, t_hi] with x + t d feasible; t_lo < 0 < t_hi.

    Rows that the direction never meets contribute nothing; if no row bounds
    one side the endpoint is +-inf (possible only for degenerate toy systems,
    since the real polytopes are bounded).
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    d = np.asarray(d, dtype=float).reshape(-1)
    slack = sys.rhs - sys.matrix @ x
    if np.min(slack) < -tol:
        raise PreconditionError("chord start point is infeasible")
    dnorm = float(np.max(np.abs(d))) if d.size else 0.0
    if dnorm <= _ZERO_DIR_TOL:
        raise DegenerateDirectionError("direction is numerically zero")
    ad = sys.matrix @ d
    slack = np.maximum(slack, 0.0)
    t_hi = math.inf
    t_lo = -math.inf
    pos = ad > _ZERO_DIR_TOL * dnorm
    neg = ad < -_ZERO_DIR_TOL * dnorm
    if np.any(pos):
        t_hi = float(np.min(slack[pos] / ad[pos]))
    if np.any(neg):
        t_lo = float(np.max(slack[neg] / ad[neg]))
    return t_lo, t_hi


def _chain_rng(master_seed: int, chain_index: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence((master_seed, chain_index))))


_RNG_BLOCK = 256


def _run_chain(sys: ConstraintSystem, rng: np.random.Generator,
               burn_in: int, thinning: int, count: int,
               membership_tol: float) -> np.ndarray:
    nsq = sys.n * sys.n
    mat = sys.matrix
    mean_zero = sys.variant == MEAN_ZERO
    x = np.zeros(nsq)
    slack = sys.rhs.copy()          # rhs - A x, kept positive
    out = np.empty((count, nsq))
    emitted = 0
    total_steps = burn_in + count * thinning if count else 0
    step = 0
    while step < total_steps:
        block = min(_RNG_BLOCK, total_steps - step)
        zs = rng.standard_normal((block, nsq))
        ts = rng.random(block)
        for b in range(block):
            d = zs[b]
            if mean_zero:
                d -= d.mean()
            else:
                d[0] = 0.0
            ad = mat @ d
            # Ratio tests without boolean gathers: divide by a sanitized
            # denominator, then mask the irrelevant rows out of the min/max.
            ratios = slack / np.where(np.abs(ad) > _ZERO_DIR_TOL, ad, 1.0)
            t_hi = float(np.min(np.where(ad > _ZERO_DIR_TOL, ratios, np.inf)))
            t_lo = float(np.max(np.where(ad < -_ZERO_DIR_TOL, ratios, -np.inf)))
            if not (math.isfinite(t_lo) and math.isfinite(t_hi)):
                raise TrihiveError("unbounded chord; the system is not a polytope")
            t = t_lo + (t_hi - t_lo) * ts[b]
            x += t * d
            slack -= t * ad
            np.maximum(slack, 0.0, out=slack)
            step += 1
            if step > burn_in and (step - burn_in) % thinning == 0:
                # Exact resync kills incremental-update drift; re-centering
                # is free because the rows annihilate constants.
                if mean_zero:
                    x -= x.mean()
                else:
                    x[0] = 0.0
                slack = sys.rhs - mat @ x
                worst = float(-np.min(slack))
                if worst > membership_tol:
                    raise TrihiveError(
                        f"sample violates constraints by {worst:.3e}")
                out[emitted] = x
                emitted += 1
    return out


def sample_uniform(sys: ConstraintSystem, cfg: SamplerConfig, count: int,
                   membership_tol: float = 1e-9) -> SampleBatch:
    """Draw `count` fields, deterministically in (cfg, count).

    Chains start at the zero field (always strictly interior) and contribute
    near-equal shares of the batch.  Every emitted field is verified against
    the constraints and has its mean (or anchor) re-zeroed exactly.
    """
    if np.min(sys.rhs) <= 0.0:
        raise PreconditionError("zero field is not strictly interior")
    if count < 0:
        raise TrihiveError("count must be nonnegative")
    burn_in, thinning = cfg.resolved(sys.n)
    shares = [count // cfg.chains + (1 if c < count % cfg.chains else 0)
              for c in range(cfg.chains)]
    values = []
    chain_ids = []
    for c, share in enumerate(shares):
        if share == 0:
            continue
        rng = _chain_rng(cfg.master_seed, c)
        values.append(_run_chain(sys, rng, burn_in, thinning, share,
                                 membership_tol))
        chain_ids.extend([c] * share)
    stacked = (np.concatenate(values, axis=0) if values
               else np.empty((0, sys.n * sys.n)))
    batch = SampleBatch(sys.n, tuple(sys.s.as_array()), cfg,
                        np.array(chain_ids, dtype=int),
                        stacked.reshape(-1, sys.n, sys.n))
    return batch


# ---------------------------------------------------------------------------
# CSV layout: one comment header line with the provenance, then one row of
# n^2 values per sample (row-major vertex order, full precision).

CSV_SCHEMA = "trihive.samples.v1"


def batch_to_csv(batch: SampleBatch) -> str:
    burn_in, thinning = batch.config.resolved(batch.n)
    s = ",".join(f"{v:.17g}" for v in batch.s)
    buf = io.StringIO()
    buf.write(f"# schema={CSV_SCHEMA} n={batch.n} s={s} "
              f"seed={batch.config.master_seed} burn_in={burn_in} "
              f"thinning={thinning} chains={batch.config.chains} "
              f"count={len(batch)}\n")
    flat = batch.values.reshape(len(batch), batch.n * batch.n)
    for row, cid in zip(flat, batch.chain_ids):
        buf.write(str(int(cid)) + "," + ",".join(f"{v:.17g}" for v in row) + "\n")
    return buf.getvalue()


def batch_from_csv(text: str) -> SampleBatch:
    lines = [ln for ln in text.strip().splitlines() if ln]
    header = lines[0]
    if not header.startswith(f"# schema={CSV_SCHEMA}"):
        raise TrihiveError("unrecognized sample CSV header")
    meta = dict(part.split("=", 1) for part in header[2:].split() if "=" in part)
    n = int(meta["n"])
    s = tuple(float(v) for v in meta["s"].split(","))
    cfg = SamplerConfig(master_seed=int(meta["seed"]),
                        burn_in=int(meta["burn_in"]),
                        thinning=int(meta["thinning"]),
                        chains=int(meta["chains"]))
    rows = [np.array(ln.split(","), dtype=float) for ln in lines[1:]]
    data = np.array(rows) if rows else np.empty((0, n * n + 1))
    chain_ids = data[:, 0].astype(int) if len(rows) else np.empty(0, dtype=int)
    values = data[:, 1:].reshape(-1, n, n) if len(rows) else np.empty((0, n, n))
    return SampleBatch(n, s, cfg, chain_ids, values)


def default_system(n: int, s) -> ConstraintSystem:
    """Convenience: the mean-zero system for side n and bounds s."""
    return build_constraints(n, s, MEAN_ZERO)
