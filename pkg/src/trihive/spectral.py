"""Character transform on the torus, norms and seminorms, dominant-mode
detection, the mode-smoothing convolution, and coarse Hessian triples on
square partitions.

The transform is the plain O(n^4) matrix form; every grid in the package has
n <= 64, where exactness and zero dependencies beat speed.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import (NoModeError, PreconditionError, SizeMismatchError,
                     TrihiveError)
from .grid import SquarePartition
from .ops import (_check_square, first_difference, hessian_field,
                  product_second_difference, shift_field)
from .polytope import HessianBound, _bound


def character(n: int, k: int, l: int) -> np.ndarray:
    """The exponential field psi_{kl}(i, j) = exp(2 pi I (k i + l j) / n)."""
    idx = np.arange(n)
    phase = 2j * np.pi / n
    return np.exp(phase * (k * idx[:, None] + l * idx[None, :]))


@dataclass(frozen=True)
class Spectrum:
    """Complex coefficients theta[k, l], one per character."""

    n: int
    theta: np.ndarray

    def coefficient(self, k: int, l: int) -> complex:
        return complex(self.theta[k % self.n, l % self.n])


def _transform_matrix(n: int) -> np.ndarray:
    idx = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(idx, idx) / n)


def dft(f: np.ndarray) -> Spectrum:
    """theta[k, l] = n^-2 sum_v f(v) conj(psi_{kl}(v))."""
    f = _check_square(np.asarray(f, dtype=float))
    n = f.shape[0]
    w = _transform_matrix(n)
    return Spectrum(n, (w @ f @ w.T) / (n * n))


def idft(sp: Spectrum, tol: float = 1e-8) -> np.ndarray:
    """Inverse transform; the result must be real to within tol."""
    n = sp.n
    w = np.conj(_transform_matrix(n))
    out = w @ sp.theta @ w.T
    scale = max(1.0, float(np.max(np.abs(out))))
    if float(np.max(np.abs(out.imag))) > tol * scale:
        raise TrihiveError("inverse transform has a nonreal residue; "
                           "the spectrum is not conjugate-symmetric")
    return out.real


def norm(f: np.ndarray, kind: str, p: float | None = None,
         k: int | None = None) -> float:
    """Norms used by the concentration experiments.

    kind 'lp' and 'sobolev' need p >= 1; 'ck' needs a word length k >= 1.
    sobolev(p) sums |second difference|^p over all three classes and all
    anchors; W is half the root of sum |A_0^2 f|^2 + |A_2^2 f|^2; ck maxes
    the sup norm of A_{r_1}..A_{r_k} f over words in {0, 2}^k.
    """
    f = _check_square(np.asarray(f, dtype=float))
    if kind == "linf":
        return float(np.max(np.abs(f)))
    if kind == "lp":
        if p is None or p < 1:
            raise TrihiveError(f"lp norm needs p >= 1, got {p}")
        return float(np.sum(np.abs(f) ** p) ** (1.0 / p))
    if kind == "sobolev":
        if p is None or p < 1:
            raise TrihiveError(f"sobolev norm needs p >= 1, got {p}")
        h = hessian_field(f)
        return float(np.sum(np.abs(h) ** p) ** (1.0 / p))
    if kind == "W":
        a00 = first_difference(first_difference(f, 0), 0)
        a22 = first_difference(first_difference(f, 2), 2)
        return 0.5 * float(np.sqrt(np.sum(a00 ** 2) + np.sum(a22 ** 2)))
    if kind == "ck":
        if k is None or k < 1 or int(k) != k:
            raise TrihiveError(f"ck norm needs an integer k >= 1, got {k}")
        best = 0.0
        fields = [f]
        for _ in range(int(k)):
            fields = [first_difference(g, r) for g in fields for r in (0, 2)]
        for g in fields:
            best = max(best, float(np.max(np.abs(g))))
        return best
    raise TrihiveError(f"unknown norm kind {kind!r}")


def dominant_mode(f: np.ndarray) -> tuple[int, int, complex]:
    """The nonzero mode (k, l) with the largest |theta|, and its coefficient.

    Exact ties (conjugate pairs always tie) go to the smallest k^2 + l^2 with
    raw indices in [0, n), then lexicographic.
    """
    f = _check_square(np.asarray(f, dtype=float))
    if float(np.ptp(f)) == 0.0:
        raise NoModeError("constant field has no nonzero mode")
    sp = dft(f)
    mags = np.abs(sp.theta)
    mags[0, 0] = -1.0
    best = float(np.max(mags))
    ks, ls = np.nonzero(mags == best)
    order = np.lexsort((ls, ks, ks.astype(np.int64) ** 2 + ls.astype(np.int64) ** 2))
    k0, l0 = int(ks[order[0]]), int(ls[order[0]])
    return k0, l0, sp.coefficient(k0, l0)


def mode_smooth(f: np.ndarray, k0: int, l0: int) -> np.ndarray:
    """Convolve f with (psi_{k0 l0} + psi_{-k0 -l0} + 2) / (2 n^2).

    For zero-mean real f the result is Re(theta_{k0 l0} psi_{k0 l0}); the
    convolution output is cross-checked against that transform projection
    before being returned.  Nonzero mean is rejected because the constant
    kernel term would pass it through.
    """
    f = _check_square(np.asarray(f, dtype=float))
    n = f.shape[0]
    scale = max(1.0, float(np.max(np.abs(f))))
    if abs(float(f.mean())) > 1e-12 * scale:
        raise PreconditionError("mode_smooth requires a zero-mean field")
    psi = character(n, k0, l0)
    kern = (psi + np.conj(psi) + 2.0).real / (2.0 * n * n)
    out = np.zeros_like(f)
    for u1 in range(n):
        for u2 in range(n):
            out += f[u1, u2] * shift_field(kern, -u1, -u2)
    theta = dft(f).coefficient(k0, l0)
    projected = (theta * psi).real
    if float(np.max(np.abs(out - projected))) > 1e-10 * scale:
        raise TrihiveError("convolution and transform projections disagree")
    return out


@dataclass(frozen=True)
class CoarseHessianField:
    """Per-square smoothed Hessian triples t for a partition and base s."""

    partition: SquarePartition
    s: HessianBound
    triples: np.ndarray      # (blocks, 3), block order as in partition.blocks

    def triple(self, bi: int, bj: int) -> np.ndarray:
        for block, row in zip(self.partition.blocks, self.triples):
            if block.index == (bi, bj):
                return row
        raise TrihiveError(f"no block with index {(bi, bj)}")


def coarse_hessian(f: np.ndarray, part: SquarePartition, s) -> CoarseHessianField:
    """Box-smoothed second-difference triples at each square's corner anchor.

    The field is first averaged over the n1 x n1 window behind each vertex,
    then each class contributes the mean of the two second differences whose
    rhombi sit on the anchor corner, added to the base bound s_r.
    """
    f = _check_square(np.asarray(f, dtype=float))
    n = f.shape[0]
    if part.grid.n != n:
        raise SizeMismatchError(
            f"field side {n} != partition grid side {part.grid.n}")
    s = _bound(s)
    n1 = part.n1
    smooth = np.zeros_like(f)
    for u1 in range(1, n1 + 1):
        for u2 in range(1, n1 + 1):
            smooth += np.roll(f, shift=(u1, u2), axis=(0, 1))
    smooth /= n1 * n1
    diff = [product_second_difference(smooth, r) for r in range(3)]
    # Per class, the two rhombi incident to the corner from inside the square.
    anchor_pairs = {0: ((-1, 0), (-1, -1)),
                    1: ((0, 0), (-1, -1)),
                    2: ((-1, -1), (0, -1))}
    rows = np.empty((len(part.blocks), 3))
    base = s.as_array()
    for b, block in enumerate(part.blocks):
        ci, cj = block.anchor
        for r in range(3):
            (d1, d2), (e1, e2) = anchor_pairs[r]
            pair = (diff[r][(ci + d1) % n, (cj + d2) % n]
                    + diff[r][(ci + e1) % n, (cj + e2) % n])
            rows[b, r] = base[r] + 0.5 * pair
    return CoarseHessianField(part, s, rows)


CSV_SCHEMA = "trihive.spectrum.v1"


def spectrum_to_csv(sp: Spectrum) -> str:
    """CSV rows (k, l, re, im), row-major over modes."""
    buf = io.StringIO()
    buf.write(f"# schema={CSV_SCHEMA}\n")
    buf.write("k,l,re,im\n")
    for k in range(sp.n):
        for l in range(sp.n):
            z = sp.theta[k, l]
            buf.write(f"{k},{l},{z.real:.17g},{z.imag:.17g}\n")
    return buf.getvalue()
