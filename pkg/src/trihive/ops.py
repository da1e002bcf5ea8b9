"""Second- and first-difference operators on torus fields, and the weighted
three-direction Laplacian with its exact character spectrum.

A torus field is a real (n, n) array f with f[i, j] the value at vertex
(i, j); flattening is row-major, matching grid.TorusGrid.flat.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SizeMismatchError, TrihiveError
from .grid import EDGE_OFFSETS, TorusGrid

#: lattice direction of the forward difference A_r
DIFFERENCE_DIRECTIONS = {0: (0, 1), 1: (1, 1), 2: (1, 0)}

#: anchor shift relating the rhombus sum to the product form, per class (see
#: `product_second_difference`)
PRODUCT_SHIFTS = {0: (0, 0), 1: (1, 0), 2: (1, 2)}


def shift_field(f: np.ndarray, di: int, dj: int) -> np.ndarray:
    """Translate: (shift_field(f, di, dj))[v] = f[v + (di, dj)], wrapping."""
    return np.roll(f, shift=(-di, -dj), axis=(0, 1))


def _check_square(f: np.ndarray) -> np.ndarray:
    f = np.asarray(f)
    if f.ndim != 2 or f.shape[0] != f.shape[1]:
        raise SizeMismatchError(f"expected a square field, got shape {f.shape}")
    return f


def hessian_field(f: np.ndarray, grid: TorusGrid | None = None) -> np.ndarray:
    """All 3 n^2 rhombus second differences of f.

    Returns an array H of shape (3, n, n) where H[r, k, l] is the alternating
    sum -f(a)+f(b)-f(c)+f(d) over the class-r quadruple anchored at (k, l).
    """
    f = _check_square(f)
    if grid is not None and grid.n != f.shape[0]:
        raise SizeMismatchError(f"field side {f.shape[0]} != grid side {grid.n}")
    out = np.empty((3,) + f.shape, dtype=f.dtype)
    for r, (oa, ob, oc, od) in EDGE_OFFSETS.items():
        out[r] = (-shift_field(f, *oa) + shift_field(f, *ob)
                  - shift_field(f, *oc) + shift_field(f, *od))
    return out


def first_difference(f: np.ndarray, r: int) -> np.ndarray:
    """Forward difference along lattice direction r: f(v + dir_r) - f(v)."""
    f = _check_square(f)
    if r not in DIFFERENCE_DIRECTIONS:
        raise TrihiveError(f"direction must be 0, 1 or 2, got {r}")
    di, dj = DIFFERENCE_DIRECTIONS[r]
    return shift_field(f, di, dj) - f


def product_second_difference(f: np.ndarray, r: int) -> np.ndarray:
    """Class-r second difference in factored form.

    Class 0 is A_1 A_2 f, class 1 is -A_2 A_0 f, class 2 is A_0 A_1 f, where
    A_r is `first_difference`.  For every field this equals the negated
    rhombus sum re-anchored by a fixed per-class shift:

        product_second_difference(f, r)[v] == -hessian_field(f)[r][v + shift_r]

    with shift_r = PRODUCT_SHIFTS[r].
    """
    if r == 0:
        return first_difference(first_difference(f, 2), 1)
    if r == 1:
        return -first_difference(first_difference(f, 0), 2)
    if r == 2:
        return first_difference(first_difference(f, 1), 0)
    raise TrihiveError(f"class must be 0, 1 or 2, got {r}")


@dataclass(frozen=True)
class WeightTriple:
    """Per-class weights; also houses normalized weights w / volume."""

    w0: float
    w1: float
    w2: float

    def as_array(self) -> np.ndarray:
        return np.array([self.w0, self.w1, self.w2], dtype=float)


def _weights(w) -> np.ndarray:
    if isinstance(w, WeightTriple):
        arr = w.as_array()
    else:
        arr = np.asarray(w, dtype=float)
    if arr.shape != (3,):
        raise TrihiveError(f"expected three weights, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise TrihiveError("weights must be finite")
    return arr


def delta_w_apply(f: np.ndarray, w) -> np.ndarray:
    """Weighted three-direction discrete Laplacian (coefficients halved).

    out(i,j) = 1/2 [ (-w0+w1+w2)(f(i,j+1) - 2f(i,j) + f(i,j-1))
                   + (w0-w1+w2)(f(i+1,j+1) - 2f(i,j) + f(i-1,j-1))
                   + (w0+w1-w2)(f(i+1,j) - 2f(i,j) + f(i-1,j)) ]
    """
    f = _check_square(f)
    w0, w1, w2 = _weights(w)
    c_a = -w0 + w1 + w2
    c_b = w0 - w1 + w2
    c_c = w0 + w1 - w2
    out = c_a * (shift_field(f, 0, 1) - 2.0 * f + shift_field(f, 0, -1))
    out += c_b * (shift_field(f, 1, 1) - 2.0 * f + shift_field(f, -1, -1))
    out += c_c * (shift_field(f, 1, 0) - 2.0 * f + shift_field(f, -1, 0))
    return 0.5 * out


def delta_w_spectrum(n: int, w) -> tuple[np.ndarray, float]:
    """Exact character eigenvalues of the weighted Laplacian, and the absolute
    product of the nonzero-mode eigenvalues.

    eig[k, l] = 1/2 [ (-w0+w1+w2)(2 cos(2 pi l / n) - 2)
                    + (w0-w1+w2)(2 cos(2 pi (k+l) / n) - 2)
                    + (w0+w1-w2)(2 cos(2 pi k / n) - 2) ]

    The product is over all (k, l) != (0, 0); it overflows to inf for large n,
    which callers needing scale-free diagnostics avoid by working with
    logarithms of the returned eigenvalues.
    """
    if n < 2:
        raise TrihiveError(f"grid side must be at least 2, got {n}")
    w0, w1, w2 = _weights(w)
    k = np.arange(n)
    ck = 2.0 * np.cos(2.0 * np.pi * k / n) - 2.0           # indexed by k
    kl = (k[:, None] + k[None, :]) % n
    eig = 0.5 * ((-w0 + w1 + w2) * ck[None, :]
                 + (w0 - w1 + w2) * ck[kl]
                 + (w0 + w1 - w2) * ck[:, None])
    eig[0, 0] = 0.0
    mask = np.ones((n, n), dtype=bool)
    mask[0, 0] = False
    with np.errstate(over="ignore"):
        pseudo_det = float(abs(np.prod(eig[mask])))
    return eig, pseudo_det


def log_pseudo_det(n: int, w) -> float:
    """Sum of log |eigenvalue| over nonzero modes (overflow-safe)."""
    eig, _ = delta_w_spectrum(n, w)
    mask = np.ones((n, n), dtype=bool)
    mask[0, 0] = False
    vals = np.abs(eig[mask])
    if np.any(vals == 0.0):
        return -math.inf
    return float(np.sum(np.log(vals)))
