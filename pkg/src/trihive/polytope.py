"""Constraint systems for the bounded-Hessian polytopes, the quadratic
reference surface, the max-norm diameter witness, and the weight-cone test.

The mean-zero polytope is the set of fields g with sum g = 0 whose class-r
second differences are all at most s_r; the anchored variant replaces the
mean condition with g(0, 0) = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import PreconditionError, SizeMismatchError, TrihiveError
from .grid import EDGE_OFFSETS, TorusGrid
from .ops import _weights, hessian_field

MEAN_ZERO = "mean_zero"
ANCHORED = "anchored"


@dataclass(frozen=True)
class HessianBound:
    """Per-class upper bounds (s0, s1, s2) on the second differences."""

    s0: float
    s1: float
    s2: float

    def as_array(self) -> np.ndarray:
        return np.array([self.s0, self.s1, self.s2], dtype=float)

    @property
    def is_normalized(self) -> bool:
        """True when s0 = 2 <= s1 <= s2, the convention several exact
        identities are stated under."""
        return self.s0 == 2.0 and self.s0 <= self.s1 <= self.s2


def _bound(s) -> HessianBound:
    if isinstance(s, HessianBound):
        return s
    arr = np.asarray(s, dtype=float)
    if arr.shape != (3,):
        raise TrihiveError(f"expected three bounds, got shape {arr.shape}")
    return HessianBound(*map(float, arr))


@dataclass
class ConstraintSystem:
    """Sparse inequality rows A x <= rhs plus one linear equality.

    Rows are ordered class-major: row r*n^2 + (k*n + l) is the class-r rhombus
    anchored at (k, l), with coefficients -1, +1, -1, +1 on its vertices
    (a, b, c, d), so the row value is exactly the second difference.  The zero
    field is strictly interior (slack s_r > 0 everywhere).
    """

    n: int
    s: HessianBound
    variant: str
    matrix: sp.csr_matrix
    rhs: np.ndarray

    @property
    def dimension(self) -> int:
        """Dimension of the affine subspace the polytope lives in."""
        return self.n * self.n - 1

    def row_values(self, f: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(f, dtype=float).reshape(-1)

    def equality_residual(self, f: np.ndarray) -> float:
        flat = np.asarray(f, dtype=float).reshape(-1)
        if flat.size != self.n * self.n:
            raise SizeMismatchError(
                f"field has {flat.size} values, system expects {self.n * self.n}")
        if self.variant == MEAN_ZERO:
            return float(flat.sum())
        return float(flat[0])


def build_constraints(n: int, s, variant: str = MEAN_ZERO) -> ConstraintSystem:
    s = _bound(s)
    if min(s.s0, s.s1, s.s2) <= 0.0:
        raise TrihiveError(f"bounds must be positive, got {s}")
    if variant not in (MEAN_ZERO, ANCHORED):
        raise TrihiveError(f"unknown variant {variant!r}")
    grid = TorusGrid(n)
    nsq = n * n
    rows, cols, vals = [], [], []
    for r in range(3):
        offs = EDGE_OFFSETS[r]
        signs = (-1.0, 1.0, -1.0, 1.0)
        for k in range(n):
            for l in range(n):
                row = r * nsq + k * n + l
                for (di, dj), sign in zip(offs, signs):
                    rows.append(row)
                    cols.append(grid.flat(k + di, l + dj))
                    vals.append(sign)
    matrix = sp.csr_matrix((vals, (rows, cols)), shape=(3 * nsq, nsq))
    rhs = np.repeat(s.as_array(), nsq)
    return ConstraintSystem(n, s, variant, matrix, rhs)


def membership(sys: ConstraintSystem, f: np.ndarray, tol: float = 1e-9) -> tuple[bool, float]:
    """Whether f satisfies every inequality and the equality within tol.

    The returned violation is the worst constraint excess, floored at zero,
    so interior points report exactly 0.0.
    """
    flat = np.asarray(f, dtype=float).reshape(-1)
    if flat.size != sys.n * sys.n:
        raise SizeMismatchError(
            f"field has {flat.size} values, system expects {sys.n * sys.n}")
    excess = float(np.max(sys.row_values(flat) - sys.rhs))
    eq = abs(sys.equality_residual(flat))
    violation = max(0.0, excess, eq)
    return (excess <= tol and eq <= tol), violation


def export_lp_text(sys: ConstraintSystem) -> str:
    """Plain-text dump: one `<signed vertex indices> <= bound` line per row,
    then the equality.  Vertex index v means the coefficient on x_v."""
    lines = []
    mat = sys.matrix.tocoo()
    per_row: dict[int, list[str]] = {}
    for r, c, v in zip(mat.row, mat.col, mat.data):
        per_row.setdefault(int(r), []).append(f"{'+' if v > 0 else '-'}{int(c)}")
    for r in range(sys.matrix.shape[0]):
        terms = " ".join(per_row.get(r, []))
        lines.append(f"{terms} <= {sys.rhs[r]:.17g}")
    if sys.variant == MEAN_ZERO:
        lines.append("sum == 0")
    else:
        lines.append("+0 == 0")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class QuadraticReference:
    """Q(x, y) = alpha x^2 + beta x y + gamma y^2 + lin_x x + lin_y y on the
    plane lattice; its class-r second difference is identically -s_r and it
    vanishes at (0,0), (n,0) and (0,n)."""

    alpha: float
    beta: float
    gamma: float
    lin_x: float
    lin_y: float
    n: int

    def evaluate(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return (self.alpha * x * x + self.beta * x * y + self.gamma * y * y
                + self.lin_x * x + self.lin_y * y)


def quadratic_reference(s, n: int) -> QuadraticReference:
    """The unique such quadratic.

    The three per-class stencil equations reduce to 2*alpha + beta = s0,
    beta = -s1, 2*gamma + beta = s2; the corner conditions fix the linear
    part.  Zero bounds are allowed (they give degenerate quadratics).
    """
    s = _bound(s)
    beta = -s.s1
    alpha = 0.5 * (s.s0 + s.s1)
    gamma = 0.5 * (s.s1 + s.s2)
    q = QuadraticReference(alpha, beta, gamma, -alpha * n, -gamma * n, n)

    # The system is always solvable; verify by evaluating the stencils on a
    # small plane patch rather than trusting the algebra.
    xs = np.arange(-1, 2, dtype=float)
    ax, ay = np.meshgrid(xs, xs, indexing="ij")
    for r, offs in EDGE_OFFSETS.items():
        signs = (-1.0, 1.0, -1.0, 1.0)
        val = sum(sign * q.evaluate(ax + di, ay + dj)
                  for (di, dj), sign in zip(offs, signs))
        target = -s.as_array()[r]
        assert np.allclose(val, target, atol=1e-9), (r, val, target)
    return q


def diameter_witness(n: int, s) -> np.ndarray:
    """Mean-zero member of the polytope with max-norm at least
    (s1 + s2) floor(n/2)^2 / 4.

    Interpolate the reference quadratic linearly over the n-times-coarser
    lattice (each coarse cell split along its (1,1) diagonal, which is the
    lower-hull split because the mixed coefficient is negative); the
    interpolant minus the quadratic is periodic, and centering its mean gives
    the witness.  On the fundamental window the interpolant collapses to
    beta * n * min(i, j).
    """
    if n < 2:
        raise TrihiveError(f"grid side must be at least 2, got {n}")
    s = _bound(s)
    q = quadratic_reference(s, n)
    idx = np.arange(n)
    ii = idx[:, None] * np.ones((1, n))
    jj = np.ones((n, 1)) * idx[None, :]
    r = q.beta * n * np.minimum(ii, jj)
    w = r - q.evaluate(ii, jj)
    return w - w.mean()


def cone_predicate(w) -> bool:
    """Strict inequality w0^2 + w1^2 + w2^2 < 2 (w0 w1 + w1 w2 + w2 w0)."""
    w0, w1, w2 = _weights(w)
    return bool(w0 * w0 + w1 * w1 + w2 * w2 < 2.0 * (w0 * w1 + w1 * w2 + w2 * w0))


def violation_field(sys: ConstraintSystem, f: np.ndarray) -> np.ndarray:
    """Per-row slack deficit (row value minus bound), shaped (3, n, n)."""
    vals = sys.row_values(f) - sys.rhs
    return vals.reshape(3, sys.n, sys.n)


def hessian_slack(sys: ConstraintSystem, f: np.ndarray) -> np.ndarray:
    """rhs - A f, the quantity hit-and-run keeps positive."""
    return sys.rhs - sys.row_values(f)


def _self_test_hessian_consistency(n: int = 5) -> None:
    # The sparse rows must reproduce hessian_field exactly; used in tests.
    rng = np.random.default_rng(0)
    f = rng.standard_normal((n, n))
    sys = build_constraints(n, (1.0, 1.0, 1.0))
    assert np.allclose(sys.row_values(f).reshape(3, n, n), hessian_field(f), atol=1e-12)
