"""Honeycomb diagrams: per-triangle gradients of the hive surface g + q.

The fundamental domain is embedded with lattice basis (1, 0) and
(1/2, sqrt(3)/2), so every lattice cell splits into an upward and a downward
equilateral triangle.  The hive value at an unwrapped corner (i, j) is the
periodic field plus the quadratic reference, and each triangle contributes
the gradient of its affine interpolant as one honeycomb point.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from xml.etree import ElementTree

import numpy as np

from .errors import SizeMismatchError, TrihiveError
from .ops import _check_square
from .polytope import HessianBound, _bound, quadratic_reference

_E1 = np.array([1.0, 0.0])
_E2 = np.array([0.5, 0.5 * math.sqrt(3.0)])

JSON_SCHEMA = "trihive.honeycomb.v1"


def embed(i: float, j: float) -> np.ndarray:
    """Plane position of lattice point (i, j)."""
    return float(i) * _E1 + float(j) * _E2


@dataclass(frozen=True)
class HoneycombDiagram:
    """2 n^2 gradient points plus adjacency between edge-sharing triangles.

    Point index kind * n^2 + i * n + j, kind 0 for the upward triangle of
    cell (i, j) and 1 for the downward one.
    """

    n: int
    s: HessianBound
    points: np.ndarray       # (2 n^2, 2)
    edges: np.ndarray        # (3 n^2, 2) point-index pairs

    def point_index(self, kind: int, i: int, j: int) -> int:
        n = self.n
        return kind * n * n + (i % n) * n + (j % n)


def hive_values(g: np.ndarray, s) -> np.ndarray:
    """Padded (n+1) x (n+1) corner values of the concave lift g + q."""
    g = _check_square(np.asarray(g, dtype=float))
    n = g.shape[0]
    q = quadratic_reference(_bound(s), n)
    idx = np.arange(n + 1)
    ii, jj = np.meshgrid(idx, idx, indexing="ij")
    return g[ii % n, jj % n] + q.evaluate(ii, jj)


def triangle_gradients(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Affine gradients of the up and down triangles of every cell.

    Returns two (n, n, 2) arrays.  The up triangle of cell (i, j) has corners
    (i, j), (i+1, j), (i, j+1); the down one (i+1, j), (i, j+1), (i+1, j+1).
    """
    if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] < 2:
        raise SizeMismatchError(f"expected padded corner values, got {h.shape}")
    base = h[:-1, :-1]
    d_e1 = h[1:, :-1] - base          # step along (1, 0)
    d_e2 = h[:-1, 1:] - base          # step along (0, 1)
    d_e1_far = h[1:, 1:] - h[:-1, 1:]     # same steps on the far corners
    d_e2_far = h[1:, 1:] - h[1:, :-1]
    up = _solve_gradient(d_e1, d_e2)
    down = _solve_gradient(d_e1_far, d_e2_far)
    return up, down


def _solve_gradient(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # grad . e1 = a and grad . e2 = b with the equilateral basis
    gx = a
    gy = (2.0 * b - a) / math.sqrt(3.0)
    return np.stack([gx, gy], axis=-1)


def build_honeycomb(g: np.ndarray, s) -> HoneycombDiagram:
    g = _check_square(np.asarray(g, dtype=float))
    n = g.shape[0]
    s = _bound(s)
    up, down = triangle_gradients(hive_values(g, s))
    nsq = n * n
    points = np.concatenate([up.reshape(nsq, 2), down.reshape(nsq, 2)])
    edges = []
    for i in range(n):
        for j in range(n):
            u = i * n + j
            edges.append((u, nsq + u))
            edges.append((u, nsq + i * n + (j - 1) % n))
            edges.append((u, nsq + ((i - 1) % n) * n + j))
    return HoneycombDiagram(n, s, points, np.array(edges, dtype=int))


def reference_honeycomb(n: int, s) -> HoneycombDiagram:
    """Diagram of the bare quadratic surface (zero field)."""
    return build_honeycomb(np.zeros((n, n)), s)


def displacement_stats(d: HoneycombDiagram, ref: HoneycombDiagram
                       ) -> tuple[float, float, np.ndarray]:
    """Pointwise Euclidean distances between corresponding triangles."""
    if d.n != ref.n or tuple(d.s.as_array()) != tuple(ref.s.as_array()):
        raise SizeMismatchError("diagrams built for different (n, s)")
    per_vertex = np.linalg.norm(d.points - ref.points, axis=1)
    return float(per_vertex.max()), float(per_vertex.mean()), per_vertex


def max_gradient_norm(d: HoneycombDiagram) -> float:
    return float(np.max(np.linalg.norm(d.points, axis=1)))


def emit_svg(d: HoneycombDiagram, path: str, options: dict | None = None) -> str:
    """Write the diagram as SVG 1.1; returns the serialized text.

    Layout is deterministic: the viewBox is the data bounding box padded by
    5 percent, coordinates carry six decimals.
    """
    opts = {"radius": 0.02, "stroke": 0.005}
    if options:
        opts.update(options)
    lo = d.points.min(axis=0)
    hi = d.points.max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    pad = 0.05 * float(span.max())
    lo = lo - pad
    size = span + 2 * pad
    scale = float(size.max())
    svg = ElementTree.Element("svg", {
        "xmlns": "http://www.w3.org/2000/svg",
        "version": "1.1",
        "viewBox": f"{lo[0]:.6f} {lo[1]:.6f} {size[0]:.6f} {size[1]:.6f}",
    })
    for a, b in d.edges:
        pa, pb = d.points[a], d.points[b]
        ElementTree.SubElement(svg, "line", {
            "x1": f"{pa[0]:.6f}", "y1": f"{pa[1]:.6f}",
            "x2": f"{pb[0]:.6f}", "y2": f"{pb[1]:.6f}",
            "stroke": "black",
            "stroke-width": f"{opts['stroke'] * scale:.6f}",
        })
    for x, y in d.points:
        ElementTree.SubElement(svg, "circle", {
            "cx": f"{x:.6f}", "cy": f"{y:.6f}",
            "r": f"{opts['radius'] * scale:.6f}",
            "fill": "black",
        })
    text = ElementTree.tostring(svg, encoding="unicode")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return text


def to_json(d: HoneycombDiagram) -> str:
    payload = {
        "schema": JSON_SCHEMA,
        "n": d.n,
        "s": list(d.s.as_array()),
        "points": [[float(x), float(y)] for x, y in d.points],
        "edges": [[int(a), int(b)] for a, b in d.edges],
    }
    return json.dumps(payload, indent=2, sort_keys=True)
