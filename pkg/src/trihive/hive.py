"""Integer hives on the size-n triangle and Littlewood-Richardson counting.

A hive assigns integers to the nodes {(x, y) : x, y >= 0, x + y <= n} so
that every unit rhombus satisfies its concavity inequality; the boundary is
fixed by cumulative sums of three partitions.  The number of such fillings
is the Littlewood-Richardson coefficient, which a separate skew-tableau
enumerator recomputes from the classical rule.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidBoundaryError, SizeGuardError

HIVE_SIZE_GUARD = 6
ORACLE_WEIGHT_GUARD = 12


def _pad(parts, n: int) -> tuple[int, ...]:
    parts = tuple(int(p) for p in parts)
    return parts + (0,) * (n - len(parts))


@dataclass(frozen=True)
class HiveBoundary:
    """Three padded partitions (lam, mu, nu) with |lam| + |mu| = |nu|."""

    lam: tuple
    mu: tuple
    nu: tuple

    def __init__(self, lam, mu, nu):
        n = max(len(lam), len(mu), len(nu), 1)
        object.__setattr__(self, "lam", _pad(lam, n))
        object.__setattr__(self, "mu", _pad(mu, n))
        object.__setattr__(self, "nu", _pad(nu, n))
        for name, part in (("lam", self.lam), ("mu", self.mu), ("nu", self.nu)):
            if any(p < 0 for p in part):
                raise InvalidBoundaryError(f"{name} has a negative part")
            if any(a < b for a, b in zip(part, part[1:])):
                raise InvalidBoundaryError(f"{name} is not nonincreasing")
        if sum(self.lam) + sum(self.mu) != sum(self.nu):
            raise InvalidBoundaryError(
                f"weight mismatch: |lam| + |mu| = {sum(self.lam) + sum(self.mu)}"
                f" but |nu| = {sum(self.nu)}")

    @property
    def n(self) -> int:
        return len(self.lam)


def boundary_values(b: HiveBoundary) -> dict:
    """Fixed node values on the triangle's three sides.

    Left side (0, k) carries the partial sums of lam going up, the hypotenuse
    (k, n-k) continues with mu from |lam|, and the bottom (k, 0) carries the
    partial sums of nu; the corner values agree by the weight identity.
    """
    n = b.n
    vals = {}
    acc = 0
    vals[(0, 0)] = 0
    for k in range(1, n + 1):
        acc += b.lam[k - 1]
        vals[(0, k)] = acc
    for k in range(1, n + 1):
        acc += b.mu[k - 1]
        vals[(k, n - k)] = acc
    acc = 0
    for k in range(1, n + 1):
        acc += b.nu[k - 1]
        vals[(k, 0)] = acc
    return vals


def _rhombus_ok(h: dict, n: int) -> bool:
    """All three families of unit-rhombus inequalities."""
    for x in range(n + 1):
        for y in range(n + 1 - x):
            if x + y + 2 <= n:
                if h[(x, y)] + h[(x + 1, y + 1)] > h[(x + 1, y)] + h[(x, y + 1)]:
                    return False
            if y >= 1 and x + y + 1 <= n:
                if h[(x, y + 1)] + h[(x + 1, y - 1)] > h[(x, y)] + h[(x + 1, y)]:
                    return False
            if x >= 1 and x + y + 1 <= n:
                if h[(x + 1, y)] + h[(x - 1, y + 1)] > h[(x, y)] + h[(x, y + 1)]:
                    return False
    return True


def count_hives(b: HiveBoundary) -> int:
    """Exact count of integer hives with the given boundary.

    Interior nodes are assigned depth first, top row (largest y) downward and
    left to right within a row, so each node has one concavity lower bound and
    up to two upper bounds available from already-placed neighbors; the full
    inequality set is checked once per complete assignment.
    """
    n = b.n
    if n > HIVE_SIZE_GUARD:
        raise SizeGuardError(
            f"hive enumeration limited to n <= {HIVE_SIZE_GUARD}, got {n}")
    h = boundary_values(b)
    interior = [(x, y)
                for y in range(n - 1, 0, -1)
                for x in range(1, n - y)]
    if not interior:
        return 1 if _rhombus_ok(h, n) else 0

    count = 0

    def place(pos: int):
        nonlocal count
        if pos == len(interior):
            if _rhombus_ok(h, n):
                count += 1
            return
        x, y = interior[pos]
        lo = h[(x - 1, y)] + h[(x, y + 1)] - h[(x - 1, y + 1)]
        hi = h[(x - 1, y + 1)] + h[(x, y + 1)] - h[(x - 1, y + 2)]
        if x >= 2:
            hi = min(hi, h[(x - 1, y)] + h[(x - 1, y + 1)] - h[(x - 2, y + 1)])
        for v in range(lo, hi + 1):
            h[(x, y)] = v
            place(pos + 1)
        h.pop((x, y), None)

    place(0)
    return count


def lr_tableau_oracle(b: HiveBoundary) -> int:
    """Littlewood-Richardson coefficient by the classical tableau rule.

    Counts skew semistandard tableaux of shape nu/lam and content mu whose
    reverse reading word is a lattice word: rows weakly increase, columns
    strictly increase, and at every prefix each value t >= 2 has appeared at
    most as often as t - 1.
    """
    n = b.n
    weight = sum(b.nu)
    if weight > ORACLE_WEIGHT_GUARD:
        raise SizeGuardError(
            f"tableau enumeration limited to |nu| <= {ORACLE_WEIGHT_GUARD},"
            f" got {weight}")
    if any(l > v for l, v in zip(b.lam, b.nu)):
        return 0
    cells = []
    for i in range(n):
        for j in range(b.nu[i] - 1, b.lam[i] - 1, -1):
            cells.append((i, j))
    mu = b.mu
    m = n
    fill = {}
    counts = [0] * (m + 1)

    def place(pos: int) -> int:
        if pos == len(cells):
            return 1
        i, j = cells[pos]
        right = fill.get((i, j + 1))
        above = fill.get((i - 1, j)) if i >= 1 and j >= b.lam[i - 1] else None
        total = 0
        for t in range(1, m + 1):
            if counts[t] >= mu[t - 1]:
                continue
            if right is not None and t > right:
                continue
            if above is not None and t <= above:
                continue
            if t >= 2 and counts[t] + 1 > counts[t - 1]:
                continue
            fill[(i, j)] = t
            counts[t] += 1
            total += place(pos + 1)
            counts[t] -= 1
            del fill[(i, j)]
        return total

    return place(0)
