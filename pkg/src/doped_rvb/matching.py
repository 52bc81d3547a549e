"""Nearest-neighbour dimer coverings: enumeration, exact counting, closed forms."""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .lattice import HoleConfig, Lattice, LatticeError, occupied_mask

# numpy Ryser stays exact in int64 up to this size (row sums <= 4)
_PERMANENT_NUMPY_MAX = 16
PERMANENT_MAX = 22


class CrossCheckError(RuntimeError):
    """Two independent routes to the same quantity disagree."""


@dataclass(frozen=True)
class DimerCovering:
    """A perfect matching of the occupied sites; each dimer stored A-site first."""

    dimers: tuple[tuple[int, int], ...]

    @property
    def sites(self) -> tuple[int, ...]:
        return tuple(sorted(s for d in self.dimers for s in d))

    def partner(self) -> dict[int, int]:
        out = {}
        for a, b in self.dimers:
            out[a] = b
            out[b] = a
        return out


def _iter_matchings(nbr_masks, occ: int):
    """Backtracking over perfect matchings, always covering the lowest free site.

    Yields lists of (low, high) pairs; the list is reused, copy before storing.
    """
    pairs: list[tuple[int, int]] = []

    def rec(rem):
        if not rem:
            yield pairs
            return
        i = (rem & -rem).bit_length() - 1
        rest = rem & ~(1 << i)
        cand = nbr_masks[i] & rest
        while cand:
            low = cand & -cand
            cand ^= low
            pairs.append((i, low.bit_length() - 1))
            yield from rec(rest & ~low)
            pairs.pop()

    yield from rec(occ)


def matchings_as_pairs(lat: Lattice, occ: int) -> list[tuple[tuple[int, int], ...]]:
    return [tuple(p) for p in _iter_matchings(lat.neighbor_masks, occ)]


def enumerate_coverings(lat: Lattice, holes: HoleConfig) -> list[DimerCovering]:
    out = []
    for pairs in _iter_matchings(lat.neighbor_masks, occupied_mask(lat, holes)):
        dimers = tuple(sorted((i, j) if lat.sublattice(i) == "A" else (j, i)
                              for i, j in pairs))
        out.append(DimerCovering(dimers))
    return out


def count_by_backtracking(lat: Lattice, holes: HoleConfig) -> int:
    """Same branching as :func:`enumerate_coverings`, memoized on the free-site mask."""
    nbm = lat.neighbor_masks
    memo = {0: 1}

    def rec(rem):
        hit = memo.get(rem)
        if hit is not None:
            return hit
        i = (rem & -rem).bit_length() - 1
        rest = rem & ~(1 << i)
        cand = nbm[i] & rest
        total = 0
        while cand:
            low = cand & -cand
            cand ^= low
            total += rec(rest & ~low)
        memo[rem] = total
        return total

    return rec(occupied_mask(lat, holes))


def biadjacency(lat: Lattice, holes: HoleConfig) -> np.ndarray:
    """0/1 matrix with rows = occupied A-sites, columns = occupied B-sites."""
    hm = holes.mask
    a = [s for s in lat.a_sites if not hm >> s & 1]
    b = [s for s in lat.b_sites if not hm >> s & 1]
    col = {s: k for k, s in enumerate(b)}
    mat = np.zeros((len(a), len(b)), dtype=np.int64)
    for r, s in enumerate(a):
        for t in lat.neighbors[s]:
            if t in col:
                mat[r, col[t]] = 1
    return mat


def ryser_permanent(mat) -> int:
    """Exact permanent by Ryser's inclusion-exclusion over column subsets."""
    mat = np.asarray(mat, dtype=np.int64)
    n = mat.shape[0]
    if mat.shape != (n, n):
        raise ValueError(f"permanent needs a square matrix, got {mat.shape}")
    if n == 0:
        return 1
    if n <= _PERMANENT_NUMPY_MAX:
        subsets = np.arange(1, 1 << n, dtype=np.int64)
        bits = (subsets[:, None] >> np.arange(n)) & 1
        rowsums = bits @ mat.T
        terms = np.prod(rowsums, axis=1)
        signs = np.where((n - bits.sum(axis=1)) % 2, -1, 1)
        return int(np.dot(signs, terms))
    if n > PERMANENT_MAX:
        raise ValueError(f"permanent of a {n}x{n} matrix is out of reach")
    # Gray-code walk with exact Python integers
    rows = [list(map(int, r)) for r in mat]
    sums = [0] * n
    total = 0
    prev = 0
    for k in range(1, 1 << n):
        gray = k ^ (k >> 1)
        j = (gray ^ prev).bit_length() - 1
        sign = 1 if gray >> j & 1 else -1
        for i in range(n):
            sums[i] += sign * rows[i][j]
        prev = gray
        p = 1
        for v in sums:
            if not v:
                p = 0
                break
            p *= v
        if p:
            total += p if (n - bin(gray).count("1")) % 2 == 0 else -p
    return total


def count_by_permanent(lat: Lattice, holes: HoleConfig) -> int:
    return ryser_permanent(biadjacency(lat, holes))


def count_coverings(lat: Lattice, holes: HoleConfig, check: bool = True) -> int:
    """Exact number of dimer coverings of the occupied sites.

    The backtracking count is authoritative; with ``check`` the permanent of
    the biadjacency matrix is computed too (when small enough) and any
    disagreement raises :class:`CrossCheckError`.
    """
    c = count_by_backtracking(lat, holes)
    if check and lat.half - holes.n <= PERMANENT_MAX:
        p = count_by_permanent(lat, holes)
        if p != c:
            raise CrossCheckError(
                f"{lat.spec} holes={list(holes.sites)}: backtracking {c} != permanent {p}")
    return c


def fisher_count(rows: int, cols: int) -> int:
    """Open-boundary rows x cols dimer count from the Fisher-Kasteleyn product.

    prod_{j<=ceil(rows/2)} prod_{k<=ceil(cols/2)}
        (4 cos^2(pi j/(rows+1)) + 4 cos^2(pi k/(cols+1)))
    """
    if rows < 1 or cols < 1:
        raise LatticeError(f"dimensions must be positive, got {rows}x{cols}")
    if (rows * cols) % 2:
        return 0
    digits = 30 + rows * cols
    with mpmath.workdps(digits):
        val = mpmath.mpf(1)
        for j in range(1, (rows + 1) // 2 + 1):
            cj = 4 * mpmath.cos(mpmath.pi * j / (rows + 1)) ** 2
            for k in range(1, (cols + 1) // 2 + 1):
                val *= cj + 4 * mpmath.cos(mpmath.pi * k / (cols + 1)) ** 2
        out = int(mpmath.nint(val))
        if abs(val - out) > mpmath.mpf("1e-6") * max(out, 1):
            raise CrossCheckError(f"Fisher product for {rows}x{cols} is not integral: {val}")
    return out


def catalan_constant(tol: float = 1e-13) -> tuple[float, float]:
    """Catalan's constant from its alternating series.

    Returns ``(G, bound)`` where ``bound`` is the first omitted term, which
    bounds the truncation error of an alternating series.
    """
    n_terms = int(math.ceil((1 / math.sqrt(tol) - 1) / 2)) + 1
    k = np.arange(n_terms, dtype=np.float64)
    terms = np.where(k % 2 == 0, 1.0, -1.0) / (2 * k + 1) ** 2
    # add from the small end to keep rounding below the truncation bound
    g = math.fsum(terms[::-1])
    return g, 1.0 / (2 * n_terms + 1) ** 2


def periodic_entropy_estimate(L: int) -> float:
    """(exp(2G/pi))**L, the leading periodic-boundary covering count on 2L sites."""
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    g, _ = catalan_constant()
    return math.exp(2 * g / math.pi) ** L
