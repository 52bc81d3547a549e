"""Rectangular lattice geometry, sublattice labels and hole configurations.

Sites are indexed row-major, ``site = row * cols + col``.  Sublattice A holds
the sites with even ``row + col``; every dimer joins an A-site to a B-site.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from math import comb
from typing import Iterator

OPEN = "open"
PERIODIC = "periodic"
DEFAULT_MAX_SITES = 64


class LatticeError(ValueError):
    """Raised for geometry or hole configurations that violate preconditions."""


@dataclass(frozen=True)
class Lattice:
    rows: int
    cols: int
    boundary: str
    neighbors: tuple[tuple[int, ...], ...]

    @property
    def num_sites(self) -> int:
        return self.rows * self.cols

    @property
    def half(self) -> int:
        """L, the number of sites on each sublattice."""
        return self.num_sites // 2

    def sublattice(self, site: int) -> str:
        r, c = divmod(site, self.cols)
        return "A" if (r + c) % 2 == 0 else "B"

    @cached_property
    def a_sites(self) -> tuple[int, ...]:
        return tuple(s for s in range(self.num_sites) if self.sublattice(s) == "A")

    @cached_property
    def b_sites(self) -> tuple[int, ...]:
        return tuple(s for s in range(self.num_sites) if self.sublattice(s) == "B")

    @cached_property
    def neighbor_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << j for j in nb) for nb in self.neighbors)

    @property
    def full_mask(self) -> int:
        return (1 << self.num_sites) - 1

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.num_sites) for v in self.neighbors[u] if u < v]

    @property
    def spec(self) -> str:
        return f"{self.rows}x{self.cols}:{self.boundary}"


def build_lattice(rows: int, cols: int, boundary: str = OPEN,
                  max_sites: int = DEFAULT_MAX_SITES) -> Lattice:
    if rows < 1 or cols < 1:
        raise LatticeError(f"lattice dimensions must be positive, got {rows}x{cols}")
    n = rows * cols
    if n % 2:
        raise LatticeError(f"{rows}x{cols} has an odd number of sites")
    if n > max_sites:
        raise LatticeError(f"{rows}x{cols} has {n} sites, above the maximum of {max_sites}")
    if boundary not in (OPEN, PERIODIC):
        raise LatticeError(f"unknown boundary {boundary!r}")
    if boundary == PERIODIC:
        # size-2 wraps double an edge, odd wraps break bipartiteness
        for d in (rows, cols):
            if d < 4 or d % 2:
                raise LatticeError(
                    f"periodic {rows}x{cols}: each dimension must be even and >= 4")

    nbrs = []
    for s in range(n):
        r, c = divmod(s, cols)
        found = set()
        for dr, dc in ((-1, 0), (0, -1), (0, 1), (1, 0)):
            rr, cc = r + dr, c + dc
            if boundary == PERIODIC:
                rr, cc = rr % rows, cc % cols
            elif not (0 <= rr < rows and 0 <= cc < cols):
                continue
            found.add(rr * cols + cc)
        nbrs.append(tuple(sorted(found)))
    return Lattice(rows, cols, boundary, tuple(nbrs))


_SPEC_RE = re.compile(r"^\s*(\d+)\s*[xX×]\s*(\d+)\s*(?::\s*(open|periodic))?\s*$")


def parse_lattice_spec(text: str, max_sites: int = DEFAULT_MAX_SITES) -> Lattice:
    """Parse ``"RxC"`` or ``"RxC:open|periodic"`` (rows first)."""
    m = _SPEC_RE.match(text)
    if not m:
        raise LatticeError(f"bad lattice spec {text!r}; expected RxC:open|periodic")
    return build_lattice(int(m.group(1)), int(m.group(2)), m.group(3) or OPEN, max_sites)


@dataclass(frozen=True)
class HoleConfig:
    holes_a: tuple[int, ...] = ()
    holes_b: tuple[int, ...] = ()

    @property
    def n(self) -> int:
        return len(self.holes_a)

    @property
    def sites(self) -> tuple[int, ...]:
        return tuple(sorted(self.holes_a + self.holes_b))

    @property
    def mask(self) -> int:
        return sum(1 << s for s in self.holes_a + self.holes_b)


def make_holes(lat: Lattice, sites) -> HoleConfig:
    """Split hole sites by sublattice and validate balance."""
    sites = list(sites)
    if len(set(sites)) != len(sites):
        raise LatticeError(f"duplicate hole sites in {sites}")
    for s in sites:
        if not 0 <= s < lat.num_sites:
            raise LatticeError(f"hole site {s} outside 0..{lat.num_sites - 1}")
    ha = tuple(sorted(s for s in sites if lat.sublattice(s) == "A"))
    hb = tuple(sorted(s for s in sites if lat.sublattice(s) == "B"))
    if len(ha) != len(hb):
        raise LatticeError(
            f"unbalanced holes: {len(ha)} on sublattice A, {len(hb)} on sublattice B")
    return HoleConfig(ha, hb)


def occupied_mask(lat: Lattice, holes: HoleConfig) -> int:
    return lat.full_mask & ~holes.mask


def occupied_sites(lat: Lattice, holes: HoleConfig) -> tuple[int, ...]:
    hm = holes.mask
    return tuple(s for s in range(lat.num_sites) if not hm >> s & 1)


def enumerate_hole_configs(lat: Lattice, num_holes: int) -> Iterator[HoleConfig]:
    """Yield all C(L, n)**2 balanced configurations, A-choice major, lexicographic."""
    if num_holes % 2:
        raise LatticeError(f"number of holes must be even, got {num_holes}")
    n = num_holes // 2
    if not 0 <= n <= lat.half:
        raise LatticeError(f"{num_holes} holes do not fit on {lat.num_sites} sites")
    b_choices = list(itertools.combinations(lat.b_sites, n))
    for ha in itertools.combinations(lat.a_sites, n):
        for hb in b_choices:
            yield HoleConfig(ha, hb)


def num_hole_configs(lat: Lattice, num_holes: int) -> int:
    return comb(lat.half, num_holes // 2) ** 2


def is_coverable(lat: Lattice, holes: HoleConfig) -> bool:
    """Whether the occupied sites admit a nearest-neighbour perfect matching.

    Kuhn's augmenting-path matching from occupied A-sites into occupied B-sites.
    Deliberately shares no code with the covering enumerator.
    """
    hm = holes.mask
    left = [a for a in lat.a_sites if not hm >> a & 1]
    match_b: dict[int, int] = {}

    def augment(a: int, seen: set[int]) -> bool:
        for b in lat.neighbors[a]:
            if hm >> b & 1 or b in seen:
                continue
            seen.add(b)
            if b not in match_b or augment(match_b[b], seen):
                match_b[b] = a
                return True
        return False

    for a in left:
        if not augment(a, set()):
            return False
    return True


def pathological_probability_estimate(a: int, b: int) -> Fraction:
    """Closed-form estimate of the fenced-site probability for four holes on a x b.

    Counts configurations in which a corner site is fenced off by its two
    neighbours.  Compare with :func:`noncoverable_fraction`, which finds every
    obstruction, not just this motif.
    """
    if (a * b) % 2:
        raise LatticeError(f"{a}x{b} has an odd number of sites")
    half = a * b // 2
    return Fraction(4 * (comb(half - 1, 2) - 1), comb(half, 2) ** 2)


def noncoverable_fraction(lat: Lattice, num_holes: int) -> tuple[int, int]:
    """(non-coverable count, total count) over all balanced configs."""
    bad = total = 0
    for h in enumerate_hole_configs(lat, num_holes):
        total += 1
        bad += not is_coverable(lat, h)
    return bad, total
