"""Geometric entanglement of holed RVB states and its average over hole placements.

For a coverable configuration with C coverings and Kohmoto sum K the
antiferromagnetic basis state has normalized overlap C / sqrt(K) with the
RVB state, so the geometric measure is ``E = log2(K) - 2 log2(C)``.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import minimize

from .lattice import (OPEN, HoleConfig, Lattice, LatticeError, build_lattice,
                      enumerate_hole_configs, num_hole_configs, occupied_mask)
from .matching import matchings_as_pairs
from .norm import kohmoto_sum_from_pairs, rvb_state

PROBE_MAX_SITES = 12
WORKERS_ENV = "DOPED_RVB_WORKERS"
CSV_FIELDS = ("rows", "cols", "boundary", "num_holes", "density",
              "avg_entanglement", "config_count", "excluded_count")


@dataclass(frozen=True)
class EntanglementValue:
    value: float
    count: int
    kohmoto_sum: int
    num_sites: int


@dataclass(frozen=True)
class CurvePoint:
    num_holes: int
    density: float
    avg_entanglement: float
    config_count: int
    excluded_count: int
    detail: tuple = field(default=(), compare=False, repr=False)


@dataclass(frozen=True)
class EntanglementCurve:
    rows: int
    cols: int
    boundary: str
    points: tuple[CurvePoint, ...]
    distribution: str = "uniform-coverable"

    def argmax(self) -> CurvePoint:
        return max(self.points, key=lambda p: p.avg_entanglement)

    def value_at(self, num_holes: int) -> float:
        for p in self.points:
            if p.num_holes == num_holes:
                return p.avg_entanglement
        raise KeyError(num_holes)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for p in self.points:
            w.writerow([self.rows, self.cols, self.boundary, p.num_holes, repr(p.density),
                        repr(p.avg_entanglement), p.config_count, p.excluded_count])
        return buf.getvalue()

    def to_json(self, verbose: bool = False) -> str:
        pts = []
        for p in self.points:
            d = {"rows": self.rows, "cols": self.cols, "boundary": self.boundary,
                 **{k: v for k, v in asdict(p).items() if k != "detail"}}
            if verbose:
                d["configs"] = list(p.detail)
            pts.append(d)
        return json.dumps({"lattice": f"{self.rows}x{self.cols}:{self.boundary}",
                           "distribution": self.distribution, "points": pts}, indent=2)


def config_terms(lat: Lattice, occ: int) -> tuple[int, int]:
    """(covering count, Kohmoto sum) for an occupied-site mask; (0, 0) if uncoverable."""
    matchings = matchings_as_pairs(lat, occ)
    if not matchings:
        return 0, 0
    sites = [s for s in range(lat.num_sites) if occ >> s & 1]
    return len(matchings), kohmoto_sum_from_pairs(matchings, sites)


def entanglement_from_terms(count: int, kohmoto: int) -> float:
    return math.log2(kohmoto) - 2 * math.log2(count)


def geometric_entanglement(lat: Lattice, holes: HoleConfig) -> EntanglementValue:
    occ = occupied_mask(lat, holes)
    count, kohmoto = config_terms(lat, occ)
    if not count:
        raise LatticeError(f"{lat.spec} holes={list(holes.sites)} has no dimer covering")
    return EntanglementValue(entanglement_from_terms(count, kohmoto), count, kohmoto,
                             bin(occ).count("1"))


def _chunk_terms(args):
    rows, cols, boundary, num_holes, start, stop = args
    lat = build_lattice(rows, cols, boundary)
    configs = itertools.islice(enumerate_hole_configs(lat, num_holes), start, stop)
    return [(h.sites, *config_terms(lat, occupied_mask(lat, h))) for h in configs]


def _config_terms_all(lat: Lattice, num_holes: int, workers: int) -> list:
    total = num_hole_configs(lat, num_holes)
    if workers <= 1 or total < 256:
        return _chunk_terms((lat.rows, lat.cols, lat.boundary, num_holes, 0, total))
    step = -(-total // (4 * workers))
    jobs = [(lat.rows, lat.cols, lat.boundary, num_holes, lo, min(lo + step, total))
            for lo in range(0, total, step)]
    out = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_chunk_terms, jobs):
            out.extend(part)
    return out


def default_workers() -> int:
    return max(1, int(os.environ.get(WORKERS_ENV, "1")))


def average_entanglement(lat: Lattice, num_holes: int, workers: int = 1,
                         include_excluded_as_zero: bool = False,
                         detail: bool = False) -> CurvePoint:
    """Uniform average of E over coverable balanced configurations.

    Configurations without a dimer covering are dropped and counted in
    ``excluded_count``; with ``include_excluded_as_zero`` they enter the
    average as zeros instead.  A fully vacant lattice carries no state and
    is not counted at all.
    """
    values = []
    rows = []
    excluded = 0
    for sites, count, kohmoto in _config_terms_all(lat, num_holes, workers):
        if len(sites) == lat.num_sites:
            continue
        if not count:
            excluded += 1
            if detail:
                rows.append({"holes": list(sites), "count": 0})
            continue
        e = entanglement_from_terms(count, kohmoto)
        values.append(e)
        if detail:
            rows.append({"holes": list(sites), "count": count,
                         "kohmoto_sum": kohmoto, "entanglement": e})
    denom = len(values) + (excluded if include_excluded_as_zero else 0)
    avg = math.fsum(values) / denom if denom else 0.0
    return CurvePoint(num_holes, (num_holes // 2) / lat.half, avg, len(values), excluded,
                      tuple(rows))


def sweep(lat: Lattice, max_holes: int | None = None, workers: int = 1,
          include_excluded_as_zero: bool = False, detail: bool = False) -> EntanglementCurve:
    if lat.boundary != OPEN:
        raise LatticeError("entanglement sweeps are defined for open boundaries only")
    if max_holes is None:
        max_holes = lat.num_sites
    if not 0 <= max_holes <= lat.num_sites:
        raise LatticeError(f"max_holes must lie in 0..{lat.num_sites}, got {max_holes}")
    points = tuple(average_entanglement(lat, k, workers, include_excluded_as_zero, detail)
                   for k in range(0, max_holes + 1, 2))
    return EntanglementCurve(lat.rows, lat.cols, lat.boundary, points)


def _product_overlap(tensor: np.ndarray, params: np.ndarray) -> complex:
    theta, phi = params[0::2], params[1::2]
    out = tensor
    # trailing axis is site 0 (bit 0 of the basis index)
    for k in range(len(theta)):
        v = np.array([np.cos(theta[k] / 2), np.exp(-1j * phi[k]) * np.sin(theta[k] / 2)])
        out = out @ v
    return complex(out)


def separable_maximizer_probe(lat: Lattice, holes: HoleConfig, restarts: int = 8,
                              seed: int = 0) -> float:
    """Best |<product state|RVB>| found by multi-start local ascent.

    Each site carries an arbitrary qubit state (Bloch angles).  The first start
    is the antiferromagnetic basis state; the rest are random.
    """
    psi, sites, _ = rvb_state(lat, holes)
    m = len(sites)
    if m > PROBE_MAX_SITES:
        raise LatticeError(f"probe limited to {PROBE_MAX_SITES} occupied sites, got {m}")
    psi = psi / np.linalg.norm(psi)
    if m == 0:
        return 1.0
    tensor = psi.reshape((2,) * m).astype(complex)

    def loss(x):
        return -abs(_product_overlap(tensor, x)) ** 2

    rng = np.random.default_rng(seed)
    af = np.zeros(2 * m)
    af[0::2] = [0.0 if lat.sublattice(s) == "A" else np.pi for s in sites]
    starts = [af] + [rng.uniform(0, [np.pi, 2 * np.pi] * m) for _ in range(restarts)]
    best = 0.0
    for x0 in starts:
        res = minimize(loss, x0, method="L-BFGS-B")
        best = max(best, math.sqrt(-min(res.fun, loss(x0))))
    return best
