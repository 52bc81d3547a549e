"""Overlaps of dimer coverings via transition-graph loops, and the RVB norm.

Every singlet is written A-site first, ``(|0_a 1_b> - |1_a 0_b>)/sqrt(2)``.
With that convention two covering states overlap by ``2**(loops - dimers)``,
where ``loops`` counts all cycles of their superposition (shared dimers
included as 2-cycles).  The unnormalized squared norm of the equal-weight
superposition is therefore ``sum_pairs 2**loops / 2**dimers``; the integer
``sum_pairs 2**loops`` is called the Kohmoto sum here.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .lattice import HoleConfig, Lattice, LatticeError, occupied_sites
from .matching import DimerCovering, enumerate_coverings

ORACLE_MAX_SITES = 16
# entries per vectorized loop-count block
_PAIR_BLOCK = 1 << 22


@dataclass(frozen=True)
class TransitionGraph:
    """Sum of two coverings' adjacency matrices over the occupied sites."""

    sites: tuple[int, ...]
    matrix: np.ndarray

    def __eq__(self, other):
        return (isinstance(other, TransitionGraph) and self.sites == other.sites
                and np.array_equal(self.matrix, other.matrix))

    __hash__ = None


@dataclass(frozen=True)
class LoopDecomposition:
    dl: int
    ndl: int
    lengths: tuple[int, ...]

    @property
    def loops(self) -> int:
        return self.dl + self.ndl


@dataclass(frozen=True)
class NormValue:
    kohmoto_sum: int
    paper_variant: int
    num_dimers: int

    @property
    def normalized(self) -> Fraction:
        """Squared norm of the sum of normalized covering states."""
        return Fraction(self.kohmoto_sum, 2 ** self.num_dimers)


def adjacency_matrix(cov: DimerCovering, sites: Sequence[int]) -> np.ndarray:
    """Symmetric 0/1 matrix of one covering, rows/columns in ``sites`` order."""
    idx = {s: k for k, s in enumerate(sites)}
    mat = np.zeros((len(sites), len(sites)), dtype=np.int8)
    for a, b in cov.dimers:
        mat[idx[a], idx[b]] = mat[idx[b], idx[a]] = 1
    return mat


def format_matrix(mat: np.ndarray) -> str:
    return "\n".join(" ".join(str(int(v)) for v in row) for row in mat)


def superpose(c1: DimerCovering, c2: DimerCovering) -> TransitionGraph:
    sites = c1.sites
    if sites != c2.sites:
        raise ValueError("coverings are over different occupied sites")
    return TransitionGraph(sites, adjacency_matrix(c1, sites) + adjacency_matrix(c2, sites))


def loop_decompose(tg: TransitionGraph) -> LoopDecomposition:
    mat = tg.matrix
    m = mat.shape[0]
    deg = mat.sum(axis=1)
    if m and not np.all(deg == 2):
        bad = int(np.flatnonzero(deg != 2)[0])
        raise ValueError(f"site {tg.sites[bad]} has degree {int(deg[bad])}, expected 2")
    dl = int(np.count_nonzero(mat == 2)) // 2
    seen = [False] * m
    lengths = []
    for start in range(m):
        if seen[start]:
            continue
        size = 0
        stack = [start]
        seen[start] = True
        while stack:
            u = stack.pop()
            size += 1
            for v in np.flatnonzero(mat[u]):
                if not seen[v]:
                    seen[v] = True
                    stack.append(int(v))
        if size > 2:
            lengths.append(size)
    return LoopDecomposition(dl, len(lengths), tuple(sorted(lengths)))


def overlap(c1: DimerCovering, c2: DimerCovering) -> Fraction:
    """<c1|c2> for normalized covering states, exact."""
    dec = loop_decompose(superpose(c1, c2))
    return Fraction(2 ** dec.loops, 2 ** len(c1.dimers))


def norm_value(coverings: Sequence[DimerCovering]) -> NormValue:
    """Kohmoto sum and the 2**dl * 4**ndl variant over all ordered pairs.

    Reference route: one explicit loop decomposition per pair.
    """
    if not coverings:
        raise ValueError("need at least one covering")
    kohmoto = variant = 0
    for c1 in coverings:
        for c2 in coverings:
            dec = loop_decompose(superpose(c1, c2))
            kohmoto += 2 ** dec.loops
            variant += 2 ** dec.dl * 4 ** dec.ndl
    return NormValue(kohmoto, variant, len(coverings[0].dimers))


def _loop_counts(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Loop counts for every pair (row of ``left``, row of ``right``).

    Rows are partner arrays.  Composing two partner involutions gives a
    permutation whose cycles come in twins, one twin pair per transition-graph
    loop; cycles are counted by min-label propagation with pointer doubling.
    """
    m = left.shape[1]
    comp = left[np.arange(left.shape[0])[:, None, None], right[None, :, :]]
    label = np.broadcast_to(np.arange(m, dtype=left.dtype), comp.shape).copy()
    for _ in range(max(1, m.bit_length())):
        label = np.minimum(label, np.take_along_axis(label, comp, axis=-1))
        comp = np.take_along_axis(comp, comp, axis=-1)
    return np.count_nonzero(label == np.arange(m), axis=-1) // 2


def kohmoto_sum_from_pairs(matchings, sites: Sequence[int]) -> int:
    """Kohmoto sum from matchings given as iterables of site pairs (vectorized)."""
    c = len(matchings)
    m = len(sites)
    if c == 0:
        raise ValueError("need at least one covering")
    if c == 1 or m == 0:
        return c * c << (m // 2)
    idx = {s: k for k, s in enumerate(sites)}
    partners = np.empty((c, m), dtype=np.int16)
    for r, pairs in enumerate(matchings):
        for i, j in pairs:
            partners[r, idx[i]] = idx[j]
            partners[r, idx[j]] = idx[i]
    hist = np.zeros(m // 2 + 1, dtype=np.int64)
    block = max(1, _PAIR_BLOCK // (c * m))
    for lo in range(0, c, block):
        loops = _loop_counts(partners[lo:lo + block], partners)
        hist += np.bincount(loops.ravel(), minlength=hist.size)
    return sum(int(v) << k for k, v in enumerate(hist))


def kohmoto_sum(coverings: Sequence[DimerCovering]) -> int:
    if not coverings:
        raise ValueError("need at least one covering")
    return kohmoto_sum_from_pairs([cv.dimers for cv in coverings], coverings[0].sites)


@dataclass(frozen=True)
class OracleRecord:
    norm: float
    af_amplitude: float
    basis_max_amplitude: float
    num_sites: int
    num_coverings: int

    def to_dict(self) -> dict:
        return asdict(self)


def covering_state(cov: DimerCovering, sites: Sequence[int]) -> np.ndarray:
    """Amplitude vector of one normalized covering; bit k of the index is site ``sites[k]``."""
    m = len(sites)
    idx = {s: k for k, s in enumerate(sites)}
    basis = np.arange(1 << m, dtype=np.int64)
    psi = np.ones(1 << m)
    for a, b in cov.dimers:
        sa = (basis >> idx[a]) & 1
        sb = (basis >> idx[b]) & 1
        psi *= ((1 - sa) * sb - sa * (1 - sb)) / np.sqrt(2.0)
    return psi


def rvb_state(lat: Lattice, holes: HoleConfig):
    """Unnormalized sum of covering states over the occupied sites.

    Returns ``(psi, sites, coverings)``.
    """
    sites = occupied_sites(lat, holes)
    if len(sites) > ORACLE_MAX_SITES:
        raise LatticeError(
            f"state vector on {len(sites)} sites exceeds the oracle limit {ORACLE_MAX_SITES}")
    covs = enumerate_coverings(lat, holes)
    if not covs:
        raise LatticeError(f"{lat.spec} holes={list(holes.sites)} has no dimer covering")
    psi = np.zeros(1 << len(sites))
    for cv in covs:
        psi += covering_state(cv, sites)
    return psi, sites, covs


def antiferro_index(lat: Lattice, sites: Sequence[int]) -> int:
    """Basis index with A-sites 0 and B-sites 1."""
    return sum(1 << k for k, s in enumerate(sites) if lat.sublattice(s) == "B")


def statevector_oracle(lat: Lattice, holes: HoleConfig) -> OracleRecord:
    psi, sites, covs = rvb_state(lat, holes)
    return OracleRecord(
        norm=float(np.linalg.norm(psi)),
        af_amplitude=float(abs(psi[antiferro_index(lat, sites)])),
        basis_max_amplitude=float(np.max(np.abs(psi))),
        num_sites=len(sites),
        num_coverings=len(covs),
    )
