"""Exact dimer counting, RVB norms and averaged geometric entanglement of doped RVB states."""

from .entanglement import (CurvePoint, EntanglementCurve, EntanglementValue,
                           average_entanglement, geometric_entanglement,
                           separable_maximizer_probe, sweep)
from .lattice import (HoleConfig, Lattice, LatticeError, build_lattice,
                      enumerate_hole_configs, is_coverable, make_holes,
                      parse_lattice_spec, pathological_probability_estimate)
from .matching import (CrossCheckError, DimerCovering, count_coverings,
                       enumerate_coverings, fisher_count, periodic_entropy_estimate,
                       ryser_permanent)
from .norm import (LoopDecomposition, NormValue, OracleRecord, TransitionGraph,
                   kohmoto_sum, loop_decompose, norm_value, overlap,
                   statevector_oracle, superpose)

__all__ = [
    "CrossCheckError", "CurvePoint", "DimerCovering", "EntanglementCurve",
    "EntanglementValue", "HoleConfig", "Lattice", "LatticeError", "LoopDecomposition",
    "NormValue", "OracleRecord", "TransitionGraph", "average_entanglement",
    "build_lattice", "count_coverings", "enumerate_coverings", "enumerate_hole_configs",
    "fisher_count", "geometric_entanglement", "is_coverable", "kohmoto_sum",
    "loop_decompose", "make_holes", "norm_value", "overlap", "parse_lattice_spec",
    "pathological_probability_estimate", "periodic_entropy_estimate", "ryser_permanent",
    "separable_maximizer_probe", "statevector_oracle", "superpose", "sweep",
]
