"""Ribbon graph expansion of real quartic graded tensor models.

Colors carry a parity (0 for O(N), 1 for Sp(N)). Graph sums for the
two-point function and the free energy are built from rooted multi-ribbon
graphs and checked against a pairing-sum oracle that never sees a graph.
"""

from .amplitudes import (
    amplitude,
    check_dse,
    check_duality,
    dual_cancellation_check,
    rescaling_sign_check,
    series,
    series_g2,
    series_lnz,
    series_z,
    vacuum_weight,
    weight_g2,
    weight_lnz,
)
from .canonical import CanonicalSurface, canonical_form, reduce_graph, sign_by_definition, sign_theorem_check
from .enumerator import enumerate_rooted, enumerate_unrooted_small
from .invariants import (
    ColorLoopWord,
    ConfigError,
    ModelSignature,
    QuarticInvariant,
    count_invariants,
    enumerate_invariants,
    load_model,
)
from .multiribbon import MultiRibbonGraph, edge_semantics, faces_per_color, restrict_to_color
from .poly import Poly
from .ribbon import RibbonGraph, dual, face_count, stabilizer_formula, twist_orbit_and_stabilizer
from .wick import gaussian_moment, oracle_g2, oracle_lnz, oracle_z

__version__ = "0.1.0"

__all__ = [
    "CanonicalSurface",
    "ColorLoopWord",
    "ConfigError",
    "ModelSignature",
    "MultiRibbonGraph",
    "Poly",
    "QuarticInvariant",
    "RibbonGraph",
    "amplitude",
    "canonical_form",
    "check_dse",
    "check_duality",
    "count_invariants",
    "dual",
    "dual_cancellation_check",
    "edge_semantics",
    "enumerate_invariants",
    "enumerate_rooted",
    "enumerate_unrooted_small",
    "face_count",
    "faces_per_color",
    "gaussian_moment",
    "load_model",
    "oracle_g2",
    "oracle_lnz",
    "oracle_z",
    "reduce_graph",
    "rescaling_sign_check",
    "restrict_to_color",
    "series",
    "series_g2",
    "series_lnz",
    "series_z",
    "sign_by_definition",
    "sign_theorem_check",
    "stabilizer_formula",
    "twist_orbit_and_stabilizer",
    "vacuum_weight",
    "weight_g2",
    "weight_lnz",
]
