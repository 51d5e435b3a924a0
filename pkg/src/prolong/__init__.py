"""Exact prolongations of spaces of homogeneous forms, with monomial, secant and phylogenetic tools."""

from .engine import DimensionCapError, differential_power_member, iterated_prolong, prolong
from .formspace import FormSpace, make_formspace
from .frames import Frame, FrameSystem, IncompatibleFrames, enumerate_frame_systems, frame_polynomial
from .monomial import (
    MonomialSpace,
    build_blowup_graph,
    circuits_and_decomposition,
    clique_prolong,
    monomial_prolong,
    monomial_support,
)
from .phylo import Tree, edge_labeling, fourier_indices, load_tree, phylo_parametrization, phylo_quadrics, split_matrices
from .poly import ParseError, Polynomial, VarSet, partial_polarize, polarize
from .secant import MonomialMap, SampleConfig, interpolate_vanishing_piece, sample_variety_point, secant_vanish_check

__all__ = [
    "DimensionCapError", "differential_power_member", "iterated_prolong", "prolong",
    "FormSpace", "make_formspace",
    "Frame", "FrameSystem", "IncompatibleFrames", "enumerate_frame_systems", "frame_polynomial",
    "MonomialSpace", "build_blowup_graph", "circuits_and_decomposition", "clique_prolong",
    "monomial_prolong", "monomial_support",
    "Tree", "edge_labeling", "fourier_indices", "load_tree", "phylo_parametrization", "phylo_quadrics",
    "split_matrices",
    "ParseError", "Polynomial", "VarSet", "partial_polarize", "polarize",
    "MonomialMap", "SampleConfig", "interpolate_vanishing_piece", "sample_variety_point",
    "secant_vanish_check",
]
