"""Positive definite extension of functions from chordal Cayley graph windows.

Modules
-------
groups
    Concrete finitely generated groups, elements and symmetric sets.
graphs
    Chordality testing with certificates, graph powers and cliques.
cayley
    Cayley graph windows, Folner sets and polygon cycles in Z^2.
completion
    Matrix balls and PSD completion of partial block matrices.
extend
    The window extension pipeline, counterexample certificates and the
    Caratheodory-Fejer decomposition.
cli
    Command-line front end.
"""
from .completion import chordal_complete, matrix_ball
from .extend import (
    PDFunctionData,
    certify_cross_counterexample,
    certify_z2_counterexample,
    cf_decompose,
    cross_scalar_extend,
    extend_on_window,
    extension_report,
    folner_average,
)
from .graphs import Graph, is_chordal, verify_certificate

__all__ = [
    "Graph", "PDFunctionData", "certify_cross_counterexample", "certify_z2_counterexample",
    "cf_decompose", "chordal_complete", "cross_scalar_extend", "extend_on_window",
    "extension_report", "folner_average", "is_chordal", "matrix_ball", "verify_certificate",
]
__version__ = "0.1.0"
