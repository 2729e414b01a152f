"""Shipped example data for the extension pipeline and the graph suite."""
from __future__ import annotations

import numpy as np

from . import groups as G
from .extend import PDFunctionData, z2_counterexample_data  # noqa: F401
from .graphs import Graph

# Chordal graph on 8 vertices whose square is not chordal: the square has the
# chordless 4-cycle (4, 6, 5, 7).  Found by random search over chordal graphs
# built by attaching each new vertex to a clique of earlier ones.
SQUARE_NOT_CHORDAL_EDGES = (
    (0, 1), (0, 2), (0, 5), (0, 6), (1, 2), (1, 3), (1, 5), (1, 7),
    (2, 3), (2, 4), (2, 6), (3, 4), (3, 7),
)


def square_not_chordal_graph() -> Graph:
    return Graph(8, SQUARE_NOT_CHORDAL_EDGES)


def z_strip_data(c1: float = 0.5) -> PDFunctionData:
    """phi(0) = 1, phi(±1) = c1 on the strip |x| < 2 in Z."""
    spec = G.int_lattice(1)
    S = G.Strip(G.Morphism((1,)), 2)
    return PDFunctionData(spec, S, 1, {(0,): [[1.0]], (1,): [[c1]]})


def _involution(rng, k):
    Q, _ = np.linalg.qr(rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k)))
    signs = np.where(rng.random(k) < 0.5, -1.0, 1.0)
    signs[0], signs[-1] = 1.0, -1.0
    return Q @ np.diag(signs) @ Q.conj().T


def dihedral_data(seed: int = 0, d: int = 2, k: int = 12) -> PDFunctionData:
    """phi(x) = V* pi(x) V on LengthBall(2), pi a random unitary representation.

    a and b act by random unitary involutions of C^k, and V is a random
    k x d matrix scaled so phi(e) has norm 1.
    """
    rng = np.random.default_rng(seed)
    spec = G.infinite_dihedral()
    gens = {"a": _involution(rng, k), "b": _involution(rng, k)}
    V = rng.standard_normal((k, d)) + 1j * rng.standard_normal((k, d))
    V /= np.sqrt(np.linalg.norm(V.conj().T @ V, 2))
    values = {}
    for x in G.ball_set(spec, 2):
        P = np.eye(k, dtype=complex)
        for ch in x:
            P = P @ gens[ch]
        values[x] = V.conj().T @ P @ V
    return PDFunctionData(spec, G.LengthBall(2), d, values)


def heisenberg_strip_data(seed: int = 0, atoms: int = 3) -> PDFunctionData:
    """Character mixture on the strip |m| < 1, i.e. the subgroup m = 0.

    On that subgroup (0, n, p)(0, n', p') = (0, n + n', p + p'), so
    phi(0, n, p) = sum_k w_k exp(i(theta_k n + psi_k p)) is positive definite
    there; the Cayley graph is a disjoint union of complete slices.
    """
    rng = np.random.default_rng(seed)
    w = rng.uniform(0.2, 1.0, atoms)
    w /= w.sum()
    theta = rng.uniform(0, 2 * np.pi, atoms)
    psi = rng.uniform(0, 2 * np.pi, atoms)

    def rule(x):
        _, n, p = x
        return [[complex(np.sum(w * np.exp(1j * (theta * n + psi * p))))]]

    def rule_array(xs):
        phase = np.outer(xs[:, 1], theta) + np.outer(xs[:, 2], psi)
        return (np.exp(1j * phase) @ w).reshape(-1, 1, 1)

    spec = G.heisenberg()
    return PDFunctionData(spec, G.Strip(G.Morphism((1, 0)), 1), 1, rule=rule,
                          rule_array=rule_array)
