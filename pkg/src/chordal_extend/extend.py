"""Window-scale extension of partially positive definite functions.

Pipeline: a function phi on a symmetric set S gives the partial kernel
k(x, y) = phi(x^-1 y) on a finite window of the group.  When the window's
Cayley graph is chordal the kernel is completed to a PSD kernel K, and K is
averaged over a Folner set F into a function of one variable,

    Phi_F(x) = (1/|F|) sum_{y in F} K(y, y x),

which equals phi on S exactly and is positive definite up to a boundary
error that shrinks as F becomes more invariant.

Also here: certificates for two explicit non-extendable functions on Z^2 and
the Caratheodory-Fejer decomposition used to extend scalar data from the
cross-shaped set.
"""
from __future__ import annotations

import cmath
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.optimize

from . import cayley as CY
from . import groups as G
from .completion import (
    DEFAULT_TOL,
    CliqueNotPSD,
    NotChordal,
    NotPSD,
    PartialBlockMatrix,
    as_matrix,
    check_hermitian,
    chordal_complete,
    intersect_balls,
    matrix_ball,
    matrix_from_json,
    matrix_to_json,
    min_eigenvalue,
)
from .graphs import DEFAULT_CLIQUE_CAP, ChordlessCycle, is_chordal, maximal_cliques


class MissingValue(KeyError):
    pass


class OutsideSet(ValueError):
    pass


class WindowTooSmall(ValueError):
    def __init__(self, missing):
        self.missing = list(missing)
        super().__init__(f"{len(self.missing)} required elements are outside the window, "
                         f"e.g. {self.missing[:5]}")


class RootOffCircle(RuntimeError):
    pass


# -- data -------------------------------------------------------------------------

@dataclass
class PDFunctionData:
    """A function phi: S -> d x d complex matrices.

    ``values`` holds one representative per pair {s, s^-1}; the other is
    read as the adjoint.  Elements of S missing from ``values`` are taken
    from ``rule`` (a callable, must satisfy rule(s^-1) = rule(s)*) or are
    zero when ``default_zero`` is set.  ``rule_array`` is an optional
    vectorised form of ``rule`` for integer-encoded groups: rows of
    elements in, an array of shape (k, d, d) out.
    """

    spec: G.GroupSpec
    S: G.SymmetricSet
    d: int
    values: dict = field(default_factory=dict)
    rule: Callable | None = None
    default_zero: bool = False
    rule_array: Callable | None = field(default=None, repr=False)

    def __post_init__(self):
        self.S.check(self.spec)
        vals = {}
        for x, v in self.values.items():
            x = G.check_element(self.spec, x)
            v = as_matrix(v)
            if v.shape != (self.d, self.d):
                raise ValueError(f"value at {x!r} has shape {v.shape}")
            if not self.S.contains(self.spec, x):
                raise OutsideSet(f"{x!r} is not in S")
            xi = G.inverse(self.spec, x)
            if xi in vals and np.max(np.abs(vals[xi] - v.conj().T)) > 1e-12:
                raise ValueError(f"values at {x!r} and its inverse are not adjoint")
            vals[x] = v
        self.values = vals
        self._cache: dict = {}
        e = G.identity(self.spec)
        phi_e = check_hermitian(self.value(e))
        if min_eigenvalue(phi_e) < -DEFAULT_TOL:
            raise ValueError("phi(e) must be positive semidefinite")

    def value(self, x) -> np.ndarray:
        hit = self._cache.get(x)
        if hit is not None:
            return hit
        if not self.S.contains(self.spec, x):
            raise OutsideSet(f"{x!r} is not in S")
        if x in self.values:
            v = self.values[x]
        else:
            xi = G.inverse(self.spec, x)
            if xi in self.values:
                v = self.values[xi].conj().T
            elif self.rule is not None:
                v = as_matrix(self.rule(x))
            elif self.default_zero:
                v = np.zeros((self.d, self.d), dtype=complex)
            else:
                raise MissingValue(f"no value for {x!r}")
        self._cache[x] = v
        return v

    def in_S(self, x) -> bool:
        return bool(self.S.contains(self.spec, x))

    def to_json(self) -> dict:
        if self.rule is not None:
            raise ValueError("rule-based data cannot be serialised")
        keys = sorted(self.values, key=lambda z: G.sort_key(self.spec, z))
        out = {"group": self.spec.to_json(), "set": self.S.to_json(), "d": self.d,
               "values": {G.element_key(k): matrix_to_json(self.values[k]) for k in keys}}
        if self.default_zero:
            out["default"] = "zero"
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "PDFunctionData":
        spec = G.GroupSpec.from_json(obj["group"])
        S = G.set_from_json(spec, obj["set"])
        values = {G.element_from_key(spec, k): matrix_from_json(v)
                  for k, v in obj.get("values", {}).items()}
        default = obj.get("default")
        if default not in (None, "zero"):
            raise ValueError(f"unknown default {default!r}")
        return cls(spec, S, int(obj["d"]), values, default_zero=default == "zero")


def _as_window(spec, radius_or_window) -> CY.Window:
    if isinstance(radius_or_window, CY.Window):
        return radius_or_window
    return CY.ball(spec, int(radius_or_window))


# -- verification and kernels ----------------------------------------------------------

@dataclass(frozen=True)
class PDCheck:
    ok: bool
    clique: tuple | None
    min_eig: float
    n_cliques: int

    def to_json(self, spec: G.GroupSpec) -> dict:
        clique = None if self.clique is None else [G.element_to_json(spec, x) for x in self.clique]
        return {"ok": self.ok, "clique": clique, "min_eig": self.min_eig,
                "n_cliques": self.n_cliques}


def gram(data: PDFunctionData, elements: Sequence, fn=None) -> np.ndarray:
    """Block matrix [f(g_i^-1 g_j)] for f = phi (default) or a given callable."""
    fn = data.value if fn is None else fn
    d, k = data.d, len(elements)
    M = np.zeros((k * d, k * d), dtype=complex)
    for i, gi in enumerate(elements):
        for j, gj in enumerate(elements):
            M[i * d:(i + 1) * d, j * d:(j + 1) * d] = fn(G.quotient(data.spec, gi, gj))
    return M


def verify_pd_function(data: PDFunctionData, radius, tol: float = DEFAULT_TOL,
                       cap: int = DEFAULT_CLIQUE_CAP) -> PDCheck:
    """Check phi on every maximal clique of Gamma(G, S) restricted to a window."""
    w = _as_window(data.spec, radius)
    g = CY.cayley_graph(data.spec, data.S, w)
    cliques = maximal_cliques(g, cap=cap)
    worst, worst_clique = math.inf, None
    for c in cliques:
        lam = min_eigenvalue(gram(data, [w.elements[i] for i in c]))
        if lam < worst:
            worst, worst_clique = lam, c
    ok = worst >= -tol
    clique = None if ok else tuple(w.elements[i] for i in worst_clique)
    return PDCheck(bool(ok), clique, float(worst), len(cliques))


def build_kernel(data: PDFunctionData, radius, graph=None) -> PartialBlockMatrix:
    """Partial kernel k(x_i, x_j) = phi(x_i^-1 x_j) on the Cayley pattern of a window."""
    w = _as_window(data.spec, radius)
    if graph is None:
        graph = CY.cayley_graph(data.spec, data.S, w)
    n, d = len(w), data.d
    values = np.zeros((n * d, n * d), dtype=complex)
    mask = np.eye(n, dtype=bool)
    phi_e = data.value(G.identity(data.spec))
    elems = w.elements
    inv = [G.inverse(data.spec, x) for x in elems]
    for i in range(n):
        values[i * d:(i + 1) * d, i * d:(i + 1) * d] = phi_e
        for j in graph.adj[i]:
            if j > i:
                v = data.value(G.multiply(data.spec, inv[i], elems[j]))
                values[i * d:(i + 1) * d, j * d:(j + 1) * d] = v
                values[j * d:(j + 1) * d, i * d:(i + 1) * d] = v.conj().T
                mask[i, j] = mask[j, i] = True
    return PartialBlockMatrix.from_dense(values, mask, d)


@dataclass
class CompletedKernel:
    """PSD completion of the window kernel, stored per connected component.

    Blocks between different components of the Cayley pattern are zero (the
    central completion never couples disconnected parts).
    """

    window: CY.Window
    d: int
    components: list
    matrices: list
    _where: dict = field(init=False, repr=False)

    def __post_init__(self):
        where = {}
        for c, comp in enumerate(self.components):
            for k, v in enumerate(comp):
                where[v] = (c, k)
        self._where = where

    def block(self, i: int, j: int) -> np.ndarray:
        ci, ki = self._where[i]
        cj, kj = self._where[j]
        d = self.d
        if ci != cj:
            return np.zeros((d, d), dtype=complex)
        M = self.matrices[ci]
        return M[ki * d:(ki + 1) * d, kj * d:(kj + 1) * d]

    def entry(self, x, y) -> np.ndarray:
        return self.block(self.window.index(x), self.window.index(y))

    def dense(self) -> np.ndarray:
        n, d = len(self.window), self.d
        out = np.zeros((n * d, n * d), dtype=complex)
        for comp, M in zip(self.components, self.matrices):
            idx = np.concatenate([np.arange(v * d, (v + 1) * d) for v in comp])
            out[np.ix_(idx, idx)] = M
        return out

    def min_eigenvalue(self) -> float:
        return min(float(np.linalg.eigvalsh((M + M.conj().T) / 2)[0]) for M in self.matrices)


def _dense_gram(data: PDFunctionData, elems: Sequence) -> np.ndarray:
    """Full Gram matrix [phi(x_i^-1 x_j)], vectorised when ``rule_array`` allows."""
    spec, d, k = data.spec, data.d, len(elems)
    if data.rule_array is None or data.values or spec.kind not in (G.INT_LATTICE, G.HEISENBERG):
        return gram(data, elems)
    arr = G.elements_to_array(spec, elems)
    M = np.empty((k, d, k, d), dtype=complex)
    for i, x in enumerate(elems):
        q = G.quotients_array(spec, x, arr)
        if not np.all(data.S.contains_array(spec, q)):
            raise OutsideSet("component is not a clique of the Cayley graph")
        M[i] = np.asarray(data.rule_array(q), dtype=complex).transpose(1, 0, 2)
    return M.reshape(k * d, k * d)


def extend_on_window(data: PDFunctionData, radius, tol: float = DEFAULT_TOL,
                     method: str = "elimination", cap: int = DEFAULT_CLIQUE_CAP) -> CompletedKernel:
    """Complete the window kernel, one connected component at a time.

    Raises NotChordal (certificate in window indices, offending elements in
    ``.elements``) when the window's Cayley graph is not chordal, and
    CliqueNotPSD when phi fails partial positive definiteness.  A component
    that is already a clique is fully specified and only checked.
    """
    w = _as_window(data.spec, radius)
    comps, matrices = [], []
    for comp, complete in CY.cayley_components(data.spec, data.S, w):
        sub_elems = tuple(w.elements[i] for i in comp)
        comps.append(comp)
        if complete:
            M = _dense_gram(data, sub_elems)
            lam = min_eigenvalue(M)
            if lam < -tol:
                err = CliqueNotPSD(tuple(comp), lam)
                err.elements = sub_elems
                raise err
            matrices.append(M)
            continue
        sub_w = CY.Window(sub_elems)
        g = CY.cayley_graph(data.spec, data.S, sub_w)
        cert = is_chordal(g)
        if not cert.chordal:
            mapped = ChordlessCycle(tuple(comp[i] for i in cert.cycle))
            err = NotChordal(mapped, "Cayley graph on the window is not chordal")
            err.elements = tuple(sub_elems[i] for i in cert.cycle)
            raise err
        P = build_kernel(data, sub_w, graph=g)
        try:
            matrices.append(chordal_complete(P, tol=tol, method=method, cap=cap))
        except CliqueNotPSD as exc:
            err = CliqueNotPSD(tuple(comp[i] for i in exc.clique), exc.min_eig)
            err.elements = tuple(sub_elems[i] for i in exc.clique)
            raise err from None
    return CompletedKernel(w, data.d, comps, matrices)


# -- Folner averaging ---------------------------------------------------------------

def averaging_window(spec: G.GroupSpec, F: CY.FolnerSet, targets: Sequence) -> CY.Window:
    """Smallest window holding y and y x for y in F and x in the targets."""
    elems = set(F.elements)
    for y in F.elements:
        for x in targets:
            elems.add(G.multiply(spec, y, x))
    return CY.window_from(spec, elems)


def folner_average(data: PDFunctionData, kernel: CompletedKernel, N: int,
                   targets: Sequence) -> dict:
    """Phi_F(x) = mean over y in folner_set(N) of K(y, y x)."""
    spec = data.spec
    F = CY.folner_set(spec, N)
    w = kernel.window
    missing = []
    for x in targets:
        for y in F.elements:
            for z in (y, G.multiply(spec, y, x)):
                if z not in w:
                    missing.append((G.element_to_json(spec, x), G.element_to_json(spec, z)))
    if missing:
        raise WindowTooSmall(missing)
    out = {}
    for x in targets:
        acc = np.zeros((data.d, data.d), dtype=complex)
        for y in F.elements:
            acc += kernel.block(w.index(y), w.index(G.multiply(spec, y, x)))
        out[x] = acc / len(F)
    return out


@dataclass
class ExtensionReport:
    spec: G.GroupSpec
    cells: list
    kernels: dict = field(repr=False, default_factory=dict)

    def min_eigs(self, radius: int) -> list:
        return [c["gram_min_eig"] for c in self.cells if c["radius"] == radius]

    def trend_nondecreasing(self, radius: int, slack: float = 1e-12) -> bool:
        eigs = self.min_eigs(radius)
        return all(b >= a - slack for a, b in zip(eigs, eigs[1:]))

    @property
    def max_deviation_on_S(self) -> float:
        return max(c["max_dev_on_S"] for c in self.cells)

    def to_json(self) -> dict:
        radii = sorted({c["radius"] for c in self.cells})
        return {"group": self.spec.to_json(),
                "cells": self.cells,
                "trend_nondecreasing": {str(r): self.trend_nondecreasing(r) for r in radii},
                "max_dev_on_S": self.max_deviation_on_S}


def extension_report(data: PDFunctionData, radii: Sequence, Ns: Sequence,
                     test_set: Sequence = (), seed: int = 0, tol: float = DEFAULT_TOL,
                     n_tuples: int = 16, tuple_size: int = 4,
                     method: str = "elimination", cap: int = DEFAULT_CLIQUE_CAP,
                     radius_cap: int = G.DEFAULT_RADIUS_CAP) -> ExtensionReport:
    """Følner-averaged extensions on a grid of (test radius, N).

    For each test radius r the Gram matrices are taken over the ball of radius
    r (the whole ball, plus ``n_tuples`` random tuples from it); the targets
    are all quotients g_i^-1 g_j of ball elements together with ``test_set``.
    Each N completes the kernel on the smallest window containing F and F x
    for every target x.
    """
    spec = data.spec
    cells, kernels = [], {}
    extra = [G.check_element(spec, x) for x in test_set]
    for radius in radii:
        test_ball = CY.ball(spec, radius, cap=radius_cap).elements
        targets = {G.quotient(spec, a, b) for a in test_ball for b in test_ball}
        targets.update(extra)
        targets = sorted(targets, key=lambda z: G.sort_key(spec, z))
        for N in Ns:
            F = CY.folner_set(spec, N)
            w = averaging_window(spec, F, targets)
            K = extend_on_window(data, w, tol=tol, method=method, cap=cap)
            kernels[(radius, N)] = K
            phi_F = folner_average(data, K, N, targets)
            fn = phi_F.__getitem__
            full = min_eigenvalue(gram(data, test_ball, fn))
            rng = np.random.default_rng([seed, radius, N])
            tuple_eigs = []
            size = min(tuple_size, len(test_ball))
            for _ in range(n_tuples):
                pick = rng.choice(len(test_ball), size=size, replace=False)
                tuple_eigs.append(min_eigenvalue(gram(data, [test_ball[i] for i in sorted(pick)], fn)))
            devs = [float(np.linalg.norm(phi_F[x] - data.value(x), 2))
                    for x in targets if data.in_S(x)]
            cells.append({
                "radius": radius,
                "N": N,
                "window_size": len(w),
                "folner_size": len(F),
                "kernel_min_eig": K.min_eigenvalue(),
                "gram_min_eig": full,
                "tuple_min_eigs": tuple_eigs,
                "max_dev_on_S": max(devs) if devs else 0.0,
                "values": {G.element_key(x): matrix_to_json(phi_F[x]) for x in extra},
            })
    return ExtensionReport(spec, cells, kernels)


# -- counterexample certificates -----------------------------------------------------------

def _chain_ball(data_fn, spec, points, target, tol):
    """Ball for the value at ``target`` forced by the 3-point Gram matrix on ``points``.

    The Gram matrix [f(g_i^-1 g_j)] has the unknown f(g_1^-1 g_3) in the
    corner; ``target`` must be that element or its inverse.
    """
    g1, g2, g3 = points
    e = G.identity(spec)
    corner = G.quotient(spec, g1, g3)
    ball = matrix_ball(data_fn(e), data_fn(G.quotient(spec, g1, g2)), data_fn(e),
                       data_fn(G.quotient(spec, g2, g3)), data_fn(e), tol)
    if corner == target:
        return ball
    if G.inverse(spec, corner) == target:
        return ball.adjoint()
    raise ValueError("target is not the corner of the chain")


def z2_counterexample_data() -> PDFunctionData:
    """phi(0,0) = I, phi(1,0) = E21, phi(0,1) = E12, zero elsewhere on Z^2 minus {±(1,1)}."""
    spec = G.int_lattice(2)
    S = G.ExcludedPairs(G.WholeGroup(), [(1, 1)])
    values = {(0, 0): np.eye(2), (1, 0): np.array([[0, 0], [1, 0]]),
              (0, 1): np.array([[0, 1], [0, 0]])}
    return PDFunctionData(spec, S, 2, values, default_zero=True)


@dataclass
class Z2Certificate:
    pd_check: PDCheck
    ball_first: object
    ball_second: object
    forced_11: np.ndarray
    forced_21: np.ndarray
    specified_21: np.ndarray
    contradiction: float
    forced_22: np.ndarray
    contradiction_22: float

    @property
    def confirmed(self) -> bool:
        return self.pd_check.ok and abs(self.contradiction - 1.0) <= 1e-9

    def to_json(self) -> dict:
        spec = G.int_lattice(2)
        return {
            "which": "z2",
            "pd_check": self.pd_check.to_json(spec),
            "ball_phi_11_first_chain": self.ball_first.to_json(),
            "ball_phi_11_second_chain": self.ball_second.to_json(),
            "forced_phi_11": matrix_to_json(self.forced_11),
            "chain": [[0, 0], [1, 1], [2, 1]],
            "forced_phi_21": matrix_to_json(self.forced_21),
            "specified_phi_21": matrix_to_json(self.specified_21),
            "contradiction": self.contradiction,
            "secondary_chain": [[0, 0], [1, 1], [2, 2]],
            "forced_phi_22": matrix_to_json(self.forced_22),
            "contradiction_22": self.contradiction_22,
            "confirmed": self.confirmed,
        }


def certify_z2_counterexample(tol: float = DEFAULT_TOL,
                              cap: int = DEFAULT_CLIQUE_CAP) -> Z2Certificate:
    """Derive that the Z^2 \\ {±(1,1)} data has no positive definite extension.

    Two 3-point Gram matrices each confine Phi(1,1) to a ball; the balls
    meet only at I_2.  With Phi(1,1) = I_2 the chain (0,0), (1,1), (2,1)
    forces Phi(2,1) = E21, whose (2,1) entry is 1 while phi(2,1) = 0.
    """
    data = z2_counterexample_data()
    spec = data.spec
    pd_check = verify_pd_function(data, 3, tol=tol, cap=cap)
    known = {}

    def f(x):
        return known[x] if x in known else data.value(x)

    b1 = _chain_ball(f, spec, [(1, 1), (0, 1), (0, 0)], (1, 1), tol)
    b2 = _chain_ball(f, spec, [(1, 1), (1, 0), (0, 0)], (1, 1), tol)
    phi11 = intersect_balls([b1, b2], tol)
    if phi11 is None:
        raise AssertionError("the two constraints do not pin down Phi(1,1)")
    known[(1, 1)] = phi11
    known[(-1, -1)] = phi11.conj().T
    b3 = _chain_ball(f, spec, [(0, 0), (1, 1), (2, 1)], (2, 1), tol)
    if not b3.unique:
        raise AssertionError("Phi(2,1) is not forced")
    spec21 = data.value((2, 1))
    contradiction = float(abs(b3.center[1, 0] - spec21[1, 0]))
    b4 = _chain_ball(f, spec, [(0, 0), (1, 1), (2, 2)], (2, 2), tol)
    contradiction_22 = float(np.linalg.norm(b4.center - data.value((2, 2)), 2)) if b4.unique else 0.0
    return Z2Certificate(pd_check, b1, b2, phi11, b3.center, spec21, contradiction,
                         b4.center, contradiction_22)


def cross_data(U1, U2, m: int = 2, n: int = 2) -> PDFunctionData:
    """C_{k0} = U1^k, C_{0l} = U2^l on the cross {(k,0): |k|<=m} u {(0,l): |l|<=n}."""
    U1, U2 = as_matrix(U1), as_matrix(U2)
    d = U1.shape[0]
    values = {(0, 0): np.eye(d, dtype=complex)}
    for k in range(1, m + 1):
        values[(k, 0)] = np.linalg.matrix_power(U1, k)
    for l in range(1, n + 1):
        values[(0, l)] = np.linalg.matrix_power(U2, l)
    return PDFunctionData(G.int_lattice(2), G.Cross(m, n), d, values)


def block_toeplitz(blocks: Sequence) -> np.ndarray:
    """[[T_{i-j}]] with T_{-k} = T_k*, from blocks T_0..T_m."""
    blocks = [as_matrix(b) for b in blocks]
    m, d = len(blocks) - 1, blocks[0].shape[0]
    M = np.zeros(((m + 1) * d, (m + 1) * d), dtype=complex)
    for i in range(m + 1):
        for j in range(m + 1):
            B = blocks[i - j] if i >= j else blocks[j - i].conj().T
            M[i * d:(i + 1) * d, j * d:(j + 1) * d] = B
    return M


def _is_unitary(U, tol=1e-9) -> bool:
    return U.shape[0] == U.shape[1] and np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0]), 2) <= tol


@dataclass
class CrossCertificate:
    U1: np.ndarray
    U2: np.ndarray
    m: int
    n: int
    toeplitz_min_eigs: tuple
    forced_via_10: np.ndarray
    forced_via_01: np.ndarray
    difference: float
    extendable: bool
    commutator_norm: float
    witness_min_eig: float | None

    @property
    def confirmed(self) -> bool:
        """Forced values agree exactly when U1 and U2 commute."""
        return self.extendable == (self.commutator_norm <= 1e-9) and min(self.toeplitz_min_eigs) >= -1e-9

    def to_json(self) -> dict:
        return {
            "which": "cross",
            "U1": matrix_to_json(self.U1), "U2": matrix_to_json(self.U2),
            "m": self.m, "n": self.n,
            "toeplitz_min_eigs": list(self.toeplitz_min_eigs),
            "forced_C11_via_(1,0)": matrix_to_json(self.forced_via_10),
            "forced_C11_via_(0,1)": matrix_to_json(self.forced_via_01),
            "difference_norm": self.difference,
            "commutator_norm": self.commutator_norm,
            "extendable": self.extendable,
            "witness_min_eig": self.witness_min_eig,
            "confirmed": self.confirmed,
        }


def certify_cross_counterexample(U1, U2, m: int = 2, n: int = 2,
                                 tol: float = DEFAULT_TOL) -> CrossCertificate:
    """Forced C_11 from the two 3-point chains around the unit square.

    The chain (0,0), (1,0), (1,1) forces C_11 = U1 U2 and the chain
    (0,0), (0,1), (1,1) forces C_11 = U2 U1; an extension exists only if they
    agree.  For commuting inputs the candidate C_kl = U1^k U2^l is checked on
    [-2, 2]^2 as a positive witness.
    """
    U1, U2 = as_matrix(U1), as_matrix(U2)
    if not (_is_unitary(U1) and _is_unitary(U2)) or U1.shape != U2.shape:
        raise ValueError("U1 and U2 must be unitary of the same size")
    data = cross_data(U1, U2, m, n)
    spec = data.spec
    eigs = (min_eigenvalue(block_toeplitz([data.value((k, 0)) for k in range(m + 1)])),
            min_eigenvalue(block_toeplitz([data.value((0, l)) for l in range(n + 1)])))
    if min(eigs) < -tol:
        raise NotPSD("cross data fails the Toeplitz conditions")
    via_10 = _chain_ball(data.value, spec, [(0, 0), (1, 0), (1, 1)], (1, 1), tol)
    via_01 = _chain_ball(data.value, spec, [(0, 0), (0, 1), (1, 1)], (1, 1), tol)
    if not (via_10.unique and via_01.unique):
        raise AssertionError("C_11 is not forced by the chains")
    diff = float(np.linalg.norm(via_10.center - via_01.center, 2))
    extendable = diff <= tol
    comm = float(np.linalg.norm(U1 @ U2 - U2 @ U1, 2))
    witness = None
    if extendable:
        pts = [(k, l) for k in range(-2, 3) for l in range(-2, 3)]

        def cand(x):
            return np.linalg.matrix_power(U1, x[0]) @ np.linalg.matrix_power(U2, x[1])

        witness = min_eigenvalue(gram(data, pts, cand))
    return CrossCertificate(U1, U2, m, n, eigs, via_10.center, via_01.center, diff,
                            bool(extendable), comm, witness)


# -- Caratheodory-Fejer -------------------------------------------------------------

def toeplitz_from_moments(c: Sequence) -> np.ndarray:
    """T[i, j] = c_{i-j} with c_{-k} = conj(c_k)."""
    c = np.asarray(c, dtype=complex)
    return scipy.linalg.toeplitz(c, c.conj())


def _rank_from_spectrum(T: np.ndarray, c0: float, rank_tol: float) -> int:
    w = np.linalg.eigvalsh(T)
    return int(np.sum(w > rank_tol * c0 * T.shape[0]))


def _null_vector(T: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(T)
    return V[:, 0]


def _atoms_from_singular(T: np.ndarray, moments: np.ndarray, tol: float):
    u = _null_vector(T)
    # T u = 0 makes sum_j u_j z^j vanish at z = exp(-i alpha) for every atom.
    roots = np.roots(u[::-1])
    if roots.size == 0:
        raise RootOffCircle("degenerate null vector")
    off = np.max(np.abs(np.abs(roots) - 1.0))
    if off > 1e-6:
        raise RootOffCircle(f"root off the unit circle by {off:.2e}")
    freqs = np.mod(-np.angle(roots), 2 * np.pi)
    m = len(moments) - 1
    V = np.exp(1j * np.outer(np.arange(m + 1), freqs))
    A = np.vstack([V.real, V.imag])
    b = np.concatenate([moments.real, moments.imag])
    w, *_ = np.linalg.lstsq(A, b, rcond=None)
    if np.any(w <= 0):
        w, _ = scipy.optimize.nnls(A, b)
    order = np.argsort(freqs)
    atoms = [(float(w[i]), float(freqs[i])) for i in order if w[i] > 0]
    return atoms, roots[order]


def cf_decompose(moments: Sequence, tol: float = DEFAULT_TOL,
                 rank_tol: float = 1e-11, return_roots: bool = False):
    """Atoms (weight, frequency) with sum_p w_p exp(i k alpha_p) = c_k, k = 0..m.

    A singular PSD Toeplitz matrix is rank-deficient already on the leading
    (r+1) x (r+1) section, whose null vector is a polynomial vanishing at the
    r atoms.  A nonsingular one is first extended by one moment taken on the
    boundary of its matrix ball, which makes the larger Toeplitz matrix
    singular.

    With ``return_roots`` the polynomial roots behind the frequencies are
    returned as well, so callers can check how close they sit to the circle.
    """
    c = np.asarray(moments, dtype=complex).ravel()
    if c.size == 0:
        raise ValueError("need at least c_0")
    c0 = float(c[0].real)
    if not c0 > 0 or abs(c[0].imag) > tol * max(1.0, c0):
        raise NotPSD("c_0 must be real and positive")
    c = c.copy()
    c[0] = c0
    T = toeplitz_from_moments(c)
    lam = float(np.linalg.eigvalsh(T)[0])
    if lam < -tol * c0:
        raise NotPSD(f"Toeplitz matrix is not PSD (min eigenvalue {lam:.3e})")
    m = c.size - 1
    r = _rank_from_spectrum(T, c0, rank_tol)
    if r <= m:
        atoms, roots = _atoms_from_singular(T[: r + 1, : r + 1], c, tol)
        return (atoms, roots) if return_roots else atoms
    last_err = None
    for theta in (0.0, 0.5, 1.0, 2.0, 3.0):
        ext = _boundary_extension(c, theta, tol)
        try:
            atoms, roots = _atoms_from_singular(toeplitz_from_moments(ext), c, tol)
        except RootOffCircle as exc:
            last_err = exc
            continue
        return (atoms, roots) if return_roots else atoms
    raise last_err


def _boundary_extension(c: np.ndarray, theta: float, tol: float) -> np.ndarray:
    """Append c_{m+1} on the boundary of its admissible disc, direction exp(i theta)."""
    m = c.size - 1
    T = toeplitz_from_moments(c)
    A = T[:1, :1]
    Cm = T[1:, 1:]
    B = T[:1, 1:]
    # corner X = T_ext[0, m+1] = conj(c_{m+1}); D rows are T_ext[i, m+1] = c_{i-m-1}
    D = np.array([[np.conj(c[m + 1 - i])] for i in range(1, m + 1)], dtype=complex).reshape(m, 1)
    ball = matrix_ball(A, B, Cm, D, T[:1, :1], tol)
    X = ball.point(np.array([[cmath.exp(1j * theta)]]))
    return np.append(c, np.conj(X[0, 0]))


def atoms_moments(atoms: Sequence, m: int) -> np.ndarray:
    """c_k = sum_p w_p exp(i k alpha_p) for k = 0..m."""
    k = np.arange(m + 1)
    return sum(w * np.exp(1j * k * a) for w, a in atoms) + np.zeros(m + 1, dtype=complex)


def cross_scalar_extend(h_moments: Sequence, v_moments: Sequence, window=(3, 3),
                        tol: float = DEFAULT_TOL) -> np.ndarray:
    """Positive definite extension to Z^2 of scalar data on a cross.

    With atoms (w_p, alpha_p) for the horizontal moments and (v_q, beta_q)
    for the vertical ones, c_kl = sum_{p,q} w_p v_q / c_0 exp(i(k alpha_p + l beta_q)).
    Returns the grid indexed ``[k + K, l + L]`` for |k| <= K, |l| <= L.
    """
    h = np.asarray(h_moments, dtype=complex)
    v = np.asarray(v_moments, dtype=complex)
    if abs(h[0] - v[0]) > tol * max(1.0, abs(h[0])):
        raise ValueError("horizontal and vertical data must share c_0")
    c0 = float(h[0].real)
    ha = cf_decompose(h, tol)
    va = cf_decompose(v, tol)
    K, L = window
    ks = np.arange(-K, K + 1)[:, None]
    ls = np.arange(-L, L + 1)[None, :]
    grid = np.zeros((2 * K + 1, 2 * L + 1), dtype=complex)
    for w, a in ha:
        for u, b in va:
            grid += (w * u / c0) * np.exp(1j * (ks * a + ls * b))
    return grid


def grid_gram(grid: np.ndarray, points: Sequence) -> np.ndarray:
    """Gram matrix [c(p_j - p_i)] of a grid returned by cross_scalar_extend."""
    K = (grid.shape[0] - 1) // 2
    L = (grid.shape[1] - 1) // 2
    M = np.zeros((len(points), len(points)), dtype=complex)
    for i, p in enumerate(points):
        for j, q in enumerate(points):
            M[i, j] = grid[q[0] - p[0] + K, q[1] - p[1] + L]
    return M
