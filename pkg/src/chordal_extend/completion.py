"""Hermitian block matrices: positivity, the one-entry matrix ball, chordal completion.

The central object is the 3x3 block problem

    [[A,  B,  X],
     [B*, C,  D],
     [X*, D*, E]] >= 0

whose solutions are exactly ``X = B C^+ D + L K R`` with ``L = (A - B C^+ B*)^{1/2}``,
``R = (E - D* C^+ D)^{1/2}`` and ``K`` any contraction.  Filling one missing
block at a time with the centre ``B C^+ D`` completes any partially positive
block matrix whose pattern is chordal.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .graphs import Graph, is_chordal, maximal_cliques, mcs, DEFAULT_CLIQUE_CAP

DEFAULT_TOL = 1e-9
DEFAULT_RANK_TOL = 1e-10
HERMITIAN_TOL = 1e-12


class NotHermitian(ValueError):
    pass


class NotPSD(ValueError):
    pass


class CornerNotPSD(NotPSD):
    def __init__(self, corner: str, min_eig: float):
        super().__init__(f"{corner} corner is not PSD (min eigenvalue {min_eig:.3e})")
        self.corner = corner
        self.min_eig = min_eig


class NotChordal(ValueError):
    def __init__(self, certificate, message="pattern is not chordal"):
        super().__init__(message)
        self.certificate = certificate


class CliqueNotPSD(ValueError):
    def __init__(self, clique, min_eig: float):
        super().__init__(f"clique {list(clique)} is not PSD (min eigenvalue {min_eig:.3e})")
        self.clique = tuple(clique)
        self.min_eig = min_eig


class NoFillablePair(RuntimeError):
    pass


def as_matrix(M) -> np.ndarray:
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def hermitian_part(M: np.ndarray) -> np.ndarray:
    return (M + M.conj().T) / 2


def check_hermitian(M, tol: float = HERMITIAN_TOL) -> np.ndarray:
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise NotHermitian(f"matrix is not square: {M.shape}")
    scale = max(1.0, float(np.max(np.abs(M))) if M.size else 1.0)
    if M.size and np.max(np.abs(M - M.conj().T)) > tol * scale:
        raise NotHermitian("matrix is not Hermitian")
    return hermitian_part(M)


def min_eigenvalue(M) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    M = check_hermitian(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.eigvalsh(M)[0])


def is_psd(M, tol: float = DEFAULT_TOL) -> bool:
    return min_eigenvalue(M) >= -tol


def _eigh_psd(C, tol: float):
    C = check_hermitian(C)
    w, V = np.linalg.eigh(C)
    if w.size and w[0] < -tol * max(1.0, abs(w[-1])):
        raise NotPSD(f"matrix is not PSD (min eigenvalue {w[0]:.3e})")
    return np.clip(w, 0.0, None), V


def pinv_psd(C, rank_tol: float = DEFAULT_RANK_TOL, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose inverse of a PSD matrix by eigendecomposition.

    Eigenvalues at or below ``rank_tol * lambda_max`` count as zero.
    """
    w, V = _eigh_psd(C, tol)
    if w.size == 0:
        return np.zeros((0, 0), dtype=complex)
    cut = rank_tol * w[-1]
    inv = np.zeros_like(w)
    keep = w > cut
    inv[keep] = 1.0 / w[keep]
    return (V * inv) @ V.conj().T


def sqrt_psd(C, tol: float = DEFAULT_TOL) -> np.ndarray:
    w, V = _eigh_psd(C, tol)
    return (V * np.sqrt(w)) @ V.conj().T


def project_psd(C, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Clip eigenvalues in [-tol, 0) to zero; below -tol is an error."""
    C = check_hermitian(C)
    w, V = np.linalg.eigh(C)
    if w.size and w[0] < -tol:
        raise NotPSD(f"min eigenvalue {w[0]:.3e} below -{tol:g}")
    if w.size and w[0] < 0:
        return (V * np.clip(w, 0.0, None)) @ V.conj().T
    return C


def _clean_defect(M: np.ndarray, cut: float) -> np.ndarray:
    M = hermitian_part(M)
    w, V = np.linalg.eigh(M)
    w = np.where(w <= cut, 0.0, w)
    return (V * w) @ V.conj().T


# -- the matrix ball ------------------------------------------------------------

@dataclass(frozen=True)
class MatrixBall:
    """``{center + left_radius @ K @ right_radius : ||K|| <= 1}``."""

    center: np.ndarray
    left_radius: np.ndarray
    right_radius: np.ndarray
    unique: bool

    def point(self, K) -> np.ndarray:
        return self.center + self.left_radius @ np.asarray(K, dtype=complex) @ self.right_radius

    def adjoint(self) -> "MatrixBall":
        """The ball of adjoints ``X*``."""
        return MatrixBall(self.center.conj().T, self.right_radius, self.left_radius, self.unique)

    def contraction_for(self, X, tol: float = 1e-9):
        """Return K with X = point(K) and ||K|| <= 1 + tol, or None if X is outside."""
        X = np.asarray(X, dtype=complex)
        Lp = np.linalg.pinv(self.left_radius, rcond=1e-10, hermitian=True)
        Rp = np.linalg.pinv(self.right_radius, rcond=1e-10, hermitian=True)
        K = Lp @ (X - self.center) @ Rp
        if np.linalg.norm(self.point(K) - X, 2) > tol * max(1.0, np.linalg.norm(X, 2)):
            return None
        if K.size and np.linalg.norm(K, 2) > 1 + tol:
            return None
        return K

    def contains(self, X, tol: float = 1e-9) -> bool:
        return self.contraction_for(X, tol) is not None

    def to_json(self) -> dict:
        return {"center": matrix_to_json(self.center),
                "left_radius": matrix_to_json(self.left_radius),
                "right_radius": matrix_to_json(self.right_radius),
                "unique": self.unique}


def matrix_ball(A, B, C, D, E, tol: float = DEFAULT_TOL) -> MatrixBall:
    """All X making [[A, B, X], [B*, C, D], [X*, D*, E]] PSD."""
    A, B, C, D, E = (as_matrix(M) for M in (A, B, C, D, E))
    p, q, r = A.shape[0], C.shape[0], E.shape[0]
    if B.shape != (p, q) or D.shape != (q, r) or A.shape != (p, p) or E.shape != (r, r):
        raise ValueError("inconsistent block dimensions")
    left = np.block([[A, B], [B.conj().T, C]])
    right = np.block([[C, D], [D.conj().T, E]])
    for name, M in (("left", left), ("right", right)):
        lam = min_eigenvalue(M)
        if lam < -tol:
            raise CornerNotPSD(name, lam)
    Cp = pinv_psd(project_psd(C, tol), tol=tol) if q else np.zeros((0, 0), dtype=complex)
    center = B @ Cp @ D
    scale = max(1.0, *(float(np.linalg.norm(M, 2)) if M.size else 0.0 for M in (A, C, E)))
    defect_l = _clean_defect(A - B @ Cp @ B.conj().T, tol * scale)
    defect_r = _clean_defect(E - D.conj().T @ Cp @ D, tol * scale)
    unique = (np.linalg.norm(defect_l, 2) <= tol) or (np.linalg.norm(defect_r, 2) <= tol)
    return MatrixBall(center, sqrt_psd(defect_l, tol), sqrt_psd(defect_r, tol), bool(unique))


def forced_entry(A, B, C, D, E, tol: float = DEFAULT_TOL):
    """The unique admissible X if the ball degenerates to a point, else None."""
    ball = matrix_ball(A, B, C, D, E, tol)
    return ball.center if ball.unique else None


def intersect_balls(balls, tol: float = DEFAULT_TOL):
    """Intersection of matrix balls of the same shape.

    X - center_k must lie in range(L_k) x range(R_k) for every ball, which is a
    linear condition on X.  Returns the single admissible point when these
    conditions pin X down and the point lies in every ball, else None.
    """
    rows, cols, rhs = [], [], []
    shape = balls[0].center.shape
    eye_r, eye_c = np.eye(shape[0]), np.eye(shape[1])
    for b in balls:
        PL = _range_projector(b.left_radius)
        PR = _range_projector(b.right_radius)
        # (I - PL)(X - c) = 0 and (X - c)(I - PR) = 0, vectorised row-major.
        for M in (np.kron(eye_r - PL, eye_c), np.kron(eye_r, (eye_c - PR).T)):
            rows.append(M)
            rhs.append(M @ b.center.reshape(-1))
    Mtot = np.vstack(rows)
    rtot = np.concatenate(rhs)
    if np.linalg.matrix_rank(Mtot, tol=1e-8) < Mtot.shape[1]:
        return None
    x, *_ = np.linalg.lstsq(Mtot, rtot, rcond=None)
    X = x.reshape(shape)
    if not all(b.contains(X, tol=1e-7) for b in balls):
        return None
    return X


def _range_projector(M: np.ndarray) -> np.ndarray:
    if M.size == 0:
        return M
    w, V = np.linalg.eigh(hermitian_part(M))
    keep = np.abs(w) > 1e-10 * max(1.0, float(np.max(np.abs(w))))
    Vk = V[:, keep]
    return Vk @ Vk.conj().T


# -- partial block matrices -------------------------------------------------------

class PartialBlockMatrix:
    """Hermitian n x n block matrix with d x d blocks, specified on a pattern.

    The diagonal blocks are always specified.  Off-diagonal blocks are given
    for pattern pairs i < j only; B(j, i) is read as B(i, j)*.
    """

    def __init__(self, n: int, d: int, blocks: dict, check: bool = True):
        self.n, self.d = int(n), int(d)
        self.values = np.zeros((self.n * self.d, self.n * self.d), dtype=complex)
        self.mask = np.zeros((self.n, self.n), dtype=bool)
        pattern = set()
        for (i, j), B in blocks.items():
            B = as_matrix(B)
            if B.shape != (self.d, self.d):
                raise ValueError(f"block ({i},{j}) has shape {B.shape}")
            if i > j:
                i, j, B = j, i, B.conj().T
            if self.mask[i, j]:
                prev = self.values[self._sl(i), self._sl(j)]
                if check and np.max(np.abs(prev - B)) > HERMITIAN_TOL * max(1.0, np.max(np.abs(B))):
                    raise NotHermitian(f"inconsistent blocks for pair ({i},{j})")
            if i == j:
                B = check_hermitian(B) if check else hermitian_part(B)
            else:
                pattern.add((i, j))
            self._set(i, j, B)
        if not np.all(np.diag(self.mask)):
            missing = [i for i in range(self.n) if not self.mask[i, i]]
            raise ValueError(f"diagonal blocks missing at {missing}")
        self.pattern = frozenset(pattern)

    def _sl(self, i):
        return slice(i * self.d, (i + 1) * self.d)

    def _set(self, i, j, B):
        self.values[self._sl(i), self._sl(j)] = B
        self.values[self._sl(j), self._sl(i)] = B.conj().T
        self.mask[i, j] = self.mask[j, i] = True

    @classmethod
    def from_dense(cls, values: np.ndarray, mask: np.ndarray, d: int) -> "PartialBlockMatrix":
        """Wrap a full array and a symmetric block mask (diagonal must be True)."""
        obj = cls.__new__(cls)
        n = mask.shape[0]
        obj.n, obj.d = n, d
        mask = np.asarray(mask, dtype=bool)
        if not np.array_equal(mask, mask.T) or not np.all(np.diag(mask)):
            raise ValueError("mask must be symmetric with a full diagonal")
        full = np.kron(mask, np.ones((d, d), dtype=bool))
        values = np.where(full, np.asarray(values, dtype=complex), 0)
        if np.max(np.abs(values - values.conj().T), initial=0.0) > HERMITIAN_TOL * max(1.0, np.max(np.abs(values), initial=0.0)):
            raise NotHermitian("specified entries are not Hermitian-consistent")
        obj.values = hermitian_part(values)
        obj.mask = mask.copy()
        iu = np.argwhere(np.triu(mask, 1))
        obj.pattern = frozenset((int(i), int(j)) for i, j in iu)
        return obj

    @classmethod
    def mask_full(cls, M: np.ndarray, d: int, pattern) -> "PartialBlockMatrix":
        n = M.shape[0] // d
        mask = np.eye(n, dtype=bool)
        for i, j in pattern:
            mask[i, j] = mask[j, i] = True
        return cls.from_dense(M, mask, d)

    def specified(self, i: int, j: int) -> bool:
        return bool(self.mask[i, j])

    def block(self, i: int, j: int) -> np.ndarray:
        if not self.mask[i, j]:
            raise KeyError(f"block ({i},{j}) is not specified")
        return self.values[self._sl(i), self._sl(j)].copy()

    def pattern_graph(self) -> Graph:
        return Graph(self.n, self.pattern)

    def submatrix(self, idx) -> np.ndarray:
        rows = np.concatenate([np.arange(i * self.d, (i + 1) * self.d) for i in idx]) if len(idx) else np.zeros(0, int)
        return self.values[np.ix_(rows, rows)]

    def to_json(self) -> dict:
        blocks = {}
        for i in range(self.n):
            for j in range(i, self.n):
                if self.mask[i, j]:
                    blocks[f"{i},{j}"] = matrix_to_json(self.block(i, j))
        return {"n": self.n, "d": self.d,
                "pattern": [list(p) for p in sorted(self.pattern)],
                "blocks": blocks}

    @classmethod
    def from_json(cls, obj: dict) -> "PartialBlockMatrix":
        n, d = int(obj["n"]), int(obj["d"])
        blocks = {}
        for key, val in obj["blocks"].items():
            i, j = (int(t) for t in key.split(","))
            blocks[(i, j)] = matrix_from_json(val)
        pattern = {tuple(sorted(p)) for p in obj.get("pattern", [])}
        given = {k for k in blocks if k[0] != k[1]}
        given = {tuple(sorted(k)) for k in given}
        if pattern and pattern != given:
            raise ValueError("pattern does not match the specified off-diagonal blocks")
        return cls(n, d, blocks)


def _indices(idx, d):
    return np.concatenate([np.arange(i * d, (i + 1) * d) for i in idx]) if len(idx) else np.zeros(0, dtype=int)


@dataclass(frozen=True)
class PartialPSDResult:
    ok: bool
    clique: tuple | None
    min_eig: float
    n_cliques: int

    def to_json(self) -> dict:
        return {"ok": self.ok, "clique": None if self.clique is None else list(self.clique),
                "min_eig": self.min_eig, "n_cliques": self.n_cliques}


def verify_partial_psd(P: PartialBlockMatrix, tol: float = DEFAULT_TOL,
                       cap: int = DEFAULT_CLIQUE_CAP) -> PartialPSDResult:
    """Check that every maximal clique of the pattern carries a PSD submatrix.

    Reports the clique with the smallest eigenvalue on failure.
    """
    cliques = maximal_cliques(P.pattern_graph(), cap=cap)
    worst, worst_clique = np.inf, None
    for c in cliques:
        lam = min_eigenvalue(P.submatrix(c))
        if lam < worst:
            worst, worst_clique = lam, c
    ok = worst >= -tol
    return PartialPSDResult(bool(ok), None if ok else worst_clique, float(worst), len(cliques))


def _separates(adj, i, j, blocked) -> bool:
    seen = {i}
    queue = deque([i])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w == j:
                return False
            if w not in seen and w not in blocked:
                seen.add(w)
                queue.append(w)
    return True


def _prepare(P: PartialBlockMatrix, tol: float, cap: int):
    cert = is_chordal(P.pattern_graph())
    if not cert.chordal:
        raise NotChordal(cert)
    res = verify_partial_psd(P, tol, cap)
    if not res.ok:
        raise CliqueNotPSD(res.clique, res.min_eig)


def chordal_complete(P: PartialBlockMatrix, tol: float = DEFAULT_TOL,
                     method: str = "pairwise", cap: int = DEFAULT_CLIQUE_CAP) -> np.ndarray:
    """Complete a partially PSD block matrix with chordal pattern to a PSD matrix.

    ``method="pairwise"`` fills one missing pair at a time: scanning missing
    pairs {i, j} lexicographically, it takes the first one whose common
    neighbourhood C separates i from j (equivalently, adding the edge keeps
    the pattern chordal; C is then a clique) and sets B(i, j) to the centre
    of the matrix ball over ({i}, C, {j}).

    ``method="elimination"`` visits vertices in maximum cardinality search
    order and fills each new vertex against everything visited so far in one
    step, using its visited neighbours (a clique) as the separator.  Both
    produce central completions; for positive definite data they coincide
    with the maximum-determinant completion.

    Specified entries are never modified.
    """
    _prepare(P, tol, cap)
    if method == "pairwise":
        return _complete_pairwise(P, tol)
    if method == "elimination":
        return _complete_elimination(P, tol)
    raise ValueError(f"unknown method {method!r}")


def _complete_pairwise(P: PartialBlockMatrix, tol: float) -> np.ndarray:
    n, d = P.n, P.d
    M = P.values.copy()
    adj = [set() for _ in range(n)]
    for i, j in P.pattern:
        adj[i].add(j)
        adj[j].add(i)
    missing = [(i, j) for i in range(n) for j in range(i + 1, n) if not P.mask[i, j]]
    while missing:
        for pos, (i, j) in enumerate(missing):
            common = adj[i] & adj[j]
            if _separates(adj, i, j, common):
                break
        else:
            raise NoFillablePair(f"no fillable pair among {len(missing)} missing pairs")
        cs = sorted(common)
        if any(b not in adj[a] for a in cs for b in cs if a < b):
            raise NoFillablePair(f"common neighbourhood of ({i},{j}) is not a clique")
        ii, jj, cc = _indices([i], d), _indices([j], d), _indices(cs, d)
        if cs:
            X = matrix_ball(M[np.ix_(ii, ii)], M[np.ix_(ii, cc)], M[np.ix_(cc, cc)],
                            M[np.ix_(cc, jj)], M[np.ix_(jj, jj)], tol).center
        else:
            X = np.zeros((d, d), dtype=complex)
        M[np.ix_(ii, jj)] = X
        M[np.ix_(jj, ii)] = X.conj().T
        adj[i].add(j)
        adj[j].add(i)
        del missing[pos]
    return M


def _complete_elimination(P: PartialBlockMatrix, tol: float) -> np.ndarray:
    n, d = P.n, P.d
    M = P.values.copy()
    g = P.pattern_graph()
    visit, _ = mcs(g)
    done: list = []
    done_set: set = set()
    pinv_cache: dict = {}
    for v in visit:
        sep = sorted(u for u in g.adj[v] if u in done_set)
        rest = [u for u in done if u not in g.adj[v]]
        if rest:
            vv, rr = _indices([v], d), _indices(rest, d)
            if sep:
                key = tuple(sep)
                Cp = pinv_cache.get(key)
                ss = _indices(sep, d)
                if Cp is None:
                    Cp = pinv_cache[key] = pinv_psd(project_psd(M[np.ix_(ss, ss)], tol), tol=tol)
                X = M[np.ix_(vv, ss)] @ Cp @ M[np.ix_(ss, rr)]
            else:
                X = np.zeros((d, len(rest) * d), dtype=complex)
            M[np.ix_(vv, rr)] = X
            M[np.ix_(rr, vv)] = X.conj().T
        done.append(v)
        done_set.add(v)
    return M


# -- JSON helpers ----------------------------------------------------------------

def matrix_to_json(M) -> list:
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def matrix_from_json(obj) -> np.ndarray:
    arr = np.asarray(obj, dtype=float)
    if arr.ndim == 3 and arr.shape[-1] == 2:
        return arr[..., 0] + 1j * arr[..., 1]
    if arr.ndim == 2:
        return arr.astype(complex)
    raise ValueError("matrix must be a row-major array of [re, im] pairs")
