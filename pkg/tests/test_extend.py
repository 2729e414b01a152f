"""Kernels, window completion, Følner averaging, certificates and CF atoms."""
import json
from pathlib import Path

import numpy as np
import pytest

from chordal_extend import cayley as CY
from chordal_extend import extend as E
from chordal_extend import fixtures
from chordal_extend import groups as G
from chordal_extend.completion import CliqueNotPSD, NotChordal, NotPSD, min_eigenvalue
from chordal_extend.graphs import verify_certificate

FIXTURES = Path(__file__).parent / "fixtures"
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def random_unitary(rng, n):
    Q, R = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


# -- data and kernels ------------------------------------------------------------

def test_value_adjoint_and_errors():
    data = fixtures.z_strip_data(0.5 + 0.25j)
    assert data.value((-1,))[0, 0] == pytest.approx(0.5 - 0.25j)
    with pytest.raises(E.OutsideSet):
        data.value((2,))
    partial = E.PDFunctionData(G.int_lattice(1), G.Strip(G.Morphism((1,)), 3), 1,
                               {(0,): [[1.0]], (1,): [[0.2]]})
    with pytest.raises(E.MissingValue):
        partial.value((2,))


def test_data_validation():
    with pytest.raises(ValueError):
        E.PDFunctionData(G.int_lattice(1), G.Strip(G.Morphism((1,)), 2), 1,
                         {(0,): [[1.0]], (3,): [[0.1]]})
    with pytest.raises(ValueError):
        E.PDFunctionData(G.int_lattice(1), G.Strip(G.Morphism((1,)), 2), 1, {(0,): [[-1.0]]})


@pytest.mark.parametrize("name", ["z_strip", "dihedral", "z2_counterexample"])
def test_fixture_json_roundtrip(name):
    obj = json.loads((FIXTURES / f"{name}.json").read_text())
    data = E.PDFunctionData.from_json(obj)
    again = E.PDFunctionData.from_json(json.loads(json.dumps(data.to_json())))
    for x in G.ball_set(data.spec, 2):
        if data.in_S(x):
            assert np.array_equal(data.value(x), again.value(x))


def test_shipped_json_matches_constructors():
    z = E.PDFunctionData.from_json(json.loads((FIXTURES / "z_strip.json").read_text()))
    assert np.allclose(z.value((1,)), fixtures.z_strip_data().value((1,)))
    dh = E.PDFunctionData.from_json(json.loads((FIXTURES / "dihedral.json").read_text()))
    ref = fixtures.dihedral_data()
    for x in G.ball_set(dh.spec, 2):
        assert np.allclose(dh.value(x), ref.value(x), atol=1e-12)


def test_kernel_tridiagonal():
    P = E.build_kernel(fixtures.z_strip_data(0.5), 2)
    w = CY.ball(G.int_lattice(1), 2)
    order = np.argsort([x[0] for x in w.elements])
    assert [w.elements[i][0] for i in order] == [-2, -1, 0, 1, 2]
    expected = np.eye(5) + 0.5 * (np.eye(5, k=1) + np.eye(5, k=-1))
    assert np.allclose(P.values[np.ix_(order, order)], expected)
    assert np.array_equal(P.mask[np.ix_(order, order)], np.abs(expected) > 0)


def test_kernel_z2_pattern():
    data = fixtures.z2_counterexample_data()
    P = E.build_kernel(data, 1)
    w = CY.ball(data.spec, 1)
    for i, x in enumerate(w.elements):
        for j, y in enumerate(w.elements):
            q = G.quotient(data.spec, x, y)
            assert P.mask[i, j] == (q not in ((1, 1), (-1, -1)))


def test_kernel_diagonal_only():
    data = E.PDFunctionData(G.int_lattice(1), G.Strip(G.Morphism((1,)), 1), 1, {(0,): [[2.0]]})
    P = E.build_kernel(data, 2)
    assert P.pattern == frozenset()
    assert np.allclose(P.values, 2 * np.eye(5))


def test_verify_pd_function():
    assert E.verify_pd_function(fixtures.z_strip_data(0.5), 3).ok
    bad = E.verify_pd_function(fixtures.z_strip_data(0.9), 3)
    assert bad.ok
    worse = E.PDFunctionData(G.int_lattice(1), G.Strip(G.Morphism((1,)), 3), 1,
                             {(0,): [[1.0]], (1,): [[0.9]], (2,): [[-0.9]]})
    res = E.verify_pd_function(worse, 3)
    assert not res.ok and len(res.clique) == 3 and res.min_eig < 0


# -- window completion ----------------------------------------------------------------

def test_extend_z_strip():
    K = E.extend_on_window(fixtures.z_strip_data(0.5), 3)
    M = K.dense()
    assert min_eigenvalue(M) >= -1e-12
    assert K.entry((0,), (2,))[0, 0] == pytest.approx(0.25)
    assert K.entry((-3,), (3,))[0, 0] == pytest.approx(0.5 ** 6)
    assert K.entry((1,), (2,))[0, 0] == pytest.approx(0.5)


def test_extend_z2_not_chordal():
    data = fixtures.z2_counterexample_data()
    with pytest.raises(NotChordal) as exc:
        E.extend_on_window(data, 2)
    err = exc.value
    w = CY.ball(data.spec, 2)
    g = CY.cayley_graph(data.spec, data.S, w)
    assert verify_certificate(g, err.certificate)
    assert len(err.elements) >= 4


def test_extend_dihedral():
    data = fixtures.dihedral_data()
    K = E.extend_on_window(data, 4)
    assert K.min_eigenvalue() >= -1e-9
    assert min_eigenvalue(K.dense()) >= -1e-9
    w = K.window
    for x in w.elements:
        for y in w.elements:
            q = G.quotient(data.spec, x, y)
            if data.in_S(q):
                assert np.allclose(K.entry(x, y), data.value(q), atol=1e-12)


def test_extend_clique_not_psd():
    bad = E.PDFunctionData(G.int_lattice(1), G.Strip(G.Morphism((1,)), 2), 1,
                           {(0,): [[1.0]], (1,): [[0.9]]})
    # 0.9 on a path is fine; a strip of width 3 with a bad second moment is not
    E.extend_on_window(bad, 3)
    worse = E.PDFunctionData(G.int_lattice(1), G.Strip(G.Morphism((1,)), 3), 1,
                             {(0,): [[1.0]], (1,): [[0.9]], (2,): [[-0.9]]})
    with pytest.raises(CliqueNotPSD) as exc:
        E.extend_on_window(worse, 3)
    assert len(exc.value.elements) >= 3


def test_components_cross_blocks_zero():
    data = fixtures.heisenberg_strip_data()
    K = E.extend_on_window(data, 2)
    assert len(K.components) > 1
    a, b = K.components[0][0], K.components[1][0]
    assert np.array_equal(K.block(a, b), np.zeros((1, 1)))
    assert K.min_eigenvalue() >= -1e-9


def test_vectorised_gram_matches_loop():
    data = fixtures.heisenberg_strip_data()
    elems = [x for x in G.ball_set(data.spec, 4) if x[0] == 0][:40]
    fast = E._dense_gram(data, elems)
    slow = E.gram(data, elems)
    assert np.allclose(fast, slow, atol=1e-12)


def test_methods_agree():
    data = fixtures.dihedral_data(seed=3)
    a = E.extend_on_window(data, 4, method="elimination").dense()
    b = E.extend_on_window(data, 4, method="pairwise").dense()
    assert np.allclose(a, b, atol=1e-9)


# -- Folner averaging ---------------------------------------------------------------

def test_folner_average_exact_on_S():
    data = fixtures.z_strip_data(0.5)
    targets = [(-1,), (0,), (1,), (2,)]
    F = CY.folner_set(data.spec, 4)
    w = E.averaging_window(data.spec, F, targets)
    K = E.extend_on_window(data, w)
    phi = E.folner_average(data, K, 4, targets)
    assert phi[(1,)][0, 0] == pytest.approx(0.5, abs=1e-15)
    assert phi[(-1,)][0, 0] == pytest.approx(0.5, abs=1e-15)
    assert phi[(0,)][0, 0] == pytest.approx(1.0, abs=1e-15)
    assert phi[(2,)][0, 0] == pytest.approx(0.25, abs=1e-12)


def test_folner_average_window_too_small():
    data = fixtures.z_strip_data(0.5)
    K = E.extend_on_window(data, 1)
    with pytest.raises(E.WindowTooSmall) as exc:
        E.folner_average(data, K, 4, [(1,)])
    assert exc.value.missing


def test_report_deterministic_and_exact():
    data = fixtures.dihedral_data()
    r1 = E.extension_report(data, [1, 2], [2, 4], test_set=["ab"], seed=5)
    r2 = E.extension_report(data, [1, 2], [2, 4], test_set=["ab"], seed=5)
    assert json.dumps(r1.to_json()) == json.dumps(r2.to_json())
    assert r1.max_deviation_on_S <= 1e-12
    for radius in (1, 2):
        assert min(r1.min_eigs(radius)) >= -1e-9
        assert r1.trend_nondecreasing(radius)
    cell = r1.cells[0]
    assert set(cell) >= {"radius", "N", "window_size", "folner_size", "kernel_min_eig",
                         "gram_min_eig", "tuple_min_eigs", "max_dev_on_S", "values"}
    assert len(cell["tuple_min_eigs"]) == 16


def test_report_degenerate_phi():
    # phi = identity only at e: the trivial extension is delta_e, which is PD
    data = fixtures.z_strip_data(0.0)
    rep = E.extension_report(data, [1, 2], [2, 4])
    assert min(rep.min_eigs(1) + rep.min_eigs(2)) == pytest.approx(1.0)


# -- certificates -------------------------------------------------------------------

def test_z2_certificate():
    cert = E.certify_z2_counterexample()
    assert cert.confirmed
    assert np.allclose(cert.forced_11, np.eye(2), atol=1e-9)
    assert np.allclose(cert.forced_21, [[0, 0], [1, 0]], atol=1e-9)
    assert cert.contradiction == pytest.approx(1.0, abs=1e-9)
    assert cert.contradiction_22 == pytest.approx(1.0, abs=1e-9)
    assert cert.pd_check.ok
    obj = cert.to_json()
    assert obj["confirmed"] is True and obj["chain"] == [[0, 0], [1, 1], [2, 1]]


def test_cross_certificate_pauli():
    cert = E.certify_cross_counterexample(PAULI_X, PAULI_Z)
    assert np.allclose(cert.forced_via_10, PAULI_X @ PAULI_Z, atol=1e-9)
    assert np.allclose(cert.forced_via_01, PAULI_Z @ PAULI_X, atol=1e-9)
    assert cert.difference == pytest.approx(2.0, abs=1e-9)
    assert not cert.extendable and cert.confirmed


def test_cross_certificate_commuting():
    rng = np.random.default_rng(9)
    for _ in range(10):
        Q = random_unitary(rng, 3)
        U1 = Q @ np.diag(np.exp(1j * rng.uniform(0, 6.3, 3))) @ Q.conj().T
        U2 = Q @ np.diag(np.exp(1j * rng.uniform(0, 6.3, 3))) @ Q.conj().T
        cert = E.certify_cross_counterexample(U1, U2)
        assert cert.difference <= 1e-9 and cert.extendable and cert.confirmed
        assert cert.witness_min_eig >= -1e-9


def test_cross_certificate_random_noncommuting():
    rng = np.random.default_rng(10)
    for _ in range(10):
        U1, U2 = random_unitary(rng, 2), random_unitary(rng, 2)
        cert = E.certify_cross_counterexample(U1, U2)
        assert cert.difference == pytest.approx(np.linalg.norm(U1 @ U2 - U2 @ U1, 2), abs=1e-9)
        assert not cert.extendable and cert.confirmed


def test_cross_requires_unitaries():
    with pytest.raises(ValueError):
        E.certify_cross_counterexample(2 * np.eye(2), np.eye(2))


# -- Caratheodory-Fejer ----------------------------------------------------------------

def test_cf_examples():
    atoms = E.cf_decompose([1, 0])
    assert len(atoms) == 2
    assert atoms[0][0] == pytest.approx(0.5) and atoms[0][1] == pytest.approx(0.0, abs=1e-9)
    assert atoms[1][0] == pytest.approx(0.5) and atoms[1][1] == pytest.approx(np.pi)
    assert E.cf_decompose([1]) == [(1.0, 0.0)]
    one = E.cf_decompose([1, np.exp(1j * np.pi / 3)])
    assert len(one) == 1 and one[0][1] == pytest.approx(np.pi / 3)
    with pytest.raises(NotPSD):
        E.cf_decompose([1, 2])
    with pytest.raises(NotPSD):
        E.cf_decompose([-1])


def random_moments(rng, m):
    if rng.random() < 0.5:
        r = int(rng.integers(1, m + 1))
    else:
        r = int(rng.integers(m + 1, m + 6))
    w = rng.uniform(0.1, 1.0, r)
    a = rng.uniform(0, 2 * np.pi, r)
    return E.atoms_moments(list(zip(w, a)), m)


def test_cf_random():
    rng = np.random.default_rng(11)
    for _ in range(200):
        m = int(rng.integers(1, 8))
        c = random_moments(rng, m)
        atoms = E.cf_decompose(c)
        assert all(w > 0 for w, _ in atoms)
        assert len(atoms) <= m + 1
        rec = E.atoms_moments(atoms, m)
        assert np.max(np.abs(rec - c)) <= 1e-6 * c[0].real


def test_cross_scalar_extend():
    h = E.atoms_moments([(0.5, 0.3), (0.5, 2.0)], 2)
    v = E.atoms_moments([(0.7, 1.1), (0.3, 4.0)], 2)
    grid = E.cross_scalar_extend(h, v, window=(6, 6))
    assert np.allclose(grid[6:9, 6], h, atol=1e-6)
    assert np.allclose(grid[6, 6:9], v, atol=1e-6)
    pts = [(k, l) for k in range(-3, 4) for l in range(-3, 4)]
    assert min_eigenvalue(E.grid_gram(grid, pts)) >= -1e-8


def test_cross_scalar_rank_one_and_symmetric():
    h = E.atoms_moments([(1.0, 0.7)], 2)
    grid = E.cross_scalar_extend(h, h, window=(2, 2))
    assert np.linalg.matrix_rank(grid, tol=1e-9) == 1
    assert np.allclose(grid, grid.T, atol=1e-12)


def test_cross_scalar_mismatched_c0():
    with pytest.raises(ValueError):
        E.cross_scalar_extend([1, 0], [2, 0])


def test_grid_gram_bounds():
    grid = E.cross_scalar_extend([1, 0.5], [1, 0.5], window=(1, 1))
    with pytest.raises(IndexError):
        E.grid_gram(grid, [(0, 0), (2, 0)])
