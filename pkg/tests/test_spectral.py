"""Spectral measures, atom tables, and the cyclic model."""

import numpy as np
import pytest

from moilab.linalg import operator_norm
from moilab.spectral import (
    FiniteSpectralMeasure,
    cyclic_model,
    from_hermitian,
    integrate_scalar,
    matrix_sup,
    scalar_sup,
    validate_spectral_measure,
    vector_sup,
)


def test_validate_trivial_measure():
    report = validate_spectral_measure(FiniteSpectralMeasure.trivial(3))
    assert report.ok


def test_validate_fourier_projections():
    fourier, position, _ = cyclic_model(5)
    assert validate_spectral_measure(fourier).ok
    assert validate_spectral_measure(position).ok


def test_validate_catches_repeated_projection():
    p = np.zeros((2, 2), dtype=complex)
    p[0, 0] = 1.0
    measure = FiniteSpectralMeasure(2, (0.0, 1.0), (p, p))
    report = validate_spectral_measure(measure)
    assert not report.ok
    assert report.worst_orthogonality > 1e-10


def test_integrate_constant_is_identity():
    e = from_hermitian(np.diag([1.0, 2.0, 3.0]))
    assert operator_norm(integrate_scalar(np.ones(3), e) - np.eye(3)) < 1e-12


def test_integrate_indicator_picks_projection():
    e = from_hermitian(np.diag([1.0, 2.0, 3.0]))
    phi = np.zeros(3)
    phi[1] = 1.0
    assert operator_norm(integrate_scalar(phi, e) - e.projections[1]) < 1e-12


def test_integrate_square_function():
    e = from_hermitian(np.diag([1.0, 2.0, 3.0]))
    phi = np.array([x**2 for x in e.points])
    assert operator_norm(integrate_scalar(phi, e) - np.diag([1.0, 4.0, 9.0])) < 1e-12


def test_integrate_rejects_wrong_length():
    e = FiniteSpectralMeasure.trivial(2)
    with pytest.raises(ValueError):
        integrate_scalar(np.ones(3), e)


def test_integrate_linear_and_multiplicative():
    rng = np.random.default_rng(5)
    h = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    e = from_hermitian(h + h.conj().T)
    phi = rng.standard_normal(e.n_atoms) + 1j * rng.standard_normal(e.n_atoms)
    psi = rng.standard_normal(e.n_atoms) + 1j * rng.standard_normal(e.n_atoms)
    lin = integrate_scalar(2.0 * phi + psi, e)
    assert operator_norm(lin - 2.0 * integrate_scalar(phi, e) - integrate_scalar(psi, e)) < 1e-10
    prod = integrate_scalar(phi * psi, e)
    assert operator_norm(prod - integrate_scalar(phi, e) @ integrate_scalar(psi, e)) < 1e-10


def test_from_hermitian_merges_clusters():
    e = from_hermitian(np.diag([1.0, 1.0, 2.0]), merge_tol=1e-8)
    assert e.n_atoms == 2
    ranks = sorted(int(round(np.trace(p).real)) for p in e.projections)
    assert ranks == [1, 2]


def test_from_hermitian_merges_tiny_gap():
    e = from_hermitian(np.diag([1.0, 1.0 + 1e-12]), merge_tol=1e-8)
    assert e.n_atoms == 1
    assert int(round(np.trace(e.projections[0]).real)) == 2


def test_from_hermitian_reconstructs():
    rng = np.random.default_rng(9)
    h = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    h = h + h.conj().T
    e = from_hermitian(h, merge_tol=1e-8)
    assert validate_spectral_measure(e).ok
    rebuilt = sum(x * p for x, p in zip(e.points, e.projections))
    assert operator_norm(rebuilt - h) <= 1e-9 * operator_norm(h)


def test_from_hermitian_round_trip_projections():
    # measure -> matrix -> measure recovers the projections when gaps exceed
    # the merge tolerance (up to atom order, compared projection-wise)
    rng = np.random.default_rng(13)
    h = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    e = from_hermitian(h + h.conj().T)
    rebuilt = sum(x * p for x, p in zip(e.points, e.projections))
    e2 = from_hermitian(rebuilt)
    assert e2.n_atoms == e.n_atoms
    for x, p in zip(e.points, e.projections):
        match = min(range(e2.n_atoms), key=lambda i: abs(e2.points[i] - x))
        assert operator_norm(e2.projections[match] - p) < 1e-8


def test_from_hermitian_rejects_non_hermitian():
    with pytest.raises(ValueError):
        from_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_cyclic_model_trivial():
    fourier, position, characters = cyclic_model(1)
    assert fourier.n_atoms == position.n_atoms == 1
    assert np.allclose(characters[0], [1.0])
    b0 = integrate_scalar(characters[0], position)
    assert operator_norm(b0 - np.eye(1)) < 1e-12


def test_cyclic_model_rejects_zero():
    with pytest.raises(ValueError):
        cyclic_model(0)


def test_cyclic_shift_moves_basis():
    n = 4
    _, position, characters = cyclic_model(n)
    b1 = integrate_scalar(characters[1], position)
    e0 = np.zeros(n)
    e0[0] = 1.0
    e1 = np.zeros(n)
    e1[1] = 1.0
    assert np.linalg.norm(b1 @ e0 - e1) < 1e-12


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_cyclic_shift_group_law(n):
    _, position, characters = cyclic_model(n)
    shifts = [integrate_scalar(characters[j], position) for j in range(n)]
    eye = np.eye(n)
    for j in range(n):
        # unitary with operator norm exactly 1
        assert operator_norm(shifts[j] @ shifts[j].conj().T - eye) < 1e-12
        assert abs(operator_norm(shifts[j]) - 1.0) < 1e-12
        for k in range(n):
            assert operator_norm(shifts[j] @ shifts[k] - shifts[(j + k) % n]) < 1e-12
        # B_j e_k = e_{(j+k) mod n}
        for k in range(n):
            expected = eye[:, (j + k) % n]
            assert np.linalg.norm(shifts[j] @ eye[:, k] - expected) < 1e-12


def test_unimodular_diagonal_middle_has_unit_sup():
    n = 6
    _, _, characters = cyclic_model(n)
    table = np.zeros((n, n, n), dtype=complex)
    for j in range(n):
        table[:, j, j] = characters[j]
    assert abs(matrix_sup(table) - 1.0) < 1e-12


def test_sup_norm_accessors():
    assert scalar_sup(np.array([1.0, -2.0, 1j])) == 2.0
    assert abs(vector_sup(np.array([[3.0, 4.0], [1.0, 0.0]])) - 5.0) < 1e-12
    table = np.stack([np.eye(2), 2.0 * np.eye(2)])
    assert abs(matrix_sup(table) - 2.0) < 1e-12
    assert vector_sup(np.zeros((3, 0))) == 0.0
