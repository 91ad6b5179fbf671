"""Finite spectral measures: orthogonal projection families resolving the
identity, tables of functions on their atoms, and integration sum_i f(x_i) P_i.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import adjoint, as_matrix, hermitian_eig, operator_norm

MEASURE_TOL = 1e-10
DEFAULT_MERGE_TOL = 1e-8


@dataclass(frozen=True)
class FiniteSpectralMeasure:
    """Atoms (point label, projection) with mutually orthogonal projections
    summing to the identity. Points are labels for reporting; evaluation only
    ever indexes tables by atom position."""

    dim: int
    points: tuple
    projections: tuple

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("ambient dimension must be >= 1")
        if len(self.points) != len(self.projections) or not self.points:
            raise ValueError("need one point per projection and at least one atom")
        projs = tuple(as_matrix(p) for p in self.projections)
        for p in projs:
            if p.shape != (self.dim, self.dim):
                raise ValueError(f"projection shape {p.shape} != ({self.dim}, {self.dim})")
        object.__setattr__(self, "projections", projs)
        object.__setattr__(self, "points", tuple(self.points))

    @property
    def n_atoms(self) -> int:
        return len(self.points)

    def projection_stack(self) -> np.ndarray:
        """All projections as one (n_atoms, dim, dim) array."""
        return np.stack(self.projections)

    @classmethod
    def trivial(cls, dim: int, point=0.0) -> "FiniteSpectralMeasure":
        return cls(dim, (point,), (np.eye(dim, dtype=np.complex128),))


@dataclass(frozen=True)
class MeasureValidation:
    ok: bool
    worst_hermiticity: float
    worst_idempotency: float
    worst_orthogonality: float
    completeness: float
    points_distinct: bool


def validate_spectral_measure(
    measure: FiniteSpectralMeasure, tol: float = MEASURE_TOL
) -> MeasureValidation:
    """Report-style check of P = P*, P^2 = P, P_i P_j = 0 (i != j),
    sum P_i = I, and pairwise distinct points."""
    projs = measure.projections
    herm = max(operator_norm(p - adjoint(p)) for p in projs)
    idem = max(operator_norm(p @ p - p) for p in projs)
    orth = 0.0
    for i in range(len(projs)):
        for j in range(i + 1, len(projs)):
            orth = max(orth, operator_norm(projs[i] @ projs[j]))
    total = sum(projs)
    comp = operator_norm(total - np.eye(measure.dim))
    distinct = len(set(measure.points)) == len(measure.points)
    ok = herm <= tol and idem <= tol and orth <= tol and comp <= tol and distinct
    return MeasureValidation(ok, herm, idem, orth, comp, distinct)


def integrate_scalar(values, measure: FiniteSpectralMeasure) -> np.ndarray:
    """sum_i values[i] * P_i for one complex value per atom."""
    v = np.asarray(values, dtype=np.complex128)
    if v.shape != (measure.n_atoms,):
        raise ValueError(
            f"table has {v.shape} values for a measure with {measure.n_atoms} atoms"
        )
    return np.einsum("i,iab->ab", v, measure.projection_stack())


def from_hermitian(
    m, merge_tol: float = DEFAULT_MERGE_TOL
) -> FiniteSpectralMeasure:
    """Spectral measure of a Hermitian matrix, clustering eigenvalues whose
    consecutive gaps are <= merge_tol into single atoms."""
    w, v = hermitian_eig(m)
    dim = v.shape[0]
    points, projections = [], []
    start = 0
    for i in range(1, dim + 1):
        if i == dim or w[i] - w[i - 1] > merge_tol:
            cols = v[:, start:i]
            points.append(float(np.mean(w[start:i])))
            projections.append(cols @ adjoint(cols))
            start = i
    return FiniteSpectralMeasure(dim, tuple(points), tuple(projections))


def cyclic_model(n: int):
    """Finite cyclic model of dimension n in frequency coordinates.

    Returns (fourier_measure, position_measure, characters):
      - fourier_measure: rank-one projections onto the standard (frequency)
        basis e_0..e_{n-1}, atom labels 0..n-1;
      - position_measure: rank-one projections onto the position basis
        u_m[j] = exp(-2 pi i j m / n) / sqrt(n), atom labels the n-th roots
        of unity zeta_m = exp(2 pi i m / n);
      - characters: dict j -> per-atom values zeta^j on the position measure.
        Integrating characters[j] against position_measure gives the cyclic
        shift B_j with B_j e_k = e_{(j+k) mod n}.
    """
    if n < 1:
        raise ValueError("cyclic model needs n >= 1")
    eye = np.eye(n, dtype=np.complex128)
    fourier = FiniteSpectralMeasure(
        n,
        tuple(range(n)),
        tuple(np.outer(eye[:, j], eye[:, j].conj()) for j in range(n)),
    )
    grid = np.arange(n)
    # u[:, m] is the position vector for the root of unity zeta_m
    u = np.exp(-2j * np.pi * np.outer(grid, grid) / n) / np.sqrt(n)
    roots = np.exp(2j * np.pi * grid / n)
    position = FiniteSpectralMeasure(
        n,
        tuple(roots),
        tuple(np.outer(u[:, m], u[:, m].conj()) for m in range(n)),
    )
    characters = {j: roots**j for j in range(n)}
    return fourier, position, characters


def scalar_sup(values) -> float:
    """sup-norm of a per-atom scalar table."""
    v = np.asarray(values, dtype=np.complex128)
    return float(np.abs(v).max()) if v.size else 0.0


def vector_sup(table) -> float:
    """max over atoms of the Euclidean norm; table shape (n_atoms, width)."""
    t = np.asarray(table, dtype=np.complex128)
    if t.size == 0:
        return 0.0
    return float(np.linalg.norm(t, axis=1).max())


def matrix_sup(table) -> float:
    """max over atoms of the largest singular value; table (n_atoms, L, L')."""
    t = np.asarray(table, dtype=np.complex128)
    if t.size == 0:
        return 0.0
    return float(np.linalg.svd(t, compute_uv=False)[:, 0].max())
