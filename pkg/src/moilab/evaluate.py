"""Evaluation of multiple operator integrals
sum over atoms of Psi(x_1..x_m) P_1 T_1 P_2 T_2 ... T_{m-1} P_m
by several independent computational paths:

  - eval_oracle: the exhaustive atomwise sum (test instrument, capped);
  - eval_projective / eval_haagerup / eval_haagerup_like: production paths
    that integrate each table and contract over the finite index families;
  - eval_haagerup_block: materializes the row/block/column operator matrices
    and multiplies them in the enlarged space;
  - eval_double_schur: the two-factor entrywise-multiplier sum.

All paths compute the same finite sum; agreement is relative to
scale = rep_norm_bound * prod of operator norms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod

import numpy as np

from .integrands import (
    HaagerupChainRep,
    HaagerupLikeRep,
    Integrand,
    ProjectiveRep,
    eval_pointwise,
    rep_norm_bound,
)
from .linalg import as_matrix, operator_norm
from .spectral import FiniteSpectralMeasure, integrate_scalar

DEFAULT_TUPLE_CAP = 10**6
DEFAULT_BLOCK_CAP = 4096
SCALE_FLOOR = 1e-12


class CapExceededError(RuntimeError):
    """The requested evaluation would exceed a configured resource cap."""


@dataclass(frozen=True)
class MoiInstance:
    """One operator integral: m spectral measures on a common space,
    m-1 operators, and an integrand bound to the measures in order."""

    measures: tuple
    operators: tuple
    integrand: Integrand

    def __post_init__(self):
        measures = tuple(self.measures)
        if not measures:
            raise ValueError("need at least two spectral measures")
        dim = measures[0].dim
        for e in measures:
            if not isinstance(e, FiniteSpectralMeasure):
                raise TypeError("measures must be FiniteSpectralMeasure instances")
            if e.dim != dim:
                raise ValueError("all measures must share the ambient dimension")
        operators = tuple(as_matrix(t) for t in self.operators)
        if len(operators) != len(measures) - 1:
            raise ValueError(
                f"{len(measures)} measures need {len(measures) - 1} operators, "
                f"got {len(operators)}"
            )
        for t in operators:
            if t.shape != (dim, dim):
                raise ValueError(f"operator shape {t.shape} != ({dim}, {dim})")
        if self.integrand.arity != len(measures):
            raise ValueError(
                f"integrand arity {self.integrand.arity} != {len(measures)} measures"
            )
        counts = self.integrand.atom_counts()
        if counts is not None:
            for i, (c, e) in enumerate(zip(counts, measures)):
                if c != e.n_atoms:
                    raise ValueError(
                        f"factor {i + 1} table has {c} atoms, measure has {e.n_atoms}"
                    )
        object.__setattr__(self, "measures", measures)
        object.__setattr__(self, "operators", operators)

    @property
    def dim(self) -> int:
        return self.measures[0].dim

    @property
    def arity(self) -> int:
        return len(self.measures)


def moi_scale(inst: MoiInstance) -> float:
    """rep_norm_bound * prod of operator norms, floored away from zero."""
    scale = rep_norm_bound(inst.integrand)
    for t in inst.operators:
        scale *= operator_norm(t)
    return max(scale, SCALE_FLOOR)


def eval_oracle(inst: MoiInstance, cap: int = DEFAULT_TUPLE_CAP) -> np.ndarray:
    """Exhaustive sum over all atom tuples, one pointwise Psi value each.

    Independent of the representation class; refuses instances whose atom
    tuple count exceeds the cap.
    """
    counts = [e.n_atoms for e in inst.measures]
    n_tuples = prod(counts)
    if n_tuples > cap:
        raise CapExceededError(
            f"{n_tuples} atom tuples exceed the cap of {cap}; shrink the instance"
        )
    dim = inst.dim
    out = np.zeros((dim, dim), dtype=np.complex128)
    for atoms in itertools.product(*(range(n) for n in counts)):
        coeff = eval_pointwise(inst.integrand, atoms)
        if coeff == 0:
            continue
        block = inst.measures[0].projections[atoms[0]]
        for op, e, a in zip(inst.operators, inst.measures[1:], atoms[1:]):
            block = block @ op @ e.projections[a]
        out += coeff * block
    return out


def eval_projective(inst: MoiInstance) -> np.ndarray:
    """sum_n (int phi_n dE_1) T_1 (int psi_n dE_2) ... for a projective rep."""
    rep = inst.integrand
    if not isinstance(rep, ProjectiveRep):
        raise TypeError("instance does not carry a projective representation")
    dim = inst.dim
    out = np.zeros((dim, dim), dtype=np.complex128)
    for term in rep.terms:
        block = integrate_scalar(term[0], inst.measures[0])
        for op, e, factor in zip(inst.operators, inst.measures[1:], term[1:]):
            block = block @ op @ integrate_scalar(factor, e)
        out += block
    return out


def _integrate_vector_table(table: np.ndarray, e: FiniteSpectralMeasure) -> np.ndarray:
    """Stack of integrated operators, one per chain index: (L, dim, dim)."""
    return np.tensordot(table, e.projection_stack(), axes=([0], [0]))


def _fold_middle(
    mid: np.ndarray, e: FiniteSpectralMeasure, stack: np.ndarray, chunk: int = 16
) -> np.ndarray:
    """Contract an incoming (L, d, d) stack with a middle table:
    out_k = sum_{i, j} mid[i, j, k] * stack_j @ P_i."""
    projs = e.projection_stack()
    l_out = mid.shape[2]
    dim = stack.shape[-1]
    out = np.zeros((l_out, dim, dim), dtype=np.complex128)
    for start in range(0, mid.shape[0], chunk):
        sl = slice(start, start + chunk)
        # (c, L_out, d, d) = sum_j mid[i, j, k] stack_j, then right-multiply P_i
        c = np.tensordot(mid[sl], stack, axes=([1], [0]))
        out += np.matmul(c, projs[sl][:, None]).sum(axis=0)
    return out


def eval_haagerup(inst: MoiInstance) -> np.ndarray:
    """Chain contraction sum_{j..} A_j T_1 B_{jk} T_2 ... over all chain indices.

    Computed by sweeping the chain left to right, folding one factor's atom
    sum at a time; an exact reassociation of the defining finite sum.
    """
    rep = inst.integrand
    if not isinstance(rep, HaagerupChainRep):
        raise TypeError("instance does not carry a chain representation")
    stack = _integrate_vector_table(rep.head, inst.measures[0])
    for t, op in enumerate(inst.operators):
        stack = stack @ op
        if t < len(rep.middles):
            stack = _fold_middle(rep.middles[t], inst.measures[t + 1], stack)
    # tail fold: sum_i (sum_k tail[i, k] stack_k) P_i
    d = np.tensordot(rep.tail, stack, axes=([1], [0]))
    return np.matmul(d, inst.measures[-1].projection_stack()).sum(axis=0)


def row_block(blocks, t: np.ndarray) -> np.ndarray:
    """The row matrix (A_0 T  A_1 T  ...) as a dim x (k * dim) array."""
    t = as_matrix(t)
    return np.hstack([as_matrix(a) @ t for a in blocks])


def eval_haagerup_block(
    inst: MoiInstance, block_cap: int = DEFAULT_BLOCK_CAP
) -> np.ndarray:
    """Chain value via materialized block matrices:
    row(A_j T_1) x {B_jk} x diag(T_2) x ... x col(T_{m-1} Delta_l).

    Requires arity >= 3; block sides are capped at block_cap rows/columns.
    """
    rep = inst.integrand
    if not isinstance(rep, HaagerupChainRep):
        raise TypeError("instance does not carry a chain representation")
    if rep.arity < 3:
        raise ValueError("block evaluation needs arity >= 3")
    dim = inst.dim
    widths = [rep.head.shape[1]] + [m.shape[2] for m in rep.middles]
    if widths and max(widths) * dim > block_cap:
        raise CapExceededError(
            f"block side {max(widths) * dim} exceeds the cap of {block_cap}"
        )
    if min(widths) == 0:
        return np.zeros((dim, dim), dtype=np.complex128)
    head_ops = _integrate_vector_table(rep.head, inst.measures[0])
    product = row_block(head_ops, inst.operators[0])
    for t, mid in enumerate(rep.middles):
        projs = inst.measures[t + 1].projection_stack()
        big = sum(np.kron(mid[i], projs[i]) for i in range(mid.shape[0]))
        product = product @ big
        if t < len(rep.middles) - 1:
            product = product @ np.kron(
                np.eye(mid.shape[2]), inst.operators[t + 1]
            )
    tail_ops = _integrate_vector_table(rep.tail, inst.measures[-1])
    column = np.vstack([inst.operators[-1] @ g for g in tail_ops])
    return product @ column


def eval_double_schur(
    psi_table, e1: FiniteSpectralMeasure, e2: FiniteSpectralMeasure, t
) -> np.ndarray:
    """Two-factor integral for a dense atomwise table:
    sum_{i,j} psi[i, j] P_i T Q_j.

    For rank-one projections in a common eigenbasis this is the entrywise
    product of the table with T expressed in those bases.
    """
    psi = np.asarray(psi_table, dtype=np.complex128)
    if psi.shape != (e1.n_atoms, e2.n_atoms):
        raise ValueError(
            f"table shape {psi.shape} != ({e1.n_atoms}, {e2.n_atoms}) atoms"
        )
    t = as_matrix(t)
    q_stack = e2.projection_stack()
    out = np.zeros_like(t)
    for i, p in enumerate(e1.projections):
        mixed = np.einsum("j,jab->ab", psi[i], q_stack)
        out += p @ t @ mixed
    return out


def eval_haagerup_like(inst: MoiInstance) -> np.ndarray:
    """Closed-form value of the duality-defined integral.

    first, m=3:  W = sum_{jk}  A_j T B_k R G_jk
    second, m=3: W = sum_{jk}  A_jk T B_j R G_k
    first, m=4:  W = sum_{jkl} A_l T_1 B_j T_2 G_jk T_3 D_kl
    second, m=4: W = sum_{jkl} A_jk T_1 B_kl T_2 G_l T_3 D_j

    where each letter is the corresponding table integrated against its
    measure. Matches trace duality: trace(W Q) equals the defining
    functional at Q for every Q.
    """
    rep = inst.integrand
    if not isinstance(rep, HaagerupLikeRep):
        raise TypeError("instance does not carry a chain-like representation")
    e = inst.measures
    ops = inst.operators
    key = (rep.kind, rep.arity)
    if key == ("first", 3):
        alpha, beta, gamma = rep.tables
        x = _integrate_vector_table(alpha, e[0]) @ ops[0]
        y = _integrate_vector_table(beta, e[1]) @ ops[1]
        out = np.zeros((inst.dim, inst.dim), dtype=np.complex128)
        for i, p in enumerate(e[2].projections):
            out += np.einsum("jk,jab,kbc->ac", gamma[i], x, y) @ p
        return out
    if key == ("second", 3):
        alpha, beta, gamma = rep.tables
        u = _integrate_vector_table(beta, e[1]) @ ops[1]
        c = _integrate_vector_table(gamma, e[2])
        out = np.zeros((inst.dim, inst.dim), dtype=np.complex128)
        for i, p in enumerate(e[0].projections):
            out += p @ ops[0] @ np.einsum("jk,jab,kbc->ac", alpha[i], u, c)
        return out
    if key == ("first", 4):
        alpha, beta, gamma, delta = rep.tables
        x = _integrate_vector_table(beta, e[1]) @ ops[1]  # B_j T_2
        jj, kk = gamma.shape[1], gamma.shape[2]
        m = np.zeros((jj, kk, inst.dim, inst.dim), dtype=np.complex128)
        for i, p in enumerate(e[2].projections):
            m += np.einsum("jk,jab,bc->jkac", gamma[i], x, p)
        m = m @ ops[2]  # ... G_jk T_3
        ll = delta.shape[2]
        nstack = np.zeros((jj, ll, inst.dim, inst.dim), dtype=np.complex128)
        for i, p in enumerate(e[3].projections):
            nstack += np.einsum("kl,jkab,bc->jlac", delta[i], m, p)
        q = nstack.sum(axis=0)
        at = _integrate_vector_table(alpha, e[0]) @ ops[0]  # A_l T_1
        return np.einsum("lab,lbc->ac", at, q)
    # ("second", 4)
    alpha, beta, gamma, delta = rep.tables
    y = ops[1] @ _integrate_vector_table(gamma, e[2]) @ ops[2]  # T_2 G_l T_3
    kk, ll = beta.shape[1], beta.shape[2]
    g = np.zeros((kk, inst.dim, inst.dim), dtype=np.complex128)
    for i, p in enumerate(e[1].projections):
        g += np.matmul(p, np.einsum("kl,lab->kab", beta[i], y))
    jj = alpha.shape[1]
    h = np.zeros((jj, inst.dim, inst.dim), dtype=np.complex128)
    for i, p in enumerate(e[0].projections):
        h += np.matmul(p @ ops[0], np.einsum("jk,kab->jab", alpha[i], g))
    d_stack = _integrate_vector_table(delta, e[3])
    return np.einsum("jab,jbc->ac", h, d_stack)


def _cycled_chain_instance(inst: MoiInstance, q: np.ndarray) -> tuple[MoiInstance, int, np.ndarray]:
    """The chain instance computing the duality functional's inner integral.

    Returns (chain instance, trace side, trace partner): the functional value
    is trace(partner @ M) for side 0 or trace(M @ partner) for side 1.
    """
    rep = inst.integrand
    e = inst.measures
    ops = inst.operators
    key = (rep.kind, rep.arity)
    if key == ("first", 3):
        alpha, beta, gamma = rep.tables
        chain = HaagerupChainRep(beta, (gamma.transpose(0, 2, 1),), alpha)
        inner = MoiInstance((e[1], e[2], e[0]), (ops[1], q), chain)
        return inner, 1, ops[0]
    if key == ("second", 3):
        alpha, beta, gamma = rep.tables
        chain = HaagerupChainRep(gamma, (alpha.transpose(0, 2, 1),), beta)
        inner = MoiInstance((e[2], e[0], e[1]), (q, ops[0]), chain)
        return inner, 1, ops[1]
    if key == ("first", 4):
        alpha, beta, gamma, delta = rep.tables
        chain = HaagerupChainRep(beta, (gamma, delta), alpha)
        inner = MoiInstance((e[1], e[2], e[3], e[0]), (ops[1], ops[2], q), chain)
        return inner, 1, ops[0]
    alpha, beta, gamma, delta = rep.tables
    chain = HaagerupChainRep(delta, (alpha, beta), gamma)
    inner = MoiInstance((e[3], e[0], e[1], e[2]), (q, ops[0], ops[1]), chain)
    return inner, 0, ops[2]


def duality_functional(inst: MoiInstance, q) -> complex:
    """The defining linear functional of a chain-like integral, evaluated at Q
    by cycling the integrand into an ordinary chain and tracing."""
    rep = inst.integrand
    if not isinstance(rep, HaagerupLikeRep):
        raise TypeError("instance does not carry a chain-like representation")
    q = as_matrix(q)
    if q.shape != (inst.dim, inst.dim):
        raise ValueError(f"Q shape {q.shape} != ({inst.dim}, {inst.dim})")
    inner, side, partner = _cycled_chain_instance(inst, q)
    m = eval_haagerup(inner)
    if side == 0:
        return complex(np.trace(partner @ m))
    return complex(np.trace(m @ partner))


def eval_moi(inst: MoiInstance) -> np.ndarray:
    """Production evaluation dispatched on the representation class."""
    if isinstance(inst.integrand, ProjectiveRep):
        return eval_projective(inst)
    if isinstance(inst.integrand, HaagerupChainRep):
        return eval_haagerup(inst)
    return eval_haagerup_like(inst)
