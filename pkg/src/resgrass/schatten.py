"""Schatten norms, restricted norms, the restricted trace and the duality pairing."""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidExponent, InvariantViolation
from .polarized import BlockOperator, PolarizedSpace, SkewHermitian, commutator, make_d, operator_norm

__all__ = [
    "INF",
    "check_exponent",
    "conjugate",
    "singular_values",
    "schatten_norm",
    "restricted_norm",
    "l1q_norm",
    "restricted_trace",
    "trace_pairing",
    "pairing",
    "pairing_gram",
    "skew_basis",
    "numerical_rank",
    "certify_nondegenerate",
]

#: Marker for the exponent p = infinity (operator norm).
INF = math.inf

PAIRING_IMAG_TOL = 1e-10


def check_exponent(p) -> float:
    p = float(p)
    if not p >= 1.0:
        raise InvalidExponent(f"Schatten exponent must be >= 1, got {p}")
    return p


def conjugate(p) -> float:
    """Hölder conjugate q with 1/p + 1/q = 1; conjugate(1) = INF and conjugate(INF) = 1."""
    p = check_exponent(p)
    if p == 1.0:
        return INF
    if p == INF:
        return 1.0
    return p / (p - 1.0)


def _entries(a) -> np.ndarray:
    return a.entries if isinstance(a, BlockOperator) else np.asarray(a)


def singular_values(a) -> np.ndarray:
    x = _entries(a)
    if x.size == 0:
        return np.zeros(0)
    return np.linalg.svd(x, compute_uv=False)


def schatten_norm(a, p) -> float:
    """(sum sigma_i^p)^(1/p), or sigma_max for p = INF.

    Accepts a :class:`BlockOperator` or a raw (possibly rectangular) block.
    Singular values are rescaled by the largest one before exponentiation so
    tiny values neither underflow nor lose relative accuracy near p = 1.
    """
    p = check_exponent(p)
    s = singular_values(a)
    if s.size == 0:
        return 0.0
    smax = float(s.max())
    if smax == 0.0:
        return 0.0
    if p == INF:
        return smax
    return smax * float(np.sum((s / smax) ** p)) ** (1.0 / p)


def restricted_norm(a: BlockOperator, p) -> float:
    """||A||_inf + ||[d, A]||_p."""
    d = make_d(a.space)
    return operator_norm(a.entries) + schatten_norm(commutator(d, a), p)


def l1q_norm(rho: BlockOperator, q) -> float:
    """||rho++||_1 + ||rho--||_1 + ||rho+-||_q + ||rho-+||_q."""
    q = check_exponent(q)
    return (schatten_norm(rho.pp, 1) + schatten_norm(rho.mm, 1)
            + schatten_norm(rho.pm, q) + schatten_norm(rho.mp, q))


def restricted_trace(rho: BlockOperator) -> complex:
    """Tr(rho++) + Tr(rho--)."""
    return complex(np.trace(rho.pp) + np.trace(rho.mm))


def trace_pairing(alpha: BlockOperator, a: BlockOperator) -> complex:
    """Complex pairing <alpha, A> = Tr_res(alpha A) between L_{1,q} and L_{res,p}."""
    return restricted_trace(alpha @ a)


def pairing(rho: BlockOperator, a: BlockOperator) -> float:
    """Real duality pairing Tr_res(rho A) between u_{1,q} and u_{res,p}.

    Raises :class:`InvariantViolation` when the imaginary residue exceeds
    ``1e-10 (1 + n ||rho|| ||A||)``, which only happens for non-skew inputs.
    """
    value = trace_pairing(rho, a)
    scale = 1.0 + rho.space.n * operator_norm(rho.entries) * operator_norm(a.entries)
    if abs(value.imag) > PAIRING_IMAG_TOL * scale:
        raise InvariantViolation(f"pairing has imaginary part {value.imag:.3e}; inputs are not skew-Hermitian")
    return value.real


def pairing_gram(basis_predual, basis_algebra) -> np.ndarray:
    """Real matrix ``G[i, j] = pairing(basis_predual[i], basis_algebra[j])``.

    Computed in one product using Tr(rho A) = sum(rho * A^T); the imaginary
    residue is checked as in :func:`pairing`.
    """
    if not basis_predual or not basis_algebra:
        return np.zeros((len(basis_predual), len(basis_algebra)))
    r = np.array([x.entries for x in basis_predual])
    a = np.array([x.entries for x in basis_algebra])
    gram = r.reshape(len(r), -1) @ a.transpose(0, 2, 1).reshape(len(a), -1).T
    n = r.shape[1]
    scale = 1.0 + n**2 * np.max(np.abs(r)) * np.max(np.abs(a))
    if np.max(np.abs(gram.imag)) > PAIRING_IMAG_TOL * scale:
        raise InvariantViolation("pairing Gram matrix has an imaginary residue; inputs are not skew-Hermitian")
    return np.ascontiguousarray(gram.real)


def skew_basis(space: PolarizedSpace) -> list[SkewHermitian]:
    """Canonical real basis of the skew-Hermitian matrices (n^2 elements).

    Order: ``i e_jj`` for each j, then for j < k the pair
    ``e_jk - e_kj`` and ``i (e_jk + e_kj)``.
    """
    n = space.n
    basis = []
    for j in range(n):
        e = np.zeros((n, n), dtype=np.complex128)
        e[j, j] = 1j
        basis.append(SkewHermitian(space, e))
    for j in range(n):
        for k in range(j + 1, n):
            e = np.zeros((n, n), dtype=np.complex128)
            e[j, k], e[k, j] = 1, -1
            basis.append(SkewHermitian(space, e))
            e = np.zeros((n, n), dtype=np.complex128)
            e[j, k], e[k, j] = 1j, 1j
            basis.append(SkewHermitian(space, e))
    return basis


def numerical_rank(m, rel_tol: float = 1e-10) -> int:
    """Number of singular values above ``rel_tol * sigma_max``."""
    s = singular_values(m)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rel_tol * s[0]))


def certify_nondegenerate(space: PolarizedSpace, rel_tol: float = 1e-10) -> np.ndarray:
    """Gram matrix of the pairing on the canonical basis; raises if it is rank deficient."""
    basis = skew_basis(space)
    gram = pairing_gram(basis, basis)
    rank = numerical_rank(gram, rel_tol)
    if rank != len(basis):
        raise InvariantViolation(f"pairing Gram matrix has rank {rank} < {len(basis)}")
    return gram
