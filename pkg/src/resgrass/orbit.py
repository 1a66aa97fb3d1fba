"""Affine coadjoint action of U_res,p, the orbit of (0, gamma) and its symplectic forms.

Sign conventions are anchored on the conjugation formula
``Ad*_{g^-1}(mu) = g mu g^-1`` and on the group cocycle
``sigma(g) = g d g* - d``; the affine action is
``g . (mu, gamma) = (g mu g* - gamma sigma(g), gamma)``.  With these, the
orbit of ``(0, gamma)`` is ``{(-gamma sigma(g), gamma)}`` and the equivariant
identification with the Grassmannian is

    W  ->  gamma (i(pr+ - pr-) - i(pr_W - pr_W-perp)),

which sends ``g H+`` to ``-gamma sigma(g)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidExponent, InvariantViolation
from .extension import schwinger
from .grassmannian import GrassmannPoint
from .polarized import BlockOperator, SkewHermitian, make_d, pr_plus
from .schatten import schatten_norm

__all__ = [
    "OrbitPoint",
    "sigma",
    "affine_action",
    "orbit_embed",
    "base_point",
    "reconstruct_projection",
    "orbit_defect",
    "orbit_to_grassmann",
    "isotropy_defect",
    "fundamental_vector",
    "tangent_representative",
    "homogeneous_form",
    "kks_form",
    "pushforward_form",
    "mp_basis",
    "form_gram",
]


def _check_p(p) -> float:
    p = float(p)
    if not 1.0 <= p <= 2.0:
        raise InvalidExponent(f"p must satisfy 1 <= p <= 2, got {p}")
    return p


@dataclass(frozen=True, eq=False)
class OrbitPoint:
    """Point (mu, gamma) of the affine hyperplane u_1,q (+) {gamma}, gamma != 0.

    Whether ``mu`` actually lies on the orbit of ``(0, gamma)`` is measured by
    :func:`orbit_defect`; the action itself is defined on the whole hyperplane.
    """

    mu: SkewHermitian
    gamma: float

    def __post_init__(self):
        mu = self.mu
        if not isinstance(mu, SkewHermitian):
            mu = SkewHermitian(mu.space, mu.entries)
        gamma = float(self.gamma)
        if gamma == 0.0 or not np.isfinite(gamma):
            raise InvariantViolation(f"gamma must be a nonzero real, got {gamma}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "gamma", gamma)

    @property
    def space(self):
        return self.mu.space


def sigma(g: BlockOperator) -> SkewHermitian:
    """Group 1-cocycle sigma(g) = g d g* - d."""
    d = make_d(g.space)
    x = g.entries @ d.entries @ g.entries.conj().T - d.entries
    return SkewHermitian(g.space, (x - x.conj().T) / 2)


def base_point(space, gamma: float) -> OrbitPoint:
    return OrbitPoint(SkewHermitian(space, np.zeros((space.n, space.n))), gamma)


def affine_action(g: BlockOperator, m: OrbitPoint) -> OrbitPoint:
    """g . (mu, gamma) = (g mu g* - gamma sigma(g), gamma)."""
    if g.space != m.space:
        raise DimensionMismatch("group element and point live on different spaces")
    ge = g.entries
    x = ge @ m.mu.entries @ ge.conj().T - m.gamma * sigma(g).entries
    return OrbitPoint(SkewHermitian(g.space, (x - x.conj().T) / 2), m.gamma)


def orbit_embed(w: GrassmannPoint, gamma: float) -> OrbitPoint:
    """Equivariant embedding of the Grassmannian onto the orbit of (0, gamma).

    ``mu = gamma (i(pr+ - pr-) - i(pr_W - pr_W-perp)) = 2i gamma (pr+ - pr_W)``.
    """
    diff = pr_plus(w.space).entries - w.projection.entries
    x = 2j * float(gamma) * diff
    return OrbitPoint(SkewHermitian(w.space, (x - x.conj().T) / 2), gamma)


def reconstruct_projection(m: OrbitPoint) -> BlockOperator:
    """P = pr+ + (i / 2 gamma) mu; equals pr_W when m is the image of W."""
    return BlockOperator(m.space, pr_plus(m.space).entries + (0.5j / m.gamma) * m.mu.entries)


def orbit_defect(m: OrbitPoint) -> float:
    """max(||P - P*||, ||P^2 - P||) for the reconstructed P; zero exactly on the orbit."""
    p = reconstruct_projection(m).entries
    return float(max(np.linalg.norm(p - p.conj().T, 2), np.linalg.norm(p @ p - p, 2)))


def orbit_to_grassmann(m: OrbitPoint) -> GrassmannPoint:
    """Subspace W with orbit_embed(W, gamma) = m (spectral subspace of P above 1/2)."""
    p = reconstruct_projection(m).entries
    w, v = np.linalg.eigh((p + p.conj().T) / 2)
    return GrassmannPoint(m.space, v[:, w > 0.5])


def isotropy_defect(g: BlockOperator, gamma: float) -> float:
    """||g+-||_2 + ||g-+||_2 + ||mu(g . (0, gamma))||_2; zero iff g is block-diagonal."""
    moved = affine_action(g, base_point(g.space, gamma))
    return schatten_norm(g.pm, 2) + schatten_norm(g.mp, 2) + schatten_norm(moved.mu, 2)


def fundamental_vector(a: BlockOperator, gamma: float) -> SkewHermitian:
    """X^{(A, a)} = ([A, -gamma d], 0), the operator part returned."""
    d = make_d(a.space)
    x = -gamma * (a.entries @ d.entries - d.entries @ a.entries)
    return SkewHermitian(a.space, x)


def tangent_representative(a: BlockOperator) -> SkewHermitian:
    """Normal form of [A] modulo the isotropy algebra: the off-diagonal part."""
    return SkewHermitian(a.space, a.off_diagonal_part().entries)


def homogeneous_form(a: BlockOperator, b: BlockOperator, p: float = 2.0) -> float:
    """Omega_[id]([A], [B]) = 2 Im Tr((A-+)* B-+)."""
    _check_p(p)
    if a.space != b.space:
        raise DimensionMismatch("arguments live on different spaces")
    return float(2.0 * np.trace(a.mp.conj().T @ b.mp).imag)


def kks_form(a: BlockOperator, b: BlockOperator, gamma: float, p: float = 2.0) -> float:
    """omega_(0,gamma)(X^A, X^B) = gamma s(A, B)."""
    _check_p(p)
    if gamma == 0:
        raise InvariantViolation("gamma must be nonzero")
    return float(gamma) * schwinger(a, b, p)


def pushforward_form(g: BlockOperator, x: BlockOperator, y: BlockOperator, p: float = 2.0) -> float:
    """Invariant form at [g] on tangent representatives ``x = gA``, ``y = gB``.

    Translates back to the identity with g^-1 = g* and evaluates
    :func:`homogeneous_form` there.
    """
    gi = g.entries.conj().T
    a = BlockOperator(g.space, gi @ x.entries)
    b = BlockOperator(g.space, gi @ y.entries)
    return homogeneous_form(a, b, p)


def mp_basis(space) -> list[SkewHermitian]:
    """Real basis of the off-diagonal complement m_p (2 n+ n- elements)."""
    basis = []
    for j in range(space.n_minus):
        for k in range(space.n_plus):
            for phase in (1.0, 1j):
                mp = np.zeros((space.n_minus, space.n_plus), dtype=np.complex128)
                mp[j, k] = phase
                basis.append(SkewHermitian.from_blocks(space, mp=mp, pm=-mp.conj().T))
    return basis


def form_gram(form, basis) -> np.ndarray:
    """Matrix ``form(b_i, b_j)`` of a bilinear form on a list of tangent vectors."""
    return np.array([[form(a, b) for b in basis] for a in basis], dtype=float)
