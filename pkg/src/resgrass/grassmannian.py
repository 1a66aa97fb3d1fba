"""Points of the restricted Grassmannian, the graph-chart atlas and the group action.

A point is a subspace W of the truncated space, stored as an orthonormal
frame together with its orthogonal projection.  Frames are gauge: two points
are the same subspace iff their projections agree.  The chart centred at V
sends W to the graph operator V -> V-perp whose graph is W, written in the
coordinates of the frames of V and V-perp.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import DimensionMismatch, InvariantViolation, NotInChartDomain, RankDeficient
from .polarized import BlockOperator, PolarizedSpace, RestrictedUnitary, pr_plus, tolerance
from .schatten import numerical_rank, schatten_norm, singular_values

__all__ = [
    "GrassmannPoint",
    "ChartValue",
    "CHART_TOL",
    "INDEX_GUARD",
    "point_from_frame",
    "h_plus",
    "h_minus",
    "graph_point",
    "membership_defect",
    "relative_index",
    "dual_relative_index",
    "orthocomplement",
    "projection_distance",
    "chart_forward",
    "chart_inverse",
    "transition",
    "fredholm_regularizer",
    "defect_rank",
    "act",
    "carrying_unitary",
]

CHART_TOL = 1e-8
INDEX_GUARD = 0.1
RANK_TOL = 1e-10


def _orthonormalize(frame: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(frame)
    diag = np.abs(np.diag(r))
    if frame.shape[1] and (diag.min() <= RANK_TOL * max(diag.max(), 1e-300)):
        raise RankDeficient("frame columns are linearly dependent")
    # fix the column phases so that R has a positive diagonal
    phase = np.diag(r) / np.where(diag > 0, diag, 1.0)
    return q * phase


@dataclass(frozen=True, eq=False)
class GrassmannPoint:
    """Subspace of dimension ``k`` with orthonormal ``frame`` (n x k)."""

    space: PolarizedSpace
    frame: np.ndarray
    complement: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        f = np.array(self.frame, dtype=np.complex128)
        if f.ndim != 2 or f.shape[0] != self.space.n:
            raise DimensionMismatch(f"frame must have {self.space.n} rows, got shape {f.shape}")
        gram = f.conj().T @ f
        if np.max(np.abs(gram - np.eye(f.shape[1])), initial=0.0) > tolerance(f):
            raise InvariantViolation("frame is not orthonormal; use point_from_frame")
        f.flags.writeable = False
        object.__setattr__(self, "frame", f)
        if self.complement is not None:
            c = np.array(self.complement, dtype=np.complex128)
            if c.shape != (self.space.n, self.space.n - f.shape[1]):
                raise DimensionMismatch(f"complement frame must have shape {(self.space.n, self.space.n - f.shape[1])}")
            if np.max(np.abs(np.hstack([f, c]).conj().T @ np.hstack([f, c]) - np.eye(self.space.n)),
                      initial=0.0) > tolerance(c):
                raise InvariantViolation("frame and complement do not form an orthonormal basis")
            c.flags.writeable = False
            object.__setattr__(self, "complement", c)

    @property
    def k(self) -> int:
        return self.frame.shape[1]

    @cached_property
    def projection(self) -> BlockOperator:
        return BlockOperator(self.space, self.frame @ self.frame.conj().T)

    @cached_property
    def complement_frame(self) -> np.ndarray:
        """Orthonormal frame of the orthogonal complement (n x (n-k)).

        The one given at construction, otherwise completed by QR.
        """
        if self.complement is not None:
            return self.complement
        q, _ = np.linalg.qr(self.frame, mode="complete")
        c = q[:, self.k:]
        # project out residual components along the frame
        c = c - self.frame @ (self.frame.conj().T @ c)
        c, _ = np.linalg.qr(c)
        c.flags.writeable = False
        return c

    def same_subspace(self, other: "GrassmannPoint", atol: float = 1e-9) -> bool:
        return self.space == other.space and self.k == other.k and projection_distance(self, other) <= atol

    def __repr__(self):
        return f"GrassmannPoint(space={self.space}, k={self.k})"


@dataclass(frozen=True, eq=False)
class ChartValue:
    """Graph operator over ``base``: an ((n-k) x k) matrix in frame coordinates."""

    base: GrassmannPoint
    graph_op: np.ndarray

    def __post_init__(self):
        a = np.array(self.graph_op, dtype=np.complex128)
        if a.ndim == 0:
            a = a.reshape(1, 1)
        expected = (self.base.space.n - self.base.k, self.base.k)
        if a.shape != expected:
            raise DimensionMismatch(f"graph operator must have shape {expected}, got {a.shape}")
        a.flags.writeable = False
        object.__setattr__(self, "graph_op", a)


def point_from_frame(space: PolarizedSpace, frame) -> GrassmannPoint:
    """Point spanned by the columns of ``frame`` (orthonormalized by QR)."""
    f = np.array(frame, dtype=np.complex128)
    if f.ndim == 1:
        f = f[:, None]
    if f.shape[0] != space.n:
        raise DimensionMismatch(f"frame must have {space.n} rows, got {f.shape[0]}")
    return GrassmannPoint(space, _orthonormalize(f))


def h_plus(space: PolarizedSpace) -> GrassmannPoint:
    """H+ with the standard basis of H- as complement frame."""
    eye = np.eye(space.n)
    return GrassmannPoint(space, eye[:, space.plus], eye[:, space.minus])


def h_minus(space: PolarizedSpace) -> GrassmannPoint:
    eye = np.eye(space.n)
    return GrassmannPoint(space, eye[:, space.minus], eye[:, space.plus])


def graph_point(space: PolarizedSpace, op) -> GrassmannPoint:
    """Graph over H+ of an operator H+ -> H- (an n_minus x n_plus matrix)."""
    return chart_inverse(ChartValue(h_plus(space), op))


def projection_distance(v: GrassmannPoint, w: GrassmannPoint) -> float:
    """Operator-norm distance between the two orthogonal projections."""
    return float(np.linalg.norm(v.projection.entries - w.projection.entries, 2))


def membership_defect(w: GrassmannPoint, p) -> float:
    """||pr_W - pr+||_p."""
    return schatten_norm(w.projection - pr_plus(w.space), p)


def relative_index(w: GrassmannPoint) -> int:
    """Tr(pr_W - pr+), i.e. the index of pr+ restricted to W (= k - n_plus)."""
    t = np.trace(w.projection.entries).real - w.space.n_plus
    r = round(t)
    if abs(t - r) > INDEX_GUARD:
        raise InvariantViolation(f"trace {t:.4f} is not within {INDEX_GUARD} of an integer")
    return int(r)


def dual_relative_index(w: GrassmannPoint) -> int:
    """Tr(pr_W - pr-), the index datum of the dual Grassmannian."""
    t = np.trace(w.projection.entries).real - w.space.n_minus
    r = round(t)
    if abs(t - r) > INDEX_GUARD:
        raise InvariantViolation(f"trace {t:.4f} is not within {INDEX_GUARD} of an integer")
    return int(r)


def orthocomplement(w: GrassmannPoint) -> GrassmannPoint:
    return GrassmannPoint(w.space, w.complement_frame, w.frame)


# charts ---------------------------------------------------------------------


def chart_forward(v: GrassmannPoint, w: GrassmannPoint, chart_tol: float = CHART_TOL) -> ChartValue:
    """phi_V(W) = pr_{V-perp} pr_W pr_V (pr_V pr_W pr_V)^-1 in frame coordinates."""
    if v.space != w.space:
        raise DimensionMismatch("points live on different spaces")
    if v.k != w.k:
        raise NotInChartDomain(f"dim W = {w.k} differs from dim V = {v.k}")
    pw = w.projection.entries
    f, c = v.frame, v.complement_frame
    compressed = f.conj().T @ pw @ f
    s = singular_values(compressed)
    if s.size and s.min() <= chart_tol:
        raise NotInChartDomain(f"pr_V pr_W pr_V is singular on V (sigma_min = {s.min():.3e})")
    cross = c.conj().T @ pw @ f
    return ChartValue(v, np.linalg.solve(compressed.T, cross.T).T)


def chart_inverse(cv: ChartValue) -> GrassmannPoint:
    """Graph of ``cv.graph_op``: spanned by v + A v over the base frame vectors v."""
    base = cv.base
    frame = base.frame + base.complement_frame @ cv.graph_op
    return point_from_frame(base.space, frame)


def transition(v: GrassmannPoint, e: GrassmannPoint, a: ChartValue, chart_tol: float = CHART_TOL) -> ChartValue:
    """psi_{V,E}(A) = (c + dA)(a + bA)^-1.

    ``(a, b; c, d)`` are the blocks of the identity written from E (+) E-perp
    to V (+) V-perp in frame coordinates.
    """
    if a.base is not e and not a.base.same_subspace(e):
        raise DimensionMismatch("chart value is not expressed over E")
    if v is a.base or (v.space == a.base.space and np.array_equal(v.frame, a.base.frame)):
        return ChartValue(v, a.graph_op)
    if v.k != e.k:
        raise NotInChartDomain(f"dim V = {v.k} differs from dim E = {e.k}")
    # coordinates of A refer to the frames of its own base
    fv, cv_ = v.frame, v.complement_frame
    fe, ce = a.base.frame, a.base.complement_frame
    blk_a = fv.conj().T @ fe
    blk_b = fv.conj().T @ ce
    blk_c = cv_.conj().T @ fe
    blk_d = cv_.conj().T @ ce
    lower = blk_a + blk_b @ a.graph_op
    s = singular_values(lower)
    if s.size and s.min() <= chart_tol:
        raise NotInChartDomain(f"a + bA is singular (sigma_min = {s.min():.3e})")
    upper = blk_c + blk_d @ a.graph_op
    return ChartValue(v, np.linalg.solve(lower.T, upper.T).T)


# Fredholm parametrix -----------------------------------------------------------


def fredholm_regularizer(a: BlockOperator, rank_tol: float = 1e-8) -> BlockOperator:
    """Thresholded pseudo-inverse T of ``a``.

    Singular values above ``rank_tol * sigma_max`` are inverted, the rest are
    discarded, so ``aT - I`` and ``Ta - I`` have rank equal to the number of
    discarded values.  ``a = 0`` gives ``T = 0``.
    """
    u, s, vh = np.linalg.svd(a.entries)
    if s.size == 0 or s[0] == 0.0:
        return BlockOperator(a.space, np.zeros_like(a.entries))
    keep = s > rank_tol * s[0]
    inv = np.where(keep, 1.0 / np.where(keep, s, 1.0), 0.0)
    return BlockOperator(a.space, (vh.conj().T * inv) @ u.conj().T)


def defect_rank(a: BlockOperator, rank_tol: float = 1e-8) -> int:
    """Number of singular values discarded by :func:`fredholm_regularizer`."""
    return a.space.n - numerical_rank(a.entries, rank_tol)


# group action -------------------------------------------------------------------


def act(g: BlockOperator, w: GrassmannPoint) -> GrassmannPoint:
    """Image g(W); the projection transforms as g pr_W g*."""
    if g.space != w.space:
        raise DimensionMismatch("operator and point live on different spaces")
    return point_from_frame(w.space, g.entries @ w.frame)


def carrying_unitary(w: GrassmannPoint) -> RestrictedUnitary:
    """The unitary w (+) w-perp : H+ (+) H- -> H, which maps H+ onto W.

    Requires relative index 0 so that the frames of W and W-perp have the
    dimensions of H+ and H-.
    """
    if w.k != w.space.n_plus:
        raise InvariantViolation(f"W has relative index {w.k - w.space.n_plus}, expected 0")
    return RestrictedUnitary(w.space, np.hstack([w.frame, w.complement_frame]))
