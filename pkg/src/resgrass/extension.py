"""Schwinger cocycle, the centrally extended algebra and its Lie-Poisson bracket."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DimensionMismatch, InvalidExponent, InvariantViolation
from .polarized import BlockOperator, SkewHermitian, commutator, make_d, operator_norm, zeros
from .schatten import pairing, pairing_gram, restricted_trace, skew_basis

__all__ = [
    "ExtendedElement",
    "SmoothFunctional",
    "schwinger",
    "schwinger_blocks",
    "extended_bracket",
    "extended_pairing",
    "coadjoint",
    "gradient",
    "fd_gradient",
    "poisson_bracket",
    "linear_functional",
    "central_functional",
]

REALITY_TOL = 1e-11


@dataclass(frozen=True, eq=False)
class ExtendedElement:
    """Pair (A, a) of u_res,p (+) R; the same shape carries (mu, gamma) of u_1,q (+) R."""

    operator: SkewHermitian
    scalar: float = 0.0

    def __post_init__(self):
        op = self.operator
        if not isinstance(op, SkewHermitian):
            op = SkewHermitian(op.space, op.entries)
        object.__setattr__(self, "operator", op)
        object.__setattr__(self, "scalar", float(self.scalar))

    @property
    def space(self):
        return self.operator.space

    def __add__(self, other):
        return ExtendedElement(SkewHermitian(self.space, self.operator.entries + other.operator.entries),
                               self.scalar + other.scalar)

    def __mul__(self, t):
        return ExtendedElement(SkewHermitian(self.space, t * self.operator.entries), t * self.scalar)

    __rmul__ = __mul__


def schwinger(a: BlockOperator, b: BlockOperator, p: float = 2.0) -> float:
    """s(A, B) = Tr_res(A [d, B]), computed from the full product.

    Evaluated as ``(t(A, B) - t(B, A)) / 2`` with ``t(A, B) = Tr_res(A [d, B])``,
    so that ``s(B, A) = -s(A, B)`` holds bitwise.  The imaginary residue must
    stay below ``1e-11 n (1 + ||A|| ||B||)``.  ``p`` only records the ideal
    the arguments are taken in.
    """
    if a.space != b.space:
        raise DimensionMismatch("arguments live on different spaces")
    if not 1.0 <= float(p) <= 2.0:
        raise InvalidExponent(f"p must satisfy 1 <= p <= 2, got {p}")
    d = make_d(a.space)
    value = 0.5 * (restricted_trace(a @ commutator(d, b)) - restricted_trace(b @ commutator(d, a)))
    scale = 1.0 + operator_norm(a.entries) * operator_norm(b.entries)
    if abs(value.imag) > REALITY_TOL * scale * a.space.n:
        raise InvariantViolation(f"Schwinger term has imaginary part {value.imag:.3e}")
    return value.real


def schwinger_blocks(a: BlockOperator, b: BlockOperator) -> complex:
    """Block formula (-2i) Tr(A+- B-+) + (2i) Tr(A-+ B+-), kept complex for diagnostics."""
    return complex(-2j * np.trace(a.pm @ b.mp) + 2j * np.trace(a.mp @ b.pm))


def extended_bracket(x: ExtendedElement, y: ExtendedElement, p: float = 2.0) -> ExtendedElement:
    """[(A, a), (B, b)]_d = ([A, B], s(A, B))."""
    br = commutator(x.operator, y.operator)
    return ExtendedElement(SkewHermitian(br.space, br.entries), schwinger(x.operator, y.operator, p))


def extended_pairing(m: ExtendedElement, x: ExtendedElement) -> float:
    """<(mu, gamma), (A, a)>_d = <mu, A> + gamma a."""
    return pairing(m.operator, x.operator) + m.scalar * x.scalar


def coadjoint(x: ExtendedElement, m: ExtendedElement) -> ExtendedElement:
    """-ad*_{(A,a)}(mu, gamma) = ([A, mu - gamma d], 0)."""
    d = make_d(x.space)
    shifted = m.operator - m.scalar * d
    br = commutator(x.operator, shifted)
    return ExtendedElement(SkewHermitian(br.space, br.entries), 0.0)


# functionals -------------------------------------------------------------------

# (D_mu f as SkewHermitian, df/dgamma)
Gradient = tuple


@dataclass(frozen=True)
class SmoothFunctional:
    """Real function on u_1,q (+) R with an optional analytic gradient.

    The mu-gradient is the element G of u_res,p representing the derivative
    through the pairing: ``Df(mu)[delta] = <delta, G>``.
    """

    evaluate: Callable[[ExtendedElement], float]
    analytic_gradient: Optional[Callable[[ExtendedElement], Gradient]] = None

    def __call__(self, m: ExtendedElement) -> float:
        return float(self.evaluate(m))


def _fd_step(m: ExtendedElement) -> float:
    return 1e-5 * (1.0 + operator_norm(m.operator.entries))


def fd_gradient(f: SmoothFunctional, m: ExtendedElement, step: Optional[float] = None) -> Gradient:
    """Central finite-difference gradient over the canonical real basis.

    Directional derivatives ``c_k`` along basis elements ``E_k`` are turned
    into the representing element ``G`` by solving ``Gram x = c`` with the
    pairing Gram matrix of the basis.
    """
    h = _fd_step(m) if step is None else step
    space = m.space
    basis = skew_basis(space)
    derivs = np.empty(len(basis))
    for k, e in enumerate(basis):
        plus = ExtendedElement(SkewHermitian(space, m.operator.entries + h * e.entries), m.scalar)
        minus = ExtendedElement(SkewHermitian(space, m.operator.entries - h * e.entries), m.scalar)
        derivs[k] = (f(plus) - f(minus)) / (2 * h)
    coeffs = np.linalg.solve(pairing_gram(basis, basis), derivs)
    g = np.tensordot(coeffs, np.array([e.entries for e in basis]), axes=1)
    dgamma = (f(ExtendedElement(m.operator, m.scalar + h)) - f(ExtendedElement(m.operator, m.scalar - h))) / (2 * h)
    return SkewHermitian(space, (g - g.conj().T) / 2), float(dgamma)


def gradient(f: SmoothFunctional, m: ExtendedElement) -> Gradient:
    """Analytic gradient when available, finite differences otherwise."""
    if f.analytic_gradient is None:
        return fd_gradient(f, m)
    g, dgamma = f.analytic_gradient(m)
    if not isinstance(g, BlockOperator) or g.space != m.space:
        raise InvariantViolation("analytic gradient must be an operator on the same space")
    if not isinstance(g, SkewHermitian):
        g = SkewHermitian(g.space, g.entries)
    return g, float(dgamma)


def poisson_bracket(f: SmoothFunctional, g: SmoothFunctional, at: ExtendedElement, p: float = 2.0) -> float:
    """{f, g}_d(mu, gamma) = <mu, [D f, D g]> + gamma s(D f, D g)."""
    df, _ = gradient(f, at)
    dg, _ = gradient(g, at)
    return pairing(at.operator, commutator(df, dg)) + at.scalar * schwinger(df, dg, p)


def linear_functional(a: BlockOperator, c: float = 0.0) -> SmoothFunctional:
    """(mu, gamma) -> <mu, A> + c gamma, with its exact gradient."""
    a = a if isinstance(a, SkewHermitian) else SkewHermitian(a.space, a.entries)
    return SmoothFunctional(lambda m: pairing(m.operator, a) + c * m.scalar, lambda m: (a, c))


def central_functional(phi: Callable[[float], float], dphi: Optional[Callable[[float], float]] = None) -> SmoothFunctional:
    """Functional depending on gamma only; its mu-gradient vanishes."""
    grad = None if dphi is None else (lambda m: (zeros(m.space), dphi(m.scalar)))
    return SmoothFunctional(lambda m: phi(m.scalar), grad)
