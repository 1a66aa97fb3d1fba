"""Polarized spaces, block operators and seeded operator ensembles.

A polarized Hilbert space H = H+ (+) H- is represented at finite truncation
by the pair of dimensions ``(n_plus, n_minus)``.  Operators are dense complex
matrices, always read through the 2x2 block decomposition with respect to
this splitting.  Infinite-dimensional statements are approximated by families
of truncations; the random ensembles below are nested, so that the
``(n_plus, n_minus)`` truncation of an operator is a compression of every
larger truncation generated from the same seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Number

import numpy as np

from .errors import DimensionMismatch, InvalidExponent, InvariantViolation

__all__ = [
    "PolarizedSpace",
    "BlockOperator",
    "SkewHermitian",
    "RestrictedUnitary",
    "EnsembleSpec",
    "make_d",
    "identity",
    "zeros",
    "pr_plus",
    "pr_minus",
    "commutator",
    "skew_part",
    "exp_skew",
    "random_skew",
    "random_predual",
    "random_unitary",
    "operator_norm",
    "tolerance",
]

TOL_FACTOR = 1e-10


def operator_norm(a) -> float:
    """Largest singular value of a matrix (0 for empty matrices)."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def tolerance(a) -> float:
    """Invariant tolerance ``1e-10 * (1 + ||a||)`` used for skew/unitary checks."""
    return TOL_FACTOR * (1.0 + operator_norm(a))


@dataclass(frozen=True)
class PolarizedSpace:
    n_plus: int
    n_minus: int

    def __post_init__(self):
        for name in ("n_plus", "n_minus"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
                raise DimensionMismatch(f"{name} must be a positive integer, got {value!r}")
            object.__setattr__(self, name, int(value))

    @property
    def n(self) -> int:
        return self.n_plus + self.n_minus

    @property
    def plus(self) -> slice:
        return slice(0, self.n_plus)

    @property
    def minus(self) -> slice:
        return slice(self.n_plus, self.n)

    def __str__(self):
        return f"({self.n_plus},{self.n_minus})"


@dataclass(frozen=True, eq=False)
class BlockOperator:
    """Dense operator on a truncated polarized space.

    ``entries`` is stored as a read-only complex128 array.  Arithmetic
    operators return plain :class:`BlockOperator` instances; the refinements
    :class:`SkewHermitian` and :class:`RestrictedUnitary` validate their
    invariant on construction.
    """

    space: PolarizedSpace
    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=np.complex128)
        n = self.space.n
        if a.shape != (n, n):
            raise DimensionMismatch(f"expected a {n}x{n} matrix for space {self.space}, got shape {a.shape}")
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)
        self._validate()

    def _validate(self):
        pass

    @classmethod
    def from_blocks(cls, space, pp=None, pm=None, mp=None, mm=None):
        """Assemble an operator from its four blocks; missing blocks are zero."""
        a = np.zeros((space.n, space.n), dtype=np.complex128)
        for block, rows, cols in ((pp, space.plus, space.plus), (pm, space.plus, space.minus),
                                  (mp, space.minus, space.plus), (mm, space.minus, space.minus)):
            if block is not None:
                a[rows, cols] = block
        return cls(space, a)

    # blocks -----------------------------------------------------------------
    @property
    def pp(self) -> np.ndarray:
        return self.entries[self.space.plus, self.space.plus]

    @property
    def pm(self) -> np.ndarray:
        return self.entries[self.space.plus, self.space.minus]

    @property
    def mp(self) -> np.ndarray:
        return self.entries[self.space.minus, self.space.plus]

    @property
    def mm(self) -> np.ndarray:
        return self.entries[self.space.minus, self.space.minus]

    def diagonal_part(self) -> "BlockOperator":
        return BlockOperator.from_blocks(self.space, pp=self.pp, mm=self.mm)

    def off_diagonal_part(self) -> "BlockOperator":
        return BlockOperator.from_blocks(self.space, pm=self.pm, mp=self.mp)

    # algebra ----------------------------------------------------------------
    def adjoint(self) -> "BlockOperator":
        return BlockOperator(self.space, self.entries.conj().T)

    def norm(self) -> float:
        """Operator norm."""
        return operator_norm(self.entries)

    def _other(self, other) -> np.ndarray:
        if not isinstance(other, BlockOperator):
            raise TypeError(f"expected BlockOperator, got {type(other).__name__}")
        if other.space != self.space:
            raise DimensionMismatch(f"spaces differ: {self.space} vs {other.space}")
        return other.entries

    def __matmul__(self, other):
        return BlockOperator(self.space, self.entries @ self._other(other))

    def __add__(self, other):
        return BlockOperator(self.space, self.entries + self._other(other))

    def __sub__(self, other):
        return BlockOperator(self.space, self.entries - self._other(other))

    def __neg__(self):
        return BlockOperator(self.space, -self.entries)

    def __mul__(self, scalar):
        if not isinstance(scalar, Number):
            return NotImplemented
        return BlockOperator(self.space, scalar * self.entries)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if not isinstance(scalar, Number):
            return NotImplemented
        return BlockOperator(self.space, self.entries / scalar)

    def allclose(self, other, atol=1e-9) -> bool:
        return bool(np.max(np.abs(self.entries - self._other(other)), initial=0.0) <= atol)

    def __repr__(self):
        return f"{type(self).__name__}(space={self.space}, norm={self.norm():.6g})"


class SkewHermitian(BlockOperator):
    """Element of u(H): ``A* = -A`` within ``1e-10 (1 + ||A||)``."""

    def _validate(self):
        a = self.entries
        defect = np.max(np.abs(a + a.conj().T), initial=0.0)
        if defect > tolerance(a):
            raise InvariantViolation(f"operator is not skew-Hermitian (||A + A*||_max = {defect:.3e})")


class RestrictedUnitary(BlockOperator):
    """Unitary operator; at finite truncation ``[d, u]`` is automatically of class L_p."""

    def _validate(self):
        a = self.entries
        eye = np.eye(a.shape[0])
        tol = tolerance(a)
        defect = max(np.max(np.abs(a.conj().T @ a - eye)), np.max(np.abs(a @ a.conj().T - eye)))
        if defect > tol:
            raise InvariantViolation(f"operator is not unitary (defect {defect:.3e})")

    def inverse(self) -> "RestrictedUnitary":
        return RestrictedUnitary(self.space, self.entries.conj().T)


def identity(space: PolarizedSpace) -> RestrictedUnitary:
    return RestrictedUnitary(space, np.eye(space.n))


def zeros(space: PolarizedSpace) -> SkewHermitian:
    return SkewHermitian(space, np.zeros((space.n, space.n)))


def pr_plus(space: PolarizedSpace) -> BlockOperator:
    return BlockOperator.from_blocks(space, pp=np.eye(space.n_plus))


def pr_minus(space: PolarizedSpace) -> BlockOperator:
    return BlockOperator.from_blocks(space, mm=np.eye(space.n_minus))


def make_d(space: PolarizedSpace) -> SkewHermitian:
    """The distinguished operator d = i(pr+ - pr-)."""
    diag = np.concatenate([np.full(space.n_plus, 1j), np.full(space.n_minus, -1j)])
    return SkewHermitian(space, np.diag(diag))


def commutator(a: BlockOperator, b: BlockOperator) -> BlockOperator:
    """[a, b] = ab - ba."""
    return a @ b - b @ a


def skew_part(a: BlockOperator) -> SkewHermitian:
    """(a - a*)/2, skew-Hermitian to the last bit."""
    x = a.entries
    return SkewHermitian(a.space, (x - x.conj().T) / 2)


def exp_skew(a: BlockOperator) -> RestrictedUnitary:
    """Matrix exponential of a skew-Hermitian operator.

    Uses the spectral decomposition of the Hermitian matrix ``iA``, which keeps
    the result unitary to working precision.
    """
    if not isinstance(a, SkewHermitian):
        a = SkewHermitian(a.space, a.entries)
    h = 1j * a.entries
    h = (h + h.conj().T) / 2
    w, v = np.linalg.eigh(h)
    return RestrictedUnitary(a.space, (v * np.exp(-1j * w)) @ v.conj().T)


# ---------------------------------------------------------------------------
# seeded ensembles


@dataclass(frozen=True)
class EnsembleSpec:
    """Parameters of a nested random operator family.

    The default ``decay_alpha`` exceeds ``2/p`` on the whole range 1 <= p <= 2,
    which makes the off-diagonal blocks summable in every L_p of interest.
    """

    seed: int
    decay_alpha: float = 2.5
    magnitude: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.decay_alpha) or self.decay_alpha < 0:
            raise ValueError(f"decay_alpha must be >= 0, got {self.decay_alpha}")
        if not np.isfinite(self.magnitude) or self.magnitude < 0:
            raise ValueError(f"magnitude must be >= 0, got {self.magnitude}")
        object.__setattr__(self, "seed", int(self.seed))


# tags separating the independent streams of one seed
_TAG_PP, _TAG_MM, _TAG_MP, _TAG_SIGN_P, _TAG_SIGN_M = range(5)
_TAG_PREDUAL = 100


def _nested_gaussian(seed: int, tag: int, rows: int, cols: int) -> np.ndarray:
    """Standard complex Gaussian matrix whose leading minors do not depend on the shape.

    Row ``j`` is drawn from its own stream keyed by ``(seed, tag, j)``; a
    Generator emits normals sequentially, so the first ``cols`` values of a
    row are the same for every requested width.
    """
    key = seed % 2**64
    out = np.empty((rows, cols), dtype=np.complex128)
    for j in range(rows):
        x = np.random.default_rng([key, tag, j]).standard_normal(2 * cols)
        out[j] = (x[0::2] + 1j * x[1::2]) / np.sqrt(2.0)
    return out


def _decay(rows: int, cols: int, exponent: float) -> np.ndarray:
    j = np.arange(1, rows + 1, dtype=float)[:, None]
    k = np.arange(1, cols + 1, dtype=float)[None, :]
    return (j + k) ** (-exponent)


def _check_p(p) -> float:
    p = float(p)
    if not 1.0 <= p <= 2.0:
        raise InvalidExponent(f"p must satisfy 1 <= p <= 2, got {p}")
    return p


def _check_q(q) -> float:
    q = float(q)
    if not (q >= 2.0):
        raise InvalidExponent(f"q must satisfy q >= 2 (or be infinite), got {q}")
    return q


def random_skew(space: PolarizedSpace, spec: EnsembleSpec, p: float = 2.0) -> SkewHermitian:
    """Random element emulating u_{res,p}.

    Off-diagonal entry ``(j, k)`` carries weight ``magnitude * (j+k)^-decay_alpha``.
    Diagonal blocks are bounded but do not decay: a diagonal of random signs
    of modulus ``magnitude`` plus a decaying Gaussian part.
    """
    _check_p(p)
    npl, nmi, m, alpha = space.n_plus, space.n_minus, spec.magnitude, spec.decay_alpha
    x = np.zeros((space.n, space.n), dtype=np.complex128)
    x[space.plus, space.plus] = m * _nested_gaussian(spec.seed, _TAG_PP, npl, npl) * _decay(npl, npl, alpha)
    x[space.minus, space.minus] = m * _nested_gaussian(spec.seed, _TAG_MM, nmi, nmi) * _decay(nmi, nmi, alpha)
    x[space.minus, space.plus] = m * _nested_gaussian(spec.seed, _TAG_MP, nmi, npl) * _decay(nmi, npl, alpha)
    a = (x - x.conj().T) / 2
    signs = np.concatenate([
        np.sign(_nested_gaussian(spec.seed, _TAG_SIGN_P, 1, npl)[0].real),
        np.sign(_nested_gaussian(spec.seed, _TAG_SIGN_M, 1, nmi)[0].real),
    ])
    a[np.diag_indices(space.n)] += 1j * m * signs
    return SkewHermitian(space, a)


def random_predual(space: PolarizedSpace, spec: EnsembleSpec, q: float = 2.0) -> SkewHermitian:
    """Random element emulating u_{1,q}.

    Diagonal blocks decay like ``(j+k)^-(decay_alpha+1)`` (summable singular
    values), off-diagonal blocks like ``(j+k)^-decay_alpha``.
    """
    _check_q(q)
    npl, nmi, m, alpha = space.n_plus, space.n_minus, spec.magnitude, spec.decay_alpha
    tag = _TAG_PREDUAL
    x = np.zeros((space.n, space.n), dtype=np.complex128)
    x[space.plus, space.plus] = m * _nested_gaussian(spec.seed, tag, npl, npl) * _decay(npl, npl, alpha + 1)
    x[space.minus, space.minus] = m * _nested_gaussian(spec.seed, tag + 1, nmi, nmi) * _decay(nmi, nmi, alpha + 1)
    x[space.minus, space.plus] = m * _nested_gaussian(spec.seed, tag + 2, nmi, npl) * _decay(nmi, npl, alpha)
    return SkewHermitian(space, (x - x.conj().T) / 2)


def random_unitary(space: PolarizedSpace, spec: EnsembleSpec, p: float = 2.0) -> RestrictedUnitary:
    """exp of a :func:`random_skew` generator."""
    return exp_skew(random_skew(space, spec, p))
