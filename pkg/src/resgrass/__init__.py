"""Finite-truncation numerics for the restricted p-Schatten Grassmannian.

Block operators on a polarized space H+ (+) H-, Schatten and restricted
norms, the restricted trace pairing, the Grassmannian atlas, the Schwinger
central extension, the affine coadjoint orbit and its symplectic forms.
"""

from .errors import (ConfigError, DimensionMismatch, InvalidExponent, InvariantViolation, NotInChartDomain,
                     RankDeficient, ResgrassError)
from .polarized import (BlockOperator, EnsembleSpec, PolarizedSpace, RestrictedUnitary, SkewHermitian,
                        commutator, exp_skew, identity, make_d, pr_minus, pr_plus, random_predual, random_skew,
                        random_unitary, zeros)
from .schatten import (INF, conjugate, l1q_norm, pairing, restricted_norm, restricted_trace, schatten_norm,
                       singular_values)
from .grassmannian import (ChartValue, GrassmannPoint, chart_forward, chart_inverse, graph_point, h_minus,
                           h_plus, membership_defect, point_from_frame, relative_index, transition)
from .extension import ExtendedElement, coadjoint, extended_bracket, extended_pairing, poisson_bracket, schwinger
from .orbit import OrbitPoint, affine_action, homogeneous_form, kks_form, orbit_embed, sigma
from .config import ExperimentConfig, load_config
from .runner import run

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DimensionMismatch",
    "InvalidExponent",
    "InvariantViolation",
    "NotInChartDomain",
    "RankDeficient",
    "ResgrassError",
    "BlockOperator",
    "EnsembleSpec",
    "PolarizedSpace",
    "RestrictedUnitary",
    "SkewHermitian",
    "commutator",
    "exp_skew",
    "identity",
    "make_d",
    "pr_minus",
    "pr_plus",
    "random_predual",
    "random_skew",
    "random_unitary",
    "zeros",
    "INF",
    "conjugate",
    "l1q_norm",
    "pairing",
    "restricted_norm",
    "restricted_trace",
    "schatten_norm",
    "singular_values",
    "ChartValue",
    "GrassmannPoint",
    "chart_forward",
    "chart_inverse",
    "graph_point",
    "h_minus",
    "h_plus",
    "membership_defect",
    "point_from_frame",
    "relative_index",
    "transition",
    "ExtendedElement",
    "coadjoint",
    "extended_bracket",
    "extended_pairing",
    "poisson_bracket",
    "schwinger",
    "OrbitPoint",
    "affine_action",
    "homogeneous_form",
    "kks_form",
    "orbit_embed",
    "sigma",
    "ExperimentConfig",
    "load_config",
    "run",
]
