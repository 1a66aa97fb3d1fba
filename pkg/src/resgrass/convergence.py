"""Truncation-convergence studies.

Membership of an operator in a Schatten ideal, or of a subspace in the
restricted Grassmannian, is an asymptotic property.  At finite truncation it
shows up as stabilisation of the relevant norms along a nested family of
truncations generated from one seed; divergence signals non-membership.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Optional

from .errors import ConfigError
from .grassmannian import graph_point, membership_defect
from .polarized import EnsembleSpec, PolarizedSpace, commutator, make_d, random_predual, random_skew
from .schatten import conjugate, l1q_norm, restricted_norm, schatten_norm

__all__ = [
    "QUANTITIES",
    "CONVERGING_TOL",
    "DIVERGING_TOL",
    "ConvergenceRow",
    "quantity_values",
    "relative_changes",
    "classify",
    "convergence_study",
    "rows_to_csv",
]

QUANTITIES = ("commutator_norm", "restricted_norm", "l1q_norm", "membership_defect")
CONVERGING_TOL = 0.05
DIVERGING_TOL = 0.2
CSV_COLUMNS = ("size", "quantity", "value", "rel_change", "status")


@dataclass(frozen=True)
class ConvergenceRow:
    size: tuple
    quantity: str
    value: float
    rel_change: Optional[float]
    status: str


def quantity_values(space: PolarizedSpace, spec: EnsembleSpec, p: float) -> dict:
    """The tracked quantities at one truncation.

    - ``commutator_norm``: ||[d, A]||_p for A = random_skew
    - ``restricted_norm``: ||A||_res,p
    - ``l1q_norm``: ||rho||_1,q for rho = random_predual with q conjugate to p
      (q is clamped to >= 2, the predual range)
    - ``membership_defect``: ||pr_W - pr+||_p for W the graph over H+ of A-+
    """
    a = random_skew(space, spec, p)
    q = max(conjugate(p), 2.0)
    rho = random_predual(space, spec, q)
    w = graph_point(space, a.mp)
    return {
        "commutator_norm": schatten_norm(commutator(make_d(space), a), p),
        "restricted_norm": restricted_norm(a, p),
        "l1q_norm": l1q_norm(rho, q),
        "membership_defect": membership_defect(w, p),
    }


def relative_changes(values) -> list:
    """Successive relative changes |v_k - v_{k-1}| / |v_{k-1}| (0/0 counts as 0)."""
    out = []
    for prev, cur in zip(values, values[1:]):
        diff = abs(cur - prev)
        if diff == 0.0:
            out.append(0.0)
        elif prev == 0.0:
            out.append(math.inf)
        else:
            out.append(diff / abs(prev))
    return out


def classify(values) -> str:
    """``converging`` if the last change is < 0.05, ``diverging`` if the
    sequence increases throughout and the last change exceeds 0.2, otherwise
    ``undetermined``."""
    changes = relative_changes(values)
    if not changes:
        return "undetermined"
    if changes[-1] < CONVERGING_TOL:
        return "converging"
    increasing = all(b > a for a, b in zip(values, values[1:]))
    if increasing and changes[-1] > DIVERGING_TOL:
        return "diverging"
    return "undetermined"


def convergence_study(config, seed: Optional[int] = None, quantities=QUANTITIES) -> list:
    """Table of tracked quantities over ``config.sizes`` for one nested family.

    ``seed`` defaults to ``config.seed``.  Every row of a quantity carries the
    status of the whole sequence.
    """
    if len(config.sizes) < 3:
        raise ConfigError("a convergence study needs at least 3 sizes")
    spec = EnsembleSpec(seed=config.seed if seed is None else seed,
                        decay_alpha=config.decay_alpha, magnitude=config.magnitude)
    per_size = [quantity_values(PolarizedSpace(*s), spec, config.p) for s in config.sizes]
    rows = []
    for name in quantities:
        values = [v[name] for v in per_size]
        status = classify(values)
        changes = [None] + relative_changes(values)
        for size, value, change in zip(config.sizes, values, changes):
            rows.append(ConvergenceRow(tuple(size), name, value, change, status))
    return rows


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([
            f"{r.size[0]}x{r.size[1]}",
            r.quantity,
            repr(float(r.value)),
            "" if r.rel_change is None else repr(float(r.rel_change)),
            r.status,
        ])
    return buf.getvalue()
