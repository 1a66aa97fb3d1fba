"""Property battery run by the CLI.

Each suite evaluates a set of named checks for one ``(space, trial)`` and
returns, per check, the ratio ``residual / allowed``: a check passes when its
ratio is at most 1.  A :class:`SuiteReport` keeps the worst ratio over all
checks, trials and sizes.

Trial randomness is derived from ``(seed, suite index, trial index)`` only,
so reports do not depend on evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import extension as ext
from . import grassmannian as gr
from . import orbit as orb
from .convergence import CONVERGING_TOL, quantity_values, relative_changes
from .errors import NotInChartDomain
from .polarized import (BlockOperator, EnsembleSpec, PolarizedSpace, SkewHermitian, commutator, exp_skew,
                        make_d, pr_minus, pr_plus, random_predual, random_skew)
from .schatten import (conjugate, l1q_norm, numerical_rank, pairing, restricted_norm, restricted_trace,
                       schatten_norm, skew_basis, trace_pairing, pairing_gram)

__all__ = ["SuiteReport", "child_seed", "TrialRng", "SUITE_FUNCTIONS", "run_suite", "ratio"]


@dataclass
class SuiteReport:
    suite: str
    trials: int
    max_violation: float
    threshold: float
    passed: bool
    per_size_stats: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "trials": self.trials,
            "max_violation": self.max_violation,
            "threshold": self.threshold,
            "passed": self.passed,
            "per_size_stats": [{"size": list(s), "max_violation": v} for s, v in self.per_size_stats],
            "checks": dict(sorted(self.checks.items())),
        }


def ratio(residual: float, allowed: float) -> float:
    residual = abs(float(residual))
    if residual == 0.0:
        return 0.0
    if allowed <= 0.0:
        return math.inf
    return residual / allowed


def child_seed(seed: int, *path: int) -> int:
    """64-bit seed for the node ``path`` below ``seed`` (counter-based, order free)."""
    state = np.random.SeedSequence([int(seed) % 2**64, *path]).generate_state(2, dtype=np.uint32)
    return int(state[0]) | (int(state[1]) << 32)


class TrialRng:
    """Source of independent ensemble members for one trial."""

    def __init__(self, seed: int, alpha: float, magnitude: float = 1.0, p: float = 2.0):
        self.seed, self.alpha, self.magnitude, self.p = seed, alpha, magnitude, p
        self._count = 0
        self.generator = np.random.default_rng(child_seed(seed, 2**31))

    def spec(self, magnitude=None) -> EnsembleSpec:
        self._count += 1
        return EnsembleSpec(child_seed(self.seed, self._count), self.alpha,
                            self.magnitude if magnitude is None else magnitude)

    def skew(self, space, magnitude=None) -> SkewHermitian:
        return random_skew(space, self.spec(magnitude), self.p)

    def predual(self, space, q=2.0) -> SkewHermitian:
        return random_predual(space, self.spec(), max(q, 2.0))

    def general(self, space) -> BlockOperator:
        return BlockOperator(space, self.skew(space).entries + 1j * self.skew(space).entries)

    def unitary(self, space, magnitude=None):
        return exp_skew(self.skew(space, magnitude))

    def off_diagonal(self, space, magnitude=None) -> SkewHermitian:
        return orb.tangent_representative(self.skew(space, magnitude))

    def block_diagonal(self, space) -> SkewHermitian:
        return SkewHermitian(space, self.skew(space).diagonal_part().entries)


def _norm(*ops) -> float:
    return max(o.norm() for o in ops)


def _max_abs(x) -> float:
    x = x.entries if isinstance(x, BlockOperator) else np.asarray(x)
    return float(np.max(np.abs(x), initial=0.0))


# suites -----------------------------------------------------------------------


def suite_trace(space, rng: TrialRng, cfg) -> dict:
    n = space.n
    p, q = cfg.p, conjugate(cfg.p)
    a, alpha = rng.general(space), rng.general(space)
    cyc = abs(restricted_trace(a @ alpha) - restricted_trace(alpha @ a))
    g = rng.unitary(space)
    gi = g.inverse()
    scale = n * _norm(a) * _norm(alpha)
    conj1 = abs(trace_pairing(alpha, g @ a @ gi) - trace_pairing(gi @ alpha @ g, a))
    conj2 = abs(restricted_trace(g @ alpha @ gi) - restricted_trace(alpha))
    rho, x = rng.predual(space, q), rng.skew(space)
    holder = abs(pairing(rho, x)) / (l1q_norm(rho, q) * restricted_norm(x, p))
    norms = [schatten_norm(a, t) for t in (1.0, 1.5, 2.0, 4.0, math.inf)]
    mono = max(max(0.0, b - c) for c, b in zip(norms, norms[1:]))
    return {
        "cyclicity": ratio(cyc, 1e-11 * scale),
        "conjugation_pairing": ratio(conj1, 1e-10 * scale),
        "conjugation_trace": ratio(conj2, 1e-10 * n * _norm(alpha)),
        "holder_bound": holder,
        "schatten_monotone": ratio(mono, 1e-12 * norms[0]),
    }


def suite_duality(space, rng: TrialRng, cfg, first_trial: bool) -> dict:
    n = space.n
    rho, a = rng.predual(space), rng.skew(space)
    raw = trace_pairing(rho, a)
    scale = n * _norm(rho) * _norm(a)
    g = rng.unitary(space)
    gi = g.inverse()
    compat = abs(pairing(gi @ rho @ g, a) - pairing(rho, g @ a @ gi))
    out = {
        "pairing_reality": ratio(raw.imag, 1e-10 * scale),
        "pairing_conjugation": ratio(compat, 1e-10 * scale),
        "pairing_symmetry": ratio(abs(raw - restricted_trace(a @ rho)), 1e-11 * scale),
    }
    if first_trial:
        basis = skew_basis(space)
        mix = rng.generator.standard_normal((len(basis), len(basis)))
        stacked = np.array([e.entries for e in basis])
        mixed = [SkewHermitian(space, m) for m in np.tensordot(mix, stacked, axes=1)]
        gram = pairing_gram(basis, mixed)
        rank = numerical_rank(gram, 1e-10)
        out["gram_full_rank"] = 0.0 if rank == n * n else math.inf
    return out


def suite_cocycle(space, rng: TrialRng, cfg) -> dict:
    p = cfg.p
    a, b, c = rng.skew(space), rng.skew(space), rng.skew(space)
    sc = _norm(a, b, c)
    d = make_d(space)
    s_ab = ext.schwinger(a, b, p)
    two_path = abs(s_ab - ext.schwinger_blocks(a, b).real)
    skew = abs(s_ab + ext.schwinger(b, a, p))
    cyclic = (ext.schwinger(commutator(a, b), c, p) + ext.schwinger(commutator(c, a), b, p)
              + ext.schwinger(commutator(b, c), a, p))
    reality = restricted_trace(a @ commutator(d, b)).imag
    bound = abs(s_ab) / (2 * restricted_norm(a, p) * restricted_norm(b, p))
    x, y, z = (ext.ExtendedElement(o, t) for o, t in zip((a, b, c), rng.generator.standard_normal(3)))
    jac = _jacobi_residual(x, y, z, p)
    mu = rng.predual(space)
    gamma = cfg.gamma
    m = ext.ExtendedElement(mu, gamma)
    rel = ext.extended_pairing(ext.coadjoint(x, m), y) + ext.extended_pairing(m, ext.extended_bracket(x, y, p))
    msc = max(sc, _norm(mu), abs(gamma), 1.0)
    f, g = ext.linear_functional(a), ext.linear_functional(b)
    pb = ext.poisson_bracket(f, g, m, p) - ext.extended_pairing(m, ext.extended_bracket(x, y, p))
    return {
        "schwinger_two_path": ratio(two_path, 1e-12 * sc**2),
        "schwinger_skew": ratio(skew, 1e-12 * sc**2),
        "schwinger_cyclic": ratio(cyclic, 1e-10 * sc**3),
        "schwinger_reality": ratio(reality, 1e-11 * sc**2),
        "continuity_bound": bound,
        "extended_jacobi": ratio(jac, 1e-9 * max(sc, 1.0) ** 3),
        "coadjoint_relation": ratio(rel, 1e-9 * msc**3),
        "poisson_linear": ratio(pb, 1e-8 * msc**3),
    }


def _jacobi_residual(x, y, z, p) -> float:
    br = ext.extended_bracket
    terms = [br(br(x, y, p), z, p), br(br(z, x, p), y, p), br(br(y, z, p), x, p)]
    op = sum(t.operator.entries for t in terms)
    return max(_max_abs(op), abs(sum(t.scalar for t in terms)))


def suite_grassmann(space, rng: TrialRng, cfg) -> dict:
    p = cfg.p
    hp = gr.h_plus(space)
    v = gr.act(rng.unitary(space), hp)
    w = gr.chart_inverse(gr.ChartValue(v, 0.5 * rng.skew(space).mp))
    roundtrip = gr.projection_distance(gr.chart_inverse(gr.chart_forward(v, w)), w)
    e = gr.chart_inverse(gr.ChartValue(v, 0.3 * rng.skew(space).mp))
    u = gr.chart_inverse(gr.ChartValue(e, 0.3 * rng.skew(space).mp))
    a_e = gr.ChartValue(e, 0.3 * rng.skew(space).mp)
    out = {"chart_roundtrip": ratio(roundtrip, 1e-9)}
    try:
        psi = gr.transition(v, e, a_e)
        composed = gr.chart_forward(v, gr.chart_inverse(a_e))
        out["transition_vs_composed"] = ratio(_max_abs(psi.graph_op - composed.graph_op), 1e-9)
        triple = gr.transition(u, v, psi)
        direct = gr.transition(u, e, a_e)
        out["triple_overlap"] = ratio(_max_abs(triple.graph_op - direct.graph_op), 1e-8)
    except NotInChartDomain:
        out["transition_vs_composed"] = 0.0
        out["triple_overlap"] = 0.0
    same = gr.transition(v, v, gr.ChartValue(v, a_e.graph_op))
    out["transition_identity"] = 0.0 if np.array_equal(same.graph_op, a_e.graph_op) else math.inf
    target = gr.act(rng.unitary(space), hp)
    carried = gr.act(gr.carrying_unitary(target), hp)
    out["transitivity"] = ratio(gr.projection_distance(carried, target), 1e-9)
    g = rng.unitary(space)
    excess = gr.membership_defect(gr.act(g, hp), p) - schatten_norm(commutator(g, make_d(space)), p)
    out["projection_characterization"] = max(0.0, excess) / 1e-9
    dual = (gr.orthocomplement(w).projection - pr_minus(space)) + (w.projection - pr_plus(space))
    out["dual_symmetry"] = ratio(_max_abs(dual), 1e-12)
    shift = int(rng.generator.integers(-1, 2))
    k = min(max(space.n_plus + shift, 1), space.n - 1)
    w_k = gr.point_from_frame(space, np.eye(space.n)[:, :k] + 0.3 * rng.general(space).entries[:, :k])
    invariant = gr.relative_index(gr.act(g, w_k)) == gr.relative_index(w_k) == k - space.n_plus
    out["index_invariance"] = 0.0 if invariant else math.inf
    out["fredholm_parametrix"] = _fredholm_violation(rng)
    return out


def _fredholm_violation(rng: TrialRng) -> float:
    """Parametrix rank bound on a 6x6 instance with a planted defect.

    Returns 0 when rank(AB - I) <= rank(P) + 2 defect(A), inf otherwise.
    """
    space = PolarizedSpace(3, 3)
    gen = rng.generator
    kdef = int(gen.integers(0, 3))
    u, _ = np.linalg.qr(gen.standard_normal((6, 6)) + 1j * gen.standard_normal((6, 6)))
    w, _ = np.linalg.qr(gen.standard_normal((6, 6)) + 1j * gen.standard_normal((6, 6)))
    s = np.concatenate([gen.uniform(0.5, 2.0, 6 - kdef), np.zeros(kdef)])
    a = BlockOperator(space, (u * s) @ w.conj().T)
    t = gr.fredholm_regularizer(a)
    r = int(gen.integers(0, 3))
    low = gen.standard_normal((6, r)) @ gen.standard_normal((r, 6)) if r else np.zeros((6, 6))
    b = t.entries + low
    eye = np.eye(6)
    rank_p = numerical_rank(b @ a.entries - eye, 1e-8)
    rank_q = numerical_rank(a.entries @ b - eye, 1e-8)
    return 0.0 if rank_q <= rank_p + 2 * gr.defect_rank(a) else math.inf


def suite_orbit(space, rng: TrialRng, cfg) -> dict:
    p, q, gamma = cfg.p, conjugate(cfg.p), cfg.gamma
    g1, g2 = rng.unitary(space), rng.unitary(space)
    sig = orb.sigma(g1 @ g2).entries - (g1.entries @ orb.sigma(g2).entries @ g1.entries.conj().T
                                        + orb.sigma(g1).entries)
    mu = rng.predual(space)
    m = orb.OrbitPoint(mu, gamma)
    lhs = orb.affine_action(g1, orb.affine_action(g2, m))
    rhs = orb.affine_action(BlockOperator(space, g1.entries @ g2.entries), m)
    msc = max(1.0, _norm(mu), abs(gamma))
    hp = gr.h_plus(space)
    w = gr.act(g2, hp)
    eq = orb.orbit_embed(gr.act(g1, w), gamma).mu - orb.affine_action(g1, orb.orbit_embed(w, gamma)).mu
    on_orbit = orb.affine_action(g1, orb.base_point(space, gamma))
    idem = max(orb.orbit_defect(on_orbit), orb.orbit_defect(orb.orbit_embed(w, gamma)))
    gen = rng.skew(space)
    eps = 1e-6
    base = orb.base_point(space, gamma)
    fd = (orb.affine_action(exp_skew(eps * gen), base).mu.entries
          - orb.affine_action(exp_skew(-eps * gen), base).mu.entries) / (2 * eps)
    coad = ext.coadjoint(ext.ExtendedElement(gen, 0.0), ext.ExtendedElement(base.mu, gamma)).operator.entries
    infinitesimal = _max_abs(fd - coad) / max(_max_abs(coad), 1e-300)
    kblock = exp_skew(rng.block_diagonal(space))
    kpert = exp_skew(SkewHermitian(space, rng.block_diagonal(space).entries + rng.off_diagonal(space).entries))
    sg = orb.sigma(g1)
    dg = schatten_norm(commutator(g1, make_d(space)), p) * schatten_norm(commutator(g1, make_d(space)), q)
    diag_l1 = schatten_norm(sg.pp, 1) + schatten_norm(sg.mm, 1)
    return {
        "sigma_cocycle": ratio(_max_abs(sig), 1e-10),
        "action_composition": ratio(_max_abs(lhs.mu.entries - rhs.mu.entries), 1e-9 * msc),
        "equivariance": ratio(_max_abs(eq), 1e-9 * max(1.0, abs(gamma))),
        "orbit_idempotency": ratio(idem, 1e-9),
        "infinitesimal": ratio(infinitesimal, 1e-4),
        "isotropy_block_diagonal": ratio(orb.isotropy_defect(kblock, gamma), 1e-10),
        "isotropy_perturbed": ratio(1e-6, orb.isotropy_defect(kpert, gamma)),
        "sigma_diagonal_trace_class": diag_l1 / dg if dg > 0 else ratio(diag_l1, 0.0),
    }


def suite_symplectic(space, rng: TrialRng, cfg, first_trial: bool) -> dict:
    p, gamma = cfg.p, cfg.gamma
    a, b, c = rng.skew(space), rng.skew(space), rng.skew(space)
    sc = _norm(a, b)
    omega = orb.homogeneous_form(a, b, p)
    s_ab = ext.schwinger(a, b, p)
    kks = orb.kks_form(a, b, gamma, p)
    k = rng.block_diagonal(space)
    a_shift = SkewHermitian(space, a.entries + k.entries)
    independent = (orb.kks_form(a_shift, b, gamma, p) == kks
                   and np.array_equal(orb.fundamental_vector(a_shift, gamma).entries,
                                      orb.fundamental_vector(a, gamma).entries))
    g, h = rng.unitary(space), rng.unitary(space)
    ta, tb = orb.tangent_representative(a), orb.tangent_representative(b)
    x, y = g @ a, g @ b
    push = orb.pushforward_form(h @ g, h @ x, h @ y, p) - orb.pushforward_form(g, x, y, p)
    tc = orb.tangent_representative(c)
    cyc = (ext.schwinger(commutator(ta, tb), tc, p) + ext.schwinger(commutator(tc, ta), tb, p)
           + ext.schwinger(commutator(tb, tc), ta, p))
    out = {
        "omega_vs_schwinger": ratio(omega + 0.5 * s_ab, 1e-11 * sc**2),
        "kks_equals_gamma_s": 0.0 if kks == gamma * s_ab else math.inf,
        "representative_independence": 0.0 if independent else math.inf,
        "kks_vs_omega": ratio(kks + 2 * gamma * omega, 1e-10 * max(1.0, abs(gamma) * sc**2)),
        "pushforward_invariance": ratio(push, 1e-10 * max(1.0, sc**2)),
        "closedness_on_mp": ratio(cyc, 1e-10 * max(1.0, _norm(ta, tb, tc)) ** 3),
    }
    if first_trial:
        mp = np.array([e.mp.reshape(-1) for e in orb.mp_basis(space)])
        gram = 2.0 * np.imag(mp.conj() @ mp.T)
        rank = numerical_rank(gram, 1e-10)
        out["omega_gram_rank"] = 0.0 if rank == 2 * space.n_plus * space.n_minus else math.inf
    return out


def convergence_trial(sizes, rng: TrialRng, cfg) -> dict:
    """Final successive relative change of each tracked quantity, as a ratio to 0.05."""
    seed = rng.spec().seed
    spec = EnsembleSpec(seed, cfg.decay_alpha, cfg.magnitude)
    per = [quantity_values(PolarizedSpace(*s), spec, cfg.p) for s in sizes]
    checks = {}
    for name in per[0]:
        changes = relative_changes([v[name] for v in per])
        checks[f"{name}_final_change"] = changes[-1] / CONVERGING_TOL if changes else 0.0
    return checks


SUITE_FUNCTIONS = {
    "trace": suite_trace,
    "duality": suite_duality,
    "cocycle": suite_cocycle,
    "grassmann": suite_grassmann,
    "orbit": suite_orbit,
    "symplectic": suite_symplectic,
}


def run_suite(name: str, suite_index: int, cfg) -> SuiteReport:
    threshold = 1.0
    checks: dict = {}
    per_size: dict = {tuple(s): 0.0 for s in cfg.sizes}

    def record(size, values):
        for key, val in values.items():
            checks[key] = max(checks.get(key, 0.0), float(val))
        per_size[size] = max(per_size[size], max(values.values(), default=0.0))

    for trial in range(cfg.trials):
        tseed = child_seed(cfg.seed, suite_index, trial)
        if name == "convergence":
            rng = TrialRng(tseed, cfg.decay_alpha, cfg.magnitude, cfg.p)
            record(tuple(cfg.sizes[-1]), convergence_trial(cfg.sizes, rng, cfg))
            continue
        for j, size in enumerate(cfg.sizes):
            space = PolarizedSpace(*size)
            rng = TrialRng(child_seed(tseed, j), cfg.decay_alpha, cfg.magnitude, cfg.p)
            fn = SUITE_FUNCTIONS[name]
            if name in ("duality", "symplectic"):
                values = fn(space, rng, cfg, trial == 0)
            else:
                values = fn(space, rng, cfg)
            record(tuple(size), values)
    worst = max(per_size.values(), default=0.0)
    return SuiteReport(
        suite=name,
        trials=cfg.trials,
        max_violation=worst,
        threshold=threshold,
        passed=bool(worst <= threshold),
        per_size_stats=[(s, v) for s, v in per_size.items()],
        checks=checks,
    )
