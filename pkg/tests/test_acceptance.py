"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""

import time

import numpy as np
import pytest

from conftest import predual, skew, unitary
from resgrass import (BlockOperator, ExperimentConfig, ExtendedElement, OrbitPoint, PolarizedSpace, SkewHermitian,
                      chart_forward, chart_inverse, coadjoint, commutator, exp_skew, extended_bracket,
                      extended_pairing, h_plus, homogeneous_form, kks_form, make_d, membership_defect,
                      orbit_embed, restricted_norm, restricted_trace, schwinger, sigma, transition)
from resgrass.convergence import convergence_study, relative_changes
from resgrass.extension import (SmoothFunctional, central_functional, fd_gradient, gradient, linear_functional,
                                poisson_bracket, schwinger_blocks)
from resgrass.grassmannian import (ChartValue, act, carrying_unitary, defect_rank, fredholm_regularizer,
                                   projection_distance)
from resgrass.orbit import (affine_action, base_point, fundamental_vector, isotropy_defect, mp_basis, orbit_defect,
                            reconstruct_projection, tangent_representative)
from resgrass.schatten import numerical_rank, schatten_norm, trace_pairing

SIZES = ((4, 4), (8, 8), (16, 16))
START = time.perf_counter()


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title} ({detail})")
        assert ok, detail

    return emit


def general(space, rng):
    shape = (space.n, space.n)
    return BlockOperator(space, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def worst(pairs):
    """max of residual / allowed over (residual, allowed) pairs."""
    return max((abs(r) / a if r else 0.0) for r, a in pairs)


def test_01_trace_cyclicity(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    pairs = []
    for size in SIZES:
        space = PolarizedSpace(*size)
        for _ in range(200):
            a, alpha = general(space, rng), general(space, rng)
            res = restricted_trace(a @ alpha) - restricted_trace(alpha @ a)
            pairs.append((res, 1e-11 * a.norm() * alpha.norm() * space.n))
    elapsed = time.perf_counter() - t0
    ratio = worst(pairs)
    report(1, "restricted-trace cyclicity", ratio <= 1 and elapsed < 10,
           f"{len(pairs)} pairs, worst ratio {ratio:.2e}, {elapsed:.2f}s")


def test_02_conjugation_invariance(report):
    pairs = []
    for j in range(200):
        space = PolarizedSpace(*SIZES[j % 3])
        g, alpha, a = unitary(space, 3 * j), predual(space, 3 * j + 1), skew(space, 3 * j + 2)
        gi = g.inverse()
        scale = space.n * alpha.norm() * a.norm()
        pairs.append((trace_pairing(alpha, g @ a @ gi) - trace_pairing(gi @ alpha @ g, a), 1e-10 * scale))
        pairs.append((restricted_trace(g @ alpha @ gi) - restricted_trace(alpha), 1e-10 * space.n * alpha.norm()))
    ratio = worst(pairs)
    report(2, "conjugation invariance", ratio <= 1, f"200 samples, worst ratio {ratio:.2e}")


def test_03_schwinger_cocycle(report):
    two_path, cyclic, reality, continuity, skew_exact = [], [], [], 0, True
    d_cache = {}
    for j in range(200):
        space = PolarizedSpace(*SIZES[j % 3])
        d = d_cache.setdefault(space, make_d(space))
        a, b, c = skew(space, 3 * j), skew(space, 3 * j + 1), skew(space, 3 * j + 2)
        sc = max(a.norm(), b.norm(), c.norm())
        s_ab = schwinger(a, b)
        skew_exact &= s_ab == -schwinger(b, a)
        two_path.append((s_ab - schwinger_blocks(a, b).real, 1e-12 * sc**2))
        cyc = schwinger(commutator(a, b), c) + schwinger(commutator(c, a), b) + schwinger(commutator(b, c), a)
        cyclic.append((cyc, 1e-10 * sc**3))
        reality.append((restricted_trace(a @ commutator(d, b)).imag, 1e-11 * sc**2))
        continuity += abs(s_ab) > 2 * restricted_norm(a, 2) * restricted_norm(b, 2)
    s11 = PolarizedSpace(1, 1)
    anchored = schwinger(SkewHermitian(s11, [[0, -1], [1, 0]]), SkewHermitian(s11, [[0, 1j], [1j, 0]]))
    ratios = [worst(two_path), worst(cyclic), worst(reality)]
    ok = skew_exact and max(ratios) <= 1 and continuity == 0 and abs(anchored + 4) <= 1e-12
    report(3, "Schwinger cocycle", ok,
           f"two-path {ratios[0]:.2e}, cyclic {ratios[1]:.2e}, reality {ratios[2]:.2e}, "
           f"continuity violations {continuity}, s = {anchored:.15g}")


def test_04_extended_jacobi_and_coadjoint(report):
    rng = np.random.default_rng(4)
    pairs = []
    for j in range(200):
        space = PolarizedSpace(*SIZES[j % 3])
        x, y, z = (ExtendedElement(skew(space, 5 * j + k), rng.standard_normal()) for k in range(3))
        sc = max(1.0, x.operator.norm(), y.operator.norm(), z.operator.norm())
        br = extended_bracket
        terms = [br(br(x, y), z), br(br(z, x), y), br(br(y, z), x)]
        op = np.max(np.abs(sum(t.operator.entries for t in terms)))
        pairs.append((max(op, abs(sum(t.scalar for t in terms))), 1e-9 * sc**3))
        m = ExtendedElement(predual(space, 5 * j + 3), rng.uniform(0.5, 2.0))
        msc = max(sc, m.operator.norm(), abs(m.scalar))
        rel = extended_pairing(coadjoint(x, m), y) + extended_pairing(m, br(x, y))
        pairs.append((rel, 1e-9 * msc**3))
    ratio = worst(pairs)
    report(4, "extended Jacobi and coadjoint relation", ratio <= 1, f"200 triples/pairs, worst ratio {ratio:.2e}")


def test_05_atlas(report):
    roundtrip, trans, triple, identity_exact = [], [], [], True
    for j in range(100):
        space = PolarizedSpace(*SIZES[j % 3])
        v = act(unitary(space, 7 * j), h_plus(space))
        w = chart_inverse(ChartValue(v, 0.5 * skew(space, 7 * j + 1).mp))
        roundtrip.append((projection_distance(chart_inverse(chart_forward(v, w)), w), 1e-9))
        e = chart_inverse(ChartValue(v, 0.3 * skew(space, 7 * j + 2).mp))
        u = chart_inverse(ChartValue(e, 0.3 * skew(space, 7 * j + 3).mp))
        a = ChartValue(e, 0.3 * skew(space, 7 * j + 4).mp)
        psi = transition(v, e, a)
        trans.append((np.max(np.abs(psi.graph_op - chart_forward(v, chart_inverse(a)).graph_op)), 1e-9))
        triple.append((np.max(np.abs(transition(u, v, psi).graph_op - transition(u, e, a).graph_op)), 1e-8))
        identity_exact &= np.array_equal(transition(e, e, a).graph_op, a.graph_op)
    ratios = [worst(roundtrip), worst(trans), worst(triple)]
    report(5, "Grassmannian atlas", max(ratios) <= 1 and identity_exact,
           f"roundtrip {ratios[0]:.2e}, transition {ratios[1]:.2e}, triple {ratios[2]:.2e}, "
           f"psi_VV exact {identity_exact}")


def test_06_transitivity_and_projection(report):
    dist, excess = [], []
    for j in range(100):
        space = PolarizedSpace(*SIZES[j % 3])
        g = unitary(space, 11 * j)
        w = act(g, h_plus(space))
        dist.append((projection_distance(act(carrying_unitary(w), h_plus(space)), w), 1e-9))
        bound = schatten_norm(commutator(g, make_d(space)), 2)
        excess.append(membership_defect(w, 2) - bound)
    ratio = worst(dist)
    ok = ratio <= 1 and max(excess) <= 1e-9
    report(6, "transitivity and projection characterization", ok,
           f"distance ratio {ratio:.2e}, worst excess {max(excess):.2e}")


def test_07_fredholm_regularizer(report):
    rng = np.random.default_rng(7)
    space = PolarizedSpace(3, 3)
    violations, planted = 0, []
    for _ in range(100):
        kdef = int(rng.integers(0, 3))
        u, _ = np.linalg.qr(rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6)))
        v, _ = np.linalg.qr(rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6)))
        s = np.concatenate([rng.uniform(0.5, 2.0, 6 - kdef), np.zeros(kdef)])
        a = BlockOperator(space, (u * s) @ v.conj().T)
        r = int(rng.integers(0, 3))
        low = (rng.standard_normal((6, r)) @ rng.standard_normal((r, 6))) if r else np.zeros((6, 6))
        b = fredholm_regularizer(a).entries + low
        rank_p = numerical_rank(b @ a.entries - np.eye(6), 1e-8)
        rank_q = numerical_rank(a.entries @ b - np.eye(6), 1e-8)
        planted.append(defect_rank(a) == kdef)
        violations += rank_q > rank_p + 2 * defect_rank(a)
    report(7, "Fredholm regularizer", violations == 0 and all(planted),
           f"100 instances, {violations} violations, planted defects recovered {all(planted)}")


def test_08_affine_action(report):
    cocycle, composition = [], []
    for j in range(200):
        space = PolarizedSpace(*SIZES[j % 3])
        g1, g2 = unitary(space, 13 * j), unitary(space, 13 * j + 1)
        lhs = sigma(g1 @ g2).entries
        rhs = g1.entries @ sigma(g2).entries @ g1.entries.conj().T + sigma(g1).entries
        cocycle.append((np.max(np.abs(lhs - rhs)), 1e-9))
        m = OrbitPoint(predual(space, 13 * j + 2), 1.0)
        sc = max(1.0, m.mu.norm())
        res = affine_action(g1, affine_action(g2, m)).mu.entries - affine_action(g1 @ g2, m).mu.entries
        composition.append((np.max(np.abs(res)), 1e-9 * sc))
    block, perturbed = [], []
    for j in range(50):
        space = PolarizedSpace(*SIZES[j % 3])
        diag = skew(space, 17 * j).diagonal_part().entries
        block.append(isotropy_defect(exp_skew(SkewHermitian(space, diag)), 1.0))
        off = tangent_representative(skew(space, 17 * j + 1)).entries
        perturbed.append(isotropy_defect(exp_skew(SkewHermitian(space, diag + off)), 1.0))
    ratios = [worst(cocycle), worst(composition)]
    ok = max(ratios) <= 1 and max(block) <= 1e-10 and min(perturbed) > 1e-6
    report(8, "sigma cocycle and affine action", ok,
           f"cocycle {ratios[0]:.2e}, composition {ratios[1]:.2e}, "
           f"isotropy block max {max(block):.1e}, perturbed min {min(perturbed):.1e}")


def test_09_orbit_identification(report):
    equiv, idem, infin = [], [], []
    eps = 1e-6
    for j in range(100):
        space = PolarizedSpace(*SIZES[j % 3])
        gamma = 0.5 + (j % 5) * 0.5
        g, h = unitary(space, 19 * j), unitary(space, 19 * j + 1)
        w = act(h, h_plus(space))
        res = orbit_embed(act(g, w), gamma).mu.entries - affine_action(g, orbit_embed(w, gamma)).mu.entries
        equiv.append(np.max(np.abs(res)) / gamma)
        m = orbit_embed(w, gamma)
        idem.append(max(orbit_defect(m), np.max(np.abs(reconstruct_projection(m).entries - w.projection.entries))))
        a = skew(space, 19 * j + 2)
        base = base_point(space, gamma)
        fd = (affine_action(exp_skew(a * eps), base).mu.entries
              - affine_action(exp_skew(a * -eps), base).mu.entries) / (2 * eps)
        exact = coadjoint(ExtendedElement(a), ExtendedElement(base.mu, gamma)).operator.entries
        infin.append(np.max(np.abs(fd - exact)) / np.max(np.abs(exact)))
    ok = max(equiv) <= 1e-9 and max(idem) <= 1e-9 and max(infin) <= 1e-4
    report(9, "orbit identification", ok,
           f"equivariance {max(equiv):.2e}, idempotency {max(idem):.2e}, infinitesimal {max(infin):.2e}")


def test_10_symplectic_forms(report):
    two_path, kks_rel, exact, independent = [], [], True, True
    for j in range(200):
        space = PolarizedSpace(*SIZES[j % 3])
        gamma = (-1) ** j * (0.25 + j % 4)
        a, b = skew(space, 23 * j), skew(space, 23 * j + 1)
        sc = max(a.norm(), b.norm())
        omega = homogeneous_form(a, b)
        s_ab = schwinger(a, b)
        two_path.append((omega + 0.5 * s_ab, 1e-11 * sc**2))
        kks = kks_form(a, b, gamma)
        exact &= kks == gamma * s_ab
        kks_rel.append((kks + 2 * gamma * omega, 1e-10 * max(1.0, abs(gamma) * sc**2)))
        k = SkewHermitian(space, skew(space, 23 * j + 2).diagonal_part().entries)
        independent &= kks_form(a + k, b, gamma) == kks
        independent &= np.array_equal(fundamental_vector(a + k, gamma).entries, fundamental_vector(a, gamma).entries)
    ranks_ok = True
    for size in SIZES + ((1, 1), (2, 5)):
        space = PolarizedSpace(*size)
        mp = np.array([e.mp.reshape(-1) for e in mp_basis(space)])
        gram = 2.0 * np.imag(mp.conj() @ mp.T)
        ranks_ok &= numerical_rank(gram) == 2 * space.n_plus * space.n_minus
    ratios = [worst(two_path), worst(kks_rel)]
    ok = max(ratios) <= 1 and exact and independent and ranks_ok
    report(10, "symplectic forms", ok,
           f"Omega vs s {ratios[0]:.2e}, omega vs Omega {ratios[1]:.2e}, omega = gamma s exact {exact}, "
           f"representative independent {independent}, Gram ranks {ranks_ok}")


def test_11_poisson_bracket(report):
    space = PolarizedSpace(2, 2)
    linear, grads, casimir = [], [], []

    def cubic():
        def grad(m):
            mu = m.operator.entries
            return SkewHermitian(m.space, -3j * mu @ mu), 0.0

        return SmoothFunctional(lambda m: np.trace(np.linalg.matrix_power(m.operator.entries, 3)).imag, grad)

    for j in range(20):
        a, b = skew(space, 29 * j), skew(space, 29 * j + 1)
        m = ExtendedElement(predual(space, 29 * j + 2), 0.5 + j % 3)
        lhs = poisson_bracket(linear_functional(a), linear_functional(b), m)
        rhs = extended_pairing(m, extended_bracket(ExtendedElement(a), ExtendedElement(b)))
        fa, fb = (SmoothFunctional(linear_functional(x).evaluate) for x in (a, b))
        linear.append(max(abs(lhs - rhs), abs(poisson_bracket(fa, fb, m) - rhs)))
        for f in (cubic(), linear_functional(a, 1.5)):
            g_fd, _ = fd_gradient(f, m)
            g_an, _ = gradient(f, m)
            grads.append(np.max(np.abs(g_fd.entries - g_an.entries)) / np.max(np.abs(g_an.entries)))
        for phi in (central_functional(np.sin, np.cos), central_functional(np.exp)):
            casimir.append(abs(poisson_bracket(phi, cubic(), m)))
            casimir.append(abs(poisson_bracket(phi, linear_functional(b), m)))
    ok = max(linear) <= 1e-8 and max(grads) <= 1e-5 and max(casimir) <= 1e-9
    report(11, "Poisson bracket", ok,
           f"linear {max(linear):.2e}, gradient rel {max(grads):.2e}, Casimir {max(casimir):.2e}")


def test_12_convergence_study(report):
    sizes = ((8, 8), (16, 16), (32, 32))
    finals, statuses = {}, []
    for seed in range(5):
        rows = convergence_study(ExperimentConfig(sizes=sizes, decay_alpha=2.0, p=2.0, seed=seed))
        for name in {r.quantity for r in rows}:
            values = [r.value for r in rows if r.quantity == name]
            finals[name] = max(finals.get(name, 0.0), relative_changes(values)[-1])
        flat = convergence_study(ExperimentConfig(sizes=sizes, decay_alpha=0.0, p=1.0, seed=seed))
        statuses.append(next(r.status for r in flat if r.quantity == "membership_defect"))
    elapsed = time.perf_counter() - START
    ok = max(finals.values()) < 0.05 and all(s == "diverging" for s in statuses) and elapsed < 300
    detail = ", ".join(f"{k} {v:.3f}" for k, v in sorted(finals.items()))
    report(12, "convergence study", ok,
           f"final changes {detail}; flat family {set(statuses)}; acceptance run {elapsed:.1f}s")
