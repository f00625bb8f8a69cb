"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run under pytest (the lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import math

import numpy as np

from superint import catalog, dynamics, reduction
from superint.fields import (
    PhaseField,
    PhasePoint,
    Weights,
    ZField,
    coordinate,
    evaluate_batch,
    gradient_batch,
    poisson_bracket,
    z_bracket,
)
from superint.verifier import (
    SampleSpec,
    check_commutation,
    corrupted,
    rank_from_gradients,
    sample_arrays,
    verify,
)

try:
    from conftest import record_acceptance
except ImportError:  # run as a script
    def record_acceptance(line):
        pass

N_PAIRS = ((1, 1), (1, 2), (2, 3))
SEED = 20240611


def _report(number: int, ok: bool, detail: str) -> bool:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    record_acceptance(line)
    return ok


def _rank_fraction(fields, n, expected, count=100, seed=SEED):
    Q, P = sample_arrays(SampleSpec(count, seed), n)
    ranks = rank_from_gradients([gradient_batch(f, Q, P) for f in fields])
    return float(np.mean(ranks == expected)), int(ranks.min()), int(ranks.max())


# ---------------------------------------------------------------------------

def criterion_1():
    """Every declared integral commutes with H at 1000 points, tol 1e-9."""
    models = [catalog.coulomb6(1.0), catalog.coulomb3_reduced(1.0, 0.3, 0.5, 0.7)]
    for n1, n2 in N_PAIRS:
        models.append(catalog.oscillator4(1.0, n1, n2))
        models.append(catalog.oscillator2_reduced(1.0, n1, n2, 0.4, 0.9))
    worst, ok = 0.0, True
    for m in models:
        res = check_commutation(m, SampleSpec(1000, SEED), 1e-9)
        top = max(r.max_residual for r in res)
        worst = max(worst, top)
        ok &= top <= 1e-9
    return ok, f"{len(models)} models, worst normalized residual {worst:.2e} (tol 1e-9)"


def criterion_2():
    """Independence ranks: coulomb3 {H,I1,I2,I3,T} = 5, oscillator2 {E1,E2,Q} = 3, oscillator4 redundant set = 5."""
    c3 = catalog.coulomb3_reduced()
    frac_c, lo_c, hi_c = _rank_fraction(
        [c3.hamiltonian] + [c3.integral(x).field for x in ("I1", "I2", "I3", "T")], 3, 5
    )
    ok = frac_c >= 0.95
    parts = [f"coulomb3 {{H,I1,I2,I3,T}} rank range [{lo_c},{hi_c}], fraction at 5 = {frac_c:.2f}"]
    for n1, n2 in N_PAIRS:
        o2 = catalog.oscillator2_reduced(1.0, n1, n2, 0.4, 0.9)
        f2, _, _ = _rank_fraction([o2.integral(x).field for x in ("E1", "E2", "Q")], 2, 3)
        o4 = catalog.oscillator4(1.0, n1, n2)
        f4, _, _ = _rank_fraction([i.field for i in catalog.rotation_invariant_integrals(o4)], 4, 5)
        ok &= f2 >= 0.95 and f4 >= 0.95
        parts.append(f"n={n1},{n2}: oscillator2 {f2:.2f}, oscillator4 {f4:.2f}")
    return ok, "; ".join(parts)


def criterion_2_supplement():
    """T is a function of H and I1..I3; replacing it by the planar T1 exhibits five independent integrals."""
    c3 = catalog.coulomb3_reduced()
    frac, lo, _ = _rank_fraction([c3.hamiltonian] + [c3.integral(x).field for x in ("I1", "I2", "I3", "T1")], 3, 5)
    Q, P = sample_arrays(SampleSpec(1000, SEED), 3)
    g, k = c3.params["gamma"], np.array([c3.params[f"k{i}"] for i in (1, 2, 3)])
    val = lambda label: evaluate_batch(c3.integral(label).field, Q, P)
    h = evaluate_batch(c3.hamiltonian, Q, P)
    identity = g * g + 2.0 * h * (val("I1") + val("I2") + val("I3") + 2.0 * k.sum())
    err = float(np.max(np.abs(val("T") - identity) / (1.0 + np.abs(val("T")))))
    return frac >= 0.95 and err <= 1e-10, (
        f"{{H,I1,I2,I3,T1}} fraction at rank 5 = {frac:.2f} (min {lo}); "
        f"T = gamma^2 + 2H(I1+I2+I3+2 sum k) to {err:.1e}"
    )


def criterion_3():
    """Pullback residuals and momentum map at lifted points."""
    worst_quad, worst_T, ok = 0.0, 0.0, True
    for pair in ("coulomb", "oscillator"):
        for r in reduction.reduce_check(pair, samples=200, seed=SEED):
            if r.label in ("T", "T1", "T2", "T3"):
                worst_T = max(worst_T, r.residual, r.angle_spread)
                ok &= r.passed and r.tol <= 1e-8
            elif r.label in ("H", "I1", "I2", "I3", "E1", "E2", "Q1"):
                worst_quad = max(worst_quad, r.residual, r.angle_spread)
                ok &= r.passed and r.tol <= 1e-10
    worst_mm = 0.0
    for rmap in (reduction.ReductionMap.coulomb(0.3, 0.5, 0.7), reduction.ReductionMap.oscillator(0.4, 0.9)):
        Q, P, A = reduction.reduced_samples(rmap, 200, SEED)
        for j in range(A.shape[1]):
            FQ, FP = reduction.lift_batch(rmap, Q, P, A[:, j])
            for fq, fp in zip(FQ, FP):
                mm = reduction.momentum_map(rmap, PhasePoint(fq, fp))
                worst_mm = max(worst_mm, float(np.max(np.abs(mm - rmap.cyclic_momenta()))))
    ok &= worst_mm <= 1e-12
    return ok, (
        f"H/I/E/Q1 worst {worst_quad:.1e} (tol 1e-10), T worst {worst_T:.1e} (tol 1e-8), "
        f"momentum map worst {worst_mm:.1e} (tol 1e-12)"
    )


def criterion_3_gamma_r_variant():
    """Informational: the T variant with gamma/r inside the square, compared with the lifted T1+T2+T3."""
    full, red, rmap, pairs = reduction.build_pair("coulomb")
    lifted_T = dict((lbl, ff) for lbl, ff, _ in pairs)["T"]
    r = reduction.pullback_check(rmap, lifted_T, red.extras["T_gamma_r"], 200, 1e-8, SEED, label="T_gamma_r")
    return r.residual, r.angle_spread


def criterion_4():
    """I_i = 4(E_i^2 - k_i n_i^2 omega^2) at 1000 points."""
    worst = 0.0
    for n1, n2 in N_PAIRS:
        m = catalog.oscillator2_reduced(1.0, n1, n2, 0.4, 0.9)
        Q, P = sample_arrays(SampleSpec(1000, SEED), 2)
        for i, n in ((1, n1), (2, n2)):
            lhs = evaluate_batch(m.integral(f"I{i}").field, Q, P)
            e = evaluate_batch(m.integral(f"E{i}").field, Q, P)
            rhs = 4.0 * (e**2 - m.params[f"k{i}"] * n * n * m.params["omega"] ** 2)
            worst = max(worst, float(np.max(np.abs(lhs - rhs) / (1.0 + np.abs(lhs)))))
    return worst <= 1e-10, f"worst relative deviation {worst:.1e} (tol 1e-10)"


def criterion_5():
    """Second-order integrals for the two special frequency ratios."""
    Q, P = sample_arrays(SampleSpec(1000, SEED), 2)
    md = catalog.oscillator2_reduced(1.3, 1, 1, 0.4, 0.9)
    w = md.params["omega"]
    e1, e2, q = (evaluate_batch(md.integral(x).field, Q, P) for x in ("E1", "E2", "Q"))
    rd = evaluate_batch(md.integral("Rd").field, Q, P)
    lhs = (4 * e1 * e2 - q) / (2 * w * w)
    err_d = float(np.max(np.abs(lhs - rd) / (1.0 + np.abs(rd))))

    me = catalog.oscillator2_reduced(1.3, 1, 2, 0.4, 0.0)
    w = me.params["omega"]
    e1, e2, q = (evaluate_batch(me.integral(x).field, Q, P) for x in ("E1", "E2", "Q"))
    re = evaluate_batch(me.integral("Re").field, Q, P)
    lhs = (8 * e1**2 * e2 - q) / (8 * w * w) - me.params["k1"] * e2
    err_e = float(np.max(np.abs(lhs - re**2) / (1.0 + re**2)))
    return err_d <= 1e-9 and err_e <= 1e-8, f"n=(1,1) {err_d:.1e} (tol 1e-9); n=(1,2), k2=0 {err_e:.1e} (tol 1e-8)"


def _zfields():
    def z(j):
        return ZField(lambda z, zb: z[j], 4, f"z{j + 1}")

    def zb(j):
        return ZField(lambda z, zb: zb[j], 4, f"zbar{j + 1}")

    inv = catalog.invariant_zfields(1, 2)
    mixed = ZField(lambda z, zb: z[0] * z[2] * zb[1] + 0.5 * zb[3] * zb[3] * z[0], 4, "mixed")
    return [(z(0), zb(0)), (z(1), zb(2)), (inv["xi1"], inv["eta1"]), (inv["Q1"], inv["I2"]),
            (inv["Q1"], inv["Q1bar"]), (mixed, inv["xi3bar"])]


def criterion_6():
    """z-variable bracket equals the canonical bracket under the chart at 100 points."""
    w = Weights((1, 2), 1.0)
    Q, P = sample_arrays(SampleSpec(100, SEED), 4)
    worst = 0.0
    for f, g in _zfields():
        ff, gg = f.on_phase_space(w), g.on_phase_space(w)
        for q, p in zip(Q, P):
            x = PhasePoint(q, p)
            a, b = z_bracket(f, g, x, w), poisson_bracket(ff, gg, x)
            worst = max(worst, abs(a - b) / (1.0 + abs(b)))
    return worst <= 1e-10, f"worst relative deviation {worst:.1e} over 6 pairs (tol 1e-10)"


def _log_slope(f: PhaseField, Q, P, lams=(1e3, 1e4)):
    a = np.abs(evaluate_batch(f, Q, lams[0] * P))
    b = np.abs(evaluate_batch(f, Q, lams[1] * P))
    return np.log(b / a) / math.log(lams[1] / lams[0])


def criterion_7():
    """Momentum orders 2, 2, 2(n1+n2) for E1, E2, Q."""
    worst = 0.0
    Q, P = sample_arrays(SampleSpec(100, SEED), 2)
    for n1, n2 in N_PAIRS:
        m = catalog.oscillator2_reduced(1.0, n1, n2, 0.4, 0.9)
        for label, order in (("E1", 2), ("E2", 2), ("Q", 2 * (n1 + n2))):
            assert m.integral(label).order == order
            slope = np.median(_log_slope(m.integral(label).field, Q, P))
            worst = max(worst, abs(slope - order))
    return worst <= 0.01, f"worst |fitted slope - declared order| {worst:.1e} (tol 0.01)"


OSC_START = PhasePoint([0.9, 0.7], [0.3, -0.4])
COULOMB_PARAMS = dict(gamma=1.0, k1=0.2, k2=0.3, k3=0.4)
COULOMB_START = PhasePoint([2.5, 2.2, 2.8], [0.05, -0.1, 0.08])


def criterion_8():
    """Closed orbits at 2pi/omega for n=(1,2),(2,3); a bound Coulomb recurrence; drift of every integral."""
    ok, parts = True, []
    for n1, n2 in ((1, 2), (2, 3)):
        m = catalog.oscillator2_reduced(1.0, n1, n2, 0.3, 0.0)
        t = dynamics.orbit_closure(m, OSC_START, 7.0, 1e-6)
        hit = t is not None and abs(t - 2 * math.pi) <= 1e-5
        ok &= hit
        parts.append(f"n=({n1},{n2}) t*={'none' if t is None else f'{t:.8f}'} vs 2pi={2 * math.pi:.8f}")
        traj = dynamics.integrate_adaptive(m, OSC_START, 50.0, 1e-10, 1e-12)
        d = max(dynamics.conservation_drift(traj, [i.field for i in m.integrals]).values())
        ok &= d <= 1e-6
        parts.append(f"drift {d:.1e}")
    c3 = catalog.coulomb3_reduced(**COULOMB_PARAMS)
    h0 = float(evaluate_batch(c3.hamiltonian, COULOMB_START.q[None], COULOMB_START.p[None])[0])
    t = dynamics.orbit_closure(c3, COULOMB_START, 200.0, 1e-4)
    ok &= h0 < 0 and t is not None and t <= 200.0
    traj = dynamics.integrate_adaptive(c3, COULOMB_START, 200.0, 1e-10, 1e-12)
    d = max(dynamics.conservation_drift(traj, [i.field for i in c3.integrals]).values())
    ok &= d <= 1e-6
    parts.append(f"coulomb3 H={h0:.4f} t*={'none' if t is None else f'{t:.4f}'} drift {d:.1e}")
    return ok, "; ".join(parts)


def criterion_8_supplement():
    """The barrier halves each radial period: first recurrence at the common period of pi/(n_i omega)."""
    parts, ok = [], True
    for omega, n1, n2, k2 in ((1.0, 1, 2, 0.0), (1.0, 2, 3, 0.0), (1.0, 2, 3, 0.9), (2.0, 1, 2, 0.0)):
        m = catalog.oscillator2_reduced(omega, n1, n2, 0.3, k2)
        # period of coordinate i: pi/(n_i omega) with a barrier, 2pi/(n_i omega) without
        periods = [math.pi / (n1 * omega), (math.pi if k2 > 0 else 2 * math.pi) / (n2 * omega)]
        expected = _common_period(periods, omega)
        t = dynamics.orbit_closure(m, OSC_START, expected * 1.1, 1e-6)
        hit = t is not None and abs(t - expected) <= 1e-5
        ok &= hit
        parts.append(f"omega={omega:g} n=({n1},{n2}) k2={k2:g}: t*={t:.8f} vs {expected:.8f}")
    return ok, "; ".join(parts)


def _common_period(periods, omega):
    # periods are rational multiples of pi/omega with denominators up to 6
    units = [round(p * omega / math.pi * 6) for p in periods]
    return math.lcm(*units) * math.pi / (6 * omega)


def criterion_9():
    """Negative controls: corrupted integral, duplicated gradient, Euler drift."""
    m = catalog.oscillator2_reduced(1.0, 1, 2, 0.4, 0.9)
    bad = corrupted(m, "E1", coordinate("q", 0, 2))
    rep = verify(bad, SampleSpec(1000, SEED), 1e-9)
    bad_res = next(i["max_residual"] for i in rep.integrals if i["label"].startswith("E1"))
    c1 = (not rep.passed) and bad_res > 1e-3

    Q, P = sample_arrays(SampleSpec(100, SEED), 2)
    g = gradient_batch(m.hamiltonian, Q, P)
    c2 = bool(np.all(rank_from_gradients([g, g]) == 1))

    start = PhasePoint([0.9, 0.7], [0.3, -0.4])
    h0 = float(evaluate_batch(m.hamiltonian, start.q[None], start.p[None])[0])
    lf = dynamics.integrate_verlet(m, start, 1000.0, 1e-3, stride=100)
    eu = dynamics.integrate_euler(m, start, 1000.0, 1e-3, stride=100)
    dh_lf = np.abs(lf.values(m.hamiltonian) - h0) / abs(h0)
    h_eu = eu.values(m.hamiltonian)
    dh_eu = np.abs(h_eu - h0) / abs(h0)
    # secular growth: energy error in the last tenth well above the first tenth
    tenth = len(h_eu) // 10
    secular = dh_eu[-tenth:].mean() > 5 * dh_eu[:tenth].mean() and np.all(np.diff(h_eu[::tenth]) > 0)
    c3 = dh_lf.max() <= 1e-5 and secular and dh_eu.max() > 100 * dh_lf.max()
    return c1 and c2 and c3, (
        f"corrupted E1 residual {bad_res:.1e} pass={rep.passed}; duplicated rank 1: {c2}; "
        f"leapfrog max dH/H {dh_lf.max():.1e}, Euler max dH/H {dh_eu.max():.1e}"
    )


# pytest entry points ---------------------------------------------------------

def test_criterion_1_commutation():
    assert _report(1, *criterion_1())


def test_criterion_2_rank():
    ok, detail = criterion_2()
    _report(2, ok, detail)
    s_ok, s_detail = criterion_2_supplement()
    _report(2, s_ok, "(supplement) " + s_detail)
    assert s_ok
    assert ok, detail


def test_criterion_3_reduction():
    ok, detail = criterion_3()
    resid, spread = criterion_3_gamma_r_variant()
    _report(3, ok, detail)
    line = f"criterion 3: INFO  T variant with gamma/r inside the square: residual vs lifted T1+T2+T3 {resid:.2e}, angle spread {spread:.1e}"
    print(line)
    record_acceptance(line)
    assert ok, detail
    assert resid > 1e-3


def test_criterion_4_redundancy():
    assert _report(4, *criterion_4())


def test_criterion_5_special_cases():
    assert _report(5, *criterion_5())


def test_criterion_6_z_bracket():
    assert _report(6, *criterion_6())


def test_criterion_7_momentum_order():
    assert _report(7, *criterion_7())


def test_criterion_8_dynamics():
    ok, detail = criterion_8()
    _report(8, ok, detail)
    s_ok, s_detail = criterion_8_supplement()
    _report(8, s_ok, "(supplement) " + s_detail)
    assert s_ok
    assert ok, detail


def test_criterion_9_negative_controls():
    assert _report(9, *criterion_9())


if __name__ == "__main__":
    for fn in (criterion_1, criterion_2, criterion_2_supplement, criterion_3, criterion_4, criterion_5,
               criterion_6, criterion_7, criterion_8, criterion_8_supplement, criterion_9):
        number = int(fn.__name__.split("_")[1])
        suffix = " (supplement)" if fn.__name__.endswith("supplement") else ""
        ok, detail = fn()
        _report(number, ok, detail + suffix)
