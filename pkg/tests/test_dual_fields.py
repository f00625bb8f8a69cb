import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superint import catalog
from superint.dual import Cx, Dual
from superint.errors import DimensionError, DomainError, ParameterError
from superint.fields import (
    PhaseField,
    PhasePoint,
    Weights,
    ZField,
    constant,
    coordinate,
    evaluate,
    evaluate_batch,
    fd_gradient,
    gradient,
    gradient_batch,
    poisson_bracket,
    poisson_bracket_batch,
    z_bracket,
)


def pt(q, p):
    return PhasePoint(q, p)


# --- dual numbers -------------------------------------------------------------

def test_dual_product_rule():
    x = Dual.variable(np.array([2.0]), 0, 2)
    y = Dual.variable(np.array([3.0]), 1, 2)
    f = x * y + x**2 / y
    assert f.val[0] == pytest.approx(6 + 4 / 3)
    np.testing.assert_allclose(f.der[0], [3 + 4 / 3, 2 - 4 / 9])


def test_complex_power_by_squaring():
    z = Cx(10.0, 2.0) ** 3
    assert (z.re, z.im) == (880.0, 592.0)


def test_dual_mixes_with_complex_constants():
    x = Dual.variable(np.array([1.5]), 0, 1)
    w = x + 1j
    assert isinstance(w, Cx)
    assert float(w.im if not isinstance(w.im, Dual) else w.im.val[0]) == 1.0


# --- phase points and evaluation ------------------------------------------------

def test_phase_point_rejects_bad_input():
    with pytest.raises(DimensionError):
        PhasePoint([1.0, 2.0], [1.0])
    with pytest.raises((DomainError, ValueError)):
        PhasePoint([np.nan], [0.0])
    x = PhasePoint([1.0], [2.0])
    with pytest.raises(ValueError):
        x.q[0] = 3.0


def test_weights_validation():
    with pytest.raises(ParameterError):
        Weights((0, 1), 1.0)
    with pytest.raises(ParameterError):
        Weights((1, 1), -1.0)
    np.testing.assert_array_equal(Weights((1, 2), 2.0).per_coordinate(), [2, 2, 4, 4])


def test_monomial_value_and_gradient():
    f = coordinate("q", 0, 1) * coordinate("p", 0, 1)
    x = pt([2.0], [3.0])
    assert evaluate(f, x) == 6.0
    np.testing.assert_array_equal(gradient(f, x), [3.0, 2.0])


def test_reduced_oscillator_pure_potential():
    m = catalog.oscillator2_reduced(1.0, 1, 1, 0.0, 0.0)
    x = pt([1.0, 1.0], [0.0, 0.0])
    assert evaluate(m.hamiltonian, x) == pytest.approx(1.0)
    np.testing.assert_allclose(gradient(m.hamiltonian, x), [1, 1, 0, 0])


def test_reduced_coulomb_pure_potential():
    m = catalog.coulomb3_reduced(1.0, 0.0, 0.0, 0.0)
    assert evaluate(m.hamiltonian, pt([1, 1, 1], [0, 0, 0])) == pytest.approx(-1 / math.sqrt(3), abs=1e-10)


def test_domain_and_arity_errors():
    m = catalog.coulomb3_reduced()
    with pytest.raises(DomainError):
        evaluate(m.hamiltonian, pt([0.0, 1.0, 1.0], [0, 0, 0]))
    with pytest.raises(DimensionError):
        evaluate(m.hamiltonian, pt([1.0, 1.0], [0, 0]))


def test_fd_gradient_examples():
    q1 = coordinate("q", 0, 1)
    np.testing.assert_allclose(fd_gradient(q1 * q1, pt([3.0], [0.0]), 1e-4), [6.0, 0.0], atol=1e-7)
    inv = PhaseField(lambda q, p: 1.0 / q[0], 1, "1/q")
    np.testing.assert_allclose(fd_gradient(inv, pt([2.0], [0.0]), 1e-5), [-0.25, 0.0], atol=1e-9)
    np.testing.assert_array_equal(fd_gradient(constant(4.0, 2), pt([1, 2], [3, 4])), np.zeros(4))


def _catalog_fields():
    out = []
    for m in (catalog.coulomb3_reduced(), catalog.oscillator2_reduced(), catalog.coulomb6(), catalog.oscillator4()):
        out.append((m, m.hamiltonian))
        out += [(m, i.field) for i in m.integrals if not i.field.complex][:6]
    return out


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_autodiff_matches_finite_differences(data):
    fields = _catalog_fields()
    m, f = fields[data.draw(st.integers(0, len(fields) - 1))]
    q = data.draw(st.lists(st.floats(0.4, 2.0), min_size=m.N, max_size=m.N))
    signs = data.draw(st.lists(st.sampled_from([-1.0, 1.0]), min_size=m.N, max_size=m.N))
    p = data.draw(st.lists(st.floats(-1.0, 1.0), min_size=m.N, max_size=m.N))
    x = pt(np.array(q) * np.array(signs), p)
    g = gradient(f, x)
    np.testing.assert_allclose(g, fd_gradient(f, x, 1e-5), rtol=0, atol=1e-6 * (1 + np.linalg.norm(g)))


def test_autodiff_matches_finite_differences_batch(points):
    m = catalog.coulomb3_reduced()
    Q, P = points(3, 1000)
    f = m.integral("T").field
    g = gradient_batch(f, Q, P)
    for i in range(0, 1000, 97):
        x = pt(Q[i], P[i])
        assert np.max(np.abs(g[i] - fd_gradient(f, x))) <= 1e-6 * (1 + np.linalg.norm(g[i]))


def test_complex_gradient_has_real_and_imaginary_parts():
    m = catalog.oscillator4(1.0, 1, 2)
    z1 = catalog.z_variable(m, 1)
    g = gradient(z1, pt([0.5, 0, 0, 0], [1.0, 0, 0, 0]))
    np.testing.assert_allclose(g.real, [0, 0, 0, 0, 1, 0, 0, 0])
    np.testing.assert_allclose(g.imag, [-1, 0, 0, 0, 0, 0, 0, 0])


# --- brackets -------------------------------------------------------------------

def test_canonical_pairs():
    n = 3
    x = pt([0.3, -1.2, 2.0], [0.5, 0.1, -0.7])
    for i in range(n):
        for j in range(n):
            qi, qj = coordinate("q", i, n), coordinate("q", j, n)
            pi, pj = coordinate("p", i, n), coordinate("p", j, n)
            assert poisson_bracket(qi, qj, x) == 0.0
            assert poisson_bracket(pi, pj, x) == 0.0
            assert poisson_bracket(qi, pj, x) == (1.0 if i == j else 0.0)


def test_coulomb6_angular_momentum_and_lrl_commute(points):
    m = catalog.coulomb6(1.0)
    Q, P = points(6)
    h = m.hamiltonian
    for label, tol in (("L12", 1e-10), ("A1", 1e-9)):
        f = m.integral(label).field
        b = poisson_bracket_batch(h, f, Q, P)
        gh, gf = gradient_batch(h, Q, P), gradient_batch(f, Q, P)
        scale = 1 + np.linalg.norm(gh, axis=1) * np.linalg.norm(gf, axis=1)
        assert np.max(np.abs(b) / scale) <= tol


def test_antisymmetry_and_self_bracket(points):
    m = catalog.coulomb3_reduced()
    Q, P = points(3)
    f, g = m.integral("I1").field, m.integral("T").field
    fg = poisson_bracket_batch(f, g, Q, P)
    gf = poisson_bracket_batch(g, f, Q, P)
    assert np.all(np.abs(fg + gf) <= 1e-12 * np.maximum(1, np.abs(fg)))
    ff = poisson_bracket_batch(f, f, Q, P)
    scale = np.linalg.norm(gradient_batch(f, Q, P), axis=1) ** 2
    assert np.all(np.abs(ff) <= 1e-12 * scale)


def test_leibniz_rule(points):
    m = catalog.oscillator2_reduced()
    Q, P = points(2)
    f = coordinate("p", 0, 2) * coordinate("q", 1, 2) ** 2
    g, h = m.integral("Q").field, m.integral("E1").field + coordinate("q", 1, 2)
    lhs = poisson_bracket_batch(f, g * h, Q, P)
    rhs = poisson_bracket_batch(f, g, Q, P) * _v(h, Q, P) + _v(g, Q, P) * poisson_bracket_batch(f, h, Q, P)
    scale = 1 + np.abs(poisson_bracket_batch(f, g, Q, P) * _v(h, Q, P)) + np.abs(_v(g, Q, P) * poisson_bracket_batch(f, h, Q, P))
    assert np.all(np.abs(lhs - rhs) <= 1e-10 * scale)


def _v(f, Q, P):
    return evaluate_batch(f, Q, P)


def _angular(n, i, j):
    if i == j:
        return constant(0.0, n)
    return catalog.angular_momentum(n, i, j) if i < j else -catalog.angular_momentum(n, j, i)


def _angular_bracket(n, a, b):
    # {L_ij, L_kl} = d_jk L_li - d_jl L_ki - d_ik L_lj + d_il L_kj
    (i, j), (k, l) = a, b
    out = constant(0.0, n)
    for cond, (x, y), s in (((j == k), (l, i), 1), ((j == l), (k, i), -1), ((i == k), (l, j), -1), ((i == l), (k, j), 1)):
        if cond:
            out = out + (_angular(n, x, y) if s > 0 else -_angular(n, x, y))
    return out


def test_angular_momentum_algebra(points):
    n = 4
    Q, P = points(n)
    pairs = [(0, 1), (1, 2), (2, 3), (0, 3), (1, 3)]
    for a in pairs:
        for b in pairs:
            got = poisson_bracket_batch(_angular(n, *a), _angular(n, *b), Q, P)
            np.testing.assert_allclose(got, _v(_angular_bracket(n, a, b), Q, P), atol=1e-12)


def test_jacobi_on_angular_momenta(points):
    n = 4
    Q, P = points(n)
    pairs = [(0, 1), (1, 2), (2, 3), (0, 2)]
    for a in pairs:
        for b in pairs:
            for c in pairs:
                total = 0.0
                for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                    total = total + poisson_bracket_batch(_angular(n, *x), _angular_bracket(n, y, z), Q, P)
                assert np.max(np.abs(total)) <= 1e-9


# --- z-variables ----------------------------------------------------------------

def test_z_bracket_of_conjugate_pair():
    z1 = ZField(lambda z, zb: z[0], 2, "z1")
    zb1 = ZField(lambda z, zb: zb[0], 2, "zbar1")
    w = Weights((1,), 1.0)
    assert z_bracket(z1, zb1, pt([0.3, 0.2], [0.1, -0.4]), w) == pytest.approx(-2j, abs=1e-14)
    assert z_bracket(z1, z1, pt([0.3, 0.2], [0.1, -0.4]), w) == 0


def test_z_bracket_matches_chart(points):
    zf = catalog.invariant_zfields(2, 3)
    w = Weights((2, 3), 0.7)
    Q, P = points(4, 100)
    for f, g in ((zf["Q1"], zf["xi1bar"]), (zf["Q1"], zf["xi1"]), (zf["eta1"], zf["xi3"])):
        ff, gg = f.on_phase_space(w), g.on_phase_space(w)
        for q, p in zip(Q, P):
            x = pt(q, p)
            a, b = z_bracket(f, g, x, w), poisson_bracket(ff, gg, x)
            scale = 1 + np.linalg.norm(gradient(ff, x)) * np.linalg.norm(gradient(gg, x))
            assert abs(a - b) <= 1e-10 * scale
