"""Metric, Hodge star, compatibility and the torsion solver."""

import random
from fractions import Fraction
from itertools import combinations

import pytest

from splitg2 import catalog, scalars
from splitg2.errors import (
    Degenerate,
    DegreeMismatch,
    DimensionMismatch,
    NonUniqueSolution,
    ValidationError,
    ZeroReference,
)
from splitg2.exterior import Form, SymTensor2, Vector, interior
from splitg2.g2 import (
    G2Structure,
    Metric7,
    TorsionSet,
    bryant_residual,
    calibrate_vol_scale,
    compatibility_defect,
    hodge_star,
    lambda2_14_basis,
    lambda3_27_check,
    torsion_linear_system,
    torsion_solve,
)

from conftest import random_fraction


def euclidean():
    return Metric7(SymTensor2(7, {(i, i): 1 for i in range(1, 8)}))


def split_diag():
    return Metric7(SymTensor2(7, {(i, i): 1 if i <= 3 else -1 for i in range(1, 8)}))


@pytest.fixture(scope="module")
def ml():
    return catalog.scenario("Ml")


@pytest.fixture(scope="module")
def ms():
    return catalog.scenario("Ms")


def specialize_form(form, alphabet, point):
    return form.map_coefficients(
        lambda c: scalars.specialize(scalars.as_scalar(c, alphabet), point)
    )


@pytest.fixture(scope="module")
def ms_at_2(ms):
    phi = specialize_form(ms.phi_family, ms.alphabet, {"q": Fraction(2)})
    return ms.metric, phi


# -- Metric7 -----------------------------------------------------------------------


def test_metric_validation():
    with pytest.raises(DimensionMismatch):
        Metric7(SymTensor2(6, {(1, 1): 1}))
    with pytest.raises(Degenerate):
        Metric7(SymTensor2(7, {(1, 1): 1}))
    entries = {(i, i): 1 for i in range(2, 8)}
    entries[(1, 1)] = scalars.Polynomial.variable(("a",), "a")
    with pytest.raises(ValidationError):
        Metric7(SymTensor2(7, entries))


def test_metric_inverse_and_det():
    m = split_diag()
    assert m.det == 1
    assert m.inverse == m.matrix


def test_signature_diagonal():
    assert euclidean().signature() == (7, 0)
    assert split_diag().signature() == (3, 4)


def test_signature_hyperbolic_block():
    # e^1 (.) e^2 pairing contributes (1, 1)
    entries = {(i, i): 1 for i in range(3, 8)}
    entries[(1, 2)] = Fraction(1, 2)
    m = Metric7(SymTensor2(7, entries))
    assert m.signature() == (6, 1)


def test_scenario_metrics(ml, ms):
    assert ml.metric.det == Fraction(-1, 4)
    assert ms.metric.det == -2
    assert ml.metric.signature() == (4, 3)
    assert ms.metric.signature() == (4, 3)


# -- Hodge star --------------------------------------------------------------------


def test_star_euclidean_hand_values():
    m = euclidean()
    assert hodge_star(m, Form.monomial(7, (1,))).terms == {
        (2, 3, 4, 5, 6, 7): Fraction(1)
    }
    assert hodge_star(m, Form.monomial(7, (2,))).terms == {
        (1, 3, 4, 5, 6, 7): Fraction(-1)
    }
    assert hodge_star(m, Form.monomial(7, (1, 2))).terms == {
        (3, 4, 5, 6, 7): Fraction(1)
    }
    top = tuple(range(1, 8))
    assert hodge_star(m, Form.monomial(7, top)).terms == {(): Fraction(1)}
    assert hodge_star(m, Form(7, 0, {(): Fraction(1)})).terms == {top: Fraction(1)}


def test_star_is_linear(rng):
    m = euclidean()
    for _ in range(5):
        keys = list(combinations(range(1, 8), 2))
        a = Form(7, 2, {k: random_fraction(rng) for k in rng.sample(keys, 3)})
        b = Form(7, 2, {k: random_fraction(rng) for k in rng.sample(keys, 3)})
        s = random_fraction(rng)
        lhs = hodge_star(m, a * s + b)
        rhs = hodge_star(m, a) * s + hodge_star(m, b)
        assert (lhs - rhs).is_zero()


def test_double_star_multiplies_by_det_over_scale_squared(rng, ms):
    # this star normalizes against the fixed frame volume, so the
    # composite picks up det g / c^2 rather than just the sign
    for metric in (euclidean(), split_diag(), ms.metric):
        for p, c in ((1, Fraction(1)), (2, Fraction(3)), (3, Fraction(2, 5))):
            key = tuple(sorted(rng.sample(range(1, 8), p)))
            a = Form.monomial(7, key)
            ss = hodge_star(metric, hodge_star(metric, a, c), c)
            assert (ss - a * (metric.det / c ** 2)).is_zero()


def test_star_volume_scale():
    m = euclidean()
    a = Form.monomial(7, (1, 4))
    assert (hodge_star(m, a, 3) - hodge_star(m, a) * Fraction(1, 3)).is_zero()


def test_star_rejects_zero_scale():
    with pytest.raises(Degenerate):
        hodge_star(euclidean(), Form.monomial(7, (1,)), 0)


def test_star_pairing_recovers_norm(rng):
    # a ^ star a = |a|^2 vol for 1-forms in the Euclidean metric
    m = euclidean()
    comps = [random_fraction(rng) for _ in range(7)]
    a = Form(7, 1, {(i + 1,): c for i, c in enumerate(comps) if c})
    w = a.wedge(hodge_star(m, a))
    want = sum(c * c for c in comps)
    assert w.coefficient(tuple(range(1, 8))) == want


# -- compatibility -----------------------------------------------------------------


def test_compatibility_identically_zero(ml, ms):
    assert compatibility_defect(ml.metric, ml.phi_family).is_zero()
    assert compatibility_defect(ms.metric, ms.phi_family).is_zero()


def test_compatibility_cubic_scaling(ms_at_2, ms):
    # B is cubic in phi: scaling phi by 2 leaves defect 3*(8-1)*g
    metric, phi = ms_at_2
    defect = compatibility_defect(metric, phi * 2)
    assert (defect - metric.tensor * 21).is_zero()


def test_compatibility_detects_perturbation(ms_at_2):
    metric, phi = ms_at_2
    assert not compatibility_defect(metric, phi + Form.monomial(7, (1, 2, 3))).is_zero()


def test_structure_validation(ms_at_2):
    metric, phi = ms_at_2
    s = G2Structure(metric, phi)
    assert s.vol_scale == 1
    with pytest.raises(ValidationError):
        G2Structure(metric, phi, Fraction(-1))
    with pytest.raises(ValidationError):
        G2Structure(metric, phi + Form.monomial(7, (1, 2, 3)))
    assert (s.star(phi) - hodge_star(metric, phi)).is_zero()


# -- the 2-form and 3-form components -------------------------------------------------


def test_lambda2_14(ms_at_2):
    metric, phi = ms_at_2
    star_phi = hodge_star(metric, phi)
    space = lambda2_14_basis(phi, star_phi)
    assert space.dimension == 14
    for alpha in space.basis:
        assert alpha.wedge(star_phi).is_zero()


def test_lambda3_27_rejects_phi(ms_at_2):
    metric, phi = ms_at_2
    star_phi = hodge_star(metric, phi)
    assert not lambda3_27_check(phi, phi, star_phi)


# -- torsion -----------------------------------------------------------------------------


def test_torsion_system_shape(ms_at_2):
    metric, phi = ms_at_2
    system = torsion_linear_system(catalog.scenario("Ms").algebra, metric, phi)
    assert system.width == 64
    assert len(system.labels) == 64
    assert system.bryant_count == 56
    assert len(system.rows) == 71
    assert system.membership_kernel_rank() == 49


def test_torsion_solution_matches_goldens(ms):
    point = {"q": Fraction(2)}
    phi = specialize_form(ms.phi_family, ms.alphabet, point)
    got = torsion_solve(ms.algebra, ms.metric, phi)
    want0 = scalars.parse_scalar(ms.expected.tau0, ())
    assert scalars.equals(scalars.as_scalar(got.tau0), want0)
    assert got.tau1.is_zero() and got.tau2.is_zero()
    for key, text in ms.expected.tau3.items():
        val = scalars.specialize(scalars.parse_scalar(text, ms.alphabet), point)
        assert scalars.equals(scalars.as_scalar(got.tau3.terms.get(key, 0),), val)


def test_torsion_scaling_law(ms_at_2, ms, rng):
    metric, phi = ms_at_2
    base = torsion_solve(ms.algebra, metric, phi)
    for s in (Fraction(3), Fraction(2, 5)):
        scaled = torsion_solve(ms.algebra, metric, phi, s)
        want = base.rescale(s)
        assert scalars.equals(scalars.as_scalar(scaled.tau0),
                              scalars.as_scalar(want.tau0))
        assert (scaled.tau1 - want.tau1).is_zero()
        assert (scaled.tau2 - want.tau2).is_zero()
        assert (scaled.tau3 - want.tau3).is_zero()


def test_rescale_guards():
    t = TorsionSet(Fraction(1), Form.zero(7, 1), Form.zero(7, 2), Form.zero(7, 3))
    with pytest.raises(ValidationError):
        t.rescale(0)
    with pytest.raises(ValidationError):
        t.rescale(-2)


def test_torsion_rejects_nondescending(ms):
    with pytest.raises(ValidationError):
        torsion_solve(ms.algebra, ms.metric, Form.monomial(7, (1, 2, 3)))


def test_torsion_rejects_degenerate_form(ms):
    with pytest.raises(NonUniqueSolution):
        torsion_solve(ms.algebra, ms.metric, Form.zero(7, 3))


def test_bryant_residual_negative_control(ms_at_2, ms):
    metric, phi = ms_at_2
    sol = torsion_solve(ms.algebra, metric, phi)
    res1, res2 = bryant_residual(ms.algebra, metric, phi, sol)
    assert res1.is_zero() and res2.is_zero()
    tampered = TorsionSet(scalars.as_scalar(sol.tau0) + 1,
                          sol.tau1, sol.tau2, sol.tau3)
    res1, _ = bryant_residual(ms.algebra, metric, phi, tampered)
    assert not res1.is_zero()


def test_tau3_lies_in_27(ms_at_2, ms):
    metric, phi = ms_at_2
    sol = torsion_solve(ms.algebra, metric, phi)
    star_phi = hodge_star(metric, phi)
    assert lambda3_27_check(sol.tau3, phi, star_phi)


# -- calibration ----------------------------------------------------------------------------


def test_calibrate_recovers_scale(ms_at_2, ms):
    metric, phi = ms_at_2
    base = torsion_solve(ms.algebra, metric, phi)
    ref = scalars.as_scalar(base.tau0) * 2
    assert calibrate_vol_scale(ref, base) == 2


def test_calibrate_zero_reference(ms_at_2, ms):
    metric, phi = ms_at_2
    base = torsion_solve(ms.algebra, metric, phi)
    with pytest.raises(ZeroReference):
        calibrate_vol_scale(Fraction(0), base)


def test_calibrate_nonconstant_quotient(ms_at_2, ms):
    metric, phi = ms_at_2
    base = torsion_solve(ms.algebra, metric, phi)
    ref = scalars.Polynomial.variable(("q",), "q")
    with pytest.raises(ValidationError):
        calibrate_vol_scale(ref, base)


def test_calibrate_symbolic_constant_quotient(ml):
    # parameter-carrying tau0 against twice itself gives exactly 2
    sol = torsion_solve(ml.algebra, ml.metric, ml.phi_family)
    ref = scalars.as_scalar(sol.tau0) * 2
    assert calibrate_vol_scale(ref, sol) == 2


def test_degree_guards(ms):
    with pytest.raises(DegreeMismatch):
        compatibility_defect(ms.metric, Form.monomial(7, (1, 2)))
    with pytest.raises(DimensionMismatch):
        hodge_star(ms.metric, Form.monomial(6, (1,)))
