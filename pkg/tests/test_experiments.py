import numpy as np
import pytest
from numpy.polynomial.legendre import leggauss

from ratprony.errors import InvalidInputError
from ratprony.experiments import (
    REFERENCE_DELAY_SYSTEM,
    RKHSDemoSpec,
    DelaySystemSpec,
    allpass_style_poles,
    choose_m0,
    clustered_boundary_poles,
    condnum_demo,
    delay_demo,
    delay_moment,
    delay_moment_fourier,
    delay_sequence,
    legendre_eval,
    legendre_table,
    rkhs_comparison,
    rkhs_demo,
    rkhs_kernel_eval,
    rkhs_moments,
)
from ratprony.prony import match_poles

REF = REFERENCE_DELAY_SYSTEM


def test_delay_moment_examples():
    assert delay_moment(REF, 1.0) == 0
    one = DelaySystemSpec([-1.0], [1.0], 0.0)
    assert delay_moment(one, 2) == pytest.approx(np.exp(-2))
    expected = np.sum(REF.coefficients * np.exp(REF.poles * 0.5))
    assert delay_moment(REF, 2) == pytest.approx(expected)
    with pytest.raises(InvalidInputError):
        delay_moment(REF, -1)


def test_delay_moment_matches_inverse_fourier():
    approx = delay_moment_fourier(REF, 2.0)
    assert abs(approx - delay_moment(REF, 2)) < 1e-4


def test_delay_spec_validation():
    with pytest.raises(InvalidInputError):
        DelaySystemSpec([0.1], [1.0], 1.0)
    with pytest.raises(InvalidInputError):
        DelaySystemSpec([-1.0, -1.0], [1.0, 2.0], 1.0)
    with pytest.raises(InvalidInputError):
        DelaySystemSpec([-1.0], [1.0], -0.5)
    with pytest.raises(InvalidInputError):
        DelaySystemSpec([-1.0], [1.0, 2.0], 0.5)


def test_step_rule_and_branch_stripe():
    assert choose_m0(REF) == 3
    assert 2 * np.max(np.abs(REF.poles.imag)) == pytest.approx(0.718)
    with pytest.raises(InvalidInputError):
        choose_m0(DelaySystemSpec([-0.1 + 2j, -0.1 - 2j], [1, 1], 0.5))
    with pytest.raises(InvalidInputError):
        delay_sequence(REF, 1, 10)
    g = delay_sequence(REF, 3, 5)
    assert g.values[0] == 0 and g.provenance == "delay-demo"


def test_single_pole_delay_oracle():
    spec = DelaySystemSpec([-0.5], [1.0], 0.3)
    res = delay_demo(spec, "grop", m0=1, K=60)
    assert abs(res.poles[0] + 0.5) < 1e-10
    assert abs(res.coefficients[0] - 1.0) < 1e-8
    assert res.diagnostics["zero_root"] < 1e-8


@pytest.mark.parametrize("method", ["grop", "gb", "classical"])
def test_reference_delay_system(method):
    res = delay_demo(REF, method)
    assert res.poles.size == 3
    assert res.diagnostics["poles"]["max_error"] < 1e-3
    assert res.diagnostics["paper_experiment"] == "delayed-lti-identification"
    assert not res.diagnostics["branch_boundary"]


def test_delay_routes_agree():
    a = delay_demo(REF, "grop")
    b = delay_demo(REF, "gb")
    _, err = match_poles(a.poles, b.poles)
    assert max(err) < 1e-4
    pairs, _ = match_poles(a.poles, REF.poles)
    for i, j in pairs:
        assert abs(a.coefficients[i] - REF.coefficients[j]) < 1e-6


def test_delay_demo_rejects_bad_step_and_method():
    with pytest.raises(InvalidInputError):
        delay_demo(REF, "grop", m0=9)
    with pytest.raises(InvalidInputError):
        delay_demo(REF, "newton")


def test_legendre_values():
    assert legendre_eval(0, 0.3) == 1
    assert legendre_eval(2, 0.5) == pytest.approx(-0.125)
    assert legendre_eval(3, 1.0) == pytest.approx(1.0)
    with pytest.raises(InvalidInputError):
        legendre_eval(-1, 0.0)


def test_legendre_orthonormality():
    x, wts = leggauss(40)
    table = legendre_table(20, x)
    gram = (table * wts) @ table.T
    np.testing.assert_allclose(gram, np.eye(21), atol=1e-10)
    np.testing.assert_allclose(table[7], legendre_eval(7, x, normalized=True), atol=1e-13)


def test_kernel_values_and_reproducing_property():
    assert rkhs_kernel_eval(0, 0.2, -0.4) == pytest.approx(0.5)
    assert rkhs_kernel_eval(1, 0.0, 0.0) == pytest.approx(0.5)
    x, wts = leggauss(30)
    coeffs = np.random.default_rng(1).normal(size=11)
    f = coeffs @ legendre_table(10, x)
    for y in (-0.8, 0.1, 0.65):
        fy = coeffs @ legendre_table(10, y)[:, 0]
        assert np.sum(wts * f * rkhs_kernel_eval(10, x, y)) == pytest.approx(fy, abs=1e-10)


def test_rkhs_moments():
    spec = RKHSDemoSpec(N=4, M=1, lo=-0.5, hi=0.5, coefficients=[2.0])
    np.testing.assert_allclose(rkhs_moments(spec).values, 2 * (-0.5) ** np.arange(5))
    with pytest.raises(InvalidInputError):
        rkhs_moments(spec, 6)
    big = RKHSDemoSpec(coefficients=np.linspace(1, 2, 30))
    brute = [sum(c * lam**m for c, lam in zip(big.coefficients, big.poles)) for m in range(513)]
    np.testing.assert_allclose(rkhs_moments(big, 513).values, brute, atol=1e-14)


def test_rkhs_spec_validation():
    with pytest.raises(InvalidInputError):
        RKHSDemoSpec(lo=0.5, hi=0.1)
    with pytest.raises(InvalidInputError):
        RKHSDemoSpec(C=0.5)
    with pytest.raises(InvalidInputError):
        RKHSDemoSpec(M=3, coefficients=[1, 2])


def test_rkhs_well_separated_gop():
    spec = RKHSDemoSpec(N=64, M=2, lo=-0.6, hi=0.3)
    res = rkhs_demo(spec, "gop")
    _, err = match_poles(res.poles, spec.poles)
    assert max(err) < 1e-8


def test_rkhs_reference_configuration():
    res = rkhs_demo()
    assert res.poles.size == 2
    assert res.diagnostics["max_nearest_distance"] < 1e-2
    assert res.diagnostics["inside_interval"]
    report = rkhs_comparison()
    assert report["contrast"]
    assert report["gop_hankel_condition"] > 1e12


def test_scaled_rkhs_maps_back():
    spec = RKHSDemoSpec(N=64, M=2, lo=-1.6, hi=0.6, C=2.0)
    res = rkhs_demo(spec, "gop")
    _, err = match_poles(res.poles, spec.poles)
    assert max(err) < 1e-8


def test_condnum_small_separated_set():
    report = condnum_demo(poles=[0.1, 0.4, 0.7], coefficients=[1, 2, 3])
    assert report["tm_condition"] < 1e3
    assert report["tm_coefficient_error"] < 1e-10
    assert report["paper_experiment"] == "condition-number-study"


def test_allpass_generator_shape():
    poles = allpass_style_poles(201, seed=3)
    assert poles.size == 201
    assert np.all(np.abs(poles) < 1) and np.min(1 - np.abs(poles)) < 0.05
    assert np.allclose(np.sort_complex(poles[:100]).conj(), np.sort_complex(poles[100:200]))
    np.testing.assert_array_equal(allpass_style_poles(20, seed=1), allpass_style_poles(20, seed=1))


def test_clustered_generator():
    poles = clustered_boundary_poles(12, seed=0)
    assert np.allclose(np.abs(poles), 0.99)
    assert np.ptp(np.angle(poles)) <= np.pi / 8
    with pytest.raises(InvalidInputError):
        condnum_demo(generator="spiral")
