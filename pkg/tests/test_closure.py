import math

import numpy as np
import pytest

from polyshock import closure
from polyshock.collisions import CrossSectionSpec
from polyshock.errors import AdmissibilityError
from polyshock.gas import GasParameters, MacroState6

PARAMS = GasParameters(alpha=0.5)
STATE_EQ = MacroState6(rho=1.0, e=1.0, params=PARAMS, Pi=0.0)
STATE = MacroState6(rho=1.0, e=1.0, params=PARAMS, Pi=0.1)


def test_f5_value():
    # (3/(2 pi))^{3/2} 3^{3/2} / Gamma(3/2), 40-digit evaluation
    assert closure.f5(STATE_EQ, (0.0, 0.0, 0.0), 0.0) == pytest.approx(
        1.9344121928463024, rel=1e-14
    )


def test_f5_positive_everywhere():
    rng = np.random.default_rng(0)
    c = rng.normal(scale=3.0, size=(200, 3))
    internal = rng.uniform(0.0, 10.0, size=200)
    assert np.all(closure.f5(STATE_EQ, c, internal) > 0.0)


def test_f5_requires_equilibrium():
    with pytest.raises(AdmissibilityError):
        closure.f5(STATE, (0.0, 0.0, 0.0), 0.0)


def test_f5_is_the_local_maxwellian():
    # rho/(m zeta0(T)) (m/(2 pi k T))^{3/2} exp(-((m/2)|c|^2 + I)/(k T))
    # with T from the caloric equation of state
    rng = np.random.default_rng(4)
    m, k = PARAMS.mass, PARAMS.boltzmann
    T = STATE_EQ.temperature
    zeta0 = PARAMS.internal_partition(T)
    c = rng.normal(size=(200, 3))
    internal = rng.uniform(0.0, 3.0, size=200)
    c_sq = np.sum(c * c, axis=-1)
    maxwellian = (
        STATE_EQ.rho / (m * zeta0)
        * (m / (2.0 * math.pi * k * T)) ** 1.5
        * np.exp(-(0.5 * m * c_sq + internal) / (k * T))
    )
    assert np.max(np.abs(closure.f5(STATE_EQ, c, internal) / maxwellian - 1.0)) <= 1e-13


def test_f6_value():
    assert closure.f6(STATE, (0.0, 0.0, 0.0), 0.0) == pytest.approx(
        2.2283680986052462, rel=1e-14
    )


def test_f6_equals_f5_at_equilibrium():
    rng = np.random.default_rng(1)
    c = rng.normal(size=(1000, 3))
    internal = rng.uniform(0.0, 4.0, size=1000)
    f6v = closure.f6(STATE_EQ, c, internal)
    f5v = closure.f5(STATE_EQ, c, internal)
    assert np.max(np.abs(f6v / f5v - 1.0)) <= 1e-12


def test_f6_rejected_at_boundary():
    p = STATE.pressure
    upper = STATE.pi_upper_bound
    near = MacroState6(rho=1.0, e=1.0, params=PARAMS, Pi=upper * (1.0 - 1e-12))
    with pytest.raises(AdmissibilityError):
        closure.f6(near, (0.0, 0.0, 0.0), 0.0)
    with pytest.raises(AdmissibilityError):
        closure.f6(MacroState6(rho=1.0, e=1.0, params=PARAMS, Pi=-p * (1.0 - 1e-12)),
                   (0.0, 0.0, 0.0), 0.0)


def test_multipliers_values():
    mult = closure.multipliers(STATE)
    assert mult.lambda1 == (0.0, 0.0, 0.0)
    assert mult.mu2 == pytest.approx(30.0 / 7.0, rel=1e-14)  # 1.5 / 0.35
    # lambda2 = (1/2)(3/1.3 - 1.5/0.35)
    assert mult.lambda2 == pytest.approx(0.5 * (3.0 / 1.3 - 30.0 / 7.0), rel=1e-14)


def test_multipliers_vanish_at_equilibrium():
    mult = closure.multipliers(STATE_EQ)
    assert mult.lambda2 == pytest.approx(0.0, abs=1e-15)


def test_exponential_rates_positive_on_admissible_region():
    rng = np.random.default_rng(2)
    for _ in range(200):
        alpha = rng.uniform(-0.9, 3.0)
        params = GasParameters(alpha=alpha)
        rho, e = rng.uniform(0.2, 3.0, size=2)
        p = rho * e / (alpha + 2.5)
        Pi = rng.uniform(-0.999, 0.999) * (p if rng.random() < 0.5
                                           else 2.0 * (alpha + 1.0) / 3.0 * p)
        if Pi >= 2.0 * (alpha + 1.0) / 3.0 * p or Pi <= -p:
            continue
        state = MacroState6(rho=rho, e=e, params=params, Pi=Pi)
        mult = closure.multipliers(state)
        assert mult.mu2 > 0.0
        # kinetic rate: lambda2 + mu2/2 scaled by m/k
        assert mult.lambda2 + 0.5 * mult.mu2 > 0.0


def test_multipliers_reconstruct_f6():
    rng = np.random.default_rng(5)
    c = rng.normal(size=(500, 3))
    internal = rng.uniform(0.0, 3.0, size=500)
    mult = closure.multipliers(STATE)
    rebuilt = mult.reconstruct(PARAMS, c, internal)
    assert np.max(np.abs(rebuilt / closure.f6(STATE, c, internal) - 1.0)) <= 1e-12


def test_entropy_values():
    h5, h6, kap = closure.entropies(STATE)
    assert h5 == pytest.approx(2.3401964959744439, rel=1e-14)
    assert h6 == pytest.approx(2.1987304767675819, rel=1e-14)
    assert kap == pytest.approx(h6 - h5, abs=1e-14)


def test_kappa_value():
    # 1.5 log(0.91) at Pi = 0.1
    assert closure.kappa(STATE) == pytest.approx(-0.14146601920686199, rel=1e-14)


def test_kappa_zero_at_equilibrium():
    h5, h6, kap = closure.entropies(STATE_EQ)
    assert kap == 0.0
    assert h6 == pytest.approx(h5, rel=1e-15)


def test_kappa_negative_and_peaked_at_zero():
    p = STATE.pressure
    pis = np.linspace(-0.99 * p, 0.99 * STATE.pi_upper_bound, 801)
    values = np.array([closure.kappa(STATE.with_pi(x)) for x in pis])
    assert np.max(values) <= 0.0
    assert abs(pis[np.argmax(values)]) <= 2.0 * (pis[1] - pis[0])


def test_production_zero_at_equilibrium():
    for xsec in (
        CrossSectionSpec(variant="standard", K=1.0, s=0.0),
        CrossSectionSpec(variant="standard", K=2.0, s=1.5),
        CrossSectionSpec(variant="generalized", K=1.0, s=0.5, beta=1.0, q=-0.5),
    ):
        assert closure.production(STATE_EQ, xsec) == 0.0


def test_production_frozen_values():
    state = MacroState6(rho=1.0, e=1.0, params=PARAMS, Pi=0.05)
    assert closure.production(state, CrossSectionSpec(variant="standard", K=1.0, s=0.0)) == \
        pytest.approx(-1.2907563025210084, rel=1e-13)
    assert closure.production(state, CrossSectionSpec(variant="standard", K=1.0, s=1.0)) == \
        pytest.approx(-1.6492997198879552, rel=1e-13)


def test_production_sign_opposite_to_pi():
    xsec = CrossSectionSpec(variant="standard", K=1.0, s=1.0)
    assert closure.production(STATE.with_pi(0.2), xsec) < 0.0
    assert closure.production(STATE.with_pi(-0.2), xsec) > 0.0


def test_coefficient_identity_at_q0_beta0():
    for s in (-1.0, 0.0, 1.0, 2.0):
        assert closure.coefficient_CG(0.5, s, 0.0, 0.0) == pytest.approx(
            closure.coefficient_C(0.5, s), rel=1e-12
        )


def test_coefficients_log_space_large_arguments():
    # large s and alpha would overflow a naive Gamma product
    value = closure.coefficient_CG(40.0, 60.0, 10.0, 5.0)
    assert math.isfinite(value) and value > 0.0


def test_linearized_relaxation_time():
    state = MacroState6(rho=1.0, e=1.0, params=PARAMS, Pi=0.0)
    lin, tau = closure.production_linearized(
        state, CrossSectionSpec(variant="standard", K=1.0, s=1.0))
    assert lin == 0.0
    assert tau == pytest.approx(0.123046875, rel=1e-13)


def test_linearized_is_small_pi_limit():
    xsec = CrossSectionSpec(variant="standard", K=1.0, s=1.0)
    _, tau = closure.production_linearized(STATE_EQ, xsec)
    slopes = [closure.production(STATE_EQ.with_pi(h), xsec) / h for h in (1e-3, 1e-4, 1e-5)]
    extrap = (10.0 * slopes[2] - slopes[1]) / 9.0
    assert extrap == pytest.approx(-3.0 / tau, rel=1e-5)


def test_linearized_scales_with_density():
    # lin = -3 Pi / tau must hold at every rho, fixing the rho-power of tau
    xsec = CrossSectionSpec(variant="standard", K=1.0, s=1.0)
    for rho in (0.5, 1.0, 2.0):
        st = MacroState6(rho=rho, e=1.0, params=PARAMS, Pi=1e-7)
        lin, tau = closure.production_linearized(st, xsec)
        assert lin == pytest.approx(-3.0 * st.Pi / tau, rel=1e-14)
        assert closure.production(st, xsec) == pytest.approx(lin, rel=1e-5)


def test_tau_positive_everywhere():
    rng = np.random.default_rng(8)
    for _ in range(100):
        alpha = rng.uniform(-0.9, 3.0)
        params = GasParameters(alpha=alpha)
        st = MacroState6(rho=rng.uniform(0.2, 3.0), e=rng.uniform(0.2, 3.0), params=params)
        s = rng.uniform(-1.4, 3.0)
        _, tau = closure.production_linearized(
            st, CrossSectionSpec(variant="standard", K=1.0, s=s))
        assert tau > 0.0


def test_et_compatible_pointwise_identity():
    rng = np.random.default_rng(17)
    for _ in range(200):
        alpha = rng.uniform(-0.45, 2.0)
        s = rng.uniform(-1.4, 0.4)
        params = GasParameters(alpha=alpha)
        rho, e = rng.uniform(0.3, 3.0, size=2)
        p = rho * e / (alpha + 2.5)
        Pi = rng.uniform(-0.9, 0.9) * min(p, 2.0 * (alpha + 1.0) / 3.0 * p)
        state = MacroState6(rho=rho, e=e, params=params, Pi=Pi)
        xsec = closure.et_compatible_spec(alpha, s)
        direct = closure.production(state, xsec)
        _, tau = closure.production_linearized(state, xsec)
        assert direct == pytest.approx(closure.production_ET(state, tau), rel=1e-12)


def test_production_et_zero_at_equilibrium():
    assert closure.production_ET(STATE_EQ, tau_pi=0.5) == 0.0


def test_alpha_bar_requires_small_s():
    with pytest.raises(ValueError, match="s < 1/2"):
        closure.alpha_bar(STATE, s=0.5)


def test_alpha_bar_times_dkappa_matches_et_form():
    s = 0.0
    xsec = closure.et_compatible_spec(0.5, s)
    _, tau = closure.production_linearized(STATE, xsec)
    et = closure.production_ET(STATE, tau)
    h = 1e-7
    dk = (closure.kappa(STATE.with_pi(STATE.Pi + h))
          - closure.kappa(STATE.with_pi(STATE.Pi - h))) / (2.0 * h)
    assert closure.alpha_bar(STATE, s) * dk == pytest.approx(et, rel=1e-6)


def test_et_over_dkappa_ratio_is_pi_independent():
    s = -0.5
    xsec = closure.et_compatible_spec(0.5, s)
    h = 1e-7
    ratios = []
    for pi in (-0.2, -0.05, 0.08, 0.2, 0.3):
        st = STATE.with_pi(pi)
        _, tau = closure.production_linearized(st, xsec)
        et = closure.production_ET(st, tau)
        dk = (closure.kappa(st.with_pi(pi + h)) - closure.kappa(st.with_pi(pi - h))) / (2 * h)
        ratios.append(et / dk)
    spread = (max(ratios) - min(ratios)) / abs(ratios[0])
    assert spread <= 1e-6
    assert ratios[0] == pytest.approx(closure.alpha_bar(STATE, s), rel=1e-6)


def test_entropy_production_signs():
    xsec = CrossSectionSpec(variant="generalized", K=1.0, s=0.0, beta=0.0, q=0.0)
    assert closure.entropy_production(STATE_EQ, xsec) == pytest.approx(0.0, abs=1e-30)
    assert closure.entropy_production(STATE, xsec) < 0.0
    assert closure.entropy_production(STATE.with_pi(-0.2), xsec) < 0.0


def test_entropy_production_frozen_value():
    xsec = CrossSectionSpec(variant="generalized", K=1.0, s=0.0, beta=0.0, q=0.0)
    assert closure.entropy_production(STATE, xsec) == pytest.approx(
        -3.1002466920834268, rel=1e-13
    )


def test_h6_below_h5_off_equilibrium():
    for pi in (-0.25, 0.15, 0.3):
        h5, h6, _ = closure.entropies(STATE.with_pi(pi))
        assert h6 < h5


def test_perturbation_context_restores():
    base = closure.coefficient_C(0.5, 1.0)
    with closure.perturb_coefficients(1e-3, "production"):
        assert closure.coefficient_C(0.5, 1.0) == pytest.approx(base * 1.001, rel=1e-14)
    assert closure.coefficient_C(0.5, 1.0) == base
    with pytest.raises(ValueError, match="unknown perturbation target"):
        with closure.perturb_coefficients(1e-3, "nonsense"):
            pass
