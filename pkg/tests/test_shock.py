import math

import numpy as np
import pytest

from polyshock import shock
from polyshock.collisions import CrossSectionSpec
from polyshock.errors import NoSubshockError, ProfileError, SonicSingularityError
from polyshock.verify import _rh_euler_by_rootfinding, _rh_full_by_rootfinding


def problem(mach0, alpha=0.5, s_star=1.0, alpha_star=None, **kw):
    return shock.ShockProblem(mach0=mach0, alpha=alpha, s_star=s_star,
                              alpha_star=alpha_star, **kw)


def test_rh_euler_values():
    up, down = shock.rh_euler(problem(1.1))
    assert up.rho == 1.0 and up.T == 1.0 and up.Pi == 0.0
    assert up.u == pytest.approx(1.1, rel=1e-15)
    assert down.rho == pytest.approx(1.1747572815533981, rel=1e-12)
    assert down.u == pytest.approx(103.0 / 110.0, rel=1e-12)
    assert down.T == pytest.approx(1.0555371900826446, rel=1e-12)
    assert down.Pi == 0.0


def test_rh_euler_vs_rootfinding():
    down = shock.rh_euler(problem(1.1))[1]
    found = _rh_euler_by_rootfinding(1.1, 0.5)
    assert np.max(np.abs(found - [down.rho, down.u, down.T])) <= 1e-10


def test_rh_euler_degenerate_limit():
    _, down = shock.rh_euler(problem(1.0 + 1e-9))
    assert down.rho == pytest.approx(1.0, abs=1e-8)
    assert down.u == pytest.approx(1.0, abs=1e-8)
    assert down.T == pytest.approx(1.0, abs=1e-8)


def test_rh_euler_mass_flux_identity():
    for m0 in (1.05, 1.3, 2.4):
        _, down = shock.rh_euler(problem(m0))
        assert down.rho * down.u == pytest.approx(m0, rel=1e-14)


def test_rh_full_anchor():
    state = shock.rh_full(problem(1.5))
    assert state.rho == pytest.approx(1.5, abs=1e-12)
    assert state.u == pytest.approx(1.0, abs=1e-12)
    assert state.T == pytest.approx(7.0 / 6.0, abs=1e-12)
    assert state.Pi == pytest.approx(0.25, abs=1e-12)


def test_rh_full_vs_rootfinding():
    state = shock.rh_full(problem(2.0))
    found = _rh_full_by_rootfinding(2.0, 0.5)
    assert np.max(np.abs(found - state.as_array())) <= 1e-10


def test_rh_full_flux_residuals():
    pr = problem(1.7)
    state = shock.rh_full(pr)
    c = pr.c_coef
    rho, u, T, Pi = state.rho, state.u, state.T, state.Pi
    fluxes = np.array([
        rho * u,
        rho * u * u + c * (rho * T + Pi),
        rho * u ** 3 + 5.0 * c * (rho * T + Pi) * u,
        0.5 * rho * u ** 3 + (pr.alpha + 2.5) * rho * T * u + c * Pi * u,
    ])
    m0 = pr.mach0
    upstream = np.array([
        m0, m0 * m0 + c, m0 ** 3 + 5.0 * c * m0, 0.5 * m0 ** 3 + (pr.alpha + 2.5) * m0,
    ])
    assert np.max(np.abs(fluxes - upstream)) <= 1e-12


def test_rh_full_below_threshold_raises():
    with pytest.raises(NoSubshockError):
        shock.rh_full(problem(1.05))


def test_subshock_pi_vanishes_at_threshold():
    for alpha in (-0.5, 0.0, 0.5, 2.0):
        mc = shock.critical_mach(alpha)
        assert abs(shock.subshock_pi(mc, alpha)) <= 1e-10


def test_critical_mach_values():
    assert shock.critical_mach(0.5) == pytest.approx(math.sqrt(1.25), abs=1e-12)
    # alpha -> infinity limit sqrt(5/3)
    assert shock.critical_mach(1e9) == pytest.approx(math.sqrt(5.0 / 3.0), rel=1e-8)
    for alpha in (-0.99, -0.5, 0.0, 1.0, 10.0):
        assert shock.critical_mach(alpha) > 1.0


def test_reduced_system_fixed_points():
    pr = problem(1.1)
    sys = shock.reduced_system(pr)
    rho, T, Pi = sys.recover(pr.mach0)
    assert (rho, T, Pi) == pytest.approx((1.0, 1.0, 0.0), abs=1e-14)
    assert sys.source(pr.mach0) == pytest.approx(0.0, abs=1e-13)
    _, down = shock.rh_euler(pr)
    rho, T, Pi = sys.recover(down.u)
    assert rho == pytest.approx(down.rho, rel=1e-10)
    assert T == pytest.approx(down.T, rel=1e-10)
    assert Pi == pytest.approx(0.0, abs=1e-10)
    assert sys.source(down.u) == pytest.approx(0.0, abs=1e-10)


def test_sonic_point_hits_upstream_at_critical_mach():
    alpha = 0.5
    mc = shock.critical_mach(alpha)
    sys = shock.reduced_system(shock.ShockProblem(mach0=mc, alpha=alpha, s_star=1.0))
    assert sys.sonic_u == pytest.approx(mc, rel=1e-14)


def test_continuous_profile_endpoints_and_conservation():
    pr = problem(1.1)
    prof = shock.solve_continuous(pr)
    _, down = shock.rh_euler(pr)
    assert prof.flux_residuals().max() <= 1e-8
    assert abs(prof.rho[-1] - down.rho) <= 1e-6
    assert abs(prof.u[-1] - down.u) <= 1e-6
    assert abs(prof.T[-1] - down.T) <= 1e-6
    assert abs(prof.Pi[-1]) <= 1e-6
    assert np.all(np.diff(prof.rho) > 0)
    assert np.all(np.diff(prof.u) < 0)
    assert np.all(prof.Pi >= 0.0)
    assert max(abs(prof.Pi[0]), abs(prof.Pi[-1])) <= 1e-5


def test_continuous_rejects_supercritical():
    with pytest.raises(SonicSingularityError):
        shock.solve_continuous(problem(1.5))
    with pytest.raises(SonicSingularityError):
        shock.solve_continuous(problem(shock.critical_mach(0.5)))


def test_subshock_profile_structure():
    pr = problem(1.5)
    prof = shock.solve_subshock(pr)
    assert prof.subshock is not None
    assert prof.subshock.Pi == pytest.approx(0.25, abs=1e-12)
    zero_rows = np.where(prof.xi == 0.0)[0]
    assert len(zero_rows) == 2
    assert prof.rho[zero_rows[0]] == pytest.approx(1.0, abs=1e-14)
    assert prof.rho[zero_rows[1]] == pytest.approx(1.5, abs=1e-12)
    _, down = shock.rh_euler(pr)
    assert abs(prof.rho[-1] - down.rho) <= 1e-6
    assert prof.flux_residuals().max() <= 1e-8
    assert abs(prof.Pi[-1]) <= 1e-6
    # continuous tail after the jump is strictly monotone
    tail = slice(zero_rows[1], None)
    assert np.all(np.diff(prof.rho[tail]) > 0)
    assert np.all(np.diff(prof.u[tail]) < 0)


def test_subshock_not_below_threshold():
    with pytest.raises(NoSubshockError):
        shock.solve_subshock(problem(1.1))


def test_nonconvergence_reported():
    with pytest.raises(ProfileError, match="not reached"):
        shock.solve_continuous(problem(1.1, max_span=1.0))


def test_normalization():
    prof = shock.normalize_profile(shock.solve_continuous(problem(1.1)))
    assert prof.rho_norm[0] == 0.0 and prof.rho_norm[-1] == 1.0
    assert prof.u_norm[0] == 0.0 and prof.u_norm[-1] == 1.0
    assert prof.T_norm[0] == 0.0 and prof.T_norm[-1] == 1.0
    # velocity decreases yet its normalized form rises 0 -> 1
    assert np.all(np.diff(prof.u) < 0) and np.all(np.diff(prof.u_norm) > 0)
    # origin at the half-rise point of density
    assert np.interp(0.0, prof.xi, prof.rho_norm) == pytest.approx(0.5, abs=1e-6)


def test_normalization_leaves_pi_untouched():
    raw = shock.solve_continuous(problem(1.1))
    norm = shock.normalize_profile(raw)
    assert np.array_equal(raw.Pi, norm.Pi)


def test_normalization_subshock_keeps_origin():
    prof = shock.normalize_profile(shock.solve_subshock(problem(1.5)))
    zero_rows = np.where(prof.xi == 0.0)[0]
    assert len(zero_rows) == 2


def test_thickness_orderings():
    thick_s = [shock.thickness(shock.solve_continuous(problem(1.1, s_star=s)))
               for s in (-1.0, 0.0, 1.0, 2.0)]
    assert all(a > b for a, b in zip(thick_s, thick_s[1:]))

    thick_alpha = []
    peak_pi = []
    for alpha in (-0.5, 0.0, 0.5, 1.5):
        prof = shock.solve_continuous(problem(1.05, alpha=alpha, s_star=1.0))
        thick_alpha.append(shock.thickness(prof))
        peak_pi.append(np.max(np.abs(prof.Pi)))
    assert all(a < b for a, b in zip(thick_alpha, thick_alpha[1:]))
    # the dynamic-pressure hump concentrates toward the monatomic end:
    # its peak grows mildly while its extent shrinks with the thickness
    assert all(a > b for a, b in zip(peak_pi, peak_pi[1:]))

    thick_m = [shock.thickness(shock.solve_subshock(problem(m0)))
               for m0 in (1.5, 2.0, 3.0)]
    assert all(a > b for a, b in zip(thick_m, thick_m[1:]))


def test_problem_from_cross_section():
    xsec = CrossSectionSpec(variant="generalized", K=1.0, s=0.5, beta=1.0, q=-1.0)
    pr = shock.ShockProblem.from_cross_section(1.1, 0.5, xsec)
    assert pr.s_star == pytest.approx(-0.5)
    assert pr.alpha_star == pytest.approx(0.0)
    std = CrossSectionSpec(variant="standard", K=1.0, s=2.0)
    pr2 = shock.ShockProblem.from_cross_section(1.1, 0.5, std)
    assert pr2.s_star == 2.0 and pr2.alpha_star == 0.5


def test_problem_bounds():
    with pytest.raises(ValueError, match="mach0 must exceed 1"):
        shock.ShockProblem(mach0=1.0, alpha=0.5)
    with pytest.raises(ValueError, match="alpha must exceed -1"):
        shock.ShockProblem(mach0=1.5, alpha=-1.0)


def test_translation_invariance_of_shape():
    # a different launch offset only translates the profile; normalized
    # shapes coincide on a common grid
    a = shock.normalize_profile(shock.solve_continuous(problem(1.1, n_samples=900)))
    b = shock.normalize_profile(shock.solve_continuous(problem(1.1, n_samples=1700)))
    grid = np.linspace(-5.0, 5.0, 101)
    ra = np.interp(grid, a.xi, a.rho_norm)
    rb = np.interp(grid, b.xi, b.rho_norm)
    # residual is piecewise-linear interpolation error of the coarser grid,
    # bounded by max|rho''| h^2 / 8 ~ 3e-5 at 900 samples
    assert np.max(np.abs(ra - rb)) <= 5e-5
