import math

import numpy as np
import pytest

from polyshock.collisions import (
    CollisionState,
    CrossSectionSpec,
    collision_invariant_residuals,
    collision_jacobian,
    collision_transform,
    cross_section,
    microreversibility_residual,
    total_energy,
)
from polyshock.errors import (
    DegenerateCollisionError,
    SingularCrossSectionError,
    SingularJacobianError,
)
from polyshock.gas import GasParameters
from polyshock.verify import _fd_jacobian, _random_collision_state

PARAMS = GasParameters(alpha=0.5)

# worked head-on collision used throughout: E = 1 + 0.2 = 1.2
EXAMPLE = CollisionState(
    v=(1.0, 0.0, 0.0), v_star=(-1.0, 0.0, 0.0),
    I=0.1, I_star=0.1, r=0.5, R=0.5, omega=(1.0, 0.0, 0.0),
)
SQRT06 = 0.7745966692414834


def test_transform_worked_example():
    post = collision_transform(EXAMPLE, PARAMS)
    assert post.v == pytest.approx((-SQRT06, 0.0, 0.0), abs=1e-15)
    assert post.v_star == pytest.approx((SQRT06, 0.0, 0.0), abs=1e-15)
    assert post.I == pytest.approx(0.3, rel=1e-15)
    assert post.I_star == pytest.approx(0.3, rel=1e-15)
    assert post.R == pytest.approx(5.0 / 6.0, rel=1e-15)
    assert post.r == pytest.approx(0.5, rel=1e-15)


def test_energy_conserved_worked_example():
    post = collision_transform(EXAMPLE, PARAMS)
    pre_total = 0.5 * (1.0 + 1.0) + 0.2
    post_total = 0.5 * (2 * SQRT06 ** 2) + post.I + post.I_star
    assert pre_total == pytest.approx(1.2, rel=1e-15)
    assert post_total == pytest.approx(pre_total, rel=1e-14)


def test_total_energy():
    assert total_energy(EXAMPLE, PARAMS) == pytest.approx(1.2, rel=1e-15)


def test_involution_on_worked_example():
    back = collision_transform(collision_transform(EXAMPLE, PARAMS), PARAMS)
    assert back.v == pytest.approx(EXAMPLE.v, abs=1e-12)
    assert back.v_star == pytest.approx(EXAMPLE.v_star, abs=1e-12)
    assert back.I == pytest.approx(EXAMPLE.I, abs=1e-12)
    assert back.I_star == pytest.approx(EXAMPLE.I_star, abs=1e-12)
    assert back.r == pytest.approx(EXAMPLE.r, abs=1e-12)
    assert back.R == pytest.approx(EXAMPLE.R, abs=1e-12)


def test_degenerate_collisions_rejected():
    with pytest.raises(DegenerateCollisionError):
        collision_transform(CollisionState(
            v=(0, 0, 0), v_star=(0, 0, 0), I=0.0, I_star=0.0,
            r=0.5, R=0.5, omega=(1, 0, 0)), PARAMS)
    # zero internal pool: r' undefined
    with pytest.raises(DegenerateCollisionError):
        collision_transform(CollisionState(
            v=(1, 0, 0), v_star=(-1, 0, 0), I=0.0, I_star=0.0,
            r=0.5, R=0.5, omega=(1, 0, 0)), PARAMS)


def test_omega_must_be_unit():
    with pytest.raises(ValueError, match="unit"):
        CollisionState(v=(1, 0, 0), v_star=(0, 0, 0), I=0.1, I_star=0.1,
                       r=0.5, R=0.5, omega=(1.0, 1.0, 0.0))


def test_jacobian_worked_example():
    assert collision_jacobian(EXAMPLE, PARAMS) == pytest.approx(
        2.3237900077244503, rel=1e-14
    )


def test_jacobian_matches_finite_differences():
    fd = _fd_jacobian(EXAMPLE, PARAMS)
    assert fd == pytest.approx(3.0 * math.sqrt(0.6), rel=1e-7)


def test_jacobian_symmetric_case_is_one():
    # equal kinetic/internal split maps R' = R and |g'| = |g|
    c = CollisionState(v=(1, 0, 0), v_star=(-1, 0, 0), I=0.5, I_star=0.5,
                       r=0.5, R=0.5, omega=(0.0, 1.0, 0.0))
    post = collision_transform(c, PARAMS)
    assert post.R == pytest.approx(c.R, rel=1e-15)
    assert collision_jacobian(c, PARAMS) == pytest.approx(1.0, rel=1e-14)


def test_jacobian_vanishes_as_R_to_one():
    values = []
    for R in (0.9, 0.99, 0.999):
        c = CollisionState(v=(1, 0, 0), v_star=(-1, 0, 0), I=0.1, I_star=0.1,
                           r=0.5, R=R, omega=(1, 0, 0))
        values.append(collision_jacobian(c, PARAMS))
    assert values[0] > values[1] > values[2]
    assert values[2] < 0.02


def test_jacobian_singular_on_boundary():
    c = CollisionState(v=(1, 0, 0), v_star=(-1, 0, 0), I=0.1, I_star=0.1,
                       r=0.5, R=1.0, omega=(1, 0, 0))
    with pytest.raises(SingularJacobianError):
        collision_jacobian(c, PARAMS)


def test_cross_section_standard_values():
    spec = CrossSectionSpec(variant="standard", K=1.0, s=1.0)
    assert cross_section(spec, EXAMPLE) == pytest.approx(2.0, rel=1e-15)
    spec0 = CrossSectionSpec(variant="standard", K=3.7, s=0.0)
    assert cross_section(spec0, EXAMPLE) == pytest.approx(3.7, rel=1e-15)


def test_cross_section_singularities():
    spec = CrossSectionSpec(variant="standard", K=1.0, s=-1.0)
    still = CollisionState(v=(0, 0, 0), v_star=(0, 0, 0), I=0.2, I_star=0.1,
                           r=0.5, R=0.5, omega=(1, 0, 0))
    with pytest.raises(SingularCrossSectionError):
        cross_section(spec, still)


def test_generalized_reduces_to_standard():
    rng = np.random.default_rng(3)
    std = CrossSectionSpec(variant="standard", K=2.0, s=0.7)
    gen = CrossSectionSpec(variant="generalized", K=2.0, s=0.7, beta=0.0, q=0.0)
    for _ in range(50):
        c = _random_collision_state(rng)
        u = tuple(rng.normal(size=3))
        assert cross_section(gen, c, u) == pytest.approx(
            cross_section(std, c, u), rel=1e-15
        )


def test_cross_section_parameter_bounds():
    with pytest.raises(ValueError, match="s must exceed"):
        CrossSectionSpec(variant="standard", K=1.0, s=-1.5)
    with pytest.raises(ValueError, match="beta must exceed"):
        CrossSectionSpec(variant="generalized", K=1.0, s=0.0, beta=-2.0)
    with pytest.raises(ValueError, match="q must exceed"):
        CrossSectionSpec(variant="generalized", K=1.0, s=0.0, q=-1.5)
    with pytest.raises(ValueError, match="K must be positive"):
        CrossSectionSpec(variant="standard", K=0.0)


def test_microreversibility_worked_example():
    # R |g|^2 = 0.5 * 4 = 2 before, (5/6) * (2 sqrt(0.6))^2 = 2 after
    spec = CrossSectionSpec(variant="standard", K=1.0, s=1.0)
    assert microreversibility_residual(spec, EXAMPLE, params=PARAMS) <= 1e-14


def test_microreversibility_random_states():
    rng = np.random.default_rng(12)
    kernels = (
        CrossSectionSpec(variant="standard", K=1.0, s=1.3),
        CrossSectionSpec(variant="generalized", K=1.0, s=-0.5, beta=0.7, q=1.1),
    )
    u = (0.4, -0.1, 0.2)
    for _ in range(300):
        c = _random_collision_state(rng)
        for spec in kernels:
            b = cross_section(spec, c, u)
            assert microreversibility_residual(spec, c, u, PARAMS) <= 1e-10 * abs(b)


def test_swap_symmetry_in_r():
    spec = CrossSectionSpec(variant="generalized", K=1.0, s=0.5, beta=1.0, q=0.5)
    u = (0.1, 0.2, -0.3)
    swapped = EXAMPLE.swapped()
    assert cross_section(spec, swapped, u) == pytest.approx(
        cross_section(spec, EXAMPLE, u), rel=1e-15
    )


def test_collision_invariants_random_states():
    rng = np.random.default_rng(99)
    for _ in range(100):
        c = _random_collision_state(rng)
        momentum, energy = collision_invariant_residuals(c, PARAMS)
        assert np.max(np.abs(momentum)) <= 1e-12
        assert abs(energy) <= 1e-12
