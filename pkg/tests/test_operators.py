import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hsgfs.optimizer import (
    HsgfsConfig,
    Particle,
    acceleration,
    coefficients,
    compute_masses,
    grav_constant,
    init_population,
    particle_distance,
    total_force,
    update_position,
    update_velocity,
)
from hsgfs.optimizer.operators import flip_probability


def test_init_population_shape_and_repair():
    pop = init_population(10, 20, np.random.default_rng(5))
    assert len(pop) == 20
    for p in pop:
        assert p.position.shape == (10,) and p.position.any()
        assert (p.velocity == 0).all()


def test_init_repairs_single_feature_masks():
    # with n=1 roughly half the draws are empty and must be repaired
    assert all(p.position.tolist() == [True] for p in init_population(1, 50, np.random.default_rng(0)))


def test_init_deterministic():
    a = init_population(12, 20, np.random.default_rng(3))
    b = init_population(12, 20, np.random.default_rng(3))
    assert all((x.position == y.position).all() for x, y in zip(a, b))


def test_init_bit_rate():
    pop = init_population(500, 20, np.random.default_rng(8))
    bits = np.array([p.position for p in pop])
    assert bits.size == 10_000
    assert abs(bits.mean() - 0.5) <= 0.02


def test_masses_example():
    raw, norm = compute_masses([0.5, 0.8, 0.9])
    np.testing.assert_allclose(raw, [0.0, 0.75, 1.0], rtol=0, atol=1e-15)
    np.testing.assert_allclose(norm, [0.0, 0.75 / 1.75, 1.0 / 1.75], rtol=0, atol=1e-15)
    assert norm[1] == pytest.approx(0.428571, abs=1e-6)


def test_masses_degenerate():
    raw, norm = compute_masses([0.7] * 5)
    assert norm.tolist() == [0.2] * 5
    assert (raw == 1).all()


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=2, max_size=30))
def test_mass_endpoints(fits):
    raw, norm = compute_masses(fits)
    if max(fits) > min(fits):
        assert raw[int(np.argmax(fits))] == 1.0
        assert raw[int(np.argmin(fits))] == 0.0
    assert abs(norm.sum() - 1) <= 1e-12
    assert ((raw >= 0) & (raw <= 1)).all() and ((norm >= 0) & (norm <= 1)).all()


def test_grav_constant_schedule():
    cfg = HsgfsConfig()
    assert grav_constant(0, cfg) == 1.0
    assert grav_constant(15, cfg) == pytest.approx(2.061153622438558e-09, rel=1e-12)
    values = [grav_constant(t, cfg) for t in range(16)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_coefficient_endpoints():
    assert coefficients(0, 15) == (2.0, 0.0)
    assert coefficients(15, 15) == (0.0, 2.0)
    c1, c2 = coefficients(7, 15)
    assert c1 == pytest.approx(1.796740741, abs=1e-8)
    assert c2 == pytest.approx(0.203259259, abs=1e-8)
    assert c1 + c2 == 2.0


def test_distance_examples():
    a = np.array([1, 0, 1, 1, 0], bool)
    b = np.array([1, 0, 0, 1, 1], bool)
    assert particle_distance(a, a) == 0.0
    assert particle_distance(a, b) == pytest.approx(math.sqrt(2), abs=1e-15)
    with pytest.raises(ValueError):
        particle_distance(a, b[:4])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.booleans(), st.booleans()), min_size=1, max_size=64))
def test_distance_symmetric_and_hamming(pairs):
    a = np.array([p[0] for p in pairs])
    b = np.array([p[1] for p in pairs])
    assert particle_distance(a, b) == particle_distance(b, a)
    assert round(particle_distance(a, b) ** 2) == sum(x != y for x, y in pairs)


def test_force_zero_for_identical_positions():
    pos = np.array([[1, 0, 1], [1, 0, 1]], float)
    f = total_force(0, pos, np.array([0.5, 0.5]), 1.0, 1e-9, np.random.default_rng(0))
    assert (f == 0).all()


def test_massless_particle_exerts_no_force():
    pos = np.array([[1, 0, 1, 0], [0, 1, 0, 1]], float)
    f = total_force(1, pos, np.array([0.0, 1.0]), 1.0, 1e-9, r=[0.9])
    assert (f == 0).all()


def hand_force_on_particle_0():
    # positions 1010, 1100, 0111; masses .2 .3 .5; G .5; weights .3 (from 1), .7 (from 2)
    eps = 1e-9
    from_1 = 0.3 * 0.5 * (0.2 * 0.3) / (math.sqrt(2) + eps)
    from_2 = 0.7 * 0.5 * (0.2 * 0.5) / (math.sqrt(3) + eps)
    return [
        from_1 * 0 + from_2 * -1,
        from_1 * 1 + from_2 * 1,
        from_1 * -1 + from_2 * 0,
        from_1 * 0 + from_2 * 1,
    ]


def test_force_three_particle_oracle():
    pos = np.array([[1, 0, 1, 0], [1, 1, 0, 0], [0, 1, 1, 1]], float)
    f = total_force(0, pos, np.array([0.2, 0.3, 0.5]), 0.5, 1e-9, r=[0.3, 0.7])
    np.testing.assert_allclose(f, hand_force_on_particle_0(), rtol=0, atol=1e-12)
    a = acceleration(f, 0.2, 1e-9)
    np.testing.assert_allclose(a, [v / (0.2 + 1e-9) for v in hand_force_on_particle_0()], rtol=0, atol=1e-12)


def test_force_draws_one_weight_per_pair():
    pos = np.random.default_rng(0).random((5, 6)) < 0.5
    m = np.full(5, 0.2)
    rng = np.random.default_rng(4)
    drawn = np.random.default_rng(4).random(4)
    np.testing.assert_array_equal(total_force(2, pos, m, 1.0, 1e-9, rng),
                                  total_force(2, pos, m, 1.0, 1e-9, r=drawn))


def test_acceleration_cases():
    assert (acceleration(np.zeros(3), 0.4, 1e-9) == 0).all()
    np.testing.assert_allclose(acceleration([1.0, 2.0], 0.5, 1e-15), [2.0, 4.0], rtol=1e-12)
    assert acceleration([1.0], 0.0, 1e-9)[0] == pytest.approx(1e9)


def test_velocity_first_iteration_ignores_gbest():
    cfg = HsgfsConfig()
    p = Particle(np.array([1, 0, 1], bool), np.array([0.4, -0.2, 1.0]))
    accel = np.array([0.1, 0.2, -0.3])
    v0 = update_velocity(p, accel, np.array([0, 1, 1], bool), 0, cfg, np.random.default_rng(1))
    r = np.random.default_rng(1).random(3)
    np.testing.assert_allclose(v0, r * p.velocity + 2 * accel, rtol=0, atol=1e-15)


def test_velocity_last_iteration_pure_social():
    cfg = HsgfsConfig()
    p = Particle(np.array([1, 0, 1], bool), np.array([0.4, -0.2, 1.0]))
    gbest = np.array([0, 1, 1], bool)
    v = update_velocity(p, np.array([5.0, 5.0, 5.0]), gbest, 15, cfg, np.random.default_rng(2))
    r = np.random.default_rng(2).random(3)
    np.testing.assert_allclose(v, r * p.velocity + 2 * np.array([-1, 1, 0]), rtol=0, atol=1e-15)


def test_velocity_clamped():
    cfg = HsgfsConfig(v_max=6)
    p = Particle(np.array([0, 1], bool), np.zeros(2))
    v = update_velocity(p, np.array([100.0, -100.0]), np.array([0, 1], bool), 0, cfg, np.random.default_rng(0))
    assert v.tolist() == [6.0, -6.0]


def test_position_zero_velocity_keeps_bits():
    p = Particle(np.array([1, 0, 1, 1], bool), np.zeros(4))
    assert (update_position(p, np.random.default_rng(0)) == p.position).all()


def test_flip_probability_at_clamp():
    assert flip_probability(6.0) == pytest.approx(0.9999877, abs=1e-7)
    assert flip_probability(-6.0) == flip_probability(6.0)


def test_flip_rate_monte_carlo():
    p = Particle(np.ones(10_000, bool), np.ones(10_000))
    new = update_position(p, np.random.default_rng(12))
    assert abs((~new).mean() - math.tanh(1)) <= 0.02


def test_empty_position_repaired_with_fallback():
    p = Particle(np.array([1, 0, 0], bool), np.array([6.0, 0.0, 0.0]))
    rng = np.random.default_rng(0)
    for _ in range(20):
        out = update_position(p, rng, fallback_feature=2)
        assert out.any()
        if not out[0]:
            assert out.tolist() == [False, False, True]


def test_config_validation():
    with pytest.raises(ValueError):
        HsgfsConfig(pop_size=1)
    with pytest.raises(ValueError):
        HsgfsConfig(alpha=0)
    assert HsgfsConfig().capacity == 20
    assert HsgfsConfig().evaluation_budget == 620
