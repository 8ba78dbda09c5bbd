import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from neutral_lame.core_model import (CoatedDisks, ElasticPhase, SmoothCurve, UniformLoad,
                                     phases_from_moduli)
from neutral_lame.kelvin_bem import (EvaluationAtOrigin, GeometryOverlap, KelvinKernel,
                                     PointOnBoundary, TransmissionScenario,
                                     check_divdiv_identity, check_divergence_identity,
                                     evaluate_field, kelvin_matrix, neutrality_gap, single_layer,
                                     solve_transmission, traction_kernel,
                                     traction_of_single_layer)
from neutral_lame.kelvin_bem.operators import resample_periodic

UNIT = KelvinKernel(ElasticPhase(1.0, 1.0))


def test_kelvin_matrix_examples():
    G = kelvin_matrix(UNIT, [1.0, 0.0])
    np.testing.assert_allclose(G, [[-1 / (8 * np.pi), 0], [0, 0]], atol=1e-16)
    assert G[0, 0] == pytest.approx(-0.0397887, abs=1e-7)
    G = kelvin_matrix(UNIT, [0.0, 2.0])
    assert G[0, 0] == pytest.approx(0.75 / (2 * np.pi) * np.log(2))
    assert G[1, 1] == pytest.approx(0.75 / (2 * np.pi) * np.log(2) - 0.25 / (2 * np.pi))
    with pytest.raises(EvaluationAtOrigin):
        kelvin_matrix(UNIT, [0.0, 0.0])


def test_kelvin_matrix_symmetric_and_even():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(1000, 2)) * rng.uniform(0.01, 10, size=(1000, 1))
    ker = KelvinKernel(ElasticPhase(0.7, 3.1))
    G = kelvin_matrix(ker, x)
    np.testing.assert_array_equal(G, np.swapaxes(G, -1, -2))
    np.testing.assert_allclose(G, kelvin_matrix(ker, -x), rtol=1e-14, atol=1e-16)


def test_traction_kernel_matches_finite_differences():
    ker = KelvinKernel(ElasticPhase(1.3, 0.6))
    r = np.array([0.7, -0.4])
    n = np.array([0.6, 0.8])
    h = 1e-6
    grad = np.zeros((2, 2, 2))                      # d Gamma_ij / d x_l
    for l in range(2):
        e = np.zeros(2)
        e[l] = h
        grad[:, :, l] = (kelvin_matrix(ker, r + e) - kelvin_matrix(ker, r - e)) / (2 * h)
    T = np.zeros((2, 2))
    for j in range(2):
        du = grad[:, j, :]                          # du_i / dx_l for force e_j
        strain = 0.5 * (du + du.T)
        stress = (ker.kappa - ker.mu) * np.trace(strain) * np.eye(2) + 2 * ker.mu * strain
        T[:, j] = stress @ n
    np.testing.assert_allclose(traction_kernel(ker, r, n), T, atol=1e-8)


def test_divergence_identity_examples():
    assert check_divergence_identity(UNIT, [0, 0], [1, 1], 1e-5) < 1e-8
    for t in 2 * np.pi * np.arange(16) / 16:
        assert check_divergence_identity(UNIT, [0.2, 0.1], [0.2 + np.cos(t), 0.1 + np.sin(t)]) < 1e-8
    with pytest.raises(EvaluationAtOrigin):
        check_divergence_identity(UNIT, [1, 1], [1, 1])


def test_divergence_identity_prefactor_scaling():
    from neutral_lame.kelvin_bem.kernel import div_y_kelvin_exact
    a = div_y_kelvin_exact(KelvinKernel(ElasticPhase(1.0, 1.0)), [0.3, 0.2], [1.0, -0.5])
    b = div_y_kelvin_exact(KelvinKernel(ElasticPhase(2.0, 2.0)), [0.3, 0.2], [1.0, -0.5])
    np.testing.assert_allclose(b, a / 2, rtol=1e-15)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0, 2 * np.pi), st.floats(0.3, 3),
       st.floats(-2, 2), st.floats(-2, 2))
def test_divergence_identity_random(mu, kappa, theta, dist, x0, y0):
    x = np.array([x0, y0])
    y = x + dist * np.array([np.cos(theta), np.sin(theta)])
    assert check_divergence_identity(KelvinKernel(ElasticPhase(mu, kappa)), x, y) < 1e-8


def test_divdiv_identity():
    vals, expected = check_divdiv_identity(UNIT, [[0.3, 0.0], [0.0, 0.3], [3.0, 0.0]])
    assert expected.tolist() == [-0.5, -0.5, 0.0]
    assert np.all(np.abs(vals - expected) < 1e-3)
    assert abs(vals[0] - vals[1]) < 1e-3


def _smooth_density(curve, n):
    t = curve.discretize(n).t
    return np.column_stack([np.cos(t) + 0.3 * np.sin(2 * t), np.sin(3 * t) - 0.2])


CURVE = SmoothCurve.polar_perturbation(1.0, 0.1, 3)
KER = KelvinKernel(ElasticPhase(1.0, 2.0))


def test_single_layer_zero_density():
    f = np.zeros((64, 2))
    assert np.all(single_layer(KER, CURVE, f) == 0)
    assert np.all(single_layer(KER, CURVE, f, x=[[3.0, 1.0]]) == 0)
    assert np.all(traction_of_single_layer(KER, CURVE, f) == 0)


def test_single_layer_far_field_is_point_source():
    circle = SmoothCurve.circle(1.0)
    f = np.tile([0.4, -0.9], (128, 1))
    x = np.array([[10.0, 0.0], [0.0, -10.0], [7.07, 7.07]])
    u = single_layer(KER, circle, f, x=x)
    total = f[0] * 2 * np.pi
    ref = kelvin_matrix(KER, x) @ total
    np.testing.assert_allclose(u, ref, rtol=1e-2)


def test_single_layer_node_doubling():
    f128 = _smooth_density(CURVE, 128)
    f256 = resample_periodic(f128, 256)
    on128 = single_layer(KER, CURVE, f128)
    on256 = single_layer(KER, CURVE, f256)
    assert np.abs(on128 - on256[::2]).max() < 1e-10
    x = [[0.3, 0.1], [2.0, 0.5]]
    assert np.abs(single_layer(KER, CURVE, f128, x=x) - single_layer(KER, CURVE, f256, x=x)).max() < 1e-10


def test_traction_jump_equals_density():
    circle = SmoothCurve.circle(1.0)
    f = _smooth_density(circle, 256)
    ext = traction_of_single_layer(KER, circle, f, side="exterior")
    inn = traction_of_single_layer(KER, circle, f, side="interior")
    assert np.abs(ext - inn - f).max() < 1e-8
    with pytest.raises(ValueError):
        traction_of_single_layer(KER, circle, f, side="left")


@pytest.mark.parametrize("side,sign", [("exterior", 1.0), ("interior", -1.0)])
def test_traction_matches_off_curve_limit(side, sign):
    n, m = 64, 32768
    nodes = CURVE.discretize(n)
    f = _smooth_density(CURVE, n)
    onesided = traction_of_single_layer(KER, CURVE, f, side=side)
    fine = CURVE.discretize(m)
    ff = resample_periodic(f, m)
    for i in (0, 7, 21):
        y, nu = nodes.xy[i], nodes.normal_xy[i]

        def trac(d):
            T = traction_kernel(KER, y + sign * d * nu - fine.xy, np.broadcast_to(nu, (m, 2)))
            return np.einsum("kij,kj,k->i", T, ff, fine.weights)

        limit = (8 * trac(0.0025) - 6 * trac(0.005) + trac(0.01)) / 3
        assert np.abs(limit - onesided[i]).max() < 5e-5


def test_traction_equilibrium():
    f = _smooth_density(CURVE, 256)
    w = CURVE.discretize(256).weights
    ext = traction_of_single_layer(KER, CURVE, f, side="exterior")
    inn = traction_of_single_layer(KER, CURVE, f, side="interior")
    np.testing.assert_allclose(w @ inn, 0.0, atol=1e-8)
    np.testing.assert_allclose(w @ ext, w @ f, atol=1e-8)


def test_traction_node_index():
    f = _smooth_density(CURVE, 64)
    full = traction_of_single_layer(KER, CURVE, f)
    np.testing.assert_array_equal(traction_of_single_layer(KER, CURVE, f, node_index=5), full[5])
    with pytest.raises(IndexError):
        traction_of_single_layer(KER, CURVE, f, node_index=64)


def test_homogeneous_transmission():
    ph = phases_from_moduli([1.0] * 3, [2.0] * 3)
    load = UniformLoad(((0.5, 0.2), (0.2, -1.0)))
    sol = solve_transmission(TransmissionScenario(CURVE, SmoothCurve.circle(2.0), ph, load, 128))
    assert max(np.abs(d).max() for d in sol.densities.values()) < 1e-9
    z = np.array([0.2 + 0.1j, 1.5j, 3.0 - 1.0j])
    u = evaluate_field(sol, z)
    hz = load(z)
    np.testing.assert_allclose(u, np.column_stack([hz.real, hz.imag]), atol=1e-9)
    assert neutrality_gap(sol).gap < 1e-9


def test_system_residual_small(template):
    geo, ph = template
    sol = solve_transmission(TransmissionScenario.from_disks(geo, ph, UniformLoad.bulk(), 128))
    assert sol.residual < 1e-10


def test_neutral_disks_gap(neutral_template):
    geo, ph = neutral_template
    rep = neutrality_gap(solve_transmission(TransmissionScenario.from_disks(geo, ph, UniformLoad.bulk())))
    assert rep.gap < 1e-8 and abs(rep.c1) < 1e-8 and abs(rep.c3) < 1e-8


def _perturbed(ph, nodes=256):
    return TransmissionScenario(SmoothCurve.circle(1.0), SmoothCurve.polar_perturbation(2.0, 0.05, 3),
                                ph, UniformLoad.bulk(), nodes)


def test_perturbed_shape_has_gap(neutral_template):
    _, ph = neutral_template
    assert neutrality_gap(solve_transmission(_perturbed(ph))).gap > 1e-5


def test_spectral_convergence(neutral_template):
    _, ph = neutral_template
    g192 = neutrality_gap(solve_transmission(_perturbed(ph, 192))).gap
    g256 = neutrality_gap(solve_transmission(_perturbed(ph, 256))).gap
    assert abs(g192 - g256) < 1e-9


def test_rotation_equivariance():
    ph = phases_from_moduli([2.0, 1.0, 1.0], [1.0, 2.0, 3.0])
    inner = SmoothCurve.polar_perturbation(1.0, 0.05, 2).translated(0.1 + 0.05j)
    sc = TransmissionScenario(inner, SmoothCurve.polar_perturbation(2.0, 0.05, 3), ph,
                              UniformLoad(((1.0, 0.3), (0.3, -0.2))), 192)
    angle = np.pi / 4
    rot = sc.rotated(angle)
    z = np.array([0.1 + 0.2j, 1.5 + 0.1j, -0.2 + 1.45j, 3.0 - 2.0j, -4.0j])
    u = evaluate_field(solve_transmission(sc), z)
    u_rot = evaluate_field(solve_transmission(rot), z * np.exp(1j * angle))
    expect = (u[:, 0] + 1j * u[:, 1]) * np.exp(1j * angle)
    np.testing.assert_allclose(u_rot[:, 0] + 1j * u_rot[:, 1], expect, atol=1e-8)


def test_geometry_overlap(template):
    _, ph = template
    inner = SmoothCurve.circle(1.0, (1.5, 0.0))
    with pytest.raises(GeometryOverlap):
        solve_transmission(TransmissionScenario(inner, SmoothCurve.circle(2.0), ph,
                                                UniformLoad.bulk(), 64))


def test_point_on_boundary(template):
    geo, ph = template
    sol = solve_transmission(TransmissionScenario.from_disks(geo, ph, UniformLoad.bulk(), 64))
    with pytest.raises(PointOnBoundary):
        evaluate_field(sol, np.array([2.0 + 0j]))
