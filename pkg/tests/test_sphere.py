import math
import random

import numpy as np
import pytest

from hodgecorr.sphere import (
    SpherePoint, GreenKernel, SingularityError, chordal, chordal_sq_arrays,
    HarmonicBasis, harmonic_projector_kernel,
)
from hodgecorr.forms import chordal_gauss_profile, constant_profile
from hodgecorr.green_check import (
    WeakFormTest, random_weak_form_test, green_pde_residual,
    constant_test_residual, negative_control_residual,
    base_point_change_residual, chart_agreement, diagonal_mass,
    weak_form_sides,
)


def test_chordal_basics():
    assert chordal(0, 0) == 0
    assert abs(chordal(0, None) - 1.0) < 1e-15  # antipodes
    assert abs(chordal(1, 1j) - abs(1 - 1j) / 2.0) < 1e-15
    # invariance under z -> 1/z
    rng = random.Random(0)
    for _ in range(50):
        x = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        y = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        if x == 0 or y == 0:
            continue
        assert abs(chordal(x, y) - chordal(1 / x, 1 / y)) < 1e-13


def test_chart_tags():
    assert SpherePoint.of(0.5).chart == "z"
    assert SpherePoint.of(3.0).chart == "w"
    assert SpherePoint.of(None).chart == "w"
    assert SpherePoint.of("inf").at_infinity


def test_green_symmetry_bitwise():
    rng = random.Random(1)
    k = GreenKernel(0.3 + 0.1j)
    checked = 0
    while checked < 10_000:
        x = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        y = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        try:
            gxy = k.eval(x, y)
            gyx = k.eval(y, x)
        except SingularityError:
            continue
        assert gxy == gyx  # bitwise
        checked += 1


def test_green_singular_configurations():
    k = GreenKernel(0j)
    with pytest.raises(SingularityError):
        k.eval(0.5, 0.5)
    with pytest.raises(SingularityError):
        k.eval(0, 0.5)
    with pytest.raises(SingularityError):
        k.eval(0.5, 0)
    k_inf = GreenKernel(None)
    with pytest.raises(SingularityError):
        k_inf.eval(None, 0.5)


def test_green_at_infinite_base_is_pure_log():
    k = GreenKernel(None)
    rng = random.Random(3)
    for _ in range(40):
        x = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        y = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if abs(x - y) < 1e-3:
            continue
        expected = 2.0 * math.log(abs(x - y))
        assert abs(k.eval(x, y) - expected) < 1e-12


def test_green_chart_agreement_ten_digits():
    rng = random.Random(7)
    for base in (0.25 + 0.4j, None):
        worst = chart_agreement(GreenKernel(base), rng, n_pairs=200)
        assert worst < 1e-10


def test_green_derivative_matches_finite_difference():
    k = GreenKernel(0.2 - 0.3j)
    z = np.array([0.7 + 0.4j])
    y = np.array([-0.5 + 0.1j])
    h = 1e-6
    g0 = k.eval_arrays(z, y)
    gx = (k.eval_arrays(z + h, y) - k.eval_arrays(z - h, y)) / (2 * h)
    gy = (k.eval_arrays(z + 1j * h, y) - k.eval_arrays(z - 1j * h, y)) / (2 * h)
    dz_fd = 0.5 * (gx - 1j * gy)
    dzb_fd = 0.5 * (gx + 1j * gy)
    assert abs(k.dz_first(z, y)[0] - dz_fd[0]) < 1e-5
    assert abs(k.dzbar_first(z, y)[0] - dzb_fd[0]) < 1e-5
    assert np.isfinite(g0).all()


def test_weak_form_residual_random_forms():
    rng = random.Random(11)
    kernel = GreenKernel(0.1 + 0.05j)
    for _ in range(5):
        test = random_weak_form_test(rng, kernel.base)
        assert green_pde_residual(kernel, test, res=160) < 1e-3


def test_weak_form_residual_infinite_base():
    rng = random.Random(13)
    kernel = GreenKernel(None)
    test = random_weak_form_test(rng, kernel.base)
    assert green_pde_residual(kernel, test, res=160) < 1e-3


def test_weak_form_constant_test_function():
    assert constant_test_residual(GreenKernel(0.1 + 0.05j), res=128) < 1e-6


def test_negative_control_exceeds_threshold():
    assert negative_control_residual(0.1 + 0.05j, res=128) > 1e-1


def test_base_point_change_matches_projector_difference():
    rng = random.Random(17)
    a, b = 0.1 + 0.05j, -0.3 + 0.2j
    # keep the test data away from both base points
    test = None
    while test is None:
        cand = random_weak_form_test(rng, a)
        if chordal(cand.phi_center, b) >= 0.45 and chordal(cand.v_center, b) >= 0.45:
            test = cand
    assert base_point_change_residual(a, b, test, res=160) < 1e-3


def test_diagonal_mass_vanishes_like_r2_log():
    kernel = GreenKernel(0.4 + 0.1j)
    y0 = -0.35 + 0.2j
    masses = [diagonal_mass(kernel, y0, r) for r in (1e-1, 1e-2, 1e-3)]
    assert all(np.isfinite(m) for m in masses)
    assert masses[0] > masses[1] > masses[2] > 0
    for r, m in zip((1e-1, 1e-2, 1e-3), masses):
        assert m < 60.0 * r ** 2 * (1.0 + abs(math.log(r)))


def test_harmonic_projector_reproduces_basis():
    basis = HarmonicBasis(0.25 + 0.1j)
    proj = harmonic_projector_kernel(basis)
    assert proj.rank == 2
    # degree-0: projection of f is f(a) * 1
    f = chordal_gauss_profile(0.7, 90.0, amp=2.0)
    out = proj.pair_second_slot_function(f)
    assert abs(out["one"] - f.value_at(basis.base)) < 1e-14
    assert out["fund"] == 0.0
    # constant is reproduced exactly
    c = constant_profile(1.5 + 0.5j)
    out = proj.pair_second_slot_function(c)
    assert abs(out["one"] - (1.5 + 0.5j)) < 1e-14
    # degree-2: projection keeps the total mass on the fundamental slot
    out2 = proj.pair_second_slot_two_form(mass=0.0)
    assert out2["fund"] == 0.0
    out3 = proj.pair_second_slot_two_form(mass=2.5)
    assert out3["fund"] == 2.5


def test_weak_form_sides_close_at_two_resolutions():
    rng = random.Random(23)
    kernel = GreenKernel(0.1 + 0.05j)
    test = random_weak_form_test(rng, kernel.base)
    l1, r1 = weak_form_sides(kernel, test, 96)
    l2, r2 = weak_form_sides(kernel, test, 192)
    assert abs(l2 - r2) <= abs(l1 - r1) + 1e-6
