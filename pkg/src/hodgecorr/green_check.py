r"""Weak-form certification of the Green kernel.

The kernel equation (2 pi i)^{-1} d'' d' G = delta_Diagonal - P_Har is
tested bilinearly against forms Phi = phi(x) V(y) + V(x) phi(y) built
from a degree-0 test function phi and a reference two-form V of known
total mass.  Integrating by parts twice on the compact sphere moves
d'' d' onto phi, so the identity to check is

    2 (2 pi i)^{-1} \int\int G(x,y) (dbar d phi)(x) ^ V(y)
        =  2 \int_X phi V  -  2 phi(a) mass(V).

Test data are chordal Gaussians whose centers stay chordally separated
from each other and from the base point, which keeps every integrand
effectively supported on two smooth patches; the double integral is then
a plain tensor sum.  The negative control re-runs a deliberately
mis-normalized kernel on an overlapping configuration where the defect
is of order one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .forms import ScalarProfile, TwoFormProfile, chordal_gauss_profile, \
    chordal_gauss_two_form, constant_profile
from .quadrature import pairwise_sum, patch_grid
from .sphere import GreenKernel, SpherePoint, chordal

MIN_SEPARATION = 0.45


@dataclass
class WeakFormTest:
    phi: ScalarProfile
    phi_center: SpherePoint
    v: TwoFormProfile
    v_center: SpherePoint

    @property
    def patch_radius(self) -> float:
        return 0.36


def random_weak_form_test(rng, base, lam_range=(150.0, 400.0),
                          separation=MIN_SEPARATION) -> WeakFormTest:
    """Random Gaussian test pair, separated from each other and the base."""
    base = SpherePoint.of(base)

    def draw():
        while True:
            z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            if abs(z) <= 0.99:
                return SpherePoint.of(z)

    for _ in range(500):
        p = draw()
        q = draw()
        if (chordal(p, q) >= separation and chordal(p, base) >= separation
                and chordal(q, base) >= separation):
            lam_p = rng.uniform(*lam_range)
            lam_q = rng.uniform(*lam_range)
            amp = rng.uniform(0.5, 2.0)
            return WeakFormTest(chordal_gauss_profile(p, lam_p), p,
                                chordal_gauss_two_form(q, lam_q, amp), q)
    raise RuntimeError("could not separate test centers from the base point")


def _patches(test: WeakFormTest, res: int):
    nr = max(12, res // 4)
    nt = max(24, res // 2)
    gx = patch_grid(test.phi_center, test.patch_radius, nr, nt)
    gy = patch_grid(test.v_center, test.patch_radius, nr, nt)
    return gx, gy


def weak_form_sides(kernel: GreenKernel, test: WeakFormTest, res: int):
    """(lhs, rhs) of the bilinear weak identity at the given resolution."""
    gx, gy = _patches(test, res)
    qx = test.phi.dzdzbar(gx.nodes) / math.pi * gx.weights
    vy = test.v.area_density(gy.nodes) * gy.weights
    lhs_parts = []
    chunk = 2048
    for i in range(0, gx.nodes.size, chunk):
        zb = gx.nodes[i:i + chunk]
        g = kernel.eval_arrays(zb[:, None], gy.nodes[None, :])
        rows = (qx[i:i + chunk, None] * g * vy[None, :]).sum(axis=1)
        lhs_parts.append(pairwise_sum(list(rows)))
    lhs = 2.0 * pairwise_sum(lhs_parts)
    phi_v = pairwise_sum(list(test.phi.value(gy.nodes)
                              * test.v.area_density(gy.nodes) * gy.weights))
    mass = test.v.mass
    rhs = 2.0 * phi_v - 2.0 * test.phi.value_at(kernel.base) * mass
    return lhs, rhs


def green_pde_residual(kernel: GreenKernel, test: WeakFormTest,
                       res: int = 256) -> float:
    """Absolute weak-form residual for one test pair."""
    lhs, rhs = weak_form_sides(kernel, test, res)
    return abs(lhs - rhs)


def residual_with_trace(kernel: GreenKernel, test: WeakFormTest,
                        res: int = 256, levels: int = 2):
    """Residuals at a ladder of resolutions (refinement trace)."""
    trace = []
    r = res // (2 ** (levels - 1))
    for _ in range(levels):
        trace.append((r, green_pde_residual(kernel, test, r)))
        r *= 2
    return trace


def constant_test_residual(kernel: GreenKernel, res: int = 128) -> float:
    """phi = const: both sides vanish after harmonic projection."""
    q = SpherePoint.of(0.62 + 0.31j)
    if chordal(q, kernel.base) < 0.3:
        q = SpherePoint.of(-0.62 - 0.31j)
    test = WeakFormTest(constant_profile(1.3), SpherePoint.of(0j),
                        chordal_gauss_two_form(q, 220.0, 1.0), q)
    return green_pde_residual(kernel, test, res)


def negative_control_residual(base, res: int = 128,
                              scale: float = 2.0) -> float:
    """Residual of the kernel mis-normalized by `scale`, on an overlapping
    configuration where the defect is of order the diagonal term."""
    base = SpherePoint.of(base)
    center = SpherePoint.of(0.55 + 0.2j)
    if chordal(center, base) < 0.35:
        center = SpherePoint.of(-0.55 - 0.2j)
    bad = GreenKernel(base, kappa=2.0 * scale)
    # v sits almost on top of phi (offset avoids coincident grid nodes on
    # the diagonal) and carries unit mass, so the delta_Diagonal term and
    # hence the defect are of order one
    lam = 180.0
    amp = lam / (1.0 - math.exp(-lam))
    v_center = SpherePoint.of(center.value + 0.013 + 0.007j)
    test = WeakFormTest(chordal_gauss_profile(center, lam), center,
                        chordal_gauss_two_form(v_center, lam, amp), v_center)
    return green_pde_residual(bad, test, res)


def base_point_change_residual(base_a, base_b, test: WeakFormTest,
                               res: int = 192) -> float:
    """The kernel difference solves the homogeneous equation up to the
    harmonic-projector difference: tests
    lhs(G_a) - lhs(G_b) = 2 (phi(b) - phi(a)) mass(V)."""
    ka, kb = GreenKernel(base_a), GreenKernel(base_b)
    lhs_a, _ = weak_form_sides(ka, test, res)
    lhs_b, _ = weak_form_sides(kb, test, res)
    mass = test.v.mass
    expected = 2.0 * (test.phi.value_at(SpherePoint.of(base_b))
                      - test.phi.value_at(SpherePoint.of(base_a))) * mass
    return abs((lhs_a - lhs_b) - expected)


def chart_agreement(kernel: GreenKernel, rng, n_pairs: int = 64) -> float:
    """Max relative disagreement between the two chart evaluations."""
    base = kernel.base
    if base.at_infinity:
        base_w = SpherePoint.of(0j)
    else:
        base_w = SpherePoint.of(1.0 / base.value) if base.value != 0 \
            else SpherePoint.of(None)
    kernel_w = GreenKernel(base_w, kernel.kappa)
    worst = 0.0
    count = 0
    while count < n_pairs:
        x = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        y = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if x == 0 or y == 0:
            continue
        if min(chordal(x, y), chordal(x, base), chordal(y, base)) < 0.05:
            continue
        g_z = kernel.eval(x, y)
        g_w = kernel_w.eval(1.0 / x, 1.0 / y)
        worst = max(worst, abs(g_z - g_w) / max(abs(g_z), 1e-30))
        count += 1
    return worst


def diagonal_mass(kernel: GreenKernel, y0, radius: float,
                  nr: int = 96, nt: int = 64) -> float:
    """integral of |G(x, y0)| over the chordal disk of the given radius."""
    y0 = SpherePoint.of(y0)
    g = patch_grid(y0, radius, nr, nt, log_radial=True)
    from .quadrature import smooth_bump
    from .sphere import chordal_sq_arrays
    u = chordal_sq_arrays(g.nodes, y0)
    inside = (u <= radius ** 2).astype(float)
    vals = np.abs(kernel.eval_arrays(g.nodes, y0)) * inside
    return float(np.real(pairwise_sum(list(vals * g.weights))))
