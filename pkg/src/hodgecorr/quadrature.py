"""Quadrature and Monte Carlo on the sphere, deterministic by design.

The sphere splits exactly into the two chart disks |z| <= 1 and
|w| <= 1 (w = 1/z); each disk carries a Gauss-Legendre x trapezoid polar
grid.  Integrands are given as area densities in the finite chart (the
w-chart contribution is f(1/w)/|w|^4).  Around each declared singular
point a chordally-defined smooth cutoff hands the local mass to a
log-radial polar patch, which absorbs logarithmic and 1/r singularities.

All reductions are fixed-order pairwise sums and Monte Carlo streams are
counter-based per logical shard, so results are bitwise identical for a
fixed seed regardless of the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .sphere import SpherePoint, chordal, chordal_sq_arrays

N_SHARDS = 16  # logical shards; independent of the worker count
LOCAL_RMIN_FACTOR = 1e-7


class ConvergenceError(RuntimeError):
    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace


def pairwise_sum(values):
    """Fixed-order pairwise reduction of a list of scalars."""
    vals = list(values)
    if not vals:
        return 0j
    while len(vals) > 1:
        nxt = []
        for i in range(0, len(vals) - 1, 2):
            nxt.append(vals[i] + vals[i + 1])
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return vals[0]


def run_sharded(task, workers: int = 1, n_shards: int = N_SHARDS):
    """Evaluate task(shard) for every shard; combine in shard order."""
    results = [None] * n_shards
    if workers <= 1:
        for s in range(n_shards):
            results[s] = task(s)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for s, val in zip(range(n_shards),
                              pool.map(task, range(n_shards))):
                results[s] = val
    return results


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------

def _polar_disk(nr: int, nt: int, radius: float = 1.0):
    """Polar grid on a disk; returns complex offsets and dA weights."""
    x, wx = np.polynomial.legendre.leggauss(nr)
    r = 0.5 * radius * (x + 1.0)
    wr = 0.5 * radius * wx
    theta = 2.0 * math.pi * np.arange(nt) / nt
    wt = 2.0 * math.pi / nt
    nodes = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    weights = (r * wr)[:, None].repeat(nt, axis=1) * wt
    return nodes, weights.ravel()


def _log_polar_disk(nr: int, nt: int, r_outer: float, r_inner: float):
    """Polar grid whose radii combine a log-spaced core with a smooth
    outer segment, for integrable (log / 1/r) singularities at the center.

    dA = r dr dtheta; on the core segment the substitution r = e^t gives
    dA = r^2 dt dtheta.
    """
    n_core = max(8, nr // 2)
    n_body = max(8, nr - n_core)
    r_mid = r_outer / 6.0
    x, wx = np.polynomial.legendre.leggauss(n_core)
    t = 0.5 * (x + 1.0) * (math.log(r_mid) - math.log(r_inner)) \
        + math.log(r_inner)
    wt_core = 0.5 * (math.log(r_mid) - math.log(r_inner)) * wx
    r_core = np.exp(t)
    w_core = r_core ** 2 * wt_core
    x2, wx2 = np.polynomial.legendre.leggauss(n_body)
    r_body = 0.5 * (x2 + 1.0) * (r_outer - r_mid) + r_mid
    w_body = r_body * 0.5 * (r_outer - r_mid) * wx2
    r = np.concatenate([r_core, r_body])
    wr = np.concatenate([w_core, w_body])
    theta = 2.0 * math.pi * np.arange(nt) / nt
    wt = 2.0 * math.pi / nt
    nodes = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    weights = wr[:, None].repeat(nt, axis=1) * wt
    return nodes, weights.ravel()


@dataclass
class SphereGrid:
    """Union of weighted nodes covering the sphere in the finite chart."""

    nodes: np.ndarray    # complex z-chart coordinates
    weights: np.ndarray  # dA weights already including chart jacobians

    @property
    def size(self):
        return self.nodes.size


def sphere_grid(res: int) -> SphereGrid:
    """Two-chart grid with about res^2 nodes in total."""
    nr = max(4, res // 2)
    nt = max(8, res)
    z_nodes, z_w = _polar_disk(nr, nt)
    w_nodes, w_w = _polar_disk(nr, nt)
    z_from_w = 1.0 / w_nodes
    jac = 1.0 / np.abs(w_nodes) ** 4
    return SphereGrid(np.concatenate([z_nodes, z_from_w]),
                      np.concatenate([z_w, w_w * jac]))


def _chart_local(center: SpherePoint):
    """(chart coordinate of center, to_z map, jacobian to z-area)."""
    if not center.at_infinity and abs(center.value) <= 1.0:
        return center.value, (lambda u: u), (lambda u: np.ones(u.shape))
    wc = 0j if center.at_infinity else 1.0 / center.value
    return wc, (lambda u: 1.0 / u), (lambda u: 1.0 / np.abs(u) ** 4)


def patch_grid(center, chordal_radius: float, nr: int, nt: int,
               log_radial: bool = False, rmin_factor: float = LOCAL_RMIN_FACTOR
               ) -> SphereGrid:
    """Polar patch around a point, in that point's preferred chart.

    The chart radius is sized to cover the chordal ball of the given
    radius; nodes are returned as z-chart coordinates with z-area weights.
    """
    center = SpherePoint.of(center)
    c, to_z, jac = _chart_local(center)
    r_chart = min(3.2 * chordal_radius, 1.9)
    if log_radial:
        offs, wts = _log_polar_disk(nr, nt, r_chart, r_chart * rmin_factor)
    else:
        offs, wts = _polar_disk(nr, nt, r_chart)
    u = c + offs
    nodes = to_z(u)
    return SphereGrid(nodes, wts * jac(u))


def smooth_bump(t):
    """C-infinity cutoff: 1 for t <= 1/4, 0 for t >= 1 (t = (d/rho)^2)."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    out[t <= 0.25] = 1.0
    mid = (t > 0.25) & (t < 1.0)
    if np.any(mid):
        s = (t[mid] - 0.25) / 0.75
        a = np.exp(-1.0 / (1.0 - s))
        b = np.exp(-1.0 / s)
        out[mid] = a / (a + b)
    return out


def _cutoff_radii(singular_points):
    pts = [SpherePoint.of(p) for p in singular_points]
    radii = []
    for i, p in enumerate(pts):
        r = 0.15
        for j, q in enumerate(pts):
            if i != j:
                r = min(r, 0.3 * chordal(p, q))
        radii.append(max(r, 1e-4))
    return pts, radii


def integrate_sphere_density(fn, res: int, singular_points=()) -> complex:
    """Integral over the sphere of an area density with declared singular
    points; fn acts on complex z-chart arrays."""
    pts, radii = _cutoff_radii(singular_points)

    def masked_main(z):
        vals = fn(z)
        for p, rho in zip(pts, radii):
            u = chordal_sq_arrays(z, p)
            vals = vals * (1.0 - smooth_bump(u / rho ** 2))
        return vals

    grid = sphere_grid(res)
    pieces = [pairwise_sum(list(masked_main(grid.nodes) * grid.weights))]
    nr = max(12, res // 3)
    nt = max(16, res // 2)
    for p, rho in zip(pts, radii):
        g = patch_grid(p, rho, nr, nt, log_radial=True)
        vals = fn(g.nodes)
        u = chordal_sq_arrays(g.nodes, p)
        vals = vals * smooth_bump(u / rho ** 2)
        for p2, rho2 in zip(pts, radii):
            if p2 is not p:
                u2 = chordal_sq_arrays(g.nodes, p2)
                vals = vals * (1.0 - smooth_bump(u2 / rho2 ** 2))
        pieces.append(pairwise_sum(list(vals * g.weights)))
    return pairwise_sum(pieces)


def integrate_product_space(fn, free_vertices, res: int,
                            singular_by_vertex=None, workers: int = 1
                            ) -> complex:
    """Tensor quadrature over several sphere copies.

    fn takes a coords dict mapping each free vertex to a complex array;
    arrays are broadcast to a common flat shape.  Singular points are
    handled per vertex; cross-vertex diagonals are integrable and left to
    the grid (use Monte Carlo when they dominate).
    """
    if not free_vertices:
        return complex(fn({}))
    singular_by_vertex = singular_by_vertex or {}
    if len(free_vertices) == 1:
        v = free_vertices[0]
        return integrate_sphere_density(
            lambda z: fn({v: z}), res, singular_by_vertex.get(v, ()))
    # two or more: build full weighted node sets per vertex, then chunk
    node_sets = []
    for v in free_vertices:
        nodes, weights = _full_node_set(res, singular_by_vertex.get(v, ()))
        node_sets.append((v, nodes, weights))
    total = _tensor_accumulate(fn, node_sets, workers)
    return total


def _full_node_set(res: int, singular_points):
    pts, radii = _cutoff_radii(singular_points)
    grid = sphere_grid(res)
    masks = np.ones(grid.size)
    for p, rho in zip(pts, radii):
        u = chordal_sq_arrays(grid.nodes, p)
        masks = masks * (1.0 - smooth_bump(u / rho ** 2))
    nodes = [grid.nodes]
    weights = [grid.weights * masks]
    nr = max(12, res // 3)
    nt = max(16, res // 2)
    for p, rho in zip(pts, radii):
        g = patch_grid(p, rho, nr, nt, log_radial=True)
        u = chordal_sq_arrays(g.nodes, p)
        m = smooth_bump(u / rho ** 2)
        for p2, rho2 in zip(pts, radii):
            if p2 is not p:
                u2 = chordal_sq_arrays(g.nodes, p2)
                m = m * (1.0 - smooth_bump(u2 / rho2 ** 2))
        nodes.append(g.nodes)
        weights.append(g.weights * m)
    return np.concatenate(nodes), np.concatenate(weights)


def _tensor_accumulate(fn, node_sets, workers: int):
    if len(node_sets) != 2:
        raise NotImplementedError(
            "tensor quadrature supports at most two free vertices; "
            "use Monte Carlo for higher-dimensional configurations")
    (v1, n1, w1), (v2, n2, w2) = node_sets
    chunks = np.array_split(np.arange(n1.size), N_SHARDS)

    def task(s):
        idx = chunks[s]
        if idx.size == 0:
            return 0j
        z1 = n1[idx][:, None]
        ww = w1[idx][:, None] * w2[None, :]
        vals = fn({v1: np.broadcast_to(z1, (idx.size, n2.size)),
                   v2: np.broadcast_to(n2[None, :], (idx.size, n2.size))})
        rows = (vals * ww).sum(axis=1)
        return pairwise_sum(list(rows))

    return pairwise_sum(run_sharded(task, workers))


# ---------------------------------------------------------------------------
# Monte Carlo with importance sampling
# ---------------------------------------------------------------------------

def _fs_density(z):
    return 1.0 / math.pi / (1.0 + np.abs(z) ** 2) ** 2


def _sample_fs(rng, n):
    u1 = rng.random(n)
    u2 = rng.random(n)
    cos_t = 1.0 - 2.0 * u1
    r = np.sqrt((1.0 - cos_t) / (1.0 + cos_t))
    return r * np.exp(2j * math.pi * u2)


class _LocalSampler:
    """Log-uniform radial sampler around one singular point."""

    def __init__(self, point, rho):
        self.point = SpherePoint.of(point)
        c, to_z, _ = _chart_local(self.point)
        self.c = c
        self.to_z = to_z
        self.in_w_chart = self.point.at_infinity or abs(self.point.value) > 1.0
        self.r0 = min(3.2 * rho, 1.5)
        self.rmin = self.r0 * LOCAL_RMIN_FACTOR
        self.logL = math.log(self.r0 / self.rmin)

    def sample(self, rng, n):
        r = self.rmin * np.exp(rng.random(n) * self.logL)
        theta = 2.0 * math.pi * rng.random(n)
        u = self.c + r * np.exp(1j * theta)
        return self.to_z(u)

    def density(self, z):
        """Area density in the z-chart."""
        z = np.asarray(z, dtype=complex)
        if self.in_w_chart:
            with np.errstate(divide="ignore", invalid="ignore"):
                u = np.where(z == 0, np.inf, 1.0 / z)
            jac = np.where(z == 0, 0.0, 1.0 / np.abs(z) ** 4)
        else:
            u, jac = z, np.ones(z.shape)
        r = np.abs(u - self.c)
        inside = (r >= self.rmin) & (r <= self.r0)
        dens = np.zeros(z.shape)
        rr = np.where(inside, r, 1.0)
        dens[inside] = (1.0 / (2.0 * math.pi * self.logL * rr ** 2))[inside]
        return dens * jac


def monte_carlo_sphere(fn, samples: int, seed: int, singular_points=(),
                       free_vertices=("x",), workers: int = 1):
    """Monte Carlo integral over a product of spheres.

    Returns (value, standard_error).  The sampler is a mixture of the
    uniform (Fubini-Study) measure and log-radial clouds around the
    declared singular points of each vertex; the estimator stays unbiased
    because the uniform component covers everything.
    """
    sing = dict(singular_points) if isinstance(singular_points, dict) else {
        v: tuple(singular_points) for v in free_vertices}
    samplers = {}
    for v in free_vertices:
        pts, radii = _cutoff_radii(sing.get(v, ()))
        samplers[v] = [_LocalSampler(p, r) for p, r in zip(pts, radii)]
    per_shard = max(1, samples // N_SHARDS)

    def density(v, z):
        locs = samplers[v]
        w0 = 1.0 / (1.0 + len(locs))
        q = w0 * _fs_density(z)
        for s in locs:
            q = q + w0 * s.density(z)
        return q

    def task(shard):
        rng = np.random.Generator(np.random.Philox(key=[seed, shard]))
        coords = {}
        dens = np.ones(per_shard)
        for v in free_vertices:
            locs = samplers[v]
            k = len(locs) + 1
            choice = rng.integers(0, k, per_shard)
            z = _sample_fs(rng, per_shard)
            for i, s in enumerate(locs):
                zi = s.sample(rng, per_shard)
                z = np.where(choice == i + 1, zi, z)
            coords[v] = z
            dens = dens * density(v, z)
        vals = fn(coords) / dens
        m = vals.mean()
        sq = (np.abs(vals - m) ** 2).mean()
        return m, sq

    stats = run_sharded(task, workers)
    means = [s[0] for s in stats]
    mean = pairwise_sum(means) / N_SHARDS
    var_between = pairwise_sum(
        [abs(m - mean) ** 2 for m in means]) / max(N_SHARDS - 1, 1)
    se = math.sqrt(var_between / N_SHARDS)
    return complex(mean), se
