"""Currents on powers of the sphere and the graded-symmetrized wedge.

Forms live on a product of sphere copies labelled by vertex ids.  A
MultiForm is a sum of terms; each term is a product of numeric atoms
times a wedge of the one-form symbols dz_v, dzbar_v.  Conventions:

* the canonical symbol order is (dz_v, dzbar_v) sorted by vertex, so a
  full top form is f * wedge_v (dz_v ^ dzbar_v) and integrates to
  (-2i)^{#vertices} * integral of f against Lebesgue dA per vertex;
* delta currents stay symbolic: a delta atom pins its vertex to a point
  and contributes factor 1 once the measure normalization cancels;
* smooth two-forms store the dz^dzbar coefficient, i.e. area density
  divided by (-2i).

The operator dC is c (D' - D'') with the constant fixed in ``sphere``;
xi is the graded-symmetrized product (1/(k+1)!) sum over permutations of
phi_0 ^ dC phi_1 ^ ... ^ dC phi_k, with Koszul signs taken in the shifted
degrees deg + 1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .graded import koszul_sign
from .sphere import DC_CONSTANT, GreenKernel, SpherePoint, chordal_sq_arrays


class DegreeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# scalar and two-form profiles with closed-form derivatives
# ---------------------------------------------------------------------------

class ScalarProfile:
    """Smooth function on the sphere with analytic first/mixed derivatives.

    Provides vectorized value(z), dz(z), dzbar(z) and dzdzbar(z), the
    latter being the coefficient h in dbar d f = h dzbar ^ dz.
    """

    def __init__(self, value, dz, dzbar, dzdzbar, label="f"):
        self.value = value
        self.dz = dz
        self.dzbar = dzbar
        self.dzdzbar = dzdzbar
        self.label = label

    def value_at(self, p) -> complex:
        p = SpherePoint.of(p)
        if p.at_infinity:
            # limit along the w-chart; profiles used here extend smoothly
            return complex(self.value(np.array([1e9 + 0j]))[0])
        return complex(self.value(np.array([p.value]))[0])


def constant_profile(c) -> ScalarProfile:
    c = complex(c)

    def val(z):
        return np.full(np.shape(z), c, dtype=complex)

    def zero(z):
        return np.zeros(np.shape(z), dtype=complex)

    return ScalarProfile(val, zero, zero, zero, label="const")


def chordal_gauss_profile(center, lam: float, amp=1.0) -> ScalarProfile:
    """amp * exp(-lam * d(z, center)^2); smooth on the whole sphere."""
    p = SpherePoint.of(center)
    amp = complex(amp)
    lam = float(lam)

    if p.at_infinity:
        def parts(z):
            z = np.asarray(z, dtype=complex)
            g = 1.0 / (1.0 + np.abs(z) ** 2)
            u = g
            uz = -np.conjugate(z) * g ** 2
            uzb = -z * g ** 2
            uzzb = g ** 2 * (2.0 * np.abs(z) ** 2 * g - 1.0)
            return u, uz, uzb, uzzb
    else:
        pv = p.value
        gp = 1.0 / (1.0 + abs(pv) ** 2)

        def parts(z):
            z = np.asarray(z, dtype=complex)
            g = 1.0 / (1.0 + np.abs(z) ** 2)
            N = np.abs(z - pv) ** 2
            Nz = np.conjugate(z) - np.conjugate(pv)
            Nzb = z - pv
            u = gp * N * g
            uz = gp * g * (Nz - N * np.conjugate(z) * g)
            uzb = gp * g * (Nzb - N * z * g)
            uzzb = gp * (g - Nz * z * g ** 2 - Nzb * np.conjugate(z) * g ** 2
                         + N * g ** 2 * (2.0 * np.abs(z) ** 2 * g - 1.0))
            return u, uz, uzb, uzzb

    def val(z):
        u, _, _, _ = parts(z)
        return amp * np.exp(-lam * u)

    def dz(z):
        u, uz, _, _ = parts(z)
        return amp * (-lam * uz) * np.exp(-lam * u)

    def dzbar(z):
        u, _, uzb, _ = parts(z)
        return amp * (-lam * uzb) * np.exp(-lam * u)

    def dzdzbar(z):
        u, uz, uzb, uzzb = parts(z)
        return amp * (-lam * uzzb + lam ** 2 * uz * uzb) * np.exp(-lam * u)

    return ScalarProfile(val, dz, dzbar, dzdzbar, label="gauss")


def log_abs_profile() -> ScalarProfile:
    """log|z|^2 in the finite chart (singular at 0 and infinity)."""

    def val(z):
        z = np.asarray(z, dtype=complex)
        return np.log(np.abs(z) ** 2).astype(complex)

    def dz(z):
        return 1.0 / np.asarray(z, dtype=complex)

    def dzbar(z):
        return 1.0 / np.conjugate(np.asarray(z, dtype=complex))

    def dzdzbar(z):
        return np.zeros(np.shape(z), dtype=complex)

    return ScalarProfile(val, dz, dzbar, dzdzbar, label="log|z|^2")


class TwoFormProfile:
    """Smooth two-form given by its area density in the finite chart."""

    def __init__(self, area_density, mass=None, label="mu"):
        self.area_density = area_density
        self.mass = mass  # exact total integral when known
        self.label = label


def fs_area_profile(mass=1.0) -> TwoFormProfile:
    mass = complex(mass)

    def dens(z):
        z = np.asarray(z, dtype=complex)
        return mass / math.pi / (1.0 + np.abs(z) ** 2) ** 2

    return TwoFormProfile(dens, mass=mass, label="fs")


def chordal_gauss_two_form(center, lam: float, amp=1.0) -> TwoFormProfile:
    """amp * exp(-lam d(z,c)^2) * fs density; exact mass by Archimedes."""
    p = SpherePoint.of(center)
    amp = complex(amp)
    lam = float(lam)
    mass = amp * (1.0 - math.exp(-lam)) / lam

    def dens(z):
        z = np.asarray(z, dtype=complex)
        u = chordal_sq_arrays(z, p)
        return amp * np.exp(-lam * u) / math.pi / (1.0 + np.abs(z) ** 2) ** 2

    return TwoFormProfile(dens, mass=mass, label="gauss2")


# ---------------------------------------------------------------------------
# atoms, terms and MultiForm
# ---------------------------------------------------------------------------

class Atom:
    """Numeric factor of a term: a function of some vertex coordinates."""

    def __init__(self, kind, vertices, fn, tag):
        self.kind = kind        # "fn" | "delta"
        self.vertices = tuple(vertices)
        self.fn = fn            # callable(coords dict) -> array, or None
        self.tag = tag          # canonical sort key, stable across builds

    def __repr__(self):
        return "Atom(%s)" % (self.tag,)


def fn_atom(vertices, fn, tag):
    return Atom("fn", vertices, fn, tag)


def delta_atom(vertex, point):
    point = SpherePoint.of(point)
    tag = ("delta", vertex, str(point.as_json()))
    _delta_points[tag] = point
    return Atom("delta", (vertex,), None, tag)


@dataclass(frozen=True)
class Term:
    const: complex
    atoms: tuple
    symbols: tuple  # canonically sorted (vertex, kind) pairs; kind 0=dz 1=dzbar


def _canon_symbols(symbols):
    """Sort wedge symbols, returning (sign, sorted) or None on collision."""
    n = len(symbols)
    lst = list(symbols)
    sign = 1
    # insertion sort, counting transpositions of odd symbols
    for i in range(1, n):
        j = i
        while j > 0 and lst[j - 1] > lst[j]:
            lst[j - 1], lst[j] = lst[j], lst[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, n):
        if lst[i - 1] == lst[i]:
            return None
    return sign, tuple(lst)


def make_term(const, atoms, symbols):
    cs = _canon_symbols(symbols)
    if cs is None or const == 0:
        return None
    sign, syms = cs
    atoms = tuple(sorted(atoms, key=lambda a: a.tag))
    return Term(complex(const) * sign, atoms, syms)


class MultiForm:
    """Sum of terms; the zero form has no terms."""

    def __init__(self, terms=()):
        self.terms = tuple(t for t in terms if t is not None and t.const != 0)

    @staticmethod
    def zero():
        return MultiForm(())

    @staticmethod
    def unit():
        return MultiForm((Term(1.0 + 0j, (), ()),))

    def __add__(self, other):
        return MultiForm(self.terms + other.terms)

    def scaled(self, c):
        c = complex(c)
        return MultiForm(tuple(Term(t.const * c, t.atoms, t.symbols)
                               for t in self.terms))

    def wedge(self, other) -> "MultiForm":
        out = []
        for t1 in self.terms:
            for t2 in other.terms:
                sym = t1.symbols + t2.symbols
                term = make_term(t1.const * t2.const, t1.atoms + t2.atoms, sym)
                if term is not None:
                    out.append(term)
        return MultiForm(out)

    def vertex_degrees(self, term: Term):
        degs = {}
        for v, k in term.symbols:
            degs[v] = degs.get(v, 0) + 1
        return degs


def wedge_all(forms):
    acc = MultiForm.unit()
    for f in forms:
        acc = acc.wedge(f)
    return acc


# ---------------------------------------------------------------------------
# currents
# ---------------------------------------------------------------------------

class Current:
    """A current on a product of sphere copies.

    kind is one of "smooth-form", "delta-at-point", "green-kernel-factor".
    degree is the total form degree; bare() is the MultiForm of the
    current itself and dc() the MultiForm of D^C applied to it.
    """

    def __init__(self, kind, degree, vertices, bare, dc=None, label=""):
        self.kind = kind
        self.degree = degree
        self.vertices = tuple(vertices)
        self._bare = bare
        self._dc = dc
        self.label = label

    def bare(self) -> MultiForm:
        return self._bare

    def dc(self) -> MultiForm:
        """D^C of the current; degree-2 inputs raise DegreeError."""
        if self.degree >= 2:
            raise DegreeError("D^C is undefined on degree-2 currents")
        if self._dc is None:
            raise DegreeError("current %r has no D^C data" % (self.label,))
        return self._dc


def scalar_current(profile: ScalarProfile, vertex) -> Current:
    val = fn_atom((vertex,), _lift1(vertex, profile.value),
                  ("f", vertex, profile.label, "val"))
    bare = MultiForm((make_term(1.0, (val,), ()),))
    c = DC_CONSTANT
    t_dz = make_term(c, (fn_atom((vertex,), _lift1(vertex, profile.dz),
                                 ("f", vertex, profile.label, "dz")),),
                     ((vertex, 0),))
    t_dzb = make_term(-c, (fn_atom((vertex,), _lift1(vertex, profile.dzbar),
                                   ("f", vertex, profile.label, "dzb")),),
                      ((vertex, 1),))
    return Current("smooth-form", 0, (vertex,), bare,
                   MultiForm((t_dz, t_dzb)), label=profile.label)


def one_form_current(vertex, p_profile, q_profile, label="omega") -> Current:
    """p dz + q dzbar with ScalarProfile components (for their derivatives)."""
    t_p = make_term(1.0, (fn_atom((vertex,), _lift1(vertex, p_profile.value),
                                  ("f", vertex, label, "p")),), ((vertex, 0),))
    t_q = make_term(1.0, (fn_atom((vertex,), _lift1(vertex, q_profile.value),
                                  ("f", vertex, label, "q")),), ((vertex, 1),))
    bare = MultiForm((t_p, t_q))
    # dC(p dz + q dzbar) = -c (q_z + p_zbar) dzbar ^ dz
    c = DC_CONSTANT

    def density(q_dz, p_dzb):
        t1 = make_term(c, (fn_atom((vertex,), _lift1(vertex, q_dz),
                                   ("f", vertex, label, "q_z")),),
                       ((vertex, 0), (vertex, 1)))
        t2 = make_term(-c, (fn_atom((vertex,), _lift1(vertex, p_dzb),
                                    ("f", vertex, label, "p_zb")),),
                       ((vertex, 0), (vertex, 1)))
        return MultiForm((t1, t2))

    dc = density(q_profile.dz, p_profile.dzbar)
    return Current("smooth-form", 1, (vertex,), bare, dc, label=label)


def dC(current: Current) -> Current:
    """The operator c (D' - D'') as a current map, degree +1."""
    form = current.dc()
    return Current("smooth-form", current.degree + 1, current.vertices,
                   form, None, label="dC(%s)" % current.label)


def two_form_current(profile: TwoFormProfile, vertex) -> Current:
    # stored coefficient is area density / (-2i)
    def coeff(coords):
        return profile.area_density(coords[vertex]) / (-2j)

    t = make_term(1.0, (fn_atom((vertex,), coeff,
                                ("mu", vertex, profile.label)),),
                  ((vertex, 0), (vertex, 1)))
    cur = Current("smooth-form", 2, (vertex,), MultiForm((t,)),
                  label=profile.label)
    cur.two_form_mass = profile.mass
    return cur


def delta_current(point, vertex, coef=1.0) -> Current:
    point = SpherePoint.of(point)
    t = make_term(coef, (delta_atom(vertex, point),),
                  ((vertex, 0), (vertex, 1)))
    cur = Current("delta-at-point", 2, (vertex,), MultiForm((t,)),
                  label="delta@%s" % (point.as_json(),))
    cur.delta_point = point
    return cur


def green_current(kernel: GreenKernel, v1, v2) -> Current:
    """Green kernel factor attached to the ordered pair of vertices.

    Internally the endpoints are stored sorted so that reversing the edge
    orientation produces the identical object (the kernel is symmetric).
    """
    a, b = sorted((v1, v2))

    def val(coords):
        return kernel.eval_arrays(coords[a], coords[b])

    bare = MultiForm((make_term(
        1.0, (fn_atom((a, b), val, ("G", a, b, "val")),), ()),))

    c = DC_CONSTANT
    parts = []
    for v, other, part in ((a, b, "dz1"), (b, a, "dz2")):
        def leg(coords, v=v, other=other):
            return kernel.dz_first(coords[v], coords[other])

        parts.append(make_term(
            c, (fn_atom((a, b), leg, ("G", a, b, "dz", v)),), ((v, 0),)))
    for v, other, part in ((a, b, "dzb1"), (b, a, "dzb2")):
        def leg(coords, v=v, other=other):
            return kernel.dzbar_first(coords[v], coords[other])

        parts.append(make_term(
            -c, (fn_atom((a, b), leg, ("G", a, b, "dzb", v)),), ((v, 1),)))
    cur = Current("green-kernel-factor", 0, (a, b), bare, MultiForm(parts),
                  label="G(%s,%s)" % (a, b))
    cur.kernel = kernel
    return cur


def _lift1(vertex, fn):
    def wrapped(coords):
        return fn(coords[vertex])

    return wrapped


# ---------------------------------------------------------------------------
# finalization: a MultiForm over named vertices as a numeric density
# ---------------------------------------------------------------------------

@dataclass
class IntegrandTerm:
    """One top-degree term, deltas collapsed into pinned coordinates."""

    const: complex
    fns: tuple          # callables(coords) -> array
    pinned: dict        # vertex -> complex coordinate
    free: tuple         # vertices still integrated


def finalize(mf: MultiForm, vertices):
    """Top-degree terms of a MultiForm over the given vertex set.

    Terms that are not top degree on every vertex integrate to zero and
    are dropped.  Delta atoms pin their vertex; the measure normalization
    makes each pinned vertex contribute plain evaluation at the point.
    Delta points at infinity are not supported (finite-chart pinning).
    """
    vertices = tuple(vertices)
    top = tuple(sorted((v, k) for v in vertices for k in (0, 1)))
    out = []
    for term in mf.terms:
        if term.symbols != top:
            continue
        pinned = {}
        fns = []
        for atom in term.atoms:
            if atom.kind == "delta":
                (v,) = atom.vertices
                pt = _delta_points[atom.tag]
                if pt.at_infinity:
                    raise ValueError("delta decorations must sit at finite "
                                     "points (vertex %r)" % (v,))
                pinned[v] = pt.value
            else:
                fns.append(atom.fn)
        free = tuple(v for v in vertices if v not in pinned)
        const = term.const * (-2j) ** len(free)
        out.append(IntegrandTerm(const, tuple(fns), pinned, free))
    return out


# delta atoms carry their SpherePoint here, keyed by tag (the tag is part
# of the canonical term ordering and must stay hashable/stable)
_delta_points = {}


def make_density(terms, free):
    """Vectorized density over the free coordinates, summing the terms."""
    free = tuple(free)

    def fn(coords):
        total = None
        for t in terms:
            if tuple(t.free) != free:
                raise ValueError("terms disagree about free vertices")
            local = dict(coords)
            local.update(t.pinned)
            val = np.full(np.shape(coords[free[0]]) if free else (), t.const,
                          dtype=complex)
            for f in t.fns:
                val = val * f(local)
            total = val if total is None else total + val
        if total is None:
            shape = np.shape(coords[free[0]]) if free else ()
            return np.zeros(shape, dtype=complex)
        return total

    return fn


# ---------------------------------------------------------------------------
# the xi map
# ---------------------------------------------------------------------------

def xi(currents) -> MultiForm:
    """Graded-symmetrized phi_0 ^ dC phi_1 ^ ... ^ dC phi_k.

    Koszul signs are computed in the shifted degrees deg + 1; the empty
    list returns the multiplicative unit and a single current passes
    through unchanged (normalization 1/(k+1)!).  Wedge components that
    would exceed the top degree on any sphere copy vanish term by term;
    D^C of a degree-2 factor in a D^C slot contributes zero.
    """
    currents = list(currents)
    k1 = len(currents)
    if k1 == 0:
        return MultiForm.unit()
    shifted = [c.degree + 1 for c in currents]
    acc = MultiForm.zero()
    for perm in itertools.permutations(range(k1)):
        sign = koszul_sign(perm, shifted)
        factors = []
        dead = False
        for slot, idx in enumerate(perm):
            cur = currents[idx]
            if slot == 0:
                factors.append(cur.bare())
            else:
                if cur.degree >= 2:
                    dead = True
                    break
                factors.append(cur.dc())
        if dead:
            continue
        acc = acc + wedge_all(factors).scaled(sign)
    return acc.scaled(1.0 / math.factorial(k1))
