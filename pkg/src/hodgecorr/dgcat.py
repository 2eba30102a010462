"""Presentations of small dg categories and their validation.

A presentation consists of a finite object list, a Hom complex for every
ordered pair of objects, composition tables and an identity element per
object.  The composition map is in diagrammatic slot order,

    Hom(X, Y) (x) Hom(Y, Z) -> Hom(X, Z),   (f, g) |-> m(f, g),

i.e. m(f, g) is "f followed by g".  The Leibniz rule is fixed as

    d m(f, g) = m(f, dg) + (-1)^{deg g} m(df, g).

All scalars are exact rationals.  Basis elements of Hom(X, Y) are referred
to by (X, Y, index).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .graded import GradedVectorSpace, HomComplex, RATIONAL


@dataclass
class ValidationIssue:
    kind: str       # "associativity" | "identity" | "leibniz" | "d_squared"
    witness: tuple  # the offending basis tuple / pair
    detail: str

    def __str__(self):
        return "%s at %r: %s" % (self.kind, self.witness, self.detail)


@dataclass
class ValidationReport:
    issues: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def add(self, kind, witness, detail):
        self.issues.append(ValidationIssue(kind, witness, detail))


class DGCategoryPresentation:
    """Small dg category given by finite bases, tables and identities.

    Parameters
    ----------
    objects : list of hashable object names.
    homs : dict (X, Y) -> HomComplex.  Missing pairs are zero.
    compositions : dict (X, Y, Z) -> dict (i, j) -> list of (coef, k)
        expressing m(e_i, e_j) = sum coef * e_k in Hom(X, Z); e_i runs over
        Hom(X, Y), e_j over Hom(Y, Z).  Missing entries are zero.
    identities : dict X -> list of (coef, i) in Hom(X, X), degree 0.
    """

    def __init__(self, objects, homs, compositions, identities):
        self.objects = list(objects)
        self.homs = dict(homs)
        self.compositions = {k: dict(v) for k, v in compositions.items()}
        self.identities = {k: list(v) for k, v in identities.items()}
        for hc in self.homs.values():
            if hc.space.regime != RATIONAL:
                raise ValueError("dg category presentations are exact-only")

    # -- basis bookkeeping -------------------------------------------------

    def hom(self, x, y):
        return self.homs.get((x, y))

    def basis(self, x, y):
        """List of (index, label, degree) for Hom(x, y)."""
        hc = self.hom(x, y)
        if hc is None:
            return []
        out = []
        idx = 0
        for deg in hc.space.degrees:
            for lab in hc.space.basis[deg]:
                out.append((idx, lab, deg))
                idx += 1
        return out

    def dim(self, x, y):
        hc = self.hom(x, y)
        return hc.space.total_dim if hc else 0

    def degree(self, x, y, i):
        return self.basis(x, y)[i][2]

    def diff(self, x, y, i):
        """d(e_i) in Hom(x, y) as a list of (coef, j)."""
        hc = self.hom(x, y)
        if hc is None:
            return []
        flat = self.basis(x, y)
        _, _, deg = flat[i]
        # position of i within its degree block
        block = [b for b in flat if b[2] == deg]
        col = [k for k, b in enumerate(block) if b[0] == i][0]
        target = [b for b in flat if b[2] == deg + 1]
        out = []
        mat = hc.differential.get(deg)
        if mat is None:
            return []
        for row, b in enumerate(target):
            c = mat[row][col]
            if c != 0:
                out.append((c, b[0]))
        return out

    def compose(self, x, y, z, i, j):
        """m(e_i, e_j) as a list of (coef, k) in Hom(x, z)."""
        table = self.compositions.get((x, y, z), {})
        return table.get((i, j), [])

    def compose_vec(self, x, y, z, vec_i, vec_j):
        acc = {}
        for ci, i in vec_i:
            for cj, j in vec_j:
                for c, k in self.compose(x, y, z, i, j):
                    acc[k] = acc.get(k, Fraction(0)) + ci * cj * c
        return [(c, k) for k, c in sorted(acc.items()) if c != 0]


def validate(cat: DGCategoryPresentation) -> ValidationReport:
    """Check the dg category axioms; the report lists every violation."""
    report = ValidationReport()
    objs = cat.objects

    def vec_diff(x, y, vec):
        acc = {}
        for c, i in vec:
            for cd, j in cat.diff(x, y, i):
                acc[j] = acc.get(j, Fraction(0)) + c * cd
        return [(c, j) for j, c in sorted(acc.items()) if c != 0]

    def canon(vec):
        acc = {}
        for c, i in vec:
            acc[i] = acc.get(i, Fraction(0)) + c
        return tuple((i, c) for i, c in sorted(acc.items()) if c != 0)

    # identities are degree-0 two-sided units
    for x in objs:
        ident = cat.identities.get(x)
        if ident is None:
            if cat.dim(x, x):
                report.add("identity", (x,), "missing identity element")
            continue
        for c, i in ident:
            if cat.degree(x, x, i) != 0:
                report.add("identity", (x,), "identity has nonzero degree")
        for y in objs:
            for idx, _, _ in cat.basis(x, y):
                lhs = cat.compose_vec(x, x, y, ident, [(Fraction(1), idx)])
                if canon(lhs) != canon([(Fraction(1), idx)]):
                    report.add("identity", (x, y, idx), "left unit fails")
            for idx, _, _ in cat.basis(y, x):
                rhs = cat.compose_vec(y, x, x, [(Fraction(1), idx)], ident)
                if canon(rhs) != canon([(Fraction(1), idx)]):
                    report.add("identity", (y, x, idx), "right unit fails")

    # associativity on basis triples
    for x in objs:
        for y in objs:
            for z in objs:
                for w in objs:
                    for i, _, _ in cat.basis(x, y):
                        for j, _, _ in cat.basis(y, z):
                            ij = cat.compose(x, y, z, i, j)
                            for k, _, _ in cat.basis(z, w):
                                left = cat.compose_vec(
                                    x, z, w, ij, [(Fraction(1), k)])
                                jk = cat.compose(y, z, w, j, k)
                                right = cat.compose_vec(
                                    x, y, w, [(Fraction(1), i)], jk)
                                if canon(left) != canon(right):
                                    report.add(
                                        "associativity", (x, y, z, w, i, j, k),
                                        "m(m(i,j),k) != m(i,m(j,k))")

    # Leibniz: d m(f,g) = m(f, dg) + (-1)^{deg g} m(df, g)
    for x in objs:
        for y in objs:
            for z in objs:
                for i, _, _ in cat.basis(x, y):
                    for j, _, dj in cat.basis(y, z):
                        lhs = vec_diff(x, z, cat.compose(x, y, z, i, j))
                        t1 = cat.compose_vec(
                            x, y, z, [(Fraction(1), i)], cat.diff(y, z, j))
                        sgn = Fraction(-1) if dj % 2 else Fraction(1)
                        t2 = [(sgn * c, k) for c, k in
                              cat.compose_vec(x, y, z, cat.diff(x, y, i),
                                              [(Fraction(1), j)])]
                        acc = {}
                        for c, k in t1 + t2:
                            acc[k] = acc.get(k, Fraction(0)) + c
                        rhs = [(c, k) for k, c in sorted(acc.items()) if c != 0]
                        if canon(lhs) != canon(rhs):
                            report.add("leibniz", (x, y, z, i, j),
                                       "d m(f,g) != m(f,dg) + (-1)^|g| m(df,g)")

    # d^2 = 0 is enforced by HomComplex construction, but presentations can
    # be assembled from raw data, so re-check.
    for (x, y), hc in cat.homs.items():
        try:
            hc._validate()
        except ValueError as exc:
            report.add("d_squared", (x, y), str(exc))

    return report


# -- standard constructions ----------------------------------------------


def _hom_from_degrees(labels_by_degree, diffs=None):
    return HomComplex(GradedVectorSpace(labels_by_degree), diffs or {})


def point_category():
    """One object with End = Q in degree 0 and zero differential."""
    homs = {("pt", "pt"): _hom_from_degrees({0: ("1",)})}
    comp = {("pt", "pt", "pt"): {(0, 0): [(Fraction(1), 0)]}}
    ident = {"pt": [(Fraction(1), 0)]}
    return DGCategoryPresentation(["pt"], homs, comp, ident)


def matrix_category(size=2):
    """One object with End = M_size(Q), matrix units E_rc as basis."""
    units = [(r, c) for r in range(size) for c in range(size)]
    labels = tuple("E%d%d" % rc for rc in units)
    homs = {("A", "A"): _hom_from_degrees({0: labels})}
    table = {}
    for i, (r1, c1) in enumerate(units):
        for j, (r2, c2) in enumerate(units):
            # m(f, g) is f-then-g; for matrices acting on columns this is
            # the product g . f, and E_{r2 c2} E_{r1 c1} = delta_{c2 r1}...
            # diagrammatic composite of E_{r1 c1}: e_{c1} -> e_{r1} viewed
            # as the linear map sending column c1 to row r1; the composite
            # with E_{r2 c2} is nonzero iff c1 == r2... fixed below by the
            # convention m(E_{ab}, E_{bc}) = E_{ac} on index chains.
            if c1 == r2:
                k = units.index((r1, c2))
                table[(i, j)] = [(Fraction(1), k)]
    comp = {("A", "A", "A"): table}
    ident = {"A": [(Fraction(1), units.index((r, r))) for r in range(size)]}
    return DGCategoryPresentation(["A"], homs, comp, ident)


def two_point_category():
    """Disjoint union of two copies of the point category."""
    homs = {
        ("p", "p"): _hom_from_degrees({0: ("1",)}),
        ("q", "q"): _hom_from_degrees({0: ("1",)}),
    }
    comp = {
        ("p", "p", "p"): {(0, 0): [(Fraction(1), 0)]},
        ("q", "q", "q"): {(0, 0): [(Fraction(1), 0)]},
    }
    ident = {"p": [(Fraction(1), 0)], "q": [(Fraction(1), 0)]}
    return DGCategoryPresentation(["p", "q"], homs, comp, ident)


def arrow_category(mid_degrees, diff=None):
    """Two objects, Hom(a, b) an arbitrary complex, scalar endomorphisms.

    mid_degrees: dict degree -> tuple of labels for Hom(a, b);
    diff: optional differential matrices for Hom(a, b).
    """
    homs = {
        ("a", "a"): _hom_from_degrees({0: ("1",)}),
        ("b", "b"): _hom_from_degrees({0: ("1",)}),
        ("a", "b"): _hom_from_degrees(mid_degrees, diff),
    }
    nmid = homs[("a", "b")].space.total_dim
    comp = {
        ("a", "a", "a"): {(0, 0): [(Fraction(1), 0)]},
        ("b", "b", "b"): {(0, 0): [(Fraction(1), 0)]},
        ("a", "a", "b"): {(0, j): [(Fraction(1), j)] for j in range(nmid)},
        ("a", "b", "b"): {(i, 0): [(Fraction(1), i)] for i in range(nmid)},
    }
    ident = {"a": [(Fraction(1), 0)], "b": [(Fraction(1), 0)]}
    return DGCategoryPresentation(["a", "b"], homs, comp, ident)


def square_zero_category(objects, mids, diffs=None):
    """Category with identities adjoined to a square-zero bimodule part.

    Hom(x, x) = Q . 1_x  (+)  M_xx, Hom(x, y) = M_xy for x != y, and every
    composite of two M-elements vanishes.  mids maps (x, y) to a degree ->
    labels dict for M_xy; diffs maps (x, y) to differential matrices.
    """
    diffs = diffs or {}
    homs = {}
    offsets = {}
    for x in objects:
        for y in objects:
            mid = dict(mids.get((x, y), {}))
            if x == y:
                base = dict(mid)
                base.setdefault(0, ())
                base[0] = ("1",) + tuple(base[0])
                # differential must not touch the identity; shift columns
                d = diffs.get((x, y))
                if d:
                    d = {deg: [([Fraction(0)] + list(row)) if deg == 0
                               else list(row) for row in m]
                         for deg, m in d.items()}
                homs[(x, y)] = _hom_from_degrees(base, d)
                offsets[(x, y)] = 1
            elif mid:
                homs[(x, y)] = _hom_from_degrees(mid, diffs.get((x, y)))
                offsets[(x, y)] = 0

    def flat_basis(x, y):
        hc = homs.get((x, y))
        if hc is None:
            return []
        out = []
        idx = 0
        for deg in hc.space.degrees:
            for lab in hc.space.basis[deg]:
                out.append((idx, lab, deg))
                idx += 1
        return out

    def ident_index(x):
        for idx, lab, deg in flat_basis(x, x):
            if lab == "1" and deg == 0:
                return idx
        raise AssertionError

    comp = {}
    for x in objects:
        for y in objects:
            if (x, y) not in homs:
                continue
            for z in objects:
                if (y, z) not in homs:
                    continue
                table = {}
                for i, labi, _ in flat_basis(x, y):
                    for j, labj, _ in flat_basis(y, z):
                        li = (x == y and labi == "1")
                        lj = (y == z and labj == "1")
                        if li and lj:
                            table[(i, j)] = [(Fraction(1), ident_index(x))]
                        elif li:
                            table[(i, j)] = [(Fraction(1), j)]
                        elif lj:
                            table[(i, j)] = [(Fraction(1), i)]
                        # two M-factors: zero
                if table and (x, z) in homs:
                    comp[(x, y, z)] = table
    ident = {x: [(Fraction(1), ident_index(x))] for x in objects}
    return DGCategoryPresentation(list(objects), homs, comp, ident)


def random_valid_category(seed: int, max_objects=3, max_dim=3, max_degree=2):
    """Random presentation from families that are valid by construction.

    Families: square-zero categories with random differentials, arrow
    categories with a random Hom complex, and the matrix/point/two-point
    categories.  Validity is guaranteed structurally; tests re-validate.
    """
    rng = random.Random(seed)
    kind = rng.choice(["square_zero", "square_zero", "arrow", "classic"])
    if kind == "classic":
        return rng.choice([point_category, matrix_category, two_point_category])()

    def random_complex():
        degs = {}
        total = 0
        for deg in range(0, max_degree + 1):
            k = rng.randint(0, 2)
            k = min(k, max_dim - total)
            if k:
                degs[deg] = tuple("m%d_%d" % (deg, i) for i in range(k))
                total += k
        if not degs:
            degs = {rng.randint(0, max_degree): ("m",)}
        # random differential with d^2 = 0: nilpotent "staircase" choice,
        # nonzero entries only from even to odd degrees
        diffs = {}
        for deg in sorted(degs):
            src = len(degs.get(deg, ()))
            tgt = len(degs.get(deg + 1, ()))
            if src and tgt and deg % 2 == 0:
                mat = [[Fraction(rng.randint(-2, 2)) for _ in range(src)]
                       for _ in range(tgt)]
                if any(x != 0 for row in mat for x in row):
                    diffs[deg] = mat
        return degs, diffs

    if kind == "arrow":
        degs, diffs = random_complex()
        return arrow_category(degs, diffs)

    nobj = rng.randint(1, max_objects)
    objects = ["X%d" % i for i in range(nobj)]
    mids = {}
    diffs = {}
    for x in objects:
        for y in objects:
            if rng.random() < 0.6:
                degs, d = random_complex()
                mids[(x, y)] = degs
                if d and x != y:
                    diffs[(x, y)] = d
    return square_zero_category(objects, mids, diffs)
