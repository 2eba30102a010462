"""Hochschild cochain and cyclic chain complexes of a dg category.

Sign conventions (frozen, see docs/SIGNS.md).  Letters live in shifted Hom
complexes; the shifted degree of a basis morphism e is <e> = deg e - 1.
With m(f, g) the diagrammatic composite and the Leibniz rule of
``dgcat``, the bar operators are

    delta(s e) = - s(d e)                      (internal differential)
    b2(s f (x) s g) = zeta(|f|, |g|) s(m(f,g)),  zeta(a, b) = (-1)^(a(b+1))

and any operator acting at slot i picks up the Koszul prefix
(-1)^(<e_1> + ... + <e_{i-1}>).  These satisfy the dg identities exactly
(asserted by the tests), so the column differential d1, the composition
differential d2 and the cyclic boundary all square to zero and
anticommute.

Gradings:
* a Hochschild cochain with input word w and output o has shifted degree
  <o> - <w> and total (cohomological) degree t = <o> - <w> + 1;
* a cyclic word w of n+1 letters has total (homological) degree
  t = -<w> - 1, and both differentials lower t by one.

Both complexes are truncated at a maximal column; results carry a
stability flag comparing the truncation with the next smaller one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import rational
from .dgcat import DGCategoryPresentation


def _zeta(a: int, b: int) -> int:
    return -1 if (a * (b + 1)) % 2 else 1


def _merge(terms):
    acc = {}
    for c, key in terms:
        if c == 0:
            continue
        acc[key] = acc.get(key, Fraction(0)) + c
    return [(c, k) for k, c in sorted(acc.items(), key=lambda kv: repr(kv[0]))
            if c != 0]


# ---------------------------------------------------------------------------
# Hochschild cochain complex
# ---------------------------------------------------------------------------

class HochschildComplex:
    """Columns 0..max_column of the Hochschild cochain bicomplex.

    Basis elements are tuples (n, objs, word, out): objs = (X_0..X_n),
    word = indices of basis morphisms e_i in Hom(X_{i-1}, X_i), out = index
    into Hom(X_0, X_n).  Column 0 has the empty word and out in
    Hom(X_0, X_0).
    """

    def __init__(self, cat: DGCategoryPresentation, max_column: int):
        if max_column < 1:
            raise ValueError("max_column must be >= 1")
        self.cat = cat
        self.max_column = max_column
        self._basis_by_degree = {}
        self._column_cache = {}
        # reverse composition lookup: (x,y,z) -> out index -> [(i,j,coef)]
        self._comp_rev = {}
        for (x, y, z), table in cat.compositions.items():
            rev = {}
            for (i, j), terms in table.items():
                for c, k in terms:
                    rev.setdefault(k, []).append((i, j, c))
            self._comp_rev[(x, y, z)] = rev
        # reverse differential lookup: (x,y) -> target index -> [(src, coef)]
        self._diff_rev = {}
        for (x, y) in cat.homs:
            rev = {}
            for idx, _, _ in cat.basis(x, y):
                for c, j in cat.diff(x, y, idx):
                    rev.setdefault(j, []).append((idx, c))
            self._diff_rev[(x, y)] = rev

    # -- bases ------------------------------------------------------------

    def _column_basis(self, n: int):
        if n in self._column_cache:
            return self._column_cache[n]
        cat = self.cat
        out = []
        for objs in itertools.product(cat.objects, repeat=n + 1):
            slot_bases = []
            ok = True
            for k in range(n):
                b = cat.basis(objs[k], objs[k + 1])
                if not b:
                    ok = False
                    break
                slot_bases.append(b)
            if not ok:
                continue
            target = cat.basis(objs[0], objs[n])
            if not target:
                continue
            for word in itertools.product(*slot_bases) if n else [()]:
                widx = tuple(e[0] for e in word)
                for o, _, _ in target:
                    out.append((n, objs, widx, o))
        self._column_cache[n] = out
        return out

    def shifted_degree(self, elt) -> int:
        n, objs, word, o = elt
        cat = self.cat
        wdeg = sum(cat.degree(objs[k], objs[k + 1], word[k]) - 1
                   for k in range(n))
        return (cat.degree(objs[0], objs[n], o) - 1) - wdeg

    def total_degree(self, elt) -> int:
        return self.shifted_degree(elt) + 1

    def basis_of_degree(self, t: int, max_column=None):
        N = self.max_column if max_column is None else max_column
        key = (t, N)
        if key in self._basis_by_degree:
            return self._basis_by_degree[key]
        out = [e for n in range(N + 1) for e in self._column_basis(n)
               if self.total_degree(e) == t]
        self._basis_by_degree[key] = out
        return out

    # -- differentials ----------------------------------------------------

    def _word_prefix_sign(self, objs, word, upto: int) -> int:
        cat = self.cat
        s = 0
        for k in range(upto):
            s += cat.degree(objs[k], objs[k + 1], word[k]) - 1
        return -1 if s % 2 else 1

    def d1(self, elt):
        """Internal differential (column preserving)."""
        cat = self.cat
        n, objs, word, o = elt
        sE = self.shifted_degree(elt)
        sgn_e = -1 if sE % 2 else 1
        terms = []
        # b1 o E : output hit by delta = -s d
        for c, o2 in cat.diff(objs[0], objs[n], o):
            terms.append((-c, (n, objs, word, o2)))
        # - (-1)^<E> E o (sum of slot differentials)
        for i in range(n):
            x, y = objs[i], objs[i + 1]
            pref = self._word_prefix_sign(objs, word, i)
            for src, c in self._diff_rev.get((x, y), {}).get(word[i], []):
                w2 = word[:i] + (src,) + word[i + 1:]
                terms.append((Fraction(sgn_e * pref) * c,
                              (n, objs, w2, o)))
        return _merge(terms)

    def d2(self, elt):
        """Composition differential (column + 1)."""
        cat = self.cat
        n, objs, word, o = elt
        if n + 1 > self.max_column:
            return []
        sE = self.shifted_degree(elt)
        sgn_e = -1 if sE % 2 else 1
        out_deg = cat.degree(objs[0], objs[n], o)
        terms = []
        # (a) append a letter: b2(E(w) (x) f)
        for xnew in cat.objects:
            for j, _, fdeg in cat.basis(objs[n], xnew):
                z = _zeta(out_deg, fdeg)
                for c, k in cat.compose(objs[0], objs[n], xnew, o, j):
                    terms.append((Fraction(z) * c,
                                  (n + 1, objs + (xnew,), word + (j,), k)))
        # (b) prepend a letter: b2(f (x) E(w)) with Koszul (-1)^{<E><f>}
        for xnew in cat.objects:
            for j, _, fdeg in cat.basis(xnew, objs[0]):
                kz = -1 if (sE * (fdeg - 1)) % 2 else 1
                z = _zeta(fdeg, out_deg)
                for c, k in cat.compose(xnew, objs[0], objs[n], j, o):
                    terms.append((Fraction(kz * z) * c,
                                  (n + 1, (xnew,) + objs, (j,) + word, k)))
        # (c) inner compositions: preimages of each word letter
        for i in range(n):
            x, z = objs[i], objs[i + 1]
            pref = self._word_prefix_sign(objs, word, i)
            for y in cat.objects:
                rev = self._comp_rev.get((x, y, z), {})
                for fi, gj, c in rev.get(word[i], []):
                    fdeg = cat.degree(x, y, fi)
                    gdeg = cat.degree(y, z, gj)
                    zz = _zeta(fdeg, gdeg)
                    objs2 = objs[:i + 1] + (y,) + objs[i + 1:]
                    w2 = word[:i] + (fi, gj) + word[i + 1:]
                    terms.append((Fraction(-sgn_e * pref * zz) * c,
                                  (n + 1, objs2, w2, o)))
        return _merge(terms)

    def d_total(self, elt):
        return _merge(self.d1(elt) + self.d2(elt))

    def d_matrix(self, t: int, max_column=None):
        """Matrix of d from total degree t to t+1 (rows = target basis)."""
        src = self.basis_of_degree(t, max_column)
        tgt = self.basis_of_degree(t + 1, max_column)
        index = {e: i for i, e in enumerate(tgt)}
        N = self.max_column if max_column is None else max_column
        mat = [[Fraction(0)] * len(src) for _ in range(len(tgt))]
        for j, e in enumerate(src):
            for c, f in self.d_total(e):
                if f[0] <= N:
                    i = index.get(f)
                    if i is None:
                        continue
                    mat[i][j] += c
        return mat, src, tgt


@dataclass
class HochschildBicomplexSlice:
    """Column n with its d1/d2 actions, for inspection and property tests."""

    complex: HochschildComplex
    column: int

    @property
    def basis(self):
        return self.complex._column_basis(self.column)

    def d1(self, elt):
        return self.complex.d1(elt)

    def d2(self, elt):
        return self.complex.d2(elt)


@dataclass
class HomologyResult:
    dims: dict
    stable: bool
    window: tuple
    truncation: int
    flagged_window: bool

    def dim(self, t: int) -> int:
        return self.dims.get(t, 0)


def _dims_from_complex(cx, window, max_column):
    lo, hi = window
    dims = {}
    for t in range(lo, hi + 1):
        basis_t = cx.basis_of_degree(t, max_column)
        if not basis_t:
            dims[t] = 0
            continue
        d_t, _, _ = cx.d_matrix(t, max_column)
        d_prev, _, _ = cx.d_matrix(t - 1, max_column)
        dims[t] = rational.homology_dimension(d_t, d_prev, len(basis_t))
    return dims


def hochschild_cohomology(cat, max_column: int, window=(0, 2)) -> HomologyResult:
    """Truncated Hochschild cohomology dimensions per total degree.

    The stability flag compares the dims against truncation max_column - 1;
    windows reaching past max_column - 1 are flagged as potentially
    truncation-sensitive.
    """
    cx = HochschildComplex(cat, max_column)
    dims = _dims_from_complex(cx, window, max_column)
    stable = True
    if max_column >= 2:
        dims_prev = _dims_from_complex(cx, window, max_column - 1)
        stable = dims == dims_prev
    flagged = window[1] > max_column - 1
    return HomologyResult(dims, stable, tuple(window), max_column, flagged)


def hh0_cocycles(cat, max_column: int = 3):
    """Basis of HH^0 as explicit cochain families.

    Returns a list of dicts mapping basis elements (n, objs, word, out) to
    rational coefficients: degree-0 cocycles of the total complex modulo
    coboundaries.
    """
    cx = HochschildComplex(cat, max_column)
    basis0 = cx.basis_of_degree(0, max_column)
    if not basis0:
        return []
    d0, _, _ = cx.d_matrix(0, max_column)
    kernel = rational.kernel_basis(d0, len(basis0))
    dm1, src_m1, _ = cx.d_matrix(-1, max_column)
    image_cols = []
    if src_m1:
        for j in range(len(src_m1)):
            image_cols.append([dm1[i][j] for i in range(len(basis0))])
    # choose kernel vectors independent modulo the image
    chosen = []
    base = list(image_cols)
    rk = rational.rank(base) if base else 0
    for v in kernel:
        cand = base + [v]
        if rational.rank(cand) > rk:
            base = cand
            rk += 1
            chosen.append(v)
    return [
        {e: c for e, c in zip(basis0, vec) if c != 0}
        for vec in chosen
    ]


# ---------------------------------------------------------------------------
# Cyclic complex
# ---------------------------------------------------------------------------

class CyclicComplex:
    """Signed cyclic coinvariant columns 0..max_column with the boundary b.

    Raw words are (n, objs, letters): objs = (X_0..X_n) and letters[k]
    indexes a basis morphism in Hom(X_k, X_{k+1 mod n+1}).  The quotient
    basis consists of rotation-orbit representatives whose orbit is not
    killed by a sign.
    """

    def __init__(self, cat: DGCategoryPresentation, max_column: int):
        if max_column < 1:
            raise ValueError("max_column must be >= 1")
        self.cat = cat
        self.max_column = max_column
        self._raw_cache = {}
        self._quot_cache = {}
        self._basis_by_degree = {}

    # -- raw words ----------------------------------------------------------

    def raw_words(self, n: int):
        if n in self._raw_cache:
            return self._raw_cache[n]
        cat = self.cat
        out = []
        for objs in itertools.product(cat.objects, repeat=n + 1):
            slot_bases = []
            ok = True
            for k in range(n + 1):
                b = cat.basis(objs[k], objs[(k + 1) % (n + 1)])
                if not b:
                    ok = False
                    break
                slot_bases.append(b)
            if not ok:
                continue
            for word in itertools.product(*slot_bases):
                out.append((n, objs, tuple(e[0] for e in word)))
        self._raw_cache[n] = out
        return out

    def letter_degrees(self, word):
        n, objs, letters = word
        cat = self.cat
        return tuple(cat.degree(objs[k], objs[(k + 1) % (n + 1)], letters[k])
                     for k in range(n + 1))

    def shifted_degree(self, word) -> int:
        return sum(d - 1 for d in self.letter_degrees(word))

    def total_degree(self, word) -> int:
        return -self.shifted_degree(word) - 1

    def rotate(self, word):
        """Signed right rotation (last letter to the front)."""
        n, objs, letters = word
        if n == 0:
            return word, 1
        degs = self.letter_degrees(word)
        moved = (degs[-1] - 1) * sum(d - 1 for d in degs[:-1])
        sign = -1 if moved % 2 else 1
        new = (n, (objs[-1],) + objs[:-1], (letters[-1],) + letters[:-1])
        return new, sign

    def orbit(self, word):
        """All rotations with accumulated signs, starting at word."""
        out = [(word, 1)]
        cur, sign = word, 1
        n = word[0]
        for _ in range(n):
            cur, s = self.rotate(cur)
            sign *= s
            out.append((cur, sign))
        # closure: n+1 rotations return the word with sign +1
        last, s = self.rotate(cur)
        assert last == word and sign * s == 1
        return out

    def project(self, word):
        """Quotient coordinates: (representative, sign) or None if killed."""
        orb = self.orbit(word)
        seen = {}
        for w, s in orb:
            if w in seen and seen[w] != s:
                return None
            seen[w] = s
        rep = min(seen)
        return rep, seen[rep]

    def quotient_basis(self, n: int):
        if n in self._quot_cache:
            return self._quot_cache[n]
        reps = []
        seen = set()
        for w in self.raw_words(n):
            if w in seen:
                continue
            pr = self.project(w)
            if pr is None:
                for ww, _ in self.orbit(w):
                    seen.add(ww)
                continue
            rep, _ = pr
            for ww, _ in self.orbit(w):
                seen.add(ww)
            reps.append(rep)
        reps.sort()
        self._quot_cache[n] = reps
        return reps

    def basis_of_degree(self, t: int, max_column=None):
        N = self.max_column if max_column is None else max_column
        key = (t, N)
        if key in self._basis_by_degree:
            return self._basis_by_degree[key]
        out = [w for n in range(N + 1) for w in self.quotient_basis(n)
               if self.total_degree(w) == t]
        self._basis_by_degree[key] = out
        return out

    # -- boundary -----------------------------------------------------------

    def _compose_slot(self, word, i):
        """M_i: compose letters i, i+1 with the bar prefix and zeta signs."""
        cat = self.cat
        n, objs, letters = word
        degs = self.letter_degrees(word)
        pref = sum(d - 1 for d in degs[:i])
        sgn = -1 if pref % 2 else 1
        z = _zeta(degs[i], degs[i + 1])
        x, y, zz = objs[i], objs[i + 1], objs[(i + 2) % (n + 1)]
        out = []
        for c, k in cat.compose(x, y, zz, letters[i], letters[i + 1]):
            new_objs = objs[:i + 1] + objs[i + 2:]
            new_letters = letters[:i] + (k,) + letters[i + 2:]
            out.append((Fraction(sgn * z) * c, (n - 1, new_objs, new_letters)))
        return out

    def boundary_raw(self, word):
        """Full boundary b = internal differential + compositions."""
        cat = self.cat
        n, objs, letters = word
        degs = self.letter_degrees(word)
        terms = []
        # internal differential: delta = -s d at each slot with prefix sign
        for i in range(n + 1):
            pref = sum(d - 1 for d in degs[:i])
            sgn = -1 if pref % 2 else 1
            x, y = objs[i], objs[(i + 1) % (n + 1)]
            for c, j in cat.diff(x, y, letters[i]):
                terms.append((Fraction(-sgn) * c,
                              (n, objs, letters[:i] + (j,) + letters[i + 1:])))
        # adjacent compositions
        if n >= 1:
            for i in range(n):
                terms.extend(self._compose_slot(word, i))
            # wraparound: rotate, then compose the first pair
            rot, rsign = self.rotate(word)
            terms.extend((Fraction(rsign) * c, w)
                         for c, w in self._compose_slot(rot, 0))
        return _merge(terms)

    def boundary_quotient(self, rep):
        out = []
        for c, w in self.boundary_raw(rep):
            pr = self.project(w)
            if pr is None:
                continue
            r, s = pr
            out.append((c * s, r))
        return _merge(out)

    def d_matrix(self, t: int, max_column=None):
        """Matrix of b from total degree t to t-1 on the quotient."""
        src = self.basis_of_degree(t, max_column)
        tgt = self.basis_of_degree(t - 1, max_column)
        index = {w: i for i, w in enumerate(tgt)}
        mat = [[Fraction(0)] * len(src) for _ in range(len(tgt))]
        for j, w in enumerate(src):
            for c, r in self.boundary_quotient(w):
                i = index.get(r)
                if i is None:
                    continue
                mat[i][j] += c
        return mat, src, tgt


@dataclass
class CyclicBicomplexSlice:
    complex: CyclicComplex
    column: int

    @property
    def basis(self):
        return self.complex.quotient_basis(self.column)


def _cyclic_dims(cx, window, max_column):
    lo, hi = window
    dims = {}
    for t in range(lo, hi + 1):
        basis_t = cx.basis_of_degree(t, max_column)
        if not basis_t:
            dims[t] = 0
            continue
        d_t, _, _ = cx.d_matrix(t, max_column)
        d_next, _, _ = cx.d_matrix(t + 1, max_column)
        dims[t] = rational.homology_dimension(d_t, d_next, len(basis_t))
    return dims


def cyclic_homology(cat, max_column: int, window=(0, 2)) -> HomologyResult:
    """Truncated cyclic homology dimensions per total (homological) degree."""
    cx = CyclicComplex(cat, max_column)
    dims = _cyclic_dims(cx, window, max_column)
    stable = True
    if max_column >= 2:
        stable = dims == _cyclic_dims(cx, window, max_column - 1)
    flagged = window[1] > max_column - 1
    return HomologyResult(dims, stable, tuple(window), max_column, flagged)


# ---------------------------------------------------------------------------
# Pairing-induced dualization
# ---------------------------------------------------------------------------

class PairingError(ValueError):
    pass


class PairingTarget:
    """One-dimensional graded target H with pairings into its dual.

    matrices[(X, Y)][i][j] is the coefficient of the canonical generator of
    H^* in p(e_i (x) f_j), e_i in Hom(X, Y), f_j in Hom(Y, X).
    """

    def __init__(self, cat, h_degree: int, matrices):
        self.cat = cat
        self.h_degree = h_degree
        self.matrices = {k: [list(r) for r in m] for k, m in matrices.items()}
        self.validate()

    def pair(self, x, y, i, j):
        mat = self.matrices.get((x, y))
        if mat is None:
            return Fraction(0)
        return Fraction(mat[i][j])

    def validate(self):
        cat = self.cat
        for (x, y), mat in self.matrices.items():
            bx = cat.basis(x, y)
            by = cat.basis(y, x)
            if len(mat) != len(bx) or any(len(r) != len(by) for r in mat):
                raise PairingError("pairing matrix shape mismatch at %r" % ((x, y),))
            for i, _, di in bx:
                for j, _, dj in by:
                    if mat[i][j] != 0 and di + dj != 2 - self.h_degree:
                        raise PairingError(
                            "pairing violates the degree rule at %r"
                            % ((x, y, i, j),))
            # map of complexes: p(d e (x) f) + (-1)^{<e>} p(e (x) d f) = 0
            for i, _, di in bx:
                for j, _, dj in by:
                    acc = Fraction(0)
                    for c, i2 in cat.diff(x, y, i):
                        acc += c * self.pair(x, y, i2, j)
                    s = -1 if (di - 1) % 2 else 1
                    for c, j2 in cat.diff(y, x, j):
                        acc += s * c * self.pair(x, y, i, j2)
                    if acc != 0:
                        raise PairingError(
                            "pairing is not a chain map at %r" % ((x, y, i, j),))


class CyclicFunctional:
    """Functional on cyclic chains (x) H, given on a finite truncation.

    values maps quotient representatives (n, objs, letters) to rationals;
    the H-slot is evaluated at the canonical generator.
    """

    def __init__(self, values, h_degree: int):
        self.values = dict(values)
        self.h_degree = h_degree

    def __call__(self, rep):
        return self.values.get(rep, Fraction(0))

    def pullback_boundary(self, cyclic: CyclicComplex):
        """The functional F o b, defined on one column less."""
        out = {}
        for n in range(cyclic.max_column + 1):
            for rep in cyclic.quotient_basis(n):
                acc = Fraction(0)
                for c, r in cyclic.boundary_quotient(rep):
                    acc += c * self(r)
                if acc != 0:
                    out[rep] = acc
        return CyclicFunctional(out, self.h_degree)


def pairing_dualize(functional: CyclicFunctional, pairing: PairingTarget,
                    cat, max_column: int):
    """Hochschild cochain obtained by contracting the output slot.

    The cochain component on the input word w (over objects X_0..X_n) is
    the unique y in Hom(X_0, X_n) with

        p(y (x) b) = (-1)^(<b><w> + n) F((w, b)_cyc)

    for every b in Hom(X_n, X_0), where <.> are shifted degrees.  The
    Koszul twist is what makes the contraction a chain map (asserted by
    the tests).  Requires the pairing to determine y uniquely.
    """
    if functional.h_degree != pairing.h_degree:
        raise PairingError("functional target degree %d != pairing degree %d"
                           % (functional.h_degree, pairing.h_degree))
    hoch = HochschildComplex(cat, max_column)
    cyc = CyclicComplex(cat, max_column)
    cochain = {}
    for n in range(max_column + 1):
        seen_words = set()
        for elt in hoch._column_basis(n):
            _, objs, word, _ = elt
            if (objs, word) in seen_words:
                continue
            seen_words.add((objs, word))
            x0, xn = objs[0], objs[n]
            bx = cat.basis(x0, xn)
            by = cat.basis(xn, x0)
            if not bx or not by:
                continue
            wdeg = sum(cat.degree(objs[k], objs[k + 1], word[k]) - 1
                       for k in range(n))
            rhs = []
            for j, _, dj in by:
                wcyc = (n, objs, word + (j,))
                pr = cyc.project(wcyc)
                if pr is None:
                    rhs.append(Fraction(0))
                else:
                    rep, s = pr
                    twist = -1 if ((dj - 1) * wdeg + n) % 2 else 1
                    rhs.append(Fraction(s * twist) * functional(rep))
            # solve sum_i y_i p(e_i, f_j) = rhs_j
            mat = [[pairing.pair(x0, xn, i, j) for i, _, _ in bx]
                   for j, _, _ in by]
            if all(x == 0 for row in mat for x in row):
                if any(r != 0 for r in rhs):
                    raise PairingError(
                        "degenerate pairing cannot realize the functional "
                        "at %r" % ((objs, word),))
                continue
            y = rational.solve(mat, rhs)
            if y is None:
                raise PairingError("no cochain realizes the functional at %r"
                                   % ((objs, word),))
            for (i, _, _), c in zip(bx, y):
                if c != 0:
                    cochain[(n, objs, word, i)] = c
    return cochain


def apply_d_to_cochain(cochain, cat, max_column: int):
    """d_total of a cochain given as {basis element: coefficient}."""
    hoch = HochschildComplex(cat, max_column)
    out = {}
    for elt, coef in cochain.items():
        for c, f in hoch.d_total(elt):
            if f[0] <= max_column:
                out[f] = out.get(f, Fraction(0)) + coef * c
    return {k: v for k, v in out.items() if v != 0}
