"""Graded vector spaces, Koszul signs, shifts and signed cyclic words.

Conventions (frozen, see docs/SIGNS.md):

* grading is cohomological and the shift ``[k]`` lowers degrees:
  ``(V[k])^i = V^{i+k}``, so an element of degree d has degree d - k after
  shifting by k;
* the Koszul sign of a permutation is the product of (-1)^(d_i * d_j) over
  its inversions;
* a cyclic word rotates with the sign (-1)^(deg(moved letter) * sum of the
  other degrees); the full cycle always comes back with sign +1.

Two scalar regimes coexist: exact rationals (``fractions.Fraction``) and
complex floats with an explicit tolerance.  Homology code accepts only the
rational regime.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

RATIONAL = "rational"
COMPLEX = "complex"

DEFAULT_TOLERANCE = 1e-9


class RegimeError(ValueError):
    """Scalar regimes were mixed, or an exact-only routine got floats."""


def scalar_is_zero(x, regime: str, tol: float = DEFAULT_TOLERANCE) -> bool:
    if regime == RATIONAL:
        return x == 0
    return abs(x) <= tol


def koszul_sign(perm, degrees) -> int:
    """Koszul sign of a permutation acting on homogeneous elements.

    ``perm[k]`` is the index (into ``degrees``) of the element placed at
    position k.  Each inversion (a pair placed out of order) contributes
    (-1)^(d_i * d_j).
    """
    if len(perm) != len(degrees):
        raise ValueError(
            "permutation length %d != degree list length %d"
            % (len(perm), len(degrees))
        )
    sign = 1
    n = len(perm)
    for k in range(n):
        for l in range(k + 1, n):
            if perm[k] > perm[l]:
                if (degrees[perm[k]] * degrees[perm[l]]) % 2:
                    sign = -sign
    return sign


def compose_perms(sigma, tau):
    """Permutation 'first tau, then sigma' in the position convention."""
    return [tau[s] for s in sigma]


@dataclass(frozen=True)
class GradedVectorSpace:
    """Finite-dimensional graded vector space with named basis per degree."""

    basis: dict  # degree -> tuple of labels
    regime: str = RATIONAL

    def __post_init__(self):
        clean = {}
        for deg, labels in self.basis.items():
            labels = tuple(labels)
            if labels:
                clean[int(deg)] = labels
        object.__setattr__(self, "basis", clean)

    def dim(self, degree: int) -> int:
        return len(self.basis.get(degree, ()))

    @property
    def total_dim(self) -> int:
        return sum(len(v) for v in self.basis.values())

    @property
    def degrees(self):
        return sorted(self.basis)

    def shifted(self, k: int) -> "GradedVectorSpace":
        """The shift [k]: degree d moves to d - k."""
        return GradedVectorSpace(
            {deg - k: labels for deg, labels in self.basis.items()},
            regime=self.regime,
        )

    def tensor(self, other: "GradedVectorSpace") -> "GradedVectorSpace":
        if self.regime != other.regime:
            raise RegimeError("cannot tensor %s with %s" % (self.regime, other.regime))
        out: dict = {}
        for d1, l1 in self.basis.items():
            for d2, l2 in other.basis.items():
                out.setdefault(d1 + d2, [])
                out[d1 + d2].extend((a, b) for a in l1 for b in l2)
        return GradedVectorSpace({d: tuple(v) for d, v in out.items()}, self.regime)


def swap_matrix(v: GradedVectorSpace, w: GradedVectorSpace):
    """The Koszul braiding V (x) W -> W (x) V on basis elements.

    Returns a dict mapping (v_label, v_deg, w_label, w_deg) to the sign it
    picks up; each basis tensor (a, b) maps to sign * (b, a).
    """
    out = {}
    for dv, lv in v.basis.items():
        for dw, lw in w.basis.items():
            sign = -1 if (dv * dw) % 2 else 1
            for a in lv:
                for b in lw:
                    out[(a, dv, b, dw)] = sign
    return out


@dataclass(frozen=True)
class ShiftedElement:
    """An element remembered together with a shift offset."""

    label: str
    degree: int
    offset: int = 0

    @property
    def effective_degree(self) -> int:
        return self.degree - self.offset

    def shift(self, k: int) -> "ShiftedElement":
        return ShiftedElement(self.label, self.degree, self.offset + k)


def shift(obj, k: int):
    """Shift a GradedVectorSpace or a ShiftedElement by [k]."""
    if isinstance(obj, GradedVectorSpace):
        return obj.shifted(k)
    if isinstance(obj, ShiftedElement):
        return obj.shift(k)
    raise TypeError("cannot shift %r" % (obj,))


class HomComplex:
    """Graded space with a degree +1 differential, d^2 = 0.

    The differential is given per degree as a matrix sending the basis of
    degree d to coordinates in degree d+1 (rows indexed by the target
    basis).  Construction validates d^2 = 0, exactly in the rational regime
    and within tolerance in the complex regime.
    """

    def __init__(self, space: GradedVectorSpace, differential=None,
                 tol: float = DEFAULT_TOLERANCE):
        self.space = space
        self.differential = {int(k): v for k, v in (differential or {}).items()}
        self.tol = tol
        self._validate()

    def _validate(self):
        zero = Fraction(0) if self.space.regime == RATIONAL else 0.0
        for deg, mat in self.differential.items():
            src = self.space.dim(deg)
            tgt = self.space.dim(deg + 1)
            if len(mat) != tgt or any(len(row) != src for row in mat):
                raise ValueError("differential at degree %d has wrong shape" % deg)
        for deg in list(self.differential):
            nxt = self.differential.get(deg + 1)
            if nxt is None:
                if self.space.dim(deg + 2) == 0:
                    continue
                nxt = [[zero] * self.space.dim(deg + 1)
                       for _ in range(self.space.dim(deg + 2))]
            cur = self.differential[deg]
            for j in range(self.space.dim(deg)):
                for i in range(self.space.dim(deg + 2)):
                    acc = zero
                    for k in range(self.space.dim(deg + 1)):
                        acc += nxt[i][k] * cur[k][j]
                    if not scalar_is_zero(acc, self.space.regime, self.tol):
                        raise ValueError(
                            "d^2 != 0 at degree %d (entry %d,%d)" % (deg, i, j)
                        )

    def d_entries(self, degree: int):
        """Sparse view of d on degree: list of (i_target, j_source, coef)."""
        mat = self.differential.get(degree)
        if mat is None:
            return []
        out = []
        for i, row in enumerate(mat):
            for j, c in enumerate(row):
                if c != 0:
                    out.append((i, j, c))
        return out


@dataclass(frozen=True)
class SignedCyclicWord:
    """A tensor word modulo signed cyclic rotation.

    ``letters`` is a tuple of (label, degree) pairs; ``sign`` is the sign
    accumulated so far relative to the originally given word.
    """

    letters: tuple
    sign: int = 1
    rotation: int = 0  # rotations applied to reach this representative

    def __post_init__(self):
        for lab, deg in self.letters:
            if not isinstance(deg, int):
                raise ValueError("non-homogeneous letter %r" % ((lab, deg),))

    @property
    def degrees(self):
        return tuple(d for _, d in self.letters)

    def rotate(self) -> "SignedCyclicWord":
        """One left rotation: the first letter moves to the end.

        Koszul cost: the moved letter passes every other letter.
        """
        if len(self.letters) <= 1:
            return SignedCyclicWord(self.letters, self.sign, self.rotation)
        first, rest = self.letters[0], self.letters[1:]
        moved = first[1] * sum(d for _, d in rest)
        sign = -self.sign if moved % 2 else self.sign
        return SignedCyclicWord(rest + (first,), sign,
                                (self.rotation + 1) % len(self.letters))

    def rotate_right(self) -> "SignedCyclicWord":
        """One right rotation: the last letter moves to the front."""
        if len(self.letters) <= 1:
            return SignedCyclicWord(self.letters, self.sign, self.rotation)
        last, rest = self.letters[-1], self.letters[:-1]
        moved = last[1] * sum(d for _, d in rest)
        sign = -self.sign if moved % 2 else self.sign
        return SignedCyclicWord((last,) + rest, sign,
                                (self.rotation - 1) % len(self.letters))


def cyclic_normalize(word: SignedCyclicWord):
    """Canonical rotation of a cyclic word with its accumulated sign.

    The representative is the lexicographically minimal rotation under the
    order on (label, degree) pairs, ties broken by the earliest rotation
    index.  Returns (canonical_word, sign); the sign is the Koszul cost of
    reaching the representative times the word's own stored sign.

    If some rotation fixes the letter sequence but flips the sign, the
    class is zero; this is reported via sign 0.
    """
    n = len(word.letters)
    if n == 0:
        return word, word.sign
    rotations = []
    cur = SignedCyclicWord(word.letters, 1)
    for k in range(n):
        rotations.append(cur)
        cur = cur.rotate()
    # full cycle must close with sign +1 (the exponents telescope)
    assert cur.letters == word.letters and cur.sign == 1
    best = min(range(n), key=lambda k: rotations[k].letters)
    canon = rotations[best]
    for k in range(n):
        if rotations[k].letters == canon.letters and rotations[k].sign != canon.sign:
            return SignedCyclicWord(canon.letters, 0), 0
    total = word.sign * canon.sign
    return SignedCyclicWord(canon.letters, total), total
