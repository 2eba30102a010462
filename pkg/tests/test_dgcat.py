from fractions import Fraction

from hodgecorr.dgcat import (
    DGCategoryPresentation, validate,
    point_category, matrix_category, two_point_category,
    arrow_category, square_zero_category, random_valid_category,
    _hom_from_degrees,
)


def test_point_category_valid():
    report = validate(point_category())
    assert report.ok


def test_matrix_category_valid():
    report = validate(matrix_category(2))
    assert report.ok
    report3 = validate(matrix_category(3))
    assert report3.ok


def test_two_point_category_valid():
    assert validate(two_point_category()).ok


def test_arrow_category_with_differential_valid():
    cat = arrow_category({0: ("u", "v"), 1: ("w",)},
                         {0: [[Fraction(1), Fraction(-1)]]})
    assert validate(cat).ok


def test_square_zero_category_valid():
    cat = square_zero_category(
        ["X", "Y"],
        {("X", "Y"): {0: ("f",), 1: ("g",)},
         ("X", "X"): {1: ("n",)}},
        {("X", "Y"): {0: [[Fraction(2)]]}},
    )
    assert validate(cat).ok


def test_associativity_violation_named():
    # basis (1, a, b): a*a = b, a*b = 0, b*a = a makes (aa)a = a but a(aa) = 0
    homs = {("x", "x"): _hom_from_degrees({0: ("1", "a", "b")})}
    comp = {("x", "x", "x"): {
        (0, 0): [(Fraction(1), 0)],
        (0, 1): [(Fraction(1), 1)], (1, 0): [(Fraction(1), 1)],
        (0, 2): [(Fraction(1), 2)], (2, 0): [(Fraction(1), 2)],
        (1, 1): [(Fraction(1), 2)],
        (1, 2): [],
        (2, 1): [(Fraction(1), 1)],
        (2, 2): [],
    }}
    ident = {"x": [(Fraction(1), 0)]}
    cat = DGCategoryPresentation(["x"], homs, comp, ident)
    report = validate(cat)
    assoc = [i for i in report.issues if i.kind == "associativity"]
    assert assoc
    assert ("x", "x", "x", "x", 1, 1, 1) in [i.witness for i in assoc]


def test_leibniz_violation_named():
    homs = {("x", "x"): _hom_from_degrees({0: ("1", "a"), 1: ("b",)},
                                          {0: [[Fraction(0), Fraction(1)]]})}
    # a in degree 0 with d a = b, a*a = 1: d(a*a) = 0 while the Leibniz
    # right side is m(a, b) + m(b, a) = b once the table says a*b = b
    comp = {("x", "x", "x"): {
        (0, 0): [(Fraction(1), 0)],
        (0, 1): [(Fraction(1), 1)],
        (1, 0): [(Fraction(1), 1)],
        (0, 2): [(Fraction(1), 2)],
        (2, 0): [(Fraction(1), 2)],
        (1, 1): [(Fraction(1), 0)],
        (1, 2): [(Fraction(1), 2)],
        (2, 1): [],
        (2, 2): [],
    }}
    ident = {"x": [(Fraction(1), 0)]}
    cat = DGCategoryPresentation(["x"], homs, comp, ident)
    report = validate(cat)
    leib = [i for i in report.issues if i.kind == "leibniz"]
    assert leib
    assert ("x", "x", "x", 1, 1) in [i.witness for i in leib]


def test_identity_violation_named():
    homs = {("x", "x"): _hom_from_degrees({0: ("1", "a")})}
    comp = {("x", "x", "x"): {
        (0, 0): [(Fraction(1), 0)],
        (0, 1): [(Fraction(2), 1)],  # 1 * a = 2a: left unit fails
        (1, 0): [(Fraction(1), 1)],
        (1, 1): [],
    }}
    ident = {"x": [(Fraction(1), 0)]}
    cat = DGCategoryPresentation(["x"], homs, comp, ident)
    report = validate(cat)
    kinds = {i.kind for i in report.issues}
    assert "identity" in kinds


def test_random_categories_are_valid():
    for seed in range(25):
        cat = random_valid_category(seed)
        report = validate(cat)
        assert report.ok, "seed %d: %s" % (seed, report.issues[:3])


def test_compose_vec_bilinearity():
    cat = matrix_category(2)
    v = [(Fraction(2), 0), (Fraction(3), 3)]   # 2 E00 + 3 E11
    w = [(Fraction(1), 1)]                     # E01
    out = cat.compose_vec("A", "A", "A", v, w)
    # m(E00, E01) = E01, m(E11, E01) = 0
    assert out == [(Fraction(2), 1)]
