import random
from fractions import Fraction

from anglerank.newton import (
    NewtonClass,
    SlopeMultiset,
    classify_newton,
    in_z2,
    newton_slopes,
)
from anglerank.weil_poly import base_change, from_coefficients, parse_label

F = Fraction


def slopes_of(label):
    return newton_slopes(parse_label(label)).slopes


def test_slopes_paper_fixtures():
    assert slopes_of("3.2.a_a_ac") == (F(1, 3),) * 3 + (F(2, 3),) * 3
    assert slopes_of("3.2.a_ab_ac") == (F(0), F(0), F(1, 2), F(1, 2), F(1), F(1))
    assert newton_slopes(from_coefficients([2, 0, 1], 2)).slopes == (F(1, 2), F(1, 2))


def test_slope_invariants_fuzz():
    rng = random.Random(161803)
    count = 0
    from anglerank.weil_poly import complete_coefficients, validate_weil

    while count < 200:
        g = rng.randint(1, 3)
        q = rng.choice([2, 3, 4, 5, 8, 9])
        a = [rng.randint(-2 * g, 2 * g) for _ in range(g)]
        coeffs = complete_coefficients(g, q, a)
        rep = validate_weil(coeffs, q)
        if not (rep.functional_equation_ok and rep.weil_bound_ok):
            continue
        P = from_coefficients(coeffs, q)
        S = newton_slopes(P)  # internal asserts: symmetry, sum, denominators
        assert len(S) == 2 * g
        assert sum(S.slopes) == g
        c = S.counter()
        assert all(c[s] == c[1 - s] for s in c)
        count += 1


def test_slopes_base_change_invariant():
    for label in ["1.2.ab", "3.2.a_ab_ac", "3.2.a_a_ac", "2.3.a_b"]:
        P = parse_label(label)
        S = newton_slopes(P)
        for r in (2, 3, 4):
            assert newton_slopes(base_change(P, r)).slopes == S.slopes


def test_classification_examples():
    g3 = SlopeMultiset(tuple(sorted([F(0), F(0), F(1, 2), F(1, 2), F(1), F(1)])))
    assert classify_newton(g3, 3).tag == "almost_ordinary"

    g4 = SlopeMultiset(
        tuple(sorted([F(1, 3)] * 3 + [F(1, 2)] * 2 + [F(2, 3)] * 3))
    )
    assert classify_newton(g4, 4).tag == "generalized_LZ"

    ss = SlopeMultiset((F(1, 2), F(1, 2)))
    assert classify_newton(ss, 1).tag == "supersingular"

    ordinary = SlopeMultiset((F(0), F(0), F(1), F(1)))
    assert classify_newton(ordinary, 2).tag == "ordinary"

    comp = SlopeMultiset(tuple(sorted([F(0)] + [F(1, 2)] * 4 + [F(1)])))
    assert classify_newton(comp, 3).tag == "complementary"

    other = SlopeMultiset(tuple(sorted([F(1, 3)] * 3 + [F(2, 3)] * 3)))
    assert classify_newton(other, 3).tag == "other"


def test_classification_precedence():
    # g = 2 almost ordinary shape is also the complementary shape;
    # almost_ordinary wins
    s = SlopeMultiset(tuple(sorted([F(0), F(1, 2), F(1, 2), F(1)])))
    assert classify_newton(s, 2).tag == "almost_ordinary"
    # g = 1 ordinary also matches the complementary pattern; ordinary wins
    s = SlopeMultiset((F(0), F(1)))
    assert classify_newton(s, 1).tag == "ordinary"


def test_classification_permutation_invariance():
    rng = random.Random(42)
    vals = [F(0), F(0), F(1, 2), F(1, 2), F(1), F(1)]
    base = classify_newton(SlopeMultiset(tuple(sorted(vals))), 3).tag
    for _ in range(20):
        rng.shuffle(vals)
        assert classify_newton(SlopeMultiset(tuple(sorted(vals))), 3).tag == base


def test_in_z2():
    assert in_z2(F(0)) and in_z2(F(1)) and in_z2(F(1, 3)) and in_z2(F(2, 3))
    assert not in_z2(F(1, 2)) and not in_z2(F(1, 6))
