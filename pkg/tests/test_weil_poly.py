import math
import random

import pytest

from anglerank.weil_poly import (
    LabelError,
    WeilPolyError,
    base_change,
    complete_coefficients,
    decode_base26,
    encode_base26,
    format_label,
    from_coefficients,
    from_descending,
    parse_label,
    prime_power,
    validate_weil,
)


def test_decode_examples():
    assert decode_base26("a") == 0
    assert decode_base26("b") == 1
    assert decode_base26("ab") == -1
    assert decode_base26("ac") == -2
    assert decode_base26("z") == 25
    assert decode_base26("ba") == 26
    assert decode_base26("aba") == -26


def test_encode_round_trip():
    rng = random.Random(5)
    for _ in range(500):
        n = rng.randint(-10**9, 10**9)
        assert decode_base26(encode_base26(n)) == n


def test_parse_label_paper_examples():
    P = parse_label("3.2.a_ab_ac")
    assert (P.g, P.q) == (3, 2)
    assert P.middle_coeffs() == (0, -1, -2)
    # T^6 - T^4 - 2T^3 - 2T^2 + 8
    assert P.coeffs == (8, 0, -2, -2, -1, 0, 1)
    assert P.validation.ok_for_analysis

    P = parse_label("3.2.a_a_ac")
    assert P.middle_coeffs() == (0, 0, -2)
    assert P.coeffs == (8, 0, 0, -2, 0, 0, 1)

    P = parse_label("1.2.a")
    assert P.coeffs == (2, 0, 1)


def test_parse_label_errors():
    with pytest.raises(LabelError):
        parse_label("3.2")
    with pytest.raises(LabelError):
        parse_label("2.2.a")  # wrong token count
    with pytest.raises(WeilPolyError):
        parse_label("2.6.a_a")  # q not a prime power
    with pytest.raises(LabelError):
        parse_label("1.2.A")
    with pytest.raises(LabelError):
        parse_label("g.2.a")


def test_complete_coefficients_examples():
    assert complete_coefficients(1, 2, [-1]) == [2, -1, 1]
    assert complete_coefficients(3, 2, [0, -1, -2]) == [8, 0, -2, -2, -1, 0, 1]
    assert complete_coefficients(2, 3, [0, 0]) == [9, 0, 0, 0, 1]


def test_validate_examples():
    rep = validate_weil([2, -1, 1], 2)  # T^2 - T + 2
    assert rep.functional_equation_ok and rep.weil_bound_ok
    assert rep.irreducible_power is not None
    assert not rep.boundary_root_flag

    rep = validate_weil([2, -3, 1], 2)  # T^2 - 3T + 2 = (T-1)(T-2)
    assert not rep.weil_bound_ok

    rep = validate_weil([2, 0, 1], 2)  # T^2 + 2, supersingular
    assert rep.weil_bound_ok and not rep.boundary_root_flag
    assert rep.irreducible_power == ((2, 0, 1), 1)


def test_validate_boundary_flag():
    # (T - 2)^2 over q = 4: root alpha = 2 = sqrt(q), trace root = 4 = 2 sqrt q
    rep = validate_weil([4, -4, 1], 4)
    assert rep.functional_equation_ok and rep.weil_bound_ok
    assert rep.boundary_root_flag


def test_validate_errors():
    with pytest.raises(WeilPolyError):
        validate_weil([2, 0, 2], 2)  # not monic
    with pytest.raises(WeilPolyError):
        validate_weil([2, 0, 0, 1], 2)  # odd degree


def test_round_trip_labels_fuzz():
    """parse_label(format_label(...)) is the identity on valid labels."""
    rng = random.Random(314159)
    count = 0
    q_choices = [2, 3, 4, 5, 7, 9]
    while count < 200:
        g = rng.randint(1, 3)
        q = rng.choice(q_choices)
        bound = math.isqrt(4 * q) + 1
        a = [rng.randint(-bound * 2, bound * 2) for _ in range(g)]
        coeffs = complete_coefficients(g, q, a)
        rep = validate_weil(coeffs, q)
        if not (rep.functional_equation_ok and rep.weil_bound_ok):
            continue
        label = format_label(g, q, a)
        P = parse_label(label)
        assert P.coeffs == tuple(coeffs)
        assert P.label() == label
        count += 1


def _random_weil_quadratic(rng, q):
    amax = math.isqrt(4 * q)
    a = rng.randint(-amax, amax)
    return [q, a, 1]


def _poly_mult(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def test_product_of_quadratics_validates_and_breaks():
    """A product of valid q-Weil quadratics validates; growing the middle
    coefficient beyond 2*(2 sqrt q)^g certifiably breaks the root bound."""
    rng = random.Random(777)
    for _ in range(200):
        g = rng.randint(1, 3)
        q = rng.choice([2, 3, 4, 5, 9])
        poly = [1]
        for _ in range(g):
            poly = _poly_mult(poly, _random_weil_quadratic(rng, q))
        rep = validate_weil(poly, q)
        assert rep.functional_equation_ok and rep.weil_bound_ok, (poly, q)

        # perturb c_g away from zero by more than twice the max possible
        # magnitude of the trace polynomial constant term
        delta = 2 * math.isqrt((4 * q) ** g) + 1
        perturbed = poly[:]
        direction = 1 if perturbed[g] >= 0 else -1
        perturbed[g] += direction * delta
        rep2 = validate_weil(perturbed, q)
        assert rep2.functional_equation_ok
        assert not rep2.weil_bound_ok, (poly, perturbed, q)


def test_base_change_examples():
    P = parse_label("1.2.ab")  # T^2 - T + 2
    assert base_change(P, 1) is P

    P2 = from_coefficients([2, 0, 1], 2)  # T^2 + 2
    B = base_change(P2, 2)
    assert B.q == 4
    assert B.coeffs == (4, 4, 1)  # (T + 2)^2
    assert B.e == 2 and B.h == (2, 1)

    B = base_change(P, 2)  # alpha^2 + conj = 1 - 4 = -3, product 4
    assert B.coeffs == (4, 3, 1)


def test_base_change_composition():
    for label in ["1.2.ab", "2.3.a_b", "3.2.a_ab_ac"]:
        P = parse_label(label)
        if not P.validation.ok_for_analysis:
            continue
        for r, s in [(2, 2), (2, 3), (3, 2), (4, 1)]:
            left = base_change(P, r * s)
            right = base_change(base_change(P, r), s)
            assert left.coeffs == right.coeffs
            assert left.q == right.q


def test_functional_equation_invariant_fuzz():
    rng = random.Random(2718)
    count = 0
    while count < 200:
        g = rng.randint(1, 4)
        q = rng.choice([2, 3, 5])
        a = [rng.randint(-3, 3) for _ in range(g)]
        coeffs = complete_coefficients(g, q, a)
        assert all(
            coeffs[g - i] == q**i * coeffs[g + i] for i in range(g + 1)
        )
        count += 1


def test_prime_power():
    assert prime_power(8) == (2, 3)
    assert prime_power(9) == (3, 2)
    assert prime_power(7) == (7, 1)
    with pytest.raises(WeilPolyError):
        prime_power(6)
    with pytest.raises(WeilPolyError):
        prime_power(1)


def test_coefficient_size_cap():
    with pytest.raises(WeilPolyError):
        from_coefficients([10**70, 0, 1], 2)


def test_from_descending():
    P = from_descending([1, 0, -1, -2, -2, 0, 8], 2)
    assert P.coeffs == (8, 0, -2, -2, -1, 0, 1)
