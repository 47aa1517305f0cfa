"""q-Weil polynomials: labels, construction, exact validation, base change.

Coefficients are stored in ascending order, c[0] the constant term.  The
label grammar is the LMFDB convention "g.q.c_1_..._c_g" with each c_i a
base-26 integer ('a'-'z' = 0-25, negative values prefixed by 'a').

Validation is exact: the functional equation is an integer identity, and the
root-location test runs Sturm sequences on the associated real trace
polynomial with endpoint signs at +-2*sqrt(q) decided through squared
quantities.  No floating point anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

MAX_COEFF_DIGITS = 64


class WeilPolyError(ValueError):
    """Bad input to the Weil polynomial layer."""


class LabelError(WeilPolyError):
    """Malformed or undecodable isogeny class label."""


class ValidationError(WeilPolyError):
    """Input polynomial fails Weil validation."""


# ---------------------------------------------------------------------------
# prime powers and base-26 labels


def prime_power(q: int) -> tuple[int, int]:
    """(p, k) with q = p^k, or raise."""
    if q < 2:
        raise WeilPolyError(f"q = {q} is not a prime power")
    fac = sympy.factorint(q)
    if len(fac) != 1:
        raise WeilPolyError(f"q = {q} is not a prime power")
    (p, k), = fac.items()
    return int(p), int(k)


def decode_base26(token: str) -> int:
    """Decode one label coefficient: 'a'-'z' digits, 'a'-prefix = negative."""
    if not token or not token.isalpha() or token != token.lower():
        raise LabelError(f"bad coefficient token {token!r}")
    if token == "a":
        return 0
    neg = False
    if token[0] == "a":
        neg = True
        token = token[1:]
    if token[0] == "a":
        raise LabelError("leading zero digit in coefficient token")
    val = 0
    for ch in token:
        val = 26 * val + (ord(ch) - ord("a"))
    return -val if neg else val


def encode_base26(n: int) -> str:
    if n == 0:
        return "a"
    neg = n < 0
    n = abs(n)
    digits = ""
    while n:
        digits = chr(ord("a") + n % 26) + digits
        n //= 26
    return "a" + digits if neg else digits


# ---------------------------------------------------------------------------
# core data types


@dataclass(frozen=True)
class ValidationReport:
    functional_equation_ok: bool
    weil_bound_ok: bool
    irreducible_power: tuple[tuple[int, ...], int] | None
    boundary_root_flag: bool
    notes: tuple[str, ...] = ()

    @property
    def ok_for_analysis(self) -> bool:
        return (
            self.functional_equation_ok
            and self.weil_bound_ok
            and self.irreducible_power is not None
        )


@dataclass(frozen=True)
class WeilPolynomial:
    """A validated q-Weil polynomial P(T) = sum c_k T^k of degree 2g."""

    g: int
    q: int
    p: int
    k: int  # q = p^k
    coeffs: tuple[int, ...]  # ascending, length 2g+1, monic
    h: tuple[int, ...]  # irreducible radical, ascending, monic
    e: int  # P = h^e
    validation: ValidationReport = field(compare=False)

    @property
    def g_eff(self) -> int:
        """Half the degree of the irreducible radical h (0 if deg h is odd)."""
        return (len(self.h) - 1) // 2

    def middle_coeffs(self) -> tuple[int, ...]:
        """(a_1, ..., a_g), the sub-leading label coefficients."""
        n = 2 * self.g
        return tuple(self.coeffs[n - i] for i in range(1, self.g + 1))

    def label(self) -> str:
        return format_label(self.g, self.q, self.middle_coeffs())

    def __str__(self) -> str:
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c:
                terms.append(f"{c}*T^{i}" if i else f"{c}")
        return " + ".join(terms).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# construction


def complete_coefficients(g: int, q: int, a) -> list[int]:
    """Fill in all 2g+1 coefficients from the g free ones via the functional
    equation c_{g-i} = q^i c_{g+i}."""
    a = list(a)
    if len(a) != g:
        raise WeilPolyError(f"expected {g} coefficients, got {len(a)}")
    c = [0] * (2 * g + 1)
    c[2 * g] = 1
    for i in range(1, g + 1):
        c[2 * g - i] = int(a[i - 1])
    for i in range(1, g + 1):
        c[g - i] = q**i * c[g + i]
    return c


def parse_label(label: str) -> WeilPolynomial:
    """Decode an isogeny-class label into a validated WeilPolynomial."""
    parts = label.split(".")
    if len(parts) != 3:
        raise LabelError(f"label {label!r} must have the form g.q.c_1_..._c_g")
    try:
        g = int(parts[0])
        q = int(parts[1])
    except ValueError as exc:
        raise LabelError(f"label {label!r}: g and q must be integers") from exc
    if g < 1:
        raise LabelError(f"label {label!r}: g must be positive")
    p, k = prime_power(q)
    tokens = parts[2].split("_")
    if len(tokens) != g:
        raise LabelError(
            f"label {label!r} has {len(tokens)} coefficient tokens, expected {g}"
        )
    a = [decode_base26(t) for t in tokens]
    coeffs = complete_coefficients(g, q, a)
    return from_coefficients(coeffs, q)


def format_label(g: int, q: int, a) -> str:
    return f"{g}.{q}." + "_".join(encode_base26(int(x)) for x in a)


def from_coefficients(coeffs_ascending, q: int) -> WeilPolynomial:
    """Build and validate a WeilPolynomial from ascending coefficients."""
    coeffs = tuple(int(c) for c in coeffs_ascending)
    if len(coeffs) < 3 or len(coeffs) % 2 == 0:
        raise WeilPolyError("degree must be even and at least 2")
    if coeffs[-1] != 1:
        raise WeilPolyError("polynomial must be monic")
    if any(len(str(abs(c))) > MAX_COEFF_DIGITS for c in coeffs):
        raise WeilPolyError(
            f"coefficients above {MAX_COEFF_DIGITS} decimal digits not supported"
        )
    g = (len(coeffs) - 1) // 2
    p, k = prime_power(q)
    report = validate_weil(coeffs, q)
    if report.irreducible_power is not None:
        h, e = report.irreducible_power
    else:
        h, e = coeffs, 1
    return WeilPolynomial(
        g=g, q=q, p=p, k=k, coeffs=coeffs, h=h, e=e, validation=report
    )


def from_descending(coeffs_descending, q: int) -> WeilPolynomial:
    """CLI form: --poly c_{2g},...,c_0 in descending order."""
    return from_coefficients(list(reversed(list(coeffs_descending))), q)


# ---------------------------------------------------------------------------
# validation


def _poly_eval_frac(coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def real_trace_polynomial(coeffs, q: int) -> list[Fraction]:
    """h_real of degree g with P(T) = T^g h_real(T + q/T), ascending coeffs.

    Computed by peeling the leading coefficient against the expansion of
    T^g (T + q/T)^k.
    """
    n = len(coeffs) - 1
    g = n // 2
    # work on the descending upper half; subtract contributions of (x^k) terms
    rem = list(coeffs)
    h = [Fraction(0)] * (g + 1)
    for k in range(g, -1, -1):
        c = Fraction(rem[g + k])
        h[k] = c
        # T^g * (T + q/T)^k = sum_j C(k,j) q^j T^{g + k - 2j}
        for j in range(k + 1):
            rem_idx = g + k - 2 * j
            rem[rem_idx] -= c * math.comb(k, j) * q**j
    assert all(x == 0 for x in rem), "functional equation must hold first"
    return h


def _sturm_sequence(coeffs) -> list[list[Fraction]]:
    def norm(p):
        while p and p[-1] == 0:
            p.pop()
        return p

    def rem(a, b):
        a = a[:]
        while len(a) >= len(b):
            f = a[-1] / b[-1]
            shift = len(a) - len(b)
            for i, bc in enumerate(b):
                a[i + shift] -= f * bc
            a = norm(a)
            if not a:
                break
        return a

    p0 = [Fraction(c) for c in coeffs]
    # squarefree part
    dp = [i * c for i, c in enumerate(p0)][1:]
    gcd = _poly_gcd(p0, dp)
    if len(gcd) > 1:
        p0, _ = _poly_divmod(p0, gcd)
    p1 = norm([i * c for i, c in enumerate(p0)][1:])
    seq = [norm(p0[:]), p1]
    while seq[-1]:
        r = rem(seq[-2], seq[-1])
        seq.append([-c for c in r])
    return seq[:-1]


def _poly_gcd(a, b):
    a = [Fraction(c) for c in a]
    b = [Fraction(c) for c in b]

    def norm(p):
        while p and p[-1] == 0:
            p.pop()
        return p

    a, b = norm(a), norm(b)
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, norm(r)
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _poly_divmod(a, b):
    a = [Fraction(c) for c in a]
    b = [Fraction(c) for c in b]
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = f
        for i, bc in enumerate(b):
            a[i + shift] -= f * bc
        while a and a[-1] == 0:
            a.pop()
    return q, a


def _sign_at_sqrt(poly, m: int, sign: int) -> int:
    """Exact sign of poly(sign * sqrt(m)) for ascending rational poly."""
    even = Fraction(0)
    odd = Fraction(0)
    for i, c in enumerate(poly):
        if i % 2 == 0:
            even += Fraction(c) * m ** (i // 2)
        else:
            odd += Fraction(c) * m ** ((i - 1) // 2)
    odd *= sign
    # value = even + odd * sqrt(m)
    if odd == 0:
        return 0 if even == 0 else (1 if even > 0 else -1)
    if even == 0:
        return 1 if odd > 0 else -1
    if even > 0 and odd > 0:
        return 1
    if even < 0 and odd < 0:
        return -1
    # opposite signs: compare even^2 vs odd^2 * m
    diff = even * even - odd * odd * m
    if diff == 0:
        return 0
    big_even = diff > 0
    return (1 if even > 0 else -1) if big_even else (1 if odd > 0 else -1)


def _sign_changes(signs) -> int:
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def count_roots_in_closed_sqrt_interval(poly, m: int) -> tuple[int, bool]:
    """(number of distinct real roots of poly in [-sqrt(m), sqrt(m)],
    has_boundary_root).  poly ascending with rational coefficients."""
    seq = _sturm_sequence(poly)
    sq = seq[0]
    boundary = _sign_at_sqrt(sq, m, 1) == 0 or _sign_at_sqrt(sq, m, -1) == 0
    lo = _sign_changes([_sign_at_sqrt(p, m, -1) for p in seq])
    hi = _sign_changes([_sign_at_sqrt(p, m, 1) for p in seq])
    # Sturm counts roots in (a, b]; add the left endpoint if it is a root
    interior = lo - hi
    if _sign_at_sqrt(sq, m, -1) == 0:
        interior += 1
    return interior, boundary


def count_real_roots(poly) -> int:
    """Number of distinct real roots of the squarefree part, by Sturm at
    +-infinity (signs of leading terms)."""
    seq = _sturm_sequence(poly)

    def sign_inf(p, at_plus):
        lead = p[-1]
        if not at_plus and (len(p) - 1) % 2 == 1:
            lead = -lead
        return 0 if lead == 0 else (1 if lead > 0 else -1)

    lo = _sign_changes([sign_inf(p, False) for p in seq])
    hi = _sign_changes([sign_inf(p, True) for p in seq])
    return lo - hi


def validate_weil(coeffs, q: int) -> ValidationReport:
    """Exact validation of an integer monic even-degree polynomial."""
    coeffs = [int(c) for c in coeffs]
    n = len(coeffs) - 1
    if coeffs[-1] != 1:
        raise WeilPolyError("polynomial must be monic")
    if n % 2:
        raise WeilPolyError("degree must be even")
    g = n // 2
    notes: list[str] = []

    functional_ok = all(coeffs[g - i] == q**i * coeffs[g + i] for i in range(g + 1))

    weil_ok = False
    boundary = False
    if functional_ok:
        h_real = real_trace_polynomial(coeffs, q)
        sturm_sqf_deg = None
        nreal = count_real_roots(h_real)
        # distinct real roots of the squarefree part must account for its
        # whole degree, and all must lie in [-2 sqrt q, 2 sqrt q]
        sqf = _squarefree_part(h_real)
        sturm_sqf_deg = len(sqf) - 1
        in_interval, boundary = count_roots_in_closed_sqrt_interval(sqf, 4 * q)
        weil_ok = nreal == sturm_sqf_deg and in_interval == sturm_sqf_deg
        if not weil_ok:
            notes.append(
                f"trace polynomial has {nreal} real roots, {in_interval} in "
                f"[-2 sqrt q, 2 sqrt q], squarefree degree {sturm_sqf_deg}"
            )
    else:
        notes.append("functional equation fails")

    irreducible_power = None
    if functional_ok and weil_ok:
        T = sympy.Symbol("T")
        factors = sympy.Poly(list(reversed(coeffs)), T).factor_list()[1]
        if len(factors) == 1:
            fac, e = factors[0]
            h = tuple(int(c) for c in reversed(fac.all_coeffs()))
            irreducible_power = (h, int(e))
        else:
            notes.append("not a power of a single irreducible polynomial")
    if boundary:
        notes.append("trace polynomial has a root exactly at +-2 sqrt q")

    return ValidationReport(
        functional_equation_ok=functional_ok,
        weil_bound_ok=weil_ok,
        irreducible_power=irreducible_power,
        boundary_root_flag=boundary,
        notes=tuple(notes),
    )


def _squarefree_part(poly):
    p = [Fraction(c) for c in poly]
    dp = [i * c for i, c in enumerate(p)][1:]
    gcd = _poly_gcd(p, dp)
    if len(gcd) <= 1:
        return p
    quo, rem = _poly_divmod(p, gcd)
    assert not any(rem)
    return quo


# ---------------------------------------------------------------------------
# base change


def base_change(P: WeilPolynomial, r: int) -> WeilPolynomial:
    """Weil polynomial of the same class over F_{q^r}: roots become alpha^r.

    Computed exactly as the resultant Res_x(P(x), T - x^r), normalised monic.
    """
    if r < 1:
        raise WeilPolyError("base change degree must be positive")
    if r == 1:
        return P
    x, T = sympy.symbols("x T")
    Px = sympy.Poly(list(reversed(P.coeffs)), x)
    res = sympy.resultant(Px.as_expr(), T - x**r, x)
    poly = sympy.Poly(res, T)
    lead = int(poly.all_coeffs()[0])
    if lead not in (1, -1):
        raise WeilPolyError("resultant is not +-monic")
    coeffs = [int(c) * lead for c in poly.all_coeffs()]
    return from_coefficients(list(reversed(coeffs)), P.q**r)
