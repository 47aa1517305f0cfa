"""Exact splitting field model, Galois group as signed permutations, and
root-of-unity certification.

The splitting field L of the irreducible radical h is presented as Q[y]/(m)
for a primitive element y = sum_j c_j alpha_j.  Construction is steered by
certified complex ball numerics and every output is verified symbolically:

  * m is an irreducible factor over Z of F = prod_tau (x - z_tau), the exact
    integer polynomial whose roots are all candidate sums over signed
    permutations tau;
  * the root expressions g_j(y) satisfy prod_j (T - g_j(y)) = P(T) in
    (Q[y]/m)[T] and the pairing g_i g_{i+g} = q, both checked exactly;
  * automorphisms are certified by exact Horner evaluation m(z_tau) = 0 mod m
    on a generating set, group closure, and the order count |G| = deg m.

Field elements are integer coordinate vectors with a common denominator;
the hot loops run on gmpy2 integers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import mpmath as mp
import sympy
from gmpy2 import mpz

from .balls import Ball, eval_poly, isolate_roots
from .weil_poly import WeilPolynomial

DEFAULT_DEGREE_CAP = 96
_CANDIDATE_CAP = 1536  # 2^g g! above this is out of desk scale


class SplittingFieldError(RuntimeError):
    pass


class DegreeCapExceeded(SplittingFieldError):
    """deg m would exceed the configured cap; Engine B still runs."""


class BoundaryRootError(SplittingFieldError):
    """h has a real root +-sqrt(q); the signed permutation model degenerates."""


# ---------------------------------------------------------------------------
# field arithmetic: elements are (nums tuple, den) with den > 0, gcd-reduced


Element = tuple[tuple, int]


class FieldOps:
    """Arithmetic in Q[y]/(m) for a monic integer m, ascending coefficients."""

    def __init__(self, m_coeffs):
        assert m_coeffs[-1] == 1
        self.m = [mpz(int(c)) for c in m_coeffs]
        self.D = len(m_coeffs) - 1

    def elem(self, nums, den=1) -> Element:
        nums = [mpz(int(n)) for n in nums]
        assert len(nums) <= self.D
        nums += [mpz(0)] * (self.D - len(nums))
        return self._normal(nums, mpz(int(den)))

    def _normal(self, nums, den) -> Element:
        if den < 0:
            den = -den
            nums = [-n for n in nums]
        g = den
        for n in nums:
            if n:
                g = math.gcd(g, n)
            if g == 1:
                break
        if g > 1:
            nums = [n // g for n in nums]
            den //= g
        return (tuple(nums), int(den))

    def zero(self) -> Element:
        return (tuple([mpz(0)] * self.D), 1)

    def one(self) -> Element:
        return self.elem([1])

    def from_rational(self, num, den=1) -> Element:
        nums = [mpz(int(num))] + [mpz(0)] * (self.D - 1)
        return self._normal(nums, mpz(int(den)))

    def is_zero(self, a: Element) -> bool:
        return not any(a[0])

    def equal(self, a: Element, b: Element) -> bool:
        return a == b

    def add(self, a: Element, b: Element) -> Element:
        (na, da), (nb, db) = a, b
        da, db = mpz(da), mpz(db)
        nums = [x * db + y * da for x, y in zip(na, nb)]
        return self._normal(nums, da * db)

    def sub(self, a: Element, b: Element) -> Element:
        return self.add(a, self.neg(b))

    def neg(self, a: Element) -> Element:
        return (tuple(-x for x in a[0]), a[1])

    def scale(self, a: Element, num, den=1) -> Element:
        nums = [x * mpz(int(num)) for x in a[0]]
        return self._normal(nums, mpz(a[1]) * mpz(int(den)))

    def _reduce(self, prod):
        m, D = self.m, self.D
        for k in range(len(prod) - 1, D - 1, -1):
            c = prod[k]
            if c:
                prod[k] = mpz(0)
                base = k - D
                for i in range(D):
                    prod[base + i] -= c * m[i]
        return prod[:D]

    def mul(self, a: Element, b: Element) -> Element:
        (na, da), (nb, db) = a, b
        D = self.D
        prod = [mpz(0)] * (2 * D - 1)
        for i, x in enumerate(na):
            if x:
                for j, y in enumerate(nb):
                    if y:
                        prod[i + j] += x * y
        nums = self._reduce(prod)
        return self._normal(nums, mpz(da) * mpz(db))

    def linear_combination(self, coeffs_elems) -> Element:
        """sum of (int coefficient, element) pairs."""
        acc = self.zero()
        for c, e in coeffs_elems:
            if c:
                acc = self.add(acc, self.scale(e, c))
        return acc

    def eval_int_poly(self, coeffs, z: Element) -> Element:
        """Horner evaluation of an integer polynomial at element z."""
        acc = self.zero()
        for c in reversed(list(coeffs)):
            acc = self.mul(acc, z)
            if c:
                acc = self.add(acc, self.from_rational(c))
        return acc

    def pow_abort(self, a: Element, n: int, coord_bound=None) -> Element | None:
        """a^n by square and multiply; abort (None) if a coordinate bound is
        exceeded, which certifies a is not a root of unity when the bound
        dominates all roots of unity in the field."""
        result = self.one()
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
                if coord_bound is not None and _exceeds(result, coord_bound):
                    return None
            n >>= 1
            if n:
                base = self.mul(base, base)
                if coord_bound is not None and _exceeds(base, coord_bound):
                    return None
        return result

    def ball_value(self, a: Element, y_powers) -> Ball:
        """Enclosure of a under the fixed embedding, given Ball powers of y."""
        acc = Ball.exact(0)
        for c, pw in zip(a[0], y_powers):
            if c:
                acc = acc + pw.mul_int(int(c))
        return acc.div_int(a[1])


def _exceeds(a: Element, bound) -> bool:
    nums, den = a
    return any(abs(n) > bound * den for n in nums)


# ---------------------------------------------------------------------------
# signed permutations


def conj_index(i: int, g: int) -> int:
    return i + g if i < g else i - g


def full_map(tau, g: int) -> tuple:
    """Extend tau: {0..g-1} -> {0..2g-1} to all 2g indices by conjugation."""
    return tuple(tau) + tuple(conj_index(tau[j], g) for j in range(g))


def compose(tau1, tau2, g: int) -> tuple:
    """(tau1 tau2)(j) = tau1_full(tau2(j)); both given on 0..g-1."""
    f1 = full_map(tau1, g)
    return tuple(f1[tau2[j]] for j in range(g))


def tau_matrix(tau, g: int) -> list[list[int]]:
    """The signed permutation matrix M with M[i][j] = +-1 per alpha_j -> image."""
    M = [[0] * g for _ in range(g)]
    for j in range(g):
        t = tau[j]
        if t < g:
            M[t][j] = 1
        else:
            M[t - g][j] = -1
    return M


def tau_sign_vector(tau, g: int) -> tuple:
    """F_2 sign vector (1 where the image is conjugated)."""
    return tuple(1 if tau[j] >= g else 0 for j in range(g))


def tau_underlying_perm(tau, g: int) -> tuple:
    return tuple(tau[j] % g for j in range(g))


@dataclass(frozen=True)
class SignedPermGroup:
    """The Galois group as signed permutations of the first g root indices."""

    g: int
    taus: tuple  # tuple of tau tuples; taus[0] is the identity
    verified_generators: tuple

    @property
    def order(self) -> int:
        return len(self.taus)

    def matrices(self):
        return [tau_matrix(t, self.g) for t in self.taus]

    def contains_minus_identity(self) -> bool:
        minus = tuple(j + self.g for j in range(self.g))
        return minus in set(self.taus)

    def underlying_perms(self) -> list[tuple]:
        return sorted({tau_underlying_perm(t, self.g) for t in self.taus})


def close_group(generators, g: int) -> set:
    ident = tuple(range(g))
    seen = {ident}
    frontier = [ident]
    gens = list(generators)
    while frontier:
        new = []
        for t in frontier:
            for s in gens:
                c = compose(s, t, g)
                if c not in seen:
                    seen.add(c)
                    new.append(c)
        frontier = new
    return seen


# ---------------------------------------------------------------------------
# splitting field


@dataclass
class SplittingField:
    """Exact model L = Q[y]/(m) with certified root expressions."""

    h_coeffs: tuple  # the polynomial whose roots are expressed (deg 2 g_eff)
    q: int
    g: int  # g_eff
    m_coeffs: tuple  # minimal polynomial of y, ascending, monic, integer
    degree: int
    disc: int  # disc(m); bounds all coordinate denominators
    c_vector: tuple
    roots: list  # 2g Elements; index i pairs with i+g
    ops: FieldOps = field(repr=False)
    orbit_taus: tuple  # matched signed permutation per root of m (unverified)
    dps: int
    root_balls: list = field(repr=False)  # enclosures under the fixed embedding
    y_powers: list = field(repr=False)  # Ball powers of y, length degree
    unity_coord_bound: int  # abort bound for root-of-unity coordinates

    @property
    def denominator_bound(self) -> int:
        return abs(self.disc)

    def element_ball(self, a: Element) -> Ball:
        return self.ops.ball_value(a, self.y_powers)


def _signed_taus(g: int):
    for perm in itertools.permutations(range(g)):
        for signs in itertools.product((0, 1), repeat=g):
            yield tuple(perm[j] + g * signs[j] for j in range(g))


def _pair_roots(balls, q: int):
    """Order certified root enclosures as alpha_1..alpha_g, conj_1..conj_g."""
    n = len(balls)
    used = [False] * n
    pairs = []
    for i in range(n):
        if used[i]:
            continue
        used[i] = True
        target = Ball.exact(q) * _ball_inverse(balls[i])
        match = None
        for j in range(n):
            if not used[j] and not target.separated_from(balls[j]):
                if match is not None:
                    return None  # ambiguous, raise precision
                match = j
        if match is None:
            return None
        used[match] = True
        pairs.append((i, match))
    order = []
    for i, j in pairs:
        # the representative is the one certified to have positive imaginary part
        bi, bj = balls[i], balls[j]
        if bi.mid.imag - bi.rad > 0:
            order.append((i, j))
        elif bj.mid.imag - bj.rad > 0:
            order.append((j, i))
        else:
            return None  # a real root or unresolved sign; caller handles
    order.sort(key=lambda ij: (mp.mpf(balls[ij[0]].mid.real), mp.mpf(balls[ij[0]].mid.imag)))
    firsts = [i for i, _ in order]
    seconds = [j for _, j in order]
    return firsts + seconds


def _ball_inverse(b: Ball) -> Ball:
    lo = b.abs_lower()
    if lo <= 0:
        raise SplittingFieldError("inverting a ball containing zero")
    mid = 1 / b.mid
    rad = b.rad / (lo * lo)
    return Ball(mid, (rad + abs(mid) * mp.mpf(2) ** (-mp.mp.prec + 4)) * (1 + mp.mpf(2) ** (-mp.mp.prec + 6)))


def _candidate_c_vectors(g: int):
    """Deterministic search order: increasing max-norm, positive first entry."""
    for norm in range(1, 8):
        opts = range(-norm, norm + 1)
        for vec in itertools.product(opts, repeat=g):
            if max(abs(v) for v in vec) != norm:
                continue
            if vec[0] <= 0:
                continue
            yield vec


def _ball_product_poly(values) -> list[Ball]:
    """prod (x - v) as ascending Ball coefficients."""
    poly = [Ball.exact(1)]
    for v in values:
        nxt = [Ball.exact(0)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i] = nxt[i] + c * (-v)
            nxt[i + 1] = nxt[i + 1] + c
        poly = nxt
    return poly


def splitting_field(
    P: WeilPolynomial,
    degree_cap: int = DEFAULT_DEGREE_CAP,
    start_dps: int = 160,
    max_dps: int = 300_000,
) -> SplittingField:
    """Certified splitting field of the irreducible radical h of P."""
    if not P.validation.ok_for_analysis:
        raise SplittingFieldError("input failed Weil validation")
    if P.validation.boundary_root_flag:
        raise BoundaryRootError(
            "h has a root +-sqrt(q); eigenvalue analysis is not defined here"
        )
    h = P.h
    if (len(h) - 1) % 2:
        raise BoundaryRootError("irreducible radical has odd degree")
    g = (len(h) - 1) // 2
    if 2**g * math.factorial(g) > _CANDIDATE_CAP:
        raise DegreeCapExceeded(f"2^g g! = {2**g * math.factorial(g)} candidates")

    dps = start_dps
    skip_c = 0
    while dps <= max_dps:
        try:
            return _attempt_build(P, h, g, degree_cap, dps, skip_c)
        except _RetryHigherPrecision as exc:
            dps = max(2 * dps, exc.suggested or 0)
        except _RetryNextC:
            skip_c += 1
    raise SplittingFieldError("precision budget exhausted")


class _RetryHigherPrecision(Exception):
    def __init__(self, suggested=None):
        self.suggested = suggested


class _RetryNextC(Exception):
    pass


def _attempt_build(P, h, g, degree_cap, dps, skip_c) -> SplittingField:
    q = P.q
    with mp.workdps(dps):
        try:
            balls = isolate_roots(list(h), dps)
        except RuntimeError as exc:
            raise _RetryHigherPrecision() from exc
        order = _pair_roots(balls, q)
        if order is None:
            raise _RetryHigherPrecision()
        alpha = [balls[i] for i in order]
        n2 = 2 * g

        taus = list(_signed_taus(g))
        c_vec = None
        for idx, cand in enumerate(_candidate_c_vectors(g)):
            if idx < skip_c:
                continue
            sums = [
                sum((alpha[t[j]].mul_int(cand[j]) for j in range(g)), Ball.exact(0))
                for t in taus
            ]
            ok = True
            for i in range(len(sums)):
                for j in range(i + 1, len(sums)):
                    if not sums[i].separated_from(sums[j]):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                c_vec = cand
                z_balls = sums
                break
        if c_vec is None:
            raise _RetryHigherPrecision()

        # exact F = prod (x - z_tau) by certified rounding
        fpoly = _ball_product_poly(z_balls)
        f_int = []
        for c in fpoly:
            v = c.round_to_int()
            if v is None:
                raise _RetryHigherPrecision()
            f_int.append(v)

        x = sympy.Symbol("x")
        factors = sympy.Poly(list(reversed(f_int)), x).factor_list()[1]
        if any(e > 1 for _, e in factors):
            # candidate sums collide as algebraic numbers; new c
            raise _RetryNextC()

        y_ball = z_balls[taus.index(tuple(range(g)))]
        m_poly = None
        for fac, _ in factors:
            coeffs = [int(c) for c in reversed(fac.all_coeffs())]
            val = eval_poly(coeffs, y_ball)
            if val.contains_zero():
                if m_poly is not None:
                    raise _RetryHigherPrecision()
                m_poly = coeffs
        if m_poly is None:
            raise _RetryHigherPrecision()
        D = len(m_poly) - 1
        if D > degree_cap:
            raise DegreeCapExceeded(
                f"splitting field degree {D} exceeds cap {degree_cap}"
            )

        # match the orbit: which tau corresponds to each root of m
        orbit = []
        for t, zb in zip(taus, z_balls):
            val = eval_poly(m_poly, zb)
            if val.contains_zero():
                orbit.append((t, zb))
        if len(orbit) != D:
            raise _RetryHigherPrecision()

        ys = [zb for _, zb in orbit]
        disc_ball = Ball.exact(1)
        for i in range(D):
            for j in range(i + 1, D):
                disc_ball = disc_ball * (ys[i] - ys[j])
        disc_ball = disc_ball * disc_ball
        disc = disc_ball.round_to_int()
        if disc is None:
            mag = disc_ball.abs_upper()
            needed = int(mp.log10(mag + 1)) + 60 + dps // 4
            raise _RetryHigherPrecision(suggested=needed)
        if disc == 0:
            raise _RetryNextC()

        # Lagrange data: per-k quotient prod_{l != k} (x - y_l) by synthetic
        # division of the full product, and m'(y_k) = quotient_k(y_k)
        pall = _ball_product_poly(ys)
        mprime = []
        quotients = []
        for k in range(D):
            desc = list(reversed(pall))
            quot_desc = [desc[0]]
            for c in desc[1:-1]:
                quot_desc.append(c + quot_desc[-1] * ys[k])
            quotients.append(list(reversed(quot_desc)))
            mp_k = eval_poly_ball(quotients[k], ys[k])
            mprime.append(mp_k)

        # coordinates of each root: disc * sum_k psi_k(alpha_j) L_k(x) / m'(y_k)
        ops = FieldOps(m_poly)
        roots_elems = []
        for j in range(n2):
            coords = []
            for i in range(D):
                acc = Ball.exact(0)
                for k, (t, _) in enumerate(orbit):
                    tj = full_map(t, g)[j]
                    term = alpha[tj] * quotients[k][i] * _ball_inverse(mprime[k])
                    acc = acc + term
                coords.append(acc.mul_int(disc))
            ints = [c.round_to_int() for c in coords]
            if any(v is None for v in ints):
                raise _RetryHigherPrecision(suggested=dps * 2)
            roots_elems.append(ops.elem(ints, disc))

        # exact verification: product identity and pairing
        _verify_product_identity(ops, roots_elems, h)
        for i in range(g):
            pr = ops.mul(roots_elems[i], roots_elems[i + g])
            if not ops.equal(pr, ops.from_rational(q)):
                raise _RetryHigherPrecision()

        y_powers = [Ball.exact(1)]
        for _ in range(D - 1):
            y_powers.append(y_powers[-1] * y_ball)

        # sanity: the stored enclosures match the exact coordinates
        for j in range(n2):
            vb = ops.ball_value(roots_elems[j], y_powers)
            if vb.separated_from(alpha[j]):
                raise _RetryHigherPrecision()

        bound = mp.mpf(0)
        for i in range(D):
            s = mp.mpf(0)
            for k in range(D):
                s += (quotients[k][i] * _ball_inverse(mprime[k])).abs_upper()
            bound = max(bound, s)
        unity_bound = int(mp.ceil(bound)) + 1

        return SplittingField(
            h_coeffs=tuple(h),
            q=q,
            g=g,
            m_coeffs=tuple(m_poly),
            degree=D,
            disc=disc,
            c_vector=tuple(c_vec),
            roots=roots_elems,
            ops=ops,
            orbit_taus=tuple(t for t, _ in orbit),
            dps=dps,
            root_balls=alpha,
            y_powers=y_powers,
            unity_coord_bound=unity_bound,
        )


def eval_poly_ball(coeffs_balls, z: Ball) -> Ball:
    acc = Ball.exact(0)
    for c in reversed(coeffs_balls):
        acc = acc * z + c
    return acc


def _verify_product_identity(ops: FieldOps, roots_elems, h) -> None:
    """prod_j (T - g_j(y)) = h(T) exactly in (Q[y]/m)[T]."""
    prod = [ops.one()]
    for r in roots_elems:
        nxt = [ops.zero() for _ in range(len(prod) + 1)]
        for i, c in enumerate(prod):
            nxt[i + 1] = ops.add(nxt[i + 1], c)
            nxt[i] = ops.sub(nxt[i], ops.mul(c, r))
        prod = nxt
    for i, c in enumerate(prod):
        want = ops.from_rational(h[i]) if i < len(h) else ops.zero()
        if not ops.equal(c, want):
            raise _RetryHigherPrecision()


# ---------------------------------------------------------------------------
# automorphism group


def automorphism_group(F: SplittingField) -> SignedPermGroup:
    """The full Galois group, certified.

    Matched candidates come from the construction; a generating subset is
    verified exactly (m(z_tau) = 0 mod m and certified root images), the
    group is closed over those generators, and the order must equal deg m.
    """
    g = F.g
    ident = tuple(range(g))
    matched = list(F.orbit_taus)
    assert ident in matched
    verified: list[tuple] = []
    group = {ident}
    for tau in matched:
        if tau in group:
            continue
        _verify_automorphism(F, tau)
        verified.append(tau)
        group = close_group(verified, g)
    if len(group) != F.degree:
        raise SplittingFieldError(
            f"automorphism count {len(group)} does not match field degree {F.degree}"
        )
    if set(matched) != group:
        raise SplittingFieldError("matched orbit is not a group; construction bug")
    taus = sorted(group)
    taus.remove(ident)
    taus.insert(0, ident)
    result = SignedPermGroup(g=g, taus=tuple(taus), verified_generators=tuple(verified))
    assert result.contains_minus_identity()
    return result


def _verify_automorphism(F: SplittingField, tau) -> None:
    """Exact certificate that y -> z_tau defines the automorphism tau."""
    ops = F.ops
    fm = full_map(tau, F.g)
    z = ops.linear_combination(
        (F.c_vector[j], F.roots[fm[j]]) for j in range(F.g)
    )
    val = ops.eval_int_poly(F.m_coeffs, z)
    if not ops.is_zero(val):
        raise SplittingFieldError("automorphism candidate failed m(z) = 0")
    # certified root images: g_j(z) must enclose exactly the root tau(j)
    with mp.workdps(F.dps):
        zb = F.element_ball(z)
        for j in range(2 * F.g):
            img = _eval_coords_ball(F, F.roots[j], zb)
            hits = [
                k
                for k, rb in enumerate(F.root_balls)
                if not img.separated_from(rb)
            ]
            if hits != [fm[j]]:
                raise SplittingFieldError(
                    "automorphism root image mismatch or unresolved enclosure"
                )


def _eval_coords_ball(F: SplittingField, a: Element, at: Ball) -> Ball:
    acc = Ball.exact(0)
    for c in reversed(a[0]):
        acc = acc * at + Ball.exact(int(c))
    return acc.div_int(a[1])


# ---------------------------------------------------------------------------
# roots of unity


def max_cyclotomic_order(degree_bound: int) -> int:
    """Largest n with phi(n) <= degree_bound."""
    best = 1
    n = 1
    # phi(n) >= sqrt(n/2), so n <= 2 (degree_bound+1)^2 suffices
    while n <= 2 * (degree_bound + 1) ** 2:
        if sympy.totient(n) <= degree_bound:
            best = n
        n += 1
    return best


def unity_order_lcm(degree_bound: int) -> int:
    """lcm of all n with phi(n) <= degree_bound."""
    out = 1
    n = 1
    while n <= 2 * (degree_bound + 1) ** 2:
        if sympy.totient(n) <= degree_bound:
            out = math.lcm(out, n)
        n += 1
    return out


def is_root_of_unity(F: SplittingField, t: Element) -> int | None:
    """The exact multiplicative order of t, or None if t is not a root of
    unity.  t must be nonzero.

    Negative answers are certified: either |t| != 1 under the fixed embedding
    (enclosure excludes 1), or every order up to the cyclotomic bound is
    excluded by the angle enclosure, or a coordinate of a power exceeds the
    bound valid for all roots of unity in the field.  A wrong positive
    candidate only triggers a precision retry; the exact power check decides.
    """
    ops = F.ops
    if ops.is_zero(t):
        raise ValueError("t must be nonzero")
    if ops.equal(t, ops.one()):
        return 1
    nmax = max_cyclotomic_order(F.degree)
    dps = F.dps
    for _ in range(8):
        try:
            with mp.workdps(dps):
                verdict = _unity_probe(F, t, nmax, dps)
        except RuntimeError:
            dps *= 2
            continue
        if verdict == "retry":
            dps *= 2
            continue
        if verdict is None:
            return None
        n = verdict
        power = ops.pow_abort(t, n, coord_bound=F.unity_coord_bound)
        if power is None:
            return None  # coordinate blow-up: certified not a root of unity
        if ops.equal(power, ops.one()):
            return _exact_order(F, t, n)
        # candidate order refuted exactly; sharpen the enclosure and retry
        dps *= 2
    raise SplittingFieldError("root-of-unity probe did not stabilise")


def _unity_probe(F: SplittingField, t: Element, nmax: int, dps: int):
    """'retry', None (certified not a root of unity), or a candidate order."""
    if dps != F.dps:
        # recompute the embedding value at higher working precision
        yb = _refine_y(F, dps)
        powers = [Ball.exact(1)]
        for _ in range(F.degree - 1):
            powers.append(powers[-1] * yb)
        val = F.ops.ball_value(t, powers)
    else:
        val = F.element_ball(t)
    lo, hi = val.abs_lower(), val.abs_upper()
    if hi < 1 or lo > 1:
        return None  # |t| != 1 at this embedding: certified not a root of unity
    ang = mp.atan2(val.mid.imag, val.mid.real) / (2 * mp.pi)
    if lo <= 0:
        return "retry"
    ang_rad = (val.rad / lo) / (2 * mp.pi) * 4 + mp.mpf(2) ** (-mp.mp.prec + 6)
    # candidate order: smallest n <= nmax with dist(n*ang, Z) not excludable
    candidate = None
    for n in range(1, nmax + 1):
        prod = ang * n
        dist = abs(prod - mp.nint(prod))
        if dist <= n * ang_rad + mp.mpf(2) ** (-mp.mp.prec // 2):
            candidate = n
            break
        # else n*theta is certifiably non-integral, so t^n != 1
    if candidate is None:
        return None  # every order up to nmax excluded
    if candidate == 1 and not F.ops.equal(t, F.ops.one()):
        # angle near 0 but t != 1; needs sharper enclosure to exclude n = 1
        return "retry" if ang_rad > mp.mpf(2) ** (-20) else candidate
    return candidate


def _refine_y(F: SplittingField, dps: int) -> Ball:
    balls = isolate_roots(list(F.h_coeffs), dps)
    order = _pair_roots(balls, F.q)
    if order is None:
        raise _RetryHigherPrecision()
    alpha = [balls[i] for i in order]
    return sum(
        (alpha[j].mul_int(F.c_vector[j]) for j in range(F.g)), Ball.exact(0)
    )


def _exact_order(F: SplittingField, t: Element, n: int) -> int:
    """Minimal order dividing n, decided by exact power checks."""
    ops = F.ops
    order = n
    for p in sympy.primefactors(n):
        while order % p == 0:
            cand = ops.pow_abort(t, order // p)
            if cand is not None and ops.equal(cand, ops.one()):
                order //= p
            else:
                break
    return order


def beta_element(F: SplittingField, j: int) -> Element:
    """beta_j = alpha_j^2 / q as a field element (0-indexed)."""
    sq = F.ops.mul(F.roots[j], F.roots[j])
    return F.ops.scale(sq, 1, F.q)


def beta_power_product(F: SplittingField, exponents) -> Element:
    """prod beta_j^{e_j} computed without field inversion: negative powers use
    the conjugate root, beta_j^{-1} = conj(alpha_j)^2 / q."""
    ops = F.ops
    acc = ops.one()
    qpow = 0
    for j, e in enumerate(exponents):
        if e == 0:
            continue
        idx = j if e > 0 else j + F.g
        base = F.roots[idx]
        sq = ops.mul(base, base)
        p = ops.pow_abort(sq, abs(e))
        acc = ops.mul(acc, p)
        qpow += abs(e)
    if qpow:
        acc = ops.scale(acc, 1, F.q**qpow)
    return acc


def unit_ratio_pairs(F: SplittingField) -> list[tuple[int, int, int, str, bool]]:
    """(i, j, order, kind, alpha_level) for pairs where beta_i/beta_j or
    beta_i*beta_j is a root of unity.

    Swapping a root with its conjugate inverts beta_i, turning ratios into
    products, so both kinds are probed; kind records which one certifies.
    alpha_level marks pairs where the corresponding alpha-level quantity is
    already a root of unity (a warning against absolute simplicity).
    Indices are 1-based in the output.
    """
    out = []
    ops = F.ops
    for i in range(F.g):
        for j in range(i + 1, F.g):
            for kind, partner in (("ratio", j + F.g), ("product", j)):
                # ratio: beta_i/beta_j = (alpha_i conj(alpha_j))^2 / q^2
                # product: beta_i*beta_j = (alpha_i alpha_j)^2 / q^2
                prod = ops.mul(F.roots[i], F.roots[partner])
                quantity = ops.scale(ops.mul(prod, prod), 1, F.q**2)
                order = is_root_of_unity(F, quantity)
                if order is not None:
                    alpha_level = ops.scale(prod, 1, F.q)
                    alpha_order = is_root_of_unity(F, alpha_level)
                    out.append((i + 1, j + 1, order, kind, alpha_order is not None))
                    break
    return out
