"""Engine B: the certified lattice of multiplicative relations among the
unit-circle eigenvalue ratios beta_j = alpha_j^2 / q.

beta^e is a root of unity iff N* (e . t) is an integer, where t_j is the
angle of beta_j under one fixed complex embedding and N* is the lcm of all
possible root-of-unity orders in the splitting field (single-embedding
exactness: a field embedding is injective).  Detection runs LLL on the
standard integer relation lattice for (N* t_1, ..., N* t_g, 1); candidates
are certified exactly through the splitting field (or a resultant fallback),
and non-existence below the effective generator-weight radius is certified
by the Gram-Schmidt lower bound of the reduced basis together with the
angle enclosure widths.  Either outcome is rigorous: detected-or-excluded,
never silence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp
import sympy

from . import int_linalg
from .balls import Ball, isolate_roots
from .galois_engine import (
    SplittingField,
    _pair_roots,
    beta_power_product,
    is_root_of_unity,
    unity_order_lcm,
)
from .int_linalg import RootBound, bounds, hnf, saturate_rows
from .weil_poly import WeilPolynomial


# ---------------------------------------------------------------------------
# certified angles


@dataclass
class CertifiedAngles:
    """Angles arg(alpha_j)/2pi in (0, 1/2), one per conjugate pair, as
    (midpoint, radius) pairs of mpf values at the stated precision."""

    theta: list  # list of (mpf mid, mpf rad)
    error: object  # max radius, mpf
    dps: int

    @property
    def g(self) -> int:
        return len(self.theta)


def _angle_of_ball(b: Ball):
    lo = b.abs_lower()
    if lo <= 0:
        raise RuntimeError("angle of a ball containing zero")
    mid = mp.atan2(b.mid.imag, b.mid.real) / (2 * mp.pi)
    rad = (b.rad / lo) * mp.mpf("0.2") + mp.mpf(2) ** (-mp.mp.prec + 6)
    # 0.2 > 1.1/(2 pi); arcsin(x) <= 1.1 x for x <= 1/2, enforced below
    if b.rad > lo / 2:
        raise RuntimeError("ball too wide for a rigorous angle")
    return mid, rad


def frobenius_angles(P: WeilPolynomial, dps: int = 60) -> CertifiedAngles:
    """Certified alpha-angles for the irreducible radical of P, ordered the
    same way the splitting field orders its roots."""
    h = P.h
    for _ in range(12):
        try:
            with mp.workdps(dps):
                balls = isolate_roots(list(h), dps)
                order = _pair_roots(balls, P.q)
                if order is None:
                    raise RuntimeError("pairing unresolved")
                g = (len(h) - 1) // 2
                theta = []
                maxrad = mp.mpf(0)
                for i in order[:g]:
                    mid, rad = _angle_of_ball(balls[i])
                    theta.append((mid, rad))
                    maxrad = max(maxrad, rad)
                return CertifiedAngles(theta=theta, error=maxrad, dps=dps)
        except RuntimeError:
            dps *= 2
    raise RuntimeError("could not certify angles")


def angles_from_field(F: SplittingField) -> CertifiedAngles:
    with mp.workdps(F.dps):
        theta = []
        maxrad = mp.mpf(0)
        for b in F.root_balls[: F.g]:
            mid, rad = _angle_of_ball(b)
            theta.append((mid, rad))
            maxrad = max(maxrad, rad)
        return CertifiedAngles(theta=theta, error=maxrad, dps=F.dps)


# ---------------------------------------------------------------------------
# LLL on integer rows (dimension <= g+1, exact arithmetic)


def lll_reduce(rows):
    """Standard LLL with delta = 3/4 over exact rationals; rows of ints."""
    b = [[Fraction(x) for x in row] for row in rows]
    n = len(b)

    def gso():
        star = []
        mu = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            v = b[i][:]
            for j in range(i):
                denom = sum(x * x for x in star[j])
                mu[i][j] = (
                    sum(x * y for x, y in zip(b[i], star[j])) / denom
                    if denom
                    else Fraction(0)
                )
                v = [x - mu[i][j] * y for x, y in zip(v, star[j])]
            star.append(v)
        return star, mu

    star, mu = gso()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = mu[k][j]
            qi = int(q + Fraction(1, 2)) if q >= 0 else -int(-q + Fraction(1, 2))
            if qi:
                b[k] = [x - qi * y for x, y in zip(b[k], b[j])]
        star, mu = gso()
        nk = sum(x * x for x in star[k])
        nk1 = sum(x * x for x in star[k - 1])
        if nk >= (Fraction(3, 4) - mu[k][k - 1] ** 2) * nk1:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            star, mu = gso()
            k = max(k - 1, 1)
    ints = [[int(x) for x in row] for row in b]
    star, _ = gso()
    gs_norms_sq = [sum(x * x for x in v) for v in star]
    return ints, gs_norms_sq


# ---------------------------------------------------------------------------
# detection / exclusion primitive


@dataclass
class DetectionOutcome:
    candidates: list  # integer vectors in the quotient coordinates
    excluded: bool
    certificate: str


def relation_lattice(angle_rows, radius: int, dps: int) -> DetectionOutcome:
    """One detect-or-exclude pass.

    angle_rows: list of (mid, rad) enclosures of real numbers u_i; the
    question is whether some 0 != c in Z^n with ||c||_1 <= radius has
    c . u in Z.  Returns candidate vectors (synthetically short ones) or an
    exclusion certificate.
    """
    n = len(angle_rows)
    if n == 0:
        return DetectionOutcome([], True, "empty quotient: lattice is complete")
    with mp.workdps(dps):
        maxrad = max(r for _, r in angle_rows)
        # scale so that C * maxrad <= 2^-10; then a true relation's residual
        # is at most E = ||c||_1 (C rad + 1/2) ~ ||c||_1
        kbits = max(48, int(-mp.log(maxrad, 2)) - 10) if maxrad > 0 else dps * 3
        C = mp.mpf(2) ** kbits
        rows = []
        for i, (mid, _) in enumerate(angle_rows):
            row = [0] * n + [int(mp.nint(mid * C))]
            row[i] = 1
            rows.append(row)
        rows.append([0] * n + [int(mp.nint(C))])
        reduced, gs_sq = lll_reduce(rows)
        E = Fraction(int(mp.ceil(C * maxrad * 2**20)), 2**20) + Fraction(3, 2)
        lam_sq = min(Fraction(x) for x in gs_sq)
        threshold = Fraction(radius) ** 2 * (1 + E**2)
        if lam_sq > threshold:
            return DetectionOutcome(
                [],
                True,
                f"no nonzero c with ||c||_1 <= {radius} and c.u in Z: "
                f"min Gram-Schmidt norm^2 {float(lam_sq):.4e} exceeds "
                f"{float(threshold):.4e} at scale C = 2^{kbits}, "
                f"angle radius {mp.nstr(maxrad, 5)}",
            )
        cands = []
        for row in reduced:
            c = row[:n]
            if not any(c):
                continue
            resid = abs(row[n])
            if resid <= (sum(abs(x) for x in c) + 1) * E:
                cands.append(c)
        return DetectionOutcome(cands, False, "candidates detected")


# ---------------------------------------------------------------------------
# the certified relation group


@dataclass
class RelationGroup:
    """Certified lattice {e in Z^g : beta^e is a root of unity}."""

    g: int
    basis: list  # HNF rows, saturated
    orders: list  # root-of-unity order per basis row
    weights: list  # 1-norms
    rank: int
    delta: int  # g - rank
    H_theorem: RootBound
    H_lemma: RootBound
    H_exclusion: int
    d_denominator: int
    Nstar: int
    exclusion_certificate: str
    certified: bool

    def basis_hnf(self):
        return [list(r) for r in self.basis]


class RelationCertifier:
    """Exact root-of-unity certification for beta exponent vectors.

    Uses the splitting field when available, else the resultant fallback
    (also exact).  If the fallback's degree cap is exceeded the certifier
    degrades: candidates are then accepted on numeric evidence only and the
    whole result is flagged uncertified.
    """

    CAP = "cap-exceeded"

    def __init__(self, F: SplittingField | None, P: WeilPolynomial, cap: int = 4096):
        self.F = F
        self.P = P
        self.cap = cap
        self.degraded = False

    def order_of(self, e):
        if self.F is not None:
            t = beta_power_product(self.F, list(e))
            return is_root_of_unity(self.F, t)
        try:
            return _fallback_order(self.P, list(e), self.cap)
        except RuntimeError:
            self.degraded = True
            return self.CAP


def compute_relation_group(
    P: WeilPolynomial,
    F: SplittingField | None,
    slope_denominator_lcm: int,
    start_dps: int = 80,
    max_dps: int = 200_000,
) -> RelationGroup:
    """The full detect-certify-exclude loop with quotient recursion."""
    g = P.g_eff if P.e > 1 else P.g
    degree_bound = F.degree if F is not None else 2**g * math.factorial(g)
    Nstar = unity_order_lcm(degree_bound)
    d_used = int(math.lcm(2 * g, slope_denominator_lcm))
    lemma_excl, _ = bounds(N=g, r=g, d=d_used, maxA=1, g=g, delta=g)
    H_excl = lemma_excl.ceil()
    certifier = RelationCertifier(F, P)

    certified_rows: list[list[int]] = []
    dps = max(start_dps, (F.dps if F is not None else start_dps))
    angles = angles_from_field(F) if F is not None else frobenius_angles(P, dps)
    certificate = ""

    while True:
        lattice = saturate_rows(certified_rows) if certified_rows else []
        rank = len(lattice)
        if rank == g:
            certificate = "relation lattice has full rank; nothing to exclude"
            break
        comp_rows, row_norm = _complement_rows(lattice, g)
        # quotient angle enclosures: u_i = N* (w_i . t)
        radius = H_excl * row_norm
        outcome = None
        local_dps = angles.dps
        # enough sharpness that exclusion is achievable at this radius:
        # the scale C must beat (radius * E)^(n+1)
        needed_bits = (len(comp_rows) + 1) * (radius.bit_length() + 4) + 80
        needed_bits += Nstar.bit_length() + 8
        if angles.error > mp.mpf(2) ** (-needed_bits):
            local_dps = max(local_dps, int(needed_bits / 3.2) + 30)
            angles = _sharpen_angles(P, F, local_dps)
        for _ in range(14):
            with mp.workdps(local_dps):
                urows = _combined_angles(comp_rows, angles, Nstar)
            outcome = relation_lattice(urows, radius, local_dps)
            if outcome.excluded:
                break
            new_relation = None
            for c in outcome.candidates:
                e0 = _apply_rows(c, comp_rows)
                order = certifier.order_of(e0)
                if order is RelationCertifier.CAP:
                    # degraded mode: accept on numeric evidence at a sharper
                    # precision; the result is flagged uncertified
                    angles2 = _sharpen_angles(P, F, local_dps * 4)
                    with mp.workdps(local_dps * 4):
                        u = _combined_angles([e0], angles2, Nstar)[0]
                        dist = abs(u[0] - mp.nint(u[0]))
                        if dist < mp.mpf(2) ** (-mp.mp.prec // 2):
                            new_relation = e0
                            break
                elif order is not None:
                    new_relation = e0
                    break
            if new_relation is not None:
                certified_rows.append(new_relation)
                break
            # all candidates refuted: sharpen and retry
            local_dps *= 2
            if local_dps > max_dps:
                raise RuntimeError("relation detection did not converge")
            angles = _sharpen_angles(P, F, local_dps)
        else:
            raise RuntimeError("relation detection did not converge")
        if outcome.excluded:
            certificate = outcome.certificate + (
                f"; quotient radius {radius} covers generator weight bound {H_excl}"
            )
            break

    lattice = saturate_rows(certified_rows) if certified_rows else []
    basis = hnf(lattice) if lattice else []
    orders = []
    for row in basis:
        order = certifier.order_of(row)
        if order is RelationCertifier.CAP:
            orders.append(None)
        elif order is None:
            raise RuntimeError(
                "saturated basis row failed certification: implementation bug"
            )
        else:
            orders.append(order)
    weights = [sum(abs(x) for x in row) for row in basis]
    rank = len(basis)
    delta = g - rank
    H_lemma, H_theorem = bounds(N=g, r=delta, d=d_used, maxA=1, g=g, delta=delta)
    for w in weights:
        # delta = 0 means a zero matrix: the kernel is all of Z^g and the
        # bound formula degenerates; unit vectors are the minimal generators
        assert H_lemma.ge_rational(w) or (delta == 0 and w == 1), (
            "basis weight exceeds the lemma bound"
        )
    return RelationGroup(
        g=g,
        basis=basis,
        orders=orders,
        weights=weights,
        rank=rank,
        delta=delta,
        H_theorem=H_theorem,
        H_lemma=H_lemma,
        H_exclusion=H_excl,
        d_denominator=d_used,
        Nstar=Nstar,
        exclusion_certificate=certificate,
        certified=not certifier.degraded,
    )


def _sharpen_angles(P, F, dps) -> CertifiedAngles:
    return frobenius_angles(P, dps)


def _complement_rows(lattice_hnf, g: int):
    """Rows completing the saturated lattice to a unimodular basis of Z^g,
    plus a bound on how 1-norms transform into the quotient coordinates.

    Uses the SNF of the lattice rows: for a saturated lattice the first r
    rows of Q span it, so the remaining rows of Q complete it, and the
    quotient coordinates of e are the last g - r entries of e Q^{-1}.
    """
    if not lattice_hnf:
        rows = [[1 if i == j else 0 for j in range(g)] for i in range(g)]
        return rows, 1
    snf = int_linalg.smith_normal_form(lattice_hnf)
    r = snf.rank
    assert all(snf.S[i][i] == 1 for i in range(r)), "lattice must be saturated"
    comp = [snf.Q[i] for i in range(r, g)]
    # quotient coordinate map: columns r..g-1 of Q^{-1}
    qinv_cols = [[snf.Qinv[i][j] for i in range(g)] for j in range(r, g)]
    norm = max(
        (sum(abs(x) for x in col) for col in qinv_cols), default=1
    )
    return comp, max(1, int(norm))


def _combined_angles(rows, angles: CertifiedAngles, Nstar: int):
    """Enclosures of N* (w . t) for each row w, with t_j = 2 theta_j."""
    out = []
    for w in rows:
        mid = mp.mpf(0)
        rad = mp.mpf(0)
        for wj, (tm, tr) in zip(w, angles.theta):
            mid += 2 * wj * tm
            rad += 2 * abs(wj) * tr
        out.append((mid * Nstar, rad * Nstar * (1 + mp.mpf(2) ** (-mp.mp.prec + 8))))
    return out


def _apply_rows(c, rows) -> list[int]:
    g = len(rows[0])
    out = [0] * g
    for ci, row in zip(c, rows):
        for j in range(g):
            out[j] += ci * row[j]
    return out


def V_from_relations(R: RelationGroup) -> list[list[Fraction]]:
    """Rational basis of the orthogonal complement of the relation lattice."""
    if not R.basis:
        return [
            [Fraction(1) if i == j else Fraction(0) for j in range(R.g)]
            for i in range(R.g)
        ]
    return int_linalg.orthogonal_complement(R.basis)


# ---------------------------------------------------------------------------
# fallback certification without a splitting field (degree cap exceeded)


def _fallback_order(P: WeilPolynomial, e, cap: int = 4096) -> int | None:
    """Exact order of beta^e via resultant minimal polynomials.

    beta^e = gamma / q^s with gamma an algebraic-integer product of root
    powers of h.  The minimal polynomial of gamma is built by iterated
    resultant composition (factor selection certified by ball enclosures);
    beta^e is a root of unity iff its monic minimal polynomial equals a
    cyclotomic polynomial, matched exactly.
    """
    if all(x == 0 for x in e):
        return 1
    for dps in (140, 300, 700, 1600):
        try:
            return _fallback_order_at(P, e, cap, dps)
        except _FactorAmbiguous:
            continue
    raise RuntimeError("fallback certification did not stabilise")


class _FactorAmbiguous(Exception):
    pass


def _fallback_order_at(P: WeilPolynomial, e, cap: int, dps: int) -> int | None:
    x, z = sympy.symbols("x z")
    g = (len(P.h) - 1) // 2
    with mp.workdps(dps):
        balls = isolate_roots(list(P.h), dps)
        order = _pair_roots(balls, P.q)
        if order is None:
            raise _FactorAmbiguous()
        alpha = [balls[i] for i in order]

        current = None  # minpoly of the running product gamma
        value = Ball.exact(1)
        s = 0
        for j, ej in enumerate(e):
            if ej == 0:
                continue
            idx = j if ej > 0 else j + g
            power = 2 * abs(ej)
            s += abs(ej)
            h = sympy.Poly(list(reversed(P.h)), z)
            res = sympy.Poly(sympy.resultant(h.as_expr(), x - z**power, z), x)
            pval = Ball.exact(1)
            for _ in range(power):
                pval = pval * alpha[idx]
            fac = _factor_containing(res, pval)
            if current is None:
                current, value = fac, pval
            else:
                d2 = fac.degree()
                cz = sympy.Poly(current.as_expr().subs(current.gens[0], z), z)
                other_hom = sympy.expand(
                    z**d2 * fac.as_expr().subs(fac.gens[0], x / z)
                )
                res2 = sympy.Poly(sympy.resultant(cz.as_expr(), other_hom, z), x)
                if res2.degree() > cap:
                    raise RuntimeError("fallback resultant degree cap exceeded")
                value = value * pval
                current = _factor_containing(res2, value)

        # beta^e = gamma / q^s: substitute x -> q^s x and normalise monic
        qs = P.q**s
        coeffs = [int(c) for c in current.all_coeffs()]  # descending, monic
        deg = len(coeffs) - 1
        scaled = [
            Fraction(coeffs[i] * qs ** (deg - i), qs**deg) for i in range(len(coeffs))
        ]
        lead = scaled[0]
        scaled = [c / lead for c in scaled]
        for n in range(1, 2 * (deg + 1) ** 2 + 1):
            if sympy.totient(n) == deg:
                cyc = [
                    Fraction(int(c))
                    for c in sympy.Poly(
                        sympy.cyclotomic_poly(n, x), x
                    ).all_coeffs()
                ]
                if len(cyc) == len(scaled) and cyc == scaled:
                    return int(n)
        return None


def _factor_containing(poly, value: Ball):
    """The irreducible factor of poly whose enclosure contains the value;
    certified: every other factor must exclude zero at the value."""
    from .balls import eval_poly

    hit = None
    for fac, _ in poly.factor_list()[1]:
        coeffs = [int(c) for c in reversed(fac.all_coeffs())]
        v = eval_poly(coeffs, value)
        if v.contains_zero():
            if hit is not None:
                raise _FactorAmbiguous()
            hit = fac
    if hit is None:
        raise _FactorAmbiguous()
    return sympy.Poly(hit, poly.gens[0])
