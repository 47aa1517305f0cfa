"""Newton polygons and slope classification at p, normalised so v(q) = 1."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .weil_poly import WeilPolynomial


@dataclass(frozen=True)
class SlopeMultiset:
    """The 2g root valuations of P at p, each in [0, 1], with v(q) = 1."""

    slopes: tuple[Fraction, ...]  # sorted ascending

    def multiplicity(self, s) -> int:
        return self.slopes.count(Fraction(s))

    def counter(self) -> Counter:
        return Counter(self.slopes)

    def __len__(self) -> int:
        return len(self.slopes)


@dataclass(frozen=True)
class NewtonClass:
    tag: str  # ordinary | almost_ordinary | supersingular | generalized_LZ | complementary | other
    witness: str


def _vp(n: int, p: int) -> int | None:
    """p-adic valuation of a nonzero integer, None for 0 (infinite)."""
    if n == 0:
        return None
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def lower_hull_slopes(points) -> list[tuple[Fraction, int]]:
    """Lower convex hull of (k, v) points; returns (slope, length) segments."""
    pts = sorted(points)
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if pt makes it non-convex (not strictly below)
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    segments = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        segments.append((Fraction(y2 - y1, x2 - x1), x2 - x1))
    return segments


def newton_slopes(P: WeilPolynomial) -> SlopeMultiset:
    """Root valuations of P at p, from the polygon, scaled so v(q) = 1."""
    pts = []
    for k, c in enumerate(P.coeffs):
        v = _vp(c, P.p)
        if v is not None:
            pts.append((k, v))
    slopes: list[Fraction] = []
    for seg_slope, length in lower_hull_slopes(pts):
        # roots on this segment have valuation -slope, then divide by v_p(q)
        val = -seg_slope / P.k
        slopes.extend([val] * length)
    slopes.sort()
    out = SlopeMultiset(slopes=tuple(slopes))
    _check_invariants(out, P.g, P.k)
    return out


def _check_invariants(S: SlopeMultiset, g: int, k: int) -> None:
    assert len(S.slopes) == 2 * g
    assert all(0 <= s <= 1 for s in S.slopes)
    assert sum(S.slopes) == g
    c = S.counter()
    assert all(c[s] == c[1 - s] for s in c), "slope symmetry s <-> 1-s"
    # denominator divides 2g: a theorem for g <= 3 over a prime field; for
    # prime-power q the v(q)=1 normalisation can introduce larger denominators
    # (realisable only as proper powers h^e), and from g = 4 on it can fail
    # outright, so it is not asserted there
    if g <= 3 and k == 1:
        assert all(2 * g % s.denominator == 0 for s in S.slopes)


def in_z2(s: Fraction) -> bool:
    """2-integrality: odd denominator in lowest terms."""
    return Fraction(s).denominator % 2 == 1


def classify_newton(S: SlopeMultiset, g: int) -> NewtonClass:
    """First matching tag in the precedence order supersingular > ordinary >
    almost_ordinary > complementary > generalized_LZ > other."""
    c = S.counter()
    half = Fraction(1, 2)
    if c.get(half, 0) == 2 * g:
        return NewtonClass("supersingular", "all slopes 1/2")
    if set(c) <= {Fraction(0), Fraction(1)}:
        return NewtonClass("ordinary", "slopes 0 and 1 only")
    if (
        c.get(Fraction(0), 0) == g - 1
        and c.get(Fraction(1), 0) == g - 1
        and c.get(half, 0) == 2
        and len(S.slopes) == 2 * g
    ):
        return NewtonClass(
            "almost_ordinary", "slopes 0, 1 with multiplicity g-1 and 1/2 twice"
        )
    if (
        c.get(Fraction(0), 0) == 1
        and c.get(Fraction(1), 0) == 1
        and c.get(half, 0) == 2 * (g - 1)
    ):
        return NewtonClass(
            "complementary", "slopes 0, 1 once each and 1/2 with multiplicity 2(g-1)"
        )
    if c.get(half, 0) == 2 and all(in_z2(s) for s in c if s != half):
        return NewtonClass(
            "generalized_LZ", "1/2 with multiplicity 2, all other slopes 2-integral"
        )
    return NewtonClass("other", "no special shape")
