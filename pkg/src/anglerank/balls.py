"""Certified complex ball arithmetic on top of mpmath.

A Ball is a midpoint-radius enclosure (mid, rad) for one complex number.
Arithmetic propagates radii with a generous rounding cushion so enclosures
stay valid enclosures; this is what makes "round to the nearby integer"
steps in the exact pipeline rigorous rather than heuristic.

Root enclosures come from mpmath's polishing plus an a posteriori Rouche
certificate against the linearisation at the approximate root, so each
returned disk provably contains exactly one root.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp

# multiplicative cushion covering mpmath's correctly-rounded op error
_FUDGE = None


def _fudge():
    global _FUDGE
    return mp.mpf(1) + mp.mpf(2) ** (-mp.mp.prec + 6)


def _eps_of(x: mp.mpc) -> mp.mpf:
    m = abs(x)
    return m * mp.mpf(2) ** (-mp.mp.prec + 4)


@dataclass(frozen=True)
class Ball:
    mid: mp.mpc
    rad: mp.mpf

    @staticmethod
    def exact(value) -> "Ball":
        if isinstance(value, int):
            v = mp.mpc(value)
            if value.bit_length() < mp.mp.prec - 2:
                return Ball(v, mp.mpf(0))
            return Ball(v, abs(v) * mp.mpf(2) ** (-mp.mp.prec + 2))
        v = mp.mpc(value)
        return Ball(v, _eps_of(v))

    def __add__(self, other) -> "Ball":
        if not isinstance(other, Ball):
            other = Ball.exact(other)
        mid = self.mid + other.mid
        rad = (self.rad + other.rad + _eps_of(mid)) * _fudge()
        return Ball(mid, rad)

    __radd__ = __add__

    def __neg__(self) -> "Ball":
        return Ball(-self.mid, self.rad)

    def __sub__(self, other) -> "Ball":
        if not isinstance(other, Ball):
            other = Ball.exact(other)
        return self + (-other)

    def __rsub__(self, other):
        return Ball.exact(other) + (-self)

    def __mul__(self, other) -> "Ball":
        if not isinstance(other, Ball):
            other = Ball.exact(other)
        mid = self.mid * other.mid
        rad = (
            abs(self.mid) * other.rad
            + abs(other.mid) * self.rad
            + self.rad * other.rad
            + _eps_of(mid)
        ) * _fudge()
        return Ball(mid, rad)

    __rmul__ = __mul__

    def mul_int(self, n: int) -> "Ball":
        return Ball(self.mid * n, self.rad * abs(n) * _fudge())

    def div_int(self, n: int) -> "Ball":
        return Ball(self.mid / n, (self.rad / abs(n) + _eps_of(self.mid / n)) * _fudge())

    def abs_upper(self) -> mp.mpf:
        return (abs(self.mid) + self.rad) * _fudge()

    def abs_lower(self) -> mp.mpf:
        lo = abs(self.mid) - self.rad * _fudge()
        return lo if lo > 0 else mp.mpf(0)

    def contains_zero(self) -> bool:
        return abs(self.mid) <= self.rad * _fudge()

    def separated_from(self, other: "Ball") -> bool:
        return abs(self.mid - other.mid) > (
            self.rad + other.rad + _eps_of(self.mid - other.mid)
        ) * _fudge()

    def round_to_int(self) -> int | None:
        """The unique integer in the enclosure, if the enclosure certifies one."""
        if self.rad >= mp.mpf(1) / 4:
            return None
        if abs(self.mid.imag) + self.rad >= mp.mpf(1) / 4:
            return None
        n = mp.nint(self.mid.real)
        if abs(self.mid.real - n) + self.rad >= mp.mpf(1) / 2:
            return None
        return int(n)


def ball_powmod_free(b: Ball, k: int) -> Ball:
    out = Ball.exact(1)
    base = b
    while k:
        if k & 1:
            out = out * base
        base = base * base
        k >>= 1
    return out


def eval_poly(coeffs, z: Ball) -> Ball:
    """Horner evaluation; coeffs ascending, ints or Balls."""
    acc = Ball.exact(0)
    for c in reversed(list(coeffs)):
        acc = acc * z + (c if isinstance(c, Ball) else Ball.exact(c))
    return acc


def _taylor_balls(coeffs, z0: mp.mpc) -> list[Ball]:
    """Ball enclosures of the Taylor coefficients f^(k)(z0)/k! of an integer
    polynomial at z0, via repeated synthetic division by (z - z0)."""
    zb = Ball.exact(z0)
    work = [Ball.exact(int(c)) for c in reversed(list(coeffs))]  # descending
    taylor = []
    while work:
        q = [work[0]]
        for c in work[1:]:
            q.append(c + q[-1] * zb)
        taylor.append(q.pop())
        work = q
    return taylor  # t_0, t_1, ...


def _certify_simple_root(coeffs, z0: mp.mpc) -> mp.mpf | None:
    """Radius rho such that the disk |z - z0| <= rho contains exactly one
    root of the integer polynomial, or None if certification fails.

    Rouche against the linearisation: on the circle of radius rho,
    |f'(z0)| rho - |f(z0)| must exceed sum_{k>=2} |f^(k)(z0)/k!| rho^k;
    the linear part has its single zero inside, so f does too.
    """
    n = len(coeffs) - 1
    if n < 1:
        return None
    taylor = _taylor_balls(coeffs, z0)
    f0 = taylor[0].abs_upper()
    f1 = taylor[1].abs_lower()
    if f1 <= 0:
        return None
    rho = 2 * f0 / f1 + mp.mpf(2) ** (-mp.mp.prec + 8)
    for _ in range(60):
        tail = mp.mpf(0)
        for k in range(2, len(taylor)):
            tail += taylor[k].abs_upper() * rho**k
        if f1 * rho - f0 > tail * _fudge():
            return rho
        rho *= 2
        if rho > 1e10:
            return None
    return None


def isolate_roots(coeffs, dps: int, maxsteps: int = 200) -> list[Ball]:
    """Certified enclosures of all (distinct) roots of an integer polynomial.

    The polynomial must be squarefree.  Raises RuntimeError if any root
    fails certification or two disks overlap; callers escalate precision.
    """
    n = len(coeffs) - 1
    with mp.workdps(dps):
        desc = [mp.mpf(c) for c in reversed(coeffs)]
        approx = mp.polyroots(desc, maxsteps=maxsteps, extraprec=4 * dps)
        balls = []
        for r in approx:
            rho = _certify_simple_root(coeffs, mp.mpc(r))
            if rho is None:
                raise RuntimeError("root certification failed; raise precision")
            balls.append(Ball(mp.mpc(r), mp.mpf(rho)))
        for i in range(len(balls)):
            for j in range(i + 1, len(balls)):
                if not balls[i].separated_from(balls[j]):
                    raise RuntimeError("root disks overlap; raise precision")
        return balls


def match_ball(target: Ball, candidates: list[Ball]) -> int | None:
    """Index of the unique candidate whose disk could equal target.

    Assumes target is exactly equal to one of the candidate values; returns
    None when the enclosures cannot certify uniqueness yet.
    """
    hits = [
        i for i, c in enumerate(candidates) if not target.separated_from(c)
    ]
    if len(hits) == 1:
        return hits[0]
    return None
