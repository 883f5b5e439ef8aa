"""Weil pairing via Miller's algorithm, and smooth discrete logarithms."""

from __future__ import annotations

import math
import random

from ..ntheory import factorize
from .curve import Curve, CurveError, Point
from .field import Elt


class _BadOffset(ArithmeticError):
    """Auxiliary point hit a zero or pole of the Miller function."""


def _line(E: Curve, F, P1: Point, P2: Point, X: Point) -> Elt:
    """Evaluate at X the line through P1, P2 (tangent if equal), normalized
    as in the usual Miller loop; vertical lines give x_X - x."""
    x0, y0, _ = X
    if P1 is None or P2 is None:
        T = P1 if P2 is None else P2
        if T is None:
            return F.one
        return F.sub(x0, T[0])
    x1, y1, _ = P1
    x2, y2, _ = P2
    if x1 == x2:
        if F.add(y1, y2) == F.zero:
            return F.sub(x0, x1)  # vertical
        num = F.add(F.smul(3, F.mul(x1, x1)), F.from_int(E.A))
        lam = F.div(num, F.smul(2, y1))
    else:
        lam = F.div(F.sub(y2, y1), F.sub(x2, x1))
    return F.sub(F.sub(y0, y1), F.mul(lam, F.sub(x0, x1)))


def _miller(E: Curve, P: Point, N: int, X: Point) -> Elt:
    """f_{N,P}(X) by double-and-add; raises _BadOffset on zeros/poles."""
    k = X[2]
    F = E.field(k)
    P = E.lift(P, k)
    T = P
    f = F.one
    for bit in bin(N)[3:]:
        num = _line(E, F, T, T, X)
        T2 = E.add(T, T)
        den = _line(E, F, T2, E.neg(T2) if T2 else None, X) if T2 else F.one
        if F.is_zero(num) or F.is_zero(den):
            raise _BadOffset
        f = F.div(F.mul(F.mul(f, f), num), den)
        T = T2
        if bit == "1":
            num = _line(E, F, T, P, X)
            T2 = E.add(T, P)
            den = _line(E, F, T2, E.neg(T2) if T2 else None, X) if T2 else F.one
            if F.is_zero(num) or F.is_zero(den):
                raise _BadOffset
            f = F.div(F.mul(f, num), den)
            T = T2
    return f


def weil_pairing(E: Curve, P: Point, Q: Point, N: int) -> Elt:
    """e_N(P, Q); both points must be killed by N."""
    if E.mul(N, P) is not None or E.mul(N, Q) is not None:
        raise CurveError("points are not N-torsion")
    kp = P[2] if P else 1
    kq = Q[2] if Q else 1
    k = kp * kq // math.gcd(kp, kq)
    F = E.field(k)
    if P is None or Q is None:
        return F.one
    P, Q = E.lift(P, k), E.lift(Q, k)
    if P == Q or E.neg(P) == Q:
        return F.one
    rng = random.Random((E.q, E.A, E.B, N, k, 0xA5).__hash__())
    for _ in range(64):
        S = E.random_point(k, rng)
        try:
            if S is None or S in (P, E.neg(Q)):
                continue
            a = F.div(_miller(E, P, N, E.add(Q, S)), _miller(E, P, N, S))
            b = F.div(_miller(E, Q, N, E.sub_pts(P, S)),
                      _miller(E, Q, N, E.neg(S)))
            z = F.div(a, b)
            assert F.pow(z, N) == F.one
            return z
        except (_BadOffset, ZeroDivisionError):
            continue
    raise CurveError("could not find a good auxiliary point for the pairing")


def mult_dlog(F, h: Elt, g: Elt, order: int) -> int:
    """x with g^x = h in the subgroup of F^x of the given (smooth) order,
    by Pohlig-Hellman on top of baby-step giant-step."""
    assert F.pow(g, order) == F.one
    res, mod = 0, 1
    for p, e in factorize(order).items():
        pe = p**e
        gp = F.pow(g, order // pe)
        hp = F.pow(h, order // pe)
        xp = 0
        gamma = F.pow(gp, p**(e - 1))  # order p
        for i in range(e):
            target = F.pow(F.mul(hp, F.inv(F.pow(gp, xp))), p**(e - 1 - i))
            d = _bsgs(F, target, gamma, p)
            xp += d * p**i
        # CRT accumulate
        g_, u, v = _xgcd(mod, pe)
        assert g_ == 1
        res = (res * v * pe + xp * u * mod) % (mod * pe)
        mod *= pe
    return res


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        qq, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - qq * x1
        y0, y1 = y1, y0 - qq * y1
    return a, x0, y0


def _bsgs(F, h: Elt, g: Elt, n: int) -> int:
    """x < n with g^x = h, g of order dividing n (n small)."""
    m = 1
    while m * m < n:
        m += 1
    table = {}
    cur = F.one
    for j in range(m):
        table.setdefault(cur, j)
        cur = F.mul(cur, g)
    step = F.inv(F.pow(g, m))
    cur = h
    for i in range(m + 1):
        if cur in table:
            return (i * m + table[cur]) % n
        cur = F.mul(cur, step)
    raise CurveError("dlog target outside the cyclic subgroup")


def point_dlog(E: Curve, R: Point, P: Point, n: int) -> int:
    """x with R = x*P for P of order n, baby-step giant-step on points."""
    m = 1
    while m * m < n:
        m += 1
    table = {}
    cur: Point = None
    for j in range(m):
        key = E.project_min(cur)
        table.setdefault(key, j)
        cur = E.add(cur, P)
    step = E.neg(E.mul(m, P))
    cur = R
    for i in range(m + 1):
        key = E.project_min(cur)
        if key in table:
            return (i * m + table[key]) % n
        cur = E.add(cur, step)
    raise CurveError("point not in the cyclic group")


def dlog_2d(E: Curve, R: Point, P: Point, Q: Point, N: int) -> tuple[int, int]:
    """(x, y) with R = xP + yQ for a pairing-verified basis (P, Q) of E[N],
    via two pairing projections followed by Pohlig-Hellman."""
    if N == 1 or R is None:
        return (0, 0)
    if E.mul(N, R) is not None:
        raise CurveError("point outside E[N]")
    k = _lvl(_lvl(P[2], Q[2]), R[2])
    F = E.field(k)
    Pk, Qk, Rk = E.lift(P, k), E.lift(Q, k), E.lift(R, k)
    zeta = weil_pairing(E, Pk, Qk, N)
    assert F.elem_order(zeta, N) == N, "basis pairing must have exact order N"
    x = mult_dlog(F, weil_pairing(E, Rk, Qk, N), zeta, N)
    y = mult_dlog(F, weil_pairing(E, Pk, Rk, N), zeta, N)
    got = E.add(E.mul(x, Pk), E.mul(y, Qk))
    assert E.project_min(got) == E.project_min(R)
    return (x, y)


def _lvl(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)
