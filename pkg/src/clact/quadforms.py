"""Imaginary quadratic orders, proper ideals, binary quadratic forms, class groups.

An order O of discriminant D < 0 is Z + Z*w where w has trace s = D mod 2 and
norm n = (s - D)/4.  Elements are pairs (x, y) meaning x + y*w.  Integral
ideals are kept in the normal form  Z*a + Z*(b + c*w)  with c | a, c | b and
0 <= b < a; the norm is a*c.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .ntheory import divisors, factorize, is_prime, kronecker, sqrt_mod, xgcd


class DomainError(ValueError):
    """Input outside the supported mathematical domain."""


Elem = tuple[int, int]


def _is_fundamental(d: int) -> bool:
    if d >= 0:
        return False
    if d % 4 == 1:
        return all(e == 1 for e in factorize(d).values())
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and all(e == 1 for e in factorize(m).values())
    return False


@dataclass(frozen=True)
class QuadOrder:
    """Order of discriminant disc = cond^2 * fund_disc in Q(sqrt(disc))."""

    disc: int
    cond: int
    fund_disc: int

    @property
    def omega_trace(self) -> int:
        return self.disc & 1

    @property
    def omega_norm(self) -> int:
        return (self.omega_trace - self.disc) // 4

    # -- element arithmetic on pairs (x, y) = x + y*w --
    def mul(self, p: Elem, q: Elem) -> Elem:
        s, n = self.omega_trace, self.omega_norm
        x1, y1 = p
        x2, y2 = q
        return (x1 * x2 - y1 * y2 * n, x1 * y2 + x2 * y1 + y1 * y2 * s)

    def conj(self, p: Elem) -> Elem:
        x, y = p
        return (x + y * self.omega_trace, -y)

    def norm(self, p: Elem) -> int:
        x, y = p
        return x * x + x * y * self.omega_trace + y * y * self.omega_norm

    def trace(self, p: Elem) -> int:
        return 2 * p[0] + p[1] * self.omega_trace

    def units(self) -> list[Elem]:
        if self.disc == -4:
            return [(1, 0), (-1, 0), (0, 1), (0, -1)]
        if self.disc == -3:
            return [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)]
        return [(1, 0), (-1, 0)]


def order_from_disc(D: int) -> QuadOrder:
    """Order of discriminant D, with the conductor factored out of D."""
    if D >= 0 or D % 4 not in (0, 1):
        raise DomainError(f"not an imaginary quadratic discriminant: {D}")
    f = 1
    for g in range(math.isqrt(abs(D)), 0, -1):
        if D % (g * g) == 0 and _is_fundamental(D // (g * g)):
            f = g
            break
    return QuadOrder(disc=D, cond=f, fund_disc=D // (f * f))


def _hnf_from_vectors(vecs: list[Elem]) -> tuple[int, int, int]:
    """Hermite form (a, b, c) of the lattice spanned by vectors x + y*w."""
    c, bx = 0, 0
    for x, y in vecs:
        if y == 0:
            continue
        g, u, v = xgcd(c, y)
        bx = u * bx + v * x
        c = g
    xs = []
    for x, y in vecs:
        if c:
            x = x - (y // c) * bx
        elif y:
            raise DomainError("degenerate lattice")
        if x:
            xs.append(abs(x))
    a = 0
    for x in xs:
        a = math.gcd(a, x)
    if a == 0 or c == 0:
        raise DomainError("vectors do not span a rank-2 lattice")
    return a, bx % a, c


@dataclass(frozen=True)
class QuadIdeal:
    """Integral ideal Z*a + Z*(b + c*w) of an imaginary quadratic order."""

    order: QuadOrder
    a: int
    b: int
    c: int

    def __post_init__(self):
        a, b, c = self.a, self.b, self.c
        if a <= 0 or c <= 0 or not (0 <= b < a) or a % c or b % c:
            raise DomainError(f"not in normal form: ({a}, {b}, {c})")
        s, n = self.order.omega_trace, self.order.omega_norm
        if (b * b + b * c * s + c * c * n) % (a * c):
            raise DomainError(f"lattice ({a}, {b}, {c}) is not w-stable")

    @classmethod
    def from_generators(cls, order: QuadOrder, gens: list[Elem],
                        close: bool = True) -> "QuadIdeal":
        vecs = list(gens)
        if close:
            vecs += [order.mul(g, (0, 1)) for g in gens]
        a, b, c = _hnf_from_vectors(vecs)
        return cls(order, a, b, c)

    @classmethod
    def unit_ideal(cls, order: QuadOrder) -> "QuadIdeal":
        return cls(order, 1, 0, 1)

    @classmethod
    def principal(cls, order: QuadOrder, alpha: Elem) -> "QuadIdeal":
        return cls.from_generators(order, [alpha])

    def norm(self) -> int:
        return self.a * self.c

    def basis(self) -> tuple[Elem, Elem]:
        return (self.a, 0), (self.b, self.c)

    def contains(self, p: Elem) -> bool:
        x, y = p
        if y % self.c:
            return False
        return (x - (y // self.c) * self.b) % self.a == 0

    def conj(self) -> "QuadIdeal":
        s = self.order.omega_trace
        return QuadIdeal.from_generators(
            self.order, [(self.a, 0), (self.b + self.c * s, -self.c)], close=False)

    def mul(self, other: "QuadIdeal") -> "QuadIdeal":
        assert self.order == other.order
        g1, g2 = self.basis()
        h1, h2 = other.basis()
        m = self.order.mul
        prods = [m(g1, h1), m(g1, h2), m(g2, h1), m(g2, h2)]
        return QuadIdeal.from_generators(self.order, prods, close=False)

    def primitive_part(self) -> tuple["QuadIdeal", int]:
        g = math.gcd(math.gcd(self.a, self.b), self.c)
        return QuadIdeal(self.order, self.a // g, self.b // g, self.c // g), g

    def form(self) -> tuple[int, int, int]:
        """Primitive binary quadratic form attached to this ideal."""
        prim, _ = self.primitive_part()
        s, n = self.order.omega_trace, self.order.omega_norm
        a, b = prim.a, prim.b
        return (a, 2 * b + s, (b * b + b * s + n) // a)

    def is_proper(self) -> bool:
        a, b, c = self.form()
        return math.gcd(math.gcd(a, abs(b)), c) == 1

    def to_json(self) -> dict:
        return {"disc": self.order.disc, "a": self.a, "b": self.b, "c": self.c}

    @classmethod
    def from_json(cls, obj: dict) -> "QuadIdeal":
        return cls(order_from_disc(obj["disc"]), obj["a"], obj["b"], obj["c"])


@dataclass(frozen=True)
class FracIdeal:
    """Fractional ideal num/den, gcd-normalized."""

    num: QuadIdeal
    den: int

    @classmethod
    def make(cls, num: QuadIdeal, den: int) -> "FracIdeal":
        g = math.gcd(math.gcd(math.gcd(num.a, num.b), num.c), den)
        if g > 1:
            num = QuadIdeal(num.order, num.a // g, num.b // g, num.c // g)
            den //= g
        return cls(num, den)


def reduce_form(f: tuple[int, int, int]) -> tuple[int, int, int]:
    """Reduce a positive definite form: |b| <= a <= c, b >= 0 if |b|=a or a=c."""
    a, b, c = f
    while True:
        if -a < b <= a <= c and not (b < 0 and (b == -a or a == c)):
            if a == c and b < 0:
                b = -b
            return (a, b, c)
        if a > c or (a == c and b < 0):
            a, b, c = c, -b, a
            continue
        # normalize b into (-a, a]
        r = (a - b) // (2 * a)
        b2 = b + 2 * r * a
        c = a * r * r + b * r + c
        b = b2


def reduced_forms(D: int) -> list[tuple[int, int, int]]:
    """All reduced primitive positive definite forms of discriminant D."""
    out = []
    for a in range(1, math.isqrt(abs(D) // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (b < 0 and a == c):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) == 1:
                out.append((a, b, c))
    return sorted(out)


def ideal_of_form(order: QuadOrder, f: tuple[int, int, int]) -> QuadIdeal:
    a, b, _ = f
    s = order.omega_trace
    return QuadIdeal(order, a, ((b - s) // 2) % a, 1)


@dataclass(frozen=True)
class IdealClass:
    """Ideal class labelled by its reduced form, with a chosen ideal rep."""

    order: QuadOrder
    form: tuple[int, int, int]
    rep: QuadIdeal

    def __eq__(self, other):
        return isinstance(other, IdealClass) and \
            self.order.disc == other.order.disc and self.form == other.form

    def __hash__(self):
        return hash((self.order.disc, self.form))


def ideals_of_norm(order: QuadOrder, N: int, proper_only: bool = True):
    """Yield all integral ideals of norm N (proper ones only by default)."""
    s, n = order.omega_trace, order.omega_norm
    for c in divisors(N):
        if N % (c * c):
            continue
        a = N // c
        for b0 in range(a // c):
            b = b0 * c
            if (b * b + b * c * s + c * c * n) % (a * c):
                continue
            ideal = QuadIdeal(order, a, b, c)
            if proper_only and not ideal.is_proper():
                continue
            yield ideal


def proper_ideals_by_norm(order: QuadOrder, bound: int):
    """Yield proper integral ideals ordered by increasing norm, from norm 1."""
    for N in range(1, bound + 1):
        yield from ideals_of_norm(order, N, proper_only=True)


def class_label(x: QuadIdeal) -> tuple[int, int, int]:
    return reduce_form(x.form())


@lru_cache(maxsize=None)
def _class_group_cached(disc: int, coprime_to: int) -> tuple:
    order = order_from_disc(disc)
    wanted = {f: None for f in reduced_forms(disc)}
    missing = len(wanted)
    for f in list(wanted):
        cand = ideal_of_form(order, f)
        if math.gcd(cand.norm(), coprime_to) == 1:
            wanted[f] = cand
            missing -= 1
    N = 1
    while missing:
        N += 1
        if math.gcd(N, coprime_to) != 1:
            continue
        for ideal in ideals_of_norm(order, N):
            lbl = class_label(ideal)
            if wanted.get(lbl) is None:
                wanted[lbl] = ideal
                missing -= 1
                if not missing:
                    break
        if N > 100 * abs(disc) * max(coprime_to, 1):
            raise DomainError("could not find coprime class representatives")
    return tuple(IdealClass(order, f, rep) for f, rep in sorted(wanted.items()))


def class_group(order: QuadOrder, coprime_to: int = 1) -> list[IdealClass]:
    """All h(D) ideal classes, reps of norm coprime to the given integer."""
    return list(_class_group_cached(order.disc, coprime_to))


def class_of(x: QuadIdeal) -> IdealClass:
    return IdealClass(x.order, class_label(x), x)


def is_principal_with_generator(x: QuadIdeal) -> Elem | None:
    """Generator alpha with alpha*O = x, or None; bounded norm-equation scan."""
    order = x.order
    N = x.norm()
    D = order.disc
    s = order.omega_trace
    vmax = math.isqrt(4 * N // abs(D))
    for v in range(vmax + 1):
        d2 = 4 * N + D * v * v
        r = math.isqrt(d2)
        if r * r != d2:
            continue
        for rr in ((r,) if r == 0 else (r, -r)):
            if (rr - s * v) % 2:
                continue
            u = (rr - s * v) // 2
            if order.norm((u, v)) != N:
                continue
            if QuadIdeal.principal(order, (u, v)) == x:
                return (u, v)
    return None


def splitting_type(order: QuadOrder, ell: int):
    """Behaviour of the rational prime ell: ('split', p, pbar) | ('inert', ellO)
    | ('ramified', p).  Requires ell prime and coprime to the conductor."""
    if not is_prime(ell):
        raise DomainError(f"{ell} is not prime")
    if order.cond % ell == 0:
        raise DomainError(f"{ell} divides the conductor")
    D = order.disc
    s, n = order.omega_trace, order.omega_norm
    k = kronecker(D, ell)
    if k == -1:
        return ("inert", QuadIdeal.principal(order, (ell, 0)), None)
    # root of x^2 + s*x + n mod ell
    if ell == 2:
        b0 = next(b for b in (0, 1) if (b * b + s * b + n) % 2 == 0)
    else:
        r = sqrt_mod(D % ell, ell)
        assert r is not None
        b0 = ((r - s) * pow(2, -1, ell)) % ell
    p = QuadIdeal(order, ell, b0 % ell, 1)
    if k == 1:
        return ("split", p, p.conj())
    return ("ramified", p, None)


def random_proper_ideal(order: QuadOrder, rng, norm_bound: int = 60,
                        coprime_to: int = 1) -> QuadIdeal:
    pool = [x for x in proper_ideals_by_norm(order, norm_bound)
            if math.gcd(x.norm(), coprime_to) == 1]
    return rng.choice(pool)
