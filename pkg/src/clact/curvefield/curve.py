"""Short-Weierstrass curves y^2 = x^3 + Ax + B over F_q, points over F_{q^k}.

Points are (x, y, k) with x, y coefficient tuples at field level k, or None
for the point at infinity.  Curves always have base-field coefficients;
higher-level orders come from the Frobenius trace recurrence
t_k = t * t_{k-1} - q * t_{k-2}.
"""

from __future__ import annotations

import math
import random

from ..ntheory import factorize, is_prime
from .field import Elt, FieldCtx, FieldError, embed, project


class CurveError(ArithmeticError):
    pass


class TorsionUnavailable(CurveError):
    def __init__(self, N, k, minimal):
        self.N, self.k, self.minimal = N, k, minimal
        msg = f"E[{N}] is not fully rational at level k={k}"
        if minimal:
            msg += f"; minimal sufficient level is k={minimal}"
        else:
            msg += "; no level k <= 6 suffices"
        super().__init__(msg)


Point = tuple | None

# cyclotomic polynomials needed for t_k factorizations, k <= 6
_CYCLO = {
    1: [-1, 1],
    2: [1, 1],
    3: [1, 1, 1],
    4: [1, 0, 1],
    5: [1, 1, 1, 1, 1],
    6: [1, -1, 1],
}


_ORDER_CACHE: dict[tuple, dict] = {}
_FACTOR_CACHE: dict[tuple, dict] = {}
_CANON_CACHE: dict[tuple, tuple] = {}
_INVS_CACHE: dict[tuple, dict] = {}


class Curve:
    """y^2 = x^3 + A x + B over F_q (A, B integers mod q)."""

    def __init__(self, q: int, A: int, B: int):
        if not is_prime(q) or q < 3 or q > (1 << 16):
            raise CurveError(f"unsupported base field size {q}")
        self.q = q
        self.A = A % q
        self.B = B % q
        if (4 * self.A**3 + 27 * self.B**2) % q == 0:
            raise CurveError("singular curve")
        key = (self.q, self.A, self.B)
        self._orders = _ORDER_CACHE.setdefault(key, {})
        self._factors = _FACTOR_CACHE.setdefault(key, {})
        self._invs = _INVS_CACHE.setdefault(key, {})

    def __eq__(self, other):
        return isinstance(other, Curve) and \
            (self.q, self.A, self.B) == (other.q, other.A, other.B)

    def __hash__(self):
        return hash((self.q, self.A, self.B))

    def __repr__(self):
        return f"Curve({self.q}, {self.A}, {self.B})"

    def field(self, k: int) -> FieldCtx:
        return FieldCtx.get(self.q, k)

    def j_invariant(self) -> int:
        q = self.q
        num = 6912 * pow(self.A, 3, q)
        den = (4 * pow(self.A, 3, q) + 27 * pow(self.B, 2, q)) % q
        return num * pow(den, -1, q) % q

    # -- order bookkeeping --
    def _count_base(self) -> int:
        q = self.q
        n = 1  # infinity
        for x in range(q):
            rhs = (x * x * x + self.A * x + self.B) % q
            if rhs == 0:
                n += 1
            elif pow(rhs, (q - 1) // 2, q) == 1:
                n += 2
        return n

    def trace(self, k: int = 1) -> int:
        q = self.q
        if 1 not in self._orders:
            n1 = self._count_base()
            assert abs(q + 1 - n1) <= 2 * math.isqrt(q) + 1
            self._orders[1] = n1
        t1 = q + 1 - self._orders[1]
        ts = [2, t1]  # t_0 = 2 by convention pi^0 + pibar^0
        for i in range(2, k + 1):
            ts.append(t1 * ts[i - 1] - q * ts[i - 2])
        return ts[k]

    def order(self, k: int = 1) -> int:
        if k not in self._orders:
            n = self.q**k + 1 - self.trace(k)
            assert abs(self.trace(k)) <= 2 * math.isqrt(self.q**k) + 1
            self._orders[k] = n
        return self._orders[k]

    def order_factors(self, k: int) -> dict[int, int]:
        """Factored group order, via norms of cyclotomic values of Frobenius."""
        if k in self._factors:
            return dict(self._factors[k])
        q, t = self.q, self.trace(1)
        total: dict[int, int] = {}
        prod = 1
        for d in range(1, 7):
            if k % d:
                continue
            # evaluate Phi_d(pi) in Z[pi]/(pi^2 - t pi + q) as a + b*pi
            a, b = _CYCLO[d][0], 0
            for coef in _CYCLO[d][1:]:
                # multiply (a + b pi) by pi, then add coef
                a, b = -q * b, a + t * b
                a += coef
            nd = a * a + a * b * t + b * b * q
            prod *= nd
            for p, e in factorize(nd).items():
                total[p] = total.get(p, 0) + e
        assert prod == self.order(k)
        self._factors[k] = total
        return dict(total)

    # -- point arithmetic --
    def on_curve(self, P: Point) -> bool:
        if P is None:
            return True
        x, y, k = P
        F = self.field(k)
        Ak, Bk = F.from_int(self.A), F.from_int(self.B)
        lhs = F.mul(y, y)
        rhs = F.add(F.add(F.mul(F.mul(x, x), x), F.mul(Ak, x)), Bk)
        return lhs == rhs

    def lift(self, P: Point, k2: int) -> Point:
        if P is None:
            return None
        x, y, k = P
        if k == k2:
            return P
        if k2 % k:
            raise CurveError(f"cannot lift level {k} point to level {k2}")
        src, dst = self.field(k), self.field(k2)
        return (embed(src, dst, x), embed(src, dst, y), k2)

    def project_min(self, P: Point) -> Point:
        """Rewrite P at the smallest field level containing its coordinates."""
        if P is None:
            return None
        x, y, k = P
        for d in range(1, k):
            if k % d:
                continue
            src, dst = self.field(k), self.field(d)
            xd = project(src, dst, x)
            if xd is None:
                continue
            yd = project(src, dst, y)
            if yd is not None:
                return (xd, yd, d)
        return P

    def _common(self, P: Point, Q: Point):
        kp = P[2] if P else 1
        kq = Q[2] if Q else 1
        k = kp * kq // math.gcd(kp, kq)
        if k > 6:
            raise CurveError(f"point levels {kp},{kq} exceed the tower")
        return self.lift(P, k), self.lift(Q, k), k

    def neg(self, P: Point) -> Point:
        if P is None:
            return None
        x, y, k = P
        return (x, self.field(k).neg(y), k)

    def add(self, P: Point, Q: Point) -> Point:
        if P is None:
            return Q
        if Q is None:
            return P
        P, Q, k = self._common(P, Q)
        F = self.field(k)
        x1, y1, _ = P
        x2, y2, _ = Q
        if x1 == x2:
            if F.add(y1, y2) == F.zero:
                return None
            # doubling
            num = F.add(F.smul(3, F.mul(x1, x1)), F.from_int(self.A))
            lam = F.div(num, F.smul(2, y1))
        else:
            lam = F.div(F.sub(y2, y1), F.sub(x2, x1))
        x3 = F.sub(F.sub(F.mul(lam, lam), x1), x2)
        y3 = F.sub(F.mul(lam, F.sub(x1, x3)), y1)
        return (x3, y3, k)

    def sub_pts(self, P: Point, Q: Point) -> Point:
        return self.add(P, self.neg(Q))

    def mul(self, n: int, P: Point) -> Point:
        if n < 0:
            return self.mul(-n, self.neg(P))
        R: Point = None
        while n:
            if n & 1:
                R = self.add(R, P)
            P = self.add(P, P)
            n >>= 1
        return R

    def random_point(self, k: int, rng: random.Random) -> Point:
        F = self.field(k)
        Ak, Bk = F.from_int(self.A), F.from_int(self.B)
        while True:
            x = F.rand(rng)
            rhs = F.add(F.add(F.mul(F.mul(x, x), x), F.mul(Ak, x)), Bk)
            y = F.sqrt(rhs)
            if y is not None:
                if y != F.zero and rng.getrandbits(1):
                    y = F.neg(y)
                return (x, y, k)

    def point_order(self, P: Point) -> int:
        if P is None:
            return 1
        k = P[2]
        n = self.order(k)
        for p, e in self.order_factors(k).items():
            for _ in range(e):
                if self.mul(n // p, P) is None:
                    n //= p
                else:
                    break
        return n

    def subgroup(self, gens: list[Point], limit: int = 10000) -> set:
        """Closure of the generated subgroup, as a set of points."""
        pts = {None}
        frontier = [None]
        while frontier:
            cur = frontier.pop()
            for g in gens:
                nxt = self.add(cur, g)
                key = self.project_min(nxt)
                if key not in pts:
                    if len(pts) >= limit:
                        raise CurveError("subgroup closure exceeded limit")
                    pts.add(key)
                    frontier.append(key)
        return pts

    # -- torsion --
    def group_invariants(self, k: int) -> tuple[int, int]:
        """(n1, n2) with E(F_{q^k}) = Z/n1 x Z/n2, n1 | n2.  The exponent n2
        comes from sampled point orders; an underestimate would violate the
        divisibility asserts, and positive torsion claims are re-verified
        constructively in torsion_basis."""
        if k not in self._invs:
            n = self.order(k)
            rng = random.Random((self.q, self.A, self.B, k, 0x57).__hash__())
            e = 1
            for _ in range(48):
                o = self.point_order(self.random_point(k, rng))
                e = e * o // math.gcd(e, o)
                if e == n:
                    break
            n1 = n // e
            assert e % n1 == 0 and (self.q**k - 1) % n1 == 0
            self._invs[k] = (n1, e)
        return self._invs[k]

    def torsion_level(self, N: int) -> int | None:
        """Smallest k <= 6 with E[N] fully rational over F_{q^k}."""
        for k in range(1, 7):
            if self.order(k) % (N * N):
                continue
            if (self.q**k - 1) % N or (self.trace(k) - 2) % N:
                continue
            if self.group_invariants(k)[0] % N == 0:
                return k
        return None

    def torsion_basis(self, N: int, k: int | None = None,
                      rng: random.Random | None = None) -> tuple[Point, Point, int]:
        """Basis (P, Q) of E[N] with Weil pairing of exact order N."""
        from .pairing import weil_pairing

        if N == 1:
            return None, None, k or 1
        lvl = self.torsion_level(N)
        if k is None:
            k = lvl
        if k is None or lvl is None or k < lvl:
            raise TorsionUnavailable(N, k or 1, lvl)
        if rng is None:
            rng = random.Random((self.q, self.A, self.B, N, k).__hash__())
        n = self.order(k)
        fac = factorize(N)

        def part_point(p, e):
            v = self.order_factors(k).get(p, 0)
            cof = n // p**v
            for _ in range(400):
                S = self.mul(cof, self.random_point(k, rng))
                if S is None:
                    continue
                j = 0
                T = S
                while T is not None:
                    T = self.mul(p, T)
                    j += 1
                if j < e:
                    continue
                return self.mul(p**(j - e), S)
            raise CurveError(f"could not sample a point of order {p}^{e}")

        def full_point():
            parts = [part_point(p, e) for p, e in fac.items()]
            R: Point = None
            for Pp in parts:
                R = self.add(R, Pp)
            return R

        F = self.field(k)
        P = full_point()
        for _ in range(400):
            Q = full_point()
            z = weil_pairing(self, P, Q, N)
            if F.elem_order(z, N) == N:
                return self.project_min(P), self.project_min(Q), k
        raise CurveError(f"basis sampling for E[{N}] at level {k} failed")

    # -- models and isomorphisms over F_q --
    def canonical_model(self) -> tuple["Curve", int]:
        """The minimal (A', B') in the F_q-isomorphism class and a u mapping
        this curve onto it via (x, y) -> (u^2 x, u^3 y)."""
        key = (self.q, self.A, self.B)
        if key not in _CANON_CACHE:
            q = self.q
            best = (self.A, self.B, 1)
            for u in range(1, q):
                cand = (pow(u, 4, q) * self.A % q, pow(u, 6, q) * self.B % q)
                if cand < best[:2]:
                    best = (cand[0], cand[1], u)
            _CANON_CACHE[key] = best
        A2, B2, u = _CANON_CACHE[key]
        return Curve(self.q, A2, B2), u

    def isomorphisms_to(self, other: "Curve") -> list[int]:
        """All u in F_q^x with (u^4 A, u^6 B) = (A', B')."""
        q = self.q
        return [u for u in range(1, q)
                if (pow(u, 4, q) * self.A - other.A) % q == 0
                and (pow(u, 6, q) * self.B - other.B) % q == 0]

    def apply_iso(self, u: int, P: Point) -> Point:
        """Image of P under (x, y) -> (u^2 x, u^3 y)."""
        if P is None:
            return None
        x, y, k = P
        F = self.field(k)
        return (F.smul(pow(u, 2, self.q), x), F.smul(pow(u, 3, self.q), y), k)

    def to_json(self) -> dict:
        return {"q": self.q, "A": self.A, "B": self.B}


def curve_order(E: Curve, k: int) -> int:
    return E.order(k)


def torsion_basis(E: Curve, N: int, k: int | None = None,
                  rng: random.Random | None = None):
    return E.torsion_basis(N, k, rng)


def curve_from_j(q: int, j: int) -> Curve:
    j %= q
    if j == 0:
        return Curve(q, 0, 1)
    if j == 1728 % q:
        return Curve(q, 1, 0)
    k = j * pow((1728 - j) % q, -1, q) % q
    return Curve(q, 3 * k % q, 2 * k % q)


def _least_nonresidue(q: int) -> int:
    for c in range(2, q):
        if pow(c, (q - 1) // 2, q) == q - 1:
            return c
    raise CurveError("no quadratic non-residue found")


def _twist_classes(q: int, j: int) -> list[Curve]:
    """All F_q-isomorphism classes with the given j-invariant."""
    c = _least_nonresidue(q)
    if j % q == 0:
        cands = [Curve(q, 0, pow(c, i, q)) for i in range(6)]
    elif j % q == 1728 % q:
        cands = [Curve(q, pow(c, i, q), 0) for i in range(4)]
    else:
        E = curve_from_j(q, j)
        cands = [E, Curve(q, c * c * E.A, c**3 * E.B)]
    out = {}
    for E in cands:
        key = E.canonical_model()[0]
        out[(key.A, key.B)] = key
    return [out[k] for k in sorted(out)]


def has_cyclic_group(E: Curve) -> bool:
    """E(F_q) is cyclic iff the 2-torsion is not full (here #E = q+1 even)."""
    q = E.q
    roots = [x for x in range(q)
             if (x * x * x + E.A * x + E.B) % q == 0]
    return len(roots) == 1


def supersingular_floor_set(p: int) -> list[Curve]:
    """All F_p-classes with #E(F_p) = p+1 and cyclic rational point group
    (the floor of the 2-volcano for p = 3 mod 4)."""
    if p % 4 != 3 or p > 10000 or not is_prime(p):
        raise CurveError("need a prime p = 3 mod 4 at desk scale")
    out = []
    for j in range(p):
        probe = curve_from_j(p, j)
        if probe.trace(1) != 0:
            continue
        for E in _twist_classes(p, j):
            if E.order(1) == p + 1 and has_cyclic_group(E):
                out.append(E)
    return sorted(out, key=lambda E: (E.A, E.B))


def curves_with_trace(q: int, t: int) -> list[Curve]:
    """All F_q-isomorphism classes of curves with Frobenius trace exactly t."""
    out = []
    for j in range(q):
        probe = curve_from_j(q, j)
        t0 = probe.trace(1)
        if j % q in (0, 1728 % q) or abs(t0) == abs(t):
            for E in _twist_classes(q, j):
                if E.trace(1) == t:
                    out.append(E)
    return sorted(set(out), key=lambda E: (E.A, E.B))
