"""F_q and its extensions F_{q^k} in a fixed polynomial basis.

Elements of F_{q^k} are coefficient tuples of length k (hashable, canonical).
The modulus polynomial for each (q, k) is chosen deterministically, and the
embedding of F_{q^a} into F_{q^b} (a | b) maps the generator to the least
root of the degree-a modulus, so serialized coordinates are reproducible.
"""

from __future__ import annotations

import random
from functools import lru_cache

from ..ntheory import factorize, sqrt_mod


class FieldError(ArithmeticError):
    pass


Elt = tuple[int, ...]


# -- dense polynomial helpers over F_q with int coefficients --

def _ptrim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmulmod(f, g, mod, q):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % q
    return _prem(out, mod, q)


def _prem(f, mod, q):
    f = list(f)
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], -1, q)
    while len(f) > dm:
        coef = f[-1] * inv_lead % q
        if coef:
            off = len(f) - 1 - dm
            for i, m in enumerate(mod):
                f[off + i] = (f[off + i] - coef * m) % q
        f.pop()
    return f


def _ppowmod(f, e, mod, q):
    out = [1]
    f = _prem(f, mod, q)
    while e:
        if e & 1:
            out = _pmulmod(out, f, mod, q)
        f = _pmulmod(f, f, mod, q)
        e >>= 1
    return out


def _pgcd(f, g, q):
    f, g = _ptrim(list(f)), _ptrim(list(g))
    while g:
        f = _ptrim(_prem(f, g, q))
        f, g = g, f
    if f:
        inv = pow(f[-1], -1, q)
        f = [c * inv % q for c in f]
    return f


def _psub(f, g, q):
    n = max(len(f), len(g))
    return _ptrim([((f[i] if i < len(f) else 0) -
                    (g[i] if i < len(g) else 0)) % q for i in range(n)])


def _is_irreducible(mod, q, k):
    # x^(q^k) = x mod f, and gcd(x^(q^(k/r)) - x, f) = 1 for prime r | k
    x = [0, 1]
    xqk = _ppowmod(x, q**k, mod, q)
    if _psub(xqk, x, q):
        return False
    for r in factorize(k):
        xe = _ppowmod(x, q**(k // r), mod, q)
        if len(_pgcd(_psub(xe, x, q), mod, q)) != 1:
            return False
    return True


def _modpoly(q, k):
    """Deterministic irreducible: first monic x^k + c_{k-1}x^{k-1}+...+c_0 in
    lexicographic order of (c_{k-1}, ..., c_1, c_0), searched lazily."""
    if k == 1:
        return (0, 1)
    from itertools import product as _product

    for high in _product(range(q), repeat=k):
        # high = (c_{k-1}, ..., c_0)
        cs = tuple(reversed(high))
        mod = list(cs) + [1]
        if _is_irreducible(mod, q, k):
            return tuple(mod)
    raise FieldError(f"no irreducible polynomial found for ({q},{k})")


class FieldCtx:
    """Arithmetic context for F_{q^k}."""

    def __init__(self, q: int, k: int):
        if q < 3 or q > (1 << 16) or k < 1 or k > 6:
            raise FieldError(f"unsupported field F_{q}^{k}")
        self.q = q
        self.k = k
        self.size = q**k
        self.modpoly = _modpoly(q, k)
        self.zero: Elt = (0,) * k
        self.one: Elt = (1,) + (0,) * (k - 1)
        self._embeddings: dict[int, "_Embedding"] = {}

    _cache: dict[tuple[int, int], "FieldCtx"] = {}

    @classmethod
    def get(cls, q: int, k: int) -> "FieldCtx":
        key = (q, k)
        if key not in cls._cache:
            cls._cache[key] = cls(q, k)
        return cls._cache[key]

    # -- element ops --
    def from_int(self, n: int) -> Elt:
        return (n % self.q,) + (0,) * (self.k - 1)

    def from_coeffs(self, cs) -> Elt:
        cs = [c % self.q for c in cs]
        cs += [0] * (self.k - len(cs))
        return tuple(cs[: self.k])

    def add(self, a: Elt, b: Elt) -> Elt:
        return tuple((x + y) % self.q for x, y in zip(a, b))

    def sub(self, a: Elt, b: Elt) -> Elt:
        return tuple((x - y) % self.q for x, y in zip(a, b))

    def neg(self, a: Elt) -> Elt:
        return tuple((-x) % self.q for x in a)

    def mul(self, a: Elt, b: Elt) -> Elt:
        if self.k == 1:
            return (a[0] * b[0] % self.q,)
        return self.from_coeffs(_pmulmod(list(a), list(b),
                                         list(self.modpoly), self.q))

    def smul(self, n: int, a: Elt) -> Elt:
        n %= self.q
        return tuple(n * x % self.q for x in a)

    def inv(self, a: Elt) -> Elt:
        if a == self.zero:
            raise ZeroDivisionError("field inverse of zero")
        if self.k == 1:
            return (pow(a[0], -1, self.q),)
        # extended Euclid on polynomials over F_q
        r0, r1 = list(self.modpoly), _ptrim(list(a))
        t0, t1 = [], [1]
        while r1:
            # divide r0 by r1
            qpoly = [0] * (len(r0) - len(r1) + 1)
            r = list(r0)
            invl = pow(r1[-1], -1, self.q)
            for off in range(len(r0) - len(r1), -1, -1):
                c = r[off + len(r1) - 1] * invl % self.q
                qpoly[off] = c
                if c:
                    for i, m in enumerate(r1):
                        r[off + i] = (r[off + i] - c * m) % self.q
            r = _ptrim(r)
            # t0 - qpoly * t1
            prod = [0] * (len(qpoly) + len(t1) - 1) if t1 else [0]
            for i, x in enumerate(qpoly):
                if x:
                    for j, y in enumerate(t1):
                        prod[i + j] = (prod[i + j] + x * y) % self.q
            newt = [((t0[i] if i < len(t0) else 0) -
                     (prod[i] if i < len(prod) else 0)) % self.q
                    for i in range(max(len(t0), len(prod), 1))]
            r0, r1, t0, t1 = r1, r, t1, _ptrim(newt)
        assert len(r0) == 1
        c = pow(r0[0], -1, self.q)
        return self.from_coeffs([x * c % self.q for x in t0])

    def div(self, a: Elt, b: Elt) -> Elt:
        return self.mul(a, self.inv(b))

    def pow(self, a: Elt, e: int) -> Elt:
        if e < 0:
            return self.pow(self.inv(a), -e)
        out = self.one
        while e:
            if e & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            e >>= 1
        return out

    def is_zero(self, a: Elt) -> bool:
        return a == self.zero

    def rand(self, rng: random.Random) -> Elt:
        return tuple(rng.randrange(self.q) for _ in range(self.k))

    def elem_order(self, a: Elt, group_order: int) -> int:
        ord_ = group_order
        for p, e in factorize(group_order).items():
            for _ in range(e):
                if self.pow(a, ord_ // p) == self.one:
                    ord_ //= p
                else:
                    break
        return ord_

    # -- roots of polynomials (coefficients are field elements) --
    def roots(self, coeffs: list[Elt]) -> list[Elt]:
        """All roots in this field, by gcd with x^size - x then equal-degree
        splitting (Cantor-Zassenhaus); deterministic via a derived seed."""
        f = [c for c in coeffs]
        while f and self.is_zero(f[-1]):
            f.pop()
        if len(f) <= 1:
            return []
        f = self._monic(f)
        x = [self.zero, self.one]
        xq = self._epowmod(x, self.size, f)
        lin = self._egcd(self._esub(xq, x), f)
        seed = hash((self.q, self.k) + tuple(t for c in coeffs for t in c))
        rng = random.Random(seed & 0x7FFFFFFF)
        out = []
        stack = [lin]
        while stack:
            g = stack.pop()
            if len(g) <= 1:
                continue
            if len(g) == 2:
                out.append(self.neg(g[0]))
                continue
            while True:
                r = self.rand(rng)
                h = self._epowmod([r, self.one], (self.size - 1) // 2, g)
                h = self._esub(h, [self.one])
                d = self._egcd(h, g)
                if 1 < len(d) < len(g):
                    stack.append(d)
                    stack.append(self._ediv(g, d))
                    break
        return sorted(out)

    def sqrt(self, a: Elt) -> Elt | None:
        if self.is_zero(a):
            return self.zero
        if self.k == 1:
            r = sqrt_mod(a[0], self.q)
            return None if r is None else (r,)
        rs = self.roots([self.neg(a), self.zero, self.one])
        return rs[0] if rs else None

    # internal poly ops with element coefficients
    def _monic(self, f):
        c = self.inv(f[-1])
        return [self.mul(x, c) for x in f]

    def _etrim(self, f):
        while f and self.is_zero(f[-1]):
            f.pop()
        return f

    def _esub(self, f, g):
        n = max(len(f), len(g))
        out = []
        for i in range(n):
            a = f[i] if i < len(f) else self.zero
            b = g[i] if i < len(g) else self.zero
            out.append(self.sub(a, b))
        return self._etrim(out)

    def _erem(self, f, g):
        f = list(f)
        invl = self.inv(g[-1])
        while len(f) >= len(g):
            c = self.mul(f[-1], invl)
            off = len(f) - len(g)
            if not self.is_zero(c):
                for i, m in enumerate(g):
                    f[off + i] = self.sub(f[off + i], self.mul(c, m))
            f.pop()
        return self._etrim(f)

    def _ediv(self, f, g):
        f = list(f)
        qout = [self.zero] * (len(f) - len(g) + 1)
        invl = self.inv(g[-1])
        while len(f) >= len(g):
            c = self.mul(f[-1], invl)
            off = len(f) - len(g)
            qout[off] = c
            if not self.is_zero(c):
                for i, m in enumerate(g):
                    f[off + i] = self.sub(f[off + i], self.mul(c, m))
            f.pop()
        return self._etrim(qout) or [self.zero]

    def _emulmod(self, f, g, mod):
        out = [self.zero] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            if self.is_zero(a):
                continue
            for j, b in enumerate(g):
                out[i + j] = self.add(out[i + j], self.mul(a, b))
        return self._erem(out, mod)

    def _epowmod(self, f, e, mod):
        out = [self.one]
        f = self._erem(list(f), mod)
        while e:
            if e & 1:
                out = self._emulmod(out, f, mod)
            f = self._emulmod(f, f, mod)
            e >>= 1
        return out

    def _egcd(self, f, g):
        f, g = self._etrim(list(f)), self._etrim(list(g))
        while g:
            f = self._erem(f, g)
            f, g = g, f
        return self._monic(f) if f else f


class _Embedding:
    """F_{q^a} -> F_{q^b} for a | b, generator to the least root of modpoly_a."""

    def __init__(self, src: FieldCtx, dst: FieldCtx):
        assert src.q == dst.q and dst.k % src.k == 0
        self.src, self.dst = src, dst
        if src.k == 1:
            self.powers = [dst.one]
        else:
            poly = [dst.from_int(c) for c in src.modpoly]
            roots = dst.roots(poly)
            assert roots, "modpoly must split in the extension"
            r = roots[0]
            self.powers = [dst.one]
            for _ in range(src.k - 1):
                self.powers.append(dst.mul(self.powers[-1], r))
        # column-reduce the matrix of powers for the inverse map
        self._rows = [list(p) for p in self.powers]  # src.k vectors of len dst.k

    def up(self, a: Elt) -> Elt:
        out = self.dst.zero
        for c, p in zip(a, self.powers):
            out = self.dst.add(out, self.dst.smul(c, p))
        return out

    def down(self, y: Elt) -> Elt | None:
        """Solve sum c_i * powers[i] = y over F_q, or None if y not in image."""
        q = self.src.q
        a, b = self.src.k, self.dst.k
        # Gaussian elimination on the b x (a+1) system
        mat = [[self._rows[j][i] for j in range(a)] + [y[i]] for i in range(b)]
        piv_cols = []
        r = 0
        for col in range(a):
            piv = next((i for i in range(r, b) if mat[i][col]), None)
            if piv is None:
                continue
            mat[r], mat[piv] = mat[piv], mat[r]
            inv = pow(mat[r][col], -1, q)
            mat[r] = [x * inv % q for x in mat[r]]
            for i in range(b):
                if i != r and mat[i][col]:
                    f = mat[i][col]
                    mat[i] = [(x - f * y2) % q for x, y2 in zip(mat[i], mat[r])]
            piv_cols.append(col)
            r += 1
        sol = [0] * a
        for i, col in enumerate(piv_cols):
            sol[col] = mat[i][a]
        for i in range(r, b):
            if mat[i][a]:
                return None
        # verify (paranoia against a consistent-but-wrong readoff)
        if self.up(tuple(sol)) != y:
            return None
        return tuple(sol)


def embed(src: FieldCtx, dst: FieldCtx, a: Elt) -> Elt:
    if src is dst or (src.q, src.k) == (dst.q, dst.k):
        return a
    emb = src._embeddings.get(dst.k)
    if emb is None:
        emb = _Embedding(src, dst)
        src._embeddings[dst.k] = emb
    return emb.up(a)


def project(src: FieldCtx, dst: FieldCtx, a: Elt) -> Elt | None:
    """Inverse of embed on its image: take a in F_{q^src} down to F_{q^dst}."""
    if src is dst or (src.q, src.k) == (dst.q, dst.k):
        return a
    emb = dst._embeddings.get(src.k)
    if emb is None:
        emb = _Embedding(dst, src)
        dst._embeddings[src.k] = emb
    return emb.down(a)
