"""Separable isogenies from explicit kernel subgroups by Velu's formulas.

Evaluation uses the translate form phi(P) = (x_P + sum(x_{P+Q} - x_Q),
y_P + sum(y_{P+Q} - y_Q)) over the nonzero kernel points, which is manifestly
Galois-equivariant, so a Galois-stable kernel yields a codomain and map
defined over the base field.
"""

from __future__ import annotations

import math
import random

from .curve import Curve, CurveError, Point
from .field import project


class InvalidKernel(CurveError):
    pass


class Isogeny:
    def __init__(self, domain: Curve, codomain: Curve, kernel: frozenset,
                 klevel: int, post_iso: int = 1):
        self.domain = domain
        self.codomain = codomain
        self.kernel = kernel
        self.degree = len(kernel)
        self._klevel = klevel
        self._post = post_iso  # codomain isomorphism folded into evaluation

    def __call__(self, P: Point) -> Point:
        E = self.domain
        if P is None:
            return None
        if E.project_min(P) in self.kernel:
            return None
        k = P[2] * self._klevel // math.gcd(P[2], self._klevel)
        if k > 6:
            raise CurveError("evaluation level exceeds the tower")
        F = E.field(k)
        Pk = E.lift(P, k)
        x, y = Pk[0], Pk[1]
        sx, sy = x, y
        for Q in self.kernel:
            if Q is None:
                continue
            Qk = E.lift(Q, k)
            T = E.add(Pk, Qk)
            sx = F.add(sx, F.sub(T[0], Qk[0]))
            sy = F.add(sy, F.sub(T[1], Qk[1]))
        img = (sx, sy, k)
        if self._post != 1:
            img = self.codomain_pre().apply_iso(self._post, img)
        out = self.codomain.project_min(img)
        assert self.codomain.on_curve(out)
        return out

    def codomain_pre(self) -> Curve:
        """Codomain before the post-isomorphism (equal to codomain if none)."""
        return self._pre if self._post != 1 else self.codomain

    def dual(self, rng: random.Random | None = None) -> "Isogeny":
        """The dual isogeny, normalized so that dual(phi(P)) = [deg]P."""
        n = self.degree
        E, E2 = self.domain, self.codomain
        B1, B2, _ = E.torsion_basis(n)
        imgs = [self(B1), self(B2)]
        psi0 = velu(E2, [p for p in imgs if p is not None])
        cands = psi0.codomain.isomorphisms_to(E)
        if not cands:
            raise InvalidKernel("dual codomain is not isomorphic to the domain")
        if rng is None:
            rng = random.Random((E.q, E.A, E.B, n, 0xD0A1).__hash__())
        # pick the isomorphism (and sign) that makes psi(phi(R)) = [n]R
        tests = [E.random_point(1, rng) for _ in range(2)]
        for u in cands:
            ok = True
            for R in tests:
                got = psi0.codomain.apply_iso(u, psi0(self(R)))
                if E.project_min(got) != E.project_min(E.mul(n, R)):
                    ok = False
                    break
            if ok:
                out = Isogeny(E2, E, psi0.kernel, psi0._klevel, post_iso=1)
                out._compose_iso(psi0, u)
                return out
        raise InvalidKernel("no normalization of the dual matches [deg]")

    def _compose_iso(self, base: "Isogeny", u: int):
        self._pre = base.codomain
        self._post = u


def velu(E: Curve, kernel_gens: list[Point]) -> Isogeny:
    """Isogeny with kernel generated by the given points."""
    gens = [g for g in kernel_gens if g is not None]
    if not gens:
        kern = frozenset([None])
        return Isogeny(E, E, kern, 1)
    klevel = 1
    for g in gens:
        if not E.on_curve(g):
            raise InvalidKernel("generator not on the curve")
        klevel = klevel * g[2] // math.gcd(klevel, g[2])
    if klevel > 6:
        raise InvalidKernel("kernel lives above the supported tower")
    kernel = frozenset(E.subgroup(gens))
    n = len(kernel)
    if n % E.q == 0:
        raise InvalidKernel("kernel order divisible by the characteristic")
    F = E.field(klevel)
    Ak = F.from_int(E.A)
    # v, w sums over a half set (2-torsion counted once)
    seen = set()
    v = F.zero
    w = F.zero
    for Q in kernel:
        if Q is None:
            continue
        key = E.project_min(Q)
        negkey = E.project_min(E.neg(Q))
        if negkey in seen:
            continue
        seen.add(key)
        Qk = E.lift(Q, klevel)
        xq, yq = Qk[0], Qk[1]
        gx = F.add(F.smul(3, F.mul(xq, xq)), Ak)
        gy = F.smul(-2, yq)
        is_two = (negkey == key)
        vq = gx if is_two else F.smul(2, gx)
        uq = F.mul(gy, gy)
        v = F.add(v, vq)
        w = F.add(w, F.add(uq, F.mul(xq, vq)))
    F1 = E.field(1)
    A2 = project(F, F1, F.sub(F.from_int(E.A), F.smul(5, v)))
    B2 = project(F, F1, F.sub(F.from_int(E.B), F.smul(7, w)))
    if A2 is None or B2 is None:
        raise InvalidKernel("kernel is not Galois-stable over F_q")
    codomain = Curve(E.q, A2[0], B2[0])
    return Isogeny(E, codomain, kernel, klevel)
