"""Moduli, residue rings O/m, congruence subgroups and generalized class groups.

The congruence subgroup attached to a multiplicatively closed set L of scalars
is the group of principal fractional ideals with a generator congruent to some
element of L modulo m (after folding in units).  The quotient of the coprime
ideal group by it is the generalized class group Cl_H, built here by explicit
enumeration with an exact-sequence cardinality certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

from .ntheory import xgcd
from .quadforms import (
    DomainError,
    Elem,
    FracIdeal,
    IdealClass,
    QuadIdeal,
    QuadOrder,
    class_group,
    class_label,
    is_principal_with_generator,
    proper_ideals_by_norm,
)


class EnumerationError(RuntimeError):
    """Ideal enumeration exhausted its budget; signals an arithmetic bug."""


@dataclass(frozen=True)
class LambdaSet:
    """Multiplicatively closed scalar set: {1}, Z, n-th powers of Z, or O."""

    tag: str          # 'unit' | 'int' | 'pow' | 'full'
    n: int | None = None

    def __post_init__(self):
        if self.tag not in ("unit", "int", "pow", "full"):
            raise DomainError(f"unknown scalar-set tag {self.tag!r}")
        if self.tag == "pow" and (self.n is None or self.n < 1):
            raise DomainError("pow tag needs a positive exponent")

    @property
    def subset_of_scalars(self) -> bool:
        """True when the set lies in O^x * Z (needed for actions on Y)."""
        return self.tag != "full"

    def describe(self) -> str:
        return {"unit": "{1}", "int": "Z", "pow": f"Z^{self.n}",
                "full": "O"}[self.tag]


LAMBDA_UNIT = LambdaSet("unit")
LAMBDA_INT = LambdaSet("int")
LAMBDA_FULL = LambdaSet("full")


def lambda_powers(n: int) -> LambdaSet:
    return LambdaSet("pow", n)


def _smith_2x2(m11, m12, m21, m22):
    """Smith form of M = [[m11,m12],[m21,m22]]: returns U (tracked row ops)
    and (d1, d2) with d1 | d2 and U*M*V = diag(d1, d2) for some unimodular V.
    Only U matters for quotient structure, so column ops go untracked."""
    M = [[m11, m12], [m21, m22]]
    U = [[1, 0], [0, 1]]

    def rowsub(i, j, q):
        M[i][0] -= q * M[j][0]
        M[i][1] -= q * M[j][1]
        U[i][0] -= q * U[j][0]
        U[i][1] -= q * U[j][1]

    def colsub(i, j, q):
        M[0][i] -= q * M[0][j]
        M[1][i] -= q * M[1][j]

    while True:
        entries = [(abs(M[i][j]), i, j) for i in range(2) for j in range(2)
                   if M[i][j]]
        if not entries:
            raise DomainError("singular lattice")
        _, i0, j0 = min(entries)
        if i0:
            M[0], M[1] = M[1], M[0]
            U[0], U[1] = U[1], U[0]
        if j0:
            M[0][0], M[0][1] = M[0][1], M[0][0]
            M[1][0], M[1][1] = M[1][1], M[1][0]
        p = M[0][0]
        if M[1][0] % p:
            rowsub(1, 0, M[1][0] // p)
            continue
        if M[0][1] % p:
            colsub(1, 0, M[0][1] // p)
            continue
        rowsub(1, 0, M[1][0] // p)
        colsub(1, 0, M[0][1] // p)
        if M[1][1] % p:
            colsub(0, 1, -1)  # drag the off-divisible entry back into play
            continue
        break
    return U, (abs(M[0][0]), abs(M[1][1]))


class ResidueRing:
    """Explicit O/m with canonical residues (x, y), 0<=x<a, 0<=y<c."""

    def __init__(self, order: QuadOrder, ideal: QuadIdeal):
        assert ideal.order == order
        self.order = order
        self.ideal = ideal
        self.a, self.b, self.c = ideal.a, ideal.b, ideal.c
        self.size = ideal.norm()
        # group structure O/m = Z/ord_small x Z/ord_big via Smith reduction
        # of the basis matrix [[a, b], [0, c]] (columns = ideal basis)
        U, (d1, d2) = _smith_2x2(self.a, self.b, 0, self.c)
        det = U[0][0] * U[1][1] - U[0][1] * U[1][0]
        assert det in (1, -1)
        inv = [[U[1][1] * det, -U[0][1] * det], [-U[1][0] * det, U[0][0] * det]]
        self.ord_small, self.ord_big = d1, d2
        self.gen_small: Elem = (inv[0][0], inv[1][0])
        self.gen_big: Elem = (inv[0][1], inv[1][1])
        self._U = U
        assert d1 * d2 == self.size and d2 % d1 == 0
        assert self.additive_order(self.gen_big) == d2
        assert d1 == 1 or self.additive_order(self.gen_small) == d1

    def reduce(self, p: Elem) -> Elem:
        x, y = p
        t = y % self.c
        x = (x - ((y - t) // self.c) * self.b) % self.a
        return (x, t)

    @property
    def one(self) -> Elem:
        return self.reduce((1, 0))

    def mul(self, p: Elem, q: Elem) -> Elem:
        return self.reduce(self.order.mul(p, q))

    def add(self, p: Elem, q: Elem) -> Elem:
        return self.reduce((p[0] + q[0], p[1] + q[1]))

    def additive_order(self, p: Elem) -> int:
        p = self.reduce(p)
        for d in sorted(_divs(self.ord_big)):
            if self.reduce((d * p[0], d * p[1])) == (0, 0):
                return d
        raise AssertionError("element order must divide the exponent")

    def elements(self):
        for x in range(self.a):
            for y in range(self.c):
                yield (x, y)

    def is_unit(self, p: Elem) -> bool:
        # r is invertible iff r*O + m = O, i.e. the joint lattice has index 1
        x, y = p
        rw = self.order.mul(p, (0, 1))
        vecs = [(x, y), rw, (self.a, 0), (self.b, self.c)]
        # index of the span: reduce y-parts, then gcd of x-parts times carrier
        cy, bx = 0, 0
        for vx, vy in vecs:
            g, u, v = xgcd(cy, vy)
            bx = u * bx + v * vx
            cy = g
        ax = 0
        for vx, vy in vecs:
            ax = math.gcd(ax, vx - (vy // cy) * bx if cy else vx)
        return abs(ax * cy) == 1

    @cached_property
    def units(self) -> list[Elem]:
        return [r for r in self.elements() if self.is_unit(r)]

    @cached_property
    def _unit_inv(self) -> dict[Elem, Elem]:
        inv = {}
        for r in self.units:
            if r in inv:
                continue
            for r2 in self.units:
                if self.mul(r, r2) == self.one:
                    inv[r] = r2
                    inv[r2] = r
                    break
        return inv

    def inv_unit(self, p: Elem) -> Elem:
        return self._unit_inv[self.reduce(p)]

    def snf_coords(self, p: Elem) -> tuple[int, int]:
        """Coordinates (t_big, t_small) with p = t_big*gen_big + t_small*gen_small."""
        x, y = p
        c1 = self._U[0][0] * x + self._U[0][1] * y
        c2 = self._U[1][0] * x + self._U[1][1] * y
        return (c2 % self.ord_big, c1 % self.ord_small)

    def from_snf(self, t_big: int, t_small: int) -> Elem:
        gx = t_big * self.gen_big[0] + t_small * self.gen_small[0]
        gy = t_big * self.gen_big[1] + t_small * self.gen_small[1]
        return self.reduce((gx, gy))

    def int_residue(self, z: int) -> Elem:
        return self.reduce((z, 0))

    @cached_property
    def unit_image(self) -> list[Elem]:
        """Residues of the unit group O^x."""
        return [self.reduce(u) for u in self.order.units()]

    def delta(self, lam: LambdaSet) -> frozenset[Elem]:
        """Image of the scalar set intersected with the units of O/m."""
        if lam.tag == "unit":
            return frozenset([self.one])
        if lam.tag == "full":
            return frozenset(self.units)
        ints = [self.int_residue(z) for z in range(1, self.a + 1)
                if math.gcd(z, self.size) == 1]
        if lam.tag == "int":
            return frozenset(ints)
        out = set()
        for r in ints:
            p = self.one
            for _ in range(lam.n):
                p = self.mul(p, r)
            out.add(p)
        return frozenset(out)

    def fold_set(self, lam: LambdaSet) -> frozenset[Elem]:
        """Subgroup (units of O) * Delta inside (O/m)^x."""
        return frozenset(self.mul(u, d)
                         for u in self.unit_image for d in self.delta(lam))

    def coset_table(self, lam: LambdaSet) -> dict[Elem, int]:
        """Map unit residue -> index of its coset modulo units * Delta."""
        fold = self.fold_set(lam)
        table: dict[Elem, int] = {}
        nxt = 0
        for r in self.units:
            if r in table:
                continue
            for f in fold:
                table[self.mul(r, f)] = nxt
            nxt += 1
        return table


def _divs(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return out


@dataclass(frozen=True)
class Modulus:
    """A nonzero proper integral ideal used to define congruence conditions."""

    ideal: QuadIdeal

    def __post_init__(self):
        if not self.ideal.is_proper():
            raise DomainError("modulus must be a proper ideal")

    @classmethod
    def scalar(cls, order: QuadOrder, N: int) -> "Modulus":
        if N < 1:
            raise DomainError("scalar modulus must be positive")
        return cls(QuadIdeal(order, N, 0, N))

    @property
    def order(self) -> QuadOrder:
        return self.ideal.order

    @cached_property
    def ring(self) -> ResidueRing:
        return ResidueRing(self.order, self.ideal)

    @property
    def norm(self) -> int:
        return self.ideal.norm()

    def coprime(self, other: QuadIdeal) -> bool:
        """Lattice test of ideal coprimality: x + m = O."""
        vecs = list(self.ideal.basis()) + list(other.basis())
        cy, bx = 0, 0
        for vx, vy in vecs:
            g, u, v = xgcd(cy, vy)
            bx = u * bx + v * vx
            cy = g
        ax = 0
        for vx, vy in vecs:
            ax = math.gcd(ax, vx - (vy // cy) * bx)
        return abs(ax * cy) == 1

    def describe(self) -> str:
        i = self.ideal
        if i.a == i.c and i.b == 0:
            return f"{i.a}O"
        return f"({i.a}, {i.b}+{i.c}w)"


def residue_ring(order: QuadOrder, m: Modulus) -> ResidueRing:
    return m.ring


def in_congruence_subgroup(x: FracIdeal, lam: LambdaSet, m: Modulus) -> bool:
    """Membership of num/den in the congruence subgroup for (lam, m)."""
    ring = m.ring
    if not m.coprime(x.num):
        raise DomainError("numerator not coprime to the modulus")
    if math.gcd(x.den, m.norm) != 1:
        raise DomainError("denominator not coprime to the modulus")
    g = is_principal_with_generator(x.num)
    if g is None:
        return False
    dinv = pow(x.den, -1, ring.a)
    target = ring.mul(ring.reduce(g), ring.int_residue(dinv))
    return target in ring.fold_set(lam)


def predicted_class_count(order: QuadOrder, m: Modulus, lam: LambdaSet) -> int:
    """Cardinality of Cl_H from the exact-sequence identity."""
    ring = m.ring
    delta = ring.delta(lam)
    # O^x n (L+m) = units whose residue lies in Delta; contains 1 always
    stab = [u for u in order.units() if ring.reduce(u) in delta]
    unit_quot = len(order.units()) // len(stab)
    res_quot = len(ring.units) // len(delta)
    h = len(class_group(order))
    assert (h * res_quot) % unit_quot == 0
    return h * res_quot // unit_quot


@dataclass
class GCClass:
    """One class of a generalized class group."""

    rep: QuadIdeal
    fingerprint: tuple
    members: list[QuadIdeal] = field(default_factory=list)


class GenClassGroup:
    """Cl_H = I_O(m) / P_{O,L}(m), realized on integral coprime representatives.

    Classes are fingerprinted by (reduced form of the ideal, coset of the
    residue of a connecting generator), which makes equality and composition
    cheap.  Construction enumerates ideals by increasing norm and stops when
    the exact-sequence cardinality is reached (or at the norm bound when
    exhaustive=True, which is what the sequence audit uses).
    """

    def __init__(self, order: QuadOrder, modulus: Modulus, lam: LambdaSet, *,
                 exhaustive: bool = False, norm_bound: int | None = None,
                 keep_members: int = 4, rep_coprime_to: int = 1):
        self.order = order
        self.modulus = modulus
        self.lam = lam
        self.rep_coprime_to = rep_coprime_to
        ring = modulus.ring
        self._coset = ring.coset_table(lam)
        self._base: dict[tuple, IdealClass] = {}
        for c in class_group(order, coprime_to=modulus.norm):
            self._base[c.form] = c
        self.predicted = predicted_class_count(order, modulus, lam)
        if exhaustive:
            bound = norm_bound or max(2 * abs(order.disc), 10 * modulus.norm)
        else:
            bound = norm_bound or max(6 * abs(order.disc), 20 * modulus.norm)
        self.classes: list[GCClass] = []
        self._index: dict[tuple, int] = {}
        self.enumerated = 0
        for _ in range(3):
            self._scan(bound, exhaustive, keep_members)
            if len(self.classes) >= self.predicted:
                break
            bound *= 2  # extend on demand; slow classes need larger norms
        if not exhaustive and len(self.classes) != self.predicted:
            raise EnumerationError(
                f"found {len(self.classes)} classes, predicted "
                f"{self.predicted}, bound {bound}")
        self._sort_canonical()

    def _scan(self, bound, exhaustive, keep_members):
        self.classes = []
        self._index = {}
        self.enumerated = 0
        for ideal in proper_ideals_by_norm(self.order, bound):
            if not self.modulus.coprime(ideal):
                continue
            if math.gcd(ideal.norm(), self.rep_coprime_to) != 1:
                continue
            self.enumerated += 1
            fp = self.fingerprint(ideal)
            idx = self._index.get(fp)
            if idx is None:
                self._index[fp] = len(self.classes)
                self.classes.append(GCClass(rep=ideal, fingerprint=fp,
                                            members=[ideal]))
                if not exhaustive and len(self.classes) == self.predicted:
                    return
            elif len(self.classes[idx].members) < keep_members:
                self.classes[idx].members.append(ideal)

    def _sort_canonical(self):
        ident_fp = self.fingerprint(QuadIdeal.unit_ideal(self.order))
        keyed = sorted(
            self.classes,
            key=lambda c: (c.fingerprint != ident_fp, c.rep.norm(),
                           c.rep.a, c.rep.b, c.rep.c))
        self.classes = keyed
        self._index = {c.fingerprint: i for i, c in enumerate(keyed)}

    def fingerprint(self, ideal: QuadIdeal) -> tuple:
        lbl = class_label(ideal)
        base = self._base[lbl]
        g = is_principal_with_generator(ideal.mul(base.rep.conj()))
        assert g is not None, "ideal not in the expected form class"
        ring = self.modulus.ring
        return (lbl, self._coset[ring.reduce(g)])

    # -- group interface --
    def __len__(self):
        return len(self.classes)

    @property
    def identity(self) -> int:
        return 0

    def class_of(self, ideal: QuadIdeal) -> int:
        if not self.modulus.coprime(ideal):
            raise DomainError("ideal not coprime to the modulus")
        fp = self.fingerprint(ideal)
        if fp not in self._index:
            raise EnumerationError("fingerprint outside the built group")
        return self._index[fp]

    def compose(self, i: int, j: int) -> int:
        return self.class_of(self.classes[i].rep.mul(self.classes[j].rep))

    def inverse(self, i: int) -> int:
        return self.class_of(self.classes[i].rep.conj())

    def rep(self, i: int) -> QuadIdeal:
        return self.classes[i].rep

    def cayley_table(self) -> list[list[int]]:
        n = len(self)
        return [[self.compose(i, j) for j in range(n)] for i in range(n)]

    def to_json(self) -> dict:
        return {
            "disc": self.order.disc,
            "modulus": self.modulus.ideal.to_json(),
            "lambda": self.lam.describe(),
            "size": len(self),
            "elements": [c.rep.to_json() for c in self.classes],
            "cayley": self.cayley_table(),
        }


def gen_class_group(order: QuadOrder, m: Modulus, lam: LambdaSet,
                    **kw) -> GenClassGroup:
    return GenClassGroup(order, m, lam, **kw)


@dataclass
class SequenceAudit:
    """Cardinality audit of 1 -> U -> (O/m)^x/D -> Cl_H -> Cl_O -> 1."""

    disc: int
    modulus: dict
    lam: str
    unit_quot: int
    residue_quot: int
    cl_h: int
    cl_o: int
    delta_size: int
    passed: bool
    ray_formula: int | None = None

    def to_json(self) -> dict:
        return {
            "schema": "clact.sequence_audit/1",
            "disc": self.disc, "modulus": self.modulus, "lambda": self.lam,
            "sizes": {"unit_quot": self.unit_quot,
                      "residue_quot": self.residue_quot,
                      "cl_h": self.cl_h, "cl_o": self.cl_o},
            "delta_size": self.delta_size,
            "identity_holds": self.passed,
            "ray_formula": self.ray_formula,
        }


def exact_sequence_audit(order: QuadOrder, m: Modulus,
                         lam: LambdaSet) -> SequenceAudit:
    """Check |Cl_H| * |O^x/(O^x n (L+m))| = |Cl_O| * |(O/m)^x / Delta| with
    Cl_H counted by exhaustive enumeration, independent of the prediction."""
    ring = m.ring
    delta = ring.delta(lam)
    stab = [u for u in order.units() if ring.reduce(u) in delta]
    unit_quot = len(order.units()) // len(stab)
    res_quot = len(ring.units) // len(delta)
    h = len(class_group(order))
    G = GenClassGroup(order, m, lam, exhaustive=True)
    cl_h = len(G)
    passed = cl_h * unit_quot == h * res_quot
    ray = None
    if lam.tag == "unit":
        # ray class size h * |(O/m)^x| / [O^x : O^x_{m,1}]
        ray = h * len(ring.units) // unit_quot
        passed = passed and ray == cl_h
    return SequenceAudit(
        disc=order.disc, modulus=m.ideal.to_json(), lam=lam.describe(),
        unit_quot=unit_quot, residue_quot=res_quot, cl_h=cl_h, cl_o=h,
        delta_size=len(delta), passed=passed, ray_formula=ray)


def kernel_of_projection(G: GenClassGroup) -> list[int]:
    """Classes of Cl_H whose representatives are principal (trivial in Cl_O)."""
    out = []
    for i, c in enumerate(G.classes):
        if is_principal_with_generator(c.rep) is not None:
            out.append(i)
    return out


@dataclass
class SuborderTransport:
    """The isomorphism Cl_{O'} -> I_O(fO)/P_{O,Z}(fO), [a] -> [aO]."""

    order: QuadOrder
    f: int
    suborder: QuadOrder
    sub_classes: list[IdealClass]
    group: GenClassGroup
    table: list[int]
    verified: bool


def extend_to_superorder(ideal: QuadIdeal, order: QuadOrder) -> QuadIdeal:
    """The O-ideal generated by an ideal of the suborder Z + fO."""
    sub = ideal.order
    f = sub.cond // order.cond
    assert sub.disc == f * f * order.disc
    t_shift = (sub.omega_trace - f * order.omega_trace) // 2
    assert 2 * t_shift == sub.omega_trace - f * order.omega_trace
    gens = [(ideal.a, 0),
            (ideal.b + ideal.c * t_shift, ideal.c * f)]
    return QuadIdeal.from_generators(order, gens, close=True)


def suborder_transport(order: QuadOrder, f: int) -> SuborderTransport:
    """Build both sides of the suborder isomorphism and verify it elementwise."""
    if math.gcd(f, order.cond) != 1:
        raise DomainError("relative conductor must be coprime to cond(O)")
    sub = QuadOrder(disc=f * f * order.disc, cond=f * order.cond,
                    fund_disc=order.fund_disc)
    sub_classes = class_group(sub, coprime_to=f * order.disc)
    m = Modulus.scalar(order, f)
    G = GenClassGroup(order, m, LAMBDA_INT)
    table = [G.class_of(extend_to_superorder(c.rep, order))
             for c in sub_classes]
    ok = len(sub_classes) == len(G) and len(set(table)) == len(table)
    # homomorphy, exhaustively on pairs
    lbl_to_idx = {c.form: i for i, c in enumerate(sub_classes)}
    if ok:
        for i, ci in enumerate(sub_classes):
            for j, cj in enumerate(sub_classes):
                k = lbl_to_idx[class_label(ci.rep.mul(cj.rep))]
                if G.compose(table[i], table[j]) != table[k]:
                    ok = False
                    break
            if not ok:
                break
    if not ok:
        raise EnumerationError("suborder transport failed verification")
    return SuborderTransport(order=order, f=f, suborder=sub,
                             sub_classes=sub_classes, group=G,
                             table=table, verified=ok)
