"""Tiny independent oracles used by the tests.

Deliberately re-implemented from scratch (brute force, no shared code with
the library) so that library results can be checked against a second route.
"""

from __future__ import annotations

import math


def oracle_reduced_forms(D: int) -> list[tuple[int, int, int]]:
    """Enumerate reduced primitive forms by scanning |b| <= a <= sqrt(|D|/3)."""
    out = []
    for a in range(1, math.isqrt(abs(D) // 3) + 1):
        for b in range(-a, a + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and (b == -a or a == c):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) == 1:
                out.append((a, b, c))
    return sorted(out)


def oracle_class_number(D: int) -> int:
    return len(oracle_reduced_forms(D))


def oracle_omega(D: int) -> tuple[int, int]:
    s = D & 1
    return s, (s - D) // 4


def oracle_elem_mul(D, p, q):
    s, n = oracle_omega(D)
    (x1, y1), (x2, y2) = p, q
    return (x1 * x2 - y1 * y2 * n, x1 * y2 + x2 * y1 + y1 * y2 * s)


def oracle_lattice_hnf(vecs):
    """HNF (a, b, c) of span{(x, y)} by pairwise gcd elimination."""
    vecs = [list(v) for v in vecs if v != (0, 0)]
    # eliminate y-components down to a single carrier
    carrier = None
    xs = []
    for v in vecs:
        if v[1] == 0:
            xs.append(v[0])
            continue
        if carrier is None:
            carrier = v
            continue
        # reduce v against carrier in the y coordinate via gcd steps
        while v[1]:
            if abs(carrier[1]) > abs(v[1]):
                carrier, v = v, carrier
            q = v[1] // carrier[1]
            v[0] -= q * carrier[0]
            v[1] -= q * carrier[1]
        if v[0]:
            xs.append(v[0])
    assert carrier is not None
    if carrier[1] < 0:
        carrier = [-carrier[0], -carrier[1]]
    a = 0
    for x in xs:
        a = math.gcd(a, abs(x))
    assert a
    return (a, carrier[0] % a, carrier[1])


def oracle_ideal_product(D, basis1, basis2):
    """Product lattice via all generator products, reduced by the HNF above."""
    prods = [oracle_elem_mul(D, g, h) for g in basis1 for h in basis2]
    return oracle_lattice_hnf(prods)


def oracle_residue_ring(D, a, b, c):
    """All residues of O/m for m = (a, b + c*w), as canonical pairs."""
    return [(x, y) for x in range(a) for y in range(c)]


def oracle_reduce_residue(a, b, c, x, y):
    t = y % c
    x = (x - ((y - t) // c) * b) % a
    return (x, t)


def oracle_residue_units(D, a, b, c):
    """Invertible residues found by scanning for a multiplicative inverse."""
    res = oracle_residue_ring(D, a, b, c)
    out = []
    for r in res:
        for r2 in res:
            p = oracle_elem_mul(D, r, r2)
            if oracle_reduce_residue(a, b, c, *p) == (1, 0):
                out.append(r)
                break
    return out
