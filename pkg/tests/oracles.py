"""Brute-force oracle for relation extraction, independent of the library.

The exponential coefficient is enumerated directly: a cell (A, D) of
exp(-sum_a x^a kappa_a sum_j c[a][j] u^j) is a sum over multisets of
(a, j) pairs with total x-weight A and u-weight D, each multiset
contributing prod (-c[a][j])^m / m! on the monomial prod kappa_a^m.
Nothing here is shared with the production pipeline: no series type,
no slice recurrence, just recursion over pair multiplicities.
"""

from fractions import Fraction
from math import factorial


def _mono_of(counts):
    agg = {}
    for a, m in counts:
        agg[a] = agg.get(a, 0) + m
    return tuple(sorted(agg.items()))


def oracle_exp_cell(c, A, D):
    """Monomial map of the (x^A, u^D) coefficient of the exponential."""
    pairs = [
        (a, j)
        for a in range(1, A + 1)
        for j in range(0, min(a, D) + 1)
        if c.get(a, j) != 0
    ]
    out = {}

    def rec(idx, rx, ru, coeff, counts):
        if rx == 0 and ru == 0:
            mono = _mono_of(counts)
            out[mono] = out.get(mono, Fraction(0)) + coeff
            return
        if idx == len(pairs) or rx == 0:
            return
        a, j = pairs[idx]
        rec(idx + 1, rx, ru, coeff, counts)
        m = 0
        while True:
            m += 1
            if a * m > rx or j * m > ru:
                break
            cc = coeff * (-c.get(a, j)) ** m / factorial(m)
            rec(idx + 1, rx - a * m, ru - j * m, cc, counts + [(a, m)])

    rec(0, A, D, Fraction(1), [])
    return {m: v for m, v in out.items() if v}


def _mono_mul_gen(mono, gen, scale):
    d = dict(mono)
    if gen >= 1:
        d[gen] = d.get(gen, 0) + 1
    return tuple(sorted(d.items())), scale


def oracle_extract(g, d, b, q, c):
    """Monomial map of the (g, d, b) relation; b=0 uses the plain exponential."""
    if b == 0:
        return oracle_exp_cell(c, g + 1 - 2 * d, d)
    A = g + 2 - 2 * d
    total = {}

    def add(mono, v):
        total[mono] = total.get(mono, Fraction(0)) + v

    lead_scale = Fraction(2 * g - 2) if b == 1 else Fraction(1)
    for mono, v in oracle_exp_cell(c, A, d).items():
        if b == 1:
            add(mono, v * lead_scale)
        else:
            m2, vv = _mono_mul_gen(mono, b - 1, v)
            add(m2, vv)
    for a2 in range(0, A):
        for j in range(0, min(a2, d - 1) + 1):
            qv = q.get(a2, j)
            if not qv:
                continue
            gen = a2 + b
            for mono, v in oracle_exp_cell(c, A - a2 - 1, d - j - 1).items():
                if gen == 0:
                    add(mono, v * Fraction(-2 * qv) * (2 * g - 2))
                else:
                    m2, vv = _mono_mul_gen(mono, gen, v * Fraction(-2 * qv))
                    add(m2, vv)
    return {m: v for m, v in total.items() if v}


def as_poly_terms(poly):
    """Terms of a library KappaPoly in the oracle's monomial convention."""
    return {m: v for m, v in poly.terms.items()}
