"""Sparse weighted polynomial algebra in kappa generators and relation extraction.

Generators are indexed by positive integers; index 0 is reserved for the
extra weight-1 generator psi used by the pointed-curve relation.  The
index-0 and index-(-1) kappa symbols are never generators: they are
substituted as the scalars 2g-2 and 0 at extraction time, which keeps
the ring independent of the genus.

A monomial is a tuple of (index, exponent) pairs sorted by index; its
weighted degree counts index*exponent (psi counts 1 per power).  Every
extracted relation is homogeneous in this grading.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

from .coeffs import AlphaTable, CTable, QTable
from .series import UniSeries

__all__ = [
    "KappaPoly",
    "PolySeries",
    "TautRelation",
    "PsiRelation",
    "DiagonalRelation",
    "kappa_exponential",
    "extract_relation",
    "extract_psi_relation",
    "extract_relation_from_ode",
    "extract_diagonal_relation",
    "relation_json",
    "terms_json",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)

Mono = tuple[tuple[int, int], ...]
UNIT: Mono = ()


def _mono_mul(m1: Mono, m2: Mono) -> Mono:
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for idx, e in m2:
        d[idx] = d.get(idx, 0) + e
    return tuple(sorted(d.items()))


def _mono_weight(m: Mono) -> int:
    return sum((idx if idx >= 1 else 1) * e for idx, e in m)


def _mono_cmp(m1: Mono, m2: Mono) -> int:
    """Canonical order: graded, then lexicographic by exponent vector."""
    w1, w2 = _mono_weight(m1), _mono_weight(m2)
    if w1 != w2:
        return -1 if w1 < w2 else 1
    d1, d2 = dict(m1), dict(m2)
    for idx in sorted(set(d1) | set(d2)):
        e1, e2 = d1.get(idx, 0), d2.get(idx, 0)
        if e1 != e2:
            return -1 if e1 > e2 else 1
    return 0


class KappaPoly:
    """Sparse polynomial: map from monomial to nonzero rational coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Mono, Fraction] | None = None):
        clean: dict[Mono, Fraction] = {}
        if terms:
            for m, v in terms.items():
                v = Fraction(v)
                if v:
                    clean[m] = v
        self.terms = clean

    @classmethod
    def zero(cls) -> "KappaPoly":
        return cls()

    @classmethod
    def scalar(cls, v: Fraction) -> "KappaPoly":
        return cls({UNIT: Fraction(v)})

    @classmethod
    def gen(cls, index: int, exponent: int = 1, coeff: Fraction = _ONE) -> "KappaPoly":
        if index < 0 or exponent < 1:
            raise ValueError("generator index must be >= 0 and exponent >= 1")
        return cls({((index, exponent),): Fraction(coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KappaPoly):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other: "KappaPoly") -> "KappaPoly":
        out = dict(self.terms)
        for m, v in other.terms.items():
            out[m] = out.get(m, _ZERO) + v
        return KappaPoly(out)

    def __sub__(self, other: "KappaPoly") -> "KappaPoly":
        out = dict(self.terms)
        for m, v in other.terms.items():
            out[m] = out.get(m, _ZERO) - v
        return KappaPoly(out)

    def __neg__(self) -> "KappaPoly":
        return KappaPoly({m: -v for m, v in self.terms.items()})

    def scale(self, r: Fraction) -> "KappaPoly":
        r = Fraction(r)
        if not r:
            return KappaPoly()
        return KappaPoly({m: r * v for m, v in self.terms.items()})

    def __mul__(self, other: "KappaPoly") -> "KappaPoly":
        out: dict[Mono, Fraction] = {}
        for m1, v1 in self.terms.items():
            for m2, v2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, _ZERO) + v1 * v2
        return KappaPoly(out)

    def coeff(self, mono: Mono) -> Fraction:
        return self.terms.get(mono, _ZERO)

    def gen_coeff(self, index: int) -> Fraction:
        """Coefficient of the bare generator kappa_index (exponent 1)."""
        return self.terms.get(((index, 1),), _ZERO)

    def max_gen(self) -> int:
        """Largest generator index present; -1 for constants and zero."""
        best = -1
        for m in self.terms:
            for idx, _ in m:
                if idx > best:
                    best = idx
        return best

    def homogeneous_degree(self) -> int | None:
        """Common weighted degree, None for the zero polynomial.

        Raises ValueError when the terms mix degrees.
        """
        degs = {_mono_weight(m) for m in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous polynomial, degrees {sorted(degs)}")
        return degs.pop()

    def substitute(
        self,
        mapping: dict[int, "KappaPoly"],
        _power_cache: dict[tuple[int, int], "KappaPoly"] | None = None,
    ) -> "KappaPoly":
        """Replace each mapped generator by its polynomial, exactly.

        Unmapped generators pass through.  Powers of substituted values
        are cached across calls when a shared cache dict is supplied.
        """
        cache = _power_cache if _power_cache is not None else {}
        out = KappaPoly()
        for m, v in self.terms.items():
            kept: list[tuple[int, int]] = []
            factors: list[KappaPoly] = []
            for idx, e in m:
                if idx in mapping:
                    key = (idx, e)
                    pw = cache.get(key)
                    if pw is None:
                        pw = mapping[idx]
                        for _ in range(e - 1):
                            pw = pw * mapping[idx]
                        cache[key] = pw
                    factors.append(pw)
                else:
                    kept.append((idx, e))
            piece = KappaPoly({tuple(kept): v})
            for f in factors:
                piece = piece * f
            out = out + piece
        return out

    def sorted_terms(self) -> list[tuple[Mono, Fraction]]:
        return [
            (m, self.terms[m])
            for m in sorted(self.terms, key=cmp_to_key(_mono_cmp))
        ]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, v in self.sorted_terms():
            factors = []
            for idx, e in m:
                name = "psi" if idx == 0 else f"k{idx}"
                factors.append(name if e == 1 else f"{name}^{e}")
            body = "*".join(factors) if factors else "1"
            parts.append(f"({v})*{body}" if factors else f"({v})")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"KappaPoly({len(self.terms)} terms)"


def terms_json(poly: KappaPoly) -> list[dict]:
    out = []
    for m, v in poly.sorted_terms():
        out.append({"monomial": {str(idx): e for idx, e in m}, "coeff": str(v)})
    return out


class PolySeries:
    """Bivariate truncated series whose coefficients are KappaPoly values."""

    __slots__ = ("vars", "orders", "cells")

    def __init__(
        self,
        vars: tuple[str, str],
        orders: tuple[int, int],
        cells: dict[tuple[int, int], KappaPoly],
    ):
        self.vars = vars
        self.orders = orders
        self.cells = {k: p for k, p in cells.items() if not p.is_zero()}

    def coeff(self, i: int, j: int) -> KappaPoly:
        n1, n2 = self.orders
        if not 0 <= i <= n1 or not 0 <= j <= n2:
            raise ValueError(f"cell ({i}, {j}) outside orders {self.orders}")
        return self.cells.get((i, j), KappaPoly())

    def covers(self, i: int, j: int) -> bool:
        return i <= self.orders[0] and j <= self.orders[1]


def _exp_from_slices(
    slices: dict[int, dict[int, KappaPoly]], n1: int, n2: int
) -> dict[tuple[int, int], KappaPoly]:
    """exp of sum_{m>=1} slice_m * v1^m, cellwise through (n1, n2).

    Uses the derivative recurrence in the first variable:
    i * e_i = sum_m m * s_m * e_{i-m}, merging raw term dicts to keep
    object churn down.
    """
    e: list[dict[int, KappaPoly]] = [{0: KappaPoly.scalar(_ONE)}]
    for i in range(1, n1 + 1):
        acc: dict[int, dict[Mono, Fraction]] = {}
        for m in range(1, i + 1):
            sm = slices.get(m)
            if not sm:
                continue
            em = e[i - m]
            for jm, p in sm.items():
                for je, qp in em.items():
                    j = jm + je
                    if j > n2:
                        continue
                    bucket = acc.setdefault(j, {})
                    for m1, v1 in p.terms.items():
                        mv1 = m * v1
                        for m2, v2 in qp.terms.items():
                            mono = _mono_mul(m1, m2)
                            bucket[mono] = bucket.get(mono, _ZERO) + mv1 * v2
        inv = Fraction(1, i)
        e.append({j: KappaPoly(t).scale(inv) for j, t in acc.items()})
    out: dict[tuple[int, int], KappaPoly] = {}
    for i, row in enumerate(e):
        for j, p in row.items():
            if not p.is_zero():
                out[(i, j)] = p
    return out


def kappa_exponential(c: CTable, n_x: int, n_u: int) -> PolySeries:
    """exp(-sum_{a>=1} x^a kappa_a sum_{j<=a} c[a][j] u^j), truncated."""
    if c.k_max < n_x:
        raise ValueError(f"c table sized {c.k_max}, need {n_x}")
    slices: dict[int, dict[int, KappaPoly]] = {}
    for a in range(1, n_x + 1):
        row = {}
        for j in range(0, min(a, n_u) + 1):
            cv = c.get(a, j)
            if cv:
                row[j] = KappaPoly.gen(a, coeff=-cv)
        if row:
            slices[a] = row
    return PolySeries(("x", "u"), (n_x, n_u), _exp_from_slices(slices, n_x, n_u))


@dataclass(frozen=True)
class TautRelation:
    """One extracted relation: a homogeneous polynomial that vanishes."""

    g: int
    d: int
    b: int
    degree: int
    poly: KappaPoly


@dataclass(frozen=True)
class PsiRelation:
    """Pointed-curve relation: homogeneous in psi and the kappa generators."""

    g: int
    d: int
    degree: int
    poly: KappaPoly


@dataclass(frozen=True)
class DiagonalRelation:
    """Relation built from the diagonal-coefficient generating series."""

    g: int
    b: int
    a: int
    poly: KappaPoly


def _kappa_symbol(index: int, g: int, coeff: Fraction = _ONE) -> KappaPoly:
    """kappa_index as a ring element: index -1 -> 0, index 0 -> 2g-2."""
    if index < 0:
        return KappaPoly()
    if index == 0:
        return KappaPoly.scalar(coeff * (2 * g - 2))
    return KappaPoly.gen(index, coeff=coeff)


def _convolve_cell(
    e: PolySeries, f2: dict[tuple[int, int], KappaPoly], i: int, j: int
) -> KappaPoly:
    """Coefficient (i, j) of e * f2 without forming the full product."""
    total = KappaPoly()
    for (i2, j2), p in f2.items():
        if i2 > i or j2 > j:
            continue
        cell = e.cells.get((i - i2, j - j2))
        if cell is not None:
            total = total + cell * p
    return total


def _second_factor(
    g: int, b: int, q: QTable, n_x: int, n_u: int
) -> dict[tuple[int, int], KappaPoly]:
    """kappa_{b-1} - 2 sum_{a>=0} kappa_{a+b} x^(a+1) sum_{j<=a} q[a][j] u^(j+1)."""
    f2: dict[tuple[int, int], KappaPoly] = {}
    lead = _kappa_symbol(b - 1, g)
    if not lead.is_zero():
        f2[(0, 0)] = lead
    for a2 in range(0, n_x):
        for j in range(0, min(a2, n_u - 1) + 1):
            qv = q.get(a2, j)
            if not qv:
                continue
            f2[(a2 + 1, j + 1)] = _kappa_symbol(a2 + b, g, coeff=Fraction(-2 * qv))
    return f2


def extract_relation(
    g: int,
    d: int,
    b: int,
    q: QTable,
    c: CTable,
    exp_series: PolySeries | None = None,
    general_b0: bool = False,
) -> TautRelation:
    """Extract the (g, d, b) relation from the exponential generating series.

    For b = 0 the plain exponential is read at (x^(g+1-2d), u^d); for
    b >= 1 (or with general_b0, the b = 0 instance of the same formula)
    the exponential times the second factor is read at (x^(g+2-2d), u^d).
    The zero polynomial is a legal, degenerate result.

    ``exp_series`` may carry a precomputed exponential of sufficient
    orders so grids of extractions can share one.
    """
    if g < 2 or d < 2 or b < 0:
        raise ValueError("need g >= 2, d >= 2, b >= 0")
    simple = b == 0 and not general_b0
    a_exp = (g + 1 - 2 * d) if simple else (g + 2 - 2 * d)
    if a_exp < 0:
        raise ValueError(f"relation out of range for (g={g}, d={d}, b={b})")
    if exp_series is None:
        exp_series = kappa_exponential(c, a_exp, d)
    elif not exp_series.covers(a_exp, d):
        raise ValueError(f"shared exponential orders {exp_series.orders} too small")
    if simple:
        poly = exp_series.coeff(a_exp, d)
    else:
        f2 = _second_factor(g, b, q, a_exp, d)
        poly = _convolve_cell(exp_series, f2, a_exp, d)
    return TautRelation(g=g, d=d, b=b, degree=g + 1 + b - 2 * d, poly=poly)


def extract_psi_relation(
    g: int, d: int, q: QTable, c: CTable, exp_series: PolySeries | None = None
) -> PsiRelation:
    """Pointed-curve relation with psi (generator 0) kept symbolic."""
    if g < 2 or d < 2:
        raise ValueError("need g >= 2, d >= 2")
    a_exp = g + 2 - 2 * d
    if a_exp < 0:
        raise ValueError(f"relation out of range for (g={g}, d={d})")
    if exp_series is None:
        exp_series = kappa_exponential(c, a_exp, d)
    elif not exp_series.covers(a_exp, d):
        raise ValueError(f"shared exponential orders {exp_series.orders} too small")
    f2: dict[tuple[int, int], KappaPoly] = {(0, 0): KappaPoly.scalar(_ONE)}
    for a2 in range(0, a_exp):
        for j in range(0, min(a2, d - 1) + 1):
            qv = q.get(a2, j)
            if not qv:
                continue
            f2[(a2 + 1, j + 1)] = KappaPoly.gen(
                0, exponent=a2 + 1, coeff=Fraction(-2 * qv)
            )
    poly = _convolve_cell(exp_series, f2, a_exp, d)
    return PsiRelation(g=g, d=d, degree=a_exp, poly=poly)


def extract_relation_from_ode(g: int, d: int, b: int, alpha: AlphaTable) -> TautRelation:
    """Extract the (g, d, b) relation through the ODE coefficient table.

    This is an independent pipeline in the (t, w) variables: the
    push-forward dictionary turns the ODE solution into
    sum t^(a-1) kappa_{a-1} alpha[a][j] w^j (the a = 1 slice is the
    scalar (2g-2) sum_j alpha[1][j] w^j), and the companion factor into
    kappa_{b-1} + 2 sum t^a kappa_{a+b-1} j alpha[a][j] w^j.  Results
    agree with extract_relation up to the sign (-1)^d coming from the
    change of variables between the two coordinate systems.
    """
    if g < 2 or d < 2 or b < 0:
        raise ValueError("need g >= 2, d >= 2, b >= 0")
    t_exp = (g + 1 - 2 * d) if b == 0 else (g + 2 - 2 * d)
    if t_exp < 0:
        raise ValueError(f"relation out of range for (g={g}, d={d}, b={b})")
    n_x, n_w = alpha.orders
    if n_x < t_exp + 1 or n_w < d:
        raise ValueError(f"alpha table sized {alpha.orders}, need ({t_exp + 1}, {d})")

    kappa0 = Fraction(2 * g - 2)
    f0 = UniSeries("w", d, [kappa0 * alpha.get(1, j) for j in range(d + 1)])
    slices: dict[int, dict[int, KappaPoly]] = {}
    for a in range(2, t_exp + 2):
        row = {}
        for j in range(0, d + 1):
            av = alpha.get(a, j)
            if av:
                row[j] = KappaPoly.gen(a - 1, coeff=av)
        if row:
            slices[a - 1] = row
    e_rest = _exp_from_slices(slices, t_exp, d)
    ef0 = f0.exp()
    cells: dict[tuple[int, int], KappaPoly] = {}
    for (i, j2), p in e_rest.items():
        for j1 in range(0, d - j2 + 1):
            v = ef0.coeffs[j1]
            if v:
                key = (i, j1 + j2)
                prev = cells.get(key)
                cells[key] = p.scale(v) if prev is None else prev + p.scale(v)
    e_full = PolySeries(("t", "w"), (t_exp, d), cells)

    if b == 0:
        poly = e_full.coeff(t_exp, d)
    else:
        f2: dict[tuple[int, int], KappaPoly] = {}
        lead = _kappa_symbol(b - 1, g)
        if not lead.is_zero():
            f2[(0, 0)] = lead
        for a2 in range(0, t_exp + 1):
            for j in range(1, d + 1):
                av = alpha.get(a2, j)
                if not av:
                    continue
                term = _kappa_symbol(a2 + b - 1, g, coeff=2 * j * av)
                if term.is_zero():
                    continue
                key = (a2, j)
                prev = f2.get(key)
                f2[key] = term if prev is None else prev + term
        poly = _convolve_cell(e_full, f2, t_exp, d)
    return TautRelation(g=g, d=d, b=b, degree=g + 1 + b - 2 * d, poly=poly)


def extract_diagonal_relation(g: int, b: int, a: int, c: CTable) -> DiagonalRelation:
    """Relation from the diagonal generating series, at its admissible degrees.

    For b = 0 the degree a must equal g/3 + 1 or (g+1)/3; for b >= 1 it
    must equal (g-1)/3 + b or (g+1)/3 + b.  The polynomial is the t^a
    coefficient of exp(-sum c[j][j] kappa_j t^j) times, for b >= 1,
    (kappa_{b-1} t^(b-1) - 2 kappa_b t^b - 12 sum_j j c[j][j] kappa_{j+b} t^(j+b)).
    """
    if g < 2 or b < 0 or a < 1:
        raise ValueError("need g >= 2, b >= 0, a >= 1")
    if b == 0:
        if 3 * a != g + 3 and 3 * a != g + 1:
            raise ValueError(
                f"inadmissible (g={g}, b=0, a={a}): need a = g/3+1 or (g+1)/3"
            )
    else:
        if 3 * (a - b) != g - 1 and 3 * (a - b) != g + 1:
            raise ValueError(
                f"inadmissible (g={g}, b={b}, a={a}): need a = (g-1)/3+b or (g+1)/3+b"
            )
    if c.k_max < a:
        raise ValueError(f"c table sized {c.k_max}, need {a}")
    slices = {
        j: {0: KappaPoly.gen(j, coeff=-c.get(j, j))}
        for j in range(1, a + 1)
        if c.get(j, j)
    }
    e = _exp_from_slices(slices, a, 0)
    if b == 0:
        poly = e.get((a, 0), KappaPoly())
    else:
        f2: dict[int, KappaPoly] = {}
        lead = _kappa_symbol(b - 1, g)
        if not lead.is_zero():
            f2[b - 1] = lead
        if b <= a:
            f2[b] = f2.get(b, KappaPoly()) + KappaPoly.gen(b, coeff=Fraction(-2))
        for j in range(1, a - b + 1):
            cv = c.get(j, j)
            if cv:
                f2[j + b] = KappaPoly.gen(j + b, coeff=-12 * j * cv)
        poly = KappaPoly()
        for i, p in f2.items():
            cell = e.get((a - i, 0))
            if cell is not None:
                poly = poly + cell * p
    return DiagonalRelation(g=g, b=b, a=a, poly=poly)


def relation_json(rel: TautRelation | PsiRelation) -> str:
    """Canonical one-line JSON for a relation; byte-stable across runs."""
    if isinstance(rel, PsiRelation):
        obj = {
            "g": rel.g,
            "d": rel.d,
            "psi": True,
            "degree": rel.degree,
            "terms": terms_json(rel.poly),
        }
    else:
        obj = {
            "g": rel.g,
            "d": rel.d,
            "b": rel.b,
            "degree": rel.degree,
            "terms": terms_json(rel.poly),
        }
    return json.dumps(obj, separators=(",", ":"))
