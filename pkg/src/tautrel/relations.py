"""Generator-elimination procedure, nonvanishing scan, and independence checks.

For each genus g the classes kappa_1..kappa_{floor(g/3)} generate once
every kappa_a with floor(g/3) < a <= g-2 is rewritten in lower-index
classes.  The selection of which extracted relation to solve for each a
follows the constructive recipe: prefer a b >= 2 relation whose leading
coefficient is a positive integer from the q triangle; where no integer
d exists in the admissible interval, fall back to the parity-matched
b in {0, 1} relation, whose leading coefficient the scan checks to be
nonzero for every a up to 60.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .coeffs import CTable, QTable
from .tautring import KappaPoly, Mono, extract_relation, kappa_exponential

__all__ = [
    "FaberChoice",
    "GeneratorExpression",
    "FaberConsistencyError",
    "faber_choose",
    "faber_solve",
    "ScanReport",
    "scan_nonvanishing",
    "IndependenceReport",
    "independence_report",
    "weighted_monomials",
    "rank_exact",
]


class FaberConsistencyError(RuntimeError):
    """A leading coefficient that must be nonzero vanished, or a solved
    expression failed its back-substitution check."""


@dataclass(frozen=True)
class FaberChoice:
    """Chosen (d, b) for solving kappa_a in genus g."""

    g: int
    a: int
    d: int
    b: int
    case_tag: str  # "b_large", "b0" or "b1"


def faber_choose(g: int, a: int) -> FaberChoice:
    """Pick the relation used to express kappa_a, deterministically.

    Requires floor(g/3)+1 <= a <= g-2.  When 3a >= g+5 and the interval
    [(g+3-a)/2, (g+2)/3] contains an integer, the smallest such d is
    taken with b = a+2d-g-1 >= 2.  Otherwise b is fixed by the parity of
    a-g-1 to 0 or 1 and d = (g+1+b-a)/2.
    """
    if g < 2:
        raise ValueError("need g >= 2")
    lo_a = g // 3 + 1
    if not lo_a <= a <= g - 2:
        raise ValueError(f"a={a} outside generation range [{lo_a}, {g - 2}] for g={g}")
    if 3 * a >= g + 5:
        d_lo = (g + 4 - a) // 2  # ceil((g+3-a)/2)
        d_hi = (g + 2) // 3
        if d_lo <= d_hi:
            d = d_lo
            b = a + 2 * d - g - 1
            return FaberChoice(g=g, a=a, d=d, b=b, case_tag="b_large")
    b = (a - g - 1) % 2
    d2 = g + 1 + b - a
    d = d2 // 2
    if d2 % 2 or d < 2:
        raise ValueError(f"no valid (d, b) choice for (g={g}, a={a})")
    return FaberChoice(g=g, a=a, d=d, b=b, case_tag=f"b{b}")


@dataclass(frozen=True)
class GeneratorExpression:
    """kappa_a = rhs, with rhs free of any kappa_j for j >= a."""

    g: int
    a: int
    rhs: KappaPoly


def faber_solve(
    g: int, q: QTable, c: CTable, rewrite: bool = True
) -> list[GeneratorExpression]:
    """Express every kappa_a, floor(g/3) < a <= g-2, in lower classes.

    With rewrite=True each right-hand side is fully reduced to
    kappa_1..kappa_{floor(g/3)} by back-substitution, and the reduced
    map is substituted into each source relation to confirm it vanishes
    exactly.  A zero leading coefficient is a fatal consistency failure,
    not a legal outcome.
    """
    if g < 2:
        raise ValueError("need g >= 2")
    m = g // 3
    targets = list(range(m + 1, g - 1))
    if not targets:
        return []
    choices = [faber_choose(g, a) for a in targets]
    n_x = max((ch.g + 1 - 2 * ch.d) if ch.b == 0 else (ch.g + 2 - 2 * ch.d) for ch in choices)
    n_u = max(ch.d for ch in choices)
    shared = kappa_exponential(c, n_x, n_u)

    reduced: dict[int, KappaPoly] = {}
    power_cache: dict = {}
    out: list[GeneratorExpression] = []
    for ch in choices:
        rel = extract_relation(g, ch.d, ch.b, q, c, exp_series=shared)
        lam = rel.poly.gen_coeff(ch.a)
        if lam == 0:
            raise FaberConsistencyError(
                f"zero leading coefficient at (g={g}, a={ch.a}, d={ch.d}, b={ch.b})"
            )
        rest = KappaPoly(
            {mo: v for mo, v in rel.poly.terms.items() if mo != ((ch.a, 1),)}
        )
        raw = rest.scale(Fraction(-1) / lam)
        red = raw.substitute(reduced, _power_cache=power_cache)
        if red.max_gen() > m:
            raise FaberConsistencyError(
                f"reduction left a high generator at (g={g}, a={ch.a})"
            )
        full = dict(reduced)
        full[ch.a] = red
        if not rel.poly.substitute(full, _power_cache=power_cache).is_zero():
            raise FaberConsistencyError(
                f"back-substitution nonzero at (g={g}, a={ch.a}, d={ch.d}, b={ch.b})"
            )
        reduced[ch.a] = red
        out.append(GeneratorExpression(g=g, a=ch.a, rhs=red if rewrite else raw))
    return out


@dataclass
class ScanReport:
    """Nonvanishing scan outcome over 1 <= d <= a <= a_max."""

    a_max: int
    checked: int = 0
    failures: list[dict] = field(default_factory=list)
    remark_formula_mismatches: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_obj(self) -> dict:
        return {
            "checked": self.checked,
            "failures": self.failures,
            "remark_formula_mismatches": self.remark_formula_mismatches,
        }


def scan_nonvanishing(
    a_max: int, q: QTable, c: CTable, sample_max: int = 8
) -> ScanReport:
    """Check the two fallback leading coefficients never vanish.

    For every 1 <= d <= a <= a_max: c[a][d] != 0 (the b = 0 pairing,
    genus a+2d-1) and (2g-2)*c[a][d] + 2*q[a-1][d-1] != 0 with
    g = a+2d-2 (the b = 1 pairing).  On the sub-grid a <= sample_max the
    b = 1 coefficient is recomputed from a full extraction.  Cells where
    the alternative published formula (2a-4d-6)*c[a][d] + 2*q[a-1][d-1]
    disagrees with the extraction-based value are reported separately.
    """
    if a_max < 1:
        raise ValueError("a_max must be >= 1")
    if q.k_max < a_max or c.k_max < a_max:
        raise ValueError("tables too small for the requested scan")
    rep = ScanReport(a_max)
    shared = None
    if sample_max >= 2:
        lim = min(sample_max, a_max)
        shared = kappa_exponential(c, lim, lim)
    for a in range(1, a_max + 1):
        for d in range(1, a + 1):
            cad = c.get(a, d)
            g1 = a + 2 * d - 2
            rep.checked += 1
            if cad == 0:
                rep.failures.append(
                    {"a": a, "d": d, "g": a + 2 * d - 1, "b": 0, "value": "0"}
                )
            coef_b1 = (2 * g1 - 2) * cad + 2 * q.get(a - 1, d - 1)
            rep.checked += 1
            if coef_b1 == 0:
                rep.failures.append(
                    {"a": a, "d": d, "g": g1, "b": 1, "value": "0"}
                )
            remark = (2 * a - 4 * d - 6) * cad + 2 * q.get(a - 1, d - 1)
            if remark != coef_b1:
                rep.remark_formula_mismatches.append(
                    {
                        "a": a,
                        "d": d,
                        "g": g1,
                        "b": 1,
                        "extraction": str(coef_b1),
                        "remark_formula": str(remark),
                    }
                )
            if shared is not None and a <= sample_max and d >= 2 and g1 >= 2:
                rel = extract_relation(g1, d, 1, q, c, exp_series=shared)
                rep.checked += 1
                if rel.poly.gen_coeff(a) != -coef_b1:
                    rep.failures.append(
                        {
                            "a": a,
                            "d": d,
                            "g": g1,
                            "b": 1,
                            "value": str(rel.poly.gen_coeff(a)),
                            "kind": "sample_extraction_mismatch",
                        }
                    )
    return rep


def weighted_monomials(degree: int) -> list[Mono]:
    """All kappa monomials of the given weighted degree (partitions of it)."""
    out: list[Mono] = []

    def rec(remaining: int, max_part: int, acc: list[int]) -> None:
        if remaining == 0:
            counts: dict[int, int] = {}
            for part in acc:
                counts[part] = counts.get(part, 0) + 1
            out.append(tuple(sorted(counts.items())))
            return
        for part in range(min(max_part, remaining), 0, -1):
            acc.append(part)
            rec(remaining - part, part, acc)
            acc.pop()

    rec(degree, degree, [])
    return out


def rank_exact(rows: list[list[Fraction]]) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination."""
    mat: list[list[int]] = []
    for row in rows:
        if not any(row):
            continue
        mult = lcm(*(v.denominator for v in row))
        mat.append([int(v * mult) for v in row])
    if not mat:
        return 0
    n_rows, n_cols = len(mat), len(mat[0])
    rank = 0
    prev = 1
    for col in range(n_cols):
        piv = None
        for r in range(rank, n_rows):
            if mat[r][col]:
                piv = r
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        p = mat[rank][col]
        for r in range(rank + 1, n_rows):
            for cc in range(col + 1, n_cols):
                mat[r][cc] = (p * mat[r][cc] - mat[r][col] * mat[rank][cc]) // prev
            mat[r][col] = 0
        prev = p
        rank += 1
        if rank == n_rows:
            break
    return rank


@dataclass
class IndependenceReport:
    """All relations of one weighted degree for one genus, with their rank."""

    g: int
    a: int
    pairs: list[dict] = field(default_factory=list)  # {d, b, nonzero}
    n_nonzero: int = 0
    rank: int = 0

    @property
    def ok(self) -> bool:
        return self.rank == self.n_nonzero


def independence_report(g: int, a: int, q: QTable, c: CTable) -> IndependenceReport:
    """Extract every (d, b) relation of degree a in genus g and rank them.

    Pairs satisfy d >= 2, b >= 0, a = g+1+b-2d and nonnegative extraction
    exponents; zero polynomials are listed but excluded from the matrix.
    """
    if g < 2 or a < 1:
        raise ValueError("need g >= 2 and a >= 1")
    rep = IndependenceReport(g=g, a=a)
    cells = []
    for d in range(2, (g + 2) // 2 + 1):
        b = a + 2 * d - g - 1
        if b < 0:
            continue
        x_exp = (g + 1 - 2 * d) if b == 0 else (g + 2 - 2 * d)
        if x_exp < 0:
            continue
        cells.append((d, b, x_exp))
    if not cells:
        return rep
    n_x = max(x for (_, _, x) in cells)
    n_u = max(d for (d, _, _) in cells)
    shared = kappa_exponential(c, n_x, n_u)
    polys: list[KappaPoly] = []
    for d, b, _ in cells:
        rel = extract_relation(g, d, b, q, c, exp_series=shared)
        nonzero = not rel.poly.is_zero()
        rep.pairs.append({"d": d, "b": b, "nonzero": nonzero})
        if nonzero:
            polys.append(rel.poly)
    rep.n_nonzero = len(polys)
    if polys:
        basis = weighted_monomials(a)
        rows = [[p.coeff(mono) for mono in basis] for p in polys]
        rep.rank = rank_exact(rows)
    return rep
