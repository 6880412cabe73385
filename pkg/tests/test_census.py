import itertools
from fractions import Fraction

import pytest

from singercensus.numtheory import CeilingExceeded
from singercensus import census as cs
from singercensus.gf import (
    GFElem,
    GFPoly,
    build_field_tower,
    canonical_field,
    is_irreducible,
    monic_polys,
    poly_gcd,
    polys_below_degree,
    roots_in_top,
)
from singercensus.linalg import SingularMatrix, matrix_of_mult_in_basis

F2 = canonical_field(2, 1)
F3 = canonical_field(3, 1)


# -- closed forms ----------------------------------------------------------------


def test_conjectured_fiber_size():
    assert cs.conjectured_fiber_size(2, 1, 4) == 1
    assert cs.conjectured_fiber_size(5, 1, 7) == 1
    assert cs.conjectured_fiber_size(2, 2, 2) == 8
    assert cs.conjectured_fiber_size(2, 3, 2) == 1536


def test_m2_fiber_closed_form_identity():
    # the general expression collapses to q^(2n-1) (q-1) at m = 2
    for q in (2, 3, 4, 5):
        for n in (1, 2, 3, 4):
            assert cs.conjectured_fiber_size(q, 2, n) == q ** (2 * n - 1) * (q - 1)


def test_conjectured_singer_count():
    assert cs.conjectured_singer_count(2, 2, 2) == 16
    assert cs.conjectured_singer_count(2, 1, 4) == 2
    assert cs.conjectured_singer_count(3, 2, 1) == 12


def test_gaussian_binomial_matches_subspace_enumeration():
    # oracle: count distinct row spaces of all 2x4 rank-2 matrices over F_2
    seen = set()
    for rows in itertools.product(range(16), repeat=2):
        spans = set()
        for a, b in itertools.product(range(2), repeat=2):
            v = 0
            if a:
                v ^= rows[0]
            if b:
                v ^= rows[1]
            spans.add(v)
        if len(spans) == 4:
            seen.add(frozenset(spans))
    assert cs.gaussian_binomial(4, 2, 2) == len(seen) == 35


def test_chunk_bounds_cover_range():
    for total in (0, 1, 7, 100):
        for workers in (1, 2, 3, 8, 200):
            bounds = cs._chunk_bounds(total, workers)
            covered = []
            for lo, hi in bounds:
                covered.extend(range(lo, hi))
            assert covered == list(range(total))


# -- fibers -----------------------------------------------------------------------


def test_fibers_m1():
    rep = cs.enumerate_fibers(2, 1, 4)
    assert rep.formula_fiber == 1
    assert all(e.fiber_size == 1 for e in rep.per_poly.values())
    assert rep.total_bci == 3 and rep.total_bcs == 2 and rep.all_match


def test_fibers_222():
    rep = cs.enumerate_fibers(2, 2, 2)
    assert len(rep.per_poly) == 3
    assert all(e.fiber_size == 8 for e in rep.per_poly.values())
    assert rep.total_bci == 24 and rep.total_bcs == 16
    assert rep.fibers_uniform and rep.all_match
    # P is contained in I: primitive entries still count toward the bci total
    prim = [k for k, e in rep.per_poly.items() if e.classification == "primitive"]
    assert len(prim) == 2


def test_fibers_n1():
    rep = cs.enumerate_fibers(2, 2, 1)
    assert rep.formula_fiber == 2 and rep.all_match
    rep = cs.enumerate_fibers(3, 2, 1)
    assert rep.formula_fiber == 6 and rep.total_bcs == 12 and rep.all_match


def test_fibers_ceiling():
    with pytest.raises(CeilingExceeded):
        cs.enumerate_fibers(2, 2, 2, ceiling=10)


def test_fibers_workers_deterministic():
    one = cs.enumerate_fibers(2, 2, 2, workers=1)
    three = cs.enumerate_fibers(2, 2, 2, workers=3)
    assert one == three


def test_fibers_rejects_non_prime_power():
    with pytest.raises(ValueError):
        cs.enumerate_fibers(6, 1, 2)


def test_singer_criteria_never_disagree():
    # runs the order criterion against the primitivity criterion per matrix
    for q, m, n in ((2, 2, 2), (2, 1, 3), (3, 2, 1), (2, 2, 1)):
        count = cs.cross_check_singer_criteria(q, m, n)
        assert count == cs.enumerate_fibers(q, m, n).total_bcs


def test_sampled_fibers_cover_exact_value():
    exact = cs.enumerate_fibers(2, 2, 2)
    est = cs.sample_fibers(2, 2, 2, 20000, seed=0)
    assert est.irreducible.ci_low <= exact.total_bci <= est.irreducible.ci_high
    assert est.primitive.ci_low <= exact.total_bcs <= est.primitive.ci_high
    again = cs.sample_fibers(2, 2, 2, 20000, seed=0)
    assert again == est  # seeded determinism


# -- ordered bases and splitting ---------------------------------------------------


@pytest.fixture(scope="module")
def tower222():
    return build_field_tower(2, 1, 2, 2)


@pytest.fixture(scope="module")
def alpha222(tower222):
    f = GFPoly(F2, [1, 1, 0, 0, 1])
    return GFElem(tower222.top, roots_in_top(tower222, f)[0])


def test_count_bases_222(tower222, alpha222):
    assert cs.count_ordered_bases_N(tower222, alpha222) == 120


def test_count_bases_m1():
    t = build_field_tower(2, 1, 1, 2)
    assert cs.count_ordered_bases_N(t, cs.find_generator(t)) == 3


def test_count_bases_rejects_non_generator(tower222):
    with pytest.raises(ValueError, match="not a generator"):
        cs.count_ordered_bases_N(tower222, GFElem(tower222.top, 1))


def test_count_bases_workers_deterministic(tower222, alpha222):
    a = cs.count_ordered_bases_N(tower222, alpha222, workers=1)
    b = cs.count_ordered_bases_N(tower222, alpha222, workers=4)
    assert a == b == 120


def test_fiber_via_N(tower222):
    assert cs.fiber_via_N(tower222, GFPoly(F2, [1, 1, 0, 0, 1])) == 8
    assert cs.fiber_via_N(tower222, GFPoly(F2, [1, 1, 1, 1, 1])) == 8
    with pytest.raises(ValueError):
        cs.fiber_via_N(tower222, GFPoly(F2, [1, 0, 1]))


def test_fiber_via_N_m1():
    t = build_field_tower(2, 1, 1, 4)
    assert cs.fiber_via_N(t, GFPoly(F2, [1, 1, 0, 0, 1])) == 1


def test_basis_grouping_classes_have_centralizer_size(tower222, alpha222):
    # ordered bases grouped by the matrix they produce: classes of size q^4 - 1
    t, alpha = tower222, alpha222
    mul = t.top.mul
    groups = {}
    for v1 in range(1, 16):
        for v2 in range(1, 16):
            family = [v1, v2, mul(alpha.enc, v1), mul(alpha.enc, v2)]
            try:
                mat = matrix_of_mult_in_basis(t, alpha, family)
            except SingularMatrix:
                continue
            groups[mat] = groups.get(mat, 0) + 1
    assert sum(groups.values()) == 120
    assert set(groups.values()) == {15}
    assert len(groups) == 8


def test_splitting_subspaces_222(tower222, alpha222):
    subs = cs.enumerate_splitting_subspaces(tower222, alpha222)
    assert len(subs) == 20
    counts = cs.pointed_splitting_counts(tower222, alpha222, subspaces=subs)
    assert len(counts) == 15 and set(counts.values()) == {4}


def test_splitting_m1_and_n1():
    t = build_field_tower(2, 1, 1, 2)
    assert len(cs.enumerate_splitting_subspaces(t, cs.find_generator(t))) == 3
    counts = cs.pointed_splitting_counts(t, cs.find_generator(t))
    assert set(counts.values()) == {1}  # the span of x is the only one through x
    t = build_field_tower(2, 1, 2, 1)
    assert len(cs.enumerate_splitting_subspaces(t, cs.find_generator(t))) == 1


def test_pointed_rejects_zero(tower222, alpha222):
    with pytest.raises(ValueError):
        cs.pointed_splitting_counts(tower222, alpha222, base_points=[0, 1])


def test_scalar_multiples_of_subspaces_are_splitting(tower222, alpha222):
    # part (i) closure, checked directly against the subspace list
    subs = cs.enumerate_splitting_subspaces(tower222, alpha222)
    as_sets = {frozenset(cs._subspace_members(tower222, b)) for b in subs}
    mul = tower222.top.mul
    for beta in range(1, 16):
        for basis in subs:
            scaled = frozenset(mul(beta, w) for w in cs._subspace_members(tower222, basis))
            assert scaled in as_sets


def test_verify_elemsplit_222(tower222, alpha222):
    rep = cs.verify_elemsplit(tower222, alpha222)
    assert rep.passed
    assert rep.s_count == 20 and rep.pointed_common == 4
    assert rep.closure_exhaustive
    # part (iv): 20 * 3 == 4 * 15
    assert rep.s_count * (2**2 - 1) == rep.pointed_common * (2**4 - 1) == 60


def test_split_census_222(tower222):
    sc = cs.split_census(tower222)
    assert sc.n_enumerated == 120
    assert sc.s_enumerated == 20 == sc.s_via_n
    assert sc.fiber_via_n == 8
    assert sc.n_divisible_by_unit_group and sc.n_divisible_by_gl
    assert sc.pointed_all_equal and sc.identity_iv_ok
    assert sc.matches_conjectures


def test_split_census_m2_closed_form():
    # N = q^(2n-1) (q-1) (q^(2n) - 1) for m = 2
    for p, n in ((2, 2), (3, 2)):
        t = build_field_tower(p, 1, 2, n)
        sc = cs.split_census(t)
        q = p
        assert sc.n_enumerated == q ** (2 * n - 1) * (q - 1) * (q ** (2 * n) - 1)


# -- coprime counts ----------------------------------------------------------------


def brute_coprime_monic(q, r, n):
    field = canonical_field(q, 1) if q in (2, 3) else None
    pool = list(monic_polys(field, n))
    count = 0
    for tup in itertools.product(pool, repeat=r):
        g = tup[0]
        for f in tup[1:]:
            g = poly_gcd(g, f)
        if g.degree == 0:
            count += 1
    return count


def test_coprime_monic_examples():
    c = cs.coprime_monic_count(2, 2, 1)
    assert c.monic_coprime_count == c.monic_formula == 2
    c = cs.coprime_monic_count(2, 2, 2)
    assert c.monic_coprime_count == c.monic_formula == 8
    c = cs.coprime_monic_count(3, 2, 1)
    assert c.monic_coprime_count == c.monic_formula == 6


def test_coprime_all_examples():
    c = cs.coprime_all_count(2, 2, 1)
    assert c.all_coprime_count == c.all_formula == 3
    c = cs.coprime_all_count(2, 2, 2)
    assert c.all_coprime_count == c.all_formula == 9
    c = cs.coprime_all_count(3, 2, 1)
    assert c.all_coprime_count == c.all_formula == 8


def test_zero_tuple_conventions():
    # only nonzero constants are coprime to the zero polynomial
    zero = GFPoly.zero(F2)
    one = GFPoly.one(F2)
    x = GFPoly.x(F2)
    assert cs._tuple_coprime([zero, one])
    assert not cs._tuple_coprime([zero, zero])
    assert not cs._tuple_coprime([zero, x])
    assert cs._tuple_coprime([x, one, zero])


def test_sigma_examples():
    c = cs.sigma_count(2, 1)
    assert c.sigma_count == c.sigma_formula == 1
    c = cs.sigma_count(2, 2)
    assert c.sigma_count == c.sigma_formula == 7
    c = cs.sigma_count(3, 2)
    assert c.sigma_count == c.sigma_formula == 26
    assert c.sigma1_count == c.sigma_count * (3 - 1) == c.sigma1_formula


def test_coprime_census_merges():
    merged = cs.coprime_census(2, 2, 2)
    assert merged.monic_coprime_count == 8
    assert merged.all_coprime_count == 9
    assert merged.sigma_count == 7
    merged = cs.coprime_census(2, 3, 1)
    assert merged.sigma_count is None


# -- Toeplitz ----------------------------------------------------------------------


def test_toeplitz_shape():
    rows = cs._toeplitz_rows([1, 2, 3, 4, 5], 3)
    assert rows == [[3, 2, 1], [4, 3, 2], [5, 4, 3]]


def test_toeplitz_census_examples():
    tc = cs.toeplitz_census(2, 1)
    assert tc.nonsingular_count == tc.formula == 1
    tc = cs.toeplitz_census(2, 2)
    assert tc.nonsingular_count == tc.formula == 4
    tc = cs.toeplitz_census(3, 2)
    assert tc.nonsingular_count == tc.formula == 18


def test_trinomial_route_22():
    route = cs.toeplitz_via_trinomial(2, 2)
    assert route.found and route.poly_text == "1,1,0,0,1"
    assert route.basis_count == route.expected_basis_count == 8
    assert route.tgl_from_route == 4 and route.division_exact
    assert route.structure_holds and route.equivalence_holds


def test_trinomial_route_binomial_case():
    route = cs.toeplitz_via_trinomial(3, 1)
    assert route.found and (route.a, route.b) == (0, 2)
    assert route.tgl_from_route == 2


def test_trinomial_route_absent():
    # no irreducible X^8 - aX - b over F_2
    route = cs.toeplitz_via_trinomial(2, 4)
    assert not route.found


def test_trinomial_route_matches_census_when_found():
    for q in (2, 3):
        for n in (1, 2, 3):
            route = cs.toeplitz_via_trinomial(q, n)
            if route.found:
                assert route.tgl_from_route == cs.toeplitz_census(q, n).nonsingular_count


# -- binomial criterion and the odd-q search -----------------------------------------


def test_binomial_examples():
    chk = cs.binomial_irreducibility(3, 2, 2)
    assert chk.criterion and chk.direct
    chk = cs.binomial_irreducibility(3, 2, 1)
    assert not chk.criterion and not chk.direct
    chk = cs.binomial_irreducibility(5, 4, 2)
    assert chk.criterion and chk.direct
    with pytest.raises(ValueError):
        cs.binomial_irreducibility(3, 2, 0)
    with pytest.raises(ValueError):
        cs.binomial_irreducibility(3, 1, 1)


def test_fermat_search_examples():
    ws = cs.fermat_condition_search(7, 2)
    assert [(w.n, w.b) for w in ws] == [(3, 3), (9, 3)]
    assert all(w.criterion_ok for w in ws)
    assert ws[0].direct_ok is True
    ws = cs.fermat_condition_search(11, 1)
    assert (ws[0].n, ws[0].b) == (5, 2) and ws[0].direct_ok


def test_fermat_search_rejections():
    with pytest.raises(ValueError):
        cs.fermat_condition_search(3, 1)  # Fermat prime
    with pytest.raises(ValueError):
        cs.fermat_condition_search(9, 1)  # 9 - 1 is a power of two
    with pytest.raises(ValueError):
        cs.fermat_condition_search(8, 1)  # even characteristic
    with pytest.raises(ValueError):
        cs.fermat_condition_search(5, 1)  # Fermat prime


def test_fermat_search_skips_direct_test_when_large():
    ws = cs.fermat_condition_search(7, 2, direct_degree_limit=10)
    assert ws[0].direct_ok is True  # degree 6 is under the limit
    assert ws[1].direct_ok is None  # degree 18 is not
    ws = cs.fermat_condition_search(7, 2)
    assert ws[1].direct_ok is True  # the default limit covers degree 18


# -- bounds ------------------------------------------------------------------------


def test_bounds_222():
    bt = cs.bounds_check(2, 2, 2, [8, 8, 8])
    assert bt.lower == Fraction(16, 15)
    assert bt.upper == 14
    assert bt.lower_ok and bt.upper_ok
    assert bt.star_le_lower is None  # q = 2 is outside the comparison


def test_bounds_322():
    bt = cs.bounds_check(3, 2, 2, [54])
    assert bt.upper == 78
    assert bt.lower == Fraction(82 * 81, 160)
    assert bt.lower_ok and bt.upper_ok and bt.star_le_lower


def test_bounds_m1_degenerate():
    bt = cs.bounds_check(2, 1, 4, [1, 1])
    assert bt.upper == 1 and bt.upper_ok and bt.lower_ok


def test_bounds_flag_violations():
    bt = cs.bounds_check(2, 2, 2, [15])
    assert not bt.upper_ok  # 15 > 14 would contradict the upper bound


# -- scans and the nilpotent bridge ---------------------------------------------------


def test_count_polys_by_scan():
    assert cs.count_polys_by_scan(2, 4) == (3, 2)
    assert cs.count_polys_by_scan(3, 2) == (3, 2)


def test_nilpotent_bridge_numbers_agree():
    from singercensus.linalg import nilpotent_count

    for q, m in ((2, 2), (3, 2), (2, 3)):
        nc = nilpotent_count(q, m)
        assert nc.brute_force == nc.formula == cs.conjectured_pointed_count(q, m, 2)


def test_sampled_count_helper():
    est = cs.sampled_count(1000, lambda k: k < 250, 5000, seed=1)
    assert est.ci_low <= 250 <= est.ci_high
    assert est.space == 1000 and est.sample_size == 5000
