"""Exhaustive enumeration engines and closed-form comparators.

Every engine walks a finite search space in canonical encoding order and
tallies exact counts, which the caller compares against the corresponding
closed-form value.  Search spaces are bounded by an explicit ceiling; the
larger engines can split their index range into contiguous chunks and run
them on worker processes, merging per-chunk tallies by summation so results
are identical for every worker count.

A seeded sampling fallback estimates densities for spaces above the ceiling;
sampled figures are clearly separated from exact ones and never feed the
exact comparisons.
"""

from __future__ import annotations

import itertools
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .numtheory import (
    CeilingExceeded,
    count_irreducible_polys,
    count_primitive_polys,
    factorize,
    is_prime_power,
)
from .gf import (
    FieldTower,
    GFElem,
    GFPoly,
    build_field_tower,
    element_degree_over_base,
    element_order,
    field_for_order,
    is_irreducible,
    is_primitive,
    poly_gcd,
    poly_to_text,
    monic_polys,
    polys_below_degree,
    roots_in_top,
)
from .linalg import char_poly_coeffs, GFMatrix, is_singer_cycle, rank_gf2, rank_of_rows

DEFAULT_CEILING = 2**26


# -- closed forms ---------------------------------------------------------------


def conjectured_fiber_size(q: int, m: int, n: int) -> int:
    """q**(m(m-1)(n-1)) * prod_{i=1..m-1} (q**m - q**i); 1 when m = 1."""
    value = q ** (m * (m - 1) * (n - 1))
    for i in range(1, m):
        value *= q**m - q**i
    return value


def conjectured_singer_count(q: int, m: int, n: int) -> int:
    """Conjectured number of block companion matrices of maximal order:
    (number of primitive polynomials of degree mn) * fiber size."""
    return count_primitive_polys(q, m * n) * conjectured_fiber_size(q, m, n)


def conjectured_splitting_count(q: int, m: int, n: int) -> int:
    """(q**mn - 1)/(q**m - 1) * q**(m(m-1)(n-1))."""
    assert (q ** (m * n) - 1) % (q**m - 1) == 0
    return (q ** (m * n) - 1) // (q**m - 1) * q ** (m * (m - 1) * (n - 1))


def conjectured_pointed_count(q: int, m: int, n: int) -> int:
    return q ** (m * (m - 1) * (n - 1))


def gl_order(q: int, m: int) -> int:
    """|GL_m(F_q)| = prod_{i=0..m-1} (q**m - q**i)."""
    value = 1
    for i in range(m):
        value *= q**m - q**i
    return value


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    num = den = 1
    for i in range(k):
        num *= q**n - q**i
        den *= q**k - q**i
    assert num % den == 0
    return num // den


# -- shared helpers -------------------------------------------------------------


def _chunk_bounds(total: int, chunks: int) -> list[tuple[int, int]]:
    """Contiguous index ranges covering range(total), sizes differing by <= 1."""
    chunks = max(1, min(chunks, total)) if total else 1
    size, extra = divmod(total, chunks)
    bounds = []
    lo = 0
    for i in range(chunks):
        hi = lo + size + (1 if i < extra else 0)
        bounds.append((lo, hi))
        lo = hi
    return bounds


def _run_chunked(worker, args, total: int, workers: int):
    """Run worker(args + (lo, hi)) over deterministic chunks, yield results."""
    bounds = _chunk_bounds(total, workers)
    if workers <= 1 or len(bounds) == 1:
        return [worker(*args, lo, hi) for lo, hi in bounds]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(worker, *args, lo, hi) for lo, hi in bounds]
        return [f.result() for f in futures]


def _poly_enc_key(coeffs: tuple[int, ...]) -> tuple[int, ...]:
    # ascending canonical integer encoding == reversed-lex on coefficients
    return coeffs[::-1]


# -- fiber census ---------------------------------------------------------------


@dataclass(frozen=True)
class FiberEntry:
    classification: str  # "irreducible" or "primitive"
    fiber_size: int


@dataclass
class FiberReport:
    """Fibers of the characteristic map over block companion matrices."""

    q: int
    m: int
    n: int
    per_poly: dict[str, FiberEntry]
    total_bci: int
    total_bcs: int
    formula_fiber: int
    formula_bcs: int
    formula_bci: int
    expected_irreducible: int
    expected_primitive: int
    fibers_uniform: bool
    all_match: bool


def _companion_frame(m: int, n: int) -> list[list[int]]:
    d = m * n
    grid = [[0] * d for _ in range(d)]
    for bi in range(1, n):
        for r in range(m):
            grid[bi * m + r][(bi - 1) * m + r] = 1
    return grid


def _fill_blocks(grid, k: int, q: int, m: int, n: int) -> None:
    lastcol = (n - 1) * m
    v = k
    for bi in range(n):
        for r in range(m):
            row = grid[bi * m + r]
            for c in range(m):
                v, dig = divmod(v, q)
                row[lastcol + c] = dig


def _fiber_scan(q: int, m: int, n: int, lo: int, hi: int) -> dict:
    field = field_for_order(q)
    grid = _companion_frame(m, n)
    tally: dict[tuple[int, ...], int] = {}
    for k in range(lo, hi):
        _fill_blocks(grid, k, q, m, n)
        coeffs = char_poly_coeffs(field, grid)
        tally[coeffs] = tally.get(coeffs, 0) + 1
    return tally


def enumerate_fibers(
    q: int, m: int, n: int, *, ceiling: int = DEFAULT_CEILING, workers: int = 1
) -> FiberReport:
    """Walk all q**(m*m*n) block companion matrices and tally characteristic
    polynomials, then compare the irreducible fibers and totals against the
    closed forms."""
    if is_prime_power(q) is None:
        raise ValueError(f"{q} is not a prime power")
    total = q ** (m * m * n)
    if total > ceiling:
        raise CeilingExceeded(
            f"{total} block companion matrices exceed the exhaustive ceiling {ceiling}"
        )
    tally: dict[tuple[int, ...], int] = {}
    for part in _run_chunked(_fiber_scan, (q, m, n), total, workers):
        for coeffs, cnt in part.items():
            tally[coeffs] = tally.get(coeffs, 0) + cnt
    field = field_for_order(q)
    per_poly: dict[str, FiberEntry] = {}
    total_bci = total_bcs = 0
    sizes = []
    for coeffs in sorted(tally, key=_poly_enc_key):
        f = GFPoly(field, coeffs)
        if not is_irreducible(f):
            continue
        size = tally[coeffs]
        cls = "primitive" if is_primitive(f) else "irreducible"
        per_poly[poly_to_text(f)] = FiberEntry(cls, size)
        total_bci += size
        if cls == "primitive":
            total_bcs += size
        sizes.append(size)
    formula_fiber = conjectured_fiber_size(q, m, n)
    formula_bcs = conjectured_singer_count(q, m, n)
    expected_irr = count_irreducible_polys(q, m * n)
    expected_prim = count_primitive_polys(q, m * n)
    formula_bci = expected_irr * formula_fiber
    uniform = len(set(sizes)) <= 1
    n_prim = sum(1 for e in per_poly.values() if e.classification == "primitive")
    all_match = (
        all(s == formula_fiber for s in sizes)
        and total_bci == formula_bci
        and total_bcs == formula_bcs
        and len(per_poly) == expected_irr
        and n_prim == expected_prim
    )
    return FiberReport(
        q=q,
        m=m,
        n=n,
        per_poly=per_poly,
        total_bci=total_bci,
        total_bcs=total_bcs,
        formula_fiber=formula_fiber,
        formula_bcs=formula_bcs,
        formula_bci=formula_bci,
        expected_irreducible=expected_irr,
        expected_primitive=expected_prim,
        fibers_uniform=uniform,
        all_match=all_match,
    )


def cross_check_singer_criteria(q: int, m: int, n: int, ceiling: int = 2**16) -> int:
    """Run the maximal-order predicate on every assembly; it raises if the
    order criterion ever disagrees with the primitivity criterion.  Returns
    the number of maximal-order matrices found."""
    total = q ** (m * m * n)
    if total > ceiling:
        raise CeilingExceeded(f"{total} matrices exceed cross-check ceiling {ceiling}")
    field = field_for_order(q)
    grid = _companion_frame(m, n)
    count = 0
    for k in range(total):
        _fill_blocks(grid, k, q, m, n)
        if is_singer_cycle(GFMatrix(field, grid)):
            count += 1
    return count


@dataclass(frozen=True)
class SampledEstimate:
    """Seeded with-replacement sample of a counting predicate.

    The estimate scales the hit rate to the space size; the interval is a
    95% normal-approximation bound.  Sampled figures are informational only.
    """

    space: int
    sample_size: int
    seed: int
    hits: int
    estimate: int
    ci_low: int
    ci_high: int


def _interval(space: int, hits: int, size: int) -> tuple[int, int, int]:
    p = hits / size
    se = math.sqrt(p * (1 - p) / size)
    lo = max(0, math.floor((p - 1.96 * se) * space))
    hi = min(space, math.ceil((p + 1.96 * se) * space))
    return round(p * space), lo, hi


@dataclass(frozen=True)
class SampledFiberEstimate:
    q: int
    m: int
    n: int
    space: int
    sample_size: int
    seed: int
    irreducible: SampledEstimate
    primitive: SampledEstimate
    formula_bci: int
    formula_bcs: int


def sample_fibers(
    q: int, m: int, n: int, sample_size: int, seed: int
) -> SampledFiberEstimate:
    """Estimate the irreducible/primitive totals by uniform sampling."""
    field = field_for_order(q)
    total = q ** (m * m * n)
    rng = random.Random(seed)
    grid = _companion_frame(m, n)
    cache: dict[tuple[int, ...], tuple[bool, bool]] = {}
    irr_hits = prim_hits = 0
    for _ in range(sample_size):
        _fill_blocks(grid, rng.randrange(total), q, m, n)
        coeffs = char_poly_coeffs(field, grid)
        flags = cache.get(coeffs)
        if flags is None:
            f = GFPoly(field, coeffs)
            irr = is_irreducible(f)
            flags = (irr, irr and is_primitive(f))
            cache[coeffs] = flags
        irr_hits += flags[0]
        prim_hits += flags[1]
    est_i = SampledEstimate(total, sample_size, seed, irr_hits, *_interval(total, irr_hits, sample_size))
    est_p = SampledEstimate(total, sample_size, seed, prim_hits, *_interval(total, prim_hits, sample_size))
    return SampledFiberEstimate(
        q, m, n, total, sample_size, seed, est_i, est_p,
        count_irreducible_polys(q, m * n) * conjectured_fiber_size(q, m, n),
        conjectured_singer_count(q, m, n),
    )


# -- ordered bases and splitting subspaces --------------------------------------


class _AlphaChains:
    """Per-(tower, alpha) cache of coordinate rows for (v, a*v, ..., a^{n-1}v).

    Rows are bit-packed when the base field is F_2 so a basis test is a few
    integer xors.
    """

    def __init__(self, tower: FieldTower, alpha_enc: int):
        self.tower = tower
        self.alpha_enc = alpha_enc
        self.mn = tower.m * tower.n
        base = tower.base
        self.use_gf2 = base.p == 2 and base.degree == 1
        mul = tower.top.mul
        chains = []
        for v in range(tower.top.cardinality):
            rows = []
            acc = v
            for _ in range(tower.n):
                coords = tower.top_coords_over_base(acc)
                if self.use_gf2:
                    packed = 0
                    for idx, bit in enumerate(coords):
                        if bit:
                            packed |= 1 << idx
                    rows.append(packed)
                else:
                    rows.append(list(coords))
                acc = mul(acc, alpha_enc)
            chains.append(rows)
        self.chains = chains

    def spans_everything(self, vecs) -> bool:
        """True iff the vectors and their alpha-shifts form a full basis."""
        rows = []
        for v in vecs:
            rows.extend(self.chains[v])
        if self.use_gf2:
            return rank_gf2(rows) == self.mn
        return rank_of_rows(self.tower.base, rows) == self.mn


def _require_generator(tower: FieldTower, alpha: GFElem) -> int:
    if alpha.field != tower.top:
        raise ValueError("alpha must lie in the top field of the tower")
    if element_degree_over_base(tower, alpha.enc) != tower.m * tower.n:
        raise ValueError("alpha does not generate the top field: not a generator")
    return alpha.enc


def find_generator(tower: FieldTower) -> GFElem:
    """Least top element (by encoding) generating the top field over the base."""
    mn = tower.m * tower.n
    for enc in range(tower.top.cardinality):
        if element_degree_over_base(tower, enc) == mn:
            return GFElem(tower.top, enc)
    raise ArithmeticError("no generator found")  # pragma: no cover


def _bases_scan(p, e, m, n, alpha_enc, lo, hi) -> int:
    tower = build_field_tower(p, e, m, n)
    chains = _AlphaChains(tower, alpha_enc)
    top_card = tower.top.cardinality
    mn = m * n
    count = 0
    rows_of = chains.chains
    if chains.use_gf2:
        for k in range(lo, hi):
            v = k
            rows = []
            ok = True
            for _ in range(m):
                v, vi = divmod(v, top_card)
                if vi == 0:
                    ok = False
                    break
                rows.extend(rows_of[vi])
            if ok and rank_gf2(rows) == mn:
                count += 1
    else:
        base = tower.base
        for k in range(lo, hi):
            v = k
            rows = []
            ok = True
            for _ in range(m):
                v, vi = divmod(v, top_card)
                if vi == 0:
                    ok = False
                    break
                rows.extend(rows_of[vi])
            if ok and rank_of_rows(base, rows) == mn:
                count += 1
    return count


def count_ordered_bases_N(
    tower: FieldTower,
    alpha: GFElem,
    *,
    ceiling: int = DEFAULT_CEILING,
    workers: int = 1,
) -> int:
    """Number of m-tuples (v_1..v_m) of top elements whose alpha-shift family
    (v_1..v_m, a v_1.., ..., a^{n-1} v_m) is a base-field basis of the top."""
    alpha_enc = _require_generator(tower, alpha)
    total = tower.top.cardinality**tower.m
    if total > ceiling:
        raise CeilingExceeded(f"{total} tuples exceed ceiling {ceiling}")
    base = tower.base
    args = (base.p, base.degree, tower.m, tower.n, alpha_enc)
    return sum(_run_chunked(_bases_scan, args, total, workers))


def fiber_via_N(
    tower: FieldTower, f: GFPoly, *, ceiling: int = DEFAULT_CEILING, workers: int = 1
) -> int:
    """Fiber size of an irreducible f recovered as N / (q**mn - 1).

    The division must be exact; a remainder would contradict the grouping of
    ordered bases into classes of size q**mn - 1 and is reported as a bug.
    """
    m, n = tower.m, tower.n
    if f.degree != m * n or not is_irreducible(f):
        raise ValueError(f"need an irreducible polynomial of degree {m * n}")
    root = roots_in_top(tower, f)[0]
    big_n = count_ordered_bases_N(
        tower, GFElem(tower.top, root), ceiling=ceiling, workers=workers
    )
    unit_group = tower.q ** (m * n) - 1
    if big_n % unit_group:
        raise ArithmeticError(
            f"N = {big_n} not divisible by q**mn - 1 = {unit_group}; "
            "basis classes are broken (implementation bug)"
        )
    return big_n // unit_group


def enumerate_splitting_subspaces(
    tower: FieldTower,
    alpha: GFElem,
    *,
    ceiling: int = DEFAULT_CEILING,
    chains: _AlphaChains | None = None,
) -> list[tuple[int, ...]]:
    """All m-dimensional subspaces W with top = W + aW + ... + a^{n-1}W (direct).

    Subspaces are walked as reduced row-echelon representatives in
    lexicographic pivot order; returns the basis tuples (top encodings) of
    the splitting ones.
    """
    alpha_enc = _require_generator(tower, alpha)
    m, n = tower.m, tower.n
    mn = m * n
    q = tower.q
    n_subspaces = gaussian_binomial(mn, m, q)
    if n_subspaces > ceiling:
        raise CeilingExceeded(f"{n_subspaces} subspaces exceed ceiling {ceiling}")
    if chains is None:
        chains = _AlphaChains(tower, alpha_enc)
    out = []
    for pivots in itertools.combinations(range(mn), m):
        pivot_set = set(pivots)
        free_cells = [
            (i, j)
            for i in range(m)
            for j in range(pivots[i] + 1, mn)
            if j not in pivot_set
        ]
        for assignment in itertools.product(range(q), repeat=len(free_cells)):
            rows = [[0] * mn for _ in range(m)]
            for i in range(m):
                rows[i][pivots[i]] = 1
            for (i, j), v in zip(free_cells, assignment):
                rows[i][j] = v
            basis = tuple(tower.top_from_base_coords(r) for r in rows)
            if chains.spans_everything(basis):
                out.append(basis)
    return out


def _subspace_members(tower: FieldTower, basis: tuple[int, ...]) -> list[int]:
    """All q**m elements of the span of the basis (with repetition-free combos)."""
    top = tower.top
    embed = tower.embed_base_top
    q = tower.q
    members = []
    for combo in itertools.product(range(q), repeat=len(basis)):
        acc = 0
        for c, w in zip(combo, basis):
            if c:
                acc = top.add(acc, top.mul(embed[c], w))
        members.append(acc)
    return members


def pointed_splitting_counts(
    tower: FieldTower,
    alpha: GFElem,
    base_points=None,
    *,
    subspaces: list[tuple[int, ...]] | None = None,
    ceiling: int = DEFAULT_CEILING,
) -> dict[int, int]:
    """For each nonzero base point x, the number of splitting subspaces
    containing x."""
    if subspaces is None:
        subspaces = enumerate_splitting_subspaces(tower, alpha, ceiling=ceiling)
    if base_points is None:
        points = list(range(1, tower.top.cardinality))
    else:
        points = [x.enc if isinstance(x, GFElem) else int(x) for x in base_points]
        if any(x == 0 for x in points):
            raise ValueError("base points must be nonzero")
    counts = dict.fromkeys(points, 0)
    for basis in subspaces:
        for member in _subspace_members(tower, basis):
            if member and member in counts:
                counts[member] += 1
    return counts


@dataclass
class Prop56Report:
    """Pass/fail record of the elementary splitting-subspace facts."""

    q: int
    m: int
    n: int
    alpha_enc: int
    u_basis: tuple[int, ...]
    u_is_splitting: bool
    closure_ok: bool
    closure_pairs: int
    closure_exhaustive: bool
    xu_ok: bool
    pointed_all_equal: bool
    pointed_common: int | None
    identity_ok: bool
    s_count: int

    @property
    def passed(self) -> bool:
        return (
            self.u_is_splitting
            and self.closure_ok
            and self.xu_ok
            and self.pointed_all_equal
            and self.identity_ok
        )


def verify_elemsplit(
    tower: FieldTower,
    alpha: GFElem,
    *,
    ceiling: int = DEFAULT_CEILING,
    closure_limit: int = 500_000,
    seed: int = 0,
) -> Prop56Report:
    """Check the four elementary splitting-subspace facts:

    (i) the span U of (1, a^n, ..., a^((m-1)n)) is splitting, and scaling any
    splitting W by a nonzero beta stays splitting; (ii) x*U is a splitting
    subspace through x; (iii) all pointed counts agree; (iv) the double count
    |S|*(q**m - 1) = |S^x|*(q**mn - 1).
    """
    alpha_enc = _require_generator(tower, alpha)
    m, n = tower.m, tower.n
    top = tower.top
    chains = _AlphaChains(tower, alpha_enc)
    subspaces = enumerate_splitting_subspaces(
        tower, alpha, ceiling=ceiling, chains=chains
    )
    s_count = len(subspaces)
    u_basis = tuple(top.pow(alpha_enc, i * n) for i in range(m))
    u_splitting = chains.spans_everything(u_basis)

    nonzero = range(1, top.cardinality)
    pairs_total = (top.cardinality - 1) * s_count
    exhaustive = pairs_total <= closure_limit
    if exhaustive:
        pairs = ((b, w) for b in nonzero for w in subspaces)
        n_pairs = pairs_total
    else:
        rng = random.Random(seed)
        n_pairs = min(closure_limit, 4096)
        pairs = (
            (rng.randrange(1, top.cardinality), subspaces[rng.randrange(s_count)])
            for _ in range(n_pairs)
        )
    mul = top.mul
    closure_ok = all(
        chains.spans_everything([mul(b, w) for w in basis]) for b, basis in pairs
    )

    xu_ok = all(
        chains.spans_everything([mul(x, u) for u in u_basis]) for x in nonzero
    )

    counts = pointed_splitting_counts(
        tower, alpha, subspaces=subspaces, ceiling=ceiling
    )
    values = set(counts.values())
    pointed_equal = len(values) == 1
    common = values.pop() if pointed_equal else None
    identity_ok = pointed_equal and s_count * (tower.q**m - 1) == common * (
        tower.q ** (m * n) - 1
    )
    return Prop56Report(
        q=tower.q,
        m=m,
        n=n,
        alpha_enc=alpha_enc,
        u_basis=u_basis,
        u_is_splitting=u_splitting,
        closure_ok=closure_ok,
        closure_pairs=n_pairs,
        closure_exhaustive=exhaustive,
        xu_ok=xu_ok,
        pointed_all_equal=pointed_equal,
        pointed_common=common,
        identity_ok=identity_ok,
        s_count=s_count,
    )


@dataclass
class SplitCensus:
    """Enumerated N and S with the bridge identities spelled out."""

    q: int
    m: int
    n: int
    alpha: GFElem
    n_enumerated: int
    s_enumerated: int
    pointed_counts: dict[int, int]
    fiber_via_n: int
    s_via_n: int
    gl_order: int
    conjectured_fiber: int
    conjectured_s: int
    conjectured_pointed: int
    n_divisible_by_unit_group: bool
    n_divisible_by_gl: bool
    pointed_all_equal: bool
    identity_iv_ok: bool

    @property
    def matches_conjectures(self) -> bool:
        pointed_ok = self.pointed_all_equal and (
            next(iter(self.pointed_counts.values()), None) == self.conjectured_pointed
        )
        return (
            self.fiber_via_n == self.conjectured_fiber
            and self.s_enumerated == self.conjectured_s
            and pointed_ok
        )


def split_census(
    tower: FieldTower,
    alpha: GFElem | None = None,
    *,
    ceiling: int = DEFAULT_CEILING,
    workers: int = 1,
) -> SplitCensus:
    """Full splitting-subspace census at one alpha (least generator by default)."""
    if alpha is None:
        alpha = find_generator(tower)
    alpha_enc = _require_generator(tower, alpha)
    m, n = tower.m, tower.n
    q = tower.q
    chains = _AlphaChains(tower, alpha_enc)
    big_n = count_ordered_bases_N(tower, alpha, ceiling=ceiling, workers=workers)
    subspaces = enumerate_splitting_subspaces(
        tower, alpha, ceiling=ceiling, chains=chains
    )
    s_count = len(subspaces)
    counts = pointed_splitting_counts(tower, alpha, subspaces=subspaces)
    unit_group = q ** (m * n) - 1
    gl = gl_order(q, m)
    values = set(counts.values())
    pointed_equal = len(values) == 1
    common = next(iter(values)) if pointed_equal else None
    return SplitCensus(
        q=q,
        m=m,
        n=n,
        alpha=alpha,
        n_enumerated=big_n,
        s_enumerated=s_count,
        pointed_counts=counts,
        fiber_via_n=big_n // unit_group,
        s_via_n=big_n // gl,
        gl_order=gl,
        conjectured_fiber=conjectured_fiber_size(q, m, n),
        conjectured_s=conjectured_splitting_count(q, m, n),
        conjectured_pointed=conjectured_pointed_count(q, m, n),
        n_divisible_by_unit_group=big_n % unit_group == 0,
        n_divisible_by_gl=big_n % gl == 0,
        pointed_all_equal=pointed_equal,
        identity_iv_ok=(
            pointed_equal and s_count * (q**m - 1) == common * unit_group
        ),
    )


# -- coprime tuples -------------------------------------------------------------


@dataclass
class CoprimeCensus:
    """Exact coprime-tuple counts next to their closed forms.

    Slices not covered by the producing call stay None.  The sigma slices
    only exist for pairs (r = 2).
    """

    q: int
    r: int
    n: int
    monic_coprime_count: int | None = None
    monic_formula: int | None = None
    all_coprime_count: int | None = None
    all_formula: int | None = None
    sigma_count: int | None = None
    sigma_formula: int | None = None
    sigma1_count: int | None = None
    sigma1_formula: int | None = None


def _tuple_coprime(polys) -> bool:
    g = polys[0]
    for f in polys[1:]:
        if g.degree == 0:
            return True
        g = poly_gcd(g, f)
    return g.degree == 0


def coprime_monic_count(
    q: int, r: int, n: int, *, ceiling: int = DEFAULT_CEILING
) -> CoprimeCensus:
    """Count coprime r-tuples of monic degree-n polynomials.

    A tuple is coprime when the gcd of all entries is a nonzero constant.
    Compared against q**(rn) - q**(r(n-1)+1).
    """
    if r < 2 or n < 1:
        raise ValueError("need r >= 2 and n >= 1")
    total = q ** (r * n)
    if total > ceiling:
        raise CeilingExceeded(f"{total} tuples exceed ceiling {ceiling}")
    field = field_for_order(q)
    pool = list(monic_polys(field, n))
    count = sum(
        1 for tup in itertools.product(pool, repeat=r) if _tuple_coprime(tup)
    )
    return CoprimeCensus(
        q=q,
        r=r,
        n=n,
        monic_coprime_count=count,
        monic_formula=q ** (r * n) - q ** (r * (n - 1) + 1),
    )


def coprime_all_count(
    q: int, r: int, n: int, *, ceiling: int = DEFAULT_CEILING
) -> CoprimeCensus:
    """Count coprime r-tuples of polynomials of degree < n, zero included.

    Only nonzero constants are coprime to the zero polynomial.  Compared
    against q**(rn) * (1 - 1/q**(r-1) + (q-1)/q**(rn)).
    """
    if r < 2 or n < 1:
        raise ValueError("need r >= 2 and n >= 1")
    total = q ** (r * n)
    if total > ceiling:
        raise CeilingExceeded(f"{total} tuples exceed ceiling {ceiling}")
    field = field_for_order(q)
    pool = list(polys_below_degree(field, n))
    count = sum(
        1 for tup in itertools.product(pool, repeat=r) if _tuple_coprime(tup)
    )
    return CoprimeCensus(
        q=q,
        r=r,
        n=n,
        all_coprime_count=count,
        all_formula=q ** (r * n) - q ** (r * n - r + 1) + q - 1,
    )


def sigma_count(q: int, n: int, *, ceiling: int = DEFAULT_CEILING) -> CoprimeCensus:
    """Count the coprime pairs (f, g) of nonzero polynomials of degree < n
    with g monic (the set Sigma) and without the monic condition (Sigma_1)."""
    if n < 1:
        raise ValueError("need n >= 1")
    total = q ** (2 * n)
    if total > ceiling:
        raise CeilingExceeded(f"{total} pairs exceed ceiling {ceiling}")
    field = field_for_order(q)
    pool = [f for f in polys_below_degree(field, n) if not f.is_zero()]
    sigma = sigma1 = 0
    for f in pool:
        for g in pool:
            if poly_gcd(f, g).degree == 0:
                sigma1 += 1
                if g.is_monic():
                    sigma += 1
    return CoprimeCensus(
        q=q,
        r=2,
        n=n,
        sigma_count=sigma,
        sigma_formula=q ** (2 * n - 1) - 1,
        sigma1_count=sigma1,
        sigma1_formula=(q ** (2 * n - 1) - 1) * (q - 1),
    )


def coprime_census(q: int, r: int, n: int, *, ceiling: int = DEFAULT_CEILING) -> CoprimeCensus:
    """All coprime-count slices for one parameter choice (sigma when r = 2)."""
    monic = coprime_monic_count(q, r, n, ceiling=ceiling)
    both = coprime_all_count(q, r, n, ceiling=ceiling)
    merged = CoprimeCensus(
        q=q,
        r=r,
        n=n,
        monic_coprime_count=monic.monic_coprime_count,
        monic_formula=monic.monic_formula,
        all_coprime_count=both.all_coprime_count,
        all_formula=both.all_formula,
    )
    if r == 2:
        sig = sigma_count(q, n, ceiling=ceiling)
        merged.sigma_count = sig.sigma_count
        merged.sigma_formula = sig.sigma_formula
        merged.sigma1_count = sig.sigma1_count
        merged.sigma1_formula = sig.sigma1_formula
    return merged


# -- Toeplitz matrices ----------------------------------------------------------


@dataclass(frozen=True)
class ToeplitzCensus:
    q: int
    n: int
    nonsingular_count: int
    formula: int


def _toeplitz_rows(c: list[int], n: int) -> list[list[int]]:
    # entry (i, j) is c_{n+i-j} for 1-indexed i, j; c is 0-indexed
    return [[c[n + i - j - 1] for j in range(n)] for i in range(n)]


def toeplitz_census(q: int, n: int, *, ceiling: int = DEFAULT_CEILING) -> ToeplitzCensus:
    """Count nonsingular n x n Toeplitz matrices by scanning all q**(2n-1)
    diagonal vectors; compared against q**(2n-1) - q**(2n-2)."""
    if n < 1:
        raise ValueError("need n >= 1")
    total = q ** (2 * n - 1)
    if total > ceiling:
        raise CeilingExceeded(f"{total} matrices exceed ceiling {ceiling}")
    field = field_for_order(q)
    count = 0
    for enc in range(total):
        v = enc
        c = []
        for _ in range(2 * n - 1):
            v, dig = divmod(v, q)
            c.append(dig)
        if rank_of_rows(field, _toeplitz_rows(c, n)) == n:
            count += 1
    return ToeplitzCensus(q, n, count, q ** (2 * n - 1) - q ** (2 * n - 2))


@dataclass
class ToeplitzTrinomialResult:
    """Derivation certificate for the trinomial counting route.

    basis_count is the number of beta making (1, beta, a, a*beta, ...,
    a^{n-1}, a^{n-1}*beta) a basis; the route divides it by q.  The
    structure and equivalence flags certify the block decomposition claim
    per beta.
    """

    q: int
    n: int
    found: bool
    a: int | None = None
    b: int | None = None
    poly_text: str | None = None
    basis_count: int = 0
    expected_basis_count: int = 0
    tgl_from_route: int | None = None
    division_exact: bool = False
    structure_holds: bool = False
    equivalence_holds: bool = False


def toeplitz_via_trinomial(
    q: int, n: int, *, ceiling: int = DEFAULT_CEILING
) -> ToeplitzTrinomialResult:
    """Reproduce the nonsingular Toeplitz count through an irreducible
    X**(2n) - aX - b, when one exists.

    For a root alpha and each beta (walked by coordinates), the coordinate
    matrix of (1, a, ..., a^{n-1}, beta, a*beta, ..., a^{n-1}*beta) has an
    upper-left identity block and a lower-right Toeplitz block built from
    beta's coordinates c_1..c_{2n-1}; the basis property is then equivalent
    to that Toeplitz block being nonsingular, and the basis total divided by
    q gives the Toeplitz count.
    """
    field = field_for_order(q)
    d = 2 * n
    if q**d > ceiling:
        raise CeilingExceeded(f"{q}**{d} elements exceed ceiling {ceiling}")
    trinomial = None
    for a, b in itertools.product(range(q), repeat=2):
        coeffs = [field.neg(b), field.neg(a)] + [0] * (d - 2) + [1]
        f = GFPoly(field, coeffs)
        if f.degree == d and is_irreducible(f):
            trinomial = (a, b, f)
            break
    if trinomial is None:
        return ToeplitzTrinomialResult(q=q, n=n, found=False)
    a, b, f = trinomial
    add, mul = field.add, field.mul

    def times_x(vec):
        out = [0] + vec[:-1]
        t = vec[-1]
        if t:
            out[1] = add(out[1], mul(t, a))
            out[0] = add(out[0], mul(t, b))
        return out

    basis_count = 0
    structure = True
    equivalence = True
    unit_rows = [[1 if i == j else 0 for i in range(d)] for j in range(n)]
    for enc in range(q**d):
        v = enc
        beta = []
        for _ in range(d):
            v, dig = divmod(v, q)
            beta.append(dig)
        shifted = beta
        beta_rows = []
        for _ in range(n):
            beta_rows.append(shifted)
            shifted = times_x(shifted)
        rows = unit_rows + beta_rows
        is_basis = rank_of_rows(field, rows) == d
        c = beta[1:]
        toep = _toeplitz_rows(c, n)
        # block structure: the high coordinates of a^{j-1}*beta must be the
        # Toeplitz column, i.e. coord n+i-1 of beta_rows[j-1] equals c_{n+i-j}
        for j in range(1, n + 1):
            for i in range(1, n + 1):
                if beta_rows[j - 1][n + i - 1] != c[n + i - j - 1]:
                    structure = False
        toep_ok = rank_of_rows(field, toep) == n
        if is_basis != toep_ok:
            equivalence = False
        if is_basis:
            basis_count += 1
    expected = q ** (d - 1) * (q - 1)
    exact = basis_count % q == 0
    return ToeplitzTrinomialResult(
        q=q,
        n=n,
        found=True,
        a=a,
        b=b,
        poly_text=poly_to_text(f),
        basis_count=basis_count,
        expected_basis_count=expected,
        tgl_from_route=basis_count // q if exact else None,
        division_exact=exact,
        structure_holds=structure,
        equivalence_holds=equivalence,
    )


# -- binomial irreducibility and the odd-characteristic search -------------------


@dataclass(frozen=True)
class BinomialCheck:
    q: int
    d: int
    b: int
    criterion: bool
    direct: bool

    @property
    def agree(self) -> bool:
        return self.criterion == self.direct


def binomial_criterion(q: int, d: int, b: int) -> bool:
    """Order-based irreducibility criterion for X**d - b over F_q:
    every prime factor of d divides the order e of b but not (q-1)/e, and
    q = 1 (mod 4) whenever d = 0 (mod 4)."""
    if d < 2:
        raise ValueError("need degree d >= 2")
    if b == 0:
        raise ValueError("b must be nonzero")
    field = field_for_order(q)
    e = element_order(field, b)
    cofactor = (q - 1) // e
    for p in factorize(d).primes:
        if e % p != 0 or cofactor % p == 0:
            return False
    if d % 4 == 0 and q % 4 != 1:
        return False
    return True


def binomial_irreducibility(q: int, d: int, b: int) -> BinomialCheck:
    """Evaluate the order criterion and the direct irreducibility test for
    X**d - b; the caller asserts they agree."""
    crit = binomial_criterion(q, d, b)
    field = field_for_order(q)
    poly = GFPoly(field, [field.neg(b)] + [0] * (d - 1) + [1])
    return BinomialCheck(q, d, b, crit, is_irreducible(poly))


@dataclass(frozen=True)
class BinomialWitness:
    n: int
    b: int
    criterion_ok: bool
    direct_ok: bool | None  # None when the direct test was skipped for size


def fermat_condition_search(
    q: int, count: int, *, direct_degree_limit: int = 64
) -> list[BinomialWitness]:
    """First `count` pairs (n, b) with X**(2n) - b irreducible over F_q, for
    q an odd prime power whose q-1 has an odd prime factor.

    Takes the smallest odd prime factor l of q-1, n = l**i, and b the least
    primitive element; each witness is certified by the order criterion and,
    up to the degree limit, by the direct irreducibility test too.
    """
    pe = is_prime_power(q)
    if pe is None or pe[0] == 2:
        raise ValueError(f"{q} is not an odd prime power")
    odd_primes = [p for p in factorize(q - 1).primes if p != 2]
    if not odd_primes:
        raise ValueError(
            f"q - 1 = {q - 1} is a power of two (q is a Fermat prime or 9); "
            "the construction needs an odd prime factor of q - 1"
        )
    ell = odd_primes[0]
    field = field_for_order(q)
    b = next(
        x for x in range(1, q) if element_order(field, x) == q - 1
    )
    witnesses = []
    for i in range(1, count + 1):
        n = ell**i
        d = 2 * n
        crit = binomial_criterion(q, d, b)
        if not crit:  # pragma: no cover - contradicts the construction
            raise ArithmeticError(f"criterion failed for X**{d} - {b} over F_{q}")
        direct = None
        if d <= direct_degree_limit:
            poly = GFPoly(field, [field.neg(b)] + [0] * (d - 1) + [1])
            direct = is_irreducible(poly)
        witnesses.append(BinomialWitness(n, b, crit, direct))
    return witnesses


# -- asymptotic bounds ----------------------------------------------------------


@dataclass
class BoundsTriple:
    """Exact lower/upper fiber bounds and the simplified lower bound."""

    q: int
    m: int
    n: int
    lower: Fraction
    upper: int
    lower_star: Fraction
    observed_min_fiber: int
    observed_max_fiber: int
    lower_ok: bool
    upper_ok: bool
    star_le_lower: bool | None  # None when q <= 2 (the comparison needs q > 2)


def bounds_check(q: int, m: int, n: int, observed_fibers) -> BoundsTriple:
    """Compare observed irreducible fiber sizes against the proven bounds
    L(q) <= fiber <= U(q), with L*(q) <= L(q) for q > 2."""
    fibers = list(observed_fibers)
    if not fibers:
        raise ValueError("need at least one observed fiber")
    mn = m * n
    lower = (
        Fraction((q - 2) * q**mn + 1, (q - 1) * (q**mn - 1)) * q ** (mn * (m - 1))
    )
    upper = 1
    for i in range(1, m):
        upper *= q**mn - q**i
    lower_star = Fraction((q - 2) * q**mn + 1) * Fraction(q) ** (mn * (m - 2) - 1)
    lo, hi = min(fibers), max(fibers)
    return BoundsTriple(
        q=q,
        m=m,
        n=n,
        lower=lower,
        upper=upper,
        lower_star=lower_star,
        observed_min_fiber=lo,
        observed_max_fiber=hi,
        lower_ok=lower <= lo,
        upper_ok=hi <= upper,
        star_le_lower=(lower_star <= lower) if q > 2 else None,
    )


# -- polynomial-count scans -------------------------------------------------------


def count_polys_by_scan(q: int, d: int, *, ceiling: int = DEFAULT_CEILING) -> tuple[int, int]:
    """(irreducible, primitive) counts of monic degree-d polynomials over F_q
    by exhaustive scan with the polynomial predicates."""
    total = q**d
    if total > ceiling:
        raise CeilingExceeded(f"{total} polynomials exceed ceiling {ceiling}")
    field = field_for_order(q)
    irr = prim = 0
    for f in monic_polys(field, d):
        if is_irreducible(f):
            irr += 1
            if is_primitive(f):
                prim += 1
    return irr, prim


# -- generic index sampling -------------------------------------------------------


def sampled_count(
    space: int, predicate, sample_size: int, seed: int
) -> SampledEstimate:
    """Estimate |{k in range(space) : predicate(k)}| from a seeded uniform
    sample with replacement."""
    rng = random.Random(seed)
    hits = sum(1 for _ in range(sample_size) if predicate(rng.randrange(space)))
    est, lo, hi = _interval(space, hits, sample_size)
    return SampledEstimate(space, sample_size, seed, hits, est, lo, hi)
