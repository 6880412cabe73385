"""Exact linear algebra over finite fields.

Matrices are immutable dense grids of integer-encoded field elements.  The
characteristic polynomial is computed by Hessenberg reduction (exact in any
field, O(d^3)), multiplicative orders by stripping prime factors of the group
exponent when the characteristic polynomial is irreducible, and by bounded
iteration otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

from .numtheory import CeilingExceeded, factorize
from .gf import (
    FieldMismatch,
    FieldSpec,
    FieldTower,
    GFElem,
    GFPoly,
    field_for_order,
    field_tag,
    is_irreducible,
    is_primitive,
    min_poly_over_mid,
    parse_field_tag,
    roots_in_top,
)

EXHAUSTIVE_MATRIX_CEILING = 2**24
ORDER_ITERATION_CAP = 2**20


class SingularMatrix(ValueError):
    """A nonsingular matrix was required."""


class CriterionDisagreement(RuntimeError):
    """The order criterion and the primitivity criterion disagreed.

    This never signals a mathematical fact; it signals an implementation bug.
    """


class UnsupportedMatrix(ValueError):
    """The operation is outside its supported scope."""


class GFMatrix:
    """Immutable dense matrix over a FieldSpec."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: FieldSpec, entries):
        entries = tuple(tuple(int(v) for v in row) for row in entries)
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        if any(len(r) != cols for r in entries):
            raise ValueError("ragged matrix")
        card = field.cardinality
        if any(not 0 <= v < card for row in entries for v in row):
            raise ValueError("entry encoding out of range")
        self.field = field
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def identity(cls, field: FieldSpec, d: int) -> "GFMatrix":
        return cls(field, [[1 if i == j else 0 for j in range(d)] for i in range(d)])

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "GFMatrix":
        return cls(field, [[0] * cols for _ in range(rows)])

    def _match(self, other) -> "GFMatrix":
        if not isinstance(other, GFMatrix):
            raise TypeError("expected a GFMatrix")
        if not (self.field is other.field or self.field == other.field):
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return other

    def __add__(self, other):
        other = self._match(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        add = self.field.add
        return GFMatrix(
            self.field,
            [
                [add(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ],
        )

    def scale(self, s: int) -> "GFMatrix":
        mul = self.field.mul
        return GFMatrix(self.field, [[mul(s, v) for v in row] for row in self.entries])

    def __matmul__(self, other):
        other = self._match(other)
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        add, mul = self.field.add, self.field.mul
        bt = list(zip(*other.entries))
        out = []
        for row in self.entries:
            out_row = []
            for col in bt:
                acc = 0
                for a, b in zip(row, col):
                    if a and b:
                        acc = add(acc, mul(a, b))
                out_row.append(acc)
            out.append(out_row)
        return GFMatrix(self.field, out)

    def pow(self, k: int) -> "GFMatrix":
        if self.rows != self.cols:
            raise ValueError("power of a non-square matrix")
        if k < 0:
            raise ValueError("negative matrix powers unsupported")
        result = GFMatrix.identity(self.field, self.rows)
        acc = self
        while k:
            if k & 1:
                result = result @ acc
            acc = acc @ acc
            k >>= 1
        return result

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __eq__(self, other):
        return (
            isinstance(other, GFMatrix)
            and self.field == other.field
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.field, self.entries))

    def __repr__(self):
        return f"GFMatrix({self.field!r}, {self.rows}x{self.cols})"


def matrix_to_text(mat: GFMatrix) -> str:
    """Fixture format: "p^e:rows:cols:" then ";"-separated rows of ","-entries."""
    body = ";".join(",".join(str(v) for v in row) for row in mat.entries)
    return f"{field_tag(mat.field)}:{mat.rows}:{mat.cols}:{body}"


def matrix_from_text(text: str) -> GFMatrix:
    tag, rows, cols, body = text.split(":", 3)
    field = parse_field_tag(tag)
    entries = [[int(v) for v in row.split(",")] for row in body.split(";")] if body else []
    mat = GFMatrix(field, entries)
    if (mat.rows, mat.cols) != (int(rows), int(cols)):
        raise ValueError("matrix body does not match declared shape")
    return mat


def rank_of_rows(field: FieldSpec, rows) -> int:
    """Row rank of a list of coordinate rows over the field."""
    work = [list(r) for r in rows]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(work)) if work[r][col]), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = field.inv(work[rank][col])
        prow = [field.mul(inv, v) for v in work[rank]]
        work[rank] = prow
        sub, mul = field.sub, field.mul
        for r in range(rank + 1, len(work)):
            c = work[r][col]
            if c:
                work[r] = [sub(v, mul(c, w)) for v, w in zip(work[r], prow)]
        rank += 1
        if rank == len(work):
            break
    return rank


def rank_gf2(packed_rows) -> int:
    """Rank over F_2 of rows packed as bit masks."""
    pivots = {}
    rank = 0
    for v in packed_rows:
        while v:
            hb = v.bit_length() - 1
            piv = pivots.get(hb)
            if piv is None:
                pivots[hb] = v
                rank += 1
                break
            v ^= piv
    return rank


def matrix_rank(mat: GFMatrix) -> int:
    return rank_of_rows(mat.field, mat.entries)


def is_nonsingular(mat: GFMatrix) -> bool:
    return mat.is_square() and matrix_rank(mat) == mat.rows


def invert_over_field(field: FieldSpec, rows) -> list[list[int]]:
    """Inverse of a square grid over the field; raises on singular input."""
    d = len(rows)
    aug = [list(rows[i]) + [1 if j == i else 0 for j in range(d)] for i in range(d)]
    for col in range(d):
        piv = next((r for r in range(col, d) if aug[r][col]), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = field.inv(aug[col][col])
        aug[col] = [field.mul(inv, v) for v in aug[col]]
        for r in range(d):
            if r != col and aug[r][col]:
                c = aug[r][col]
                aug[r] = [
                    field.sub(v, field.mul(c, w)) for v, w in zip(aug[r], aug[col])
                ]
    return [row[d:] for row in aug]


# -- block companion shape ----------------------------------------------------


@dataclass(frozen=True)
class BlockCompanionSpec:
    """The n blocks C_0..C_{n-1} (each m x m) of a block companion matrix."""

    m: int
    n: int
    blocks: tuple[GFMatrix, ...]

    def __post_init__(self):
        if len(self.blocks) != self.n:
            raise ValueError(f"expected {self.n} blocks, got {len(self.blocks)}")
        fld = self.blocks[0].field
        for blk in self.blocks:
            if (blk.rows, blk.cols) != (self.m, self.m):
                raise ValueError("all blocks must be m x m")
            if blk.field != fld:
                raise FieldMismatch("blocks over different fields")

    @property
    def field(self) -> FieldSpec:
        return self.blocks[0].field


def assemble_block_companion(spec: BlockCompanionSpec) -> GFMatrix:
    """The mn x mn matrix with identity blocks on the subdiagonal and the
    blocks C_0..C_{n-1} down the last block column."""
    m, n = spec.m, spec.n
    d = m * n
    grid = [[0] * d for _ in range(d)]
    for bi, blk in enumerate(spec.blocks):
        for r in range(m):
            row = grid[bi * m + r]
            for c in range(m):
                row[(n - 1) * m + c] = blk.entries[r][c]
    for bi in range(1, n):
        for r in range(m):
            grid[bi * m + r][(bi - 1) * m + r] = 1
    return GFMatrix(spec.field, grid)


def recognize_block_companion(mat: GFMatrix, m: int, n: int):
    """Decompose into blocks if the matrix has the block companion shape.

    Returns the BlockCompanionSpec, or None when the pattern does not match.
    """
    d = m * n
    if (mat.rows, mat.cols) != (d, d):
        raise ValueError(f"matrix is {mat.rows}x{mat.cols}, expected {d}x{d}")
    ent = mat.entries
    for i in range(d):
        bi = i // m
        for j in range(d):
            bj = j // m
            if bj == n - 1:
                continue
            expected = 1 if (bi == bj + 1 and i % m == j % m) else 0
            if ent[i][j] != expected:
                return None
    blocks = tuple(
        GFMatrix(
            mat.field,
            [
                [ent[bi * m + r][(n - 1) * m + c] for c in range(m)]
                for r in range(m)
            ],
        )
        for bi in range(n)
    )
    return BlockCompanionSpec(m, n, blocks)


def companion_matrix(f: GFPoly) -> GFMatrix:
    """Companion matrix of a monic polynomial of degree >= 1."""
    if not f.is_monic() or len(f.coeffs) < 2:
        raise ValueError("companion matrix needs a monic polynomial of degree >= 1")
    d = len(f.coeffs) - 1
    fld = f.field
    grid = [[0] * d for _ in range(d)]
    for i in range(d):
        grid[i][d - 1] = fld.neg(f.coeffs[i])
        if i:
            grid[i][i - 1] = 1
    return GFMatrix(fld, grid)


# -- characteristic polynomial -------------------------------------------------


def char_poly_coeffs(field: FieldSpec, entries) -> tuple[int, ...]:
    """Coefficients (constant first) of det(X*I - T) for a square grid T.

    Hessenberg reduction by similarity transformations, then the standard
    principal-minor recurrence on the reduced form.
    """
    d = len(entries)
    h = [list(r) for r in entries]
    add, sub, mul, inv = field.add, field.sub, field.mul, field.inv
    for k in range(1, d - 1):
        piv = next((i for i in range(k, d) if h[i][k - 1]), None)
        if piv is None:
            continue
        if piv != k:
            h[k], h[piv] = h[piv], h[k]
            for row in h:
                row[k], row[piv] = row[piv], row[k]
        pivot_inv = inv(h[k][k - 1])
        for i in range(k + 1, d):
            t = h[i][k - 1]
            if t:
                f = mul(t, pivot_inv)
                hi, hk = h[i], h[k]
                for j in range(k - 1, d):
                    if hk[j]:
                        hi[j] = sub(hi[j], mul(f, hk[j]))
                for row in h:
                    if row[i]:
                        row[k] = add(row[k], mul(f, row[i]))
    # p_k = char poly of the leading k x k principal minor of the Hessenberg
    # form; coefficients indexed by degree.
    polys = [[1]]
    for k in range(1, d + 1):
        prev = polys[k - 1]
        pk = [0] * (k + 1)
        for deg, c in enumerate(prev):
            pk[deg + 1] = c
        a = h[k - 1][k - 1]
        if a:
            for deg, c in enumerate(prev):
                if c:
                    pk[deg] = sub(pk[deg], mul(a, c))
        beta = 1
        for i in range(1, k):
            beta = mul(beta, h[k - i][k - i - 1])
            if not beta:
                break
            coef = mul(h[k - 1 - i][k - 1], beta)
            if coef:
                for deg, c in enumerate(polys[k - 1 - i]):
                    if c:
                        pk[deg] = sub(pk[deg], mul(coef, c))
        polys.append(pk)
    return tuple(polys[d])


def char_poly(mat: GFMatrix) -> GFPoly:
    """det(X*I - T): monic of degree equal to the dimension."""
    if not mat.is_square():
        raise ValueError("characteristic polynomial of a non-square matrix")
    return GFPoly(mat.field, char_poly_coeffs(mat.field, mat.entries))


# -- orders and the Singer predicate -------------------------------------------


def matrix_order(mat: GFMatrix, cap: int = ORDER_ITERATION_CAP) -> int:
    """Exact multiplicative order of a nonsingular matrix.

    With an irreducible characteristic polynomial the order divides
    q**d - 1 and is found by stripping prime factors; otherwise the order is
    found by bounded iterated multiplication.
    """
    if not mat.is_square():
        raise ValueError("order of a non-square matrix")
    if not is_nonsingular(mat):
        raise SingularMatrix("singular matrices have no multiplicative order")
    d = mat.rows
    q = mat.field.cardinality
    f = char_poly(mat)
    if is_irreducible(f):
        order = q**d - 1
        ident = GFMatrix.identity(mat.field, d)
        for p in factorize(order).primes:
            while order % p == 0 and mat.pow(order // p) == ident:
                order //= p
        return order
    ident = GFMatrix.identity(mat.field, d)
    acc = mat
    for k in range(1, cap + 1):
        if acc == ident:
            return k
        acc = acc @ mat
    raise ArithmeticError(f"order exceeds iteration cap {cap}")


def is_singer_cycle(mat: GFMatrix) -> bool:
    """True iff the matrix has the maximum possible order q**d - 1.

    Cross-checks the equivalent criterion (primitive characteristic
    polynomial) and raises CriterionDisagreement if the two ever differ.
    """
    if not mat.is_square():
        raise ValueError("Singer test on a non-square matrix")
    d = mat.rows
    q = mat.field.cardinality
    primitive = is_primitive(char_poly(mat))
    if is_nonsingular(mat):
        by_order = matrix_order(mat) == q**d - 1
    else:
        by_order = False
    if by_order != primitive:
        raise CriterionDisagreement(
            f"order criterion {by_order} vs primitivity {primitive} "
            f"for {matrix_to_text(mat)}"
        )
    return by_order


# -- multiplication operators in chosen bases ----------------------------------


def _operator_matrix(small, big_mul, coords_fn, alpha_enc, basis_encs) -> GFMatrix:
    d = len(basis_encs)
    coord_cols = [coords_fn(b) for b in basis_encs]
    cmat = [[coord_cols[j][i] for j in range(d)] for i in range(d)]
    cinv = invert_over_field(small, cmat)
    add, mul = small.add, small.mul
    out = [[0] * d for _ in range(d)]
    for j, b in enumerate(basis_encs):
        y = coords_fn(big_mul(alpha_enc, b))
        for i in range(d):
            acc = 0
            for t, v in enumerate(y):
                if v:
                    acc = add(acc, mul(cinv[i][t], v))
            out[i][j] = acc
    return GFMatrix(small, out)


def canonical_mid_basis(tower: FieldTower) -> tuple[int, ...]:
    """The power basis (1, g, ..., g^{m-1}) of the mid field over the base."""
    gen = tower.mid.p if tower.mid.degree > 1 else 1
    return tuple(tower.mid.pow(gen, i) for i in range(tower.m))


def regular_representation(
    tower: FieldTower, beta: GFElem, basis=None
) -> GFMatrix:
    """Matrix (m x m over the base field) of multiplication by beta on the
    mid field, in the given ordered base-field basis (canonical power basis
    by default)."""
    if beta.field != tower.mid:
        raise FieldMismatch("beta must lie in the mid field")
    if basis is None:
        basis_encs = canonical_mid_basis(tower)
    else:
        basis_encs = tuple(
            b.enc if isinstance(b, GFElem) else int(b) for b in basis
        )
        if len(basis_encs) != tower.m:
            raise ValueError(f"basis must have {tower.m} vectors")
    return _operator_matrix(
        tower.base,
        tower.mid.mul,
        tower.mid_coords_over_base,
        beta.enc,
        basis_encs,
    )


def matrix_of_mult_in_basis(
    tower: FieldTower, alpha: GFElem, basis_vectors
) -> GFMatrix:
    """Matrix (mn x mn over the base field) of x -> alpha*x on the top field
    in the given ordered basis.  Raises SingularMatrix if the vectors are
    dependent."""
    if alpha.field != tower.top:
        raise FieldMismatch("alpha must lie in the top field")
    basis_encs = tuple(
        b.enc if isinstance(b, GFElem) else int(b) for b in basis_vectors
    )
    if len(basis_encs) != tower.m * tower.n:
        raise ValueError(f"basis must have {tower.m * tower.n} vectors")
    return _operator_matrix(
        tower.base,
        tower.top.mul,
        tower.top_coords_over_base,
        alpha.enc,
        basis_encs,
    )


def lift_to_block_companion(tower: FieldTower, f: GFPoly) -> GFMatrix:
    """Constructive preimage of an irreducible f of degree mn under the
    characteristic map, in block companion form.

    Takes the least root alpha of f in the top field, the minimal polynomial
    g of alpha over the mid field, and assembles the block companion matrix
    whose blocks are the regular representations of g's coefficients.
    """
    m, n = tower.m, tower.n
    if f.field != tower.base:
        raise FieldMismatch("f must have base-field coefficients")
    if f.degree != m * n:
        raise ValueError(f"f must have degree {m * n}, got {f.degree}")
    if not f.is_monic():
        raise ValueError("f must be monic")
    if not is_irreducible(f):
        raise ValueError("f must be irreducible")
    alpha_enc = roots_in_top(tower, f)[0]
    g = min_poly_over_mid(tower, GFElem(tower.top, alpha_enc))
    if g.degree != n:  # pragma: no cover - guaranteed by field theory
        raise ArithmeticError("minimal polynomial over the mid field has wrong degree")
    mid = tower.mid
    blocks = tuple(
        regular_representation(tower, GFElem(mid, mid.neg(g.coeffs[i])))
        for i in range(n)
    )
    return assemble_block_companion(BlockCompanionSpec(m, n, blocks))


# -- centralizers and nilpotent counts -----------------------------------------


def centralizer_size(mat: GFMatrix, ceiling: int = 2**20) -> int:
    """|Z(T)| for T with irreducible characteristic polynomial.

    The invertible matrices commuting with such a T are exactly the nonzero
    polynomials in T of degree < d, so the count is q**d - 1; this enumerates
    them and checks invertibility of each as an internal consistency guard.
    """
    if not mat.is_square():
        raise ValueError("centralizer of a non-square matrix")
    f = char_poly(mat)
    if not is_irreducible(f):
        raise UnsupportedMatrix(
            "centralizer size supported only for irreducible characteristic polynomial"
        )
    d = mat.rows
    q = mat.field.cardinality
    if q**d - 1 > ceiling:
        raise CeilingExceeded(f"{q}**{d} - 1 polynomials exceed ceiling {ceiling}")
    powers = [GFMatrix.identity(mat.field, d)]
    for _ in range(d - 1):
        powers.append(powers[-1] @ mat)
    count = 0
    for enc in range(1, q**d):
        coeffs = []
        v = enc
        for _ in range(d):
            v, c = divmod(v, q)
            coeffs.append(c)
        acc = GFMatrix.zeros(mat.field, d, d)
        for c, pw in zip(coeffs, powers):
            if c:
                acc = acc + pw.scale(c)
        if not is_nonsingular(acc):
            raise ArithmeticError(
                "a nonzero polynomial in T is singular despite irreducible "
                "characteristic polynomial; implementation bug"
            )
        count += 1
    return count


def centralizer_size_bruteforce(
    mat: GFMatrix, ceiling: int = EXHAUSTIVE_MATRIX_CEILING
) -> int:
    """Oracle: scan all d x d matrices for invertible ones commuting with T."""
    if not mat.is_square():
        raise ValueError("centralizer of a non-square matrix")
    d = mat.rows
    q = mat.field.cardinality
    total = q ** (d * d)
    if total > ceiling:
        raise CeilingExceeded(f"{total} matrices exceed ceiling {ceiling}")
    count = 0
    for enc in range(total):
        v = enc
        grid = []
        for _ in range(d):
            row = []
            for _ in range(d):
                v, c = divmod(v, q)
                row.append(c)
            grid.append(row)
        cand = GFMatrix(mat.field, grid)
        if cand @ mat == mat @ cand and is_nonsingular(cand):
            count += 1
    return count


@dataclass(frozen=True)
class NilpotentCount:
    """Exhaustive nilpotent-matrix count next to the closed form q**(m(m-1))."""

    q: int
    m: int
    brute_force: int | None
    formula: int
    verified: bool


def nilpotent_count(
    q: int, m: int, ceiling: int = EXHAUSTIVE_MATRIX_CEILING
) -> NilpotentCount:
    """Count nilpotent m x m matrices (A**m == 0) by exhaustion.

    Beyond the ceiling the brute-force side is skipped and the result is
    flagged unverified.
    """
    formula = q ** (m * (m - 1))
    total = q ** (m * m)
    if total > ceiling:
        return NilpotentCount(q, m, None, formula, False)
    field = field_for_order(q)
    zero = GFMatrix.zeros(field, m, m)
    count = 0
    for enc in range(total):
        v = enc
        grid = []
        for _ in range(m):
            row = []
            for _ in range(m):
                v, c = divmod(v, q)
                row.append(c)
            grid.append(row)
        if GFMatrix(field, grid).pow(m) == zero:
            count += 1
    return NilpotentCount(q, m, count, formula, True)
