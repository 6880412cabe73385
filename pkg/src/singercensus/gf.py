"""Finite field towers F_q < F_{q^m} < F_{q^mn} and polynomial algebra.

Representation conventions:

* A field F_{p^e} is a ``FieldSpec``.  Elements are plain integers in
  ``0 .. p**e - 1``: the element with coordinate vector (c_0, ..., c_{e-1})
  over the prime field (constant coordinate first, with respect to the power
  basis of the class of X modulo the field's defining polynomial) is encoded
  as ``sum(c_i * p**i)``.  Encoding 0 is zero and encoding 1 is one in every
  field.
* Polynomials are ``GFPoly``: a dense tuple of element encodings, constant
  term first, with no trailing zeros.  The zero polynomial has an empty
  coefficient tuple and degree ``-inf``.
* Defining polynomials are canonical: the lexicographically least monic
  irreducible polynomial of the required degree over the prime field, where
  coefficient vectors are compared from the constant term upward.  Subfield
  embeddings map the subfield generator to the least root (by encoding) of
  its defining polynomial in the larger field.  Both choices make every
  construction reproducible.

Extension fields with at most ``_LOG_TABLE_LIMIT`` elements carry discrete
log/antilog tables, so multiplication is two lookups; larger fields multiply
coordinate polynomials directly.
"""

from __future__ import annotations

import functools
import itertools

from .numtheory import CeilingExceeded, factorize, is_prime, is_prime_power

NEG_INF = float("-inf")

FIELD_CEILING = 2**20

_LOG_TABLE_LIMIT = 4096
_ADD_TABLE_LIMIT = 512


class FieldMismatch(ValueError):
    """Operands belong to different fields."""


def _digits(enc: int, p: int, e: int) -> list[int]:
    out = [0] * e
    for i in range(e):
        enc, out[i] = divmod(enc, p)
    return out


def _undigits(coords, p: int) -> int:
    enc = 0
    for c in reversed(coords):
        enc = enc * p + c
    return enc


class FieldSpec:
    """The finite field F_{p^degree}, with integer-encoded elements.

    ``modulus`` is the defining polynomial over F_p (constant first, monic),
    or None for a prime field.
    """

    __slots__ = (
        "p", "degree", "modulus", "cardinality",
        "add", "sub", "neg", "mul", "inv",
        "_exp", "_log",
    )

    def __init__(self, p: int, degree: int = 1, modulus=None):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if degree < 1:
            raise ValueError("degree must be >= 1")
        if degree == 1:
            if modulus is not None and tuple(modulus) != (0, 1):
                raise ValueError("prime fields take no modulus (or X itself)")
            modulus = None
        else:
            if modulus is None:
                raise ValueError("extension fields need a defining polynomial")
            modulus = tuple(int(c) for c in modulus)
            if len(modulus) != degree + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of the stated degree")
            if any(not 0 <= c < p for c in modulus):
                raise ValueError("modulus coefficients out of range")
        if degree > 1:
            prime = canonical_field(p, 1)
            if not is_irreducible(GFPoly(prime, modulus)):
                raise ValueError("modulus is not irreducible over the prime field")
        self.p = p
        self.degree = degree
        self.modulus = modulus
        self.cardinality = p**degree
        self._exp = self._log = None
        self._install_ops()

    # -- arithmetic wiring -------------------------------------------------

    def _install_ops(self):
        p = self.p
        if self.degree == 1:
            self.add = lambda a, b: (a + b) % p
            self.sub = lambda a, b: (a - b) % p
            self.neg = lambda a: (-a) % p
            self.mul = lambda a, b: (a * b) % p
            self.inv = self._inv_prime
            return
        if p == 2:
            self.add = lambda a, b: a ^ b
            self.sub = lambda a, b: a ^ b
            self.neg = lambda a: a
        elif self.cardinality <= _ADD_TABLE_LIMIT:
            tab = [
                [self._add_raw(a, b) for b in range(self.cardinality)]
                for a in range(self.cardinality)
            ]
            self.add = lambda a, b: tab[a][b]
            self.sub = lambda a, b: tab[a][self._neg_raw(b)]
            self.neg = self._neg_raw
        else:
            self.add = self._add_raw
            self.sub = lambda a, b: self._add_raw(a, self._neg_raw(b))
            self.neg = self._neg_raw
        if self.cardinality <= _LOG_TABLE_LIMIT:
            self._build_log_tables()
            exp, log, order = self._exp, self._log, self.cardinality - 1
            def mul(a, b):
                if a == 0 or b == 0:
                    return 0
                return exp[log[a] + log[b]]
            def inv(a):
                if a == 0:
                    raise ZeroDivisionError("zero has no inverse")
                return exp[(order - log[a]) % order]
            self.mul = mul
            self.inv = inv
        else:
            self.mul = self._mul_raw
            self.inv = self._inv_raw

    def _inv_prime(self, a):
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(a, self.p - 2, self.p)

    def _add_raw(self, a, b):
        p = self.p
        da, db = _digits(a, p, self.degree), _digits(b, p, self.degree)
        return _undigits([(x + y) % p for x, y in zip(da, db)], p)

    def _neg_raw(self, a):
        p = self.p
        return _undigits([(-x) % p for x in _digits(a, p, self.degree)], p)

    def _mul_raw(self, a, b):
        if a == 0 or b == 0:
            return 0
        p, e = self.p, self.degree
        da, db = _digits(a, p, e), _digits(b, p, e)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        mod = self.modulus
        for i in range(2 * e - 2, e - 1, -1):
            t = prod[i]
            if t:
                prod[i] = 0
                for j in range(e):
                    prod[i - e + j] = (prod[i - e + j] - t * mod[j]) % p
        return _undigits(prod[:e], p)

    def _inv_raw(self, a):
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self.pow(a, self.cardinality - 2)

    def _build_log_tables(self):
        order = self.cardinality - 1
        for g in range(2, self.cardinality):
            exp = [1]
            acc = g
            while acc != 1 and len(exp) <= order:
                exp.append(acc)
                acc = self._mul_raw(acc, g)
            if len(exp) == order:
                log = [0] * self.cardinality
                for k, v in enumerate(exp):
                    log[v] = k
                self._exp = exp + exp  # doubled: skips a mod in mul
                self._log = log
                return
        raise ArithmeticError("no multiplicative generator found; bad modulus")

    # -- derived operations ------------------------------------------------

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        if a == 0:
            return 0 if k else 1
        if self._log is not None:
            order = self.cardinality - 1
            return self._exp[self._log[a] * k % order]
        result = 1
        while k:
            if k & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            k >>= 1
        return result

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def coords(self, enc: int) -> tuple[int, ...]:
        return tuple(_digits(enc, self.p, self.degree))

    def from_coords(self, coords) -> int:
        return _undigits(list(coords), self.p)

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, FieldSpec)
            and self.p == other.p
            and self.degree == other.degree
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.degree, self.modulus))

    def __repr__(self):
        return f"GF({self.cardinality})"


def field_tag(field: FieldSpec) -> str:
    """Textual field tag, e.g. "2^1" for F_2 and "3^2" for F_9."""
    return f"{field.p}^{field.degree}"


def parse_field_tag(tag: str) -> FieldSpec:
    p, _, e = tag.partition("^")
    return canonical_field(int(p), int(e) if e else 1)


@functools.lru_cache(maxsize=None)
def canonical_field(p: int, e: int) -> FieldSpec:
    """F_{p^e} with the canonical (lex-least) defining polynomial."""
    if e == 1:
        return FieldSpec(p, 1)
    prime = canonical_field(p, 1)
    for tail in itertools.product(range(p), repeat=e):
        cand = tail + (1,)
        if is_irreducible(GFPoly(prime, cand)):
            return FieldSpec(p, e, cand)
    raise ArithmeticError(f"no irreducible of degree {e} over F_{p}")  # pragma: no cover


def field_for_order(q: int) -> FieldSpec:
    """Canonical field with exactly q elements; q must be a prime power."""
    pe = is_prime_power(q)
    if pe is None:
        raise ValueError(f"{q} is not a prime power")
    return canonical_field(*pe)


class GFElem:
    """A field element: a FieldSpec together with its integer encoding."""

    __slots__ = ("field", "enc")

    def __init__(self, field: FieldSpec, enc: int):
        if not 0 <= enc < field.cardinality:
            raise ValueError(f"encoding {enc} out of range for {field}")
        self.field = field
        self.enc = enc

    @property
    def coords(self) -> tuple[int, ...]:
        return self.field.coords(self.enc)

    def _match(self, other) -> int:
        if not isinstance(other, GFElem):
            raise TypeError("expected a GFElem")
        if not (self.field is other.field or self.field == other.field):
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return other.enc

    def __add__(self, other):
        return GFElem(self.field, self.field.add(self.enc, self._match(other)))

    def __sub__(self, other):
        return GFElem(self.field, self.field.sub(self.enc, self._match(other)))

    def __neg__(self):
        return GFElem(self.field, self.field.neg(self.enc))

    def __mul__(self, other):
        return GFElem(self.field, self.field.mul(self.enc, self._match(other)))

    def __truediv__(self, other):
        return GFElem(self.field, self.field.div(self.enc, self._match(other)))

    def __pow__(self, k: int):
        return GFElem(self.field, self.field.pow(self.enc, k))

    def __bool__(self):
        return self.enc != 0

    def __eq__(self, other):
        return (
            isinstance(other, GFElem)
            and self.field == other.field
            and self.enc == other.enc
        )

    def __hash__(self):
        return hash((self.field, self.enc))

    def __repr__(self):
        return f"GFElem({self.field!r}, {self.enc})"


def elements(field: FieldSpec, ceiling: int = FIELD_CEILING) -> list[GFElem]:
    """All field elements in ascending encoding order."""
    if field.cardinality > ceiling:
        raise CeilingExceeded(
            f"{field} has {field.cardinality} elements, above ceiling {ceiling}"
        )
    return [GFElem(field, k) for k in range(field.cardinality)]


def element_order(field: FieldSpec, a: int) -> int:
    """Multiplicative order of a nonzero element."""
    if a == 0:
        raise ValueError("zero has no multiplicative order")
    order = field.cardinality - 1
    if order == 1:
        return 1
    for p in factorize(order).primes:
        while order % p == 0 and field.pow(a, order // p) == 1:
            order //= p
    return order


class GFPoly:
    """Dense polynomial over a FieldSpec, constant coefficient first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs=()):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if any(not 0 <= c < field.cardinality for c in coeffs):
            raise ValueError("coefficient encoding out of range")
        self.field = field
        self.coeffs = tuple(coeffs)

    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def one(cls, field):
        return cls(field, (1,))

    @classmethod
    def x(cls, field):
        return cls(field, (0, 1))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def monic(self) -> "GFPoly":
        if not self.coeffs or self.coeffs[-1] == 1:
            return self
        inv = self.field.inv(self.coeffs[-1])
        return GFPoly(self.field, [self.field.mul(c, inv) for c in self.coeffs])

    def _match(self, other) -> "GFPoly":
        if not isinstance(other, GFPoly):
            raise TypeError("expected a GFPoly")
        if not (self.field is other.field or self.field == other.field):
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return other

    def __add__(self, other):
        other = self._match(other)
        fld = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = fld.add(out[i], c)
        return GFPoly(fld, out)

    def __neg__(self):
        return GFPoly(self.field, [self.field.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._match(other))

    def __mul__(self, other):
        other = self._match(other)
        if not self.coeffs or not other.coeffs:
            return GFPoly.zero(self.field)
        fld = self.field
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = fld.add(out[i + j], fld.mul(a, b))
        return GFPoly(fld, out)

    def scale(self, s: int) -> "GFPoly":
        return GFPoly(self.field, [self.field.mul(s, c) for c in self.coeffs])

    def __divmod__(self, other):
        other = self._match(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        fld = self.field
        rem = list(self.coeffs)
        div = other.coeffs
        dd = len(div) - 1
        lead_inv = fld.inv(div[-1])
        quot = [0] * max(len(rem) - dd, 0)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i]
            if c:
                f = fld.mul(c, lead_inv)
                quot[i - dd] = f
                for j in range(dd + 1):
                    rem[i - dd + j] = fld.sub(rem[i - dd + j], fld.mul(f, div[j]))
        return GFPoly(fld, quot), GFPoly(fld, rem[:dd])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x: int) -> int:
        fld = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = fld.add(fld.mul(acc, x), c)
        return acc

    def __eq__(self, other):
        return (
            isinstance(other, GFPoly)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return f"GFPoly({self.field!r}, {list(self.coeffs)})"


def poly_to_text(f: GFPoly) -> str:
    """Coefficients as comma-separated integers, constant term first."""
    if f.is_zero():
        return "0"
    return ",".join(str(c) for c in f.coeffs)


def poly_from_text(text: str, field: FieldSpec) -> GFPoly:
    text = text.strip()
    if text in ("", "0"):
        return GFPoly.zero(field)
    return GFPoly(field, [int(t) for t in text.split(",")])


def poly_gcd(f: GFPoly, g: GFPoly) -> GFPoly:
    """Monic greatest common divisor; gcd(0, 0) = 0."""
    f._match(g)
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_powmod(base: GFPoly, k: int, mod: GFPoly) -> GFPoly:
    """base**k reduced mod a nonzero polynomial, by binary exponentiation."""
    if mod.is_zero():
        raise ZeroDivisionError("zero modulus")
    result = GFPoly.one(base.field)
    acc = base % mod
    while k:
        if k & 1:
            result = result * acc % mod
        acc = acc * acc % mod
        k >>= 1
    return result


def is_irreducible(f: GFPoly) -> bool:
    """Irreducibility over the coefficient field (Rabin's test).

    Unit scaling is irrelevant, so non-monic inputs are monicized first;
    constants are not irreducible.
    """
    if f.is_zero():
        raise ValueError("the zero polynomial has no irreducibility status")
    g = f.monic()
    d = len(g.coeffs) - 1
    if d == 0:
        return False
    if d == 1:
        return True
    q = g.field.cardinality
    x = GFPoly.x(g.field)
    if poly_powmod(x, q**d, g) != x % g:
        return False
    for r in factorize(d).primes:
        t = poly_powmod(x, q ** (d // r), g)
        if not poly_gcd(t - x, g).degree == 0:
            return False
    return True


def is_primitive(f: GFPoly, ceiling: int = None) -> bool:
    """True iff f is the minimal polynomial of a generator of F_{q^d}^*.

    Equivalently: f is irreducible and the class of X in F_q[X]/(f) has
    multiplicative order exactly q**d - 1 (checked by stripping the prime
    factors of q**d - 1).
    """
    if f.is_zero():
        raise ValueError("the zero polynomial is not primitive")
    g = f.monic()
    d = len(g.coeffs) - 1
    if d < 1:
        return False
    if not is_irreducible(g):
        return False
    if g.coeffs[0] == 0:  # g = X: the class of X is 0, not a unit
        return False
    q = g.field.cardinality
    group_order = q**d - 1
    if ceiling is not None and group_order > ceiling:
        raise CeilingExceeded(f"group order {group_order} above ceiling {ceiling}")
    if group_order == 1:
        return True
    x = GFPoly.x(g.field)
    one = GFPoly.one(g.field)
    for p in factorize(group_order).primes:
        if poly_powmod(x, group_order // p, g) == one:
            return False
    return True


def monic_polys(field: FieldSpec, degree: int):
    """All monic polynomials of the given degree, ascending by encoding."""
    for rev in itertools.product(range(field.cardinality), repeat=degree):
        yield GFPoly(field, rev[::-1] + (1,))


def polys_below_degree(field: FieldSpec, n: int):
    """All polynomials of degree < n (zero included), ascending by encoding."""
    q = field.cardinality
    for enc in range(q**n):
        yield GFPoly(field, _digits(enc, q, n))


def eval_embedded(f: GFPoly, embed, big: FieldSpec, x: int) -> int:
    """Evaluate f at x in a larger field, mapping coefficients through embed."""
    acc = 0
    for c in reversed(f.coeffs):
        acc = big.add(big.mul(acc, x), embed[c])
    return acc


class _LinearChart:
    """Coordinates of a big field relative to an embedded subfield.

    Fixes the basis {embed(beta_t) * gamma**i} where beta_t runs over the
    subfield's power basis and gamma is the big field's generator, and solves
    the prime-field change of basis once.
    """

    __slots__ = ("big", "small", "rel_degree", "_inv_rows", "_gamma_pows", "_embed")

    def __init__(self, big: FieldSpec, small: FieldSpec, embed):
        self.big = big
        self.small = small
        self._embed = embed
        k = big.degree // small.degree
        self.rel_degree = k
        gamma = big.p if big.degree > 1 else 1
        self._gamma_pows = [big.pow(gamma, i) for i in range(k)]
        cols = []
        for i in range(k):
            for t in range(small.degree):
                # small.p**t is the t-th power-basis element of the subfield
                elem = big.mul(embed[small.p**t], self._gamma_pows[i])
                cols.append(_digits(elem, big.p, big.degree))
        self._inv_rows = _invert_mod_p([list(r) for r in zip(*cols)], big.p)

    def coords(self, enc: int) -> tuple[int, ...]:
        p, d = self.big.p, self.big.degree
        vec = _digits(enc, p, d)
        sol = [sum(r[j] * vec[j] for j in range(d)) % p for r in self._inv_rows]
        sd = self.small.degree
        return tuple(
            _undigits(sol[i * sd:(i + 1) * sd], p) for i in range(self.rel_degree)
        )

    def from_coords(self, coords) -> int:
        big = self.big
        acc = 0
        for i, c in enumerate(coords):
            acc = big.add(acc, big.mul(self._embed[c], self._gamma_pows[i]))
        return acc


def _invert_mod_p(rows: list[list[int]], p: int) -> list[list[int]]:
    """Inverse of a square matrix over F_p by Gauss-Jordan elimination."""
    d = len(rows)
    aug = [list(rows[i]) + [1 if j == i else 0 for j in range(d)] for i in range(d)]
    for col in range(d):
        piv = next((r for r in range(col, d) if aug[r][col] % p), None)
        if piv is None:
            raise ValueError("matrix is singular over the prime field")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col], p - 2, p)
        aug[col] = [v * inv % p for v in aug[col]]
        for r in range(d):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [(v - f * w) % p for v, w in zip(aug[r], aug[col])]
    return [row[d:] for row in aug]


def _embedding_table(small: FieldSpec, big: FieldSpec) -> tuple[int, ...]:
    """Field embedding small -> big as a lookup table on encodings.

    Maps the subfield generator to the least root of the subfield's defining
    polynomial inside the big field.
    """
    if small.degree == big.degree:
        return tuple(range(small.cardinality))
    if small.degree == 1:
        # Prime subfield elements are the constant encodings in any field.
        return tuple(range(small.p))
    modulus = GFPoly(canonical_field(small.p, 1), small.modulus)
    prime_embed = tuple(range(small.p))
    root = next(
        (
            x
            for x in range(big.cardinality)
            if eval_embedded(modulus, prime_embed, big, x) == 0
        ),
        None,
    )
    if root is None:  # pragma: no cover
        raise ArithmeticError("subfield defining polynomial has no root upstairs")
    root_pows = [big.pow(root, t) for t in range(small.degree)]
    table = []
    for enc in range(small.cardinality):
        acc = 0
        for t, c in enumerate(_digits(enc, small.p, small.degree)):
            if c:
                acc = big.add(acc, big.mul(c, root_pows[t]))
        table.append(acc)
    return tuple(table)


class FieldTower:
    """The triple F_q < F_{q^m} < F_{q^mn} with fixed embeddings.

    Embedding tables map encodings; ``embed_base_top`` is by construction the
    composition of the two partial embeddings.  Charts convert top-field
    encodings to coordinate vectors over the base or mid field (and back),
    which is what every rank computation downstream consumes.
    """

    __slots__ = (
        "base", "mid", "top", "m", "n",
        "embed_base_mid", "embed_mid_top", "embed_base_top",
        "_top_over_base", "_top_over_mid", "_mid_over_base",
    )

    def __init__(self, base, mid, top, m, n):
        self.base = base
        self.mid = mid
        self.top = top
        self.m = m
        self.n = n
        self.embed_base_mid = _embedding_table(base, mid)
        self.embed_mid_top = _embedding_table(mid, top)
        self.embed_base_top = tuple(
            self.embed_mid_top[v] for v in self.embed_base_mid
        )
        self._top_over_base = _LinearChart(top, base, self.embed_base_top)
        self._top_over_mid = _LinearChart(top, mid, self.embed_mid_top)
        self._mid_over_base = _LinearChart(mid, base, self.embed_base_mid)

    @property
    def q(self) -> int:
        return self.base.cardinality

    def top_coords_over_base(self, enc: int) -> tuple[int, ...]:
        return self._top_over_base.coords(enc)

    def top_from_base_coords(self, coords) -> int:
        return self._top_over_base.from_coords(coords)

    def top_coords_over_mid(self, enc: int) -> tuple[int, ...]:
        return self._top_over_mid.coords(enc)

    def mid_coords_over_base(self, enc: int) -> tuple[int, ...]:
        return self._mid_over_base.coords(enc)

    def mid_from_base_coords(self, coords) -> int:
        return self._mid_over_base.from_coords(coords)

    def __repr__(self):
        return f"FieldTower({self.base!r} < {self.mid!r} < {self.top!r})"


@functools.lru_cache(maxsize=None)
def build_field_tower(
    p: int, e: int, m: int, n: int, ceiling: int = FIELD_CEILING
) -> FieldTower:
    """Construct F_q < F_{q^m} < F_{q^mn} for q = p**e, deterministically."""
    if not is_prime(p):
        raise ValueError(f"characteristic {p} is not prime")
    if min(e, m, n) < 1:
        raise ValueError("e, m, n must all be >= 1")
    if p ** (e * m * n) > ceiling:
        raise CeilingExceeded(
            f"top field size {p}**{e * m * n} exceeds ceiling {ceiling}"
        )
    base = canonical_field(p, e)
    mid = base if m == 1 else canonical_field(p, e * m)
    top = mid if n == 1 else canonical_field(p, e * m * n)
    return FieldTower(base, mid, top, m, n)


def min_poly_over_mid(tower: FieldTower, alpha: GFElem) -> GFPoly:
    """Monic minimal polynomial of a top-field element over the mid field."""
    if alpha.field != tower.top:
        raise FieldMismatch("alpha must lie in the top field of the tower")
    mid, n = tower.mid, tower.n
    pow_coords = [tower.top_coords_over_mid(1)]
    acc = 1
    for _ in range(n):
        acc = tower.top.mul(acc, alpha.enc)
        pow_coords.append(tower.top_coords_over_mid(acc))
    for k in range(1, n + 1):
        combo = _solve_over_field(mid, pow_coords[:k], pow_coords[k])
        if combo is not None:
            coeffs = [mid.neg(c) for c in combo] + [1]
            return GFPoly(mid, coeffs)
    raise ArithmeticError("no dependence found; chart is inconsistent")  # pragma: no cover


def _solve_over_field(field, rows, target):
    """Solve sum(c_i * rows[i]) = target over the field, or None if unsolvable."""
    k = len(rows)
    width = len(target)
    aug = [list(r) + [0] * k for r in rows]
    for i in range(k):
        aug[i][width + i] = 1
    tgt = list(target)
    pivots = []
    for row in aug:
        vec = row[:width]
        comb = row[width:]
        for col, (pvec, pcomb) in pivots:
            c = vec[col]
            if c:
                vec = [field.sub(v, field.mul(c, w)) for v, w in zip(vec, pvec)]
                comb = [field.sub(v, field.mul(c, w)) for v, w in zip(comb, pcomb)]
        lead = next((j for j, v in enumerate(vec) if v), None)
        if lead is None:
            continue  # dependent row; cannot happen for minimal k
        inv = field.inv(vec[lead])
        vec = [field.mul(inv, v) for v in vec]
        comb = [field.mul(inv, v) for v in comb]
        pivots.append((lead, (vec, comb)))
    # Reduce the target against the echelon rows.
    tcomb = [0] * k
    for col, (pvec, pcomb) in pivots:
        c = tgt[col]
        if c:
            tgt = [field.sub(v, field.mul(c, w)) for v, w in zip(tgt, pvec)]
            tcomb = [field.add(v, field.mul(c, w)) for v, w in zip(tcomb, pcomb)]
    if any(tgt):
        return None
    return tcomb


def element_degree_over_base(tower: FieldTower, enc: int) -> int:
    """Degree of the minimal polynomial of a top element over the base field."""
    rows = []
    acc = 1
    for k in range(tower.m * tower.n + 1):
        rows.append(tower.top_coords_over_base(acc))
        rank = _rank_over_field(tower.base, [list(r) for r in rows])
        if rank < len(rows):
            return k
        acc = tower.top.mul(acc, enc)
    raise ArithmeticError("degree exceeds the extension degree")  # pragma: no cover


def _rank_over_field(field, rows) -> int:
    rank = 0
    cols = len(rows[0]) if rows else 0
    work = [list(r) for r in rows]
    lead = 0
    for col in range(cols):
        piv = next((r for r in range(lead, len(work)) if work[r][col]), None)
        if piv is None:
            continue
        work[lead], work[piv] = work[piv], work[lead]
        inv = field.inv(work[lead][col])
        work[lead] = [field.mul(inv, v) for v in work[lead]]
        for r in range(len(work)):
            if r != lead and work[r][col]:
                c = work[r][col]
                work[r] = [
                    field.sub(v, field.mul(c, w))
                    for v, w in zip(work[r], work[lead])
                ]
        lead += 1
        rank += 1
        if lead == len(work):
            break
    return rank


def roots_in_top(tower: FieldTower, f: GFPoly) -> list[int]:
    """Roots (top-field encodings, ascending) of a base-field polynomial."""
    if f.field != tower.base:
        raise FieldMismatch("polynomial must have base-field coefficients")
    embed = tower.embed_base_top
    return [
        x
        for x in range(tower.top.cardinality)
        if eval_embedded(f, embed, tower.top, x) == 0
    ]
