"""Integer arithmetic support: factorization, totient, Moebius, polynomial counts.

All functions are pure and deterministic.  Factorization uses trial division
up to 2**20 followed by Brent's variant of Pollard's rho; primality testing is
Miller-Rabin with a witness set that is deterministic below 2**64.  Inputs are
capped at INT_CEILING (2**64 - 1 by default) so everything stays in native
word range on typical platforms.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from math import gcd, isqrt

INT_CEILING = 2**64 - 1

_TRIAL_LIMIT = 2**20

# Deterministic Miller-Rabin witnesses, valid for all n < 3.3 * 10**24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class CeilingExceeded(ValueError):
    """An input exceeds the configured arithmetic ceiling."""


@dataclass(frozen=True)
class Factorization:
    """Complete prime factorization: factors sorted ascending by prime."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        prev = 0
        for p, e in self.factors:
            if p <= prev:
                raise ValueError("primes must be strictly increasing")
            if e < 1:
                raise ValueError("exponents must be >= 1")
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            prod *= p**e
            prev = p
        if prod != self.value:
            raise ValueError("factors do not multiply back to value")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test (exact below 2**64)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int) -> int:
    """Find a nontrivial factor of composite odd n via Brent's cycle method.

    Deterministic: sweeps fixed (y0, c) parameters instead of random restarts.
    """
    if n % 2 == 0:
        return 2
    for c in range(1, 64):
        y, m = 2, 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed to split {n}")  # pragma: no cover


@functools.lru_cache(maxsize=4096)
def factorize(n: int, ceiling: int = INT_CEILING) -> Factorization:
    """Complete prime factorization of n >= 1."""
    if n < 1:
        raise ValueError(f"cannot factorize {n}; need n >= 1")
    if n > ceiling:
        raise CeilingExceeded(f"{n} exceeds ceiling {ceiling}")
    factors: dict[int, int] = {}
    rem = n
    for p in (2, 3):
        while rem % p == 0:
            factors[p] = factors.get(p, 0) + 1
            rem //= p
    p = 5
    while p <= _TRIAL_LIMIT and p * p <= rem:
        for cand in (p, p + 2):
            while rem % cand == 0:
                factors[cand] = factors.get(cand, 0) + 1
                rem //= cand
        p += 6
    # What survives trial division is either 1, prime, or a product of
    # primes all larger than the trial limit; split those with rho.
    stack = [rem] if rem > 1 else []
    while stack:
        v = stack.pop()
        if v == 1:
            continue
        if is_prime(v):
            factors[v] = factors.get(v, 0) + 1
            continue
        d = _brent_rho(v)
        stack.append(d)
        stack.append(v // d)
    return Factorization(n, tuple(sorted(factors.items())))


def euler_phi(n: int) -> int:
    """Euler totient phi(n)."""
    result = n
    for p, _ in factorize(n).factors:
        result = result // p * (p - 1)
    return result


def moebius(n: int) -> int:
    """Moebius function: 0 on non-squarefree n, else (-1)**(number of primes)."""
    fac = factorize(n)
    if any(e > 1 for _, e in fac.factors):
        return 0
    return -1 if len(fac.factors) % 2 else 1


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    divs = [1]
    for p, e in factorize(n).factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def is_prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, e) with q = p**e if q is a prime power, else None."""
    if q < 2:
        return None
    fac = factorize(q)
    if len(fac.factors) != 1:
        return None
    return fac.factors[0]


def _checked_pow(q: int, d: int, ceiling: int) -> int:
    v = q**d
    if v > ceiling:
        raise CeilingExceeded(f"{q}**{d} exceeds ceiling {ceiling}")
    return v


def count_primitive_polys(q: int, d: int, ceiling: int = INT_CEILING) -> int:
    """Number of primitive polynomials of degree d over F_q: phi(q**d - 1)/d."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    if is_prime_power(q) is None:
        raise ValueError(f"{q} is not a prime power")
    total = euler_phi(_checked_pow(q, d, ceiling) - 1)
    if total % d:
        raise ArithmeticError(
            f"phi({q}**{d}-1) = {total} not divisible by {d}; arithmetic bug"
        )
    return total // d


def count_irreducible_polys(q: int, d: int, ceiling: int = INT_CEILING) -> int:
    """Number of monic irreducible polynomials of degree d over F_q.

    Computed by the Moebius-inversion formula (1/d) * sum over e | d of
    mu(d/e) * q**e.
    """
    if d < 1:
        raise ValueError("degree must be >= 1")
    if is_prime_power(q) is None:
        raise ValueError(f"{q} is not a prime power")
    _checked_pow(q, d, ceiling)
    total = sum(moebius(d // e) * q**e for e in divisors(d))
    if total % d:
        raise ArithmeticError(f"irreducible-count sum {total} not divisible by {d}")
    return total // d
