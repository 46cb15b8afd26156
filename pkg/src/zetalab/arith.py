"""Exact number foundations: rationals, primes, and finite fields F_{p^r}.

Finite fields use a polynomial basis over F_p with an explicitly chosen
monic irreducible modulus.  The modulus is always the lexicographically
least irreducible monic polynomial of the right degree (constant
coefficient varying fastest), so field construction is deterministic
across runs and machines and cached point counts stay reproducible.
No Zech-log tables: the fields used for counting are too large for table
precomputation to pay off, and plain modular polynomial arithmetic keeps
the enumeration loops predictable.

Everything here is immutable after construction and safe to share.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

# Exact rational numbers.  fractions.Fraction already maintains the two
# invariants we need (lowest terms, positive denominator), so it *is* our
# big-rational type.
BigRational = Fraction

__all__ = [
    "BigRational",
    "PrimePower",
    "FiniteField",
    "FiniteFieldElement",
    "DegreeCapError",
    "is_prime",
    "primes_up_to",
    "make_extension_field",
    "fp_poly_mulmod",
    "fp_poly_gcd",
    "fp_poly_powmod_x",
    "fp_squarefree_part",
    "fp_factor_degree_pattern",
]

DEFAULT_DEGREE_CAP = 24


class DegreeCapError(ValueError):
    """Requested extension degree exceeds the configured enumeration cap."""


# Deterministic Miller-Rabin.  This witness set decides primality
# correctly for every n < 3.3 * 10^24, which covers the documented
# contract (p < 2^64) with a wide margin.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(limit: int) -> list[int]:
    """All primes <= limit, ascending.  limit < 2 gives the empty list."""
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(limit**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i in range(2, limit + 1) if sieve[i]]


@dataclass(frozen=True)
class PrimePower:
    """q = p^r with p prime.  The base cardinality of a finite field."""

    p: int
    r: int = 1
    q: int = field(init=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.r < 1:
            raise ValueError("exponent must be positive")
        object.__setattr__(self, "q", self.p**self.r)

    def __repr__(self):
        return f"PrimePower(p={self.p}, r={self.r})"


# ---------------------------------------------------------------------------
# Polynomial arithmetic over F_p.  Coefficient tuples, low degree first.
# These helpers also serve the distinct-degree factor pattern used by the
# L-function layer, so they live here rather than inside FiniteField.
# ---------------------------------------------------------------------------


def _fp_trim(a):
    d = len(a) - 1
    while d >= 0 and a[d] == 0:
        d -= 1
    return tuple(a[: d + 1])


def fp_poly_mulmod(a, b, mod, p):
    """(a*b) mod (mod) over F_p; mod monic, low-first coefficient tuples."""
    deg = len(mod) - 1
    res = [0] * (len(a) + len(b) - 1 if a and b else 0)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    res[i + j] = (res[i + j] + ai * bj) % p
    for i in range(len(res) - 1, deg - 1, -1):
        c = res[i]
        if c:
            res[i] = 0
            for j in range(deg):
                res[i - deg + j] = (res[i - deg + j] - c * mod[j]) % p
    res = res[:deg]
    while len(res) < deg:
        res.append(0)
    return tuple(res)


def fp_poly_divmod(a, b, p):
    """Quotient and remainder of a by b over F_p (b nonzero)."""
    a = list(a)
    b = _fp_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    inv = pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - db, 0)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] % p
        if c:
            f = c * inv % p
            q[i - db] = f
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - f * b[j]) % p
    return _fp_trim(q), _fp_trim(a)


def fp_poly_gcd(a, b, p):
    """Monic gcd over F_p."""
    a, b = _fp_trim(a), _fp_trim(b)
    while b:
        a, b = b, fp_poly_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], p - 2, p)
        a = tuple(c * inv % p for c in a)
    return a


def fp_poly_powmod_x(e, mod, p):
    """x^e mod (mod) over F_p by square and multiply."""
    deg = len(mod) - 1
    if deg == 1:
        base = ((-mod[0]) % p,)
    else:
        base = (0, 1) + (0,) * (deg - 2)
    result = (1,) + (0,) * (deg - 1)
    while e:
        if e & 1:
            result = fp_poly_mulmod(result, base, mod, p)
        base = fp_poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _fp_is_irreducible(mod, p):
    # Monic f of degree d is irreducible over F_p iff x^(p^d) = x (mod f)
    # and gcd(x^(p^(d/t)) - x, f) = 1 for every prime t dividing d.
    d = len(mod) - 1
    if d == 1:
        return True
    if mod[0] == 0:  # divisible by x
        return False

    def frob_power(k):
        # x^(p^k) mod f
        cur = (0, 1) + (0,) * (d - 2)
        for _ in range(k):
            out = (1,) + (0,) * (d - 1)
            base, e = cur, p
            while e:
                if e & 1:
                    out = fp_poly_mulmod(out, base, mod, p)
                base = fp_poly_mulmod(base, base, mod, p)
                e >>= 1
            cur = out
        return cur

    x_poly = (0, 1) + (0,) * (d - 2)
    if frob_power(d) != x_poly:
        return False
    t = d
    prime_divs = set()
    f = 2
    while f * f <= t:
        if t % f == 0:
            prime_divs.add(f)
            while t % f == 0:
                t //= f
        f += 1
    if t > 1:
        prime_divs.add(t)
    for t in prime_divs:
        g = frob_power(d // t)
        diff = tuple((gi - (1 if i == 1 else 0)) % p for i, gi in enumerate(g))
        if len(fp_poly_gcd(diff, mod, p)) - 1 > 0:
            return False
    return True


def _lex_least_irreducible(p, d):
    """Least monic irreducible of degree d over F_p, constant digit fastest.

    For d = 1 this returns x (the "modulus x - 0" convention for prime
    fields).  For (p, d) = (3, 2) the scan hits x^2 + 1, matching an
    exhaustive irreducibility scan of the monic quadratics in this order.
    """
    for k in range(p**d):
        digits = []
        kk = k
        for _ in range(d):
            digits.append(kk % p)
            kk //= p
        mod = tuple(digits) + (1,)
        if _fp_is_irreducible(mod, p):
            return mod
    raise AssertionError(f"no irreducible of degree {d} over F_{p}")  # unreachable


def fp_squarefree_part(f, p):
    """Squarefree part of f over F_p (product of distinct irreducible factors).

    Handles the char-p pitfall f' = 0 (f a polynomial in x^p) by taking
    p-th roots, which over F_p is the coefficient-index division x^p -> x.
    """
    f = _fp_trim(f)
    if len(f) <= 1:
        return f
    deriv = _fp_trim(tuple(c * i % p for i, c in enumerate(f))[1:])
    if not deriv:
        # f = g(x^p) = (p-th power of the root-coefficient polynomial)
        root = tuple(f[i] for i in range(0, len(f), p))
        return fp_squarefree_part(root, p)
    g = fp_poly_gcd(f, deriv, p)
    sf = fp_poly_divmod(f, g, p)[0]
    # the quotient may still share factors with g when multiplicities are >= p
    extra = fp_squarefree_part(g, p)
    h = fp_poly_gcd(sf, extra, p)
    rest = fp_poly_divmod(extra, h, p)[0]
    out = tuple(sf)
    if len(rest) > 1:
        prod = [0] * (len(out) + len(rest) - 1)
        for i, a in enumerate(out):
            for j, b in enumerate(rest):
                prod[i + j] = (prod[i + j] + a * b) % p
        out = _fp_trim(prod)
    inv = pow(out[-1], p - 2, p)
    return tuple(c * inv % p for c in out)


def fp_factor_degree_pattern(f, p):
    """Degrees of the distinct irreducible factors of f over F_p.

    Returns {degree: count} for the squarefree part of f, by
    distinct-degree factorization: gcd(x^(p^k) - x, f) collects exactly
    the irreducible factors of degree dividing k.  Root counts over
    extensions follow: f has sum(k * count[k] for k | n) roots in F_{p^n}.
    """
    f = fp_squarefree_part(f, p)
    pattern: dict[int, int] = {}
    k = 0
    while len(f) - 1 > 0:
        k += 1
        if 2 * k > len(f) - 1:
            # what is left is a single irreducible factor
            pattern[len(f) - 1] = pattern.get(len(f) - 1, 0) + 1
            break
        xpk = fp_poly_powmod_x(p**k, f, p)
        diff = tuple((c - (1 if i == 1 else 0)) % p for i, c in enumerate(xpk))
        g = fp_poly_gcd(diff, f, p)
        dg = len(g) - 1
        if dg > 0:
            pattern[k] = dg // k
            f = fp_poly_divmod(f, g, p)[0]
    return pattern


# ---------------------------------------------------------------------------
# Field objects
# ---------------------------------------------------------------------------


class FiniteField:
    """F_{p^degree} in polynomial basis, elements are coefficient tuples.

    The raw tuple interface (add/mul/... on tuples) is what the counting
    loops use; FiniteFieldElement wraps a tuple for operator syntax.
    """

    def __init__(self, p: int, degree: int, modulus: tuple[int, ...] | None = None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if degree < 1:
            raise ValueError("degree must be positive")
        if modulus is None:
            modulus = _lex_least_irreducible(p, degree)
        else:
            modulus = tuple(c % p for c in modulus)
            if len(modulus) != degree + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of the field degree")
            if not _fp_is_irreducible(modulus, p):
                raise ValueError("modulus is not irreducible")
        self.p = p
        self.degree = degree
        self.modulus = modulus
        self.order = p**degree
        self.zero = (0,) * degree
        self.one = (1,) + (0,) * (degree - 1)

    def __repr__(self):
        return f"FiniteField(p={self.p}, degree={self.degree})"

    def __eq__(self, other):
        return (
            isinstance(other, FiniteField)
            and (self.p, self.degree, self.modulus) == (other.p, other.degree, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.degree, self.modulus))

    # --- tuple-level arithmetic ---

    def from_int(self, c: int) -> tuple[int, ...]:
        return (c % self.p,) + (0,) * (self.degree - 1)

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a, b):
        return fp_poly_mulmod(a, b, self.modulus, self.p)

    def square(self, a):
        return fp_poly_mulmod(a, a, self.modulus, self.p)

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero")
        # a^(q-2); fine at these sizes and avoids an extended-gcd code path
        return self.pow(a, self.order - 2)

    def frobenius(self, a):
        """x -> x^p, the absolute Frobenius."""
        return self.pow(a, self.p)

    def elements(self):
        """All field elements as tuples, fixed lexicographic order."""
        for tup in itertools.product(range(self.p), repeat=self.degree):
            yield tup

    def element(self, coeffs) -> "FiniteFieldElement":
        coeffs = tuple(c % self.p for c in coeffs)
        if len(coeffs) != self.degree:
            raise ValueError("coefficient vector length must equal the field degree")
        return FiniteFieldElement(self, coeffs)


class FiniteFieldElement:
    """A field element: a coefficient vector tied to its field descriptor."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field_: FiniteField, coeffs: tuple[int, ...]):
        self.field = field_
        self.coeffs = coeffs

    def _check(self, other):
        if self.field != other.field:
            raise ValueError("elements of different fields")

    def __add__(self, other):
        self._check(other)
        return FiniteFieldElement(self.field, self.field.add(self.coeffs, other.coeffs))

    def __sub__(self, other):
        self._check(other)
        return FiniteFieldElement(self.field, self.field.sub(self.coeffs, other.coeffs))

    def __neg__(self):
        return FiniteFieldElement(self.field, self.field.neg(self.coeffs))

    def __mul__(self, other):
        self._check(other)
        return FiniteFieldElement(self.field, self.field.mul(self.coeffs, other.coeffs))

    def __pow__(self, e):
        return FiniteFieldElement(self.field, self.field.pow(self.coeffs, e))

    def inverse(self):
        return FiniteFieldElement(self.field, self.field.inv(self.coeffs))

    def __eq__(self, other):
        return (
            isinstance(other, FiniteFieldElement)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return f"FFElt{self.coeffs}@F_{self.field.p}^{self.field.degree}"


def make_extension_field(pp: PrimePower, n: int, cap: int = DEFAULT_DEGREE_CAP) -> FiniteField:
    """The field F_{q^n} for q = p^r, i.e. F_p of degree r*n.

    Construction is deterministic for fixed (p, r*n): the modulus is the
    lex-least irreducible monic polynomial.  Degrees beyond `cap` are
    rejected, since every consumer of these fields enumerates them.
    """
    if n < 1:
        raise ValueError("extension degree must be positive")
    total = pp.r * n
    if total > cap:
        raise DegreeCapError(
            f"extension degree {total} = {pp.r}*{n} exceeds the cap {cap}; "
            f"raise the cap explicitly if enumeration of p^{total} elements is intended"
        )
    return FiniteField(pp.p, total)
