"""Exact truncated power series over Q, polynomial algebra, and root extraction.

All series and polynomial arithmetic is exact (Fraction coefficients);
floating point enters only at root extraction, which runs at a
configurable decimal precision (default 50 digits).  The exact side and
the approximate side meet in one place: a root multiset whose
multiplicities come from exact gcd computations, never from numerical
multiplicity guessing.

Polynomials are coefficient tuples, low degree first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

__all__ = [
    "PowerSeries",
    "RationalFunction",
    "RootCluster",
    "PadeError",
    "RootFindingError",
    "exp_series",
    "log_series",
    "log_det_series",
    "pade_reconstruct",
    "polynomial_roots",
    "roots_with_moduli",
    "power_sums_inverse_roots",
    "squarefree_decomposition",
]

DEFAULT_PRECISION = 50


class PadeError(ValueError):
    pass


class RootFindingError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Polynomial helpers over Q (tuples, low degree first)
# ---------------------------------------------------------------------------


def poly_trim(c):
    c = tuple(c)
    d = len(c) - 1
    while d >= 0 and c[d] == 0:
        d -= 1
    return c[: d + 1]


def poly_deg(c):
    c = poly_trim(c)
    return len(c) - 1  # -1 for the zero polynomial


def poly_add(a, b):
    n = max(len(a), len(b))
    a = tuple(a) + (0,) * (n - len(a))
    b = tuple(b) + (0,) * (n - len(b))
    return poly_trim(x + y for x, y in zip(a, b))


def poly_sub(a, b):
    n = max(len(a), len(b))
    a = tuple(a) + (0,) * (n - len(a))
    b = tuple(b) + (0,) * (n - len(b))
    return poly_trim(x - y for x, y in zip(a, b))


def poly_mul(a, b):
    a, b = poly_trim(a), poly_trim(b)
    if not a or not b:
        return ()
    res = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                res[i + j] += x * y
    return tuple(res)


def poly_scale(a, c):
    return poly_trim(x * c for x in a)


def poly_eval(a, x):
    acc = 0 * x if a else 0
    for c in reversed(tuple(a)):
        acc = acc * x + c
    return acc


def poly_deriv(a):
    return poly_trim(tuple(i * c for i, c in enumerate(a))[1:])


def poly_divmod(a, b):
    """Exact division with remainder over Q."""
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in poly_trim(b)]
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    lead = b[-1]
    q = [Fraction(0)] * max(len(a) - db, 1)
    for i in range(len(a) - 1, db - 1, -1):
        if a[i]:
            f = a[i] / lead
            q[i - db] = f
            for j in range(db + 1):
                a[i - db + j] -= f * b[j]
    return poly_trim(q), poly_trim(a)


def poly_gcd(a, b):
    """Monic gcd over Q (1 for coprime inputs, () only if both are 0)."""
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    if a:
        lead = Fraction(a[-1])
        a = tuple(Fraction(c) / lead for c in a)
    return a


def _poly_exact_div(a, b):
    q, r = poly_divmod(a, b)
    if r:
        raise ValueError("division is not exact")
    return q


def squarefree_decomposition(P):
    """Yun's algorithm over Q: P = prod of part^mult with squarefree parts.

    Returns [(part, mult)] with parts pairwise coprime and squarefree,
    omitting trivial (constant) parts.  The constant content is dropped:
    callers here always feed polynomials with constant term 1 and rebuild
    from roots, so only the root structure matters.
    """
    P = poly_trim(P)
    if poly_deg(P) < 1:
        return []
    d = poly_gcd(P, poly_deriv(P))
    if poly_deg(d) == 0:
        return [(P, 1)]
    b = _poly_exact_div(P, d)
    c = _poly_exact_div(poly_deriv(P), d)
    out = []
    i = 1
    while poly_deg(b) > 0:
        z = poly_sub(c, poly_deriv(b))
        a = poly_gcd(b, z)
        if poly_deg(a) > 0:
            out.append((a, i))
        b = _poly_exact_div(b, a)
        if poly_deg(b) == 0:
            break
        c = _poly_exact_div(z, a)
        i += 1
    return out


def power_sums_inverse_roots(P, m):
    """p_n = sum of n-th powers of the inverse roots of P, n = 1..m.

    P(t) = prod (1 - lam_i t) with P(0) = 1; Newton's identities on the
    elementary symmetric functions e_i = (-1)^i * coeff_i.  Exact.
    """
    P = poly_trim(P)
    if not P or P[0] != 1:
        raise ValueError("normalized polynomial with constant term 1 expected")
    deg = len(P) - 1
    e = [(-1) ** i * Fraction(P[i]) if i <= deg else Fraction(0) for i in range(m + 1)]
    p = [Fraction(0)] * (m + 1)
    for n in range(1, m + 1):
        acc = (-1) ** (n - 1) * n * (e[n] if n <= deg else 0)
        for i in range(1, n):
            if i <= deg and e[i]:
                acc += (-1) ** (i - 1) * e[i] * p[n - i]
        p[n] = Fraction(acc)
    return [x if x.denominator != 1 else x for x in p[1:]]


# ---------------------------------------------------------------------------
# Exact linear algebra over Q (small dense systems)
# ---------------------------------------------------------------------------


def mat_rref(rows):
    """Row-reduce over Q.  Returns (rref rows, pivot column list)."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def mat_rank(rows):
    return len(mat_rref(rows)[1])


def mat_nullspace(rows):
    """Right kernel basis over Q, deterministic (one vector per free column)."""
    if not rows:
        return []
    red, pivots = mat_rref(rows)
    ncols = len(rows[0])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def mat_mul(a, b):
    return [
        [sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in zip(*b)]
        for row in a
    ]


def mat_identity(n):
    return [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]


def det_identity_minus_t(mat):
    """det(I - t*M) as an exact coefficient tuple, via the trace recurrence.

    Faddeev-LeVerrier: c_0 = 1, A_1 = M, c_k = -trace(M @ (A_{k-1} + c_{k-1} I))/k.
    Then det(I - tM) = sum c_k t^k.
    """
    n = len(mat)
    M = [[Fraction(x) for x in row] for row in mat]
    if any(len(row) != n for row in M):
        raise ValueError("square matrix expected")
    coeffs = [Fraction(1)]
    A = None
    for k in range(1, n + 1):
        if A is None:
            A = [row[:] for row in M]
        else:
            B = [[A[i][j] + (coeffs[-1] if i == j else 0) for j in range(n)] for i in range(n)]
            A = mat_mul(M, B)
        c = -sum(A[i][i] for i in range(n)) / k
        coeffs.append(c)
    return poly_trim(coeffs) if coeffs[-1] == 0 else tuple(coeffs)


# ---------------------------------------------------------------------------
# Power series
# ---------------------------------------------------------------------------


class PowerSeries:
    """Truncated power series over Q with explicit truncation order.

    Arithmetic never silently extends the truncation: binary operations
    truncate to the smaller order of the two operands.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = tuple(Fraction(c) for c in coeffs)
        if not self.coeffs:
            raise ValueError("a series needs at least the constant term")

    @property
    def order(self):
        return len(self.coeffs) - 1

    def __getitem__(self, n):
        return self.coeffs[n]

    def __eq__(self, other):
        return isinstance(other, PowerSeries) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:6])
        tail = ", ..." if len(self.coeffs) > 6 else ""
        return f"PowerSeries([{head}{tail}]; order={self.order})"

    def truncate(self, M):
        if M > self.order:
            raise ValueError("cannot extend a truncated series")
        return PowerSeries(self.coeffs[: M + 1])

    def __add__(self, other):
        M = min(self.order, other.order)
        return PowerSeries([self.coeffs[i] + other.coeffs[i] for i in range(M + 1)])

    def __sub__(self, other):
        M = min(self.order, other.order)
        return PowerSeries([self.coeffs[i] - other.coeffs[i] for i in range(M + 1)])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return PowerSeries([c * other for c in self.coeffs])
        M = min(self.order, other.order)
        out = [Fraction(0)] * (M + 1)
        for i, x in enumerate(self.coeffs[: M + 1]):
            if x:
                for j, y in enumerate(other.coeffs[: M + 1 - i]):
                    out[i + j] += x * y
        return PowerSeries(out)

    __rmul__ = __mul__

    @classmethod
    def one(cls, M):
        return cls((Fraction(1),) + (Fraction(0),) * M)


def exp_series(s: PowerSeries) -> PowerSeries:
    """exp of a series with zero constant term, truncation preserving."""
    if s.coeffs[0] != 0:
        raise ValueError("exp_series needs constant term 0")
    M = s.order
    e = [Fraction(1)] + [Fraction(0)] * M
    for n in range(1, M + 1):
        acc = Fraction(0)
        for k in range(1, n + 1):
            if s.coeffs[k]:
                acc += k * s.coeffs[k] * e[n - k]
        e[n] = acc / n
    return PowerSeries(e)


def log_series(s: PowerSeries) -> PowerSeries:
    """log of a series with constant term 1; inverse of exp_series."""
    if s.coeffs[0] != 1:
        raise ValueError("log_series needs constant term 1")
    M = s.order
    l = [Fraction(0)] * (M + 1)
    for n in range(1, M + 1):
        acc = n * s.coeffs[n]
        for k in range(1, n):
            if l[k]:
                acc -= k * l[k] * s.coeffs[n - k]
        l[n] = Fraction(acc, n)
    return PowerSeries(l)


def log_det_series(mat, M: int) -> PowerSeries:
    """sum_n trace(mat^n) t^n / n to order M, exactly.

    This is the series log(1/det(I - t*mat)); the equality with
    log_series of the reciprocal of det_identity_minus_t is a test
    invariant, not assumed here.
    """
    n = len(mat)
    if any(len(row) != n for row in mat):
        raise ValueError("square matrix expected")
    if M < 1:
        raise ValueError("order must be >= 1")
    A = [[Fraction(x) for x in row] for row in mat]
    power = A
    out = [Fraction(0)] * (M + 1)
    for k in range(1, M + 1):
        if k > 1:
            power = mat_mul(power, A)
        out[k] = Fraction(sum(power[i][i] for i in range(n)), k)
    return PowerSeries(out)


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------


class RationalFunction:
    """num/den with both constant terms 1 and gcd(num, den) = 1 over Q."""

    __slots__ = ("num", "den")

    def __init__(self, num, den, reduce=True):
        num = poly_trim(tuple(Fraction(c) for c in num))
        den = poly_trim(tuple(Fraction(c) for c in den))
        if not num or not den or num[0] == 0 or den[0] == 0:
            raise ValueError("numerator and denominator need nonzero constant terms")
        if reduce:
            g = poly_gcd(num, den)
            if poly_deg(g) > 0:
                num = _poly_exact_div(num, g)
                den = _poly_exact_div(den, g)
        num = tuple(Fraction(c) / num[0] for c in num)
        den = tuple(Fraction(c) / den[0] for c in den)
        self.num = num
        self.den = den

    def __eq__(self, other):
        return (
            isinstance(other, RationalFunction)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunction(num={self.num}, den={self.den})"

    def num_int(self):
        """Numerator as an integer tuple (raises if not integral)."""
        if any(c.denominator != 1 for c in self.num):
            raise ValueError("numerator has non-integer coefficients")
        return tuple(int(c) for c in self.num)

    def den_int(self):
        if any(c.denominator != 1 for c in self.den):
            raise ValueError("denominator has non-integer coefficients")
        return tuple(int(c) for c in self.den)

    def expand(self, M: int) -> PowerSeries:
        """Taylor expansion at 0 to order M, exact."""
        inv = [Fraction(0)] * (M + 1)
        inv[0] = Fraction(1)
        d = self.den
        for n in range(1, M + 1):
            acc = Fraction(0)
            for k in range(1, min(n, len(d) - 1) + 1):
                acc += d[k] * inv[n - k]
            inv[n] = -acc
        out = [Fraction(0)] * (M + 1)
        for i, c in enumerate(self.num[: M + 1]):
            if c:
                for j in range(M + 1 - i):
                    out[i + j] += c * inv[j]
        return PowerSeries(out)

    def eval(self, x):
        """Evaluate at x (Fraction for exact, complex/mpmath for numeric)."""
        return poly_eval(self.num, x) / poly_eval(self.den, x)

    def substitute_scaled(self, c):
        """t -> c*t with c an exact rational scalar."""
        c = Fraction(c)
        num = tuple(co * c**i for i, co in enumerate(self.num))
        den = tuple(co * c**i for i, co in enumerate(self.den))
        return RationalFunction(num, den)

    def __mul__(self, other):
        return RationalFunction(poly_mul(self.num, other.num), poly_mul(self.den, other.den))

    def reciprocal(self):
        return RationalFunction(self.den, self.num, reduce=False)

    @classmethod
    def one(cls):
        return cls((1,), (1,))


def pade_reconstruct(s: PowerSeries, deg_num: int, deg_den: int) -> RationalFunction:
    """The rational function with the given degree bounds matching s.

    Exact linear algebra over Q: the denominator comes from the null
    space of the Hankel-style system, the numerator from multiplying
    back.  The match to order deg_num + deg_den is verified before
    returning; failure raises PadeError.
    """
    if deg_num < 0 or deg_den < 0:
        raise PadeError("degree bounds must be non-negative")
    if s.coeffs[0] != 1:
        raise PadeError("series must have constant term 1")
    need = deg_num + deg_den
    if s.order < need:
        raise PadeError(
            f"underdetermined: need the series to order {need}, have {s.order}"
        )
    c = s.coeffs
    if deg_den == 0:
        den = (Fraction(1),)
        b = [Fraction(1)]
    else:
        rows = []
        for n in range(deg_num + 1, need + 1):
            rows.append([c[n - j] if 0 <= n - j else Fraction(0) for j in range(deg_den + 1)])
        null = mat_nullspace(rows)
        if not null:
            raise PadeError("no solution at the stated degrees")
        b = null[0]
        if b[0] == 0:
            # a vanishing leading denominator coefficient means the stated
            # degrees are wrong for this series
            nonzero = [v for v in null if v[0] != 0]
            if not nonzero:
                raise PadeError("no solution at the stated degrees")
            b = nonzero[0]
        den = tuple(x / b[0] for x in b)
    num = []
    for n in range(deg_num + 1):
        num.append(sum(den[j] * c[n - j] for j in range(min(n, deg_den) + 1)))
    num = poly_trim(num) or (Fraction(0),)
    if num[0] == 0:
        raise PadeError("no solution at the stated degrees")
    cand = RationalFunction(num, den)
    exp = cand.expand(need)
    if tuple(exp.coeffs) != tuple(c[: need + 1]):
        raise PadeError("no solution at the stated degrees")
    return cand


# ---------------------------------------------------------------------------
# Root extraction
# ---------------------------------------------------------------------------


@dataclass
class RootCluster:
    """All complex roots of an integer polynomial with exact multiplicities."""

    polynomial: tuple
    roots: list  # (approximation mpc, multiplicity int, modulus mpf)
    precision: int

    def total_multiplicity(self):
        return sum(m for _, m, _ in self.roots)

    def reconstruct(self):
        """Rebuild prod (1 - t/root)^mult as high-precision coefficients."""
        with mpmath.workdps(self.precision + 10):
            poly = [mpmath.mpc(1)]
            for root, mult, _ in self.roots:
                for _ in range(mult):
                    # multiply by (1 - t/root)
                    nxt = [mpmath.mpc(0)] * (len(poly) + 1)
                    for i, co in enumerate(poly):
                        nxt[i] += co
                        nxt[i + 1] -= co / root
                    poly = nxt
            return poly


def _mp_exact(c):
    """mpmath value from an int or Fraction without float round-off."""
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    return mpmath.mpf(c)


def _newton_polish(sf_coeffs, x0, precision):
    """Refine a simple root of the square-free factor by Newton iteration."""
    d = [mpmath.mpc(_mp_exact(c)) for c in sf_coeffs]
    dp = [mpmath.mpc(_mp_exact(i * c)) for i, c in enumerate(sf_coeffs)][1:]
    x = mpmath.mpc(x0)
    target = mpmath.mpf(10) ** (-(precision + 5))
    for _ in range(200):
        fx = mpmath.polyval(list(reversed(d)), x)
        fpx = mpmath.polyval(list(reversed(dp)), x)
        if fpx == 0:
            break
        step = fx / fpx
        x = x - step
        if abs(step) <= target * max(1, abs(x)):
            return x
    return x


def _cluster_with_retry(P, precision):
    for attempt, prec in enumerate((precision, 2 * precision)):
        try:
            return _roots_attempt(P, prec, report_precision=precision)
        except RootFindingError:
            if attempt == 1:
                raise
    raise AssertionError("unreachable")


def roots_with_moduli(P, precision: int = DEFAULT_PRECISION) -> RootCluster:
    """All complex roots of P (integer coefficients, P(0) = 1), with moduli.

    Multiplicities are exact (Yun decomposition over Q); approximations
    start from companion-matrix eigenvalues (numpy) and are polished by
    Newton iteration on the square-free part at the working precision.
    Non-real roots are paired with their conjugates by construction.
    Raises RootFindingError if the residual check fails after escalation.
    """
    P = poly_trim(P)
    if poly_deg(P) < 1:
        raise ValueError("degree must be >= 1")
    if P[0] != 1:
        raise ValueError("normalized polynomial with P(0) = 1 expected")
    return _cluster_with_retry(P, precision)


def polynomial_roots(P, precision: int = DEFAULT_PRECISION):
    """Roots of an arbitrary rational-coefficient polynomial.

    Same machinery as roots_with_moduli without the P(0) = 1
    normalization requirement.  Returns [(approximation, multiplicity)];
    roots at 0 are split off exactly before the numeric stage.
    """
    P = poly_trim(tuple(Fraction(c) for c in P))
    if poly_deg(P) < 1:
        raise ValueError("degree must be >= 1")
    zeros = 0
    while P and P[0] == 0:
        P = P[1:]
        zeros += 1
    out = []
    if zeros:
        out.append((mpmath.mpc(0), zeros))
    if poly_deg(P) >= 1:
        cluster = _cluster_with_retry(P, precision)
        out.extend((x, m) for x, m, _ in cluster.roots)
    return out


def _roots_attempt(P, prec, report_precision):
    degree = poly_deg(P)
    maxc = max(abs(Fraction(c)) for c in P)
    residual_bound = mpmath.mpf(10) ** (-(report_precision) + degree) * max(1, float(maxc))
    roots = []
    with mpmath.workdps(prec + 15):
        for part, mult in squarefree_decomposition(P):
            part = poly_trim(part)
            d = poly_deg(part)
            if d == 1:
                exact = -Fraction(part[0]) / Fraction(part[1])
                roots.append((mpmath.mpc(_mp_exact(exact)), mult))
                continue
            seeds = np.roots([float(c) for c in reversed(part)])
            polished = []
            for seed in seeds:
                x = _newton_polish(part, complex(seed), prec)
                polished.append(x)
            # conjugate symmetry: snap near-real roots, average conjugate pairs
            snap = mpmath.mpf(10) ** (-(prec // 2))
            cleaned = []
            used = [False] * len(polished)
            for i, x in enumerate(polished):
                if used[i]:
                    continue
                if abs(mpmath.im(x)) < snap * max(1, abs(x)):
                    cleaned.append(mpmath.mpc(mpmath.re(x)))
                    used[i] = True
                    continue
                best, bestd = None, None
                for j in range(i + 1, len(polished)):
                    if used[j]:
                        continue
                    dist = abs(mpmath.conj(polished[j]) - x)
                    if bestd is None or dist < bestd:
                        best, bestd = j, dist
                if best is not None and bestd < mpmath.mpf("1e-3") * max(1, abs(x)):
                    used[i] = used[best] = True
                    z = (x + mpmath.conj(polished[best])) / 2
                    cleaned.append(z)
                    cleaned.append(mpmath.conj(z))
                else:
                    used[i] = True
                    cleaned.append(x)
            for x in cleaned:
                roots.append((x, mult))
        # residual verification on the full polynomial
        Pm = [_mp_exact(c) for c in reversed(P)]
        for x, _ in roots:
            if abs(mpmath.polyval(Pm, x)) > residual_bound:
                raise RootFindingError(
                    f"residual {mpmath.nstr(abs(mpmath.polyval(Pm, x)), 5)} above bound at precision {prec}"
                )
        out = [(x, m, abs(x)) for x, m in roots]
    cluster = RootCluster(polynomial=P, roots=out, precision=report_precision)
    if cluster.total_multiplicity() != degree:
        raise RootFindingError("root multiplicities do not sum to the degree")
    return cluster
