"""From point counts to the zeta function, its weight factorization, and
the classical checks.

Pipeline: exact series from counts, rational reconstruction (degrees
from Betti numbers when supplied, scanned otherwise), separation of
numerator/denominator roots along the modulus ladder q^{w/2} into
integer weight factors, then the per-weight checks: inverse-root
moduli, algebraic-integrality certificates, the functional equation
relating s and d-s, and exact pole/zero orders.

The factorization never trusts floats: clusters are rounded to integer
polynomials and the exact product must reproduce the input rational
function, otherwise the factorization fails loudly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .arith import PrimePower
from .report import FAIL, PASS, Check
from .series import (
    DEFAULT_PRECISION,
    PadeError,
    PowerSeries,
    RationalFunction,
    exp_series,
    pade_reconstruct,
    poly_deg,
    poly_divmod,
    poly_eval,
    poly_mul,
    poly_trim,
    power_sums_inverse_roots,
    roots_with_moduli,
)

__all__ = [
    "AmbiguousClusterError",
    "HypothesisWarning",
    "OrdResult",
    "ReconstructionError",
    "SeparationError",
    "WeightDecomposition",
    "WeightFactor",
    "DEGREE_SCAN_CAP",
    "hasse_weil_functional_check",
    "l_adic_check",
    "lefschetz_counts",
    "ord_at",
    "weight_factorize",
    "weil_check",
    "zeta_from_counts",
    "zeta_rational",
]

DEGREE_SCAN_CAP = 24
DEFAULT_SAMPLE_POINTS = (0.3, 1.2 + 0.7j, -0.4)


class HypothesisWarning(UserWarning):
    """A mathematical side condition looks violated (for example
    non-integer or negative zeta coefficients); the computation proceeds
    because the input may still be deliberate."""


class ReconstructionError(ValueError):
    """Counts are inconsistent with a rational zeta at the stated degrees."""


class SeparationError(RuntimeError):
    """Weil-type separation failed: possible non-smooth input."""


class AmbiguousClusterError(SeparationError):
    """A root modulus sits within tolerance of two ladder rungs."""


# ---------------------------------------------------------------------------
# Weight data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightFactor:
    """One weight-w factor: an integer polynomial with constant term 1
    whose inverse roots should have modulus q^{w/2}."""

    w: int
    poly: tuple  # integer coefficients, low degree first, poly[0] == 1

    def __post_init__(self):
        if not self.poly or self.poly[0] != 1:
            raise ValueError("weight factor must have constant term 1")
        if any(not isinstance(c, int) for c in self.poly):
            raise ValueError("weight factor must have integer coefficients")

    @property
    def beta(self):
        return len(self.poly) - 1

    def eigenvalue_polynomial(self):
        """Monic integer polynomial with the inverse roots as roots
        (coefficients low degree first)."""
        return tuple(reversed(self.poly))


@dataclass(frozen=True)
class WeightDecomposition:
    """Weight factors P_0..P_{2d} with numerator = odd weights and
    denominator = even weights of the zeta rational function."""

    d: int
    q: PrimePower
    factors: tuple  # WeightFactor for w = 0..2d

    def __post_init__(self):
        if len(self.factors) != 2 * self.d + 1:
            raise ValueError("need one factor per weight 0..2d")
        for w, f in enumerate(self.factors):
            if f.w != w:
                raise ValueError("factors must be indexed by weight")

    @property
    def betti(self):
        return tuple(f.beta for f in self.factors)

    @property
    def euler_characteristic(self):
        return sum((-1) ** w * f.beta for w, f in enumerate(self.factors))

    def factor(self, w) -> WeightFactor:
        return self.factors[w]

    def to_rational(self) -> RationalFunction:
        num, den = (1,), (1,)
        for w, f in enumerate(self.factors):
            if w % 2 == 1:
                num = poly_mul(num, f.poly)
            else:
                den = poly_mul(den, f.poly)
        return RationalFunction(num, den, reduce=False)


# ---------------------------------------------------------------------------
# Counts -> series -> rational function
# ---------------------------------------------------------------------------


def _counts_list(counts):
    values = list(counts.counts) if hasattr(counts, "counts") else list(counts)
    if not values:
        raise ValueError("need at least one point count")
    return values


def zeta_from_counts(counts) -> PowerSeries:
    """exp of sum N_n t^n / n, exactly, to the order the counts allow.

    Genuine varieties give non-negative integer coefficients; a
    violation raises HypothesisWarning (not an error) since the caller
    may be probing synthetic data.
    """
    values = _counts_list(counts)
    log_z = PowerSeries([Fraction(0)] + [Fraction(v, n + 1) for n, v in enumerate(values)])
    z = exp_series(log_z)
    bad = [
        (i, c)
        for i, c in enumerate(z.coeffs)
        if c.denominator != 1 or c < 0
    ]
    if bad:
        warnings.warn(
            f"zeta coefficients are not non-negative integers "
            f"(first offender: t^{bad[0][0]} -> {bad[0][1]}); "
            f"the input may not come from a variety",
            HypothesisWarning,
            stacklevel=2,
        )
    return z


def zeta_rational(counts, betti=None, *, degree_cap=DEGREE_SCAN_CAP) -> RationalFunction:
    """Rational zeta from counts.

    With Betti numbers the degrees are fixed: numerator = sum of odd
    Betti numbers, denominator = sum of even ones.  Without them, total
    degree is scanned upward; every candidate must re-verify against all
    supplied counts before being accepted.
    """
    values = _counts_list(counts)
    m = len(values)
    series = zeta_from_counts(values)

    def verify(cand):
        return cand.expand(m).coeffs == series.coeffs

    if betti is not None:
        betti = tuple(int(b) for b in betti)
        dn = sum(b for w, b in enumerate(betti) if w % 2 == 1)
        dd = sum(b for w, b in enumerate(betti) if w % 2 == 0)
        if m < dn + dd:
            raise ReconstructionError(
                f"insufficient counts for the stated Betti numbers: "
                f"need {dn + dd}, have {m}"
            )
        try:
            cand = pade_reconstruct(series, dn, dd)
        except PadeError as exc:
            raise ReconstructionError(f"reconstruction failed: {exc}") from exc
        if not verify(cand):
            raise ReconstructionError(
                "reconstruction mismatch: counts are inconsistent with the "
                "stated Betti numbers"
            )
        return cand
    for total in range(0, min(degree_cap, m) + 1):
        for dn in range(total + 1):
            dd = total - dn
            try:
                cand = pade_reconstruct(series, dn, dd)
            except PadeError:
                continue
            if verify(cand):
                return cand
    raise ReconstructionError(
        f"no rational function of total degree <= {min(degree_cap, m)} "
        f"matches the supplied counts; supply Betti numbers or more counts"
    )


# ---------------------------------------------------------------------------
# Weight factorization
# ---------------------------------------------------------------------------


def _side_int(coeffs, what):
    out = []
    for c in coeffs:
        c = Fraction(c)
        if c.denominator != 1:
            raise SeparationError(
                f"Weil-type separation failed: {what} has non-integer "
                f"coefficient {c}"
            )
        out.append(int(c))
    return tuple(out)


def _try_ladder_division(side, rungs, q):
    """Peel off rational ladder factors (1 -+ q^{w/2} t); only possible
    when every rung value is an integer.  Returns the factor dict or
    None when this shortcut does not apply."""
    factors = {}
    rest = side
    for w, beta in sorted(rungs, reverse=True):
        if w % 2 != 0:
            return None
        val = q.q ** (w // 2)
        got = (1,)
        for _ in range(beta):
            done = False
            for s in (-val, val):
                quo, rem = poly_divmod(rest, (1, s))
                if not rem:
                    rest = tuple(int(c) for c in quo)
                    got = poly_mul(got, (1, s))
                    done = True
                    break
            if not done:
                return None
        factors[w] = tuple(int(c) for c in got)
    if poly_deg(rest) != 0:
        return None
    return factors


def _rebuild_integer_polynomial(members, residual_tol, precision):
    """Multiply (1 - t/root)^mult over a cluster and round to integers;
    the rounding residual is the separation quality gate."""
    with mpmath.workdps(precision + 10):
        poly = [mpmath.mpc(1)]
        for root, mult in members:
            for _ in range(mult):
                nxt = [mpmath.mpc(0)] * (len(poly) + 1)
                for i, co in enumerate(poly):
                    nxt[i] += co
                    nxt[i + 1] -= co / root
                poly = nxt
        out = []
        worst = mpmath.mpf(0)
        for co in poly:
            nearest = mpmath.nint(mpmath.re(co))
            dev = max(abs(mpmath.re(co) - nearest), abs(mpmath.im(co)))
            worst = max(worst, dev)
            if dev > residual_tol:
                raise SeparationError(
                    f"Weil-type separation failed: possible non-smooth input "
                    f"(rounding residual {mpmath.nstr(dev, 3)} above {residual_tol})"
                )
            out.append(int(nearest))
        return tuple(out), float(worst)


def _factor_side(side, rungs, q, precision, cluster_tol, residual_tol):
    """Split one side (numerator or denominator) into per-weight integer
    factors.  rungs: [(w, beta)] with beta > 0 for this parity."""
    deg = poly_deg(side)
    total = sum(b for _, b in rungs)
    if total != deg:
        raise SeparationError(
            f"cluster count mismatch with betti: side degree {deg}, "
            f"betti total {total}"
        )
    if not rungs:
        return {}
    if len(rungs) == 1:
        w, beta = rungs[0]
        return {w: side}
    forced = _try_ladder_division(side, rungs, q)
    if forced is not None:
        return forced
    cluster = roots_with_moduli(side, precision)
    with mpmath.workdps(precision + 10):
        targets = {w: mpmath.power(q.q, mpmath.mpf(w) / 2) for w, _ in rungs}
        assigned = {w: [] for w, _ in rungs}
        for root, mult, modulus in cluster.roots:
            inv_mod = 1 / modulus
            matches, near = [], []
            for w, _ in rungs:
                dev = abs(inv_mod - targets[w]) / targets[w]
                if dev < cluster_tol:
                    matches.append(w)
                if dev < 2 * cluster_tol:
                    near.append(w)
            if len(near) > 1:
                raise AmbiguousClusterError(
                    f"ambiguous clustering: inverse-root modulus "
                    f"{mpmath.nstr(inv_mod, 10)} sits near rungs {sorted(near)}"
                )
            if not matches:
                raise SeparationError(
                    f"Weil-type separation failed: possible non-smooth input "
                    f"(inverse-root modulus {mpmath.nstr(inv_mod, 10)} is off "
                    f"the ladder for weights {[w for w, _ in rungs]})"
                )
            assigned[matches[0]].append((root, mult))
    out = {}
    for w, beta in rungs:
        got = sum(m for _, m in assigned[w])
        if got != beta:
            raise SeparationError(
                f"cluster count mismatch with betti at weight {w}: "
                f"found {got} inverse roots, expected {beta}"
            )
        poly, _ = _rebuild_integer_polynomial(assigned[w], residual_tol, precision)
        out[w] = poly
    return out


def weight_factorize(
    Z: RationalFunction,
    q: PrimePower,
    d: int,
    betti,
    *,
    precision: int = DEFAULT_PRECISION,
    cluster_tol: float = 1e-6,
    residual_tol: float = 1e-4,
) -> WeightDecomposition:
    """Separate Z into weight factors along the ladder q^{w/2}.

    Odd weights live in the numerator, even weights in the denominator.
    The returned factors are integer polynomials whose exact alternating
    product reproduces Z; anything short of that exact identity raises.
    """
    betti = tuple(int(b) for b in betti)
    if len(betti) != 2 * d + 1:
        raise ValueError(f"need Betti numbers for weights 0..{2 * d}")
    num = _side_int(Z.num, "numerator")
    den = _side_int(Z.den, "denominator")
    odd_rungs = [(w, b) for w, b in enumerate(betti) if w % 2 == 1 and b > 0]
    even_rungs = [(w, b) for w, b in enumerate(betti) if w % 2 == 0 and b > 0]
    odd_factors = _factor_side(num, odd_rungs, q, precision, cluster_tol, residual_tol)
    even_factors = _factor_side(den, even_rungs, q, precision, cluster_tol, residual_tol)
    factors = []
    for w in range(2 * d + 1):
        src = odd_factors if w % 2 == 1 else even_factors
        factors.append(WeightFactor(w=w, poly=src.get(w, (1,))))
    dec = WeightDecomposition(d=d, q=q, factors=tuple(factors))
    rebuilt = dec.to_rational()
    if poly_trim(rebuilt.num) != poly_trim(Z.num) or poly_trim(rebuilt.den) != poly_trim(Z.den):
        raise SeparationError(
            "Weil-type separation failed: the exact product of the rounded "
            "factors does not reproduce the zeta function"
        )
    return dec


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------


def weil_check(dec: WeightDecomposition, tol: float = 1e-9, *, precision: int = DEFAULT_PRECISION):
    """Per weight: inverse-root moduli against q^{w/2}, and exact
    integrality of the factor."""
    checks = []
    for f in dec.factors:
        if f.beta == 0:
            continue
        integral = all(isinstance(c, int) for c in f.poly)
        cluster = roots_with_moduli(f.poly, precision)
        with mpmath.workdps(precision + 10):
            target = mpmath.power(dec.q.q, mpmath.mpf(f.w) / 2)
            worst = max(abs((1 / mod) / target - 1) for _, _, mod in cluster.roots)
            worst_f = float(worst)
        ok = integral and worst_f < tol
        checks.append(
            Check(
                name=f"weil.weight{f.w}",
                verdict=PASS if ok else FAIL,
                detail=(
                    f"beta={f.beta}, max relative modulus deviation {worst_f:.3e} "
                    f"vs target q^{{{f.w}/2}}"
                ),
                data={
                    "weight": f.w,
                    "beta": f.beta,
                    "max_rel_deviation": worst_f,
                    "integer_coefficients": integral,
                },
            )
        )
    return checks


def _strip_prime(n, p):
    n = abs(n)
    while n > 1 and n % p == 0:
        n //= p
    return n


def l_adic_check(dec: WeightDecomposition):
    """Per weight: the eigenvalue polynomial is integer monic, and its
    constant term is (up to sign) the expected power of q with prime
    support {p}: the certificate that all prime-to-p valuations of the
    inverse roots vanish."""
    checks = []
    p = dec.q.p
    for f in dec.factors:
        if f.beta == 0:
            continue
        eig = f.eigenvalue_polynomial()
        monic_integer = eig[-1] == 1 and all(isinstance(c, int) for c in eig)
        const = eig[0]
        q_power_ok = const * const == dec.q.q ** (f.w * f.beta)
        support_ok = _strip_prime(const, p) == 1
        ok = monic_integer and q_power_ok and support_ok
        checks.append(
            Check(
                name=f"ladic.weight{f.w}",
                verdict=PASS if ok else FAIL,
                detail=(
                    f"eigenvalue polynomial constant {const}; "
                    f"expected magnitude q^{{{f.w}*{f.beta}/2}}"
                ),
                data={
                    "weight": f.w,
                    "constant_term": const,
                    "monic_integer": monic_integer,
                    "constant_matches_q_power": q_power_ok,
                    "prime_support_only_p": support_ok,
                },
            )
        )
    return checks


def hasse_weil_functional_check(
    dec: WeightDecomposition,
    sample_points=DEFAULT_SAMPLE_POINTS,
    tol: float = 1e-9,
    *,
    dps: int = 30,
):
    """Check zeta(s) = sign * q^{chi*s} * q^{-chi*d/2} * zeta(d-s) at the
    sample points; the sign must be one constant from {+1, -1}."""
    Z = dec.to_rational()
    chi = dec.euler_characteristic
    d = dec.d
    q = dec.q.q
    sign = None
    used, skipped, witnesses = [], [], []
    with mpmath.workdps(dps):
        for s in sample_points:
            s = mpmath.mpc(s)
            x1 = mpmath.power(q, -s)
            x2 = mpmath.power(q, -(d - s))
            den1 = poly_eval(Z.den, x1)
            den2 = poly_eval(Z.den, x2)
            num2 = poly_eval(Z.num, x2)
            if abs(den1) < mpmath.mpf("1e-20") or abs(den2) < mpmath.mpf("1e-20") or abs(num2) < mpmath.mpf("1e-20"):
                skipped.append(str(s))
                continue
            lhs = poly_eval(Z.num, x1) / den1
            rhs = mpmath.power(q, chi * s - mpmath.mpf(chi * d) / 2) * num2 / den2
            ratio = lhs / rhs
            point_sign = None
            if abs(ratio - 1) < tol:
                point_sign = 1
            elif abs(ratio + 1) < tol:
                point_sign = -1
            if point_sign is None:
                witnesses.append({"s": str(s), "ratio": str(ratio)})
            elif sign is None:
                sign = point_sign
                used.append(str(s))
            elif sign != point_sign:
                witnesses.append({"s": str(s), "ratio": str(ratio), "conflict": True})
            else:
                used.append(str(s))
    ok = not witnesses and sign is not None
    return Check(
        name="functional.hasse_weil",
        verdict=PASS if ok else FAIL,
        detail=(
            f"sign {sign:+d} on {len(used)} sample points"
            if ok
            else f"{len(witnesses)} sample points off the two-sided identity"
        ),
        data={
            "sign": sign,
            "euler_characteristic": chi,
            "points_used": used,
            "points_skipped_at_poles": skipped,
            "witnesses": witnesses,
        },
    )


# ---------------------------------------------------------------------------
# Orders at ladder points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrdResult:
    """Order of the zeta rational function (in x = q^{-s}) at s = z.

    order: multiplicity (negative at poles), None when indeterminate.
    exact: whether the multiplicity came from exact division.
    """

    z: object
    order: object
    exact: bool
    indeterminate: bool
    note: str

    def __int__(self):
        if self.order is None:
            raise ValueError("indeterminate order")
        return self.order


def _rational_point(q: PrimePower, z):
    """q^{-z} as an exact Fraction when that is possible."""
    two_z = Fraction(z).limit_denominator(10**6) * 2
    if two_z.denominator != 1:
        return None
    k = int(two_z)  # z = k/2
    if k % 2 == 0:
        base, expo = q.q, k // 2
    else:
        root = math.isqrt(q.q)
        if root * root != q.q:
            return None
        base, expo = root, k
    return Fraction(1, base**expo) if expo >= 0 else Fraction(base ** (-expo))


def _exact_multiplicity(poly, x0):
    mult = 0
    poly = tuple(Fraction(c) for c in poly)
    while poly_eval(poly, x0) == 0:
        poly, rem = poly_divmod(poly, (-x0, Fraction(1)))
        if rem:
            raise AssertionError("exact division left a remainder")
        mult += 1
    return mult


def _numeric_multiplicity(poly, x0, precision, match_tol):
    if poly_deg(poly) < 1:
        return 0, False
    cluster = roots_with_moduli(poly, precision)
    mult = 0
    marginal = False
    with mpmath.workdps(precision + 10):
        for root, m, _ in cluster.roots:
            dist = abs(root - x0) / max(1, abs(x0))
            if dist < match_tol:
                mult += m
            elif dist < 10 * match_tol:
                marginal = True
    return mult, marginal


def ord_at(
    Z: RationalFunction,
    q: PrimePower,
    z,
    *,
    precision: int = DEFAULT_PRECISION,
    match_tol: float = 1e-9,
) -> OrdResult:
    """ord_{s=z} of Z(q^{-s}): positive at zeros, negative at poles.

    Exact (repeated division) whenever q^{-z} is rational: z integer,
    or half-integer with q a perfect square.  Otherwise numeric root
    matching with an indeterminate band: a root within 10x of the match
    tolerance but not inside it yields no silent 0.
    """
    note = (
        f"orders repeat along s -> s + 2*pi*i*k/log({q.q}); reported on the real axis"
    )
    x0 = _rational_point(q, z)
    if x0 is not None:
        order = _exact_multiplicity(Z.num, x0) - _exact_multiplicity(Z.den, x0)
        return OrdResult(z=z, order=order, exact=True, indeterminate=False, note=note)
    with mpmath.workdps(precision + 10):
        if isinstance(z, Fraction):
            zf = mpmath.mpf(z.numerator) / z.denominator
        else:
            zf = mpmath.mpf(z)
        x0f = mpmath.power(q.q, -zf)
    mult_num, marg_num = _numeric_multiplicity(Z.num, x0f, precision, match_tol)
    mult_den, marg_den = _numeric_multiplicity(Z.den, x0f, precision, match_tol)
    if marg_num or marg_den:
        return OrdResult(
            z=z,
            order=None,
            exact=False,
            indeterminate=True,
            note=note + "; a root sits in the marginal band around q^{-z}",
        )
    return OrdResult(
        z=z,
        order=mult_num - mult_den,
        exact=False,
        indeterminate=False,
        note=note,
    )


# ---------------------------------------------------------------------------
# Lefschetz roundtrip
# ---------------------------------------------------------------------------


def lefschetz_counts(dec: WeightDecomposition, m: int):
    """Recover N_n = sum_w (-1)^w (power sums of inverse roots of P_w)
    for n = 1..m, exactly, from the factor polynomials alone."""
    totals = [Fraction(0)] * m
    for f in dec.factors:
        if f.beta == 0:
            continue
        sums = power_sums_inverse_roots(f.poly, m)
        sign = (-1) ** f.w
        for i in range(m):
            totals[i] += sign * sums[i]
    out = []
    for v in totals:
        out.append(int(v) if v.denominator == 1 else v)
    return out
