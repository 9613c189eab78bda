"""Truncated q-expansions with exact rational coefficients.

A :class:`Series` of precision ``P`` knows ``a_0 .. a_P`` and nothing else;
asking for a coefficient past ``P`` raises :class:`PrecisionError`.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil, gcd

from .arith import divisors, factor, is_squarefree, prime_factors, sigma1

__all__ = [
    "EtaExponent",
    "PrecisionError",
    "Series",
    "UnitExpansion",
    "dlog",
    "e2_series",
    "eta_quotient",
    "fd_closed_form",
    "fd_series",
    "hd_exponent",
    "hecke_on_series",
    "sturm_bound",
    "working_precision",
]


class PrecisionError(IndexError):
    """A coefficient beyond the known precision was requested."""


@dataclass(frozen=True)
class Series:
    coeffs: tuple

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a series needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def from_list(cls, coeffs, prec=None):
        coeffs = list(coeffs)
        if prec is not None:
            coeffs = (coeffs + [0] * (prec + 1))[: prec + 1]
        return cls(tuple(coeffs))

    @classmethod
    def zero(cls, prec):
        return cls((0,) * (prec + 1))

    @classmethod
    def one(cls, prec):
        return cls((1,) + (0,) * prec)

    @property
    def prec(self):
        return len(self.coeffs) - 1

    def __getitem__(self, n):
        if isinstance(n, slice):
            return self.coeffs[n]
        if n < 0:
            raise IndexError("negative index")
        if n > self.prec:
            raise PrecisionError(f"a_{n} requested from a series of precision {self.prec}")
        return self.coeffs[n]

    def truncate(self, prec):
        if prec > self.prec:
            raise PrecisionError(f"cannot raise precision {self.prec} to {prec}")
        return Series(self.coeffs[: prec + 1])

    def __add__(self, other):
        P = min(self.prec, other.prec)
        return Series(tuple(a + b for a, b in zip(self.coeffs[: P + 1], other.coeffs)))

    def __neg__(self):
        return Series(tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        return Series(tuple(c * a for a in self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, Series):
            return self.scale(other)
        P = min(self.prec, other.prec)
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (P + 1)
        for i in range(P + 1):
            if a[i]:
                ai = a[i]
                for j in range(P + 1 - i):
                    if b[j]:
                        out[i + j] += ai * b[j]
        return Series(tuple(out))

    __rmul__ = scale

    def inverse(self):
        """Multiplicative inverse; needs an invertible constant term."""
        a = self.coeffs
        if a[0] == 0:
            raise ZeroDivisionError("constant term is zero")
        inv0 = 1 / a[0]
        out = [inv0]
        for n in range(1, self.prec + 1):
            s = sum(a[k] * out[n - k] for k in range(1, n + 1) if a[k])
            out.append(-s * inv0)
        return Series(tuple(out))

    def __truediv__(self, other):
        return self * other.inverse()

    def is_integral(self):
        return all(c.denominator == 1 for c in self.coeffs)

    def __repr__(self):
        terms = []
        for n, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if n == 0 else f"{c}*q^{n}")
        return f"Series({' + '.join(terms) or '0'} + O(q^{self.prec + 1}))"


@dataclass(frozen=True)
class EtaExponent:
    """Exponents r_d of the eta quotient prod_{d | N} eta(d z)^{r_d}."""

    level: int
    r: dict = field(hash=False)

    def __post_init__(self):
        if not is_squarefree(self.level):
            raise ValueError(f"level {self.level} is not square-free")
        r = {d: int(self.r.get(d, 0)) for d in divisors(self.level)}
        extra = set(self.r) - set(r)
        if extra:
            raise ValueError(f"{sorted(extra)} do not divide {self.level}")
        if sum(r.values()) != 0:
            raise ValueError("eta quotient must have weight 0 (sum of exponents 0)")
        object.__setattr__(self, "r", r)

    @property
    def order_at_infinity_times_24(self):
        return sum(d * e for d, e in self.r.items())

    def vector(self):
        return [self.r[d] for d in divisors(self.level)]


@dataclass(frozen=True)
class UnitExpansion:
    """q^m * u(q) with u a series of constant term 1."""

    leading_exponent: int
    unit: Series

    def __post_init__(self):
        if self.unit[0] != 1:
            raise ValueError("unit part must have constant term 1")

    def __mul__(self, other):
        return UnitExpansion(self.leading_exponent + other.leading_exponent,
                             self.unit * other.unit)


def sturm_bound(N):
    """ceil(mu/6) with mu the index of Gamma_0(N) in SL_2(Z)."""
    if not is_squarefree(N):
        raise ValueError(f"level {N} is not square-free")
    mu = 1
    for ell in prime_factors(N):
        mu *= ell + 1
    return ceil(mu / 6)


def working_precision(N, n_max=None):
    """Precision keeping every T_n image (n <= n_max) at precision >= B."""
    B = sturm_bound(N)
    return (B + 1) * (n_max or B)


@lru_cache(maxsize=64)
def _euler_product(prec):
    """prod_{n >= 1} (1 - q^n) via the pentagonal number theorem."""
    out = [0] * (prec + 1)
    k = 0
    while True:
        hit = False
        for j in ((k * (3 * k - 1)) // 2, (k * (3 * k + 1)) // 2) if k else (0,):
            if j <= prec:
                out[j] = -1 if k % 2 else 1
                hit = True
        if not hit:
            break
        k += 1
    return tuple(out)


def _power_unit(f, alpha):
    """f^alpha for an integer series f with f_0 = 1 (J.C.P. Miller recurrence)."""
    P = len(f) - 1
    g = [1] + [0] * P
    nz = [k for k in range(1, P + 1) if f[k]]
    for n in range(1, P + 1):
        s = 0
        for k in nz:
            if k > n:
                break
            s += ((alpha + 1) * k - n) * f[k] * g[n - k]
        if s % n:
            raise ArithmeticError("non-integral power coefficient")
        g[n] = s // n
    return g


def eta_quotient(e, prec):
    """q-expansion of the eta quotient at infinity, to precision ``prec``."""
    m24 = e.order_at_infinity_times_24
    if m24 % 24:
        raise ValueError("sum of d*r_d is not divisible by 24; not a q-series")
    unit = [1] + [0] * prec
    euler = _euler_product(prec)
    for d, rd in e.r.items():
        if rd == 0:
            continue
        sub = [0] * (prec + 1)
        for j in range(0, prec // d + 1):
            sub[j * d] = euler[j]
        factor_ = _power_unit(sub, rd)
        unit = [sum(unit[i] * factor_[n - i] for i in range(n + 1) if unit[i])
                for n in range(prec + 1)]
    return UnitExpansion(m24 // 24, Series(tuple(unit)))


def dlog(x):
    """m + q u'(q)/u(q) for x = q^m u(q); precision drops by one."""
    u = x.unit
    P = u.prec - 1
    if P < 0:
        raise PrecisionError("unit expansion too short for a logarithmic derivative")
    u = u.truncate(P)
    qdu = Series(tuple(n * c for n, c in enumerate(u.coeffs)))
    out = qdu / u
    return Series((out[0] + x.leading_exponent,) + out.coeffs[1:])


def hd_exponent(N, d):
    """Exponents of h_d = (eta(dz)/eta(z))^{12N}."""
    if N % d or d == 1:
        raise ValueError(f"need a divisor d > 1 of {N}, got {d}")
    return EtaExponent(N, {1: -12 * N, d: 12 * N})


def fd_series(N, d, prec):
    """f_d := dlog(h_d), computed from the eta product."""
    return dlog(eta_quotient(hd_exponent(N, d), prec + 1))


def e2_series(prec):
    """E_2 = 1 - 24 sum sigma_1(n) q^n."""
    return Series(tuple([1] + [-24 * sigma1(n) for n in range(1, prec + 1)]))


def fd_closed_form(N, d, prec):
    """(N/2)(d E_2(q^d) - E_2(q)), the closed form of f_d."""
    if N % d or d == 1:
        raise ValueError(f"need a divisor d > 1 of {N}, got {d}")
    coeffs = [Fraction(N * (d - 1), 2)]
    for n in range(1, prec + 1):
        s = sigma1(n) - (d * sigma1(n // d) if n % d == 0 else 0)
        coeffs.append(12 * N * s)
    return Series(tuple(coeffs))


def hecke_on_series(f, n, N):
    """Weight-2, level-N Hecke operator T_n on a q-expansion.

    a_k(T_n f) = sum over d | gcd(k, n) with gcd(d, N) = 1 of d * a_{kn/d^2}(f);
    for primes dividing N this is U_ell.  Output precision is floor(P/n).
    """
    if n < 1:
        raise ValueError("Hecke index must be positive")
    P = f.prec // n
    if P < 1:
        raise PrecisionError(f"T_{n} of a series of precision {f.prec} has no coefficients")
    good = [d for d in divisors(n) if gcd(d, N) == 1]
    out = [sum(d for d in good) * f[0]]
    for k in range(1, P + 1):
        out.append(sum(d * f[k * n // (d * d)] for d in good if k % d == 0))
    return Series(tuple(out))
