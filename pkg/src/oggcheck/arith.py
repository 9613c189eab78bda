"""Small number-theoretic helpers shared by every module."""

from functools import lru_cache
from math import gcd, prod

from sympy.ntheory import divisors as _divisors
from sympy.ntheory import factorint, isprime, primerange

__all__ = [
    "divisors",
    "factor",
    "is_prime",
    "is_squarefree",
    "mobius",
    "prime_factors",
    "primes_upto",
    "sigma1",
    "support",
    "valuation",
]


def factor(n):
    """Prime factorization of a nonzero integer as a sorted dict {prime: exp}."""
    if n == 0:
        raise ValueError("cannot factor 0")
    return dict(sorted((int(q), int(e)) for q, e in factorint(abs(n)).items()))


@lru_cache(maxsize=None)
def prime_factors(n):
    return tuple(factor(n))


@lru_cache(maxsize=None)
def divisors(n):
    return tuple(int(d) for d in _divisors(n))


def is_prime(n):
    return bool(isprime(n))


def primes_upto(n):
    return [int(q) for q in primerange(2, n + 1)]


def is_squarefree(n):
    return n >= 1 and all(e == 1 for e in factor(n).values())


def mobius(n):
    f = factor(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def sigma1(n):
    """Sum of positive divisors; sigma1(0) is taken to be 0 (absent coefficient)."""
    if n == 0:
        return 0
    return prod((q ** (e + 1) - 1) // (q - 1) for q, e in factor(n).items())


def valuation(n, p):
    """p-adic valuation of a nonzero integer or Fraction."""
    from fractions import Fraction

    if isinstance(n, Fraction):
        return valuation(n.numerator, p) - valuation(n.denominator, p)
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def support(n):
    """Set of primes dividing a nonzero integer."""
    return set(factor(n)) if abs(n) > 1 else set()


def coprime(a, b):
    return gcd(a, b) == 1
