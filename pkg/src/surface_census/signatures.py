"""Exact arithmetic on Fuchsian signatures.

All quantities are :class:`fractions.Fraction`; no floating point is used
anywhere in this module.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterator, Optional, Sequence, Union

Rational = Union[int, Fraction]

# Finite/tail cutoffs of the three infinite families, from the divisibility
# arguments n-6 | 72, n-4 | 32 and 3n-10 | 200.
FAMILY_CUTOFFS = {(2, 3): 78, (2, 4): 36, (2, 5): 70}


class SignatureError(ValueError):
    """Raised for malformed or non-hyperbolic signatures."""


class NonIntegralGenus(SignatureError):
    def __init__(self, value: Fraction):
        super().__init__(f"genus {value} is not an integer")
        self.value = value


@dataclass(frozen=True, order=True)
class Signature:
    genus: int
    periods: tuple[int, ...] = ()

    def __post_init__(self):
        periods = tuple(int(m) for m in self.periods)
        if self.genus < 0:
            raise SignatureError(f"orbit genus must be >= 0, got {self.genus}")
        if any(m < 2 for m in periods):
            raise SignatureError(f"elliptic periods must be >= 2, got {periods}")
        object.__setattr__(self, "periods", tuple(sorted(periods)))

    @classmethod
    def triangle(cls, l: int, m: int, n: int) -> "Signature":
        return cls(0, (l, m, n))

    @classmethod
    def parse(cls, text: str) -> "Signature":
        return parse_signature(text)

    @property
    def k(self) -> int:
        return len(self.periods)

    def __str__(self) -> str:
        body = ",".join(str(m) for m in self.periods)
        if self.genus == 0:
            return f"({body})"
        return f"({self.genus}; {body})" if body else f"({self.genus}; -)"

    def sort_key(self) -> tuple:
        return (self.genus, self.k, self.periods)


_SIG_RE = re.compile(r"^\(\s*(?:(\d+)\s*;)?\s*([\d\s,\-]*)\)$")


def parse_signature(text: str) -> Signature:
    """Parse ``"(2,3,7)"`` or ``"(1; 2,2)"``; inverse of ``str(Signature)``."""
    m = _SIG_RE.match(text.strip())
    if not m:
        raise SignatureError(f"cannot parse signature {text!r}")
    genus = int(m.group(1)) if m.group(1) is not None else 0
    body = m.group(2).strip()
    if body in ("", "-"):
        periods: tuple[int, ...] = ()
    else:
        try:
            periods = tuple(int(tok) for tok in body.split(","))
        except ValueError:
            raise SignatureError(f"cannot parse signature {text!r}") from None
    return Signature(genus, periods)


def format_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def normalized_measure(sig: Signature) -> Fraction:
    """Return mu/2pi = 2g - 2 + sum(1 - 1/m_j)."""
    total = Fraction(2 * sig.genus - 2)
    for m in sig.periods:
        total += 1 - Fraction(1, m)
    return total


@dataclass(frozen=True)
class QFraction:
    """mu/4pi of a hyperbolic signature, as coprime r/s."""

    r: int
    s: int

    def __post_init__(self):
        if self.r <= 0 or self.s <= 0 or gcd(self.r, self.s) != 1:
            raise ValueError(f"invalid q-fraction {self.r}/{self.s}")

    @property
    def value(self) -> Fraction:
        return Fraction(self.r, self.s)

    @property
    def inverse(self) -> Fraction:
        return Fraction(self.s, self.r)

    def __str__(self) -> str:
        return format_fraction(self.value)


def q_fraction(sig: Signature) -> QFraction:
    mu = normalized_measure(sig)
    if mu <= 0:
        raise SignatureError(f"{sig} is not cocompact hyperbolic (mu/2pi = {mu})")
    q = mu / 2
    return QFraction(q.numerator, q.denominator)


def rh_genus(sig: Signature, group_order: int) -> int:
    """Genus of a surface kernel of index ``group_order`` in a group of signature ``sig``."""
    q = q_fraction(sig).value
    g = 1 + group_order * q
    if g.denominator != 1:
        raise NonIntegralGenus(g)
    if g < 2:
        raise SignatureError(f"genus {g} < 2: not a surface group quotient")
    return int(g)


# ---------------------------------------------------------------------------
# Sigma_lambda


@dataclass(frozen=True)
class TailFamily:
    """Signatures ``prefix + (n,)`` for every ``n >= n_min``."""

    prefix: tuple[int, ...]
    n_min: int
    genus: int = 0

    def member(self, n: int) -> Signature:
        if n < self.n_min:
            raise ValueError(f"n={n} below family minimum {self.n_min}")
        return Signature(self.genus, self.prefix + (n,))

    def limit_measure(self) -> Fraction:
        return normalized_measure(Signature(self.genus, self.prefix)) + 1

    def __str__(self) -> str:
        head = ",".join(str(m) for m in self.prefix)
        return f"({head},n), n >= {self.n_min}"


@dataclass(frozen=True)
class SigmaSet:
    lam: Fraction
    finite_members: tuple[Signature, ...]
    infinite_families: tuple[TailFamily, ...] = field(default=())

    def __contains__(self, sig: Signature) -> bool:
        return sig in set(self.finite_members)

    def in_tail(self, sig: Signature) -> Optional[TailFamily]:
        for fam in self.infinite_families:
            if (
                sig.genus == fam.genus
                and sig.periods[:-1] == fam.prefix
                and sig.periods[-1] >= fam.n_min
            ):
                return fam
        return None


def _canonical_order(sigs) -> list[Signature]:
    return sorted(set(sigs), key=Signature.sort_key)


def enumerate_sigma(lam: Rational) -> SigmaSet:
    """All signatures with 0 < mu/2pi <= 2/lam, with infinite families kept symbolic.

    The search runs over every orbit genus and period count that the bound
    leaves open, so the absence of genus > 0 members is derived, not assumed.
    """
    lam = Fraction(lam)
    if lam <= 6:
        raise SignatureError(
            f"lambda must exceed 6 (got {format_fraction(lam)}); "
            "other infinite sequences of signatures appear below that"
        )
    bound = 2 / lam
    finite: list[Signature] = []
    tails: list[TailFamily] = []

    genus = 0
    while 2 * genus - 2 <= bound:
        k = 0
        # each period contributes at least 1/2
        while Fraction(2 * genus - 2) + Fraction(k, 2) <= bound:
            _search(genus, k, (), Fraction(2 * genus - 2), bound, finite, tails)
            k += 1
        genus += 1

    members = []
    families = []
    for fam in tails:
        cutoff = FAMILY_CUTOFFS.get(fam.prefix) if fam.genus == 0 else None
        if cutoff is None:
            raise SignatureError(f"unexpected unbounded family {fam} for lambda={lam}")
        members.extend(fam.member(n) for n in range(fam.n_min, cutoff + 1))
        families.append(TailFamily(fam.prefix, max(fam.n_min, cutoff + 1), fam.genus))
    members.extend(finite)
    return SigmaSet(lam, tuple(_canonical_order(members)), tuple(families))


def _search(genus, k, prefix, partial, bound, finite, tails):
    remaining = k - len(prefix)
    if remaining == 0:
        if 0 < partial <= bound:
            finite.append(Signature(genus, prefix))
        return
    if partial + remaining <= 0:
        return
    lo = prefix[-1] if prefix else 2
    if remaining == 1:
        # partial + 1 - 1/n is increasing in n with limit partial + 1
        if partial + 1 <= bound:
            n = lo
            while partial + 1 - Fraction(1, n) <= 0:
                n += 1
            tails.append(TailFamily(prefix, n, genus))
            return
        n = lo
        while partial + 1 - Fraction(1, n) <= bound:
            total = partial + 1 - Fraction(1, n)
            if total > 0:
                finite.append(Signature(genus, prefix + (n,)))
            n += 1
        return
    if partial + remaining <= bound:
        raise SignatureError("bound admits two unbounded periods; lambda too small")
    m = lo
    while partial + remaining * (1 - Fraction(1, m)) <= bound:
        _search(genus, k, prefix + (m,), partial + 1 - Fraction(1, m), bound, finite, tails)
        m += 1


def iter_signatures(max_period: int, max_k: int = 4, genus: int = 0) -> Iterator[Signature]:
    """Every sorted period tuple with entries in [2, max_period] and 1 <= k <= max_k."""

    def rec(prefix, k):
        if len(prefix) == k:
            yield Signature(genus, prefix)
            return
        lo = prefix[-1] if prefix else 2
        for m in range(lo, max_period + 1):
            yield from rec(prefix + (m,), k)

    for k in range(0, max_k + 1):
        yield from rec((), k)


@dataclass(frozen=True)
class BoundConstants:
    p_max_r: int
    p_max_period: int
    s_max: int

    def threshold(self) -> int:
        """max{p_max_r, p_max_period, s_max + 1}; the factorial term is symbolic."""
        return max(self.p_max_r, self.p_max_period, self.s_max + 1)


def largest_prime_factor(n: int) -> int:
    n = abs(n)
    best = 1
    d = 2
    while d * d <= n:
        while n % d == 0:
            best = d
            n //= d
        d += 1
    return max(best, n) if n > 1 else best


def bound_constants(sigma: SigmaSet) -> BoundConstants:
    if not sigma.finite_members:
        raise SignatureError("empty finite part")
    p_r = 1
    p_period = 1
    s_max = 0
    for sig in sigma.finite_members:
        q = q_fraction(sig)
        p_r = max(p_r, largest_prime_factor(q.r))
        if q.r == 1:
            s_max = max(s_max, q.s)
            for m in sig.periods:
                p_period = max(p_period, largest_prime_factor(m))
    return BoundConstants(p_r, p_period, s_max)


# ---------------------------------------------------------------------------
# the three (2, m, n) families


@dataclass(frozen=True)
class _FamilyRule:
    prefix: tuple[int, int]
    coef: int      # key(n) = coef * n - shift
    shift: int
    divisor: int   # key(n) | divisor when p does not divide key(n)
    order_num: int  # |G| = order_num * n * p / key(n)

    def key(self, n: int) -> int:
        return self.coef * n - self.shift

    def describe(self) -> str:
        k = "n" if self.coef == 1 else f"{self.coef}n"
        return f"{k}-{self.shift} | {self.divisor}"


FAMILY_RULES = {
    (2, 3): _FamilyRule((2, 3), 1, 6, 72, 12),
    (2, 4): _FamilyRule((2, 4), 1, 4, 32, 8),
    (2, 5): _FamilyRule((2, 5), 3, 10, 200, 20),
}


@dataclass(frozen=True)
class FamilyConstraint:
    family: tuple[int, int]
    p: int
    divisor_condition: str
    ceiling: int
    candidates: tuple[int, ...]
    n: Optional[int] = None
    admissible: Optional[bool] = None
    reason: str = ""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def family_constraints(family: Sequence[int], p: int, n: Optional[int] = None) -> FamilyConstraint:
    """Divisibility pruning for ``(2,3,n)``, ``(2,4,n)`` or ``(2,5,n)`` at the prime ``p``.

    ``candidates`` lists the n within the finite range whose q-fraction has
    r = p exactly. If ``n`` is given, ``admissible`` says whether
    ``|G| = p*s/r`` can be an integer for that n.
    """
    prefix = tuple(family)
    if prefix not in FAMILY_RULES:
        raise SignatureError(f"no divisibility rule for family {prefix}")
    if not _is_prime(p):
        raise SignatureError(f"{p} is not prime")
    rule = FAMILY_RULES[prefix]
    ceiling = FAMILY_CUTOFFS[prefix]
    lo = {(2, 3): 7, (2, 4): 5, (2, 5): 5}[prefix]
    candidates = []
    for m in range(lo, ceiling + 1):
        if rule.key(m) % p == 0 and q_fraction(Signature(0, prefix + (m,))).r == p:
            candidates.append(m)
    result = dict(
        family=prefix,
        p=p,
        divisor_condition=rule.describe(),
        ceiling=ceiling,
        candidates=tuple(candidates),
    )
    if n is None:
        return FamilyConstraint(**result)
    key = rule.key(n)
    if key <= 0:
        return FamilyConstraint(**result, n=n, admissible=False, reason="not hyperbolic")
    if key % p == 0:
        reason = f"p divides {rule.describe().split(' |')[0]} = {key}"
    elif rule.divisor % key == 0:
        reason = f"{rule.describe()} holds ({key} | {rule.divisor})"
    else:
        reason = (
            f"p must divide {rule.describe().split(' |')[0]} since n > {ceiling}; "
            f"{p} does not divide {key}"
            if n > ceiling
            else f"{key} does not divide {rule.divisor} and p does not divide it"
        )
    q = q_fraction(Signature(0, prefix + (n,)))
    admissible = (p * q.s) % q.r == 0
    return FamilyConstraint(**result, n=n, admissible=admissible, reason=reason)
