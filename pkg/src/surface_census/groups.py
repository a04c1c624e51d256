"""Concrete finite groups given by a multiplication table on 0..n-1.

Structured groups are built from mixed-radix normal forms whose products are
evaluated arithmetically; the table is a cache of that arithmetic. Element 0
is always the identity.
"""
from __future__ import annotations

import itertools
import logging
import os
import re
import warnings
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Optional, Sequence

import numpy as np

from . import kernels
from .presentations import Presentation, parse_presentation

log = logging.getLogger(__name__)

DEFAULT_AUT_CAP = 1200


def search_cap() -> int:
    """|G| cap for exhaustive searches; overridable via SURFACE_CENSUS_CAP."""
    value = os.environ.get("SURFACE_CENSUS_CAP")
    return int(value) if value else DEFAULT_AUT_CAP


class GroupConstructionError(ValueError):
    pass


class SearchCapExceeded(RuntimeError):
    def __init__(self, what: str, order: int, cap: int):
        super().__init__(f"{what}: |G| = {order} exceeds search cap {cap}")
        self.order = order
        self.cap = cap


class TrivialSylowWarning(UserWarning):
    pass


# ---------------------------------------------------------------------------
# number theory helpers


def multiplicative_order(u: int, n: int) -> int:
    if gcd(u, n) != 1:
        raise ValueError(f"{u} is not a unit mod {n}")
    k, x = 1, u % n
    while x != 1 % n:
        x = x * u % n
        k += 1
    return k


def least_primitive_root_of_unity(k: int, p: int) -> int:
    """Least u in [1, p) with multiplicative order exactly k mod p."""
    for u in range(1, p):
        if gcd(u, p) == 1 and multiplicative_order(u, p) == k:
            return u
    raise GroupConstructionError(f"no primitive {k}-th root of unity mod {p}")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n ** 0.5) + 1))


def prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class GroupDescriptor:
    def text(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.text()


def _require(cond: bool, msg: str):
    if not cond:
        raise GroupConstructionError(msg)


@dataclass(frozen=True)
class Cyclic(GroupDescriptor):
    n: int

    def __post_init__(self):
        _require(self.n >= 1, f"C({self.n}): n must be >= 1")

    def text(self):
        return f"C({self.n})"


@dataclass(frozen=True)
class Dihedral(GroupDescriptor):
    """Dihedral group of order 2n."""

    n: int

    def __post_init__(self):
        _require(self.n >= 1, f"D({self.n}): n must be >= 1")

    def text(self):
        return f"D({self.n})"


@dataclass(frozen=True)
class Semidihedral(GroupDescriptor):
    """<a, c | a^2 = c^n = 1, c^a = c^(m-1)> with n = 2m, m even; order 2n."""

    n: int

    def __post_init__(self):
        _require(
            self.n >= 4 and self.n % 4 == 0,
            f"SD({self.n}): need n = 2m for some even m",
        )

    @property
    def m(self) -> int:
        return self.n // 2

    def text(self):
        return f"SD({self.n})"


@dataclass(frozen=True)
class SplitMetacyclic(GroupDescriptor):
    """<x, y | x^p = y^k = 1, x^y = x^u>; u defaults to the least primitive k-th root."""

    p: int
    k: int
    u: Optional[int] = None

    def __post_init__(self):
        _require(self.p >= 2 and self.k >= 1, f"MC({self.p},{self.k}): bad parameters")
        u = self.u if self.u is not None else least_primitive_root_of_unity(self.k, self.p)
        u %= self.p
        _require(gcd(u, self.p) == 1, f"MC: u={u} is not a unit mod {self.p}")
        _require(
            pow(u, self.k, self.p) == 1 % self.p,
            f"MC({self.p},{self.k},{u}): u^k = {pow(u, self.k, self.p)} != 1 (mod {self.p})",
        )
        object.__setattr__(self, "u", u)

    def text(self):
        return f"MC({self.p},{self.k},{self.u})"


@dataclass(frozen=True)
class ExampleI(GroupDescriptor):
    """<x, y, z | x^p = y^6 = z^2 = 1, x^y = x^u, [x,z] = [y,z] = 1>."""

    p: int
    u: Optional[int] = None

    def __post_init__(self):
        _require(is_prime(self.p) and self.p % 3 == 1, f"EXI({self.p}): need prime p = 1 (mod 3)")
        u = self.u if self.u is not None else least_primitive_root_of_unity(6, self.p)
        u %= self.p
        _require(
            gcd(u, self.p) == 1 and multiplicative_order(u, self.p) == 6,
            f"EXI({self.p},{u}): u must be a primitive 6th root of unity mod {self.p}",
        )
        object.__setattr__(self, "u", u)

    def text(self):
        return f"EXI({self.p},{self.u})"


@dataclass(frozen=True)
class AccolaMaclachlanIV(GroupDescriptor):
    """<a, b, c | a^2 = b^4 = c^n = abc = 1, (c^3)^a = c^-3>, n = 3m; order 8n."""

    n: int

    def __post_init__(self):
        _require(self.n >= 3 and self.n % 3 == 0, f"AMIV({self.n}): need 3 | n")

    def text(self):
        return f"AMIV({self.n})"


@dataclass(frozen=True)
class AccolaMaclachlanV(GroupDescriptor):
    """<a, b, c | a^2 = b^4 = c^n = abc = 1, (c^2)^a = c^-2>, n = 2m; order 4n."""

    n: int

    def __post_init__(self):
        _require(self.n >= 2 and self.n % 2 == 0, f"AMV({self.n}): need 2 | n")

    def text(self):
        return f"AMV({self.n})"


@dataclass(frozen=True)
class Symmetric(GroupDescriptor):
    n: int

    def __post_init__(self):
        _require(1 <= self.n <= 7, f"S({self.n}): supported for 1 <= n <= 7")

    def text(self):
        return f"S({self.n})"


@dataclass(frozen=True)
class Alternating(GroupDescriptor):
    n: int

    def __post_init__(self):
        _require(1 <= self.n <= 7, f"A({self.n}): supported for 1 <= n <= 7")

    def text(self):
        return f"A({self.n})"


@dataclass(frozen=True)
class PSL2(GroupDescriptor):
    q: int

    def __post_init__(self):
        _require(is_prime(self.q) and self.q <= 13, f"PSL2({self.q}): need prime q <= 13")

    def text(self):
        return f"PSL2({self.q})"


@dataclass(frozen=True)
class PGL2(GroupDescriptor):
    q: int

    def __post_init__(self):
        _require(is_prime(self.q) and self.q <= 13, f"PGL2({self.q}): need prime q <= 13")

    def text(self):
        return f"PGL2({self.q})"


@dataclass(frozen=True)
class FromPresentation(GroupDescriptor):
    presentation: Presentation

    def text(self):
        return f"FP({self.presentation})"


_DESC_RE = re.compile(r"^\s*([A-Z][A-Z0-9]*?)\s*\((.*)\)\s*$", re.S)

_DESC_NAMES = {
    "C": Cyclic,
    "D": Dihedral,
    "SD": Semidihedral,
    "MC": SplitMetacyclic,
    "EXI": ExampleI,
    "AMIV": AccolaMaclachlanIV,
    "AMV": AccolaMaclachlanV,
    "S": Symmetric,
    "A": Alternating,
    "PSL2": PSL2,
    "PGL2": PGL2,
}


def parse_descriptor(text: str) -> GroupDescriptor:
    """Inverse of ``GroupDescriptor.text()``: ``"SD(16)"``, ``"MC(11,10,2)"``, ``"FP(<x | x^5>)"``."""
    m = _DESC_RE.match(text)
    if not m:
        raise GroupConstructionError(f"cannot parse group descriptor {text!r}")
    name, args = m.group(1), m.group(2)
    if name == "FP":
        return FromPresentation(parse_presentation(args))
    if name not in _DESC_NAMES:
        raise GroupConstructionError(f"unknown group family {name!r}")
    try:
        values = [int(a) for a in args.split(",")] if args.strip() else []
    except ValueError:
        raise GroupConstructionError(f"bad parameters in {text!r}") from None
    try:
        return _DESC_NAMES[name](*values)
    except TypeError:
        raise GroupConstructionError(f"wrong number of parameters in {text!r}") from None


# ---------------------------------------------------------------------------
# the group object


class FiniteGroup:
    """A finite group on 0..order-1 with a precomputed Cayley table (0 = identity)."""

    def __init__(
        self,
        table: np.ndarray,
        generators: dict[str, int],
        descriptor: Optional[GroupDescriptor] = None,
        labeler: Optional[Callable[[int], str]] = None,
    ):
        table = np.ascontiguousarray(table, dtype=np.int32)
        n = table.shape[0]
        if table.shape != (n, n) or n == 0:
            raise GroupConstructionError("multiplication table must be square and non-empty")
        if not (np.array_equal(table[0], np.arange(n)) and np.array_equal(table[:, 0], np.arange(n))):
            raise GroupConstructionError("element 0 is not the identity")
        self.table = table
        self.table.setflags(write=False)
        self.order = n
        self.generators = dict(generators)
        self.descriptor = descriptor
        self._labeler = labeler
        self.inv = np.argmax(table == 0, axis=1).astype(np.int32)
        self.orders = kernels.element_orders(table)
        self._cache: dict = {}

    def __repr__(self):
        name = self.descriptor.text() if self.descriptor else "group"
        return f"<FiniteGroup {name} of order {self.order}>"

    def __len__(self):
        return self.order

    def mul(self, *xs: int) -> int:
        out = 0
        for x in xs:
            out = int(self.table[out, x])
        return out

    def inverse(self, x: int) -> int:
        return int(self.inv[x])

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inverse(x), -k
        out = 0
        for _ in range(k % int(self.orders[x])):
            out = int(self.table[out, x])
        return out

    def conj(self, x: int, g: int) -> int:
        """x^g = g^-1 x g."""
        return self.mul(self.inverse(g), x, g)

    def gen(self, name: str) -> int:
        return self.generators[name]

    def label(self, x: int) -> str:
        return self._labeler(int(x)) if self._labeler else str(int(x))

    def order_classes(self) -> dict[int, np.ndarray]:
        if "classes" not in self._cache:
            self._cache["classes"] = {
                int(o): np.flatnonzero(self.orders == o).astype(np.int32)
                for o in np.unique(self.orders)
            }
        return self._cache["classes"]

    def elements_of_order(self, m: int) -> np.ndarray:
        return self.order_classes().get(m, np.zeros(0, dtype=np.int32))

    def order_profile(self) -> tuple[tuple[int, int], ...]:
        return tuple((o, len(c)) for o, c in sorted(self.order_classes().items()))

    def check_axioms(self) -> bool:
        """Light's associativity test over the named generators, plus inverses."""
        t = self.table
        n = self.order
        ar = np.arange(n)
        if not all(np.array_equal(np.sort(row), ar) for row in t):
            return False
        if not np.all(t[ar, self.inv] == 0):
            return False
        gens = list(self.generators.values())
        if len(closure(self, gens)) != n:
            return False
        for g in gens:
            # (x g) y == x (g y) for all x, y
            if not np.array_equal(t[t[:, g]][:, :], t[:, t[g]]):
                return False
        return True


# ---------------------------------------------------------------------------
# constructors


def _table_from(mul: Callable[[np.ndarray, np.ndarray], np.ndarray], n: int) -> np.ndarray:
    idx = np.arange(n, dtype=np.int64)
    return mul(idx[:, None], idx[None, :]).astype(np.int32)


def _power_table(base: int, length: int, mod: int) -> np.ndarray:
    out = np.ones(length, dtype=np.int64)
    for j in range(1, length):
        out[j] = out[j - 1] * base % mod
    return out


def _cyclic(d: Cyclic) -> FiniteGroup:
    n = d.n
    table = _table_from(lambda a, b: (a + b) % n, n)
    return FiniteGroup(table, {"g": 1 % n}, d, lambda x: "1" if x == 0 else f"g^{x}")


def _fmt(*parts: tuple[str, int]) -> str:
    s = " ".join(name if e == 1 else f"{name}^{e}" for name, e in parts if e)
    return s or "1"


def _dihedral(d: Dihedral) -> FiniteGroup:
    n = d.n
    # r^i s^j -> i + n*j;  s r s = r^-1
    def mul(a, b):
        i, j = a % n, a // n
        k, l = b % n, b // n
        sign = np.where(j == 1, -1, 1)
        return (i + sign * k) % n + n * ((j + l) % 2)

    table = _table_from(mul, 2 * n)
    return FiniteGroup(table, {"r": 1 % (2 * n), "s": n}, d, lambda x: _fmt(("r", x % n), ("s", x // n)))


def _semidihedral(d: Semidihedral) -> FiniteGroup:
    n, u = d.n, d.m - 1
    # c^i a^j -> i + n*j;  a c^k = c^(u k) a
    upow = _power_table(u, 2, n)

    def mul(a, b):
        i, j = a % n, a // n
        k, l = b % n, b // n
        return (i + k * upow[j]) % n + n * ((j + l) % 2)

    table = _table_from(mul, 2 * n)
    c, a = 1, n
    b = int(table[a, (n - 1)])  # b = a c^-1, from abc = 1
    return FiniteGroup(table, {"a": a, "b": b, "c": c}, d, lambda x: _fmt(("c", x % n), ("a", x // n)))


def _split_metacyclic(d: SplitMetacyclic) -> FiniteGroup:
    p, k = d.p, d.k
    w = pow(d.u, -1, p)
    wpow = _power_table(w, k, p)

    # x^i y^j -> i + p*j;  y^j x^k = x^(k u^-j) y^j
    def mul(a, b):
        i, j = a % p, a // p
        kk, l = b % p, b // p
        return (i + kk * wpow[j]) % p + p * ((j + l) % k)

    table = _table_from(mul, p * k)
    return FiniteGroup(table, {"x": 1 % (p * k), "y": p % (p * k)}, d, lambda x: _fmt(("x", x % p), ("y", x // p)))


def _example_i(d: ExampleI) -> FiniteGroup:
    p = d.p
    w = pow(d.u, -1, p)
    wpow = _power_table(w, 6, p)

    # x^i y^j z^k -> i + p*(j + 6k)
    def mul(a, b):
        i, r = a % p, a // p
        j, k = r % 6, r // 6
        i2, r2 = b % p, b // p
        j2, k2 = r2 % 6, r2 // 6
        return (i + i2 * wpow[j]) % p + p * ((j + j2) % 6 + 6 * ((k + k2) % 2))

    table = _table_from(mul, 12 * p)

    def label(x):
        r = x // p
        return _fmt(("x", x % p), ("y", r % 6), ("z", r // 6))

    return FiniteGroup(table, {"x": 1, "y": p, "z": 6 * p}, d, label)


def _accola_maclachlan_iv(d: AccolaMaclachlanIV) -> FiniteGroup:
    """V4 x| D_n with rho acting on V4 by an order-3 automorphism, s by a transposition.

    Modulo <rho^3> this is V4 x| S3 = S4, and s inverts rho^3, which gives the
    defining relations with c = rho.
    """
    n = d.n
    rho_act = np.array([0, 2, 3, 1], dtype=np.int64)  # 1 -> 2 -> 3 -> 1
    s_act = np.array([0, 2, 1, 3], dtype=np.int64)    # swap 1, 2; fix 3
    # action of rho^i s^j on V4 depends on (i mod 3, j)
    act = np.zeros((3, 2, 4), dtype=np.int64)
    for i in range(3):
        for j in range(2):
            v = np.arange(4)
            if j:
                v = s_act[v]
            for _ in range(i):
                v = rho_act[v]
            act[i, j] = v

    # (v, rho^i s^j) -> v + 4*(i + n*j)
    def mul(a, b):
        v1, r1 = a % 4, a // 4
        i1, j1 = r1 % n, r1 // n
        v2, r2 = b % 4, b // 4
        i2, j2 = r2 % n, r2 // n
        v = v1 ^ act[i1 % 3, j1, v2]
        sign = np.where(j1 == 1, -1, 1)
        return v + 4 * ((i1 + sign * i2) % n + n * ((j1 + j2) % 2))

    table = _table_from(mul, 8 * n)
    c = 4  # (0, rho)
    orders = kernels.element_orders(table)
    a = next((v + 4 * n for v in (0, 3) if orders[table[c, v + 4 * n]] == 4), None)
    if a is None:
        raise GroupConstructionError(f"AMIV({n}): no involution a with ca of order 4")
    b = int(np.argmax(table[int(table[c, a])] == 0))  # b = (c a)^-1 = a^-1 c^-1
    gens = {"a": a, "b": b, "c": c}

    def label(x):
        v, r = x % 4, x // 4
        return f"({v}; " + _fmt(("r", r % n), ("s", r // n)) + ")"

    return FiniteGroup(table, gens, d, label)


def _accola_maclachlan_v(d: AccolaMaclachlanV) -> FiniteGroup:
    """Lifts (k, T) in Z_2m x| D4 with k = kappa(T) mod 2 and D4 acting on Z_2m by eps.

    D4 = <r, f | r^4 = f^2 = 1, f r f = r^-1>; eps(r) = -1, eps(f) = +1,
    kappa(r) = 0, kappa(f) = 1.
    """
    n = d.n
    m = n // 2
    two_m = 2 * m
    # D4 elements r^i f^j -> t = i + 4j
    def d4_mul(t1, t2):
        i1, j1 = t1 % 4, t1 // 4
        i2, j2 = t2 % 4, t2 // 4
        sign = np.where(j1 == 1, -1, 1)
        return (i1 + sign * i2) % 4 + 4 * ((j1 + j2) % 2)

    def eps(t):
        return np.where((t % 4) % 2 == 1, -1, 1)

    def kappa(t):
        return (t // 4) % 2

    # element (k, t) -> t + 8h with k = 2h + kappa(t)
    def mul(a, b):
        t1, h1 = a % 8, a // 8
        t2, h2 = b % 8, b // 8
        k1 = 2 * h1 + kappa(t1)
        k2 = 2 * h2 + kappa(t2)
        k = (k1 + eps(t1) * k2) % two_m
        t = d4_mul(t1, t2)
        return t + 8 * ((k - kappa(t)) % two_m // 2)

    table = _table_from(mul, 8 * m)
    c = 4          # (1, f)
    a = 1 + 4      # (1, r f)
    b = int(np.argmax(table[int(table[c, a])] == 0))
    gens = {"a": a, "b": b, "c": c}

    def label(x):
        t, h = x % 8, x // 8
        k = 2 * h + (t // 4)
        return f"({k}; " + _fmt(("r", t % 4), ("f", t // 4)) + ")"

    return FiniteGroup(table, gens, d, label)


def _perm_group(perms: list[tuple[int, ...]], gens: dict[str, tuple[int, ...]], desc) -> FiniteGroup:
    index = {p: i for i, p in enumerate(perms)}
    arr = np.array(perms, dtype=np.int64)
    width = arr.shape[1]
    radix = width ** np.arange(width - 1, -1, -1)
    codes = arr @ radix
    order = np.argsort(codes)
    n = len(perms)
    table = np.empty((n, n), dtype=np.int32)
    for i in range(n):
        # (p q)(k) = q(p(k)): apply p first
        composed = np.take(arr, arr[i], axis=1)  # row j: q_j(p_i(k))
        c = composed @ radix
        table[i] = order[np.searchsorted(codes[order], c)]
    return FiniteGroup(
        table,
        {name: index[p] for name, p in gens.items()},
        desc,
        lambda x: _cycle_string(perms[x]),
    )


def _cycle_string(p: tuple[int, ...]) -> str:
    seen, cycles = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j + 1)
            j = p[j]
        cycles.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(cycles) or "()"


def _parity(p) -> int:
    seen, par = set(), 0
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        par ^= (length - 1) & 1
    return par


def _symmetric(d) -> FiniteGroup:
    n = d.n
    perms = sorted(itertools.permutations(range(n)))
    alternating = isinstance(d, Alternating)
    if alternating:
        perms = [p for p in perms if _parity(p) == 0]
    ident = tuple(range(n))
    perms.remove(ident)
    perms.insert(0, ident)
    if n == 1:
        gens = {}
    elif alternating:
        if n < 3:
            gens = {}
        else:
            t = list(range(n)); t[0], t[1], t[2] = 1, 2, 0
            cyc = list(range(n))
            if n % 2:
                cyc = [(i + 1) % n for i in range(n)]
            else:
                cyc = [0] + [1 + i % (n - 1) for i in range(1, n)]
            gens = {"t": tuple(t), "c": tuple(cyc)}
    else:
        t = list(range(n)); t[0], t[1] = 1, 0
        gens = {"t": tuple(t), "c": tuple((i + 1) % n for i in range(n))}
    return _perm_group(perms, gens, d)


def _projective(d) -> FiniteGroup:
    q = d.q
    squares = {(x * x) % q for x in range(1, q)}
    elems = []
    for a, b, c, e in itertools.product(range(q), repeat=4):
        first = next((v for v in (a, b, c, e) if v), 0)
        if first != 1 or (a * e - b * c) % q == 0:
            continue
        if isinstance(d, PSL2) and (a * e - b * c) % q not in squares:
            continue
        elems.append((a, b, c, e))
    ident = (1, 0, 0, 1)
    elems.remove(ident)
    elems.insert(0, ident)
    arr = np.array(elems, dtype=np.int64)
    lookup = np.full(q ** 4, -1, dtype=np.int64)
    keys = ((arr[:, 0] * q + arr[:, 1]) * q + arr[:, 2]) * q + arr[:, 3]
    lookup[keys] = np.arange(len(elems))
    inv_mod = np.array([0] + [pow(x, -1, q) for x in range(1, q)], dtype=np.int64)

    A = arr[:, None, :]
    B = arr[None, :, :]
    prod = np.stack(
        [
            A[..., 0] * B[..., 0] + A[..., 1] * B[..., 2],
            A[..., 0] * B[..., 1] + A[..., 1] * B[..., 3],
            A[..., 2] * B[..., 0] + A[..., 3] * B[..., 2],
            A[..., 2] * B[..., 1] + A[..., 3] * B[..., 3],
        ],
        axis=-1,
    ) % q
    nz = prod != 0
    first_idx = np.argmax(nz, axis=-1)
    first = np.take_along_axis(prod, first_idx[..., None], axis=-1)[..., 0]
    prod = prod * inv_mod[first][..., None] % q
    pk = ((prod[..., 0] * q + prod[..., 1]) * q + prod[..., 2]) * q + prod[..., 3]
    table = lookup[pk].astype(np.int32)

    def idx(m):
        a, b, c, e = (v % q for v in m)
        first = next(v for v in (a, b, c, e) if v)
        s = pow(first, -1, q)
        return int(lookup[((a * s % q * q + b * s % q) * q + c * s % q) * q + e * s % q])

    gens = {"x": idx((1, 1, 0, 1)), "y": idx((0, q - 1, 1, 0))}
    if isinstance(d, PGL2) and q > 2:
        nonsq = next(x for x in range(2, q) if x not in squares)
        gens["z"] = idx((nonsq, 0, 0, 1))
    return FiniteGroup(table, gens, d, lambda x: "[[{},{}],[{},{}]]".format(*elems[x]))


def construct(desc: GroupDescriptor) -> FiniteGroup:
    """Build the concrete group for a descriptor."""
    if isinstance(desc, Cyclic):
        return _cyclic(desc)
    if isinstance(desc, Dihedral):
        return _dihedral(desc)
    if isinstance(desc, Semidihedral):
        return _semidihedral(desc)
    if isinstance(desc, SplitMetacyclic):
        return _split_metacyclic(desc)
    if isinstance(desc, ExampleI):
        return _example_i(desc)
    if isinstance(desc, AccolaMaclachlanIV):
        return _accola_maclachlan_iv(desc)
    if isinstance(desc, AccolaMaclachlanV):
        return _accola_maclachlan_v(desc)
    if isinstance(desc, (Symmetric, Alternating)):
        return _symmetric(desc)
    if isinstance(desc, (PSL2, PGL2)):
        return _projective(desc)
    if isinstance(desc, FromPresentation):
        from .presentations import permutation_group

        return permutation_group(desc.presentation, descriptor=desc)
    raise GroupConstructionError(f"unsupported descriptor {desc!r}")


def standard_presentation(desc: GroupDescriptor) -> Presentation:
    """The defining presentation used to cross-check a normal-form constructor."""
    if isinstance(desc, Semidihedral):
        return parse_presentation(f"< a, c | a^2, c^{desc.n}, a^-1 c a c^-{desc.m - 1} >")
    if isinstance(desc, AccolaMaclachlanIV):
        return parse_presentation(f"< a, b, c | a^2, b^4, c^{desc.n}, a b c, a^-1 c^3 a c^3 >")
    if isinstance(desc, AccolaMaclachlanV):
        return parse_presentation(f"< a, b, c | a^2, b^4, c^{desc.n}, a b c, a^-1 c^2 a c^2 >")
    if isinstance(desc, SplitMetacyclic):
        return parse_presentation(f"< x, y | x^{desc.p}, y^{desc.k}, y^-1 x y x^-{desc.u} >")
    if isinstance(desc, ExampleI):
        return parse_presentation(
            f"< x, y, z | x^{desc.p}, y^6, z^2, y^-1 x y x^-{desc.u}, [x, z], [y, z] >"
        )
    if isinstance(desc, Cyclic):
        return parse_presentation(f"< g | g^{desc.n} >")
    if isinstance(desc, Dihedral):
        return parse_presentation(f"< r, s | r^{desc.n}, s^2, (r s)^2 >")
    raise GroupConstructionError(f"no standard presentation for {desc}")


# ---------------------------------------------------------------------------
# queries


def element_order(G: FiniteGroup, x: int) -> int:
    return int(G.orders[x])


def closure(G: FiniteGroup, S: Sequence[int]) -> np.ndarray:
    """Subgroup generated by S, in breadth-first order from the identity."""
    S = [int(s) for s in S]
    if not S:
        return np.zeros(1, dtype=np.int32)
    return kernels.closure(G.table, S)


def generates(G: FiniteGroup, S: Sequence[int]) -> bool:
    return len(closure(G, S)) == G.order


@dataclass(frozen=True)
class StructureReport:
    center_order: int
    derived_order: int
    abelianization: tuple[int, ...]
    is_perfect: bool


def center(G: FiniteGroup) -> np.ndarray:
    t = G.table
    return np.flatnonzero(np.all(t == t.T, axis=1)).astype(np.int32)


def commutator_subgroup(G: FiniteGroup) -> np.ndarray:
    t, inv = G.table, G.inv
    comms = t[t[inv[:, None], inv[None, :]], t]  # x^-1 y^-1 x y
    gens = np.unique(comms)
    # add generators incrementally so the BFS only uses the ones that matter
    sub = np.zeros(1, dtype=np.int32)
    used: list[int] = []
    member = np.zeros(G.order, dtype=bool)
    member[0] = True
    for g in gens.tolist():
        if not member[g]:
            used.append(g)
            sub = kernels.closure(t, used)
            member[:] = False
            member[sub] = True
    return np.sort(sub)


def abelian_invariants_from_orders(orders: Sequence[int]) -> list[int]:
    """Invariant factors of a finite abelian group given the multiset of its element orders."""
    orders = list(orders)
    size = len(orders)
    if size == 1:
        return []
    parts: dict[int, list[int]] = {}
    for p in prime_factors(size):
        # counts[i] = #{a : a^(p^i) = 1} = p^(sum_j min(e_j, i))
        exps = []
        i = 1
        prev = 0
        logs = []
        while True:
            cnt = sum(1 for o in orders if (p ** i) % o == 0)
            e = round(np.log(cnt) / np.log(p))
            logs.append(e)
            if e == prev:
                break
            prev = e
            i += 1
        # number of cyclic factors with exponent >= i is logs[i-1] - logs[i-2]
        ge = [logs[0]] + [logs[i] - logs[i - 1] for i in range(1, len(logs))]
        for i in range(len(ge)):
            count_exact = ge[i] - (ge[i + 1] if i + 1 < len(ge) else 0)
            exps.extend([i + 1] * count_exact)
        parts[p] = sorted(exps, reverse=True)
    width = max(len(v) for v in parts.values())
    factors = [1] * width
    for p, exps in parts.items():
        for i, e in enumerate(exps):
            factors[i] *= p ** e
    return sorted(f for f in factors if f > 1)


def structure(G: FiniteGroup) -> StructureReport:
    if "structure" in G._cache:
        return G._cache["structure"]
    Z = center(G)
    D = commutator_subgroup(G)
    # cosets of G': label each element by the coset of its right multiples
    coset = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for x in range(G.order):
        if coset[x] < 0:
            coset[G.table[x, D]] = len(reps)
            reps.append(x)
    quotient_orders = []
    for r in reps:
        k, y = 1, r
        while coset[y] != coset[0]:
            y = int(G.table[y, r])
            k += 1
        quotient_orders.append(k)
    ab = abelian_invariants_from_orders(quotient_orders)
    report = StructureReport(len(Z), len(D), tuple(ab), len(D) == G.order)
    G._cache["structure"] = report
    return report


def sylow_count(G: FiniteGroup, p: int) -> int:
    """Number of Sylow p-subgroups, as the index of the normalizer of one of them."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if G.order % p:
        warnings.warn(f"{p} does not divide |G| = {G.order}; Sylow subgroup is trivial", TrivialSylowWarning)
        return 1
    target = 1
    while G.order % (target * p) == 0:
        target *= p
    p_elements = [x for x in range(1, G.order) if _is_p_power(int(G.orders[x]), p)]
    sub = np.zeros(1, dtype=np.int32)
    gens: list[int] = []
    while len(sub) < target:
        members = set(sub.tolist())
        for x in p_elements:
            if x in members:
                continue
            trial = kernels.closure(G.table, gens + [x])
            if _is_p_power(len(trial), p):
                gens.append(x)
                sub = trial
                break
        else:  # pragma: no cover - Sylow's theorem guarantees progress
            raise RuntimeError("failed to grow a p-subgroup")
    P = np.zeros(G.order, dtype=bool)
    P[sub] = True
    conj = G.table[G.table[G.inv[:, None], sub[None, :]], np.arange(G.order)[:, None]]
    normalizer = int(np.sum(np.all(P[conj], axis=1)))
    return G.order // normalizer


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


# ---------------------------------------------------------------------------
# automorphisms


def minimal_generating_tuple(G: FiniteGroup) -> tuple[int, ...]:
    """A short generating tuple whose order classes are as small as possible."""
    if "mingen" in G._cache:
        return G._cache["mingen"]
    n = G.order
    classes = {o: c for o, c in G.order_classes().items() if o > 1}
    result: Optional[tuple[int, ...]] = None
    if n == 1:
        result = ()
    elif n in classes:
        result = (int(classes[n][0]),)
    else:
        pairs = sorted(
            ((len(classes[o1]) * len(classes[o2]), o1, o2) for o1 in classes for o2 in classes if o1 <= o2),
        )
        for _, o1, o2 in pairs:
            for a in classes[o1].tolist():
                for b in classes[o2].tolist():
                    if b != a and len(kernels.closure(G.table, [a, b])) == n:
                        result = (a, b)
                        break
                if result:
                    break
            if result:
                break
        if result is None:
            gens: list[int] = []
            sub = np.zeros(1, dtype=np.int32)
            while len(sub) < n:
                members = set(sub.tolist())
                x = next(x for x in range(n) if x not in members)
                gens.append(x)
                sub = kernels.closure(G.table, gens)
            result = tuple(gens)
    G._cache["mingen"] = result
    return result


@dataclass(frozen=True)
class AutomorphismGroup:
    group_order: int
    generators: tuple[int, ...]
    maps: np.ndarray = field(repr=False)  # shape (|Aut|, |G|)

    @property
    def order(self) -> int:
        return len(self.maps)


def automorphisms(G: FiniteGroup, cap: Optional[int] = None) -> AutomorphismGroup:
    """All automorphisms, by extending every order-compatible image of a minimal generating tuple."""
    cap = search_cap() if cap is None else cap
    if G.order > cap:
        raise SearchCapExceeded("automorphisms", G.order, cap)
    if "aut" in G._cache:
        return G._cache["aut"]
    gens = minimal_generating_tuple(G)
    t, orders = G.table, G.orders
    candidates = [G.elements_of_order(int(orders[g])).tolist() for g in gens]
    # order of consecutive products is an invariant too
    checks = [(i, i + 1, int(orders[t[gens[i], gens[i + 1]]])) for i in range(len(gens) - 1)]
    found = []
    for images in itertools.product(*candidates):
        if any(int(orders[t[images[i], images[j]]]) != o for i, j, o in checks):
            continue
        phi = kernels.extend_hom(t, t, gens, images)
        if phi is not None:
            found.append(phi)
    if not found:
        found = [np.arange(G.order, dtype=np.int32)]
    maps = np.unique(np.vstack(found), axis=0)
    result = AutomorphismGroup(G.order, tuple(gens), maps)
    G._cache["aut"] = result
    return result


def find_isomorphism(G: FiniteGroup, H: FiniteGroup) -> Optional[np.ndarray]:
    """An isomorphism G -> H as an element map, or None (exhaustive; small groups only)."""
    if G.order != H.order or G.order_profile() != H.order_profile():
        return None
    gens = minimal_generating_tuple(G)
    candidates = [H.elements_of_order(int(G.orders[g])).tolist() for g in gens]
    for images in itertools.product(*candidates):
        phi = kernels.extend_hom(G.table, H.table, gens, images)
        if phi is not None:
            return phi
    return None


def is_homomorphism(G: FiniteGroup, H: FiniteGroup, phi: Sequence[int]) -> bool:
    phi = np.asarray(phi)
    return bool(np.array_equal(phi[G.table], H.table[phi[:, None], phi[None, :]]))
