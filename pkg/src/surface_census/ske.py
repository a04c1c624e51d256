"""Surface-kernel epimorphisms from genus-0 signatures, as generating tuples.

A tuple (c_1, ..., c_k) with ord(c_j) = m_j, c_1 ... c_k = 1 and <c_j> = G
stands for the epimorphism gamma_j -> c_j. Two tuples have the same kernel
iff they differ by an automorphism of G, so Aut(G)-orbits of tuples count
normal surface subgroups.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import kernels
from .groups import (
    ExampleI,
    FiniteGroup,
    SearchCapExceeded,
    SplitMetacyclic,
    automorphisms,
    multiplicative_order,
    search_cap,
)
from .signatures import Signature, rh_genus


class SKEError(ValueError):
    pass


class SemiregularityViolation(AssertionError):
    """An automorphism fixed a generating tuple; this would contradict semiregularity."""


@dataclass(frozen=True)
class GeneratingTuple:
    group: FiniteGroup = field(repr=False, compare=False)
    entries: tuple[int, ...]
    signature: Signature

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def is_valid(self) -> bool:
        G = self.group
        if len(self.entries) != len(self.signature.periods):
            return False
        if G.mul(*self.entries) != 0:
            return False
        if any(int(G.orders[c]) != m for c, m in zip(self.entries, self.signature.periods)):
            return False
        return len(kernels.closure(G.table, list(self.entries))) == G.order


@dataclass(frozen=True)
class EigenLabel:
    """Label j of a kernel: the designated slot acts on the order-p subgroup as x -> x^(base^(step*j))."""

    j: int
    modulus: int
    slot: int
    base: int
    step: int
    multiplier: int

    def __str__(self):
        return str(self.j)


@dataclass(frozen=True)
class SKEOrbit:
    representative: GeneratingTuple
    size: int
    label: Optional[EigenLabel] = None


def _check_signature(sig: Signature):
    if sig.genus != 0:
        raise SKEError(f"{sig}: only genus-0 signatures are supported")
    if len(sig.periods) < 2:
        raise SKEError(f"{sig}: need at least two periods")


def tuple_array(G: FiniteGroup, sig: Signature, cap: Optional[int] = None) -> np.ndarray:
    """All generating tuples as an (N, k) int32 array in lexicographic order."""
    _check_signature(sig)
    cap = search_cap() if cap is None else cap
    if G.order > cap:
        raise SearchCapExceeded(f"tuple search for {sig}", G.order, cap)
    key = ("tuples", sig)
    if key not in G._cache:
        periods = sig.periods
        classes = [G.elements_of_order(m) for m in periods[:-1]]
        G._cache[key] = kernels.enumerate_tuples(G.table, G.inv, G.orders, classes, periods[-1])
    return G._cache[key]


def enumerate_tuples(G: FiniteGroup, sig: Signature, cap: Optional[int] = None) -> list[GeneratingTuple]:
    return [GeneratingTuple(G, tuple(int(v) for v in row), sig) for row in tuple_array(G, sig, cap)]


def surface_genus(G: FiniteGroup, sig: Signature) -> int:
    return rh_genus(sig, G.order)


def _keys(rows: np.ndarray, n: int) -> np.ndarray:
    """Integer keys preserving lexicographic order of rows."""
    out = np.zeros(rows.shape[:-1], dtype=np.int64)
    for j in range(rows.shape[-1]):
        out = out * n + rows[..., j]
    return out


@dataclass
class _OrbitData:
    tuples: np.ndarray
    keys: np.ndarray
    orbit_of: np.ndarray
    reps: list[int]
    aut_order: int


def _orbit_data(G: FiniteGroup, sig: Signature) -> _OrbitData:
    key = ("orbits", sig)
    if key in G._cache:
        return G._cache[key]
    T = tuple_array(G, sig)
    A = automorphisms(G)
    maps = A.maps
    keys = _keys(T, G.order)
    orbit_of = np.full(len(T), -1, dtype=np.int64)
    reps: list[int] = []
    for i in range(len(T)):
        if orbit_of[i] >= 0:
            continue
        images = maps[:, T[i]]  # (|Aut|, k)
        ik = _keys(images, G.order)
        idx = np.searchsorted(keys, ik)
        if np.any(idx >= len(keys)) or np.any(keys[np.minimum(idx, len(keys) - 1)] != ik):
            raise SKEError("automorphism image of a generating tuple is not a generating tuple")
        if len(np.unique(idx)) != A.order:
            raise SemiregularityViolation(
                f"{sig} -> {G.descriptor}: a non-identity automorphism fixes tuple {tuple(T[i])}"
            )
        if np.any(orbit_of[idx] >= 0):
            raise SKEError("orbits overlap; automorphism list is not closed")
        orbit_of[idx] = len(reps)
        reps.append(int(idx.min()))
    data = _OrbitData(T, keys, orbit_of, reps, A.order)
    G._cache[key] = data
    return data


def default_base(G: FiniteGroup) -> int:
    desc = G.descriptor
    if isinstance(desc, (SplitMetacyclic, ExampleI)):
        return desc.u
    raise SKEError(f"no canonical eigenvalue base for {desc}; pass base explicitly")


def label_convention(sig: Signature) -> tuple[int, int]:
    """(step, modulus) for labels: eigenvalue = base^(step*j), j taken mod modulus."""
    periods = sig.periods
    if periods == (2, 5, 10):
        return 2, 5
    return 1, periods[1]


def _label_tables(G: FiniteGroup, p: int, base: int, sig: Signature):
    """(x, exponent-of-element-in-<x>, label-of-multiplier) lookup arrays."""
    order_p = G.elements_of_order(p)
    if len(order_p) != p - 1:
        raise SKEError(f"G has no unique subgroup of order {p}")
    x = int(order_p[0])
    power_of = np.full(G.order, -1, dtype=np.int64)
    z = 0
    for e in range(p):
        power_of[z] = e
        z = int(G.table[z, x])
    step, modulus = label_convention(sig)
    dlog = np.full(p, -1, dtype=np.int64)
    val = 1 % p
    for k in range(multiplicative_order(base, p)):
        dlog[val] = k
        val = val * base % p
    return x, power_of, dlog, step, modulus


def _symmetric_residue(j: int, modulus: int) -> int:
    j %= modulus
    return j - modulus if j > modulus // 2 else j


def eigen_label(t: GeneratingTuple, p: int, base: Optional[int] = None, slot: int = 1) -> EigenLabel:
    """Eigenvalue label of the kernel of t on the unique subgroup of order p.

    With x^b = b^-1 x b = x^e for the entry b in the given slot, j is defined by
    e = base^(step*j); it is reported as the residue of least absolute value.
    """
    G = t.group
    base = default_base(G) if base is None else base
    x, power_of, dlog, step, modulus = _label_tables(G, p, base, t.signature)
    e = int(power_of[G.conj(x, t.entries[slot])])
    d = int(dlog[e])
    if d < 0:
        raise SKEError(f"multiplier {e} is not a power of base {base} mod {p}")
    if d % step:
        raise SKEError(f"multiplier {e} = {base}^{d} is not a power of {base}^{step}")
    return EigenLabel(_symmetric_residue(d // step, modulus), modulus, slot, base, step, e)


def orbits(
    G: FiniteGroup, sig: Signature, p: Optional[int] = None, base: Optional[int] = None
) -> list[SKEOrbit]:
    """Aut(G)-orbits of generating tuples, ordered by canonical (least) representative.

    With p given, each orbit also carries its eigen label, which is checked to
    be constant on the orbit.
    """
    data = _orbit_data(G, sig)
    b0 = (default_base(G) if base is None else base) if p is not None else None
    out = []
    for o, rep in enumerate(data.reps):
        label = None
        if p is not None:
            members = data.tuples[data.orbit_of == o]
            x, power_of, dlog, step, modulus = _label_tables(G, p, b0, sig)
            bs = members[:, 1]
            mults = power_of[G.table[G.table[G.inv[bs], x], bs]]
            labels = {_symmetric_residue(int(d) // step, modulus) if d >= 0 and d % step == 0 else None
                      for d in dlog[mults]}
            rep_t = GeneratingTuple(G, tuple(int(v) for v in data.tuples[rep]), sig)
            label = eigen_label(rep_t, p, b0)
            if labels != {label.j}:
                raise SKEError(f"eigen label not constant on orbit {o}: {labels}")
        out.append(SKEOrbit(GeneratingTuple(G, tuple(int(v) for v in data.tuples[rep]), sig), data.aut_order, label))
    return out


def braid_swap(t: GeneratingTuple) -> GeneratingTuple:
    """(a, b, c) -> (a, b c b^-1, b)."""
    if len(t) != 3:
        raise SKEError("braid_swap needs a triple")
    m = t.signature.periods
    if m[1] != m[2]:
        raise SKEError(f"braid_swap needs equal periods in slots 2 and 3, got {m[1]} and {m[2]}")
    G = t.group
    a, b, c = t.entries
    return GeneratingTuple(G, (a, G.mul(b, c, G.inverse(b)), b), t.signature)


def reflect(t: GeneratingTuple) -> GeneratingTuple:
    """(a, b, c) -> (a^-1, a b^-1 a^-1, a b c^-1 b^-1 a^-1)."""
    if len(t) != 3:
        raise SKEError("reflect needs a triple")
    G = t.group
    a, b, c = t.entries
    ai, bi, ci = G.inverse(a), G.inverse(b), G.inverse(c)
    return GeneratingTuple(G, (ai, G.mul(a, bi, ai), G.mul(a, b, ci, bi, ai)), t.signature)


MOVES: dict[str, Callable[[GeneratingTuple], GeneratingTuple]] = {
    "braid_swap": braid_swap,
    "reflect": reflect,
}


def _move_rows(G: FiniteGroup, rows: np.ndarray, move: str) -> np.ndarray:
    """Vectorized braid_swap / reflect on an (N, 3) array of tuples."""
    t, inv = G.table, G.inv
    a, b, c = rows[:, 0], rows[:, 1], rows[:, 2]
    if move == "braid_swap":
        return np.stack([a, t[t[b, c], inv[b]], b], axis=1)
    ai, bi, ci = inv[a], inv[b], inv[c]
    ab = t[a, b]
    return np.stack([ai, t[t[a, bi], ai], t[t[t[ab, ci], bi], ai]], axis=1)


def _label_key(j: int):
    return (abs(j), j < 0)


@dataclass(frozen=True)
class OrbitAction:
    move: str
    permutation: tuple[int, ...]          # orbit index -> orbit index
    labels: Optional[tuple[int, ...]]     # eigen label per orbit index

    def pairs(self) -> list[tuple]:
        """Unordered pairs (and fixed points) of the induced map, by label when available."""
        name = (lambda i: self.labels[i]) if self.labels else (lambda i: i)
        seen, out = set(), []
        for i, j in enumerate(self.permutation):
            if i in seen:
                continue
            seen.update((i, j))
            out.append(tuple(sorted((name(i), name(j)), key=_label_key)))
        return sorted(out, key=lambda pr: _label_key(pr[0]))

    def pairing_text(self) -> str:
        parts = []
        for x, y in self.pairs():
            parts.append(f"{x}" if x == y else f"{x}<->{y}")
        return "{" + ", ".join(parts) + "}"


def orbit_action(
    G: FiniteGroup, sig: Signature, move: str, p: Optional[int] = None, base: Optional[int] = None
) -> OrbitAction:
    """The permutation of Aut(G)-orbits induced by a braid or reflection move."""
    if move not in MOVES:
        raise SKEError(f"unknown move {move!r}")
    if len(sig.periods) != 3:
        raise SKEError(f"{move} needs a triangle signature")
    if move == "braid_swap" and sig.periods[1] != sig.periods[2]:
        raise SKEError(f"braid_swap undefined for {sig}: periods in slots 2 and 3 differ")
    data = _orbit_data(G, sig)
    images = _move_rows(G, data.tuples.astype(np.int64), move)
    ik = _keys(images, G.order)
    idx = np.searchsorted(data.keys, ik)
    if np.any(idx >= len(data.keys)) or np.any(data.keys[np.minimum(idx, len(data.keys) - 1)] != ik):
        raise SKEError(f"{move} produced a tuple outside the generating set")
    target = data.orbit_of[idx]
    perm = []
    for o in range(len(data.reps)):
        hit = np.unique(target[data.orbit_of == o])
        if len(hit) != 1:
            raise SKEError(f"{move} does not induce a map on orbits")
        perm.append(int(hit[0]))
    labels = None
    if p is not None:
        labels = tuple(o.label.j for o in orbits(G, sig, p, base))
    return OrbitAction(move, tuple(perm), labels)


def ske_report(
    G: FiniteGroup,
    sig: Signature,
    p: Optional[int] = None,
    base: Optional[int] = None,
    moves: Sequence[str] = (),
) -> dict:
    """JSON-ready summary {signature, group, tuple_count, aut_order, orbit_count, labels, pairings}."""
    T = tuple_array(G, sig)
    report = {
        "signature": str(sig),
        "group": G.descriptor.text() if G.descriptor else None,
        "group_order": G.order,
        "tuple_count": int(len(T)),
    }
    if len(T) == 0:
        report.update(aut_order=None, orbit_count=0, labels=None, pairings={})
        return report
    orbs = orbits(G, sig, p, base)
    report["aut_order"] = orbs[0].size
    report["orbit_count"] = len(orbs)
    report["genus"] = surface_genus(G, sig)
    report["representatives"] = [list(o.representative.entries) for o in orbs]
    report["labels"] = [o.label.j for o in orbs] if p is not None else None
    report["pairings"] = {m: orbit_action(G, sig, m, p, base).pairing_text() for m in moves}
    return report
