"""Finite presentations: parsing, Todd-Coxeter coset enumeration, abelianization."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

DEFAULT_COSET_LIMIT = 2_000_000

Syllable = tuple[int, int]
Word = tuple[Syllable, ...]


class PresentationSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownGenerator(ValueError):
    pass


class CosetLimitExceeded(RuntimeError):
    """Enumeration did not close within the live-coset limit (the index is undecided)."""

    def __init__(self, limit: int):
        super().__init__(f"undecided (limit {limit})")
        self.limit = limit


def reduce_word(syllables: Iterable[Syllable]) -> Word:
    """Freely reduce a syllable sequence, merging adjacent equal generators."""
    out: list[list[int]] = []
    for g, e in syllables:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            out[-1][1] += e
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([g, e])
    return tuple((g, e) for g, e in out)


def invert_word(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def word_power(w: Word, n: int) -> Word:
    if n < 0:
        w, n = invert_word(w), -n
    return reduce_word(w * n)


def commutator(u: Word, v: Word) -> Word:
    return reduce_word(invert_word(u) + invert_word(v) + u + v)


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        r = len(self.generators)
        for w in self.relators:
            for g, _ in w:
                if not 0 <= g < r:
                    raise ValueError(f"generator index {g} out of range")

    def format_word(self, w: Word) -> str:
        """Render a word, writing a proper power u^k of a multi-syllable u as (u)^k."""
        if not w:
            return "1"
        n = len(w)
        for d in range(2, n // 2 + 1):
            if n % d == 0 and w == w[:d] * (n // d):
                return f"({self._syllables(w[:d])})^{n // d}"
        return self._syllables(w)

    def _syllables(self, w: Word) -> str:
        parts = []
        for g, e in w:
            name = self.generators[g]
            parts.append(name if e == 1 else f"{name}^{e}")
        return " ".join(parts)

    def __str__(self) -> str:
        rels = ", ".join(self.format_word(w) for w in self.relators)
        return f"< {', '.join(self.generators)} | {rels} >"


def triangle_presentation(l: int, m: int, n: int) -> Presentation:
    """< x, y | x^l, y^m, (xy)^n >."""
    x, y = 0, 1
    return Presentation(
        ("x", "y"),
        (((x, l),), ((y, m),), word_power(((x, 1), (y, 1)), n)),
    )


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.names: dict[str, int] = {}

    def error(self, msg: str):
        raise PresentationSyntaxError(msg, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            self.error(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def ident(self) -> str:
        self.skip()
        start = self.pos
        if self.pos < len(self.text) and (self.text[self.pos].isalpha() or self.text[self.pos] == "_"):
            self.pos += 1
            while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
                self.pos += 1
            return self.text[start:self.pos]
        self.error("expected identifier")

    def integer(self) -> int:
        self.skip()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.pos = start
            self.error("expected integer exponent")
        return int(self.text[start:self.pos])

    def presentation(self) -> Presentation:
        self.expect("<")
        names = [self.ident()]
        while self.peek() == ",":
            self.pos += 1
            names.append(self.ident())
        if self.peek() != "|":
            self.error(f"expected ',' or '|', found {self.peek() or 'end of input'!r}")
        self.pos += 1
        if len(set(names)) != len(names):
            self.error("duplicate generator name")
        self.names = {name: i for i, name in enumerate(names)}
        relators = []
        if self.peek() != ">":
            relators.append(self.word())
            while self.peek() == ",":
                self.pos += 1
                relators.append(self.word())
        self.expect(">")
        if self.peek():
            self.error("trailing input")
        return Presentation(tuple(names), tuple(relators))

    def word(self) -> Word:
        terms: list[Syllable] = []
        while self.peek() and (self.peek().isalpha() or self.peek() in "_[("):
            terms.extend(self.term())
        if not terms and self.peek() not in (",", ">", "]", ")"):
            self.error("expected word")
        return reduce_word(terms)

    def power(self) -> int:
        if self.peek() == "^":
            self.pos += 1
            return self.integer()
        return 1

    def term(self) -> Word:
        ch = self.peek()
        if ch == "[":
            self.pos += 1
            u = self.word()
            self.expect(",")
            v = self.word()
            self.expect("]")
            return word_power(commutator(u, v), self.power())
        if ch == "(":
            self.pos += 1
            w = self.word()
            self.expect(")")
            return word_power(w, self.power())
        start = self.pos
        name = self.ident()
        if name not in self.names:
            raise UnknownGenerator(f"unknown generator {name!r} at position {start}")
        return reduce_word([(self.names[name], self.power())])


def parse_presentation(text: str) -> Presentation:
    """Parse ``< a, b | a^2, b^3, (a b)^7 >``.

    Terms are generators with optional integer powers, ``(word)^n`` and
    commutators ``[u, v] = u^-1 v^-1 u v``; juxtaposition multiplies.
    """
    return _Parser(text).presentation()


# ---------------------------------------------------------------------------
# coset enumeration (HLT with lookahead)


@dataclass(frozen=True)
class CosetTable:
    """Complete coset table with cosets numbered 0..n-1 (0 is the subgroup)."""

    presentation: Presentation
    actions: tuple[tuple[int, ...], ...]  # actions[g][alpha] = alpha^g
    complete: bool = True

    @property
    def n_cosets(self) -> int:
        return len(self.actions[0]) if self.actions else 1

    def act(self, alpha: int, w: Word) -> int:
        inverses = [None] * len(self.actions)
        for g, e in w:
            perm = self.actions[g]
            if e < 0:
                if inverses[g] is None:
                    inv = [0] * len(perm)
                    for i, j in enumerate(perm):
                        inv[j] = i
                    inverses[g] = inv
                perm = inverses[g]
            for _ in range(abs(e)):
                alpha = perm[alpha]
        return alpha


class _Enumerator:
    def __init__(self, pres: Presentation, subgroup: Sequence[Word], limit: int):
        self.r = len(pres.generators)
        self.ncols = 2 * self.r
        self.limit = limit
        self.table: list[list[int]] = [[-1] * self.ncols]
        self.parent: list[int] = [0]
        self.live = 1
        self.relators = [self._letters(w) for w in pres.relators if w]
        self.subgroup = [self._letters(w) for w in subgroup if w]
        self.queue: list[int] = []

    def _letters(self, w: Word) -> list[int]:
        out = []
        for g, e in w:
            col = 2 * g if e > 0 else 2 * g + 1
            out.extend([col] * abs(e))
        return out

    @staticmethod
    def inv(col: int) -> int:
        return col ^ 1

    def find(self, k: int) -> int:
        root = k
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[k] != root:
            self.parent[k], k = root, self.parent[k]
        return root

    def define(self, alpha: int, x: int):
        if self.live >= self.limit:
            raise _Full
        beta = len(self.table)
        self.table.append([-1] * self.ncols)
        self.parent.append(beta)
        self.live += 1
        self.table[alpha][x] = beta
        self.table[beta][self.inv(x)] = alpha

    def scan(self, alpha: int, w: list[int], fill: bool):
        table = self.table
        f, i = alpha, 0
        b, j = alpha, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] >= 0:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != alpha:
                    self.coincidence(f, alpha)
                return
            while j >= i and table[b][w[j] ^ 1] >= 0:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return
            if not fill:
                return
            self.define(f, w[i])

    def merge(self, k: int, l: int):
        a, b = self.find(k), self.find(l)
        if a != b:
            lo, hi = min(a, b), max(a, b)
            self.parent[hi] = lo
            self.live -= 1
            self.queue.append(hi)

    def coincidence(self, alpha: int, beta: int):
        self.queue = []
        self.merge(alpha, beta)
        table = self.table
        i = 0
        while i < len(self.queue):
            gamma = self.queue[i]
            i += 1
            for x in range(self.ncols):
                delta = table[gamma][x]
                if delta < 0:
                    continue
                table[delta][x ^ 1] = -1
                mu, nu = self.find(gamma), self.find(delta)
                if table[mu][x] >= 0:
                    self.merge(nu, table[mu][x])
                elif table[nu][x ^ 1] >= 0:
                    self.merge(mu, table[nu][x ^ 1])
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu

    def is_live(self, k: int) -> bool:
        return self.parent[k] == k

    def lookahead(self):
        for beta in range(len(self.table)):
            if not self.is_live(beta):
                continue
            for w in self.relators:
                self.scan(beta, w, fill=False)
                if not self.is_live(beta):
                    break

    def run(self) -> list[list[int]]:
        for w in self.subgroup:
            self._guarded(lambda w=w: self.scan(0, w, fill=True))
        alpha = 0
        while alpha < len(self.table):
            if self.is_live(alpha):
                self._guarded(lambda a=alpha: self._process(a))
            alpha += 1
        return self._standardize()

    def _process(self, alpha: int):
        if not self.is_live(alpha):
            return
        for w in self.relators:
            self.scan(alpha, w, fill=True)
            if not self.is_live(alpha):
                return
        for x in range(self.ncols):
            if self.table[alpha][x] < 0:
                self.define(alpha, x)

    def _guarded(self, step):
        while True:
            try:
                step()
                return
            except _Full:
                before = self.live
                self.lookahead()
                if self.live >= before:
                    raise CosetLimitExceeded(self.limit) from None

    def _standardize(self) -> list[list[int]]:
        order = {0: 0}
        seq = [0]
        i = 0
        while i < len(seq):
            alpha = seq[i]
            i += 1
            for x in range(self.ncols):
                beta = self.find(self.table[alpha][x])
                if beta not in order:
                    order[beta] = len(seq)
                    seq.append(beta)
        return [[order[self.find(self.table[alpha][x])] for x in range(self.ncols)] for alpha in seq]


class _Full(Exception):
    pass


def coset_enumerate(
    pres: Presentation,
    subgroup: Sequence[Word] = (),
    limit: int = DEFAULT_COSET_LIMIT,
) -> CosetTable:
    """Todd-Coxeter enumeration of the cosets of ``<subgroup>``.

    Cosets are renumbered by first appearance in a breadth-first walk from the
    subgroup coset, so the table is reproducible.
    """
    if not pres.generators:
        return CosetTable(pres, ())
    rows = _Enumerator(pres, subgroup, limit).run()
    actions = tuple(tuple(row[2 * g] for row in rows) for g in range(len(pres.generators)))
    return CosetTable(pres, actions)


def permutation_group(pres: Presentation, limit: int = DEFAULT_COSET_LIMIT, descriptor=None):
    """The finite group defined by ``pres`` in its regular representation.

    Elements are the cosets of the trivial subgroup; element j stands for the
    word labelling the breadth-first path from coset 0 to coset j.
    """
    import numpy as np

    from .groups import FiniteGroup

    table = coset_enumerate(pres, (), limit)
    n = table.n_cosets
    acts = [np.asarray(a, dtype=np.int64) for a in table.actions]
    letters = []
    for a in acts:
        inv = np.empty_like(a)
        inv[a] = np.arange(n)
        letters.extend([a, inv])
    mult = np.empty((n, n), dtype=np.int64)
    mult[:, 0] = np.arange(n)
    done = np.zeros(n, dtype=bool)
    done[0] = True
    frontier = [0]
    while frontier:
        nxt = []
        for i in frontier:
            for perm in letters:
                j = int(perm[i])
                if not done[j]:
                    done[j] = True
                    mult[:, j] = perm[mult[:, i]]
                    nxt.append(j)
        frontier = nxt
    gens = {name: int(acts[g][0]) for g, name in enumerate(pres.generators)}
    return FiniteGroup(mult, gens, descriptor)


# ---------------------------------------------------------------------------
# abelianization


def exponent_sum_matrix(pres: Presentation) -> list[list[int]]:
    rows = []
    for w in pres.relators:
        row = [0] * len(pres.generators)
        for g, e in w:
            row[g] += e
        rows.append(row)
    return rows


def smith_diagonal(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith normal form (non-negative, each dividing the next)."""
    a = [list(row) for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        entries = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            pivot = a[t][t]
            done = True
            for i in range(t + 1, m):
                q = a[i][t] // pivot
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = a[t][j] // pivot
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    done = False
            if done:
                bad = next(
                    ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % pivot),
                    None,
                )
                if bad is None:
                    break
                # fold a non-divisible row into row t and continue reducing
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            # move the smallest remaining entry of row/column t into the pivot
            cands = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]]
            cands += [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
            _, pi, pj = min(cands)
            a[t], a[pi] = a[pi], a[t]
            for row in a:
                row[t], row[pj] = row[pj], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def abelian_invariants(pres: Presentation) -> list[int]:
    """Invariant factors of G/G'; 0 marks an infinite cyclic factor, [] means perfect."""
    r = len(pres.generators)
    diag = smith_diagonal(exponent_sum_matrix(pres)) if pres.relators else []
    finite = sorted(d for d in diag if d not in (0, 1))
    free = r - sum(1 for d in diag if d != 0)
    return finite + [0] * free
