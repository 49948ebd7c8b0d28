"""Iterated pushdown stores and their elementary operations.

A level-k store is a finite sequence of entries; an entry pairs a symbol with
a level-(k-1) store.  The level-0 store is empty by definition, so the
recursion bottoms out.  Level 1 is the outermost level: ``pop(1, .)`` drops
the first bracketed block of the store.

Stores are immutable values.  All operations return fresh stores and never
mutate their arguments, so they are safe for unrestricted concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Optional

from .errors import DomainError, ParseError

Symbol = str


class IteratedPushdown:
    """A level-j nested stack: a sequence of (symbol, level-(j-1) store) pairs."""

    __slots__ = ("level", "entries", "_hash")

    def __init__(self, level: int, entries=()):
        entries = tuple(entries)
        if level < 0:
            raise DomainError("store level must be >= 0")
        if level == 0 and entries:
            raise DomainError("a level-0 store has no entries")
        for sym, inner in entries:
            if not isinstance(sym, str) or not sym:
                raise DomainError(f"bad pushdown symbol {sym!r}")
            if inner.level != level - 1:
                raise DomainError(
                    f"entry {sym!r} carries a level-{inner.level} store inside "
                    f"a level-{level} store (expected level {level - 1})"
                )
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_hash", hash((level, entries)))

    def __setattr__(self, name, value):
        raise AttributeError("IteratedPushdown is immutable")

    @classmethod
    def empty(cls, level: int) -> "IteratedPushdown":
        return cls(level, ())

    @classmethod
    def from_word(cls, letters, level: int = 1) -> "IteratedPushdown":
        """The store holding each letter over an empty body, outermost first."""
        body = cls.empty(level - 1)
        return cls(level, tuple((a, body) for a in letters))

    def is_empty(self) -> bool:
        return not self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other):
        return (
            isinstance(other, IteratedPushdown)
            and self.level == other.level
            and self.entries == other.entries
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"IteratedPushdown({self.level}, {serialize(self)!r})"

    def __str__(self):
        return serialize(self)

    def symbols(self) -> Iterator[tuple[Symbol, int, "IteratedPushdown"]]:
        """Yield every (symbol, depth, body) occurrence, depth 1 = outermost."""
        for sym, inner in self.entries:
            yield sym, 1, inner
            for s, d, b in inner.symbols():
                yield s, d + 1, b


@dataclass(frozen=True)
class GradedAlphabet:
    """k disjoint level sets of pushdown symbols, level 1 outermost."""

    levels: tuple[frozenset[Symbol], ...]

    def __post_init__(self):
        seen: set[Symbol] = set()
        for i, level in enumerate(self.levels, start=1):
            dup = seen & level
            if dup:
                raise DomainError(f"symbols {sorted(dup)} occur in two levels (level {i})")
            seen |= level

    @classmethod
    def of(cls, *levels) -> "GradedAlphabet":
        return cls(tuple(frozenset(lv) for lv in levels))

    @property
    def height(self) -> int:
        return len(self.levels)

    @property
    def symbols(self) -> frozenset[Symbol]:
        out: frozenset[Symbol] = frozenset()
        for lv in self.levels:
            out |= lv
        return out

    def level_of(self, sym: Symbol) -> Optional[int]:
        for i, lv in enumerate(self.levels, start=1):
            if sym in lv:
                return i
        return None


@dataclass(frozen=True)
class Variable:
    """A (state, store, state) triple; the middle component is non-empty."""

    left: str
    store: IteratedPushdown
    right: str

    def __post_init__(self):
        if self.store.is_empty():
            raise DomainError("a variable's store must be non-empty")

    def __str__(self):
        return f"({self.left}, {serialize(self.store)}, {self.right})"


VariableWord = tuple[Variable, ...]


# ---------------------------------------------------------------------------
# elementary operations


def topsyms(pds: IteratedPushdown) -> tuple[Symbol, ...]:
    """The word of leftmost symbols level by level, stopping at the first
    empty inner store.  ``topsyms(empty) == ()``."""
    out = []
    cur = pds
    while cur.entries:
        sym, inner = cur.entries[0]
        out.append(sym)
        cur = inner
    return tuple(out)


def pop(j: int, pds: IteratedPushdown) -> IteratedPushdown:
    """Pop the leftmost letter of level j (with everything bracketed after it).

    When the leftmost level-j store is empty the store is returned unchanged.
    """
    if not 1 <= j <= pds.level:
        raise DomainError(f"pop level {j} out of range for a level-{pds.level} store")
    if pds.is_empty():
        return pds
    if j == 1:
        return IteratedPushdown(pds.level, pds.entries[1:])
    sym, inner = pds.entries[0]
    return IteratedPushdown(pds.level, ((sym, pop(j - 1, inner)),) + pds.entries[1:])


def push(j: int, symbols, pds: IteratedPushdown) -> IteratedPushdown:
    """Push the symbols of a non-empty word as new heads of the leftmost
    level-j store, duplicating the store below each new head.

    When the leftmost level-j store is empty the store is returned unchanged.
    """
    symbols = tuple(symbols)
    if not symbols:
        raise DomainError("push requires a non-empty word of symbols")
    if not 1 <= j <= pds.level:
        raise DomainError(f"push level {j} out of range for a level-{pds.level} store")
    if pds.is_empty():
        return pds
    if j == 1:
        _, body = pds.entries[0]
        new = tuple((s, body) for s in symbols)
        return IteratedPushdown(pds.level, new + pds.entries[1:])
    sym, inner = pds.entries[0]
    return IteratedPushdown(pds.level, ((sym, push(j - 1, symbols, inner)),) + pds.entries[1:])


# ---------------------------------------------------------------------------
# bracket serialization

_IDENT_EXTRA = "_'′"


def _is_ident_char(c: str) -> bool:
    return c.isalnum() or c in _IDENT_EXTRA


def serialize(pds: IteratedPushdown, elide_innermost: bool = True) -> str:
    """Render a store as a bracket word; ``[``/``]`` stand for the extended
    alphabet's opening/closing letters.

    The canonical form elides the bracketed empty bodies at the innermost
    level (level-0 bodies) and keeps explicit brackets everywhere else, which
    reproduces the usual displayed notation.  Pass ``elide_innermost=False``
    for the fully bracketed form.
    """
    parts = []
    for sym, inner in pds.entries:
        if inner.level == 0 and elide_innermost:
            parts.append(sym)
        else:
            parts.append(sym + "[" + serialize(inner, elide_innermost) + "]")
    return "".join(parts)


def _tokenize_brackets(text: str, alphabet=None, filename=None):
    """Yield (kind, value, pos) tokens; kind in {'sym', 'open', 'close'}."""
    symbols = None
    if alphabet is not None:
        symbols = sorted(
            alphabet.symbols if isinstance(alphabet, GradedAlphabet) else alphabet,
            key=len,
            reverse=True,
        )
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "[":
            yield "open", "[", i
            i += 1
        elif c == "]":
            yield "close", "]", i
            i += 1
        elif _is_ident_char(c):
            if symbols is not None:
                for s in symbols:
                    if text.startswith(s, i):
                        yield "sym", s, i
                        i += len(s)
                        break
                else:
                    raise ParseError(
                        f"no alphabet symbol matches at {text[i:i + 12]!r}",
                        column=i + 1,
                        filename=filename,
                    )
            else:
                j = i
                while j < len(text) and _is_ident_char(text[j]):
                    j += 1
                yield "sym", text[i:j], i
                i = j
        else:
            raise ParseError(f"unexpected character {c!r}", column=i + 1, filename=filename)


def parse(text: str, level: int, alphabet=None, filename=None) -> IteratedPushdown:
    """Parse a bracket word into a level-``level`` store.

    Without an alphabet, symbols are maximal identifier runs; with one,
    greedy longest-match tokenization over its symbols is used (needed when
    serialized symbols abut, as in ``A3C3``).  A symbol with no bracketed
    body denotes a symbol over the empty store of the next level down.
    """
    tokens = list(_tokenize_brackets(text, alphabet, filename))
    pos = 0

    def parse_store(lv: int) -> IteratedPushdown:
        nonlocal pos
        entries = []
        while pos < len(tokens) and tokens[pos][0] == "sym":
            sym = tokens[pos][1]
            at = tokens[pos][2]
            pos += 1
            if lv == 0:
                raise ParseError(f"symbol {sym!r} nested too deep", column=at + 1, filename=filename)
            if pos < len(tokens) and tokens[pos][0] == "open":
                pos += 1
                body = parse_store(lv - 1)
                if pos >= len(tokens) or tokens[pos][0] != "close":
                    raise ParseError(
                        f"missing ']' for the body of {sym!r}", column=at + 1, filename=filename
                    )
                pos += 1
            else:
                body = IteratedPushdown.empty(lv - 1)
            entries.append((sym, body))
        return IteratedPushdown(lv, tuple(entries))

    store = parse_store(level)
    if pos < len(tokens):
        kind, value, at = tokens[pos]
        raise ParseError(f"unexpected {value!r}", column=at + 1, filename=filename)
    return store


# ---------------------------------------------------------------------------
# terms, substitution, grading


def is_term(pds: IteratedPushdown, undeterminates) -> bool:
    """True iff every occurrence of an undeterminate is a leaf."""
    undet = undeterminates.symbols if isinstance(undeterminates, GradedAlphabet) else set(undeterminates)
    return all(body.is_empty() for sym, _, body in pds.symbols() if sym in undet)


def substitute(term: IteratedPushdown, bindings: Mapping[Symbol, IteratedPushdown]) -> IteratedPushdown:
    """Replace every bound undeterminate leaf by the entries of its binding.

    A binding for an undeterminate sitting in a level-j store must itself be
    a level-j store (the graded discipline's (k-j+1)-term condition).
    Unbound undeterminates are left alone.
    """
    entries = []
    for sym, body in term.entries:
        if sym in bindings:
            if not body.is_empty():
                raise DomainError(f"undeterminate {sym!r} occurs at a non-leaf position")
            replacement = bindings[sym]
            if replacement.level != term.level:
                raise DomainError(
                    f"binding for {sym!r} has level {replacement.level}, "
                    f"expected {term.level}"
                )
            entries.extend(replacement.entries)
        else:
            entries.append((sym, substitute(body, bindings)))
    return IteratedPushdown(term.level, tuple(entries))


def substitute_word(word, bindings: Mapping[Symbol, IteratedPushdown]) -> VariableWord:
    """Letterwise extension of substitution to variable-words."""
    return tuple(Variable(v.left, substitute(v.store, bindings), v.right) for v in word)


@dataclass(frozen=True)
class GradingReport:
    ok: bool
    violation: Optional[str] = None

    def __bool__(self):
        return self.ok


def is_graded(
    pds: IteratedPushdown,
    gamma: GradedAlphabet,
    undeterminates: Optional[GradedAlphabet] = None,
) -> GradingReport:
    """Check the depth/level discipline of a store or term.

    A symbol at depth d (1 = outermost) of a level-j store over a height-k
    grading must belong to level k-j+d; undeterminates must occur at leaves.
    The report carries the first violation found, in document order.
    """
    k = gamma.height
    undet = undeterminates if undeterminates is not None else GradedAlphabet.of(*([()] * k))
    offset = k - pds.level
    for sym, depth, body in pds.symbols():
        want = offset + depth
        got = gamma.level_of(sym)
        if got is not None:
            if got != want:
                return GradingReport(
                    False, f"{sym} occurs at level {want} but belongs to level {got}"
                )
            continue
        got = undet.level_of(sym)
        if got is None:
            return GradingReport(False, f"{sym} is neither a pushdown symbol nor an undeterminate")
        if not body.is_empty():
            return GradingReport(False, f"{sym} occurs at a non-leaf position")
        if got != want:
            return GradingReport(
                False, f"{sym} occurs at level {want} but belongs to level {got}"
            )
    return GradingReport(True)
