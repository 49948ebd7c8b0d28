"""Finite-alphabet word homomorphisms, HDT0L systems, and linear representations.

Composition follows the diagrammatic convention used throughout this library:
``compose(f, g)`` applies f first, so ``compose(f, g)(w) == g(f(w))``.  The
convention is load-bearing: iterating a word-indexed family of morphisms on a
seed applies the morphism of the first letter first,
``H^{uv}(c) == H^v(H^u(c))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import chain
from typing import Iterable, Mapping

from .errors import DomainError
from .words import Word


class Homomorphism:
    """A total letter-to-word map between finite alphabets."""

    __slots__ = ("source", "target", "images", "_hash")

    def __init__(self, images: Mapping[str, Iterable[str]], source=None, target=None):
        images = {a: tuple(w) for a, w in images.items()}
        source = frozenset(images) if source is None else frozenset(source)
        used = frozenset(chain.from_iterable(images.values()))
        target = (source | used) if target is None else frozenset(target)
        for a in source:
            if a not in images:
                raise DomainError(f"no image given for source letter {a!r}")
        for a in images:
            if a not in source:
                raise DomainError(f"image given for {a!r} which is not a source letter")
        if not used <= target:
            raise DomainError(f"image letters {sorted(used - target)} outside the target alphabet")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "_hash", hash((source, tuple(sorted(images.items())))))

    def __setattr__(self, name, value):
        raise AttributeError("Homomorphism is immutable")

    @classmethod
    def identity(cls, alphabet: Iterable[str]) -> "Homomorphism":
        alphabet = frozenset(alphabet)
        return cls({a: (a,) for a in alphabet}, source=alphabet, target=alphabet)

    @classmethod
    def bracket(cls, image_x, image_y, letters=("x", "y")) -> "Homomorphism":
        """The two-letter shorthand [w, w']: x -> w, y -> w'."""
        x, y = letters
        both = frozenset(letters)
        return cls({x: tuple(image_x), y: tuple(image_y)}, source=both, target=both)

    def __call__(self, w: Word) -> Word:
        out = []
        for a in w:
            if a not in self.images:
                raise DomainError(f"letter {a!r} is outside the source alphabet")
            out.extend(self.images[a])
        return tuple(out)

    def is_identity(self) -> bool:
        return all(w == (a,) for a, w in self.images.items())

    def __eq__(self, other):
        return (
            isinstance(other, Homomorphism)
            and self.source == other.source
            and self.images == other.images
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        body = "; ".join(
            f"{a} -> {' '.join(w) if w else 'eps'}" for a, w in sorted(self.images.items())
        )
        return "{" + body + "}"


def apply(h: Homomorphism, w: Word) -> Word:
    return h(w)


def compose(f: Homomorphism, g: Homomorphism) -> Homomorphism:
    """The homomorphism applying f first: compose(f, g)(w) = g(f(w))."""
    if not f.target <= g.source:
        raise DomainError(
            f"cannot compose: target {sorted(f.target)} is not contained in "
            f"source {sorted(g.source)}"
        )
    return Homomorphism(
        {a: g(f.images[a]) for a in f.source}, source=f.source, target=g.target
    )


def compose_all(factors, alphabet) -> Homomorphism:
    """Fold a sequence of endomorphisms, the leftmost factor applying first."""
    out = Homomorphism.identity(alphabet)
    for h in factors:
        out = compose(out, h)
    return out


# ---------------------------------------------------------------------------
# HDT0L systems


@dataclass(frozen=True)
class HDT0LSystem:
    """A word-indexed family of endomorphisms iterated on a seed, with a
    final coding homomorphism applied last: f(w) = final(H^w(seed))."""

    input_alphabet: frozenset[str]
    working: frozenset[str]
    tables: tuple  # sorted (letter, Homomorphism) pairs
    final: Homomorphism
    seed: str

    @classmethod
    def make(cls, input_alphabet, working, tables: Mapping[str, Homomorphism], final, seed):
        input_alphabet = frozenset(input_alphabet)
        working = frozenset(working)
        for a in input_alphabet:
            if a not in tables:
                raise DomainError(f"no table for input letter {a!r}")
        for a, h in tables.items():
            if not (h.source == working and h.target <= working):
                raise DomainError(f"table for {a!r} is not an endomorphism of the working alphabet")
        if final.source != working:
            raise DomainError("the final homomorphism must be defined on the working alphabet")
        if seed not in working:
            raise DomainError(f"seed {seed!r} is not a working letter")
        return cls(input_alphabet, working, tuple(sorted(tables.items())), final, seed)

    def table(self, a: str) -> Homomorphism:
        for letter, h in self.tables:
            if letter == a:
                return h
        raise DomainError(f"no table for input letter {a!r}")

    @property
    def output_alphabet(self) -> frozenset[str]:
        return self.final.target

    def is_dt0l(self) -> bool:
        return self.final.is_identity()


def image_of_word(sys: HDT0LSystem, w: Word) -> Word:
    """H^w(seed), the morphism of the first letter applying first."""
    cur: Word = (sys.seed,)
    for a in w:
        cur = sys.table(a)(cur)
    return cur


def eval_hdt0l(sys: HDT0LSystem, w: Word) -> Word:
    return sys.final(image_of_word(sys, w))


# ---------------------------------------------------------------------------
# Parikh vectors, incidence matrices, linear representations

Matrix = tuple[tuple[int, ...], ...]


def parikh(w: Word, letters) -> tuple[int, ...]:
    letters = tuple(letters)
    counts = {a: 0 for a in letters}
    for a in w:
        if a not in counts:
            raise DomainError(f"letter {a!r} is outside the alphabet {letters}")
        counts[a] += 1
    return tuple(counts[a] for a in letters)


def incidence(h: Homomorphism, source_order=None, target_order=None) -> Matrix:
    """Row V lists the letter counts of h(V); parikh(h(w)) = parikh(w) . M."""
    rows = tuple(sorted(h.source)) if source_order is None else tuple(source_order)
    cols = rows if target_order is None else tuple(target_order)
    return tuple(parikh(h.images[a], cols) for a in rows)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols = len(b[0])
    return tuple(
        tuple(sum(row[k] * b[k][j] for k in range(len(b))) for j in range(cols)) for row in a
    )


def vec_mat(v, m: Matrix):
    return tuple(sum(v[k] * m[k][j] for k in range(len(m))) for j in range(len(m[0])))


def dot(v, u) -> int:
    return sum(x * y for x, y in zip(v, u))


@dataclass(frozen=True)
class LinearRepresentation:
    """w |-> row . M_{w_1} ... M_{w_n} . col with exact bignum arithmetic."""

    dimension: int
    row: tuple[int, ...]
    matrices: tuple  # sorted (letter, Matrix) pairs
    col: tuple[int, ...]

    @classmethod
    def make(cls, row, matrices: Mapping[str, Matrix], col) -> "LinearRepresentation":
        row = tuple(row)
        col = tuple(col)
        d = len(row)
        if len(col) != d:
            raise DomainError("row and column dimensions differ")
        norm = {}
        for a, m in matrices.items():
            m = tuple(tuple(r) for r in m)
            if len(m) != d or any(len(r) != d for r in m):
                raise DomainError(f"matrix for {a!r} is not {d}x{d}")
            norm[a] = m
        return cls(d, row, tuple(sorted(norm.items())), col)

    def matrix(self, a: str) -> Matrix:
        for letter, m in self.matrices:
            if letter == a:
                return m
        raise DomainError(f"no matrix for letter {a!r}")

    @property
    def letters(self) -> frozenset[str]:
        return frozenset(a for a, _ in self.matrices)


def linear_eval(rep: LinearRepresentation, w: Word) -> int:
    v = rep.row
    for a in w:
        v = vec_mat(v, rep.matrix(a))
    return dot(v, rep.col)
