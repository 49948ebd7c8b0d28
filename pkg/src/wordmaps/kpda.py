"""Iterated pushdown automata.

Machines are immutable; a run never mutates shared state, so independent runs
may execute in parallel.  The runner works in generation mode: a strongly
deterministic machine determines by itself which letter it emits at each
step, which makes the computed map f(w) effective without guessing f(w)
up front.  Acceptance requires halting in the start state with an empty
store; an empty store in any other state is Stuck.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .errors import DomainError
from .pushdown import (
    GradedAlphabet,
    IteratedPushdown,
    Variable,
    pop,
    push,
    topsyms,
)
from .words import Word

EPS = ""  # the empty read letter


@dataclass(frozen=True)
class Pop:
    level: int

    def apply(self, store: IteratedPushdown) -> IteratedPushdown:
        return pop(self.level, store)

    def __str__(self):
        return f"pop_{self.level}"


@dataclass(frozen=True)
class Push:
    level: int
    symbols: tuple[str, ...]

    def apply(self, store: IteratedPushdown) -> IteratedPushdown:
        return push(self.level, self.symbols, store)

    def __str__(self):
        return f"push_{self.level}({' '.join(self.symbols)})"


Operation = Union[Pop, Push]

# delta maps (state, read letter or EPS, topsyms word) to a set of (state, op)
Delta = dict[tuple[str, str, tuple[str, ...]], frozenset[tuple[str, Operation]]]


@dataclass(frozen=True)
class KPda:
    """A k-iterated pushdown automaton over a graded pushdown alphabet."""

    level: int
    states: frozenset[str]
    terminals: frozenset[str]
    gamma: GradedAlphabet
    delta: tuple  # canonicalized Delta items, see __post_init__
    start_state: str
    input_alphabet: frozenset[str] = frozenset()
    bottom_symbols: tuple[str, ...] = ()
    name: str = ""

    @classmethod
    def make(
        cls,
        level: int,
        states: Iterable[str],
        terminals: Iterable[str],
        gamma: GradedAlphabet,
        delta: dict,
        start_state: str,
        input_alphabet: Iterable[str] = (),
        bottom_symbols: Iterable[str] = (),
        name: str = "",
    ) -> "KPda":
        states = frozenset(states)
        terminals = frozenset(terminals)
        norm: Delta = {}
        for (q, read, tops), rhs in delta.items():
            tops = tuple(tops)
            if not tops or len(tops) > level:
                raise DomainError(f"TOPSYMS key {tops} must have length 1..{level}")
            if q not in states:
                raise DomainError(f"unknown state {q!r} in a transition key")
            if read != EPS and read not in terminals:
                raise DomainError(f"read letter {read!r} is not a terminal")
            moves = []
            for q2, op in rhs:
                if q2 not in states:
                    raise DomainError(f"unknown state {q2!r} in a transition target")
                if not 1 <= op.level <= level:
                    raise DomainError(f"operation {op} has level outside 1..{level}")
                moves.append((q2, op))
            norm[(q, read, tops)] = frozenset(moves)
        m = cls(
            level=level,
            states=states,
            terminals=terminals,
            gamma=gamma,
            delta=tuple(sorted(norm.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2]))),
            start_state=start_state,
            input_alphabet=frozenset(input_alphabet),
            bottom_symbols=tuple(bottom_symbols),
            name=name,
        )
        if gamma.height != level:
            raise DomainError("graded alphabet height must equal the machine level")
        if start_state not in states:
            raise DomainError(f"start state {start_state!r} not among the states")
        return m

    def delta_map(self) -> Delta:
        return dict(self.delta)


@dataclass(frozen=True)
class Configuration:
    state: str
    emitted: Word
    store: IteratedPushdown


@dataclass(frozen=True)
class Accepted:
    output: Word


@dataclass(frozen=True)
class Stuck:
    configuration: Configuration


@dataclass(frozen=True)
class FuelExhausted:
    configuration: Configuration


RunOutcome = Union[Accepted, Stuck, FuelExhausted]


# ---------------------------------------------------------------------------
# validation


def validate_deterministic(m: KPda) -> bool:
    """Card(delta(q,eps,g)) <= 1, Card(delta(q,b,g)) <= 1 and an eps move
    excludes reading moves for the same (q, g)."""
    table = m.delta_map()
    for (q, read, tops), rhs in table.items():
        if len(rhs) > 1:
            return False
    for (q, read, tops), rhs in table.items():
        if read == EPS and rhs:
            for b in m.terminals:
                if table.get((q, b, tops)):
                    return False
    return True


def validate_strongly_deterministic(m: KPda) -> bool:
    """At most one transition for each (q, g) summed over all read letters."""
    counts: dict[tuple[str, tuple[str, ...]], int] = {}
    for (q, read, tops), rhs in m.delta_map().items():
        counts[(q, tops)] = counts.get((q, tops), 0) + len(rhs)
        if counts[(q, tops)] > 1:
            return False
    return True


def validate_level_partitioned(m: KPda) -> bool:
    """Pushes inject only level-j symbols and TOPSYMS keys respect grading."""
    for (q, read, tops), rhs in m.delta_map().items():
        for i, sym in enumerate(tops, start=1):
            if m.gamma.level_of(sym) != i:
                return False
        for q2, op in rhs:
            if isinstance(op, Push):
                if any(m.gamma.level_of(s) != op.level for s in op.symbols):
                    return False
    return True


@dataclass(frozen=True)
class NormalFormReport:
    level_partitioned: bool
    reads_pop1_only: bool
    pushes_pairs: bool
    violations: tuple[str, ...] = ()

    def __bool__(self):
        return self.level_partitioned and self.reads_pop1_only and self.pushes_pairs


def validate_normal_form(m: KPda) -> NormalFormReport:
    """Report the (LP)/(RL)/(PI) normalization conditions."""
    violations = []
    lp = validate_level_partitioned(m)
    if not lp:
        violations.append("LP: a transition uses a symbol outside its level")
    rl = True
    pi = True
    for (q, read, tops), rhs in m.delta_map().items():
        for q2, op in rhs:
            if read != EPS and not (isinstance(op, Pop) and op.level == 1 and len(tops) == 1):
                rl = False
                violations.append(f"RL: reading transition ({q},{read},{' '.join(tops)}) is not (q, pop_1) shaped")
            if isinstance(op, Push) and len(op.symbols) != 2:
                pi = False
                violations.append(f"PI: {op} pushes {len(op.symbols)} symbols, not 2")
    return NormalFormReport(lp, rl, pi, tuple(violations))


# ---------------------------------------------------------------------------
# semantics


def step(m: KPda, c: Configuration) -> set[Configuration]:
    """All successor configurations under the transition table (generation
    mode: a transition labelled b appends b to the emitted word)."""
    tops = topsyms(c.store)
    if not tops:
        return set()
    out = set()
    table = m.delta_map()
    for read in [EPS] + sorted(m.terminals):
        for q2, op in table.get((c.state, read, tops), ()):
            emitted = c.emitted + ((read,) if read != EPS else ())
            out.add(Configuration(q2, emitted, op.apply(c.store)))
    return out


def initial_store(m: KPda, w: Word) -> IteratedPushdown:
    """gamma_1[gamma_2[...[w]...]] with each input letter over an empty body."""
    if len(m.bottom_symbols) != m.level - 1:
        raise DomainError(
            f"a level-{m.level} machine needs {m.level - 1} designated bottom symbols, "
            f"got {len(m.bottom_symbols)}"
        )
    cur = IteratedPushdown.from_word(w, 1)
    lv = 1
    for sym in reversed(m.bottom_symbols):
        lv += 1
        cur = IteratedPushdown(lv, ((sym, cur),))
    return cur


def run(m: KPda, w: Word, fuel: int = 10**6) -> RunOutcome:
    """Run the unique computation of a strongly deterministic machine on the
    initial store built from w, collecting emitted letters."""
    if not validate_strongly_deterministic(m):
        raise DomainError("run requires a strongly deterministic machine")
    for a in w:
        if a not in m.input_alphabet:
            raise DomainError(f"input letter {a!r} is not in the machine's input alphabet")
        if m.gamma.level_of(a) != m.level:
            raise DomainError(f"input letter {a!r} must be a level-{m.level} pushdown symbol")
    c = Configuration(m.start_state, (), initial_store(m, w))
    while True:
        if c.store.is_empty():
            if c.state == m.start_state:
                return Accepted(c.emitted)
            return Stuck(c)
        if fuel <= 0:
            return FuelExhausted(c)
        succ = step(m, c)
        if len(succ) > 1:
            raise DomainError("strong determinism violated along the run")
        if not succ:
            return Stuck(c)
        (c,) = succ
        fuel -= 1


# ---------------------------------------------------------------------------
# grammar view: derivations over variables

SententialItem = Union[str, Variable]
SententialForm = tuple[SententialItem, ...]


def _variable_rewrites(m: KPda, v: Variable):
    """One-step productions for a single variable occurrence."""
    tops = topsyms(v.store)
    table = m.delta_map()
    out = []
    for read in [EPS] + sorted(m.terminals):
        for q2, op in table.get((v.left, read, tops), ()):
            store2 = op.apply(v.store)
            prefix: tuple[SententialItem, ...] = (read,) if read != EPS else ()
            if store2.is_empty():
                if q2 == v.right:
                    out.append(prefix)
            else:
                out.append(prefix + (Variable(q2, store2, v.right),))
    # decomposition rule: split the top-level entry sequence
    for cut in range(1, len(v.store.entries)):
        eta = IteratedPushdown(v.store.level, v.store.entries[:cut])
        eta2 = IteratedPushdown(v.store.level, v.store.entries[cut:])
        for r in sorted(m.states):
            out.append((Variable(v.left, eta, r), Variable(r, eta2, v.right)))
    return out


def derive(m: KPda, start: SententialForm, depth: int) -> set[SententialForm]:
    """All sentential forms derivable from start in at most depth one-step
    rewrites of a single variable occurrence."""
    seen = {tuple(start)}
    frontier = [tuple(start)]
    for _ in range(depth):
        nxt = []
        for form in frontier:
            for i, item in enumerate(form):
                if isinstance(item, Variable):
                    for repl in _variable_rewrites(m, item):
                        new = form[:i] + tuple(repl) + form[i + 1:]
                        if new not in seen:
                            seen.add(new)
                            nxt.append(new)
        frontier = nxt
        if not frontier:
            break
    return seen


@dataclass(frozen=True)
class AgreementResult:
    derives: Optional[bool]
    computes: Optional[bool]
    vacuous: bool = False

    @property
    def inconclusive(self) -> bool:
        return self.derives is None or self.computes is None

    @property
    def agree(self) -> Optional[bool]:
        if self.vacuous:
            return True
        if self.inconclusive:
            return None
        return self.derives == self.computes


def _derives_exactly(m: KPda, start: Variable, u: Word, bound: int) -> Optional[bool]:
    """Bounded search for (p,w,q) ->* u; None when the bound is hit."""
    target = tuple(u)
    seen = {(start,)}
    frontier: list[SententialForm] = [(start,)]
    for _ in range(bound):
        if not frontier:
            return False
        nxt = []
        for form in frontier:
            for i, item in enumerate(form):
                if isinstance(item, Variable):
                    for repl in _variable_rewrites(m, item):
                        new = form[:i] + tuple(repl) + form[i + 1:]
                        if new == target:
                            return True
                        terminals = [x for x in new if isinstance(x, str)]
                        if len(terminals) > len(target):
                            continue
                        if new not in seen:
                            seen.add(new)
                            nxt.append(new)
        frontier = nxt
    return None if frontier else False


def _computes(m: KPda, p: str, u: Word, store: IteratedPushdown, q: str, bound: int) -> Optional[bool]:
    """Bounded search for (p,u,w) |-* (q,eps,eps) in recognition mode."""
    if store.is_empty():
        return p == q and not u
    table = m.delta_map()
    start = (p, 0, store)
    seen = {start}
    frontier = [start]
    for _ in range(bound):
        if not frontier:
            return False
        nxt = []
        for state, pos, st in frontier:
            tops = topsyms(st)
            if not tops:
                continue
            reads = [EPS] + ([u[pos]] if pos < len(u) else [])
            for read in reads:
                for q2, op in table.get((state, read, tops), ()):
                    pos2 = pos + (1 if read != EPS else 0)
                    st2 = op.apply(st)
                    if st2.is_empty() and pos2 == len(u) and q2 == q:
                        return True
                    nxt_cfg = (q2, pos2, st2)
                    if nxt_cfg not in seen:
                        seen.add(nxt_cfg)
                        nxt.append(nxt_cfg)
        frontier = nxt
    return None if frontier else False


def check_derivation_computation_agreement(
    m: KPda, p: str, store: IteratedPushdown, q: str, u: Word, bound: int
) -> AgreementResult:
    """Evaluate both sides of the derivation/computation correspondence by
    bounded search; inconclusive sides are reported distinctly."""
    if store.is_empty():
        # variables exclude the empty store, so the claim is vacuous
        return AgreementResult(None, None, vacuous=True)
    derives = _derives_exactly(m, Variable(p, store, q), tuple(u), bound)
    computes = _computes(m, p, tuple(u), store, q, bound)
    return AgreementResult(derives, computes)
