"""Parsing and printing of system-definition files.

A file is a sequence of named blocks::

    kind name {
        ...statements...
    }

``#`` starts a comment.  Statements are single lines.  Rule statements use
the shapes ``f(eps) = ...`` for base cases and ``f(a w) = ...`` for
recurrence steps; regular rules add an ``@class`` annotation after the head
and may prepend shift letters to ``w`` on the right-hand side.  Inline
homomorphisms are written ``{ x -> x y ; y -> eps }``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .errors import DomainError, ParseError
from .kpda import KPda, Pop, Push
from .morphisms import HDT0LSystem, Homomorphism, LinearRepresentation
from .polynomials import format_polynomial, parse_polynomial
from .pushdown import GradedAlphabet
from .recurrences import (
    CatenativeSystem,
    CompositionalSystem,
    DfaClassifier,
    PolynomialSystem,
    RegularSystem,
)
from .words import Word, show_word, word


@dataclass(frozen=True)
class FractionSpec:
    """A fraction presentation referring to a polynomial system by name."""

    system_name: str
    num_plus: str
    num_minus: str
    den_plus: str
    den_minus: str


@dataclass
class SystemFile:
    declarations: dict = field(default_factory=dict)  # name -> (kind, object)
    order: list = field(default_factory=list)
    filename: Optional[str] = None

    def add(self, kind: str, name: str, obj, line=None):
        if name in self.declarations:
            raise ParseError(f"duplicate declaration {name!r}", line=line, filename=self.filename)
        self.declarations[name] = (kind, obj)
        self.order.append(name)

    def names(self):
        return list(self.order)

    def resolve(self, name: str, kind: Optional[str] = None, paper_literal: bool = False):
        lookup = name
        if paper_literal and f"{name}_literal" in self.declarations:
            lookup = f"{name}_literal"
        if lookup not in self.declarations:
            matches = [n for n in self.order if n.startswith(name)]
            if len(matches) == 1:
                lookup = matches[0]
            else:
                raise DomainError(f"no declaration named {name!r}")
        got_kind, obj = self.declarations[lookup]
        if kind is not None and got_kind != kind:
            raise DomainError(f"{lookup!r} is a {got_kind}, expected {kind}")
        return got_kind, obj


# ---------------------------------------------------------------------------
# scanning


def _strip_comment(line: str) -> str:
    if "#" in line:
        line = line[: line.index("#")]
    return line.rstrip()


def _split_statements(line: str):
    """Split on ';' outside of '{...}' (inline homomorphism bodies)."""
    parts = []
    depth = 0
    cur = []
    for ch in line:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        if ch == ";" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def _blocks(text: str, filename):
    """Yield (kind, name, [(lineno, statement), ...], header_lineno)."""
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        raw = _strip_comment(lines[i])
        i += 1
        if not raw.strip():
            continue
        m = re.match(r"^\s*(\w+)\s+(\w+)\s*:?\s*\{(.*)$", raw)
        if not m:
            raise ParseError(
                f"expected a block header 'kind name {{', got {raw.strip()!r}",
                line=i,
                filename=filename,
            )
        kind, name, rest = m.group(1), m.group(2), m.group(3)
        header_line = i
        body = []
        if rest.strip().endswith("}") and rest.count("}") > rest.count("{"):
            # one-line block: kind name { ... }
            inner = rest.strip()[:-1]
            for part in _split_statements(inner):
                body.append((header_line, part))
            yield kind, name, body, header_line
            continue
        if rest.strip():
            raise ParseError(
                "a block header must end its line with '{'", line=i, filename=filename
            )
        while True:
            if i >= len(lines):
                raise ParseError(
                    f"block {name!r} is missing its closing '}}'",
                    line=header_line,
                    filename=filename,
                )
            stmt = _strip_comment(lines[i])
            i += 1
            if stmt.strip() == "}":
                break
            for part in _split_statements(stmt):
                body.append((i, part))
        yield kind, name, body, header_line


def _directive(stmt: str):
    m = re.match(r"^([\w]+(?:\s+[\w]+)?)\s*:\s*(.*)$", stmt)
    if m and "=" not in m.group(1):
        return m.group(1), m.group(2).strip()
    return None


_RULE_RE = re.compile(
    r"^(?P<name>[\w']+)\s*\(\s*(?P<arg>[^)]*?)\s*\)\s*(?:@(?P<cls>[\w]+)\s*)?=\s*(?P<rhs>.*)$"
)


def _parse_hom_body(text: str, lineno, filename) -> dict[str, Word]:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ParseError("expected a homomorphism body '{ ... }'", line=lineno, filename=filename)
    images = {}
    for part in text[1:-1].split(";"):
        part = part.strip()
        if not part:
            continue
        if "->" not in part:
            raise ParseError(f"bad homomorphism rule {part!r}", line=lineno, filename=filename)
        lhs, rhs = part.split("->", 1)
        lhs = lhs.strip()
        if not lhs or len(lhs.split()) != 1:
            raise ParseError(f"bad homomorphism rule {part!r}", line=lineno, filename=filename)
        if lhs in images:
            raise ParseError(f"two images for letter {lhs!r}", line=lineno, filename=filename)
        images[lhs] = word(rhs)
    return images


def _rhs_terms(rhs: str, lineno, filename):
    """Parse `f(w) g(a w)`-style right-hand sides into (name, shift) pairs."""
    rhs = rhs.strip()
    if rhs == "eps" or rhs == "":
        return []
    out = []
    pos = 0
    for m in re.finditer(r"([\w']+)\s*\(\s*([^)]*?)\s*\)", rhs):
        if rhs[pos:m.start()].strip():
            raise ParseError(
                f"unexpected text {rhs[pos:m.start()].strip()!r} in rule", line=lineno, filename=filename
            )
        tokens = m.group(2).split()
        if not tokens or tokens[-1] != "w":
            raise ParseError(
                f"rule argument {m.group(2)!r} must end in 'w'", line=lineno, filename=filename
            )
        out.append((m.group(1), tuple(tokens[:-1])))
        pos = m.end()
    if rhs[pos:].strip():
        raise ParseError(f"unexpected text {rhs[pos:].strip()!r} in rule", line=lineno, filename=filename)
    if not out:
        raise ParseError("empty rule right-hand side (use 'eps')", line=lineno, filename=filename)
    return out


class _RuleAccumulator:
    def __init__(self, filename):
        self.filename = filename
        self.bases = {}
        self.rules = {}

    def feed(self, lineno, stmt):
        m = _RULE_RE.match(stmt)
        if not m:
            raise ParseError(f"cannot parse statement {stmt!r}", line=lineno, filename=self.filename)
        name, arg, cls, rhs = m.group("name"), m.group("arg"), m.group("cls"), m.group("rhs")
        arg_tokens = arg.split()
        if arg_tokens == ["eps"] or arg_tokens == []:
            if cls is not None:
                raise ParseError("base cases take no @class", line=lineno, filename=self.filename)
            if name in self.bases:
                raise ParseError(f"two base cases for {name!r}", line=lineno, filename=self.filename)
            self.bases[name] = (lineno, rhs.strip())
        else:
            if len(arg_tokens) != 2 or arg_tokens[1] != "w":
                raise ParseError(
                    f"rule head argument must be 'eps' or 'LETTER w', got {arg!r}",
                    line=lineno,
                    filename=self.filename,
                )
            key = (name, arg_tokens[0], cls)
            if key in self.rules:
                raise ParseError(
                    f"duplicate rule for {name}({arg_tokens[0]} w)"
                    + (f" @{cls}" if cls else ""),
                    line=lineno,
                    filename=self.filename,
                )
            self.rules[key] = (lineno, rhs.strip())


def _split_list(text: str):
    return tuple(text.split())


# ---------------------------------------------------------------------------
# per-kind block parsers


def _parse_cat(name, body, filename) -> CatenativeSystem:
    acc = _RuleAccumulator(filename)
    inp = out = None
    for lineno, stmt in body:
        d = _directive(stmt)
        if d:
            key, rest = d
            if key == "input":
                inp = _split_list(rest)
            elif key == "output":
                out = _split_list(rest)
            else:
                raise ParseError(f"unknown directive {key!r}", line=lineno, filename=filename)
        else:
            acc.feed(lineno, stmt)
    if inp is None or out is None:
        raise ParseError(f"cat {name} needs 'input:' and 'output:'", filename=filename)
    indices = tuple(sorted(acc.bases))
    rules = {}
    for (i, a, cls), (lineno, rhs) in acc.rules.items():
        if cls is not None:
            raise ParseError("catenative rules take no @class", line=lineno, filename=filename)
        terms = _rhs_terms(rhs, lineno, filename)
        for j, shift in terms:
            if shift:
                raise ParseError("catenative rules take no shift letters", line=lineno, filename=filename)
        rules[(i, a)] = tuple(j for j, _ in terms)
    base = {i: word(rhs) for i, (_, rhs) in acc.bases.items()}
    return CatenativeSystem.make(indices, inp, out, rules, base)


def _parse_comp(name, body, filename) -> CompositionalSystem:
    acc = _RuleAccumulator(filename)
    inp = working = None
    for lineno, stmt in body:
        d = _directive(stmt)
        if d:
            key, rest = d
            if key == "input":
                inp = _split_list(rest)
            elif key == "working":
                working = _split_list(rest)
            else:
                raise ParseError(f"unknown directive {key!r}", line=lineno, filename=filename)
        else:
            acc.feed(lineno, stmt)
    if inp is None or working is None:
        raise ParseError(f"comp {name} needs 'input:' and 'working:'", filename=filename)
    indices = tuple(sorted(acc.bases))
    working_set = frozenset(working)
    base = {}
    for i, (lineno, rhs) in acc.bases.items():
        images = _parse_hom_body(rhs, lineno, filename)
        for v in working_set - set(images):
            images[v] = (v,)
        base[i] = Homomorphism(images, source=working_set, target=working_set)
    rules = {}
    for (i, a, cls), (lineno, rhs) in acc.rules.items():
        if cls is not None:
            raise ParseError("compositional rules take no @class", line=lineno, filename=filename)
        terms = _rhs_terms(rhs, lineno, filename)
        for j, shift in terms:
            if shift:
                raise ParseError("compositional rules take no shift letters", line=lineno, filename=filename)
        rules[(i, a)] = tuple(j for j, _ in terms)
    return CompositionalSystem.make(indices, inp, working_set, rules, base)


def _parse_reg(name, body, filename) -> RegularSystem:
    acc = _RuleAccumulator(filename)
    inp = out = None
    classes = None
    start = None
    steps = {}
    for lineno, stmt in body:
        d = _directive(stmt)
        if d:
            key, rest = d
            if key == "input":
                inp = _split_list(rest)
            elif key == "output":
                out = _split_list(rest)
            elif key == "classes":
                classes = _split_list(rest)
            elif key == "start":
                start = rest.strip()
            elif key == "step":
                m = re.match(r"^(\w+)\s+(\w+)\s*->\s*(\w+)$", rest)
                if not m:
                    raise ParseError(
                        f"classifier step must be 'STATE LETTER -> STATE', got {rest!r}",
                        line=lineno,
                        filename=filename,
                    )
                steps[(m.group(1), m.group(2))] = m.group(3)
            else:
                raise ParseError(f"unknown directive {key!r}", line=lineno, filename=filename)
        else:
            acc.feed(lineno, stmt)
    if inp is None or out is None or classes is None or start is None:
        raise ParseError(
            f"reg {name} needs 'input:', 'output:', 'classes:' and 'start:'", filename=filename
        )
    classifier = DfaClassifier.make(classes, start, steps)
    indices = tuple(sorted(acc.bases))
    rules = {}
    for (i, a, cls), (lineno, rhs) in acc.rules.items():
        if cls is None:
            # an unannotated rule applies to every class
            targets = classifier.classes()
        else:
            targets = [cls]
        terms = tuple(_rhs_terms(rhs, lineno, filename))
        for d in targets:
            rules[(i, a, d)] = terms
    base = {i: word(rhs) for i, (_, rhs) in acc.bases.items()}
    return RegularSystem.make(indices, inp, out, classifier, rules, base)


def _parse_poly(name, body, filename) -> PolynomialSystem:
    acc = _RuleAccumulator(filename)
    inp = None
    ring = "N"
    for lineno, stmt in body:
        d = _directive(stmt)
        if d:
            key, rest = d
            if key == "input":
                inp = _split_list(rest)
            elif key == "ring":
                ring = rest.strip()
            else:
                raise ParseError(f"unknown directive {key!r}", line=lineno, filename=filename)
        else:
            acc.feed(lineno, stmt)
    if inp is None:
        raise ParseError(f"poly {name} needs 'input:'", filename=filename)
    indices = tuple(sorted(acc.bases))
    rules = {}
    for (i, a, cls), (lineno, rhs) in acc.rules.items():
        if cls is not None:
            raise ParseError("polynomial rules take no @class", line=lineno, filename=filename)
        try:
            rules[(i, a)] = parse_polynomial(rhs, indices)
        except ParseError as e:
            raise ParseError(f"in rule {i}({a} w): {e}", line=lineno, filename=filename)
    base = {}
    for i, (lineno, rhs) in acc.bases.items():
        try:
            value = parse_polynomial(rhs, ())
        except ParseError as e:
            raise ParseError(f"in base {i}(eps): {e}", line=lineno, filename=filename)
        if not value.is_constant():
            raise ParseError(f"base of {i!r} must be an integer", line=lineno, filename=filename)
        c = value.constant_value()
        if c.denominator != 1:
            raise ParseError(f"base of {i!r} must be an integer", line=lineno, filename=filename)
        base[i] = c.numerator
    return PolynomialSystem.make(indices, inp, rules, base, ring=ring)


def _parse_hdt0l(name, body, filename) -> HDT0LSystem:
    inp = working = out = seed = None
    tables = {}
    final = None
    for lineno, stmt in body:
        d = _directive(stmt)
        if d:
            key, rest = d
            if key == "input":
                inp = _split_list(rest)
                continue
            if key == "working":
                working = _split_list(rest)
                continue
            if key == "output":
                out = _split_list(rest)
                continue
            if key == "seed":
                seed = rest.strip()
                continue
        m = re.match(r"^table\s+([\w']+)\s*=\s*(.*)$", stmt)
        if m:
            tables[m.group(1)] = (lineno, m.group(2))
            continue
        m = re.match(r"^final\s*=\s*(.*)$", stmt)
        if m:
            final = (lineno, m.group(1))
            continue
        raise ParseError(f"cannot parse statement {stmt!r}", line=lineno, filename=filename)
    if None in (inp, working, out, seed) or final is None:
        raise ParseError(
            f"hdt0l {name} needs 'input:', 'working:', 'output:', 'seed:' and 'final ='",
            filename=filename,
        )
    working_set = frozenset(working)
    homs = {}
    for a, (lineno, text) in tables.items():
        images = _parse_hom_body(text, lineno, filename)
        for v in working_set - set(images):
            images[v] = (v,)
        homs[a] = Homomorphism(images, source=working_set, target=working_set)
    lineno, text = final
    images = _parse_hom_body(text, lineno, filename)
    for v in working_set - set(images):
        images[v] = (v,)
    final_hom = Homomorphism(images, source=working_set, target=frozenset(out))
    return HDT0LSystem.make(inp, working_set, homs, final_hom, seed)


def _parse_int_list(text, lineno, filename):
    try:
        return tuple(int(tok) for tok in text.split())
    except ValueError:
        raise ParseError(f"expected integers, got {text!r}", line=lineno, filename=filename)


def _parse_linrep(name, body, filename) -> LinearRepresentation:
    row = col = None
    dim = None
    mats = {}
    for lineno, stmt in body:
        d = _directive(stmt)
        if d:
            key, rest = d
            if key == "dim":
                dim = int(rest)
                continue
            if key == "row":
                row = _parse_int_list(rest, lineno, filename)
                continue
            if key == "col":
                col = _parse_int_list(rest, lineno, filename)
                continue
            if key == "letters":
                continue
        m = re.match(r"^mat\s+([\w']+)\s*=\s*\[(.*)\]\s*$", stmt)
        if m:
            rows = tuple(
                _parse_int_list(chunk, lineno, filename) for chunk in m.group(2).split("/")
            )
            mats[m.group(1)] = rows
            continue
        raise ParseError(f"cannot parse statement {stmt!r}", line=lineno, filename=filename)
    if row is None or col is None or not mats:
        raise ParseError(f"linrep {name} needs 'row:', 'col:' and at least one 'mat'", filename=filename)
    rep = LinearRepresentation.make(row, mats, col)
    if dim is not None and rep.dimension != dim:
        raise ParseError(f"declared dim {dim} does not match the data", filename=filename)
    return rep


_TRANS_RE = re.compile(
    r"^([\w']+)\s*,\s*([\w']+)\s*,\s*([\w' ]+?)\s*->\s*([\w']+)\s*,\s*(pop_(\d+)|push_(\d+)\s*\(([^)]*)\))\s*$"
)


def _parse_pda(name, body, filename) -> KPda:
    level = None
    states = terminals = inp = None
    start = None
    bottoms = ()
    gamma_levels = {}
    transitions = []
    for lineno, stmt in body:
        d = _directive(stmt)
        if d:
            key, rest = d
            if key == "level":
                level = int(rest)
                continue
            if key == "states":
                states = _split_list(rest)
                continue
            if key == "terminals":
                terminals = _split_list(rest)
                continue
            if key == "input":
                inp = _split_list(rest)
                continue
            if key == "start":
                start = rest.strip()
                continue
            if key == "bottoms":
                bottoms = _split_list(rest)
                continue
            m = re.match(r"^gamma\s+(\d+)$", key)
            if m:
                gamma_levels[int(m.group(1))] = _split_list(rest)
                continue
            raise ParseError(f"unknown directive {key!r}", line=lineno, filename=filename)
        m = _TRANS_RE.match(stmt)
        if not m:
            raise ParseError(
                f"cannot parse transition {stmt!r} (expected 'q , b , g -> q2 , op')",
                line=lineno,
                filename=filename,
            )
        q, read, tops, q2 = m.group(1), m.group(2), m.group(3), m.group(4)
        if m.group(6):
            op = Pop(int(m.group(6)))
        else:
            syms = tuple(m.group(8).replace(",", " ").split())
            if not syms:
                raise ParseError("push needs at least one symbol", line=lineno, filename=filename)
            op = Push(int(m.group(7)), syms)
        read = "" if read == "eps" else read
        transitions.append(((q, read, tuple(tops.split())), (q2, op)))
    if level is None or states is None or terminals is None or start is None:
        raise ParseError(
            f"pda {name} needs 'level:', 'states:', 'terminals:' and 'start:'", filename=filename
        )
    if sorted(gamma_levels) != list(range(1, level + 1)):
        raise ParseError(
            f"pda {name} needs 'gamma i:' for each level 1..{level}", filename=filename
        )
    gamma = GradedAlphabet.of(*(gamma_levels[i] for i in range(1, level + 1)))
    delta: dict = {}
    for key, move in transitions:
        delta.setdefault(key, set()).add(move)
    return KPda.make(
        level,
        states,
        terminals,
        gamma,
        delta,
        start,
        input_alphabet=inp or (),
        bottom_symbols=bottoms,
        name=name,
    )


def _parse_ideal(name, body, filename):
    from .groebner import Ideal

    variables = None
    gens = []
    for lineno, stmt in body:
        d = _directive(stmt)
        if d:
            key, rest = d
            if key == "vars":
                variables = _split_list(rest)
                continue
            if key == "gen":
                gens.append(parse_polynomial(rest, variables))
                continue
        raise ParseError(f"cannot parse statement {stmt!r}", line=lineno, filename=filename)
    if variables is None:
        raise ParseError(f"ideal {name} needs 'vars:'", filename=filename)
    return Ideal(gens, variables)


def _parse_frac(name, body, filename) -> FractionSpec:
    fields = {}
    for lineno, stmt in body:
        d = _directive(stmt)
        if not d:
            raise ParseError(f"cannot parse statement {stmt!r}", line=lineno, filename=filename)
        key, rest = d
        if key not in ("system", "g", "h", "fp", "gp"):
            raise ParseError(f"unknown directive {key!r}", line=lineno, filename=filename)
        fields[key] = rest.strip()
    missing = {"system", "g", "h", "fp", "gp"} - set(fields)
    if missing:
        raise ParseError(f"frac {name} is missing {sorted(missing)}", filename=filename)
    return FractionSpec(fields["system"], fields["g"], fields["h"], fields["fp"], fields["gp"])


def _parse_alphabet(name, body, filename) -> frozenset:
    letters = []
    for lineno, stmt in body:
        d = _directive(stmt)
        if d and d[0] == "letters":
            letters.extend(d[1].split())
        else:
            letters.extend(stmt.split())
    return frozenset(letters)


def _parse_graded(name, body, filename) -> GradedAlphabet:
    levels = {}
    for lineno, stmt in body:
        m = re.match(r"^(\d+)\s*:\s*(.*)$", stmt)
        if not m:
            raise ParseError(f"graded entries look like '1: A B'", line=lineno, filename=filename)
        levels[int(m.group(1))] = _split_list(m.group(2))
    if sorted(levels) != list(range(1, len(levels) + 1)):
        raise ParseError(f"graded {name} must cover levels 1..k", filename=filename)
    return GradedAlphabet.of(*(levels[i] for i in range(1, len(levels) + 1)))


def _parse_hom_block(name, body, filename) -> Homomorphism:
    rules = []
    for lineno, stmt in body:
        rules.append(stmt)
    images = _parse_hom_body("{" + ";".join(rules) + "}", body[0][0] if body else None, filename)
    return Homomorphism(images)


_PARSERS = {
    "alphabet": _parse_alphabet,
    "graded": _parse_graded,
    "hom": _parse_hom_block,
    "cat": _parse_cat,
    "comp": _parse_comp,
    "reg": _parse_reg,
    "poly": _parse_poly,
    "hdt0l": _parse_hdt0l,
    "linrep": _parse_linrep,
    "pda": _parse_pda,
    "ideal": _parse_ideal,
    "frac": _parse_frac,
}


def parse_file(text: str, filename: Optional[str] = None) -> SystemFile:
    out = SystemFile(filename=filename)
    for kind, name, body, header in _blocks(text, filename):
        if kind not in _PARSERS:
            raise ParseError(f"unknown block kind {kind!r}", line=header, filename=filename)
        obj = _PARSERS[kind](name, body, filename)
        out.add(kind, name, obj, line=header)
    return out


# ---------------------------------------------------------------------------
# printing


def _format_hom(h: Homomorphism) -> str:
    body = "; ".join(f"{a} -> {show_word(w)}" for a, w in sorted(h.images.items()))
    return "{ " + body + " }"


def format_declaration(kind: str, name: str, obj) -> str:
    lines = [f"{kind} {name} {{"]
    if kind == "alphabet":
        lines.append(f"  letters: {' '.join(sorted(obj))}")
    elif kind == "graded":
        for i, level in enumerate(obj.levels, start=1):
            lines.append(f"  {i}: {' '.join(sorted(level))}")
    elif kind == "hom":
        for a, w in sorted(obj.images.items()):
            lines.append(f"  {a} -> {show_word(w)}")
    elif kind == "cat":
        lines.append(f"  input: {' '.join(sorted(obj.input_alphabet))}")
        lines.append(f"  output: {' '.join(sorted(obj.output_alphabet))}")
        for i, w in obj.base:
            lines.append(f"  {i}(eps) = {show_word(w)}")
        for (i, a), rhs in obj.rules:
            body = " ".join(f"{j}(w)" for j in rhs) or "eps"
            lines.append(f"  {i}({a} w) = {body}")
    elif kind == "comp":
        lines.append(f"  input: {' '.join(sorted(obj.input_alphabet))}")
        lines.append(f"  working: {' '.join(sorted(obj.working))}")
        for i, h in obj.base:
            lines.append(f"  {i}(eps) = {_format_hom(h)}")
        for (i, a), rhs in obj.rules:
            body = " ".join(f"{j}(w)" for j in rhs) or "eps"
            lines.append(f"  {i}({a} w) = {body}")
    elif kind == "reg":
        lines.append(f"  input: {' '.join(sorted(obj.input_alphabet))}")
        lines.append(f"  output: {' '.join(sorted(obj.output_alphabet))}")
        cls = obj.classifier
        lines.append(f"  classes: {' '.join(sorted(cls.states))}")
        lines.append(f"  start: {cls.start}")
        for (q, a), q2 in cls.transitions:
            lines.append(f"  step: {q} {a} -> {q2}")
        for i, w in obj.base:
            lines.append(f"  {i}(eps) = {show_word(w)}")
        for (i, a, d), rhs in obj.rules:
            body = " ".join(f"{j}({' '.join(u) + ' ' if u else ''}w)" for j, u in rhs) or "eps"
            lines.append(f"  {i}({a} w) @{d} = {body}")
    elif kind == "poly":
        lines.append(f"  input: {' '.join(sorted(obj.input_alphabet))}")
        lines.append(f"  ring: {obj.ring}")
        for i, v in obj.base:
            lines.append(f"  {i}(eps) = {v}")
        for (i, a), p in obj.rules:
            lines.append(f"  {i}({a} w) = {format_polynomial(p)}")
    elif kind == "hdt0l":
        lines.append(f"  input: {' '.join(sorted(obj.input_alphabet))}")
        lines.append(f"  working: {' '.join(sorted(obj.working))}")
        lines.append(f"  output: {' '.join(sorted(obj.output_alphabet))}")
        lines.append(f"  seed: {obj.seed}")
        for a, h in obj.tables:
            lines.append(f"  table {a} = {_format_hom(h)}")
        lines.append(f"  final = {_format_hom(obj.final)}")
    elif kind == "linrep":
        lines.append(f"  letters: {' '.join(sorted(obj.letters))}")
        lines.append(f"  dim: {obj.dimension}")
        lines.append(f"  row: {' '.join(map(str, obj.row))}")
        for a, m in obj.matrices:
            body = " / ".join(" ".join(map(str, r)) for r in m)
            lines.append(f"  mat {a} = [ {body} ]")
        lines.append(f"  col: {' '.join(map(str, obj.col))}")
    elif kind == "pda":
        lines.append(f"  level: {obj.level}")
        lines.append(f"  states: {' '.join(sorted(obj.states))}")
        lines.append(f"  terminals: {' '.join(sorted(obj.terminals))}")
        if obj.input_alphabet:
            lines.append(f"  input: {' '.join(sorted(obj.input_alphabet))}")
        for i, level in enumerate(obj.gamma.levels, start=1):
            lines.append(f"  gamma {i}: {' '.join(sorted(level))}")
        lines.append(f"  start: {obj.start_state}")
        if obj.bottom_symbols:
            lines.append(f"  bottoms: {' '.join(obj.bottom_symbols)}")
        for (q, read, tops), moves in obj.delta:
            for q2, op in sorted(moves, key=str):
                shown = read if read else "eps"
                lines.append(f"  {q} , {shown} , {' '.join(tops)} -> {q2} , {op}")
    elif kind == "ideal":
        lines.append(f"  vars: {' '.join(obj.variables())}")
        for g in obj.generators:
            lines.append(f"  gen: {format_polynomial(g)}")
    elif kind == "frac":
        lines.append(f"  system: {obj.system_name}")
        lines.append(f"  g: {obj.num_plus}")
        lines.append(f"  h: {obj.num_minus}")
        lines.append(f"  fp: {obj.den_plus}")
        lines.append(f"  gp: {obj.den_minus}")
    else:
        raise DomainError(f"cannot format kind {kind!r}")
    lines.append("}")
    return "\n".join(lines)


def format_file(sf: SystemFile) -> str:
    chunks = []
    for name in sf.order:
        kind, obj = sf.declarations[name]
        chunks.append(format_declaration(kind, name, obj))
    return "\n\n".join(chunks) + "\n"
