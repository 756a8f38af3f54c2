"""Pattern DSL compiled to deterministic matchers applied as a prioritized cascade.

Rule syntax (one statement per rule, `#` comments):

    rule  := "RULE" name "PRIO" int ":" atom+ "=>" path ("GUARD" name ("," name)*)?
    atom  := "(" inner ")?" | inner | "GAP" int
    inner := (capture "=")? "[" test ("|" test)* "]" | bareword-literal
    test  := CLASSNAME | "SENSE" path | "FLAG" flagname | "LIT" word

A class/sense/flag test consumes a whole lexicon match, so a multiword
locution satisfies a single atom. Matching is leftmost; at each position the
winner is chosen by (priority desc, match length desc, declaration order)
and scanning resumes after the winner's trigger token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import semmap
from .lexicon import FLAGS, LexClass, LexMatch, Lexicon
from .textnorm import normalize

CAPTURE_NAMES = ("trigger", "site", "target", "verb")

MAX_GAP = 5


class GrammarError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        loc = f" (line {line}, col {col})" if line is not None else ""
        super().__init__(message + loc)
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Test:
    kind: str   # class | sense | flag | lit
    value: str


@dataclass(frozen=True)
class PatternAtom:
    tests: tuple[Test, ...] = ()
    capture: str | None = None
    optional: bool = False
    gap: int = 0                 # >0: up-to-N wildcard gap, no tests


@dataclass(frozen=True)
class Rule:
    name: str
    priority: int
    atoms: tuple[PatternAtom, ...]
    output: str
    guards: tuple[str, ...]
    decl: int                    # declaration index, tie-break after priority


@dataclass(frozen=True)
class RawMatch:
    rule: str
    span: tuple[int, int]                     # token index range, end exclusive
    captures: dict[str, tuple[int, int]]
    output: str
    priority: int
    evidence: dict[str, LexMatch | None] = field(default_factory=dict)


class CompiledGrammar:
    def __init__(self, rules: tuple[Rule, ...], smap: semmap.SpatialityMap):
        self.rules = rules
        self.smap = smap

    def __len__(self) -> int:
        return len(self.rules)


# ---------------------------------------------------------------------------
# lexing / parsing

_TOKEN_RE = re.compile(r"=>|\)\?|[\[\]|(:,=]|[^\s\[\]|():,=#]+")


@dataclass(frozen=True)
class _Tok:
    text: str
    line: int
    col: int


def _lex(source: str) -> list[_Tok]:
    toks = []
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        pos = 0
        for m in _TOKEN_RE.finditer(line):
            gap = line[pos : m.start()]
            if gap.strip():
                raise GrammarError(f"unexpected character {gap.strip()[0]!r}", lineno, pos + 1)
            toks.append(_Tok(m.group(), lineno, m.start() + 1))
            pos = m.end()
        if line[pos:].strip():
            raise GrammarError(f"unexpected character {line[pos:].strip()[0]!r}", lineno, pos + 1)
    return toks


class _Parser:
    def __init__(self, toks: list[_Tok]):
        self.toks = toks
        self.pos = 0

    def peek(self) -> _Tok | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self, expected: str | None = None) -> _Tok:
        tok = self.peek()
        if tok is None:
            last = self.toks[-1] if self.toks else None
            raise GrammarError(
                f"unexpected end of rule file, expected {expected or 'token'}",
                last.line if last else None,
                last.col if last else None,
            )
        if expected is not None and tok.text != expected:
            raise GrammarError(f"expected {expected!r}, found {tok.text!r}", tok.line, tok.col)
        self.pos += 1
        return tok


def _parse_int(p: _Parser, what: str) -> int:
    tok = p.next(None)
    try:
        return int(tok.text)
    except ValueError:
        raise GrammarError(f"expected integer {what}, found {tok.text!r}", tok.line, tok.col) from None


def _parse_test(p: _Parser) -> Test:
    tok = p.next(None)
    if tok.text in LexClass.__members__:
        return Test("class", tok.text)
    if tok.text == "SENSE":
        return Test("sense", p.next(None).text)
    if tok.text == "FLAG":
        return Test("flag", p.next(None).text)
    if tok.text == "LIT":
        return Test("lit", normalize(p.next(None).text)[0])
    raise GrammarError(f"unknown test {tok.text!r}", tok.line, tok.col)


def _parse_inner(p: _Parser) -> PatternAtom:
    tok = p.peek()
    nxt = p.toks[p.pos + 1] if p.pos + 1 < len(p.toks) else None
    capture = None
    if nxt is not None and nxt.text == "=" and tok.text != "[":
        capture = p.next(None).text
        p.next("=")
        tok = p.peek()
    if tok is not None and tok.text == "[":
        p.next("[")
        tests = [_parse_test(p)]
        while p.peek() is not None and p.peek().text == "|":
            p.next("|")
            tests.append(_parse_test(p))
        p.next("]")
        return PatternAtom(tests=tuple(tests), capture=capture)
    word = p.next(None)
    return PatternAtom(tests=(Test("lit", normalize(word.text)[0]),), capture=capture)


def _parse_atom(p: _Parser) -> PatternAtom:
    tok = p.peek()
    if tok.text == "(":
        p.next("(")
        inner = _parse_inner(p)
        p.next(")?")
        return PatternAtom(tests=inner.tests, capture=inner.capture, optional=True)
    if tok.text == "GAP":
        p.next("GAP")
        n = _parse_int(p, "after GAP")
        if not 0 < n <= MAX_GAP:
            raise GrammarError(f"GAP must be in 1..{MAX_GAP}", tok.line, tok.col)
        return PatternAtom(gap=n)
    return _parse_inner(p)


def _parse_rule(p: _Parser, decl: int) -> Rule:
    start = p.next("RULE")
    name = p.next(None).text
    p.next("PRIO")
    priority = _parse_int(p, "priority")
    p.next(":")
    atoms: list[PatternAtom] = []
    while True:
        tok = p.peek()
        if tok is None:
            raise GrammarError("rule is missing `=>`", start.line, start.col)
        if tok.text == "=>":
            break
        atoms.append(_parse_atom(p))
    if not atoms:
        raise GrammarError(f"rule {name}: empty pattern", start.line, start.col)
    p.next("=>")
    output = p.next(None).text
    guards: list[str] = []
    if p.peek() is not None and p.peek().text == "GUARD":
        p.next("GUARD")
        guards.append(p.next(None).text)
        while p.peek() is not None and p.peek().text == ",":
            p.next(",")
            guards.append(p.next(None).text)
    return Rule(
        name=name,
        priority=priority,
        atoms=tuple(atoms),
        output=output,
        guards=tuple(guards),
        decl=decl,
    )


def _validate_rule(rule: Rule, smap: semmap.SpatialityMap, start: _Tok):
    triggers = 0
    for atom in rule.atoms:
        if atom.capture is not None:
            if atom.capture not in CAPTURE_NAMES:
                raise GrammarError(
                    f"rule {rule.name}: unknown capture {atom.capture!r} "
                    f"(expected one of {', '.join(CAPTURE_NAMES)})",
                    start.line,
                    start.col,
                )
            if atom.capture == "trigger":
                triggers += 1
                if atom.optional:
                    raise GrammarError(
                        f"rule {rule.name}: trigger capture may not be optional", start.line, start.col
                    )
        for test in atom.tests:
            if test.kind == "sense" and semmap.resolve(smap, test.value) is None:
                raise GrammarError(
                    f"rule {rule.name}: unresolved category path {test.value}", start.line, start.col
                )
            if test.kind == "flag" and test.value not in FLAGS:
                raise GrammarError(f"rule {rule.name}: unknown flag {test.value}", start.line, start.col)
    if triggers != 1:
        raise GrammarError(
            f"rule {rule.name}: pattern must contain exactly one trigger capture, found {triggers}",
            start.line,
            start.col,
        )
    if semmap.resolve(smap, rule.output) is None:
        raise GrammarError(f"rule {rule.name}: unresolved output path {rule.output}", start.line, start.col)


def compile(source: str, lexicon: Lexicon, smap: semmap.SpatialityMap) -> CompiledGrammar:
    """Parse and validate rule source against a lexicon and semantic map."""
    toks = _lex(source)
    p = _Parser(toks)
    rules: list[Rule] = []
    names: set[str] = set()
    while p.peek() is not None:
        start = p.peek()
        rule = _parse_rule(p, decl=len(rules))
        _validate_rule(rule, smap, start)
        if rule.name in names:
            raise GrammarError(f"duplicate rule name {rule.name}", start.line, start.col)
        names.add(rule.name)
        rules.append(rule)
    return CompiledGrammar(tuple(rules), smap)


# ---------------------------------------------------------------------------
# matching

def _test_satisfied(test: Test, match: LexMatch, smap: semmap.SpatialityMap) -> bool:
    if test.kind == "class":
        return match.entry.cls is LexClass[test.value]
    if test.kind == "sense":
        return any(semmap.subsumes(smap, test.value, s) for s in match.entry.senses)
    if test.kind == "flag":
        return test.value in match.entry.flags
    raise AssertionError(test.kind)


def _atom_options(
    atom: PatternAtom, tokens, lookups, pos: int, smap
) -> list[tuple[int, LexMatch | None]]:
    """Ways this atom can consume tokens at `pos`, longest first."""
    if atom.gap:
        limit = min(atom.gap, len(tokens) - pos)
        return [(k, None) for k in range(limit, -1, -1)]
    options: list[tuple[int, LexMatch | None]] = []
    if pos < len(tokens):
        seen: set[int] = set()
        for test in atom.tests:
            if test.kind == "lit":
                if tokens[pos].stem == test.value and 1 not in seen:
                    options.append((1, None))
                    seen.add(1)
                continue
            for m in lookups[pos]:
                if _test_satisfied(test, m, smap) and m.length not in seen:
                    options.append((m.length, m))
                    seen.add(m.length)
    options.sort(key=lambda o: -o[0])
    if atom.optional:
        options.append((0, None))
    return options


def _best_alignment(rule: Rule, tokens, lookups, start: int, smap):
    """Highest-consumption alignment of `rule` at token `start`, or None.

    Among alignments the winner maximizes total length, then the per-atom
    consumption vector (leftmost atoms greedy), which makes matching
    deterministic.
    """
    best = None

    def rec(ai: int, pos: int, vec: tuple[int, ...], caps, ev):
        nonlocal best
        if ai == len(rule.atoms):
            cand = (pos - start, vec, caps, ev)
            if best is None or (cand[0], cand[1]) > (best[0], best[1]):
                best = cand
            return
        atom = rule.atoms[ai]
        for consumed, m in _atom_options(atom, tokens, lookups, pos, smap):
            ncaps, nev = caps, ev
            if atom.capture is not None and consumed > 0:
                ncaps = {**caps, atom.capture: (pos, pos + consumed)}
                nev = {**ev, atom.capture: m}
            rec(ai + 1, pos + consumed, vec + (consumed,), ncaps, nev)

    rec(0, start, (), {}, {})
    if best is None or "trigger" not in best[2]:
        return None
    return best


def apply(grammar: CompiledGrammar, tokens, lexicon: Lexicon) -> list[RawMatch]:
    """Scan left to right; one winner per start; resume after the winner's trigger."""
    smap = grammar.smap
    lookups = [lexicon.lookup(tokens, i) for i in range(len(tokens))]
    out: list[RawMatch] = []
    i = 0
    while i < len(tokens):
        best = None
        for rule in grammar.rules:
            al = _best_alignment(rule, tokens, lookups, i, smap)
            if al is None:
                continue
            total, _vec, caps, ev = al
            key = (-rule.priority, -total, rule.decl)
            if best is None or key < best[0]:
                best = (key, rule, total, caps, ev)
        if best is None:
            i += 1
            continue
        _, rule, total, caps, ev = best
        out.append(
            RawMatch(
                rule=rule.name,
                span=(i, i + total),
                captures=caps,
                output=rule.output,
                priority=rule.priority,
                evidence=ev,
            )
        )
        i = caps["trigger"][1]
    return out
