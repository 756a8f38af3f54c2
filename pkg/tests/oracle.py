"""Independent brute-force reference for the grammar engine.

Enumerates every (rule, start, alignment) combination directly from the rule
structure and filters by the published winner ordering. Kept deliberately
separate from the engine's matcher so the two can disagree.
"""

from makan.lexicon import LexClass
from makan.semmap import subsumes


def _test_ok(test, lex_match, smap):
    if test.kind == "class":
        return lex_match.entry.cls is LexClass[test.value]
    if test.kind == "sense":
        return any(subsumes(smap, test.value, s) for s in lex_match.entry.senses)
    if test.kind == "flag":
        return test.value in lex_match.entry.flags
    raise AssertionError(test.kind)


def _all_alignments(rule, tokens, lexicon, smap, start):
    """Every complete alignment as (total, consumption vector, captures)."""
    results = []

    def go(ai, pos, vec, caps):
        if ai == len(rule.atoms):
            results.append((pos - start, tuple(vec), dict(caps)))
            return
        atom = rule.atoms[ai]
        choices = set()
        if atom.gap:
            for k in range(0, min(atom.gap, len(tokens) - pos) + 1):
                choices.add(k)
        else:
            if atom.optional:
                choices.add(0)
            if pos < len(tokens):
                for test in atom.tests:
                    if test.kind == "lit":
                        if tokens[pos].stem == test.value:
                            choices.add(1)
                    else:
                        for m in lexicon.lookup(tokens, pos):
                            if _test_ok(test, m, smap):
                                choices.add(m.length)
        for consumed in sorted(choices):
            ncaps = caps
            if atom.capture is not None and consumed > 0:
                ncaps = {**caps, atom.capture: (pos, pos + consumed)}
            go(ai + 1, pos + consumed, vec + [consumed], ncaps)

    go(0, start, [], {})
    return [r for r in results if "trigger" in r[2]]


def oracle_apply(grammar, tokens, lexicon):
    """(rule name, span, captures, output) tuples under the same winner policy."""
    smap = grammar.smap
    out = []
    i = 0
    while i < len(tokens):
        candidates = []
        for rule in grammar.rules:
            alignments = _all_alignments(rule, tokens, lexicon, smap, i)
            if not alignments:
                continue
            total, vec, caps = max(alignments, key=lambda r: (r[0], r[1]))
            candidates.append(((-rule.priority, -total, rule.decl), rule, total, caps))
        if not candidates:
            i += 1
            continue
        _, rule, total, caps = min(candidates, key=lambda c: c[0])
        out.append((rule.name, (i, i + total), caps, rule.output))
        i = caps["trigger"][1]
    return out


def as_tuples(raw_matches):
    return [(m.rule, m.span, m.captures, m.output) for m in raw_matches]
