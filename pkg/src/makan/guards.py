"""Guard predicates evaluated on raw matches before annotations are emitted.

Blocking guards veto a match; DUAL_SENSE never vetoes, it attaches the
trigger's alternate senses. All guards are pure.
"""

from __future__ import annotations

from .lexicon import NOUN_CLASSES, LexClass, Lexicon

# Negation particles checked in the scope window (كي لا is covered by لا).
NEG_PARTICLES = frozenset({"لا", "لم", "لن", "ما", "ليس"})

NEG_WINDOW = 3

# Dual/plural morphology accepted on a بين site head.
_PLURAL_ENDINGS = ("ين", "ان", "ات", "ون", "وا")


def _site_evidence(match):
    return match.evidence.get("site")


def guard_neg_scope(tokens, match, lexicon: Lexicon | None = None) -> bool:
    """Veto iff a negation particle precedes the governing verb (or the trigger
    when the match has no verb capture) within the scope window."""
    anchor = match.captures.get("verb") or match.captures["trigger"]
    lo = max(0, anchor[0] - NEG_WINDOW)
    return any(tok.stem in NEG_PARTICLES for tok in tokens[lo : anchor[0]])


def guard_abstract_site(tokens, match, lexicon: Lexicon | None = None) -> bool:
    """Veto iff the site head is abstract-capable; only concrete places count."""
    site = _site_evidence(match)
    if site is None:
        return False
    entry = site.entry
    return entry.cls is LexClass.NOUN_ABSTRACT_SITE or "ABSTRACT_CAPABLE" in entry.flags


def guard_temporal_site(tokens, match, lexicon: Lexicon | None = None) -> bool:
    """Veto iff the site head is a temporal noun (بين ساعة الغروب ...)."""
    site = _site_evidence(match)
    return site is not None and site.entry.cls is LexClass.NOUN_TEMPORAL


def guard_possessive_required(tokens, match, lexicon: Lexicon | None = None) -> bool:
    """Veto a bare lateral/vertical trigger that has neither a pronoun suffix
    nor a following noun complement (يمين alone says nothing spatial)."""
    trig = match.evidence.get("trigger")
    if trig is not None and trig.suffixed:
        return False
    if "site" in match.captures:
        return False
    j = match.captures["trigger"][1]
    if lexicon is not None and j < len(tokens):
        for m in lexicon.lookup(tokens, j):
            if m.entry.cls in NOUN_CLASSES:
                return False
    return True


def guard_plural_site(tokens, match, lexicon: Lexicon | None = None) -> bool:
    """Veto a distribution match whose site is not plural, dual, possessive or
    coordinated (بين requires a plural-like complement)."""
    span = match.captures.get("site")
    if span is None:
        return True
    head = tokens[span[0]]
    if head.stem.endswith(_PLURAL_ENDINGS):
        return False
    site = _site_evidence(match)
    if site is not None and site.suffixed:
        return False
    for tok in tokens[span[1] : span[1] + 2]:
        if any(p.kind == "coordination" for p in tok.proclitics):
            return False
    return True


def guard_dual_sense(tokens, match, lexicon: Lexicon | None = None) -> list[str]:
    """Never vetoes; returns alternate categories for dual-sense triggers."""
    trig = match.evidence.get("trigger")
    if trig is None or "AMBIGUOUS_DUAL" not in trig.entry.flags:
        return []
    return sorted(trig.entry.senses - {match.output})


BLOCKING_GUARDS = {
    "NEG_SCOPE": guard_neg_scope,
    "ABSTRACT_SITE": guard_abstract_site,
    "TEMPORAL_SITE": guard_temporal_site,
    "POSSESSIVE_REQUIRED": guard_possessive_required,
    "PLURAL_SITE": guard_plural_site,
}

KNOWN_GUARDS = frozenset(BLOCKING_GUARDS) | {"DUAL_SENSE"}


class UnknownGuardError(ValueError):
    pass


def run_guards(guard_names, tokens, match, lexicon: Lexicon) -> tuple[bool, list[str]]:
    """Evaluate a match's guards; returns (vetoed, alternate categories)."""
    alternates: list[str] = []
    for name in guard_names:
        if name == "DUAL_SENSE":
            alternates = guard_dual_sense(tokens, match, lexicon)
            continue
        fn = BLOCKING_GUARDS.get(name)
        if fn is None:
            raise UnknownGuardError(f"unknown guard {name!r}")
        if fn(tokens, match, lexicon):
            return True, []
    return False, alternates
