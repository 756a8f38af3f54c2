"""Trigger vocabulary: prepositions, locutions, site/target nouns, verbs, place names.

Entries are read from a flat TSV (`lemma<TAB>class<TAB>senses<TAB>flags`),
validated against the semantic map, and indexed for longest-first multiword
lookup over token stems.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from importlib import resources

from . import semmap
from .textnorm import normalize


class LexClass(str, enum.Enum):
    PREP = "PREP"
    PREP_LOCUTION = "PREP_LOCUTION"
    NOUN_SITE = "NOUN_SITE"
    NOUN_TARGET = "NOUN_TARGET"
    NOUN_ABSTRACT_SITE = "NOUN_ABSTRACT_SITE"
    VERB_MOTION = "VERB_MOTION"
    VERB_POSTURE = "VERB_POSTURE"
    PLACE_NAME = "PLACE_NAME"
    NOUN_TEMPORAL = "NOUN_TEMPORAL"


NOUN_CLASSES = frozenset(
    {
        LexClass.NOUN_SITE,
        LexClass.NOUN_TARGET,
        LexClass.NOUN_ABSTRACT_SITE,
        LexClass.PLACE_NAME,
        LexClass.NOUN_TEMPORAL,
    }
)

FLAGS = frozenset(
    {
        "TEMPORAL_CAPABLE",
        "ABSTRACT_CAPABLE",
        "REQUIRES_POSSESSIVE_DISAMBIG",
        "INTRINSIC_ORIENTATION",
        "CONTACT_IMPLIED",
        "NO_CONTACT_REQUIRED",
        "POLYSEMOUS_SOURCE",
        "AMBIGUOUS_DUAL",
        # extension: entry also matches with an attached pronoun suffix
        "PRONOUN_SUFFIXABLE",
    }
)

# Closed set of attached possessive pronouns (يميني، يسارها، فوقي ...).
PRONOUN_SUFFIXES = ("ي", "نا", "ك", "كما", "كم", "كن", "ه", "ها", "هما", "هم", "هن")

_SUFFIX_FLAGS = {"REQUIRES_POSSESSIVE_DISAMBIG", "PRONOUN_SUFFIXABLE"}

# PREP_LOCUTION sorts before PREP at equal covered length.
_CLASS_ORDER = {LexClass.PREP_LOCUTION: 0, LexClass.PREP: 1}


class LexiconError(ValueError):
    pass


@dataclass(frozen=True)
class LexEntry:
    lemma: str                      # normalized lemma (single spaces for locutions)
    words: tuple[str, ...]          # normalized word sequence, no clitics
    cls: LexClass
    senses: frozenset[str]          # category paths into the semantic map
    flags: frozenset[str]


@dataclass(frozen=True)
class LexMatch:
    entry: LexEntry
    length: int                     # tokens covered
    suffixed: bool = False          # matched through a pronoun-suffixed form
    via_proclitic: bool = False     # matched on a ب proclitic, not the stem


def _suffixed_variants(word: str) -> list[str]:
    # Ta marbuta surfaces as ت before a suffix: واجهة + ه -> واجهته.
    base = word[:-1] + "ت" if word.endswith("ة") else word
    return [base + s for s in PRONOUN_SUFFIXES]


class Lexicon:
    """Immutable after construction; shareable across threads."""

    def __init__(self, entries: list[LexEntry], smap: semmap.SpatialityMap | None = None):
        smap = smap or semmap.default_map()
        seen: set[tuple[str, LexClass]] = set()
        for e in entries:
            key = (e.lemma, e.cls)
            if key in seen:
                raise LexiconError(f"duplicate entry ({e.lemma}, {e.cls.value})")
            seen.add(key)
            if e.cls in (LexClass.PREP, LexClass.PREP_LOCUTION) and not e.senses:
                raise LexiconError(f"entry {e.lemma}: {e.cls.value} requires at least one sense")
            for sense in e.senses:
                if semmap.resolve(smap, sense) is None:
                    raise LexiconError(f"entry {e.lemma}: unresolved sense path {sense}")
            for flag in e.flags:
                if flag not in FLAGS:
                    raise LexiconError(f"entry {e.lemma}: unknown flag {flag}")
        self.entries = tuple(entries)
        # word sequences (including generated suffixed variants) by first word
        self._by_first: dict[str, list[tuple[tuple[str, ...], LexEntry, bool]]] = {}
        self._forms: set[str] = set()
        for e in entries:
            self._index(e.words, e, suffixed=False)
            if e.flags & _SUFFIX_FLAGS:
                for variant in _suffixed_variants(e.words[-1]):
                    self._index(e.words[:-1] + (variant,), e, suffixed=True)
        for alts in self._by_first.values():
            alts.sort(key=lambda t: (-len(t[0]), _CLASS_ORDER.get(t[1].cls, 2), t[1].lemma))

    def _index(self, words: tuple[str, ...], entry: LexEntry, suffixed: bool):
        self._by_first.setdefault(words[0], []).append((words, entry, suffixed))
        self._forms.update(words)

    def has_word(self, word: str) -> bool:
        """True when `word` is a word form of some entry (used to validate clitic splits)."""
        return word in self._forms

    def lookup(self, tokens, i: int) -> list[LexMatch]:
        """All entries whose word sequence equals the stems starting at token i.

        Ordered by covered length descending, PREP_LOCUTION before PREP on
        ties. A ب proclitic on the token also yields a one-token PREP match.
        """
        if not 0 <= i < len(tokens):
            raise IndexError(f"token index {i} out of range")
        out: list[LexMatch] = []
        for words, entry, suffixed in self._by_first.get(tokens[i].stem, ()):
            if i + len(words) > len(tokens):
                continue
            if all(tokens[i + k].stem == words[k] for k in range(1, len(words))):
                out.append(LexMatch(entry=entry, length=len(words), suffixed=suffixed))
        if any(p.kind == "preposition" and p.text == "ب" for p in tokens[i].proclitics):
            for words, entry, _ in self._by_first.get("ب", ()):
                if len(words) == 1 and entry.cls is LexClass.PREP:
                    out.append(LexMatch(entry=entry, length=1, via_proclitic=True))
        out.sort(
            key=lambda m: (-m.length, _CLASS_ORDER.get(m.entry.cls, 2), m.entry.lemma, m.via_proclitic)
        )
        return out


def _parse_line(line: str, lineno: int, source: str) -> LexEntry:
    parts = line.split("\t")
    if len(parts) < 2:
        raise LexiconError(f"{source}:{lineno}: expected `lemma<TAB>class[<TAB>senses[<TAB>flags]]`")
    raw_lemma = parts[0].strip()
    if not raw_lemma:
        raise LexiconError(f"{source}:{lineno}: empty lemma")
    try:
        cls = LexClass(parts[1].strip())
    except ValueError:
        raise LexiconError(f"{source}:{lineno}: unknown class {parts[1].strip()!r}") from None
    senses = frozenset(
        s.strip() for s in (parts[2].split(";") if len(parts) > 2 and parts[2].strip() else []) if s.strip()
    )
    flags = frozenset(
        f.strip() for f in (parts[3].split(",") if len(parts) > 3 and parts[3].strip() else []) if f.strip()
    )
    words = tuple(normalize(w)[0] for w in raw_lemma.split(" ") if w)
    return LexEntry(lemma=" ".join(words), words=words, cls=cls, senses=senses, flags=flags)


def load(path, smap: semmap.SpatialityMap | None = None) -> Lexicon:
    """Load and validate a lexicon TSV; raises LexiconError with line numbers."""
    entries: list[LexEntry] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            entries.append(_parse_line(line, lineno, str(path)))
    try:
        return Lexicon(entries, smap)
    except LexiconError as exc:
        raise LexiconError(f"{path}: {exc}") from None


def seed_lexicon(smap: semmap.SpatialityMap | None = None) -> Lexicon:
    """The shipped baseline lexicon."""
    return load(seed_lexicon_path(), smap)


def seed_lexicon_path():
    return resources.files("makan").joinpath("resources/lexicon.tsv")
