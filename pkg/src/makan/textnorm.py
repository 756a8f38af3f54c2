"""Arabic text normalization and tokenization with exact original-text offsets.

All spans index Unicode scalar values of the ORIGINAL text, so standoff
annotations stay valid regardless of how the text is later re-encoded.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

# Diacritics (تشكيل: tanween, harakat, shadda, sukun, combining hamza/madda,
# dagger alef) and tatweel (تطويل) are dropped before matching.
_REMOVED = frozenset(
    "ًٌٍَُِّْ"
    "ٰٕٓٔـ"
)

# Hamza-carrying alef variants (أ/إ/آ) fold to bare alef, alef maqsura (ى)
# folds to ya. Ta marbuta (ة) is deliberately preserved.
_FOLD = {
    "أ": "ا",  # أ
    "إ": "ا",  # إ
    "آ": "ا",  # آ
    "ى": "ي",  # ى
}

# A token is a maximal run of Arabic letters, Latin letters or digits;
# everything else (whitespace, punctuation, quotes) separates.
_WORD_RE = re.compile(r"[ء-يA-Za-z0-9]+")

COORD_PROCLITICS = ("و", "ف")
PREP_PROCLITICS = ("ب", "ل", "ك")
ARTICLE = "ال"


@dataclass(frozen=True)
class OffsetSpan:
    """Half-open [start, end) span of Unicode scalar indices into the original text."""

    start: int
    end: int

    def __post_init__(self):
        if self.start < 0 or self.end <= self.start:
            raise ValueError(f"invalid span [{self.start}, {self.end})")

    def slice(self, text: str) -> str:
        return text[self.start : self.end]

    def overlaps(self, other: "OffsetSpan") -> bool:
        return self.start < other.end and other.start < self.end


@dataclass(frozen=True)
class Proclitic:
    span: OffsetSpan
    kind: str  # coordination | preposition | article
    text: str  # normalized form


@dataclass(frozen=True)
class Token:
    span: OffsetSpan          # whole word in the original text
    surface: str              # original substring, diacritics and all
    norm: str                 # normalized form of the whole word
    proclitics: tuple[Proclitic, ...]
    stem_span: OffsetSpan     # residue after proclitic detachment
    stem: str                 # normalized residue


def normalize(text: str, variants: dict[str, str] | None = None) -> tuple[str, list[int]]:
    """Normalize text and return (normalized, offset map).

    The offset map has one entry per output character giving the index of the
    original character it came from; it is total over output indices.
    """
    out: list[str] = []
    omap: list[int] = []
    for i, ch in enumerate(text):
        if ch in _REMOVED:
            continue
        out.append(_FOLD.get(ch, ch))
        omap.append(i)
    norm = "".join(out)
    if variants:
        norm, omap = _apply_variants(norm, omap, variants)
    return norm, omap


def _apply_variants(norm: str, omap: list[int], variants: dict[str, str]) -> tuple[str, list[int]]:
    # Whole-word replacement only: transliteration variants are listed as
    # standalone words in the variant table.
    out: list[str] = []
    nmap: list[int] = []
    last = 0
    for m in _WORD_RE.finditer(norm):
        repl = variants.get(m.group())
        if repl is None:
            continue
        out.append(norm[last : m.start()])
        nmap.extend(omap[last : m.start()])
        wlen = m.end() - m.start()
        for j, ch in enumerate(repl):
            if j == len(repl) - 1:
                src = m.end() - 1  # keep the span end on the last original char
            else:
                src = m.start() + min(j, wlen - 1)
            out.append(ch)
            nmap.append(omap[src])
        last = m.end()
    out.append(norm[last:])
    nmap.extend(omap[last:])
    return "".join(out), nmap


def load_variant_table(path) -> dict[str, str]:
    """Load a TSV variant table: `variant<TAB>canonical`, `#` comments.

    Both columns are normalized on load; a canonical form may not itself be
    listed as a variant (the table must be idempotent).
    """
    table: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise ValueError(f"{path}:{lineno}: expected `variant<TAB>canonical`")
            variant, _ = normalize(parts[0])
            canonical, _ = normalize(parts[1])
            table[variant] = canonical
    for canonical in table.values():
        if canonical in table:
            raise ValueError(f"variant table is not idempotent: {canonical!r} is also a variant")
    return table


def _in_lexicon(lexicon, word: str) -> bool:
    return lexicon is not None and lexicon.has_word(word)


def _split_clitics(word: str, lexicon) -> tuple[list[tuple[str, int, int]], int]:
    """Split a normalized word into proclitic cuts and a stem start.

    Returns ([(kind, start, end)], stem_start), offsets relative to the word.
    Detachment is greedy (coordination, then preposition, then article) and
    lexicon-validated: a word known to the lexicon is never segmented, and
    ب/ل/ك come off only when the residue is lexical or carries the article.
    """
    cuts: list[tuple[str, int, int]] = []
    if len(word) < 2 or _in_lexicon(lexicon, word):
        return cuts, 0
    pos = 0
    rest = word
    if rest[0] in COORD_PROCLITICS and (len(rest[1:]) >= 2 or _in_lexicon(lexicon, rest[1:])):
        cuts.append(("coordination", pos, pos + 1))
        pos += 1
        rest = rest[1:]
        if _in_lexicon(lexicon, rest):
            return cuts, pos
    if rest and rest[0] in PREP_PROCLITICS:
        residue = rest[1:]
        if _in_lexicon(lexicon, residue) or (residue.startswith(ARTICLE) and len(residue) >= 4):
            cuts.append(("preposition", pos, pos + 1))
            pos += 1
            rest = residue
            if _in_lexicon(lexicon, rest):
                return cuts, pos
    if rest.startswith(ARTICLE) and len(rest) >= 4:
        cuts.append(("article", pos, pos + 2))
        pos += 2
    return cuts, pos


def tokenize(text: str, lexicon=None, variants: dict[str, str] | None = None) -> list[Token]:
    """Segment text into tokens with clitic decomposition.

    Proclitic spans and the stem span partition each token span left to
    right; unsegmentable words become single-stem tokens.
    """
    norm, omap = normalize(text, variants)
    tokens: list[Token] = []
    for wmatch in _WORD_RE.finditer(norm):
        word = wmatch.group()
        a = wmatch.start()
        n = len(word)
        cuts, stem_start = _split_clitics(word, lexicon)

        def bound(rel: int) -> int:
            # Partition boundary in the original text for a cut at `rel`.
            if rel >= n:
                return omap[a + n - 1] + 1
            return omap[a + rel]

        proclitics = []
        for kind, cs, ce in cuts:
            proclitics.append(
                Proclitic(span=OffsetSpan(bound(cs), bound(ce)), kind=kind, text=word[cs:ce])
            )
        span = OffsetSpan(bound(0), bound(n))
        tokens.append(
            Token(
                span=span,
                surface=text[span.start : span.end],
                norm=word,
                proclitics=tuple(proclitics),
                stem_span=OffsetSpan(bound(stem_start), bound(n)),
                stem=word[stem_start:],
            )
        )
    return tokens
