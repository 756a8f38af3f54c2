"""Shipped rule pack: source accessor, annotation attributes, resource loading."""

from __future__ import annotations

from importlib import resources

from . import engine, lexicon as lexicon_mod, semmap
from .textnorm import load_variant_table, normalize

# Attributes attached by rule name.
RULE_ATTRIBUTES: dict[str, dict] = {
    "dir_medium": {"medium": True},
}

# Attributes attached by (normalized) trigger lemma: face-to-face triggers
# invert left and right between target and site.
_MIRROR_LEMMAS = tuple(normalize(w)[0] for w in ("قبالة", "مقابل"))
TRIGGER_ATTRIBUTES: dict[str, dict] = {lemma: {"orientation": "mirror"} for lemma in _MIRROR_LEMMAS}


def rule_pack_path():
    return resources.files("makan").joinpath("resources/spatial.rules")


def variants_path():
    return resources.files("makan").joinpath("resources/variants.tsv")


def suite_dir():
    return resources.files("makan").joinpath("resources/suite")


def rule_pack() -> str:
    """The shipped rule DSL source."""
    return rule_pack_path().read_text(encoding="utf-8")


def attributes_for(rule_name: str, trigger_lemma: str | None) -> dict:
    attrs = dict(RULE_ATTRIBUTES.get(rule_name, {}))
    if trigger_lemma is not None:
        attrs.update(TRIGGER_ATTRIBUTES.get(trigger_lemma, {}))
    return attrs


def load_default_resources():
    """(semantic map, seed lexicon, compiled rule pack, variant table)."""
    smap = semmap.default_map()
    lex = lexicon_mod.seed_lexicon(smap)
    grammar = engine.compile(rule_pack(), lex, smap)
    variants = load_variant_table(variants_path())
    return smap, lex, grammar, variants
