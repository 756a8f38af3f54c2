from importlib import resources

import pytest

from makan import annotate, load_default_resources, read_annotations


@pytest.fixture(scope="session")
def bundle():
    """(semantic map, seed lexicon, compiled rule pack, variant table)."""
    return load_default_resources()


@pytest.fixture(scope="session")
def suite_gold(bundle):
    smap = bundle[0]
    suite = resources.files("makan").joinpath("resources/suite")
    docs = [read_annotations(p, smap) for p in sorted(suite.iterdir(), key=lambda p: p.name)]
    assert docs, "shipped suite is missing"
    return docs


@pytest.fixture(scope="session")
def suite_system(bundle, suite_gold):
    smap, lex, grammar, variants = bundle
    return [
        annotate(d.text, lex, grammar, smap, variants=variants, doc_id=d.doc_id)
        for d in suite_gold
    ]


@pytest.fixture(scope="session")
def run(bundle):
    smap, lex, grammar, variants = bundle

    def _run(text):
        return annotate(text, lex, grammar, smap, variants=variants, doc_id="t")

    return _run
