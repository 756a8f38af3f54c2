import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from makan.engine import GrammarError, apply, compile
from makan.lexicon import Lexicon, _parse_line
from makan.semmap import default_map
from makan.textnorm import tokenize
from oracle import as_tuples, oracle_apply

SMAP = default_map()


def _lexicon(tsv: str) -> Lexicon:
    entries = [
        _parse_line(line, i, "<test>")
        for i, line in enumerate(tsv.strip().splitlines(), start=1)
        if line.strip() and not line.startswith("#")
    ]
    return Lexicon(entries, SMAP)


GOAL_LEX = _lexicon(
    """
اتجهت	VERB_MOTION
نحو	PREP	DIRECTIONAL.GOAL
بلدة مرسى	NOUN_SITE
"""
)

GOAL_RULE = "RULE dir_goal PRIO 40: (verb=[VERB_MOTION])? trigger=[SENSE DIRECTIONAL.GOAL] site=[NOUN_SITE|PLACE_NAME] => DIRECTIONAL.GOAL"


def test_compile_single_rule():
    grammar = compile(GOAL_RULE, GOAL_LEX, SMAP)
    assert len(grammar) == 1
    rule = grammar.rules[0]
    assert rule.name == "dir_goal"
    assert rule.priority == 40
    assert rule.output == "DIRECTIONAL.GOAL"
    assert len(rule.atoms) == 3
    assert rule.atoms[0].optional and rule.atoms[0].capture == "verb"


def test_compile_empty_source_is_valid():
    grammar = compile("# nothing\n\n", GOAL_LEX, SMAP)
    assert len(grammar) == 0
    assert apply(grammar, tokenize("نحو", GOAL_LEX), GOAL_LEX) == []


def test_compile_rejects_two_trigger_captures():
    src = "RULE bad PRIO 1: trigger=[PREP] trigger=[NOUN_SITE] => DIRECTIONAL.GOAL"
    with pytest.raises(GrammarError, match="exactly one trigger"):
        compile(src, GOAL_LEX, SMAP)


def test_compile_rejects_missing_trigger():
    src = "RULE bad PRIO 1: site=[NOUN_SITE] => DIRECTIONAL.GOAL"
    with pytest.raises(GrammarError, match="exactly one trigger"):
        compile(src, GOAL_LEX, SMAP)


def test_compile_rejects_unknown_class():
    src = "RULE bad PRIO 1: trigger=[NOUN_PLACE] => DIRECTIONAL.GOAL"
    with pytest.raises(GrammarError, match="unknown test"):
        compile(src, GOAL_LEX, SMAP)


def test_compile_rejects_unknown_flag():
    src = "RULE bad PRIO 1: trigger=[FLAG SHINY] => DIRECTIONAL.GOAL"
    with pytest.raises(GrammarError, match="SHINY"):
        compile(src, GOAL_LEX, SMAP)


def test_compile_rejects_unresolved_paths():
    with pytest.raises(GrammarError, match="TEMPORAL.NOW"):
        compile("RULE bad PRIO 1: trigger=[SENSE TEMPORAL.NOW] => DIRECTIONAL.GOAL", GOAL_LEX, SMAP)
    with pytest.raises(GrammarError, match="DIRECTIONAL.UP"):
        compile("RULE bad PRIO 1: trigger=[PREP] => DIRECTIONAL.UP", GOAL_LEX, SMAP)


def test_compile_rejects_duplicate_rule_names():
    src = "RULE r PRIO 1: trigger=[PREP] => DIRECTIONAL.GOAL\nRULE r PRIO 2: trigger=[PREP] => DIRECTIONAL.GOAL"
    with pytest.raises(GrammarError, match="duplicate"):
        compile(src, GOAL_LEX, SMAP)


def test_compile_rejects_oversized_gap():
    src = "RULE r PRIO 1: trigger=[PREP] GAP 9 site=[NOUN_SITE] => DIRECTIONAL.GOAL"
    with pytest.raises(GrammarError, match="GAP"):
        compile(src, GOAL_LEX, SMAP)


def test_compile_error_carries_location():
    src = "# comment\nRULE r PRIO x: trigger=[PREP] => DIRECTIONAL.GOAL"
    with pytest.raises(GrammarError, match="line 2"):
        compile(src, GOAL_LEX, SMAP)


def test_compile_rejects_stray_character():
    src = "RULE r PRIO 1: (trigger=[PREP] ) => DIRECTIONAL.GOAL"
    with pytest.raises(GrammarError, match="unexpected character"):
        compile(src, GOAL_LEX, SMAP)


def test_compile_rejects_truncated_rule():
    with pytest.raises(GrammarError, match="unexpected end"):
        compile("RULE r PRIO 1: trigger=[PREP", GOAL_LEX, SMAP)
    with pytest.raises(GrammarError, match="missing"):
        compile("RULE r PRIO 1: trigger=[PREP]", GOAL_LEX, SMAP)


def test_compile_rejects_unknown_capture_name():
    src = "RULE r PRIO 1: head=[PREP] trigger=[PREP] => DIRECTIONAL.GOAL"
    with pytest.raises(GrammarError, match="head"):
        compile(src, GOAL_LEX, SMAP)


def test_apply_goal_example():
    grammar = compile(GOAL_RULE, GOAL_LEX, SMAP)
    tokens = tokenize("اتجهت نحو بلدة مرسى", GOAL_LEX)
    matches = apply(grammar, tokens, GOAL_LEX)
    assert len(matches) == 1
    m = matches[0]
    assert m.rule == "dir_goal"
    assert m.captures["verb"] == (0, 1)
    assert m.captures["trigger"] == (1, 2)
    assert m.captures["site"] == (2, 4)  # the multiword site covers two tokens
    assert m.span == (0, 4)


def test_apply_empty_token_list():
    grammar = compile(GOAL_RULE, GOAL_LEX, SMAP)
    assert apply(grammar, [], GOAL_LEX) == []


def test_bareword_literal_atom():
    src = "RULE bare PRIO 5: trigger=[PREP] مرسى => DIRECTIONAL.GOAL"
    grammar = compile(src, GOAL_LEX, SMAP)
    tokens = tokenize("نحو مرسى", GOAL_LEX)
    matches = apply(grammar, tokens, GOAL_LEX)
    assert len(matches) == 1 and matches[0].span == (0, 2)
    # the bareword is normalized at compile time, so it matches folded text
    assert apply(grammar, tokenize("نحو مرسي", GOAL_LEX), GOAL_LEX)


def test_apply_is_deterministic():
    grammar = compile(GOAL_RULE, GOAL_LEX, SMAP)
    tokens = tokenize("اتجهت نحو بلدة مرسى", GOAL_LEX)
    assert apply(grammar, tokens, GOAL_LEX) == apply(grammar, tokens, GOAL_LEX)


LL_LEX = _lexicon(
    """
اب	PREP	DIRECTIONAL.GOAL
جد	NOUN_SITE
هو	PLACE_NAME
"""
)

LL_RULES = """
RULE long PRIO 10: trigger=[PREP] [NOUN_SITE] [PLACE_NAME] => DIRECTIONAL.GOAL
RULE short PRIO 10: trigger=[PREP] [NOUN_SITE] => DIRECTIONAL.SOURCE
"""


def test_equal_priority_longer_match_wins():
    grammar = compile(LL_RULES, LL_LEX, SMAP)
    tokens = tokenize("اب جد هو", LL_LEX)
    matches = apply(grammar, tokens, LL_LEX)
    assert [m.rule for m in matches] == ["long"]
    # against the brute-force enumeration as well
    assert as_tuples(matches) == oracle_apply(grammar, tokens, LL_LEX)


def test_one_winner_per_start_and_no_dangling_captures(bundle, suite_gold):
    smap, lex, grammar, variants = bundle
    for doc in suite_gold:
        tokens = tokenize(doc.text, lex, variants)
        matches = apply(grammar, tokens, lex)
        starts = [m.span[0] for m in matches]
        assert len(starts) == len(set(starts))
        for m in matches:
            for cap_start, cap_end in m.captures.values():
                assert 0 <= cap_start < cap_end <= len(tokens)
                assert m.span[0] <= cap_start and cap_end <= m.span[1]
        trigger_ends = [m.captures["trigger"][1] for m in matches]
        assert trigger_ends == sorted(trigger_ends)


# -- brute-force comparison on a small but adversarial grammar ---------------

BF_LEX = _lexicon(
    """
alpha	VERB_MOTION
beta	PREP	TOPOLOGICAL.SUPPORT;DIRECTIONAL.GOAL
gamma	NOUN_SITE		CONTACT_IMPLIED
delta	PREP	TOPOLOGICAL.SUPPORT
delta gamma	PREP_LOCUTION	TOPOLOGICAL.PERIPHERY
epsilon	PLACE_NAME
"""
)

BF_RULES = """
RULE periph PRIO 50: trigger=[SENSE TOPOLOGICAL.PERIPHERY] site=[NOUN_SITE|PLACE_NAME] => TOPOLOGICAL.PERIPHERY
RULE support PRIO 40: trigger=[SENSE TOPOLOGICAL.SUPPORT] site=[NOUN_SITE|PLACE_NAME] => TOPOLOGICAL.SUPPORT
RULE goal PRIO 40: verb=[VERB_MOTION] GAP 2 trigger=[SENSE DIRECTIONAL.GOAL] site=[NOUN_SITE|PLACE_NAME] => DIRECTIONAL.GOAL
RULE flagged PRIO 40: trigger=[LIT delta] ([LIT epsilon])? site=[FLAG CONTACT_IMPLIED] => TOPOLOGICAL.SUPPORT
RULE prep PRIO 20: trigger=[PREP] => DIRECTIONAL.GOAL
"""

BF_ALPHABET = ("alpha", "beta", "gamma", "delta", "epsilon")


def test_brute_force_equivalence_sampled():
    grammar = compile(BF_RULES, BF_LEX, SMAP)
    for length in range(0, 5):
        for seq in itertools.product(BF_ALPHABET, repeat=length):
            tokens = tokenize(" ".join(seq), BF_LEX)
            assert as_tuples(apply(grammar, tokens, BF_LEX)) == oracle_apply(
                grammar, tokens, BF_LEX
            ), seq


# words covering triggers, locution parts, sites, verbs, demonstratives,
# suffixed forms, proclitic clusters and out-of-vocabulary noise
_POOL = (
    "على فوق تحت في داخل حيث عند بين وسط من إلى عن نحو أمام وراء قرب "
    "اتجاه قلب ضفة صدر محيط جانب محاذاة يمين يساري فوقي نحوي مقدمة "
    "المقعد مدينة شقة باب المشيعين ساعة الغروب بحر باريس شمال بالطائرة "
    "وعن هذا هذه اتجهت عاد غادر يأتي لم لا ما كلام أشياء ذراعي واجهته"
).split()


@settings(max_examples=300, deadline=None)
@given(st.lists(st.sampled_from(_POOL), max_size=8))
def test_shipped_grammar_equals_oracle_on_random_sequences(bundle, words):
    smap, lex, grammar, variants = bundle
    tokens = tokenize(" ".join(words), lex, variants)
    assert as_tuples(apply(grammar, tokens, lex)) == oracle_apply(grammar, tokens, lex)
