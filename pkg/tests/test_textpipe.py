import pytest
from hypothesis import given
from hypothesis import strategies as st

from storynets import textpipe
from storynets.errors import InputFormatError
from storynets.textpipe import (
    Story,
    Token,
    default_pronouns,
    default_stoplist,
    levenshtein,
    match_prompts,
    read_conllu,
    segment_sentences,
    tokenize_and_lemmatize,
    write_conllu,
)

from conftest import DEMO_STORY_TEXT, make_sentence


class TestSegmentSentences:
    def test_empty(self):
        assert segment_sentences("") == []

    def test_two_terminals(self):
        assert segment_sentences("A cat. A dog!") == ["A cat.", "A dog!"]

    def test_demo_story_has_five_sentences(self):
        assert len(segment_sentences(DEMO_STORY_TEXT)) == 5

    def test_abbreviation_is_not_a_boundary(self):
        assert segment_sentences("Dr. Smith left. He ran.") == ["Dr. Smith left.", "He ran."]

    def test_decimal_number_is_not_a_boundary(self):
        assert segment_sentences("It was 3.14 wide. Nice.") == ["It was 3.14 wide.", "Nice."]

    def test_period_before_lowercase_is_not_a_boundary(self):
        assert segment_sentences("see fig. 2 and fig. 3 here. Good.") == [
            "see fig. 2 and fig. 3 here.",
            "Good.",
        ]

    def test_question_and_exclamation(self):
        assert segment_sentences("Why? Stop! now") == ["Why?", "Stop!", "now"]

    def test_trailing_text_without_terminator(self):
        assert segment_sentences("One! and then some") == ["One!", "and then some"]

    def test_coverage_of_input(self):
        text = "Alpha beta. Gamma delta! Epsilon?"
        joined = "".join(segment_sentences(text))
        assert joined.replace(" ", "") == text.replace(" ", "")


class TestTokenize:
    def test_lemma_table_applied(self):
        toks = tokenize_and_lemmatize(
            "The children played",
            {"children": "child", "played": "play"},
            {"the"},
            set(),
            keep_pronouns=False,
        )
        assert [t.lemma for t in toks] == ["child", "play"]

    def test_pronouns_bypass_stoplist(self):
        toks = tokenize_and_lemmatize(
            "I like it", {}, {"i", "it"}, {"i", "it"}, keep_pronouns=True
        )
        assert [t.lemma for t in toks] == ["i", "like", "it"]
        assert toks[0].is_pronoun and toks[0].is_stop

    def test_pronouns_dropped_without_keep(self):
        toks = tokenize_and_lemmatize(
            "I like it", {}, {"i", "it"}, {"i", "it"}, keep_pronouns=False
        )
        assert [t.lemma for t in toks] == ["like"]

    def test_non_alphabetic_removed(self):
        assert tokenize_and_lemmatize("12 %% !!", {}, set(), set(), False) == []

    def test_lowercasing_fallback(self):
        toks = tokenize_and_lemmatize("Many WORDS", {}, set(), set(), False)
        assert [t.lemma for t in toks] == ["many", "words"]

    def test_token_indices_are_positions_in_filtered_stream(self):
        toks = tokenize_and_lemmatize("the big cat", {}, {"the"}, set(), False)
        assert [(t.lemma, t.token_index) for t in toks] == [("big", 0), ("cat", 1)]

    @given(st.text(alphabet=st.characters(codec="ascii"), max_size=80))
    def test_idempotent_on_filtered_stream(self, text):
        stoplist = default_stoplist()
        pronouns = default_pronouns()
        table = {"children": "child"}
        first = tokenize_and_lemmatize(text, table, stoplist, pronouns, True)
        again = tokenize_and_lemmatize(
            " ".join(t.lemma for t in first), table, stoplist, pronouns, True
        )
        assert [t.lemma for t in again] == [t.lemma for t in first]

    @given(st.lists(st.sampled_from("i it cat dog the very happy my".split()), max_size=12))
    def test_keep_pronouns_yields_supersequence(self, words):
        stoplist = default_stoplist()
        pronouns = default_pronouns()
        text = " ".join(words)
        with_p = [t.lemma for t in tokenize_and_lemmatize(text, {}, stoplist, pronouns, True)]
        without = [t.lemma for t in tokenize_and_lemmatize(text, {}, stoplist, pronouns, False)]
        it = iter(with_p)
        assert all(any(w == x for x in it) for w in without)  # subsequence check


class TestTokenInvariants:
    def test_lemma_must_be_lowercase(self):
        with pytest.raises(ValueError):
            Token("X", "X", "NOUN", 0, 0)

    def test_head_cannot_be_self(self):
        with pytest.raises(ValueError):
            Token("x", "x", "NOUN", 0, 1, head_index=1)


LUCY_CONLLU = """\
# story_id = lucy
1\tLucy\tLucy\tPROPN\t_\t_\t2\tnsubj\t_\t_
2\tloves\tlove\tVERB\t_\t_\t0\troot\t_\t_
3\thiking\thiking\tNOUN\t_\t_\t2\tobj\t_\t_
"""

TWO_STORY_CONLLU = """\
# story_id = s1
1\tBirds\tbird\tNOUN\t_\t_\t2\tnsubj\t_\t_
2\tsing\tsing\tVERB\t_\t_\t0\troot\t_\t_

# story_id = s1
1\tCats\tcat\tNOUN\t_\t_\t2\tnsubj\t_\t_
2\tsleep\tsleep\tVERB\t_\t_\t0\troot\t_\t_

# story_id = s2
1\tDogs\tdog\tNOUN\t_\t_\t2\tnsubj\t_\t_
2\tbark\tbark\tVERB\t_\t_\t0\troot\t_\t_
"""


class TestReadConllu:
    def test_empty_file(self):
        assert read_conllu("") == {}

    def test_lucy_heads(self):
        parsed = read_conllu(LUCY_CONLLU)
        (sent,) = parsed["lucy"]
        assert [t.lemma for t in sent] == ["lucy", "love", "hiking"]
        assert sent[0].head_index == 1
        assert sent[1].head_index is None  # root
        assert sent[2].head_index == 1
        assert sent[1].deprel == "root"
        assert sent[0].upos == "PROPN"

    def test_two_story_file_block_counts(self):
        # independent count: sentence blocks are the blank-line separated
        # chunks that contain token rows
        blocks = [b for b in TWO_STORY_CONLLU.split("\n\n") if b.strip()]
        counts = {}
        for block in blocks:
            sid = next(
                line.split("=", 1)[1].strip()
                for line in block.splitlines()
                if line.startswith("# story_id")
            )
            counts[sid] = counts.get(sid, 0) + 1
        parsed = read_conllu(TWO_STORY_CONLLU)
        assert len(parsed) == 2
        assert {sid: len(sents) for sid, sents in parsed.items()} == counts

    def test_multiword_ranges_and_empty_nodes_skipped(self):
        data = (
            "# story_id = s\n"
            "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n"
            "1\tdo\tdo\tAUX\t_\t_\t3\taux\t_\t_\n"
            "2\tnot\tnot\tPART\t_\t_\t3\tadvmod\t_\t_\n"
            "2.1\tghost\tghost\tNOUN\t_\t_\t_\t_\t_\t_\n"
            "3\tgo\tgo\tVERB\t_\t_\t0\troot\t_\t_\n"
        )
        parsed = read_conllu(data)
        (sent,) = parsed["s"]
        assert [t.surface for t in sent] == ["do", "not", "go"]
        assert sent[0].head_index == 2

    def test_malformed_column_count_names_line(self):
        data = "# story_id = s\n1\tword\tword\n"
        with pytest.raises(InputFormatError, match="line 2"):
            read_conllu(data)

    def test_missing_story_id_is_an_error(self):
        data = "1\tword\tword\tNOUN\t_\t_\t0\troot\t_\t_\n"
        with pytest.raises(InputFormatError, match="story_id"):
            read_conllu(data)

    def test_head_outside_sentence_is_an_error(self):
        data = "# story_id = s\n1\tword\tword\tNOUN\t_\t_\t9\tdep\t_\t_\n"
        with pytest.raises(InputFormatError, match="HEAD"):
            read_conllu(data)

    def test_roundtrip_through_writer(self):
        parsed = read_conllu(TWO_STORY_CONLLU)
        again = read_conllu(write_conllu(parsed))
        assert set(again) == set(parsed)
        for sid in parsed:
            for s1, s2 in zip(parsed[sid], again[sid]):
                for t1, t2 in zip(s1, s2):
                    assert (t1.lemma, t1.upos, t1.head_index, t1.deprel) == (
                        t2.lemma,
                        t2.upos,
                        t2.head_index,
                        t2.deprel,
                    )


class TestStory:
    def test_mean_rating_computed(self):
        story = Story("s", ("a", "b", "c"), "text", (), {"r1": 2, "r2": 3})
        assert story.mean_rating == pytest.approx(2.5, abs=1e-12)

    def test_rating_range_enforced(self):
        with pytest.raises(ValueError):
            Story("s", ("a", "b", "c"), "", (), {"r1": 6})

    def test_exactly_three_prompts(self):
        with pytest.raises(ValueError):
            Story("s", ("a", "b"), "", (), {"r1": 3})

    def test_json_roundtrip(self, demo_story):
        again = textpipe.story_from_json(textpipe.story_to_json(demo_story))
        assert again == demo_story


class TestLevenshtein:
    def test_hand_values(self):
        assert levenshtein("sing", "song") == 1
        assert levenshtein("pump", "pumps") == 1
        assert levenshtein("exist", "exits") == 2
        assert levenshtein("", "abc") == 3
        assert levenshtein("kitten", "sitting") == 3


def _story_from_words(words, prompts):
    return Story(
        id="s",
        prompt_lemmas=prompts,
        text=" ".join(words),
        sentences=(make_sentence(words),),
        ratings={"r": 3},
    )


class TestMatchPrompts:
    def test_demo_story_prompts_all_match(self, demo_story):
        matches = match_prompts(demo_story)
        assert all(m.matched for m in matches)
        assert [m.matched_node for m in matches] == ["gloom", "payment", "exist"]

    def test_distance_two_is_unmatched(self):
        story = _story_from_words(["exits", "everywhere"], ("exist", "exits", "everywhere"))
        matches = match_prompts(story)
        # "exist" vs "exits" needs two edits, so only the exact prompts match
        assert [m.matched for m in matches] == [False, True, True]

    def test_distance_one_surface_variant_matches(self):
        story = _story_from_words(["pumps", "hiss"], ("pump", "hiss", "hiss"))
        match = match_prompts(story)[0]
        assert match.matched and match.matched_node == "pumps"

    def test_first_matching_token_wins(self):
        story = _story_from_words(["gleam", "gloom"], ("gloom", "gleam", "gleam"))
        assert match_prompts(story)[0].matched_node == "gloom"
