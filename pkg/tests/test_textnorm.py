import random
import unicodedata

import pytest

from parafilter.textnorm import (detokenize, has_terminal_punctuation,
                                 normalize, tokenize)


class TestNormalize:
    def test_whitespace_collapse(self):
        assert normalize("  ক   খ ") == "ক খ"

    def test_idempotent_on_normalized_text(self):
        text = "ক খ গ"
        assert normalize(text) == text

    def test_zero_width_removed(self):
        assert normalize("ক​খ﻿") == "কখ"

    def test_composition_matches_reference_nfc(self):
        # decomposed Bangla O-sign (e + aa) composes to U+09CB
        decomposed = "কো"
        precomposed = "কো"
        assert normalize(decomposed) == normalize(precomposed)
        assert normalize(decomposed) == precomposed

    def test_random_strings_match_reference_normalizer(self):
        rng = random.Random(11)
        pool = "কখোো aeK. ​‍"
        for _ in range(300):
            s = "".join(rng.choice(pool) for _ in range(rng.randint(0, 20)))
            out = normalize(s)
            assert out == normalize(out)
            stripped = "".join(
                ch for ch in s
                if ch not in "​‌‍⁠﻿")
            expected = " ".join(
                unicodedata.normalize("NFC", stripped).split())
            assert out == expected


class TestTokenize:
    def test_danda_detached(self):
        assert tokenize("আমি যাই।").tokens \
            == ("আমি", "যাই", "।")

    def test_empty(self):
        ts = tokenize("")
        assert ts.tokens == ()
        assert len(ts) == 0

    def test_quotes_and_interior_punctuation(self):
        assert tokenize('"ab!" cd 3.5').tokens \
            == ('"', "ab", "!", '"', "cd", "3", ".", "5")

    def test_token_counts_match_character_class_scan(self):
        # oracle: walk characters, counting maximal runs of non-space,
        # non-punctuation characters plus individual punctuation marks
        punct = set("।?!.,;:\"'“”‘’()")
        rng = random.Random(7)
        pool = "কখগab .,!?।()\""
        for _ in range(300):
            s = normalize("".join(rng.choice(pool)
                                  for _ in range(rng.randint(0, 30))))
            expected = 0
            in_word = False
            for ch in s:
                if ch == " ":
                    in_word = False
                elif ch in punct:
                    expected += 1
                    in_word = False
                else:
                    if not in_word:
                        expected += 1
                    in_word = True
            assert len(tokenize(s)) == expected, s

    def test_idempotence_under_space_join(self):
        rng = random.Random(3)
        pool = "কখab .!।\"()"
        for _ in range(200):
            s = "".join(rng.choice(pool) for _ in range(rng.randint(0, 25)))
            toks = tokenize(s).tokens
            assert tokenize(" ".join(toks)).tokens == toks

    def test_tokenize_normalize_commutes(self):
        rng = random.Random(5)
        pool = "কোো a.।​  "
        for _ in range(200):
            s = "".join(rng.choice(pool) for _ in range(rng.randint(0, 25)))
            assert tokenize(normalize(s)).tokens == tokenize(s).tokens

    def test_tokenseq_is_a_sequence(self):
        ts = tokenize("ক খ।")
        assert list(ts) == ["ক", "খ", "।"]
        assert ts[0] == "ক"
        assert ts.source_text == "ক খ।"


class TestTerminalPunctuation:
    @pytest.mark.parametrize("text,expected", [
        ("সে এল।", True),
        ("সে এল", False),
        ("done.", True),
        ("really?", True),
        ("now!", True),
        ("trailing spaces.   ", True),
        ("", False),
        ("   ", False),
        ("।", True),
    ])
    def test_basic(self, text, expected):
        assert has_terminal_punctuation(text) is expected

    def test_terminal_before_closing_quote(self):
        assert has_terminal_punctuation('সে বলল, "যাও!"')

    def test_enumerated_punctuation_positions(self):
        # oracle: place each terminal/non-terminal mark before every
        # combination of trailing quotes and whitespace
        for mark, terminal in [("।", True), ("?", True), ("!", True),
                               (".", True), (",", False), (";", False),
                               ("x", False)]:
            for tail in ["", '"', "”", ' " ', "  ", '’ ']:
                text = "কখ" + mark + tail
                assert has_terminal_punctuation(text) is terminal, repr(text)

    def test_invariant_under_trailing_whitespace(self):
        for text in ["ক।", "ক", "ক!", ""]:
            base = has_terminal_punctuation(text)
            assert has_terminal_punctuation(text + "   \t\n") is base


class TestDetokenize:
    def test_reattaches_danda(self):
        assert detokenize(["আমি", "যাই", "।"]) \
            == "আমি যাই।"

    def test_round_trip_through_tokenize(self):
        text = "ক খ, গ।"
        assert detokenize(tokenize(text).tokens) == text
