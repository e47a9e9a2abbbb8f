"""Unicode normalization, tokenization, and terminal-punctuation checks.

Every metric and filter in this package operates on the token sequences
produced here, so the rules are small, total, and deterministic:

* ``normalize`` removes zero-width characters, applies canonical
  composition (NFC), and collapses whitespace runs to single spaces.
* ``tokenize`` splits on whitespace and detaches clause punctuation
  (danda, ``? ! . , ; :``, quotes, parentheses) into separate tokens.
  Word-level only: no stemming, no subword units.
* ``has_terminal_punctuation`` reports whether the last non-whitespace,
  non-closing-quote character is a sentence ender (danda, ``?``, ``!``,
  or ``.``).

Both ``normalize`` and ``tokenize`` are idempotent, and re-tokenizing
the space-joined token list reproduces the same tokens.
"""

from __future__ import annotations

import unicodedata
from collections.abc import Sequence
from dataclasses import dataclass

DANDA = "।"

#: Sentence-final marks recognized by ``has_terminal_punctuation``.
TERMINAL_PUNCTUATION = frozenset({DANDA, "?", "!", "."})

#: Quote characters skipped when looking for a trailing sentence ender.
CLOSING_QUOTES = frozenset({'"', "'", "”", "’"})

#: Characters the tokenizer detaches from word edges.
CLAUSE_PUNCTUATION = frozenset(
    {DANDA, "?", "!", ".", ",", ";", ":",
     '"', "'", "“", "”", "‘", "’", "(", ")"}
)

_ZERO_WIDTH = ("​", "‌", "‍", "⁠", "﻿")


def normalize(text: str) -> str:
    """Canonical form of *text*: NFC, no zero-width characters, single spaces."""
    for ch in _ZERO_WIDTH:
        if ch in text:
            text = text.replace(ch, "")
    text = unicodedata.normalize("NFC", text)
    return " ".join(text.split())


@dataclass(frozen=True)
class TokenSeq(Sequence):
    """An ordered token sequence plus the text it came from.

    Behaves as a read-only sequence of token strings.
    """

    tokens: tuple[str, ...]
    source_text: str

    def __len__(self):
        return len(self.tokens)

    def __getitem__(self, i):
        return self.tokens[i]


def tokenize(text: str) -> TokenSeq:
    """Split *text* into word and punctuation tokens.

    The text is normalized first, then split on whitespace; every
    clause punctuation character becomes its own token, wherever it
    sits, so ``"আমি যাই।"`` yields ``["আমি", "যাই", "।"]``.
    """
    tokens: list[str] = []
    word: list[str] = []
    for ch in normalize(text):
        if ch == " ":
            if word:
                tokens.append("".join(word))
                word.clear()
        elif ch in CLAUSE_PUNCTUATION:
            if word:
                tokens.append("".join(word))
                word.clear()
            tokens.append(ch)
        else:
            word.append(ch)
    if word:
        tokens.append("".join(word))
    return TokenSeq(tuple(tokens), text)


def has_terminal_punctuation(text: str) -> bool:
    """True iff *text* ends with a sentence-final mark.

    Trailing whitespace and closing quotes are ignored, so a sentence
    ending in ``!"`` still counts as terminated.
    """
    for ch in reversed(text):
        if ch.isspace() or ch in CLOSING_QUOTES:
            continue
        return ch in TERMINAL_PUNCTUATION
    return False


def detokenize(tokens) -> str:
    """Join tokens back into text, re-attaching punctuation.

    Inverse-ish of ``tokenize``: clause punctuation that the tokenizer
    detached is glued back (closers to the left, openers to the right).
    Straight quotes are ambiguous and stay space-separated.
    """
    attach_left = {DANDA, "?", "!", ".", ",", ";", ":", ")", "”", "’"}
    attach_right = {"(", "“", "‘"}
    out: list[str] = []
    glue_next = False
    for tok in tokens:
        if out and (glue_next or tok in attach_left):
            out[-1] += tok
        else:
            out.append(tok)
        glue_next = tok in attach_right
    return " ".join(out)
