"""Text normalization and tokenization matching the consumer's contract.

The curation engine that reads our PEMB stores documents its mock
embedding recipe against a specific tokenizer: NFC composition,
zero-width characters removed, whitespace collapsed, and every clause
punctuation character split into its own token. The mock backend here
must reproduce that token stream exactly, so the rules are restated
rather than imported.
"""

import unicodedata

DANDA = "।"

CLAUSE_PUNCTUATION = frozenset(
    {DANDA, "?", "!", ".", ",", ";", ":",
     '"', "'", "“", "”", "‘", "’", "(", ")"}
)

_ZERO_WIDTH = ("​", "‌", "‍", "⁠", "﻿")


def normalize(text: str) -> str:
    for ch in _ZERO_WIDTH:
        if ch in text:
            text = text.replace(ch, "")
    text = unicodedata.normalize("NFC", text)
    return " ".join(text.split())


def tokenize(text: str) -> list[str]:
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
    return tokens
