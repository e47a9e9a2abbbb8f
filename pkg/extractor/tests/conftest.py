import json

import pytest

DANDA = "।"


def build_fixture_corpus(path, n=50):
    """n-pair corpus covering pass/fail behaviour of the downstream
    filter: diverse-but-related, identical, repeated-bigram and
    unterminated candidates."""
    pairs = []
    for i in range(n):
        words = [f"ক{i}w{j}" for j in range(12)]
        rev = list(reversed(words))
        kind = i % 4
        source = " ".join(words) + DANDA
        if kind == 0:
            candidate = " ".join(rev + [f"ন{i}a", f"ন{i}b"]) + DANDA
        elif kind == 1:
            candidate = source
        elif kind == 2:
            candidate = " ".join(rev + [f"ন{i}a", rev[0], rev[1]]) + DANDA
        else:
            candidate = " ".join(rev + [f"ন{i}a", f"ন{i}b"])
        pairs.append({"id": f"pair{i}", "source": source,
                      "candidate": candidate})
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for pair in pairs:
            fh.write(json.dumps(pair, ensure_ascii=False,
                                separators=(",", ":")))
            fh.write("\n")
    return [p["id"] for p in pairs]


@pytest.fixture
def corpus_50(tmp_path):
    path = tmp_path / "corpus.jsonl"
    ids = build_fixture_corpus(path, 50)
    return path, ids
