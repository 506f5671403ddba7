"""Text canonicalization and phrase matching helpers.

Every place the package compares, keys, or counts free text goes through
`normalize` so that class ids, dedup keys, and term matching all agree on
one canonical form: lowercase, trimmed, internal whitespace collapsed.
"""

import re

_WS = re.compile(r"\s+")
_SLUG_BAD = re.compile(r"[^a-z0-9]+")


def normalize(s: str) -> str:
    """Lowercase, trim, and collapse internal whitespace runs to one space."""
    return _WS.sub(" ", s.strip()).lower()


def tokenize(s: str) -> list[str]:
    """Whitespace tokens of the normalized string."""
    norm = normalize(s)
    return norm.split(" ") if norm else []


def slugify(terms) -> str:
    """Stable directory-name slug for a term list (used by fixture layouts)."""
    joined = " ".join(normalize(t) for t in terms)
    return _SLUG_BAD.sub("-", joined).strip("-")


def count_phrase(phrase: str, text: str) -> int:
    """Non-overlapping whole-phrase occurrences of `phrase` in `text`.

    Both arguments are normalized first.  A match must not sit inside a
    larger word: 'data' does not match inside 'database'.  Punctuation is
    a valid boundary, so 'big data.' still matches 'big data'.
    """
    phrase = normalize(phrase)
    if not phrase:
        return 0
    pattern = re.compile(r"(?<![0-9a-z_])" + re.escape(phrase) + r"(?![0-9a-z_])")
    return len(pattern.findall(normalize(text)))


def format_float(x: float) -> str:
    """Render a float with at most 6 decimal places and no exponent.

    Used by the serializers so that equal result sets are byte-identical.
    """
    if x == int(x):
        return f"{int(x)}.0"
    s = f"{x:.6f}".rstrip("0")
    if s.endswith("."):
        s += "0"
    return s
