"""Label inventories and the letter-to-manner transcript mapping.

Indices are 0-based and the blank ``<`` always sits at index 0.  The space
token ``>`` may sit anywhere after it.
"""
from __future__ import annotations

import string
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

BLANK = "<"
SPACE = ">"
DELETE = "DELETE"

VOWEL, SEMIVOWEL, NASAL, FRICATIVE, STOP = "V", "$", "N", "F", "S"
MANNER_CLASSES = (VOWEL, SEMIVOWEL, NASAL, FRICATIVE, STOP)

_FORBIDDEN = (",", "\t", "\n", "\r")


class AlphabetError(ValueError):
    """Raised for malformed alphabets, maps, or symbols outside an alphabet."""


def _check_token(token: str) -> None:
    if not token:
        raise AlphabetError("empty label")
    for ch in _FORBIDDEN:
        if ch in token:
            raise AlphabetError(f"label {token!r} contains a reserved separator")


@dataclass(frozen=True)
class Alphabet:
    """Ordered label set with the blank at index 0 and one space label."""

    labels: tuple[str, ...]
    _index: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        for tok in labels:
            _check_token(tok)
        if len(set(labels)) != len(labels):
            dup = next(t for t in labels if labels.count(t) > 1)
            raise AlphabetError(f"duplicate label {dup!r}")
        if not labels or labels[0] != BLANK:
            raise AlphabetError("blank '<' must be at index 0")
        if SPACE not in labels:
            raise AlphabetError("space '>' is missing")
        if len(labels) < 3:
            raise AlphabetError("need at least two non-blank labels")
        index = {tok: i for i, tok in enumerate(labels)}
        object.__setattr__(self, "_index", MappingProxyType(index))

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, token) -> bool:
        return token in self._index

    @property
    def blank(self) -> int:
        return 0

    @property
    def space(self) -> int:
        return self._index[SPACE]

    def index(self, token: str) -> int:
        try:
            return self._index[token]
        except KeyError:
            raise AlphabetError(f"symbol {token!r} is not in the alphabet") from None

    def encode(self, text: str | Sequence[str]) -> tuple[int, ...]:
        """Turn text into label indices.

        A ``str`` is read one character at a time with ``" "`` standing for
        the space label; a list of tokens is looked up token by token (needed
        for multi-character labels).  Blanks are rejected.
        """
        tokens = list(text) if isinstance(text, str) else list(text)
        out = []
        for tok in tokens:
            if tok == " ":
                tok = SPACE
            i = self.index(tok)
            if i == self.blank:
                raise AlphabetError("transcript contains the blank label")
            out.append(i)
        return tuple(out)

    def render(self, indices: Iterable[int], human: bool = False, sep: str = "") -> str:
        """Inverse of :meth:`encode`.  ``human`` renders space as ``" "``."""
        toks = []
        for i in indices:
            tok = self.labels[int(i)]
            if human and tok == SPACE:
                tok = " "
            toks.append(tok)
        return sep.join(toks)


def parse_alphabet(spec_text: str) -> Alphabet:
    """Build an alphabet from one token per line, prepending the blank if absent."""
    tokens = [line.rstrip("\r") for line in spec_text.split("\n")]
    tokens = [t for t in tokens if t != ""]
    for tok in tokens:
        _check_token(tok)
    if BLANK not in tokens:
        tokens.insert(0, BLANK)
    elif tokens[0] != BLANK:
        raise AlphabetError("blank '<' may only appear first")
    if len(tokens) < 3:
        raise AlphabetError("need at least two non-blank labels")
    return Alphabet(tuple(tokens))


def load_alphabet(path) -> Alphabet:
    return parse_alphabet(Path(path).read_text(encoding="utf-8"))


# 29 labels: C1 = blank, C2..C28 = A-Z and apostrophe, C29 = space.
CHAR_ALPHABET = Alphabet((BLANK, *string.ascii_uppercase, "'", SPACE))
MANNER_ALPHABET = Alphabet((BLANK, *MANNER_CLASSES, SPACE))


@dataclass(frozen=True)
class MannerMap:
    """Mapping from character labels to manner classes (or ``DELETE``).

    Space is handled implicitly and never appears in ``entries``.
    """

    entries: Mapping[str, str]

    def __post_init__(self):
        entries = dict(self.entries)
        for ch, cls in entries.items():
            if ch in (BLANK, SPACE):
                raise AlphabetError(f"{ch!r} cannot be remapped")
            if cls not in MANNER_CLASSES and cls != DELETE:
                raise AlphabetError(f"unknown manner class {cls!r} for {ch!r}")
        object.__setattr__(self, "entries", MappingProxyType(entries))

    def lookup(self, token: str) -> str:
        if token == SPACE or token == " ":
            return SPACE
        try:
            return self.entries[token]
        except KeyError:
            raise AlphabetError(f"symbol {token!r} has no manner class") from None

    def covers(self, alphabet: Alphabet) -> bool:
        return all(t in self.entries for t in alphabet.labels if t not in (BLANK, SPACE))


def default_manner_map() -> MannerMap:
    table = {}
    for letters, cls in (
        ("AEIOU", VOWEL),
        ("WYRL", SEMIVOWEL),
        ("MN", NASAL),
        ("FVSZHX", FRICATIVE),
        ("BCDGJKPQT", STOP),
    ):
        table.update(dict.fromkeys(letters, cls))
    table["'"] = DELETE
    return MannerMap(table)


def parse_manner_map(text: str) -> MannerMap:
    """Read ``CHAR<TAB>CLASS`` lines."""
    entries = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise AlphabetError(f"manner map line {lineno}: expected CHAR<TAB>CLASS")
        ch, cls = parts[0], parts[1].strip()
        if ch in entries:
            raise AlphabetError(f"manner map line {lineno}: duplicate entry {ch!r}")
        entries[ch] = cls
    return MannerMap(entries)


def load_manner_map(path) -> MannerMap:
    return parse_manner_map(Path(path).read_text(encoding="utf-8"))


def map_transcript_to_manner(transcript: str | Sequence[str], mmap: MannerMap) -> list[str]:
    """Replace each character label by its manner token.

    Spaces (``" "`` or ``">"``) pass through as ``">"``; DELETE-mapped
    symbols are dropped.

    >>> "".join(map_transcript_to_manner("ONE", default_manner_map()))
    'VNV'
    """
    out = []
    for tok in transcript:
        cls = mmap.lookup(tok)
        if cls != DELETE:
            out.append(cls)
    return out
