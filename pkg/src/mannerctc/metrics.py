"""Levenshtein alignment and word / character / manner error rates.

Rates use the reference length as denominator and are not clamped, so
insertion-heavy hypotheses can exceed 1.0.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

from .alphabet import SPACE, MannerMap, map_transcript_to_manner


@dataclass(frozen=True)
class EditStats:
    substitutions: int = 0
    insertions: int = 0
    deletions: int = 0
    ref_len: int = 0

    @property
    def errors(self) -> int:
        return self.substitutions + self.insertions + self.deletions

    @property
    def rate(self) -> float:
        if self.ref_len == 0:
            if self.errors:
                raise ValueError("error rate undefined: empty reference, non-empty hypothesis")
            return 0.0
        return self.errors / self.ref_len

    def __add__(self, other: "EditStats") -> "EditStats":
        return EditStats(
            self.substitutions + other.substitutions,
            self.insertions + other.insertions,
            self.deletions + other.deletions,
            self.ref_len + other.ref_len,
        )


def edit_ops(ref: Sequence[Hashable], hyp: Sequence[Hashable]) -> EditStats:
    """Minimal substitution/insertion/deletion counts turning ``ref`` into ``hyp``.

    Among co-optimal alignments the backtrace prefers a diagonal step
    (match or substitution), then insertion, then deletion.
    """
    n, m = len(ref), len(hyp)
    d = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        d[i][0] = i
    for j in range(m + 1):
        d[0][j] = j
    for i in range(1, n + 1):
        row, up = d[i], d[i - 1]
        r = ref[i - 1]
        for j in range(1, m + 1):
            row[j] = min(up[j - 1] + (r != hyp[j - 1]), row[j - 1] + 1, up[j] + 1)

    s = ins = dels = 0
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and d[i][j] == d[i - 1][j - 1] + (ref[i - 1] != hyp[j - 1]):
            s += ref[i - 1] != hyp[j - 1]
            i, j = i - 1, j - 1
        elif j > 0 and d[i][j] == d[i][j - 1] + 1:
            ins += 1
            j -= 1
        else:
            dels += 1
            i -= 1
    return EditStats(s, ins, dels, n)


def word_tokens(text: str) -> list[str]:
    return text.split()


def char_tokens(text: str) -> list[str]:
    """Characters of ``text`` with whitespace runs collapsed to one space."""
    return list(" ".join(text.split()))


def manner_tokens(text: str) -> list[str]:
    # ">" and " " both denote a word boundary in manner text
    return [SPACE if c == " " else c for c in " ".join(text.replace(SPACE, " ").split())]


def word_stats(ref: str, hyp: str) -> EditStats:
    return edit_ops(word_tokens(ref), word_tokens(hyp))


def char_stats(ref: str, hyp: str) -> EditStats:
    return edit_ops(char_tokens(ref), char_tokens(hyp))


def manner_stats(ref_chars: str, hyp_manner: str, mmap: MannerMap) -> EditStats:
    ref = map_transcript_to_manner(char_tokens(ref_chars), mmap)
    # dropped apostrophes can leave doubled or edge spaces behind
    ref = manner_tokens("".join(" " if t == SPACE else t for t in ref))
    return edit_ops(ref, manner_tokens(hyp_manner))


def wer(ref: str, hyp: str) -> float:
    return word_stats(ref, hyp).rate


def cer(ref: str, hyp: str) -> float:
    return char_stats(ref, hyp).rate


def mer(ref_chars: str, hyp_manner: str, mmap: MannerMap) -> float:
    return manner_stats(ref_chars, hyp_manner, mmap).rate
