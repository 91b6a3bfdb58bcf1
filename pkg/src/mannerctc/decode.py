"""Best-path decoding and manner-guided character path rewriting.

The manner-guided decoder finds every stretch of frames where the manner
detector's argmax is non-blank and forces the character stream to emit
exactly one non-blank character there, never repeating the previous
emission.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .alphabet import MANNER_ALPHABET, Alphabet
from .ctc import PosteriorMatrix, collapse


class DecodeError(ValueError):
    pass


@dataclass(frozen=True)
class Segment:
    start: int  # inclusive
    end: int  # exclusive
    manner_class: int

    def __len__(self):
        return self.end - self.start


@dataclass(frozen=True, eq=False)
class DecodeTrace:
    modified_path: np.ndarray
    emitted: tuple[tuple[Segment, int], ...]
    final: tuple[int, ...]


def greedy_decode(P: PosteriorMatrix) -> tuple[int, ...]:
    return collapse(P.argmax_path(), blank=P.alphabet.blank)


def _majority(classes: np.ndarray) -> int:
    counts = Counter(int(c) for c in classes)
    best = max(counts.values())
    # Counter keeps first-seen order, so the earliest class wins ties
    return next(c for c, n in counts.items() if n == best)


def extract_segments(Pm: PosteriorMatrix, split_on_class_change: bool = False) -> list[Segment]:
    """Maximal runs of frames whose manner argmax is non-blank."""
    path = Pm.argmax_path()
    blank = Pm.alphabet.blank
    segments = []
    start = None
    for t in range(len(path) + 1):
        boundary = t == len(path) or path[t] == blank
        if not boundary and start is not None and split_on_class_change:
            boundary = path[t] != path[t - 1]
        if start is not None and boundary:
            segments.append(Segment(start, t, _majority(path[start:t])))
            start = None
        if start is None and t < len(path) and path[t] != blank:
            start = t
    return segments


def _ranked_nonblank(frames: np.ndarray, blank: int) -> np.ndarray:
    """Per-frame non-blank label indices ordered by posterior, ties to the lower index."""
    masked = frames.copy()
    masked[:, blank] = -np.inf
    order = np.argsort(-masked, axis=1, kind="stable")
    return order[:, :-1]  # blank sorts last


def choose_segment_char(Pc: PosteriorMatrix, seg: Segment, excluded: int) -> int:
    """Pick the character a manner segment emits.

    Rank-1 candidates are the per-frame non-blank argmaxes, ordered by how
    often they occur in the segment, then by summed posterior over the
    segment, then by lowest index.  The first candidate different from
    ``excluded`` wins.  If every candidate is ``excluded`` the same is
    done with the per-frame second choices, then third, and so on.
    """
    blank = Pc.alphabet.blank
    if len(Pc.alphabet) - 1 < 2:
        raise DecodeError("need at least two non-blank labels to honour the exclusion")
    if not 0 <= seg.start < seg.end <= Pc.T:
        raise DecodeError(f"segment [{seg.start}, {seg.end}) outside 0..{Pc.T}")
    frames = Pc.probs[seg.start:seg.end]
    ranked = _ranked_nonblank(frames, blank)
    mass = frames.sum(axis=0)
    for rank in range(ranked.shape[1]):
        counts = Counter(int(c) for c in ranked[:, rank])
        candidates = sorted(counts, key=lambda c: (-counts[c], -mass[c], c))
        for c in candidates:
            if c != excluded:
                return c
    raise DecodeError("no admissible character")  # unreachable for K >= 3


def _check_manner_alphabet(alphabet: Alphabet) -> None:
    unknown = [t for t in alphabet.labels if t not in MANNER_ALPHABET]
    if unknown:
        raise DecodeError(f"manner stream has non-manner labels {unknown}")


def manner_guided_decode(
    Pm: PosteriorMatrix, Pc: PosteriorMatrix, split_on_class_change: bool = False
) -> DecodeTrace:
    """Rewrite the character CTC path using manner segments.

    The rewritten path starts all blank and the previous emission starts as
    the space label.  Each segment is filled with the character returned by
    :func:`choose_segment_char` (excluding the previous emission), and the
    result is the collapse of the rewritten path.
    """
    if Pm.T != Pc.T:
        raise DecodeError(f"frame count mismatch: manner T={Pm.T}, character T={Pc.T}")
    _check_manner_alphabet(Pm.alphabet)
    alphabet = Pc.alphabet
    path = np.full(Pc.T, alphabet.blank, dtype=np.intp)
    prev = alphabet.space
    emitted = []
    for seg in extract_segments(Pm, split_on_class_change):
        cur = choose_segment_char(Pc, seg, prev)
        path[seg.start:seg.end] = cur
        emitted.append((seg, cur))
        prev = cur
    path.setflags(write=False)
    return DecodeTrace(path, tuple(emitted), collapse(path, blank=alphabet.blank))
