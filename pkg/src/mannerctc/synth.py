"""Synthetic peaky posteriorgrams for exercising the decoders.

A transcript is laid out as ``gap, peak, gap, peak, ..., gap`` where every
peak frame puts ``peak_prob`` on its symbol and every gap frame puts it on
the blank.  The leftover mass is spread evenly over the other labels, then
multiplicative noise is applied and rows renormalized.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .alphabet import BLANK, DELETE, MANNER_ALPHABET, SPACE, AlphabetError, Alphabet, MannerMap
from .ctc import PosteriorMatrix


@dataclass(frozen=True)
class SynthSpec:
    frames_per_symbol: int = 2
    blank_gap: int = 1
    peak_prob: float = 0.9
    noise_scale: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.frames_per_symbol < 1:
            raise ValueError("frames_per_symbol must be >= 1")
        if self.blank_gap < 1:
            raise ValueError("blank_gap must be >= 1")
        if not 0.5 < self.peak_prob < 1:
            raise ValueError("peak_prob must lie in (0.5, 1)")
        if not 0 <= self.noise_scale < 0.1:
            raise ValueError("noise_scale must lie in [0, 0.1)")


def synth_posteriors(t: Sequence[int], alphabet: Alphabet, spec: SynthSpec = SynthSpec()) -> PosteriorMatrix:
    K = len(alphabet)
    for s in t:
        if not 0 < int(s) < K:
            raise AlphabetError(f"symbol index {s} is not a non-blank label of the alphabet")
    targets = []
    for s in t:
        targets += [alphabet.blank] * spec.blank_gap + [int(s)] * spec.frames_per_symbol
    targets += [alphabet.blank] * spec.blank_gap
    T = len(targets)

    rest = (1.0 - spec.peak_prob) / (K - 1)
    probs = np.full((T, K), rest)
    probs[np.arange(T), targets] = spec.peak_prob
    if spec.noise_scale > 0:
        rng = np.random.default_rng(spec.seed)
        probs *= 1.0 + spec.noise_scale * rng.uniform(-1.0, 1.0, size=probs.shape)
    probs /= probs.sum(axis=1, keepdims=True)
    return PosteriorMatrix(probs, alphabet)


def synth_text(text: str, alphabet: Alphabet, spec: SynthSpec = SynthSpec()) -> PosteriorMatrix:
    return synth_posteriors(alphabet.encode(text), alphabet, spec)


def peak_spans(P: PosteriorMatrix) -> list[tuple[int, int]]:
    """Frame spans ``[start, end)`` of maximal runs of one non-blank argmax label."""
    path = P.argmax_path()
    spans = []
    start = None
    for t in range(len(path) + 1):
        if start is not None and (t == len(path) or path[t] != path[start]):
            spans.append((start, t))
            start = None
        if start is None and t < len(path) and path[t] != P.alphabet.blank:
            start = t
    return spans


def suppress_symbol(P: PosteriorMatrix, occurrence: int, factor: float) -> PosteriorMatrix:
    """Move mass from one peak's symbol onto the blank.

    ``occurrence`` counts peaks (non-blank argmax runs) from 0.  In the
    peak's frames the symbol's probability is scaled by ``factor`` and the
    removed mass goes to the blank.
    """
    if not 0 < factor < 1:
        raise ValueError("factor must lie in (0, 1)")
    spans = peak_spans(P)
    if not 0 <= occurrence < len(spans):
        raise IndexError(f"peak {occurrence} out of range; matrix has {len(spans)} peaks")
    start, end = spans[occurrence]
    sym = int(P.argmax_path()[start])
    probs = np.array(P.probs)
    removed = probs[start:end, sym] * (1.0 - factor)
    probs[start:end, sym] -= removed
    probs[start:end, P.alphabet.blank] += removed
    probs /= probs.sum(axis=1, keepdims=True)
    return PosteriorMatrix(probs, P.alphabet, P.frame_shift)


def project_to_manner(Pc: PosteriorMatrix, mmap: MannerMap, manner_alphabet: Alphabet = MANNER_ALPHABET) -> PosteriorMatrix:
    """Sum character columns into their manner classes.

    DELETE-mapped characters contribute to the blank column.
    """
    src = Pc.alphabet
    if not mmap.covers(src):
        missing = [t for t in src.labels if t not in (BLANK, SPACE) and t not in mmap.entries]
        raise AlphabetError(f"manner map does not cover {missing}")
    # column membership as a K_char x K_manner 0/1 matrix
    member = np.zeros((len(src), len(manner_alphabet)))
    for i, tok in enumerate(src.labels):
        if tok == BLANK:
            cls = BLANK
        else:
            cls = mmap.lookup(tok)
            if cls == DELETE:
                cls = BLANK
        member[i, manner_alphabet.index(cls)] = 1.0
    return PosteriorMatrix(Pc.probs @ member, manner_alphabet, Pc.frame_shift)
