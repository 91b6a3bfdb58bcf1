"""CTC path semantics: collapse, path-sum probability, forward-backward gradient.

All recursions run over the blank-interleaved target ``< z1 < z2 ... zL <``
in natural-log space.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .alphabet import Alphabet

ROW_TOLERANCE = 1e-4
BRUTEFORCE_LIMIT = 10**7


class PosteriorError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PosteriorMatrix:
    """T x K row-stochastic frame-by-label probabilities.

    Rows within ``ROW_TOLERANCE`` of 1 are renormalized on construction;
    anything further off is rejected.
    """

    probs: np.ndarray
    alphabet: Alphabet
    frame_shift: Optional[float] = None

    def __post_init__(self):
        probs = np.array(self.probs, dtype=np.float64)
        if probs.ndim != 2 or probs.shape[0] < 1:
            raise PosteriorError(f"expected a non-empty T x K matrix, got shape {probs.shape}")
        if probs.shape[1] != len(self.alphabet):
            raise PosteriorError(
                f"matrix has {probs.shape[1]} columns but alphabet has {len(self.alphabet)} labels"
            )
        if not np.all(np.isfinite(probs)):
            raise PosteriorError("non-finite posterior entry")
        if np.any(probs < 0):
            t = int(np.argwhere(probs < 0)[0, 0])
            raise PosteriorError(f"negative entry in frame {t}")
        sums = probs.sum(axis=1)
        bad = np.abs(sums - 1.0) > ROW_TOLERANCE
        if np.any(bad):
            t = int(np.flatnonzero(bad)[0])
            raise PosteriorError(f"frame {t} sums to {sums[t]!r}, not 1")
        probs /= sums[:, None]
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @property
    def T(self) -> int:
        return self.probs.shape[0]

    @property
    def K(self) -> int:
        return self.probs.shape[1]

    def argmax_path(self) -> np.ndarray:
        # np.argmax picks the lowest index on ties
        return np.argmax(self.probs, axis=1)


@dataclass(frozen=True, eq=False)
class CtcResult:
    log_prob: float
    gradient: Optional[np.ndarray] = None


def _as_array(P) -> np.ndarray:
    if isinstance(P, PosteriorMatrix):
        return P.probs
    arr = np.asarray(P, dtype=np.float64)
    if arr.ndim != 2:
        raise PosteriorError(f"expected a 2-d matrix, got shape {arr.shape}")
    return arr


def _check_target(z: Sequence[int], K: int, blank: int = 0) -> tuple[int, ...]:
    z = tuple(int(s) for s in z)
    for s in z:
        if s == blank:
            raise ValueError("target transcript contains the blank label")
        if not 0 <= s < K:
            raise ValueError(f"target label {s} out of range for K={K}")
    return z


def collapse(path: Sequence[int], alphabet: Alphabet | None = None, blank: int = 0) -> tuple[int, ...]:
    """Merge runs of repeated labels, then drop blanks."""
    if alphabet is not None:
        blank = alphabet.blank
        K = len(alphabet)
        for i in path:
            if not 0 <= int(i) < K:
                raise ValueError(f"path index {int(i)} out of range for K={K}")
    out = []
    prev = None
    for i in path:
        i = int(i)
        if i != prev and i != blank:
            out.append(i)
        prev = i
    return tuple(out)


def ctc_prob_bruteforce(P, z: Sequence[int], blank: int = 0) -> float:
    """Sum the probability of every length-T path that collapses to ``z``.

    Exponential in T; only meant as an oracle for tiny problems.
    """
    probs = _as_array(P)
    T, K = probs.shape
    z = _check_target(z, K, blank)
    if K**T > BRUTEFORCE_LIMIT:
        raise ValueError(f"K**T = {K}**{T} exceeds the enumeration limit {BRUTEFORCE_LIMIT}")
    total = 0.0
    frames = range(T)
    for path in itertools.product(range(K), repeat=T):
        if collapse(path, blank=blank) == z:
            p = 1.0
            for t in frames:
                p *= probs[t, path[t]]
            total += p
    return total


def _extend(z: tuple[int, ...], blank: int) -> np.ndarray:
    ext = np.full(2 * len(z) + 1, blank, dtype=np.intp)
    ext[1::2] = z
    return ext


def _skip_allowed(ext: np.ndarray, blank: int) -> np.ndarray:
    # s may be entered from s-2 when it is a label differing from the label at s-2
    allow = np.zeros(len(ext), dtype=bool)
    allow[2:] = (ext[2:] != blank) & (ext[2:] != ext[:-2])
    return allow


def _log(probs: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(probs)


def _forward(logp: np.ndarray, ext: np.ndarray, allow: np.ndarray):
    """Return (log_alpha, log_pre) where alpha = pre * emission."""
    T = logp.shape[0]
    S = len(ext)
    log_alpha = np.full((T, S), -np.inf)
    log_pre = np.full((T, S), -np.inf)
    log_pre[0, 0] = 0.0
    if S > 1:
        log_pre[0, 1] = 0.0
    log_alpha[0] = log_pre[0] + logp[0, ext]
    for t in range(1, T):
        prev = log_alpha[t - 1]
        acc = prev.copy()
        acc[1:] = np.logaddexp(acc[1:], prev[:-1])
        acc[2:] = np.where(allow[2:], np.logaddexp(acc[2:], prev[:-2]), acc[2:])
        log_pre[t] = acc
        log_alpha[t] = acc + logp[t, ext]
    return log_alpha, log_pre


def _backward(logp: np.ndarray, ext: np.ndarray, allow: np.ndarray) -> np.ndarray:
    """log beta[t, s]: probability of frames t..T-1 given state s at t, emission at t included."""
    T = logp.shape[0]
    S = len(ext)
    log_beta = np.full((T, S), -np.inf)
    log_beta[T - 1, S - 1] = logp[T - 1, ext[S - 1]]
    if S > 1:
        log_beta[T - 1, S - 2] = logp[T - 1, ext[S - 2]]
    for t in range(T - 2, -1, -1):
        nxt = log_beta[t + 1]
        acc = nxt.copy()
        acc[:-1] = np.logaddexp(acc[:-1], nxt[1:])
        acc[:-2] = np.where(allow[2:], np.logaddexp(acc[:-2], nxt[2:]), acc[:-2])
        log_beta[t] = acc + logp[t, ext]
    return log_beta


def _final(log_alpha_last: np.ndarray) -> float:
    if len(log_alpha_last) == 1:
        return float(log_alpha_last[0])
    return float(np.logaddexp(log_alpha_last[-1], log_alpha_last[-2]))


def ctc_log_forward(P, z: Sequence[int], blank: int = 0) -> CtcResult:
    """Natural-log CTC probability of ``z`` given per-frame posteriors.

    Returns ``-inf`` when no path of length T collapses to ``z``.  ``P`` may
    be a :class:`PosteriorMatrix` or any non-negative T x K array (rows
    need not be normalized, which the finite-difference tests rely on).
    """
    probs = _as_array(P)
    z = _check_target(z, probs.shape[1], blank)
    logp = _log(probs)
    ext = _extend(z, blank)
    log_alpha, _ = _forward(logp, ext, _skip_allowed(ext, blank))
    return CtcResult(_final(log_alpha[-1]))


def ctc_grad(P, z: Sequence[int], blank: int = 0) -> CtcResult:
    """Log probability plus d(-log P(z|X)) / d(posterior entry).

    The derivative with respect to entry (t, k) is the summed probability of
    all alignments passing through label k at frame t, with that frame's
    emission left out, divided by P(z|X).  Computing it from the
    pre-emission forward variable avoids dividing by posteriors that may be
    zero.
    """
    probs = _as_array(P)
    T, K = probs.shape
    z = _check_target(z, K, blank)
    logp = _log(probs)
    ext = _extend(z, blank)
    allow = _skip_allowed(ext, blank)
    log_alpha, log_pre = _forward(logp, ext, allow)
    log_total = _final(log_alpha[-1])
    if log_total == -np.inf:
        raise ValueError("target has zero probability under P; gradient is undefined")
    log_beta = _backward(logp, ext, allow)

    # log of d beta-inclusive product / d y[t, ext[s]]: pre[t, s] * beta_without_emission[t, s]
    # beta_without_emission[t, s] = sum over next states of beta[t+1] (or 1 at the end)
    log_after = np.full((T, len(ext)), -np.inf)
    S = len(ext)
    log_after[T - 1, S - 1] = 0.0
    if S > 1:
        log_after[T - 1, S - 2] = 0.0
    if T > 1:
        nxt = log_beta[1:]
        acc = nxt.copy()
        acc[:, :-1] = np.logaddexp(acc[:, :-1], nxt[:, 1:])
        acc[:, :-2] = np.where(allow[2:], np.logaddexp(acc[:, :-2], nxt[:, 2:]), acc[:, :-2])
        log_after[:-1] = acc
    log_occ = log_pre + log_after

    grad = np.zeros((T, K))
    for k in np.unique(ext):
        cols = log_occ[:, ext == k]
        if cols.shape[1] == 0:
            continue
        m = np.max(cols, axis=1)
        finite = np.isfinite(m)
        s = np.zeros(T)
        s[finite] = np.exp(
            m[finite] + np.log(np.sum(np.exp(cols[finite] - m[finite, None]), axis=1)) - log_total
        )
        grad[:, k] = -s
    return CtcResult(log_total, grad)
