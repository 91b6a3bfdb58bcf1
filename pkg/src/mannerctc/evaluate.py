"""Baseline-vs-proposed scoring over a manifest of posterior files."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Iterable

from .alphabet import MannerMap, default_manner_map
from .decode import greedy_decode, manner_guided_decode
from .fileio import ManifestEntry, Report, SystemResult, UtteranceResult, read_posteriors
from .metrics import char_stats, manner_stats, word_stats
from .synth import project_to_manner


class EvaluationError(RuntimeError):
    def __init__(self, uid: str, cause: Exception):
        super().__init__(f"{uid}: {cause}")
        self.uid = uid


def _score(ref: str, hyp: str) -> SystemResult:
    return SystemResult(hyp, word_stats(ref, hyp), char_stats(ref, hyp))


def evaluate_entry(
    entry: ManifestEntry,
    mmap: MannerMap,
    split_on_class_change: bool = False,
    derive_manner: bool = False,
    with_mer: bool = False,
) -> UtteranceResult:
    try:
        Pc = read_posteriors(entry.char_posteriors)
        if entry.manner_posteriors is not None and not derive_manner:
            Pm = read_posteriors(entry.manner_posteriors)
        elif derive_manner:
            Pm = project_to_manner(Pc, mmap)
        else:
            raise ValueError("no manner posteriors; pass derive_manner to project them")
        alphabet = Pc.alphabet
        baseline = alphabet.render(greedy_decode(Pc), human=True)
        proposed = alphabet.render(manner_guided_decode(Pm, Pc, split_on_class_change).final, human=True)
        manner = manner_hyp = None
        if with_mer:
            manner_hyp = Pm.alphabet.render(greedy_decode(Pm))
            manner = manner_stats(entry.reference, manner_hyp, mmap)
        return UtteranceResult(
            entry.id, entry.reference, _score(entry.reference, baseline), _score(entry.reference, proposed),
            manner, manner_hyp,
        )
    except Exception as e:
        raise EvaluationError(entry.id, e) from e


def evaluate_manifest(
    entries: Iterable[ManifestEntry],
    mmap: MannerMap | None = None,
    split_on_class_change: bool = False,
    derive_manner: bool = False,
    with_mer: bool = False,
    jobs: int = 1,
    dataset: str = "synthetic",
) -> Report:
    """Decode every entry with both decoders; results keep manifest order for any ``jobs``."""
    mmap = mmap or default_manner_map()
    entries = list(entries)
    work = lambda e: evaluate_entry(e, mmap, split_on_class_change, derive_manner, with_mer)
    if jobs > 1 and len(entries) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(work, entries))
    else:
        results = [work(e) for e in entries]
    return Report(dataset, results)
