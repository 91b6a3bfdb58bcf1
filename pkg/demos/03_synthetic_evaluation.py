"""
Baseline versus proposed error rates on a synthetic set
=======================================================

Builds a small manifest of damaged posteriorgrams on disk, then scores both
decoders with pooled WER, CER and MER, the same layout the ``mannerctc eval``
command writes.
"""
import tempfile
from pathlib import Path

import numpy as np

from mannerctc import CHAR_ALPHABET, SynthSpec, default_manner_map, project_to_manner, suppress_symbol, synth_text
from mannerctc.evaluate import evaluate_manifest
from mannerctc.fileio import ManifestEntry, format_report, read_manifest, write_manifest, write_posteriors

sentences = [
    "ONE TWO THREE", "FOUR FIVE SIX", "GO LEFT NOW", "PLAY MUSIC", "RED CAR",
    "STOP HERE", "TURN RIGHT", "CALL HOME", "OPEN DOR", "WE ARE LATE",
]

#%%
# Write one character and one manner posterior file per sentence, with a
# random non-initial character peak suppressed.
rng = np.random.default_rng(1)
mmap = default_manner_map()
workdir = Path(tempfile.mkdtemp())
entries = []
for i, text in enumerate(sentences):
    clean = synth_text(text, CHAR_ALPHABET, SynthSpec(seed=i))
    Pm = project_to_manner(clean, mmap)
    Pc = suppress_symbol(clean, int(rng.integers(1, len(text))), 0.1)
    write_posteriors(Pc, workdir / f"u{i}.char.post")
    write_posteriors(Pm, workdir / f"u{i}.manner.post")
    entries.append(ManifestEntry(f"u{i}", workdir / f"u{i}.char.post", text, workdir / f"u{i}.manner.post"))
write_manifest(entries, workdir / "manifest.jsonl")
print((workdir / "manifest.jsonl").read_text().splitlines()[0])

#%%
# Score both decoders.  Pooled rates are total edits over total reference
# length.  "THREE" and "CALL" have doubled letters, which the manner-guided
# rewrite cannot emit twice, so u0 and u7 keep an error.
report = evaluate_manifest(read_manifest(workdir / "manifest.jsonl"), mmap, with_mer=True, dataset="toy")
print(format_report(report, "text"))
