"""
Greedy versus manner-guided decoding
====================================

Trained CTC character models are "peaky": most frames are blank, and a weak
character peak can be swallowed by the blank.  A separately trained
manner-of-articulation detector (vowel, semi-vowel, nasal, fricative, stop)
tends to be more robust.  Manner-guided decoding forces the character
stream to emit one non-blank character wherever the manner stream has a
non-blank peak.
"""
from mannerctc import (
    CHAR_ALPHABET,
    SynthSpec,
    default_manner_map,
    greedy_decode,
    manner_guided_decode,
    project_to_manner,
    suppress_symbol,
    synth_text,
    wer,
)

mmap = default_manner_map()
render = lambda seq: CHAR_ALPHABET.render(seq, human=True)

#%%
# Synthesize clean character posteriors for a sentence.  The manner stream
# is projected from the clean matrix (summing each letter's column into its
# class).
reference = "ELEVEN TWENTY SEVEN FIFTY SEVEN"
clean = synth_text(reference, CHAR_ALPHABET, SynthSpec(noise_scale=0.05, seed=5))
manner = project_to_manner(clean, mmap)
print("frames:", clean.T)
print("manner greedy:", manner.alphabet.render(greedy_decode(manner)))

#%%
# Damage the character stream: push peaks 2, 3 and 4 ("EVE" inside
# "ELEVEN") into the blank.  Greedy decoding now drops those letters.
damaged = clean
for peak in (4, 3, 2):
    damaged = suppress_symbol(damaged, peak, 0.1)
baseline = render(greedy_decode(damaged))
print("baseline:", baseline, " WER", wer(reference, baseline))

#%%
# The manner stream still has a peak at every letter, so the rewritten
# character path emits one character per manner segment.
trace = manner_guided_decode(manner, damaged)
proposed = render(trace.final)
print("proposed:", proposed, " WER", wer(reference, proposed))
for seg, ch in trace.emitted[:6]:
    print(f"  frames {seg.start:3d}-{seg.end:3d}  manner {manner.alphabet.labels[seg.manner_class]}"
          f"  -> {CHAR_ALPHABET.labels[ch]}")

#%%
# The rewrite never emits the same symbol twice in a row, so words with
# doubled letters lose one of them even on clean input.
for text in ("SEVEN", "SEEN"):
    P = synth_text(text, CHAR_ALPHABET)
    print(text, "->", render(manner_guided_decode(project_to_manner(P, mmap), P).final))
