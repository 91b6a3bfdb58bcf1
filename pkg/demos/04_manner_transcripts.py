"""
Manner transcripts and the manner error rate
============================================

Reference transcripts for the manner detector come from mapping every
letter to its manner class.  MER is then an ordinary edit rate over manner
symbols, with ``>`` marking word boundaries.
"""
from mannerctc import default_manner_map, map_transcript_to_manner, mer, parse_manner_map
from mannerctc.metrics import edit_ops

mmap = default_manner_map()

#%%
for text in ("ONE", "SEVEN", "DON'T STOP"):
    print(f"{text:12s} -> {''.join(map_transcript_to_manner(text, mmap))}")

#%%
# The apostrophe is orthographic and is dropped.  A custom table can be
# loaded from tab-separated CHAR<TAB>CLASS lines.
custom = parse_manner_map("A\tV\nB\tS\n'\tF\n")
print("".join(map_transcript_to_manner("AB'", custom)))

#%%
print("MER(ONE, VNV) =", mer("ONE", "VNV", mmap))
print("MER(ONE, VN)  =", mer("ONE", "VN", mmap))
print(edit_ops(list("VNV"), list("VN")))
