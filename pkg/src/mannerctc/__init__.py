"""Manner-of-articulation guided CTC decoding on top of an exact CTC core."""
from .alphabet import (
    BLANK,
    CHAR_ALPHABET,
    DELETE,
    MANNER_ALPHABET,
    SPACE,
    Alphabet,
    AlphabetError,
    MannerMap,
    default_manner_map,
    map_transcript_to_manner,
    parse_alphabet,
    parse_manner_map,
)
from .ctc import CtcResult, PosteriorError, PosteriorMatrix, collapse, ctc_grad, ctc_log_forward, ctc_prob_bruteforce
from .decode import DecodeTrace, Segment, choose_segment_char, extract_segments, greedy_decode, manner_guided_decode
from .metrics import EditStats, cer, edit_ops, mer, wer
from .synth import SynthSpec, project_to_manner, suppress_symbol, synth_posteriors, synth_text

__version__ = "0.1.0"
