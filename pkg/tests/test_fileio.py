import json

import numpy as np
import pytest

from mannerctc.alphabet import CHAR_ALPHABET, Alphabet
from mannerctc.ctc import PosteriorMatrix
from mannerctc.evaluate import evaluate_manifest
from mannerctc.fileio import (
    FormatError,
    ManifestEntry,
    Report,
    SystemResult,
    UtteranceResult,
    format_report,
    read_gradient,
    read_manifest,
    read_posteriors,
    read_report_json,
    write_gradient,
    write_manifest,
    write_posteriors,
    write_report,
)
from mannerctc.metrics import EditStats, char_stats, word_stats
from mannerctc.synth import SynthSpec, synth_text

from helpers import random_rows

ABC = Alphabet(("<", "A", "B", ">"))


def test_posterior_roundtrip(tmp_path):
    P = PosteriorMatrix(random_rows(np.random.default_rng(0), 5, 4), ABC, frame_shift=10.0)
    write_posteriors(P, tmp_path / "p.post")
    Q = read_posteriors(tmp_path / "p.post")
    assert Q.alphabet == ABC
    assert Q.frame_shift == 10.0
    np.testing.assert_allclose(Q.probs, P.probs, rtol=1e-15, atol=0)


def test_posterior_file_layout(tmp_path):
    write_posteriors(PosteriorMatrix([[0.25, 0.25, 0.25, 0.25]], ABC), tmp_path / "p.post")
    assert (tmp_path / "p.post").read_text() == "#labels:<,A,B,>\n#frames:1\n0.25,0.25,0.25,0.25\n"


@pytest.mark.parametrize(
    "text",
    [
        "#labels:<,A,B,>\n#frames:1\n0.3,0.3,0.2,0.1\n",  # sums to 0.9
        "#labels:<,A,B,>\n#frames:1\n0.3,0.3,0.4\n",  # 3 values for 4 labels
        "#labels:<,A,B,>\n#frames:2\n0.25,0.25,0.25,0.25\n",  # missing row
        "#frames:1\n#labels:<,A,B,>\n0.25,0.25,0.25,0.25\n",  # header order
        "#labels:<,A,A,>\n#frames:1\n0.25,0.25,0.25,0.25\n",  # duplicate label
        "#labels:<,A,B,>\n#frames:1\n-0.25,0.75,0.25,0.25\n",  # negative
        "#labels:<,A,B,>\n#frames:x\n0.25,0.25,0.25,0.25\n",
        "#labels:<,A,B,>\n#frames:1\n0.25,0.25,abc,0.25\n",
    ],
)
def test_posterior_errors(tmp_path, text):
    (tmp_path / "bad.post").write_text(text)
    with pytest.raises(FormatError):
        read_posteriors(tmp_path / "bad.post")


def test_gradient_file(tmp_path):
    g = np.array([[-1.25, 0.0, 3.0, 0.0]])
    write_gradient(g, ABC, tmp_path / "g.post")
    assert "#kind:gradient" in (tmp_path / "g.post").read_text().splitlines()[2]
    values, alphabet = read_gradient(tmp_path / "g.post")
    np.testing.assert_array_equal(values, g)
    with pytest.raises(FormatError):
        read_posteriors(tmp_path / "g.post")


def _write_pair(tmp_path, name, text):
    P = synth_text(text, CHAR_ALPHABET, SynthSpec(seed=1))
    write_posteriors(P, tmp_path / f"{name}.post")


def test_manifest(tmp_path):
    _write_pair(tmp_path, "a", "HI")
    _write_pair(tmp_path, "b", "YO")
    (tmp_path / "m.jsonl").write_text(
        '{"id": "u1", "char_posteriors": "a.post", "reference": "HI"}\n'
        '{"id": "u2", "char_posteriors": "b.post", "reference": "YO"}\n'
    )
    entries = read_manifest(tmp_path / "m.jsonl")
    assert [e.id for e in entries] == ["u1", "u2"]
    assert entries[0].char_posteriors == tmp_path / "a.post"
    assert entries[1].manner_posteriors is None


def test_manifest_roundtrip(tmp_path):
    _write_pair(tmp_path, "a", "HI")
    entries = [ManifestEntry("x", tmp_path / "a.post", "HI", tmp_path / "a.post")]
    write_manifest(entries, tmp_path / "m.jsonl")
    assert json.loads((tmp_path / "m.jsonl").read_text())["char_posteriors"] == "a.post"
    assert read_manifest(tmp_path / "m.jsonl") == entries


def test_manifest_errors(tmp_path):
    _write_pair(tmp_path, "a", "HI")
    line = '{"id": "u1", "char_posteriors": "a.post", "reference": "HI"}\n'
    (tmp_path / "dup.jsonl").write_text(line * 2)
    with pytest.raises(FormatError, match="duplicate"):
        read_manifest(tmp_path / "dup.jsonl")
    (tmp_path / "missing.jsonl").write_text('{"id": "u1", "char_posteriors": "a.post"}\n')
    with pytest.raises(FormatError, match="reference"):
        read_manifest(tmp_path / "missing.jsonl")
    (tmp_path / "nofile.jsonl").write_text('{"id": "u1", "char_posteriors": "zz.post", "reference": "A"}\n')
    with pytest.raises(FormatError, match="zz.post"):
        read_manifest(tmp_path / "nofile.jsonl")
    (tmp_path / "empty.jsonl").write_text("")
    assert read_manifest(tmp_path / "empty.jsonl") == []


def _system(ref, hyp):
    return SystemResult(hyp, word_stats(ref, hyp), char_stats(ref, hyp))


def sample_report():
    return Report("toy", [
        UtteranceResult("a", "AB CD", _system("AB CD", "A CD"), _system("AB CD", "AB CD")),
        UtteranceResult("b", "EFG", _system("EFG", "EFX"), _system("EFG", "EFG"), EditStats(0, 0, 1, 3), "VF"),
    ])


def test_text_cell_matches_table_style():
    w = EditStats(89, 0, 0, 1000)
    c = EditStats(30, 0, 0, 1000)
    report = Report("AN4", [UtteranceResult("u", "x", SystemResult("", w, c), SystemResult("", w, c))])
    text = format_report(report, "text")
    assert "| AN4     | Proposed | 8.9   | 3.0   |" in text


def test_pooled_not_averaged():
    report = sample_report()
    agg = report.aggregate()
    # baseline chars: 1 deletion over 5, 1 substitution over 3 -> 2/8, not mean(1/5, 1/3)
    assert agg["baseline"]["cer"] == 2 / 8
    assert agg["baseline"]["wer"] == 2 / 3
    assert agg["mer"] == 1 / 3


def test_empty_report_headers_only():
    text = format_report(Report("empty"), "text")
    lines = [ln for ln in text.splitlines() if ln]
    assert lines[0].startswith("| Dataset")
    assert len(lines) == 4  # two headers, two rules
    assert format_report(Report("empty"), "csv") == "id,method,hypothesis,wer_pct,cer_pct,mer_pct\n"


def test_json_roundtrip(tmp_path):
    report = sample_report()
    write_report(report, "json", tmp_path / "r.json")
    back = read_report_json(tmp_path / "r.json")
    assert back == report
    assert json.loads((tmp_path / "r.json").read_text())["aggregate"] == report.aggregate()


def test_deterministic_bytes(tmp_path):
    for fmt in ("text", "json", "csv"):
        a = format_report(sample_report(), fmt)
        b = format_report(sample_report(), fmt)
        assert a == b


def test_unwritable_path(tmp_path):
    with pytest.raises(OSError):
        write_report(sample_report(), "text", tmp_path / "no" / "such" / "dir.txt")


def test_aggregate_matches_recomputation(tmp_path):
    texts = ["HELLO WORLD", "ABC DEF", "XYZ"]
    entries = []
    for i, t in enumerate(texts):
        _write_pair(tmp_path, f"u{i}", t)
        entries.append(ManifestEntry(f"u{i}", tmp_path / f"u{i}.post", t + " Q"))
    report = evaluate_manifest(entries, derive_manner=True)
    hyps = [u.baseline.hypothesis for u in report.per_utterance]
    refs = [e.reference for e in entries]
    edits = sum(char_stats(r, h).errors for r, h in zip(refs, hyps))
    length = sum(len(" ".join(r.split())) for r in refs)
    assert report.aggregate()["baseline"]["cer"] == edits / length
