"""Text formats for posterior matrices, manifests and evaluation reports.

Posterior file::

    #labels:<,A,B,>
    #frames:2
    0.10000000000000001,0.80000000000000004,0.050000000000000003,0.050000000000000003
    ...

Optional ``#kind:`` and ``#frame_shift:`` header lines may follow
``#frames:``.  Gradient files carry ``#kind:gradient`` and skip the
row-sum checks.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .alphabet import Alphabet
from .ctc import PosteriorMatrix
from .metrics import EditStats


class FormatError(ValueError):
    pass


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def format_matrix(values: np.ndarray, alphabet: Alphabet, kind: str | None = None,
                  frame_shift: float | None = None) -> str:
    lines = ["#labels:" + ",".join(alphabet.labels), f"#frames:{values.shape[0]}"]
    if kind is not None:
        lines.append(f"#kind:{kind}")
    if frame_shift is not None:
        lines.append(f"#frame_shift:{_fmt(frame_shift)}")
    lines += [",".join(_fmt(v) for v in row) for row in values]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> tuple[np.ndarray, Alphabet, dict]:
    """Parse any matrix file; returns raw values, alphabet and header fields."""
    lines = text.splitlines()
    header = {}
    n = 0
    while n < len(lines) and lines[n].startswith("#"):
        key, sep, value = lines[n][1:].partition(":")
        if not sep:
            raise FormatError(f"line {n + 1}: malformed header {lines[n]!r}")
        header[key] = value
        n += 1
    if "labels" not in header or "frames" not in header:
        raise FormatError("missing #labels: or #frames: header")
    if n < 2 or not lines[0].startswith("#labels:") or not lines[1].startswith("#frames:"):
        raise FormatError("header must start with #labels: then #frames:")
    try:
        alphabet = Alphabet(tuple(header["labels"].split(",")))
    except ValueError as e:
        raise FormatError(f"bad label header: {e}") from None
    try:
        T = int(header["frames"])
    except ValueError:
        raise FormatError(f"bad frame count {header['frames']!r}") from None
    body = [ln for ln in lines[n:] if ln.strip()]
    if len(body) != T:
        raise FormatError(f"header says {T} frames, found {len(body)} rows")
    K = len(alphabet)
    values = np.empty((T, K))
    for t, ln in enumerate(body):
        cells = ln.split(",")
        if len(cells) != K:
            raise FormatError(f"row {t}: {len(cells)} values for {K} labels")
        try:
            values[t] = [float(c) for c in cells]
        except ValueError:
            raise FormatError(f"row {t}: non-numeric value") from None
    return values, alphabet, header


def write_posteriors(P: PosteriorMatrix, path) -> None:
    Path(path).write_text(format_matrix(P.probs, P.alphabet, frame_shift=P.frame_shift), encoding="utf-8")


def read_posteriors(path) -> PosteriorMatrix:
    values, alphabet, header = parse_matrix(Path(path).read_text(encoding="utf-8"))
    if header.get("kind", "posterior") != "posterior":
        raise FormatError(f"{path}: expected a posterior file, got kind {header['kind']!r}")
    shift = float(header["frame_shift"]) if "frame_shift" in header else None
    try:
        return PosteriorMatrix(values, alphabet, shift)
    except ValueError as e:
        raise FormatError(f"{path}: {e}") from None


def write_gradient(grad: np.ndarray, alphabet: Alphabet, path) -> None:
    Path(path).write_text(format_matrix(grad, alphabet, kind="gradient"), encoding="utf-8")


def read_gradient(path) -> tuple[np.ndarray, Alphabet]:
    values, alphabet, header = parse_matrix(Path(path).read_text(encoding="utf-8"))
    if header.get("kind") != "gradient":
        raise FormatError(f"{path}: not a gradient file")
    return values, alphabet


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    char_posteriors: Path
    reference: str
    manner_posteriors: Optional[Path] = None


def read_manifest(path) -> list[ManifestEntry]:
    """One JSON object per line with ``id``, ``char_posteriors``, ``reference``
    and optionally ``manner_posteriors``.  Relative paths resolve against the
    manifest's directory.
    """
    path = Path(path)
    root = path.parent
    entries = []
    seen = set()
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as e:
            raise FormatError(f"{path}:{lineno}: {e}") from None
        for key in ("id", "char_posteriors", "reference"):
            if key not in rec:
                raise FormatError(f"{path}:{lineno}: missing field {key!r}")
        uid = str(rec["id"])
        if uid in seen:
            raise FormatError(f"{path}:{lineno}: duplicate id {uid!r}")
        seen.add(uid)
        char_path = root / rec["char_posteriors"]
        manner_path = root / rec["manner_posteriors"] if rec.get("manner_posteriors") else None
        for p in (char_path, manner_path):
            if p is not None and not p.exists():
                raise FormatError(f"{path}:{lineno}: {uid}: file {p} does not exist")
        entries.append(ManifestEntry(uid, char_path, rec["reference"], manner_path))
    return entries


def write_manifest(entries, path) -> None:
    root = Path(path).parent
    lines = []
    for e in entries:
        rec = {"id": e.id, "char_posteriors": _rel(e.char_posteriors, root)}
        if e.manner_posteriors is not None:
            rec["manner_posteriors"] = _rel(e.manner_posteriors, root)
        rec["reference"] = e.reference
        lines.append(json.dumps(rec, ensure_ascii=False))
    Path(path).write_text("".join(ln + "\n" for ln in lines), encoding="utf-8")


def _rel(p, root: Path) -> str:
    p = Path(p)
    try:
        return p.relative_to(root).as_posix()
    except ValueError:
        return p.as_posix()


@dataclass(frozen=True)
class SystemResult:
    """One decoder's output on one utterance."""

    hypothesis: str
    words: EditStats
    chars: EditStats

    @property
    def wer(self) -> float:
        return self.words.rate

    @property
    def cer(self) -> float:
        return self.chars.rate


@dataclass(frozen=True)
class UtteranceResult:
    id: str
    reference: str
    baseline: SystemResult
    proposed: SystemResult
    manner: Optional[EditStats] = None
    manner_hypothesis: Optional[str] = None

    @property
    def mer(self) -> Optional[float]:
        return None if self.manner is None else self.manner.rate


METHODS = ("Baseline", "Proposed")


@dataclass
class Report:
    dataset: str = "synthetic"
    per_utterance: list[UtteranceResult] = field(default_factory=list)

    @property
    def has_mer(self) -> bool:
        return any(u.manner is not None for u in self.per_utterance)

    def pooled(self, method: str) -> tuple[EditStats, EditStats]:
        words, chars = EditStats(), EditStats()
        for u in self.per_utterance:
            r = u.baseline if method == "Baseline" else u.proposed
            words += r.words
            chars += r.chars
        return words, chars

    def pooled_manner(self) -> EditStats:
        total = EditStats()
        for u in self.per_utterance:
            if u.manner is not None:
                total += u.manner
        return total

    def aggregate(self) -> dict:
        out = {}
        for method in METHODS:
            words, chars = self.pooled(method)
            out[method.lower()] = {"wer": words.rate, "cer": chars.rate}
        if self.has_mer:
            out["mer"] = self.pooled_manner().rate
        return out

    def to_dict(self) -> dict:
        utts = []
        for u in self.per_utterance:
            rec = {"id": u.id, "reference": u.reference}
            for name in ("baseline", "proposed"):
                r = getattr(u, name)
                rec[name] = {
                    "hypothesis": r.hypothesis,
                    "wer": r.wer,
                    "cer": r.cer,
                    "word_edits": asdict(r.words),
                    "char_edits": asdict(r.chars),
                }
            if u.manner is not None:
                rec["mer"] = u.mer
                rec["manner_hypothesis"] = u.manner_hypothesis
                rec["manner_edits"] = asdict(u.manner)
            utts.append(rec)
        agg = self.aggregate() if self.per_utterance else {}
        return {"dataset": self.dataset, "aggregate": agg, "per_utterance": utts}


def pct(rate: float) -> str:
    return f"{100.0 * rate:.1f}"


def _table(header: list[str], rows: list[list[str]]) -> list[str]:
    widths = [max(len(r[i]) for r in [header, *rows]) for i in range(len(header))]
    line = lambda r: "| " + " | ".join(c.ljust(w) for c, w in zip(r, widths)) + " |"
    return [line(header), "|" + "|".join("-" * (w + 2) for w in widths) + "|"] + [line(r) for r in rows]


def format_report(report: Report, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        return _report_csv(report)
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")

    mer = report.has_mer
    head = ["Dataset", "Method", "% WER", "% CER"] + (["% MER"] if mer else [])
    rows = []
    if report.per_utterance:
        agg = report.aggregate()
        for method in METHODS:
            r = agg[method.lower()]
            row = [report.dataset, method, pct(r["wer"]), pct(r["cer"])]
            if mer:
                row.append(pct(agg["mer"]))
            rows.append(row)
    lines = _table(head, rows)

    uhead = ["Id", "Baseline % WER", "Baseline % CER", "Proposed % WER", "Proposed % CER"]
    uhead += ["% MER"] if mer else []
    urows = []
    for u in report.per_utterance:
        row = [u.id, pct(u.baseline.wer), pct(u.baseline.cer), pct(u.proposed.wer), pct(u.proposed.cer)]
        if mer:
            row.append("" if u.mer is None else pct(u.mer))
        urows.append(row)
    lines += [""] + _table(uhead, urows)
    return "\n".join(lines) + "\n"


def _report_csv(report: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "method", "hypothesis", "wer_pct", "cer_pct", "mer_pct"])
    for u in report.per_utterance:
        mer = "" if u.mer is None else pct(u.mer)
        for method, r in (("Baseline", u.baseline), ("Proposed", u.proposed)):
            w.writerow([u.id, method, r.hypothesis, pct(r.wer), pct(r.cer), mer])
    if report.per_utterance:
        agg = report.aggregate()
        mer = pct(agg["mer"]) if "mer" in agg else ""
        for method in METHODS:
            r = agg[method.lower()]
            w.writerow(["*pooled*", method, "", pct(r["wer"]), pct(r["cer"]), mer])
    return buf.getvalue()


def write_report(report: Report, fmt: str, path) -> None:
    text = format_report(report, fmt)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as e:
        raise OSError(f"cannot write report to {path}: {e.strerror}") from e


def _stats(d: dict) -> EditStats:
    return EditStats(**d)


def report_from_dict(data: dict) -> Report:
    """Inverse of :meth:`Report.to_dict`."""
    utts = []
    for rec in data["per_utterance"]:
        systems = [
            SystemResult(rec[n]["hypothesis"], _stats(rec[n]["word_edits"]), _stats(rec[n]["char_edits"]))
            for n in ("baseline", "proposed")
        ]
        manner = _stats(rec["manner_edits"]) if "manner_edits" in rec else None
        utts.append(UtteranceResult(rec["id"], rec["reference"], *systems, manner, rec.get("manner_hypothesis")))
    return Report(data["dataset"], utts)


def read_report_json(path) -> Report:
    return report_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
