"""Command-line entry point: ``mannerctc {synth,decode,eval,loss,map}``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from .alphabet import CHAR_ALPHABET, default_manner_map, load_alphabet, load_manner_map, map_transcript_to_manner
from .ctc import ctc_grad, ctc_log_forward
from .decode import greedy_decode, manner_guided_decode
from .evaluate import evaluate_manifest
from .fileio import (
    ManifestEntry,
    format_report,
    read_manifest,
    read_posteriors,
    write_gradient,
    write_manifest,
    write_posteriors,
    write_report,
)
from .synth import SynthSpec, peak_spans, project_to_manner, suppress_symbol, synth_text

log = logging.getLogger("mannerctc")


class CliError(Exception):
    pass


def _mmap(args):
    return load_manner_map(args.manner_map) if args.manner_map else default_manner_map()


def _suppression(value: str) -> tuple[int, float]:
    try:
        i, f = value.split(",")
        return int(i), float(f)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected INDEX,FACTOR, got {value!r}") from None


def _spec(args) -> SynthSpec:
    return SynthSpec(args.frames_per_symbol, args.blank_gap, args.peak_prob, args.noise_scale, args.seed)


def _synth_one(text, alphabet, spec, mmap, suppress):
    Pc = synth_text(text, alphabet, spec)
    # manner stream comes from the clean matrix
    Pm = project_to_manner(Pc, mmap)
    for i, factor in suppress:
        Pc = suppress_symbol(Pc, i, factor)
    return Pc, Pm


def cmd_synth(args) -> int:
    alphabet = load_alphabet(args.alphabet) if args.alphabet else CHAR_ALPHABET
    spec = _spec(args)
    mmap = _mmap(args)
    if args.batch:
        return _synth_batch(args, alphabet, spec, mmap)
    if args.text is None and args.text_file is None:
        raise CliError("synth needs --text, --text-file or --batch")
    if args.out is None:
        raise CliError("synth needs --out")
    text = args.text if args.text is not None else Path(args.text_file).read_text(encoding="utf-8").strip()
    Pc, Pm = _synth_one(text, alphabet, spec, mmap, args.suppress)
    write_posteriors(Pc, args.out)
    if args.manner_out:
        write_posteriors(Pm, args.manner_out)
    return 0


def _synth_batch(args, alphabet, spec, mmap) -> int:
    """One utterance per line of --batch; writes posteriors and manifest.jsonl into --out-dir."""
    if not args.out_dir:
        raise CliError("--batch needs --out-dir")
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)
    lines = [ln.strip() for ln in Path(args.batch).read_text(encoding="utf-8").splitlines()]
    entries = []
    for n, text in enumerate(t for t in lines if t):
        uid = f"utt{n:05d}"
        spec_n = SynthSpec(spec.frames_per_symbol, spec.blank_gap, spec.peak_prob, spec.noise_scale, spec.seed + n)
        suppress = list(args.suppress)
        if args.suppress_random is not None:
            n_peaks = len(peak_spans(synth_text(text, alphabet, spec_n)))
            if n_peaks > 1:
                suppress.append((int(rng.integers(1, n_peaks)), args.suppress_random))
        Pc, Pm = _synth_one(text, alphabet, spec_n, mmap, suppress)
        write_posteriors(Pc, out / f"{uid}.char.post")
        write_posteriors(Pm, out / f"{uid}.manner.post")
        entries.append(ManifestEntry(uid, out / f"{uid}.char.post", text, out / f"{uid}.manner.post"))
    write_manifest(entries, out / "manifest.jsonl")
    print(out / "manifest.jsonl")
    return 0


def cmd_decode(args) -> int:
    Pc = read_posteriors(args.posteriors)
    if args.mode == "greedy":
        result = greedy_decode(Pc)
    else:
        if args.manner:
            Pm = read_posteriors(args.manner)
        elif args.derive_manner:
            Pm = project_to_manner(Pc, _mmap(args))
        else:
            raise CliError("manner mode needs --manner FILE or --derive-manner")
        trace = manner_guided_decode(Pm, Pc, args.split_on_class_change)
        for seg, ch in trace.emitted:
            log.info("frames %d-%d manner %s -> %s", seg.start, seg.end,
                     Pm.alphabet.labels[seg.manner_class], Pc.alphabet.labels[ch])
        result = trace.final
    print(Pc.alphabet.render(result, human=args.human, sep=args.sep))
    return 0


def cmd_eval(args) -> int:
    entries = read_manifest(args.manifest)
    report = evaluate_manifest(
        entries,
        _mmap(args),
        split_on_class_change=args.split_on_class_change,
        derive_manner=args.derive_manner,
        with_mer=args.mer,
        jobs=args.jobs,
        dataset=args.dataset or Path(args.manifest).stem,
    )
    if args.out:
        write_report(report, args.format, args.out)
        # summary: the pooled table only
        sys.stdout.write(format_report(report, "text").split("\n\n")[0] + "\n")
    else:
        sys.stdout.write(format_report(report, args.format))
    return 0


def cmd_loss(args) -> int:
    P = read_posteriors(args.posteriors)
    z = P.alphabet.encode(args.target)
    if args.grad:
        res = ctc_grad(P, z)
        write_gradient(res.gradient, P.alphabet, args.grad)
    else:
        res = ctc_log_forward(P, z)
    print(repr(res.log_prob))
    return 0


def cmd_map(args) -> int:
    if args.text is None:
        args.text = sys.stdin.read().rstrip("\n")
    out = map_transcript_to_manner(args.text, _mmap(args))
    print("".join(" " if (args.human and t == ">") else t for t in out))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mannerctc", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="write synthetic peaky posteriors for a transcript")
    s.add_argument("--text")
    s.add_argument("--text-file")
    s.add_argument("--batch", help="file with one transcript per line")
    s.add_argument("--out", help="character posterior output file")
    s.add_argument("--manner-out", help="projected manner posterior output file")
    s.add_argument("--out-dir", help="output directory for --batch")
    s.add_argument("--alphabet")
    s.add_argument("--manner-map")
    s.add_argument("--frames-per-symbol", type=int, default=2)
    s.add_argument("--blank-gap", type=int, default=1)
    s.add_argument("--peak-prob", type=float, default=0.9)
    s.add_argument("--noise-scale", type=float, default=0.05)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--suppress", type=_suppression, action="append", default=[],
                   metavar="INDEX,FACTOR", help="scale peak INDEX (0-based) by FACTOR into the blank")
    s.add_argument("--suppress-random", type=float, metavar="FACTOR",
                   help="with --batch: suppress one random non-initial peak per utterance")
    s.set_defaults(func=cmd_synth)

    d = sub.add_parser("decode", help="decode a posterior file")
    d.add_argument("mode", choices=["greedy", "manner"])
    d.add_argument("posteriors")
    d.add_argument("--manner", help="manner posterior file")
    d.add_argument("--derive-manner", action="store_true")
    d.add_argument("--manner-map")
    d.add_argument("--split-on-class-change", action="store_true")
    d.add_argument("--human", action="store_true", help="print space as ' ' instead of '>'")
    d.add_argument("--sep", default="", help="separator between output tokens")
    d.set_defaults(func=cmd_decode)

    e = sub.add_parser("eval", help="score baseline and manner-guided decoding over a manifest")
    e.add_argument("manifest")
    e.add_argument("--out")
    e.add_argument("--format", choices=["text", "json", "csv"], default="text")
    e.add_argument("--jobs", type=int, default=1)
    e.add_argument("--mer", action="store_true", help="also score the manner stream")
    e.add_argument("--derive-manner", action="store_true")
    e.add_argument("--manner-map")
    e.add_argument("--split-on-class-change", action="store_true")
    e.add_argument("--dataset")
    e.set_defaults(func=cmd_eval)

    lo = sub.add_parser("loss", help="CTC log-probability of a target")
    lo.add_argument("posteriors")
    lo.add_argument("--target", required=True)
    lo.add_argument("--grad", help="write d(-log P)/d(posterior) to this file")
    lo.set_defaults(func=cmd_loss)

    m = sub.add_parser("map", help="map a character transcript to manner classes")
    m.add_argument("--text")
    m.add_argument("--manner-map")
    m.add_argument("--human", action="store_true")
    m.set_defaults(func=cmd_map)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (CliError, ValueError, OSError, IndexError, RuntimeError) as e:
        print(f"mannerctc {args.command}: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
