"""Command-line front door: index a corpus, search it, serve it, evaluate it.

All subcommands go through the same SearchEngine pipeline as the HTTP API,
so a CLI search and an equivalent HTTP request return identical results.
Failures print a message to stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .engine import SearchEngine
from .errors import MetatuneError
from .evalharness import (
    AudioExperiment,
    PhraseExperiment,
    make_phrase_suite,
    noise_recall_experiment,
    sweep,
)
from .fpindex import FpIndexConfig
from .model import FieldKind, Query, parse_release_date
from .storage import corpus_audio_loader, load_corpus, load_indexes, persist_indexes
from .wavio import decode_wav


def _parse_weights(text: str) -> dict[FieldKind, float]:
    weights = {}
    for part in text.split(","):
        if not part.strip():
            continue
        try:
            name, value = part.split("=", 1)
            weights[FieldKind(name.strip())] = float(value)
        except (ValueError, KeyError):
            raise argparse.ArgumentTypeError(
                f"bad weight {part!r}; expected field=value with field one of "
                f"{[f.value for f in FieldKind]}"
            )
    return weights


def _parse_date(text: str):
    try:
        return parse_release_date(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a date (use YYYY[-MM[-DD]])")


def _snr_value(text: str) -> float:
    return math.inf if text.lower() in ("inf", "none", "clean") else float(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metatune", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_index = sub.add_parser("index", help="build and persist all indexes for a corpus")
    p_index.add_argument("corpus", type=Path, help="corpus .jsonl file")
    p_index.add_argument("out_dir", type=Path, help="snapshot directory to write")
    p_index.add_argument("--toggle-bits", type=int, default=1,
                         help="bit-error tolerance n of the fingerprint index (default 1)")
    p_index.add_argument("--skip-audio", action="store_true",
                         help="index text fields only, ignore audio assets")

    p_search = sub.add_parser("search", help="query a persisted index")
    p_search.add_argument("index_dir", type=Path)
    p_search.add_argument("--lyrics")
    p_search.add_argument("--title")
    p_search.add_argument("--artist")
    p_search.add_argument("--album")
    p_search.add_argument("--genre")
    p_search.add_argument("--audio", type=Path, help="WAV file to match")
    p_search.add_argument("--before", type=_parse_date, help="only songs released before this date")
    p_search.add_argument("--after", type=_parse_date, help="only songs released after this date")
    p_search.add_argument("--limit", type=int, default=20)
    p_search.add_argument("--weights", type=_parse_weights,
                          help="override merge weights, e.g. title=3,lyrics=1")
    p_search.add_argument("--json", action="store_true", help="machine-readable output")
    p_search.add_argument("--sequential", action="store_true",
                          help="run field searches sequentially instead of in parallel")

    p_serve = sub.add_parser("serve", help="serve the HTTP API over a persisted index")
    p_serve.add_argument("index_dir", type=Path)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8080)
    p_serve.add_argument("--ui", type=Path, default=None, help="static frontend directory to mount")

    p_eval = sub.add_parser("eval", help="run evaluation experiments")
    p_eval.add_argument("index_dir", type=Path)
    p_eval.add_argument("--suite", choices=["noise", "sweep"], required=True)
    p_eval.add_argument("--corpus", type=Path, required=True,
                        help="corpus .jsonl (audio paths are needed for clips)")
    p_eval.add_argument("--out", type=Path, required=True, help="report output directory")
    p_eval.add_argument("--seed", type=int, default=0)
    p_eval.add_argument("--clip-seconds", type=float, default=3.0)
    p_eval.add_argument("--queries-per-song", type=int, default=1)
    p_eval.add_argument("--snrs", default="inf,30,20,10,0",
                        help="comma-separated SNR dBs for the noise suite")
    p_eval.add_argument("--param", choices=["ngram_N", "toggle_bits", "coarse_min_matches", "ber_threshold"],
                        help="parameter for the sweep suite")
    p_eval.add_argument("--values", help="comma-separated values for the sweep suite")
    p_eval.add_argument("--snr", type=_snr_value, default=math.inf,
                        help="noise level applied to sweep queries")
    p_eval.add_argument("--flip-bits", type=int, default=0,
                        help="exact bit corruption per query word in sweeps")
    return parser


def _cmd_index(args) -> int:
    records = load_corpus(args.corpus)
    config = None
    if args.toggle_bits != 1:
        from .engine import EngineConfig

        config = EngineConfig(fp=FpIndexConfig(toggle_bits=args.toggle_bits))
    audio_for = None if args.skip_audio else corpus_audio_loader(records)
    engine = SearchEngine.build(records, audio_for=audio_for, config=config)
    persist_indexes(engine, args.out_dir)
    fingerprinted = len(engine.fp_index.store)
    print(f"indexed {len(records)} songs ({fingerprinted} with audio) -> {args.out_dir}")
    return 0


def _cmd_search(args) -> int:
    engine = load_indexes(args.index_dir, parallel=not args.sequential)
    audio = decode_wav(args.audio.read_bytes()) if args.audio else None
    query = Query(
        lyrics=args.lyrics,
        title=args.title,
        artist=args.artist,
        album=args.album,
        genre=args.genre,
        released_before=args.before,
        released_after=args.after,
        audio=audio,
        weight_overrides=args.weights,
    )
    response = engine.execute(query, limit=args.limit)
    if args.json:
        print(json.dumps(response.to_dict(include_timing=False)))
        return 0
    if not response.results:
        print("no results")
        return 0
    weights = ", ".join(f"{f.value}={w:.3f}" for f, w in response.applied_weights.items())
    print(f"applied weights: {weights}")
    for rank_pos, hit in enumerate(response.results, start=1):
        song = hit.song
        parts = ", ".join(
            f"{f.value}={score:.3f}" for f, score in hit.breakdown.items() if score > 0
        )
        print(
            f"{rank_pos:3d}. [{hit.final_score:.4f}] {song.title} — {song.artist} "
            f"({song.release_date.year})  {parts}"
        )
    return 0


def _cmd_serve(args) -> int:
    from .server import serve

    engine = load_indexes(args.index_dir)
    serve(engine, host=args.host, port=args.port, ui_dir=args.ui)
    return 0


def _cmd_eval(args) -> int:
    engine = load_indexes(args.index_dir)
    records = load_corpus(args.corpus)
    audio_for = corpus_audio_loader(records)
    audio = {r.id: audio_for(r) for r in records if r.audio is not None}
    if not audio:
        print("corpus has no audio assets; nothing to evaluate", file=sys.stderr)
        return 1

    if args.suite == "noise":
        snrs = [_snr_value(s) for s in args.snrs.split(",")]
        report = noise_recall_experiment(
            engine.fp_index,
            audio,
            snrs,
            clip_seconds=args.clip_seconds,
            queries_per_song=args.queries_per_song,
            seed=args.seed,
            extractor=engine.config.extractor,
        )
        name = "noise"
    else:
        if not args.param or not args.values:
            print("sweep suite needs --param and --values", file=sys.stderr)
            return 1
        values = [
            float(v) if args.param == "ber_threshold" else int(v)
            for v in args.values.split(",")
        ]
        if args.param == "ngram_N":
            profile = engine.config.profiles[FieldKind.LYRICS]
            experiment = PhraseExperiment(
                records=records,
                phrases=make_phrase_suite(records, profile, seed=args.seed),
                profile=profile,
            )
        else:
            experiment = AudioExperiment(
                audio=audio,
                extractor=engine.config.extractor,
                fp=engine.config.fp,
                clip_seconds=args.clip_seconds,
                queries_per_song=args.queries_per_song,
                seed=args.seed,
                snr_db=args.snr,
                flip_bits=args.flip_bits,
            )
        report = sweep(args.param, values, experiment)
        name = f"sweep_{args.param}"
    report.write(args.out, name=name)
    print(report.to_csv().rstrip())
    print(f"report written to {args.out}/{name}.csv")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "index": _cmd_index,
        "search": _cmd_search,
        "serve": _cmd_serve,
        "eval": _cmd_eval,
    }
    try:
        return handlers[args.command](args)
    except MetatuneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
