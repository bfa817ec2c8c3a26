"""Command-line entry points.

Subcommands cover the whole workflow: build the pattern library, mask
sentences for training or inference, run the full generation pipeline,
drive the corpus-construction loop, and evaluate systems. All file IO is
streaming; output order always follows input order, so runs are
reproducible given the same config, seed and backend mode.
"""

from __future__ import annotations

import argparse
import json
import sys

from .backends import (BackendTagger, CachingBackend, HttpBackend, MockBackend,
                       ReplayBackend, resolve_endpoint)
from .config import EngineConfig, load_config
from .corpus import (clean_corpus, corpus_stats, filter_by_classifier,
                     merge_annotations, read_batch, read_records,
                     sample_for_annotation, write_batch, write_records)
from .errors import EmptyInput, MoverError
from .evaluation import evaluate_systems, read_cases, run_copy, run_r1, run_r3
from .masking import PatternSet
from .overgenerate import make_training_pairs
from .pipeline import HyperboleParaphraser, PatternMasker
from .ranking import rank_ablation
from .text import RuleTagger, analyze


def _log(message: str) -> None:
    print(message, file=sys.stderr)


def _read_lines(path):
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield line


def _load_engine_config(args) -> EngineConfig:
    config = load_config(args.config) if getattr(args, "config", None) else EngineConfig()
    for key in ("gamma", "epsilon", "threshold", "num_return", "seed"):
        value = getattr(args, key, None)
        if value is not None:
            setattr(config, key, value)
    if getattr(args, "top_k", None) is not None:
        config.top_k_masks = args.top_k
    if getattr(args, "embeddings", None):
        config.embedding_path = args.embeddings
    if getattr(args, "patterns", None):
        config.pattern_path = args.patterns
    config.__post_init__()
    return config


def _make_backend(args, config: EngineConfig):
    if getattr(args, "replay", None):
        return ReplayBackend(args.replay, seed=config.seed)
    if getattr(args, "mock", False):
        return MockBackend(seed=config.seed)
    endpoint = resolve_endpoint(getattr(args, "backend", None) or config.backend_endpoint)
    if endpoint:
        return HttpBackend(endpoint)
    return None


def _require_backend(args, config: EngineConfig):
    backend = _make_backend(args, config)
    if backend is None:
        raise MoverError(
            "no backend configured: pass --mock, --replay FILE, --backend URL "
            "or set MOVER_BACKEND")
    return backend


def _load_store(config: EngineConfig, required: bool):
    from .embeddings import EmbeddingStore, load_embeddings
    if config.embedding_path:
        counters: dict = {}
        store = load_embeddings(config.embedding_path, counters=counters)
        if counters["malformed"]:
            _log(f"embeddings: skipped {counters['malformed']} malformed lines")
        return store
    if required:
        raise MoverError("this command needs --embeddings (or embedding_path in the config)")
    return EmbeddingStore({})


def cmd_patterns(args) -> int:
    pairs = [json.loads(line) for line in _read_lines(args.pairs)]
    if not pairs:
        raise EmptyInput(f"no sentence pairs in {args.pairs}")
    masker = PatternMasker(span_source=args.span_source,
                           max_pattern_len=args.max_pattern_len,
                           min_support=args.min_support)
    masker.fit(pairs)
    masker.patterns_.save(args.output)
    counters = masker.extraction_counters_
    _log(f"patterns: {len(masker.patterns_)} distinct "
         f"(used {counters['used']} pairs, skipped {counters['no_overlap']} no-overlap, "
         f"{counters['degenerate']} degenerate, {counters['too_long']} over-length)")
    return 0


def cmd_mask(args) -> int:
    config = _load_engine_config(args)
    patterns = PatternSet.load(args.patterns)
    backend = _make_backend(args, config)
    tagger = BackendTagger(backend) if backend else RuleTagger()
    skipped = 0
    with open(args.output, "w", encoding="utf-8") as out:
        if args.mode == "train":
            store = _load_store(config, required=True)
            counters: dict = {}
            sentences = (analyze(line, tagger) for line in _read_lines(args.input))
            for pair in make_training_pairs(sentences, patterns, store,
                                            k=config.top_k_masks, counters=counters):
                out.write(json.dumps({"masked": pair.masked, "original": pair.original},
                                     ensure_ascii=False) + "\n")
            skipped = counters["skipped_no_match"]
        else:
            masker = PatternMasker(mode="infer", tagger=tagger).set_patterns(patterns)
            for line in _read_lines(args.input):
                masks = masker.transform([line])[0]
                if not masks:
                    skipped += 1
                    continue
                for mask in masks:
                    out.write(json.dumps(
                        {"source": line, "masked": mask.masked_text,
                         "span": [mask.masked_span.start, mask.masked_span.end]},
                        ensure_ascii=False) + "\n")
    if skipped:
        _log(f"mask: skipped {skipped} sentences with no pattern match")
    return 0


def cmd_generate(args) -> int:
    config = _load_engine_config(args)
    patterns = PatternSet.load(args.patterns)
    backend = CachingBackend(_require_backend(args, config))
    engine = HyperboleParaphraser(backend=backend, patterns=patterns,
                                  gamma=config.gamma, epsilon=config.epsilon,
                                  num_return=config.num_return, jobs=args.jobs)
    fallbacks = 0
    with open(args.output, "w", encoding="utf-8") as out:
        records = engine.generate_records(list(_read_lines(args.input)))
        for record in records:
            if record["fallback"] == "no_pattern_match":
                fallbacks += 1
            out.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
    if fallbacks:
        _log(f"generate: {fallbacks} sentences had no maskable span and were echoed")
    return 0


def cmd_build_corpus(args) -> int:
    config = _load_engine_config(args)
    counters: dict = {}
    if args.stage == "clean":
        n = write_records(clean_corpus(_read_lines(args.input), counters), args.output)
        _log(f"clean: kept {n}, dropped {counters['duplicates']} duplicates, "
             f"{counters['no_initial_capital']} without initial capital")
    elif args.stage == "filter":
        backend = _require_backend(args, config)
        stream = filter_by_classifier(read_records(args.input), backend.hyperbole_score,
                                      threshold=config.threshold, jobs=args.jobs,
                                      counters=counters)
        n = write_records(stream, args.output)
        _log(f"filter: kept {n} of {counters['kept'] + counters['dropped']} "
             f"at threshold {config.threshold}")
    elif args.stage == "sample":
        pool = list(read_records(args.input))
        batch = sample_for_annotation(pool, args.n, seed=config.seed)
        write_batch(batch, args.output)
        _log(f"sample: wrote {len(batch.records)} records for annotation")
    elif args.stage == "merge":
        kept, dropped, agreement = merge_annotations(read_batch(args.input))
        write_records(kept, args.output)
        _log(f"merge: kept {len(kept)}, dropped {dropped}, "
             f"raw agreement {agreement:.3f}")
    else:  # stats
        stats = corpus_stats(list(read_records(args.input)))
        with open(args.output, "w", encoding="utf-8") as out:
            json.dump(stats.__dict__, out, indent=2, sort_keys=True)
            out.write("\n")
    return 0


def cmd_eval(args) -> int:
    config = _load_engine_config(args)
    cases = read_cases(args.cases)
    names = [s.strip() for s in args.systems.split(",") if s.strip()]
    needs_backend = any(n != "copy" for n in names)
    backend = CachingBackend(_require_backend(args, config)) if needs_backend else None
    patterns = PatternSet.load(args.patterns) if args.patterns else None
    corpus = list(read_records(args.corpus)) if args.corpus else None
    store = _load_store(config, required=False)

    def _mover(mode):
        engine = HyperboleParaphraser(backend=backend, patterns=patterns,
                                      gamma=config.gamma, epsilon=config.epsilon,
                                      num_return=config.num_return)
        if mode == "full":
            return lambda case: engine.generate_one(case.literal)["output"]

        def run(case):
            record = engine.generate_one(case.literal)
            if record["candidates"] == 0:
                return record["output"]
            masker = PatternMasker(mode="infer").set_patterns(patterns)
            masks = masker.transform([case.literal])[0]
            from .overgenerate import overgenerate
            cands = overgenerate(masks, backend, num_return=config.num_return)
            best = rank_ablation(cands.source, cands, backend.hyperbole_score,
                                 backend.paraphrase_score, config.ranker(),
                                 mode=mode, seed=config.seed)
            return best.text
        return run

    systems = {}
    for name in names:
        if name == "copy":
            systems[name] = run_copy
        elif name == "r1":
            if corpus is None:
                raise MoverError("r1 needs --corpus")
            systems[name] = lambda case: run_r1(case, corpus, backend.paraphrase_score)
        elif name == "r3":
            if corpus is None or patterns is None:
                raise MoverError("r3 needs --corpus and --patterns")
            systems[name] = lambda case: run_r3(
                case, corpus, patterns, store, backend.hyperbole_score,
                backend.paraphrase_score, config.ranker(),
                tagger=BackendTagger(backend))
        elif name == "mover":
            if patterns is None:
                raise MoverError("mover needs --patterns")
            systems[name] = _mover("full")
        elif name == "mover-hypo-only":
            if patterns is None:
                raise MoverError("mover-hypo-only needs --patterns")
            systems[name] = _mover("hypo_only")
        elif name == "mover-random":
            if patterns is None:
                raise MoverError("mover-random needs --patterns")
            systems[name] = _mover("random")
        else:
            raise MoverError(f"unknown system {name!r}")

    report = evaluate_systems(cases, systems, jobs=args.jobs)
    with open(args.output, "w", encoding="utf-8") as out:
        json.dump(report.to_json(), out, indent=2, sort_keys=True, ensure_ascii=False)
        out.write("\n")
    print(report.table())
    return 0


def _add_common(parser, *, backend=True, seed=True):
    parser.add_argument("--config", help="key=value config file; flags override it")
    if backend:
        parser.add_argument("--backend", help="model service endpoint URL")
        parser.add_argument("--mock", action="store_true",
                            help="use the in-process deterministic mock backend")
        parser.add_argument("--replay", help="JSON file with scripted backend responses")
    if seed:
        parser.add_argument("--seed", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mover",
        description="Turn literal sentences into hyperbolic paraphrases by "
                    "masking likely spans, over-generating infills and ranking them.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("patterns", help="build the POS pattern library from sentence pairs")
    p.add_argument("pairs", help="JSONL with hypo / non_hypo fields per line")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--span-source", choices=("overlap", "residual"), default="overlap")
    p.add_argument("--max-pattern-len", type=int, default=5)
    p.add_argument("--min-support", type=int, default=1)
    p.set_defaults(func=cmd_patterns)

    p = sub.add_parser("mask", help="mask sentences for training or inference")
    p.add_argument("input", help="plain text, one sentence per line")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--patterns", required=True)
    p.add_argument("--mode", choices=("train", "infer"), default="infer")
    p.add_argument("--embeddings")
    p.add_argument("-k", "--top-k", type=int, default=None,
                   help="masks per sentence in train mode")
    _add_common(p)
    p.set_defaults(func=cmd_mask)

    p = sub.add_parser("generate", help="run the full generation pipeline")
    p.add_argument("input", help="plain text, one literal sentence per line")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--patterns", required=True)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--num-return", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("build-corpus", help="corpus construction stages")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--stage", choices=("clean", "filter", "sample", "merge", "stats"),
                   default="clean")
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--n", type=int, default=100, help="sample size for --stage sample")
    p.add_argument("--jobs", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=cmd_build_corpus)

    p = sub.add_parser("eval", help="evaluate systems on literal/reference cases")
    p.add_argument("cases", help="JSONL with literal and references fields")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--systems", default="copy",
                   help="comma list: copy,r1,r3,mover,mover-hypo-only,mover-random")
    p.add_argument("--corpus", help="corpus JSONL for the retrieval baselines")
    p.add_argument("--patterns")
    p.add_argument("--embeddings")
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--num-return", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=cmd_eval)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MoverError, OSError) as exc:
        _log(f"error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
