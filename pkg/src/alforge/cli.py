"""Command-line interface: grammar inspection, template enumeration, corpus
generation, baseline scoring and the evaluation metrics, plus a `pipeline`
command chaining everything for a set of grammars.

All randomness is derived from --seed; identical config and seed produce
byte-identical artifacts.  Worker count comes from --threads or the
GCG_ALFORGE_THREADS environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .corpus import (
    LONG_BAND,
    MEDIUM_BAND,
    SHORT_BAND,
    Lexicon,
    derive_seed,
    gen_minimal_pairs,
    gen_targeted,
    load_sentences,
    sample_split,
    save_sentences,
)
from .evaluation import (
    ScoreRecord,
    TypologyTable,
    judge_pairs,
    load_scores,
    ngram_score,
    ngram_train,
    perplexity,
    plausibility,
    save_scores,
    ta_score,
    write_report,
)
from .grammars import Grammar, enumerate_grammars, grammar_by_id, grammar_to_text
from .parser import ChartParser
from .templates import (
    augment_long,
    enumerate_templates,
    load_templates,
    sample_long_templates,
    save_templates,
)


@dataclass(frozen=True)
class RunConfig:
    """Knobs shared by the corpus and pipeline subcommands."""

    master_seed: int = 0
    out_dir: str = "out"
    lexicon_path: str | None = None
    typology_path: str | None = None
    max_len: int = 10
    train_per_length: int = 1000
    test_per_length: int = 100
    long_per_length: int = 50
    long_templates_per_length: int = 20
    targeted_n: int = 500
    pair_n: int = 100
    ngram_order: int = 3
    ngram_k: float = 0.1
    threads: int = 1

    def __post_init__(self) -> None:
        counts = (
            self.train_per_length,
            self.test_per_length,
            self.long_per_length,
            self.long_templates_per_length,
            self.targeted_n,
            self.pair_n,
        )
        if any(c < 0 for c in counts):
            raise ValueError("counts must be >= 0")

    def scaled(self, factor: float) -> "RunConfig":
        def s(v: int) -> int:
            return max(1, round(v * factor)) if v > 0 else 0

        return replace(
            self,
            train_per_length=s(self.train_per_length),
            test_per_length=s(self.test_per_length),
            long_per_length=s(self.long_per_length),
            targeted_n=s(self.targeted_n),
            pair_n=s(self.pair_n),
        )


_CONFIG_FIELDS = {f.name: f.type for f in fields(RunConfig)}


def load_config_file(path: str) -> dict:
    """Flat key=value config; '#' starts a comment line."""
    values: dict = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if not sep or key not in _CONFIG_FIELDS:
                raise ValueError(f"bad config line {lineno}: {line!r}")
            if key in ("lexicon_path", "typology_path", "out_dir"):
                values[key] = value
            elif key == "ngram_k":
                values[key] = float(value)
            else:
                values[key] = int(value)
    return values


def _lexicon(cfg: RunConfig) -> Lexicon:
    if cfg.lexicon_path:
        return Lexicon.load(cfg.lexicon_path)
    return Lexicon.default()


def _typology(cfg: RunConfig) -> TypologyTable:
    if cfg.typology_path:
        return TypologyTable.load(cfg.typology_path)
    return TypologyTable.default()


def _thread_count(args) -> int:
    if getattr(args, "threads", None):
        return args.threads
    env = os.environ.get("GCG_ALFORGE_THREADS")
    return int(env) if env else 1


def _build_config(args) -> RunConfig:
    values: dict = {}
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    for name in _CONFIG_FIELDS:
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    values["threads"] = _thread_count(args)
    if getattr(args, "seed", None) is not None:
        values["master_seed"] = args.seed
    cfg = RunConfig(**values)
    if getattr(args, "scale", None) is not None:
        cfg = cfg.scaled(args.scale)
    return cfg


# --- dataset generation -----------------------------------------------------


def build_dataset(g: Grammar, cfg: RunConfig, out_dir: Path) -> dict[str, Path]:
    """Short/Medium/Long splits for one grammar; returns split -> file."""
    lex = _lexicon(cfg)
    seed = cfg.master_seed
    parser = ChartParser(g.policy)
    templates = enumerate_templates(g, cfg.max_len)
    short_t = [t for t in templates if len(t) <= SHORT_BAND[1]]
    medium_t = [t for t in templates if MEDIUM_BAND[0] <= len(t) <= MEDIUM_BAND[1]]

    train = sample_split(
        g, short_t, lex, cfg.train_per_length, SHORT_BAND,
        derive_seed(seed, g.params, "train"), "ShortTrain",
    )
    train_vocab = {w for s in train for w in s.tokens}
    test_lex = lex.restricted(train_vocab)
    avoid = {tuple(s.tokens) for s in train}

    splits = {"ShortTrain": train}
    splits["ShortTest"] = sample_split(
        g, short_t, test_lex, cfg.test_per_length, SHORT_BAND,
        derive_seed(seed, g.params, "short-test"), "ShortTest", avoid=avoid,
    )
    splits["MediumTest"] = sample_split(
        g, medium_t, test_lex, cfg.test_per_length, MEDIUM_BAND,
        derive_seed(seed, g.params, "medium-test"), "MediumTest", avoid=avoid,
    )
    long_t = sample_long_templates(
        short_t + medium_t, g, cfg.long_templates_per_length,
        LONG_BAND[0], LONG_BAND[1],
        seed=derive_seed(seed, g.params, "long-templates"), parser=parser,
    )
    splits["LongTest"] = sample_split(
        g, long_t, test_lex, cfg.long_per_length, LONG_BAND,
        derive_seed(seed, g.params, "long-test"), "LongTest", avoid=avoid,
    )

    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {}
    for name, sentences in splits.items():
        path = out_dir / f"{g.params}_{name}.jsonl"
        save_sentences(sentences, path)
        paths[name] = path
    return paths


# --- subcommand handlers ----------------------------------------------------


def cmd_list_grammars(args) -> None:
    for g in enumerate_grammars():
        alias = f" aliases={','.join(g.aliases)}" if g.aliases else ""
        print(f"{g.params} {g.base_order}{alias}")


def cmd_gen_grammar(args) -> None:
    text = grammar_to_text(grammar_by_id(args.params))
    if args.out:
        Path(args.out).write_text(text)
    else:
        print(text, end="")


def cmd_enum_templates(args) -> None:
    g = grammar_by_id(args.params)
    templates = enumerate_templates(g, args.max_len)
    if args.out:
        save_templates(templates, args.out)
    else:
        for t in templates:
            print(" ".join(t))


def cmd_augment_long(args) -> None:
    g = grammar_by_id(args.params)
    templates = load_templates(args.templates)
    if args.per_length:
        out = sample_long_templates(
            templates, g, args.per_length, args.min_len, args.max_len,
            seed=derive_seed(args.seed, g.params, "long-templates"),
        )
    else:
        out = augment_long(templates, g, args.min_len, args.max_len)
    if args.out:
        save_templates(out, args.out)
    else:
        for t in out:
            print(" ".join(t))


def cmd_gen_dataset(args) -> None:
    cfg = _build_config(args)
    out_dir = Path(cfg.out_dir)
    for params in args.params:
        paths = build_dataset(grammar_by_id(params), cfg, out_dir)
        for name, path in sorted(paths.items()):
            print(f"{params} {name} {path}")


def cmd_gen_targeted(args) -> None:
    cfg = _build_config(args)
    g = grammar_by_id(args.params)
    kind = {"recursive": "Recursive", "embedded": "Embedded"}[args.kind]
    sentences = gen_targeted(
        g, kind, _lexicon(cfg), cfg.targeted_n,
        derive_seed(cfg.master_seed, g.params, f"targeted-{kind}"),
    )
    out = Path(args.out or f"{g.params}_{kind}.jsonl")
    save_sentences(sentences, out)
    print(f"{g.params} {kind} {out}")


def cmd_gen_pairs(args) -> None:
    cfg = _build_config(args)
    g = grammar_by_id(args.params)
    kind = {"case": "CaseType", "verb": "VerbType"}[args.kind]
    source = load_sentences(args.source)
    pairs = gen_minimal_pairs(
        g, kind, source, _lexicon(cfg), cfg.pair_n,
        derive_seed(cfg.master_seed, g.params, f"pairs-{kind}"),
    )
    out = Path(args.out or f"{g.params}_{kind}_pairs.jsonl")
    with open(out, "w") as fh:
        for good, bad in pairs:
            fh.write(json.dumps(
                {"grammatical": good.to_json(), "ungrammatical": bad.to_json()},
                sort_keys=True) + "\n")
    print(f"{g.params} {kind} {out}")


def cmd_score(args) -> None:
    if args.model != "ngram":
        raise ValueError(f"unknown model: {args.model}")
    train = load_sentences(args.train)
    model = ngram_train(train, args.order, args.k)
    records = ngram_score(model, load_sentences(args.input))
    save_scores(records, args.out)
    print(f"scored {len(records)} sentences -> {args.out}")


def _ppl_by_grammar(records) -> dict[str, float]:
    grouped: dict[str, list[ScoreRecord]] = {}
    for r in records:
        grouped.setdefault(r.grammar_id, []).append(r)
    return {gid: perplexity(rs) for gid, rs in grouped.items()}


def cmd_ta_corr(args) -> None:
    cfg = _build_config(args)
    table = _typology(cfg)
    records = []
    for path in args.scores:
        records.extend(load_scores(path))
    ppls = _ppl_by_grammar(records)
    r, p = ta_score(ppls, table)
    print(f"ta={100 * r:.1f} p={p:.4g} typology={table.provenance_hash()}")
    if args.out:
        rows = []
        for g in enumerate_grammars():
            rows.append({
                "grammar_id": g.params,
                "base_order": g.base_order,
                "split": args.split,
                "ppl": repr(ppls[g.params]),
                "plausibility": repr(plausibility(g, table)),
            })
        write_report(args.out, rows, {
            "grammar_id": "ALL", "split": args.split,
            "r": repr(r), "p_value": repr(p),
            "typology_hash": table.provenance_hash(),
        })


def cmd_judge(args) -> None:
    good = load_scores(args.good)
    bad = load_scores(args.bad)
    if len(good) != len(bad):
        raise ValueError("pair score files differ in length")
    acc = judge_pairs(list(zip(good, bad)))
    print(f"accuracy={acc:.4f} pairs={len(good)}")


def _pipeline_one(params: str, cfg: RunConfig, out_dir: Path) -> dict:
    g = grammar_by_id(params)
    lex = _lexicon(cfg)
    seed = cfg.master_seed
    paths = build_dataset(g, cfg, out_dir)

    targeted = {}
    for kind in ("Recursive", "Embedded"):
        sents = gen_targeted(
            g, kind, lex, cfg.targeted_n,
            derive_seed(seed, g.params, f"targeted-{kind}"),
        )
        path = out_dir / f"{g.params}_{kind}.jsonl"
        save_sentences(sents, path)
        targeted[kind] = sents

    medium = load_sentences(paths["MediumTest"])
    pair_sets = {}
    for kind in ("CaseType", "VerbType"):
        pairs = gen_minimal_pairs(
            g, kind, medium, lex, cfg.pair_n,
            derive_seed(seed, g.params, f"pairs-{kind}"),
        )
        path = out_dir / f"{g.params}_{kind}_pairs.jsonl"
        with open(path, "w") as fh:
            for good, bad in pairs:
                fh.write(json.dumps(
                    {"grammatical": good.to_json(), "ungrammatical": bad.to_json()},
                    sort_keys=True) + "\n")
        pair_sets[kind] = pairs

    train = load_sentences(paths["ShortTrain"])
    model = ngram_train(train, cfg.ngram_order, cfg.ngram_k)
    ppls = {}
    for split in ("ShortTest", "MediumTest", "LongTest"):
        records = ngram_score(model, load_sentences(paths[split]))
        save_scores(records, out_dir / f"{g.params}_{split}_scores.jsonl")
        ppls[split] = perplexity(records)
    for kind, sents in targeted.items():
        records = ngram_score(model, sents)
        save_scores(records, out_dir / f"{g.params}_{kind}_scores.jsonl")
        ppls[kind] = perplexity(records)

    accuracy = {}
    for kind, pairs in pair_sets.items():
        good = ngram_score(model, [a for a, _ in pairs])
        bad = ngram_score(model, [b for _, b in pairs])
        accuracy[kind] = judge_pairs(list(zip(good, bad)))

    return {"grammar": g, "ppls": ppls, "accuracy": accuracy}


def cmd_pipeline(args) -> None:
    cfg = _build_config(args)
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    table = _typology(cfg)
    params_list = list(dict.fromkeys(args.params))

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(lambda p: _pipeline_one(p, cfg, out_dir), params_list))
    else:
        results = [_pipeline_one(p, cfg, out_dir) for p in params_list]
    results.sort(key=lambda r: r["grammar"].params)

    rows = []
    for res in results:
        g = res["grammar"]
        for split in ("ShortTest", "MediumTest", "LongTest", "Recursive", "Embedded"):
            rows.append({
                "grammar_id": g.params,
                "base_order": g.base_order,
                "split": split,
                "ppl": repr(res["ppls"][split]),
                "plausibility": repr(plausibility(g, table)),
            })
    summary = None
    if len(results) == 96:
        ppls = {r["grammar"].params: r["ppls"]["ShortTest"] for r in results}
        r, p = ta_score(ppls, table)
        summary = {"grammar_id": "ALL", "split": "ShortTest",
                   "r": repr(r), "p_value": repr(p),
                   "typology_hash": table.provenance_hash()}
    write_report(out_dir / "report.csv", rows, summary)

    judgments = {
        res["grammar"].params: {k: res["accuracy"][k] for k in sorted(res["accuracy"])}
        for res in results
    }
    with open(out_dir / "judgments.json", "w") as fh:
        json.dump(judgments, fh, indent=2, sort_keys=True)
        fh.write("\n")
    for res in results:
        g = res["grammar"]
        ppl_text = " ".join(f"{k}={v:.2f}" for k, v in sorted(res["ppls"].items()))
        acc_text = " ".join(f"{k}={v:.3f}" for k, v in sorted(res["accuracy"].items()))
        print(f"{g.params} {ppl_text} {acc_text}")


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="alforge",
        description="Artificial-language toolkit: categorial grammars, corpora, metrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, config=True):
        if config:
            p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--seed", type=int, help="master random seed")
        p.add_argument("--threads", type=int, help="worker count")
        p.add_argument("--lexicon-path", dest="lexicon_path", help="lexicon JSON file")
        p.add_argument("--typology-path", dest="typology_path", help="typology JSON file")
        p.add_argument("--out-dir", dest="out_dir", help="output directory")
        for name in ("max-len", "train-per-length", "test-per-length",
                     "long-per-length", "long-templates-per-length",
                     "targeted-n", "pair-n", "ngram-order"):
            p.add_argument(f"--{name}", dest=name.replace("-", "_"), type=int)
        p.add_argument("--ngram-k", dest="ngram_k", type=float)
        p.add_argument("--scale", type=float, help="multiply all corpus counts")

    p = sub.add_parser("list-grammars", help="print the 96 grammars")
    p.set_defaults(func=cmd_list_grammars)

    p = sub.add_parser("gen-grammar", help="write one grammar's lexicon")
    p.add_argument("--params", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_grammar)

    p = sub.add_parser("enum-templates", help="enumerate grammatical templates")
    p.add_argument("--params", required=True)
    p.add_argument("--max-len", dest="max_len", type=int, default=10)
    p.add_argument("--out")
    p.set_defaults(func=cmd_enum_templates)

    p = sub.add_parser("augment-long", help="extend templates to lengths 11-20")
    p.add_argument("--params", required=True)
    p.add_argument("--templates", required=True)
    p.add_argument("--per-length", dest="per_length", type=int)
    p.add_argument("--min-len", dest="min_len", type=int, default=11)
    p.add_argument("--max-len", dest="max_len", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_augment_long)

    p = sub.add_parser("gen-dataset", help="build Short/Medium/Long splits")
    p.add_argument("--params", nargs="+", required=True)
    common(p)
    p.set_defaults(func=cmd_gen_dataset)

    p = sub.add_parser("gen-targeted", help="build Recursive/Embedded test sets")
    p.add_argument("--params", required=True)
    p.add_argument("--kind", choices=("recursive", "embedded"), required=True)
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_gen_targeted)

    p = sub.add_parser("gen-pairs", help="build minimal pairs from a split")
    p.add_argument("--params", required=True)
    p.add_argument("--kind", choices=("case", "verb"), required=True)
    p.add_argument("--source", required=True, help="sentence JSONL to perturb")
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_gen_pairs)

    p = sub.add_parser("score", help="score sentences with the n-gram baseline")
    p.add_argument("--model", default="ngram")
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--k", type=float, default=0.1)
    p.add_argument("--train", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("ta-corr", help="typological-alignment correlation")
    p.add_argument("--scores", nargs="+", required=True)
    p.add_argument("--split", default="ShortTest")
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_ta_corr)

    p = sub.add_parser("judge", help="minimal-pair judgment accuracy")
    p.add_argument("--good", required=True)
    p.add_argument("--bad", required=True)
    p.set_defaults(func=cmd_judge)

    p = sub.add_parser("pipeline", help="datasets + baseline + metrics")
    p.add_argument("--params", nargs="+", required=True)
    common(p)
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv=None) -> int:
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except Exception as exc:  # single-line machine-parsable failure
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
