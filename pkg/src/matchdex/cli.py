"""Command-line pipeline: simulate, train, segment, locate, refine,
index, evaluate, serve.

Every stage reads and writes files (JSON or FSTK) so each is
independently testable and reruns are byte-identical for identical
inputs. Exit codes: 0 success, 1 usage error, 2 data error; errors are
printed to stderr as one-line JSON.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .errors import MatchdexError
from .events import tag_sequence
from .index import build_index, save_index
from .ocr import (
    NoiseSpec,
    corrupt_sequence,
    normalized_edit_distance,
    parse_score_text,
    read_recognized_text,
    write_recognized_text,
)
from .rally import (
    ClassifierConfig,
    FrameStack,
    Segment,
    classify_frames,
    extract_rally_segments,
    kalman_smooth,
    load_fstk,
    load_model,
    save_fstk,
    save_model,
    stack_hog_features,
    train_rally_classifier,
)
from .refine import (
    RefineConfig,
    ScoreSequence,
    carry_forward_states,
    correct_sequence,
    observed_accuracy,
    score_accuracy,
)
from .scorecard import BBox, locate_scorecard
from .scoring import MatchFormat, ScoreState
from .simkit import (
    SimSpec,
    frame_labels,
    generate_match_walk,
    render_score_text,
    render_synthetic_stack,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit(2)
        raise UsageError(message)


def _write_json(path: str | Path, obj) -> None:
    Path(path).write_text(
        json.dumps(obj, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


def _read_json(path: str | Path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def _segments_from_json(doc) -> list[Segment]:
    return [Segment(row["start_frame"], row["end_frame"]) for row in doc]


# ---------------------------------------------------------------- simulate

def cmd_simulate(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    spec = SimSpec(
        seed=args.seed,
        n_points=args.points,
        best_of=args.best_of,
        fault_prob=args.fault_prob,
        width=args.width,
        height=args.height,
        corner=args.corner,
        box_size=(args.box_width, args.box_height),
    )
    states, faults = generate_match_walk(spec)
    stack_spec = replace(spec, n_points=len(states))
    stack, truth = render_synthetic_stack(stack_spec)
    save_fstk(stack, out_dir / "frames.fstk")

    records = render_score_text(states, faults)
    if args.noise_sub > 0 or args.noise_del > 0:
        records = corrupt_sequence(
            records,
            NoiseSpec(
                substitution_rate=args.noise_sub,
                deletion_rate=args.noise_del,
                seed=args.seed,
            ),
        )
    write_recognized_text(out_dir / "recognized.txt", records)

    _write_json(
        out_dir / "truth.json",
        {
            "format": {"best_of": spec.best_of},
            "fps": args.fps,
            "scores": [s.render() for s in states],
            "faults": faults,
            "segments": truth["segments"],
            "bbox": truth["bbox"],
        },
    )
    labels = frame_labels(stack.count, _segments_from_json(truth["segments"]))
    _write_json(out_dir / "labels.json", labels.tolist())
    return 0


# ------------------------------------------------------------------- train

def cmd_train(args) -> int:
    stack = load_fstk(args.frames)
    labels = np.asarray(_read_json(args.labels), dtype=np.float64)
    cfg = ClassifierConfig(c=args.c, chi2_period=args.period)
    feats = stack_hog_features(stack, cfg)
    if args.subsample > 1:
        feats = feats[:: args.subsample]
        labels = labels[:: args.subsample]
    model = train_rally_classifier(feats, labels, cfg, seed=args.seed)
    save_model(model, args.out)
    return 0


# ----------------------------------------------------------------- segment

def cmd_segment(args) -> int:
    stack = load_fstk(args.frames)
    model = load_model(args.model)
    margins = [m for _, m in classify_frames(stack, model)]
    smoothed = kalman_smooth(margins)
    segments = extract_rally_segments(
        smoothed, threshold=args.threshold, min_len=args.min_len
    )
    _write_json(
        args.out,
        [{"start_frame": s.start_frame, "end_frame": s.end_frame} for s in segments],
    )
    return 0


# ------------------------------------------------------------------ locate

def cmd_locate(args) -> int:
    stack = load_fstk(args.frames)
    segments = _segments_from_json(_read_json(args.segments))
    boxes = []
    for seg in segments:
        sub = FrameStack(stack.pixels[seg.start_frame : seg.end_frame + 1])
        try:
            box, corner = locate_scorecard(sub, binarize_quantile=args.quantile)
            boxes.append(box.to_json(corner))
        except MatchdexError:
            boxes.append(None)
    _write_json(args.out, boxes)
    return 0


# ------------------------------------------------------------------ refine

def cmd_refine(args) -> int:
    fmt = MatchFormat(args.format)
    records = read_recognized_text(args.scores)
    seq = ScoreSequence(tuple(parse_score_text(r, fmt) for r in records))
    corrected, report = correct_sequence(seq, fmt, RefineConfig(args.window))
    states, flagged = carry_forward_states(corrected, fmt)
    _write_json(
        args.out,
        {
            "format": {"best_of": fmt.best_of},
            "scores": [
                {"score": s.render(), "flagged": f} for s, f in zip(states, flagged)
            ],
        },
    )
    if args.report:
        _write_json(args.report, report.to_json())
    return 0


# ------------------------------------------------------------------- index

def cmd_index(args) -> int:
    segments = _segments_from_json(_read_json(args.segments))
    refined = _read_json(args.scores)
    fmt = MatchFormat(refined["format"]["best_of"])
    rows = refined["scores"]
    states = [ScoreState.parse(r["score"]) for r in rows]
    flagged = [r["flagged"] for r in rows]
    scores = [None if f else s for s, f in zip(states, flagged)]
    tags = tag_sequence(states, fmt)
    bboxes = None
    if args.boxes:
        box_doc = _read_json(args.boxes)
        bboxes = [
            (BBox.from_json(b), b.get("corner")) if b is not None else None
            for b in box_doc
        ]
    idx = build_index(
        segments, scores, tags, fmt,
        fps=args.fps, match_id=args.match_id, bboxes=bboxes,
    )
    save_index(idx, args.out)
    return 0


# ---------------------------------------------------------------- evaluate

def _truth_states(doc) -> list[ScoreState]:
    return [ScoreState.parse(s) for s in doc["scores"]]


def _eval_ac(args, truth_doc) -> dict:
    truth = _truth_states(truth_doc)
    fmt = MatchFormat(truth_doc["format"]["best_of"])
    pred_path = Path(args.pred)
    if pred_path.suffix == ".txt":
        records = read_recognized_text(pred_path)
        seq = ScoreSequence(tuple(parse_score_text(r, fmt) for r in records))
        value = observed_accuracy(seq, truth)
    else:
        doc = _read_json(pred_path)
        states = [ScoreState.parse(r["score"]) for r in doc["scores"]]
        value = score_accuracy(states, truth)
    return {"metric": "ac", "value": value, "rallies": len(truth)}


def _eval_edit(args, truth_doc) -> dict:
    truth_text = render_score_text(_truth_states(truth_doc))
    pred_text = read_recognized_text(args.pred)
    if len(pred_text) != len(truth_text):
        raise MatchdexError(
            f"{len(pred_text)} predicted records vs {len(truth_text)} truth"
        )
    per_record = [
        (normalized_edit_distance(p.lines[0], t.lines[0])
         + normalized_edit_distance(p.lines[1], t.lines[1])) / 2.0
        for p, t in zip(pred_text, truth_text)
    ]
    return {
        "metric": "edit",
        "value": sum(per_record) / len(per_record),
        "rallies": len(per_record),
    }


def _eval_tags(args, truth_doc) -> dict:
    from .index import load_index

    fmt = MatchFormat(truth_doc["format"]["best_of"])
    truth_states = _truth_states(truth_doc)
    truth_tags = tag_sequence(truth_states, fmt)
    idx = load_index(args.pred)
    if len(idx.rallies) != len(truth_states):
        raise MatchdexError(
            f"{len(idx.rallies)} indexed rallies vs {len(truth_states)} truth"
        )
    details = {}
    accuracies = []
    for tag in ("fault", "deuce", "advantage"):
        tp = fp = fn = tn = 0
        for rec, truths in zip(idx.rallies, truth_tags):
            got = tag in {t.value for t in rec.tags}
            want = tag in {t.value for t in truths}
            tp += got and want
            fp += got and not want
            fn += want and not got
            tn += not got and not want
        precision = tp / (tp + fp) if tp + fp else 1.0
        recall = tp / (tp + fn) if tp + fn else 1.0
        details[tag] = {
            "precision": precision,
            "recall": recall,
            "accuracy": (tp + tn) / len(truth_states),
            "support": tp + fn,
        }
        accuracies.append(details[tag]["accuracy"])
    return {
        "metric": "tags",
        "value": sum(accuracies) / len(accuracies),
        "per_tag": details,
    }


def cmd_evaluate(args) -> int:
    truth_doc = _read_json(args.truth)
    if args.metric == "ac":
        result = _eval_ac(args, truth_doc)
    elif args.metric == "edit":
        result = _eval_edit(args, truth_doc)
    else:
        result = _eval_tags(args, truth_doc)
    _write_json(args.out, result)
    return 0


# ------------------------------------------------------------------- serve

def cmd_serve(args) -> int:
    from .service import ServiceConfig, serve

    serve(
        ServiceConfig(
            index_dir=args.index_dir,
            host=args.host,
            port=args.port,
            static_dir=args.static_dir,
        )
    )
    return 0


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="matchdex", description="Tennis match indexing pipeline")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "--config", default=None,
        help="JSON file supplying defaults for any flag (CLI overrides)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="write a synthetic stack, score text and truth")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--best-of", type=int, default=5, choices=(3, 5))
    p.add_argument("--fault-prob", type=float, default=0.06)
    p.add_argument("--width", type=int, default=128)
    p.add_argument("--height", type=int, default=72)
    p.add_argument("--corner", default="tl", choices=("tl", "tr", "bl", "br"))
    p.add_argument("--box-width", type=int, default=40)
    p.add_argument("--box-height", type=int, default=10)
    p.add_argument("--fps", type=float, default=30.0)
    p.add_argument("--noise-sub", type=float, default=0.0)
    p.add_argument("--noise-del", type=float, default=0.0)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("train", help="fit the rally/non-rally classifier")
    p.add_argument("--frames", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--c", type=float, default=0.05)
    p.add_argument("--period", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--subsample", type=int, default=1,
                   help="use every k-th frame for training")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("segment", help="label frames and emit rally segments")
    p.add_argument("--frames", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--threshold", type=float, default=0.0)
    p.add_argument("--min-len", type=int, default=30)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("locate", help="find the scorecard box per segment")
    p.add_argument("--frames", required=True)
    p.add_argument("--segments", required=True)
    p.add_argument("--quantile", type=float, default=0.90)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_locate)

    p = sub.add_parser("refine", help="correct recognized scores over the automaton")
    p.add_argument("--scores", required=True, help="recognized-text file")
    p.add_argument("--format", type=int, default=5, choices=(3, 5),
                   help="best-of format")
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--out", required=True)
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("index", help="assemble the navigable match index")
    p.add_argument("--segments", required=True)
    p.add_argument("--scores", required=True, help="refined scores JSON")
    p.add_argument("--boxes", default=None)
    p.add_argument("--fps", type=float, default=30.0)
    p.add_argument("--match-id", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("evaluate", help="score a stage against simulate truth")
    p.add_argument("--pred", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--metric", required=True, choices=("ac", "edit", "tags"))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("serve", help="serve built indexes over HTTP")
    p.add_argument("--index-dir", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--static-dir", default=None)
    p.set_defaults(func=cmd_serve)
    return parser


def _apply_config_defaults(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """--config JSON supplies defaults; explicit flags still win."""
    if "--config" not in argv:
        return argv
    at = argv.index("--config")
    cfg_path = argv[at + 1]
    doc = _read_json(cfg_path)
    if not isinstance(doc, dict):
        raise UsageError("--config must hold a JSON object")
    defaults = {k.replace("-", "_"): v for k, v in doc.items()}
    for action in parser._subparsers._group_actions:  # noqa: SLF001
        for sub in action.choices.values():
            known = {a.dest for a in sub._actions}  # noqa: SLF001
            sub.set_defaults(**{k: v for k, v in defaults.items() if k in known})
    return argv[:at] + argv[at + 2 :]


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config_defaults(parser, argv)
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(json.dumps({"error": "usage", "detail": str(exc)}), file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except MatchdexError as exc:
        print(
            json.dumps({"error": type(exc).__name__, "detail": str(exc)}),
            file=sys.stderr,
        )
        return 2
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(
            json.dumps({"error": type(exc).__name__, "detail": str(exc)}),
            file=sys.stderr,
        )
        return 2


if __name__ == "__main__":
    sys.exit(main())
