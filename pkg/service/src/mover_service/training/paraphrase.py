"""Fine-tune the paraphrase scorer on labeled sentence pairs.

Starts from a sentence-embedding checkpoint pretrained on paraphrase data
and fits it with a cosine objective: positive pairs (a hyperbole with its
literal paraphrase) toward similarity 1, negatives (a hyperbole with its
unrelated lookalike) toward 0. The service then scores candidates by the
cosine of the two embeddings. Needs the `models` extra.

Usage:
    python -m mover_service.training.paraphrase --pairs pairs.jsonl --out ./para
"""

from __future__ import annotations

import argparse

from .data import load_scored_pairs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="train-paraphrase")
    parser.add_argument("--pairs", required=True,
                        help="JSONL with source/candidate/label fields")
    parser.add_argument("--eval", help="held-out JSONL for pair accuracy")
    parser.add_argument("--out", required=True)
    parser.add_argument("--base-model",
                        default="sentence-transformers/paraphrase-distilroberta-base-v1")
    parser.add_argument("--epochs", type=int, default=4)
    parser.add_argument("--batch-size", type=int, default=16)
    parser.add_argument("--threshold", type=float, default=0.5,
                        help="cosine cutoff for pair accuracy")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--validate-only", action="store_true")
    return parser


def pair_accuracy(model, rows, threshold) -> float:
    correct = 0
    for source, candidate, label in rows:
        vectors = model.encode([source, candidate], convert_to_numpy=True,
                               normalize_embeddings=True)
        predicted = int(float(vectors[0] @ vectors[1]) > threshold)
        correct += int(predicted == label)
    return correct / len(rows)


def train(args) -> None:
    import torch
    from sentence_transformers import InputExample, SentenceTransformer, losses
    from torch.utils.data import DataLoader

    rows = load_scored_pairs(args.pairs)
    torch.manual_seed(args.seed)
    model = SentenceTransformer(args.base_model)
    examples = [InputExample(texts=[s, c], label=float(l)) for s, c, l in rows]
    loader = DataLoader(examples, batch_size=args.batch_size, shuffle=True)
    model.fit(train_objectives=[(loader, losses.CosineSimilarityLoss(model))],
              epochs=args.epochs, show_progress_bar=False)

    if args.eval:
        accuracy = pair_accuracy(model, load_scored_pairs(args.eval), args.threshold)
        print(f"held-out pair accuracy {accuracy:.3f}")

    model.save(args.out)
    print(f"saved paraphrase scorer to {args.out}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.validate_only:
        rows = load_scored_pairs(args.pairs)
        positives = sum(label for _, _, label in rows)
        print(f"ok: {len(rows)} pairs ({positives} positive)")
        return 0
    train(args)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
