"""Fine-tune the binary hyperbole classifier on labeled sentences.

Supports a second fine-tuning round: start from an already fine-tuned
checkpoint (--base-model pointing at it) and continue on newly annotated
data. Reports accuracy on an optional held-out file. Needs the `models`
extra.

Usage:
    python -m mover_service.training.classifier --train corpus.jsonl --out ./clf
"""

from __future__ import annotations

import argparse

from .data import load_labeled_sentences


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="train-classifier")
    parser.add_argument("--train", required=True, help="JSONL with text/label fields")
    parser.add_argument("--eval", help="held-out JSONL for accuracy")
    parser.add_argument("--out", required=True)
    parser.add_argument("--base-model", default="bert-base-uncased")
    parser.add_argument("--epochs", type=int, default=3)
    parser.add_argument("--batch-size", type=int, default=16)
    parser.add_argument("--learning-rate", type=float, default=2e-5)
    parser.add_argument("--max-length", type=int, default=128)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--validate-only", action="store_true")
    return parser


def evaluate(model, tokenizer, rows, max_length) -> float:
    import torch

    model.eval()
    correct = 0
    with torch.no_grad():
        for text, label in rows:
            inputs = tokenizer(text, return_tensors="pt", truncation=True,
                               max_length=max_length)
            predicted = model(**inputs).logits.argmax(dim=-1).item()
            correct += int(predicted == label)
    model.train()
    return correct / len(rows)


def train(args) -> None:
    import torch
    from torch.utils.data import DataLoader
    from transformers import AutoModelForSequenceClassification, AutoTokenizer

    rows = load_labeled_sentences(args.train)
    torch.manual_seed(args.seed)
    tokenizer = AutoTokenizer.from_pretrained(args.base_model)
    model = AutoModelForSequenceClassification.from_pretrained(args.base_model,
                                                               num_labels=2)
    model.train()

    def collate(batch):
        texts = [t for t, _ in batch]
        enc = tokenizer(texts, truncation=True, max_length=args.max_length,
                        padding=True, return_tensors="pt")
        enc["labels"] = torch.tensor([l for _, l in batch])
        return enc

    loader = DataLoader(rows, batch_size=args.batch_size, shuffle=True,
                        collate_fn=collate)
    optimizer = torch.optim.AdamW(model.parameters(), lr=args.learning_rate)
    for epoch in range(args.epochs):
        total = 0.0
        for batch in loader:
            optimizer.zero_grad()
            loss = model(**batch).loss
            loss.backward()
            optimizer.step()
            total += loss.item()
        print(f"epoch {epoch + 1}/{args.epochs} loss {total / max(1, len(loader)):.4f}")

    if args.eval:
        accuracy = evaluate(model, tokenizer, load_labeled_sentences(args.eval),
                            args.max_length)
        print(f"held-out accuracy {accuracy:.3f}")

    model.save_pretrained(args.out)
    tokenizer.save_pretrained(args.out)
    print(f"saved classifier to {args.out}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.validate_only:
        rows = load_labeled_sentences(args.train)
        positives = sum(label for _, label in rows)
        print(f"ok: {len(rows)} sentences ({positives} positive)")
        return 0
    train(args)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
