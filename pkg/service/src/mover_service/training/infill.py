"""Fine-tune the span-infill model on exported (masked, original) pairs.

The masked sentence is the encoder source and the original sentence the
decoder target. Defaults follow the engine's training recipe: a base-size
seq2seq checkpoint trained for 16 epochs. Needs the `models` extra.

Usage:
    python -m mover_service.training.infill --pairs pairs.jsonl --out ./infill-model
"""

from __future__ import annotations

import argparse

from .data import MASK_TOKEN, load_infill_pairs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="train-infill")
    parser.add_argument("--pairs", required=True, help="JSONL with masked/original fields")
    parser.add_argument("--out", required=True, help="output checkpoint directory")
    parser.add_argument("--base-model", default="facebook/bart-base")
    parser.add_argument("--epochs", type=int, default=16)
    parser.add_argument("--batch-size", type=int, default=8)
    parser.add_argument("--learning-rate", type=float, default=3e-5)
    parser.add_argument("--max-length", type=int, default=128)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--validate-only", action="store_true",
                        help="only check the data file, train nothing")
    return parser


def train(args) -> None:
    import torch
    from torch.utils.data import DataLoader
    from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

    pairs = load_infill_pairs(args.pairs)
    torch.manual_seed(args.seed)
    tokenizer = AutoTokenizer.from_pretrained(args.base_model)
    model = AutoModelForSeq2SeqLM.from_pretrained(args.base_model)
    model.train()

    mask = tokenizer.mask_token or MASK_TOKEN

    def collate(batch):
        sources = [m.replace(MASK_TOKEN, mask) for m, _ in batch]
        targets = [o for _, o in batch]
        enc = tokenizer(sources, text_target=targets, truncation=True,
                        max_length=args.max_length, padding=True,
                        return_tensors="pt")
        enc["labels"][enc["labels"] == tokenizer.pad_token_id] = -100
        return enc

    loader = DataLoader(pairs, batch_size=args.batch_size, shuffle=True,
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

    model.save_pretrained(args.out)
    tokenizer.save_pretrained(args.out)
    print(f"saved infill model to {args.out}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.validate_only:
        pairs = load_infill_pairs(args.pairs)
        print(f"ok: {len(pairs)} training pairs")
        return 0
    train(args)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
