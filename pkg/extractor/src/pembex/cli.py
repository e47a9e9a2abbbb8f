"""pembex: extract embeddings to PEMB stores and serve mask fills.

    pembex extract --model mock --mode tokens --in corpus.jsonl --out store.pemb
    pembex fill    --model mock --in requests.jsonl --out fills.jsonl

The "mock" model runs offline with hash-based embeddings; any Hugging
Face encoder id works when transformers and torch are installed.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .extract import MODES, ExtractorConfig, extract
from .fill import fill_requests, make_fill_model, read_requests, write_fills


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pembex", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="encode a corpus into a PEMB store")
    p.add_argument("--model", default="mock",
                   help='encoder: "mock" or a Hugging Face model id')
    p.add_argument("--mode", choices=MODES, required=True)
    p.add_argument("--in", dest="input", required=True,
                   help="corpus JSON-lines (id, source, candidate)")
    p.add_argument("--out", required=True, help="PEMB output path")
    p.add_argument("--layer", type=int, default=-1,
                   help="hidden-state layer (-1 = final)")
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--device", default="cpu")
    p.add_argument("--mock-dim", type=int, default=64,
                   help="embedding width of the mock encoder")
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("fill", help="answer mask requests")
    p.add_argument("--model", default="mock")
    p.add_argument("--in", dest="input", required=True,
                   help="mask request JSON-lines")
    p.add_argument("--out", required=True, help="fills JSON-lines")
    p.add_argument("--device", default="cpu")
    p.set_defaults(func=_cmd_fill)

    return parser


def _cmd_extract(args) -> int:
    cfg = ExtractorConfig(model=args.model, mode=args.mode, layer=args.layer,
                          batch_size=args.batch_size, device=args.device,
                          mock_dim=args.mock_dim)
    manifest = extract(args.input, args.out, cfg)
    print(f"wrote {manifest['records']} records "
          f"(dim {manifest['dim']}, {manifest['mode']} mode)"
          + (f", skipped {len(manifest['skipped'])}" if manifest["skipped"]
             else ""))
    return 0


def _cmd_fill(args) -> int:
    requests = read_requests(args.input)
    model = make_fill_model(args.model, device=args.device)
    fills = fill_requests(requests, model)
    write_fills(fills, args.out)
    print(f"answered {len(fills)} requests")
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
