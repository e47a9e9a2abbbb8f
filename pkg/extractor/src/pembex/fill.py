"""Mask-fill service for the curation engine's request/fill exchange.

Requests arrive as JSON-lines ({"plan_id", "step", "tokens",
"mask_position"}) with the "[MASK]" sentinel at every planned position.
Steps of a plan are answered in file order: each prediction is
substituted into the working token list before the next step runs, so
later fills condition on earlier ones. One fill is emitted per request:
{"plan_id", "step", "token"}.
"""

from __future__ import annotations

import json

MASK_TOKEN = "[MASK]"


def read_requests(path):
    requests = []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line:
                continue
            try:
                obj = json.loads(line)
                req = (obj["plan_id"], int(obj["step"]),
                       list(obj["tokens"]), int(obj["mask_position"]))
            except (KeyError, TypeError, ValueError,
                    json.JSONDecodeError) as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
            if not 0 <= req[3] < len(req[2]):
                raise ValueError(
                    f"{path}:{lineno}: mask position {req[3]} out of range")
            requests.append(req)
    return requests


def make_fill_model(model: str, device: str = "cpu"):
    if model == "mock":
        from .mockmodel import MockFillModel
        return MockFillModel()
    from .backends import HFFillModel
    return HFFillModel(model, device=device)


def fill_requests(requests, model) -> list[dict]:
    """Answer every request, threading fills through each plan in order."""
    state: dict[str, list[str]] = {}
    expected_step: dict[str, int] = {}
    fills = []
    for plan_id, step, tokens, mask_position in requests:
        if plan_id not in state:
            state[plan_id] = list(tokens)
            expected_step[plan_id] = 0
        if step != expected_step[plan_id]:
            raise ValueError(
                f"plan {plan_id!r}: expected step {expected_step[plan_id]}, "
                f"got {step}")
        current = state[plan_id]
        prediction = model.predict(plan_id, step, current, mask_position)
        current[mask_position] = prediction
        expected_step[plan_id] = step + 1
        fills.append({"plan_id": plan_id, "step": step, "token": prediction})
    return fills


def write_fills(fills, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for fill in fills:
            fh.write(json.dumps(fill, ensure_ascii=False,
                                separators=(",", ":")))
            fh.write("\n")
