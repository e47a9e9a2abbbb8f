"""Pretrained-encoder backends (optional; requires transformers+torch).

Token mode emits one row per model token with the special begin/end
tokens stripped; sentence mode uses the encoder's pooled output when
the architecture provides one, otherwise the mean of the kept token
states. `layer` selects which hidden-state layer feeds the rows (-1 is
the final layer); the choice is recorded in the store provenance by the
caller.
"""

from __future__ import annotations

import numpy as np


class SequenceTooLong(Exception):
    """Input exceeds the encoder's maximum length; the record is skipped."""


class HFEncoder:
    def __init__(self, model_name: str, layer: int = -1, device: str = "cpu"):
        import torch
        from transformers import AutoModel, AutoTokenizer

        self._torch = torch
        self.name = model_name
        self.layer = layer
        self.device = device
        self.tokenizer = AutoTokenizer.from_pretrained(model_name)
        self.model = AutoModel.from_pretrained(model_name).to(device).eval()
        self.dim = int(self.model.config.hidden_size)
        self.max_length = int(getattr(self.model.config,
                                      "max_position_embeddings", 512))

    def _run(self, text: str):
        torch = self._torch
        enc = self.tokenizer(text, return_tensors="pt",
                             return_special_tokens_mask=True)
        if enc["input_ids"].shape[1] > self.max_length:
            raise SequenceTooLong(
                f"{enc['input_ids'].shape[1]} tokens > {self.max_length}")
        special = enc.pop("special_tokens_mask")[0].bool()
        enc = {k: v.to(self.device) for k, v in enc.items()}
        with torch.no_grad():
            out = self.model(**enc, output_hidden_states=True)
        hidden = out.hidden_states[self.layer][0]
        return hidden, special, out

    def encode_tokens(self, text: str) -> np.ndarray:
        hidden, special, _ = self._run(text)
        kept = hidden[~special.to(hidden.device)]
        if kept.shape[0] == 0:
            kept = hidden
        return kept.cpu().numpy().astype(np.float32)

    def encode_sentence(self, text: str) -> np.ndarray:
        hidden, special, out = self._run(text)
        pooled = getattr(out, "pooler_output", None)
        if pooled is not None and self.layer == -1:
            vec = pooled[0]
        else:
            kept = hidden[~special.to(hidden.device)]
            if kept.shape[0] == 0:
                kept = hidden
            vec = kept.mean(dim=0)
        return vec.cpu().numpy().astype(np.float32)[None, :]


class HFFillModel:
    def __init__(self, model_name: str, device: str = "cpu"):
        import torch
        from transformers import AutoModelForMaskedLM, AutoTokenizer

        self._torch = torch
        self.name = model_name
        self.device = device
        self.tokenizer = AutoTokenizer.from_pretrained(model_name)
        self.model = AutoModelForMaskedLM.from_pretrained(model_name) \
            .to(device).eval()
        if self.tokenizer.mask_token is None:
            raise ValueError(f"{model_name} has no mask token")

    def predict(self, plan_id: str, step: int, tokens: list[str],
                mask_position: int) -> str:
        torch = self._torch
        words = list(tokens)
        words[mask_position] = self.tokenizer.mask_token
        # remaining plan sentinels stay masked for the model too
        text = " ".join(self.tokenizer.mask_token if w == "[MASK]" else w
                        for w in words)
        enc = self.tokenizer(text, return_tensors="pt").to(self.device)
        mask_id = self.tokenizer.mask_token_id
        positions = (enc["input_ids"][0] == mask_id).nonzero().flatten()
        # the mask we must answer is the one aligned with mask_position:
        # count sentinels left of it in the word sequence
        left = sum(1 for w in words[:mask_position]
                   if w == self.tokenizer.mask_token or w == "[MASK]")
        target = positions[min(left, len(positions) - 1)]
        with torch.no_grad():
            logits = self.model(**enc).logits[0, target]
        best = int(logits.argmax())
        piece = self.tokenizer.decode([best]).strip()
        return piece.split()[0] if piece.split() else piece or "?"
