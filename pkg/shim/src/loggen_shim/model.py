"""Encoder-decoder model wrapper behind the /score + /generate contract.

The sequence-to-sequence weights come from any BART-family checkpoint
directory.  Token scoring runs the encoder plus a small two-class linear
head; when no fine-tuned head weights ship with the checkpoint
(``scoring_head.pt``), the head is seeded deterministically so the server
still returns valid, reproducible (if uninformative) probabilities.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import torch
from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

from .alignment import align_tokens

MASK_TOKEN = "<mask>"
HEAD_FILE = "scoring_head.pt"
HEAD_SEED = 20240901


class ShimModel:
    def __init__(self, tokenizer, seq2seq, scoring_head, max_new_tokens: int = 48):
        self.tokenizer = tokenizer
        self.seq2seq = seq2seq.eval()
        self.scoring_head = scoring_head.eval()
        self.max_new_tokens = max_new_tokens

    @classmethod
    def load(cls, model_dir: str | Path) -> "ShimModel":
        model_dir = Path(model_dir)
        tokenizer = AutoTokenizer.from_pretrained(model_dir)
        seq2seq = AutoModelForSeq2SeqLM.from_pretrained(model_dir)
        hidden = getattr(seq2seq.config, "d_model", None) or seq2seq.config.hidden_size
        head = torch.nn.Linear(hidden, 2)
        head_path = model_dir / HEAD_FILE
        if head_path.exists():
            head.load_state_dict(torch.load(head_path, map_location="cpu"))
        else:
            generator = torch.Generator().manual_seed(HEAD_SEED)
            with torch.no_grad():
                head.weight.normal_(0.0, 0.02, generator=generator)
                head.bias.zero_()
        return cls(tokenizer, seq2seq, head)

    @property
    def _max_content_subtokens(self) -> int:
        limit = getattr(self.seq2seq.config, "max_position_embeddings", 1024)
        return max(limit - 2, 1)  # room for bos/eos

    def _special(self, name: str) -> int:
        value = getattr(self.tokenizer, name)
        if value is None:
            raise ValueError(f"tokenizer does not define {name}")
        return value

    def score(self, texts: Sequence[str]) -> list[float]:
        """Positive-class probability per input token.

        Each token's score is the probability of the first subtoken its text
        maps to; tokens with no subtokens, or truncated past the encoder's
        position limit, score 0."""
        alignment = align_tokens(self.tokenizer, texts)
        content = list(alignment.subtoken_ids)[: self._max_content_subtokens]
        ids = [self._special("bos_token_id")] + content + [self._special("eos_token_id")]
        with torch.no_grad():
            hidden = self.seq2seq.get_encoder()(torch.tensor([ids])).last_hidden_state[0]
            probabilities = torch.softmax(self.scoring_head(hidden), dim=-1)[:, 1]
        scores = []
        for index in range(len(texts)):
            first = alignment.first_subtoken(index)
            if first is None or first >= len(content):
                scores.append(0.0)
            else:
                scores.append(float(probabilities[1 + first]))  # +1 skips bos
        return scores

    def generate(self, texts: Sequence[str], beam_size: int) -> list[tuple[str, float]]:
        """Beam-search statement candidates for the masked input, best first."""
        mask_id = self._special("mask_token_id")
        ids: list[int] = [self._special("bos_token_id")]
        for text in texts:
            if text == MASK_TOKEN:
                ids.append(mask_id)
            else:
                ids.extend(self.tokenizer.encode(text, add_special_tokens=False))
        ids = ids[: self._max_content_subtokens + 1]
        if mask_id not in ids:
            ids = ids[:-1] + [mask_id]  # keep the mask visible even if truncated
        ids.append(self._special("eos_token_id"))
        with torch.no_grad():
            output = self.seq2seq.generate(
                torch.tensor([ids]),
                num_beams=beam_size,
                num_return_sequences=beam_size,
                max_new_tokens=self.max_new_tokens,
                early_stopping=True,
                output_scores=True,
                return_dict_in_generate=True,
            )
        decoded = self.tokenizer.batch_decode(output.sequences, skip_special_tokens=True)
        if beam_size == 1:
            # greedy search carries no aggregate beam score; rebuild it from
            # the per-step log-probabilities
            transitions = self.seq2seq.compute_transition_scores(
                output.sequences, output.scores, normalize_logits=True
            )
            sequence_scores = [float(transitions[0].sum())]
        else:
            sequence_scores = [float(s) for s in output.sequences_scores]
        scored = [
            (_as_statement(text), score) for text, score in zip(decoded, sequence_scores)
        ]
        scored.sort(key=lambda pair: -pair[1])
        return scored


def _as_statement(text: str) -> str:
    """Collapse the decode to a single statement ending with ";"."""
    flat = " ".join(text.split())
    if ";" in flat:
        return flat[: flat.index(";") + 1]
    return flat + ";"
