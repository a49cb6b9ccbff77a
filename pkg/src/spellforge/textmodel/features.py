"""Hashed n-gram feature extraction.

Buckets come from FNV-1a 64-bit over the token bytes, modulo a fixed
dimension, so vectors are bit-reproducible across platforms.
"""

from __future__ import annotations

import re
from collections import Counter

DIM = 32768

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = 0xFFFFFFFFFFFFFFFF
_TOKEN = re.compile(r"[a-z0-9]+")


def fnv1a_64(data: bytes) -> int:
    value = _FNV_OFFSET
    for byte in data:
        value ^= byte
        value = (value * _FNV_PRIME) & _U64
    return value


def tokenize(prompt: str) -> list[str]:
    """Lowercase and split on non-alphanumeric runs."""
    return _TOKEN.findall(prompt.lower())


def extract_features(prompt: str, dim: int = DIM) -> dict[int, float]:
    """Bucketed unigram + adjacent-bigram counts for a prompt.

    Raises ValueError on prompts that are empty after trimming.
    """
    if not prompt or not prompt.strip():
        raise ValueError("prompt is empty")
    tokens = tokenize(prompt)
    if not tokens:
        raise ValueError("prompt has no alphanumeric tokens")
    counts: Counter[int] = Counter()
    for token in tokens:
        counts[fnv1a_64(token.encode("utf-8")) % dim] += 1
    for left, right in zip(tokens, tokens[1:]):
        counts[fnv1a_64(f"{left} {right}".encode("utf-8")) % dim] += 1
    return {bucket: float(count) for bucket, count in counts.items()}
