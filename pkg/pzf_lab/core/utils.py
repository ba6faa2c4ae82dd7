"""Shared utility functions used across multiple modules."""

from __future__ import annotations

from typing import Any, Iterable

import numpy as np
import orjson

MASK64 = (1 << 64) - 1


def derive_seed(seed: int, *index: int) -> int:
    """Return a 64-bit seed that is a pure function of ``seed`` and ``index``.

    Used for per-trial, per-vertex and per-phase streams so that results never
    depend on scheduling order.
    """
    sequence = np.random.SeedSequence(seed & MASK64, spawn_key=tuple(index))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def dumps_json(payload: Any, indent: bool = True) -> str:
    option = orjson.OPT_SERIALIZE_NUMPY | orjson.OPT_NON_STR_KEYS
    if indent:
        option |= orjson.OPT_INDENT_2
    return orjson.dumps(payload, option=option).decode("utf-8")


def loads_json(content: str | bytes) -> Any:
    return orjson.loads(content)


def bits_from_vertices(vertices: Iterable[int]) -> int:
    bits = 0
    for v in vertices:
        bits |= 1 << int(v)
    return bits


def vertices_from_bits(bits: int) -> list[int]:
    vertices = []
    v = 0
    while bits:
        if bits & 1:
            vertices.append(v)
        bits >>= 1
        v += 1
    return vertices


def bits_to_mask(bits: int, n: int) -> np.ndarray:
    """Unpack an integer bitset into a boolean vertex mask of length ``n``."""
    raw = np.frombuffer(bits.to_bytes((n + 7) // 8 or 1, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(bool)


def mask_to_bits(mask: np.ndarray) -> int:
    packed = np.packbits(np.asarray(mask, dtype=bool), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")
