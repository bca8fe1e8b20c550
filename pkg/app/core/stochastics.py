"""
Seedable, splittable standard-normal streams.

A stream is identified by ``(seed, stream_id)``. The pair keys a numpy
``SeedSequence`` (``entropy=seed, spawn_key=(stream_id,)``) that seeds a
counter-based Philox bit generator, so distinct stream ids are independent
substreams and a stream's output never depends on which other streams were
consumed first. Normals come from numpy's ziggurat ``standard_normal``.
"""
import hashlib
import logging
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr

logger = logging.getLogger(__name__)

UINT64_MAX = 2**64 - 1


class RandomStream(BaseModel):
    """Handle on one substream; the pair (seed, stream_id) fully determines its output"""
    model_config = ConfigDict(frozen=True)

    seed: int = Field(..., ge=0, le=UINT64_MAX)
    stream_id: int = Field(0, ge=0, le=UINT64_MAX)

    _generator: Optional[np.random.Generator] = PrivateAttr(default=None)

    @property
    def generator(self) -> np.random.Generator:
        if self._generator is None:
            sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
            self._generator = np.random.Generator(np.random.Philox(sequence))
        return self._generator


def standard_normal(stream: RandomStream, count: int) -> np.ndarray:
    """Draw ``count`` N(0,1) variates, advancing the stream"""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    return stream.generator.standard_normal(count)


def derive_stream_id(*parts: object) -> int:
    """Map a tuple of labels to a stable 64-bit stream id"""
    key = "|".join(str(part) for part in parts).encode("utf-8")
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big")
