"""
Seed derivation.

Every stage gets its own seed from the root seed:

    SeedSequence(entropy=root, spawn_key=(crc32(stage), *keys)).generate_state(1)[0]

so a stage (e.g. the split of vintage 2003) can be re-run in isolation and
still see the same random stream as inside a full run.
"""

import zlib

import numpy as np


def derive_seed(root: int, stage: str, *keys: int) -> int:
    spawn_key = (zlib.crc32(stage.encode("utf-8")), *(int(key) for key in keys))
    sequence = np.random.SeedSequence(entropy=int(root), spawn_key=spawn_key)
    return int(sequence.generate_state(1)[0])


def stage_rng(root: int, stage: str, *keys: int) -> np.random.Generator:
    return np.random.default_rng(derive_seed(root, stage, *keys))
