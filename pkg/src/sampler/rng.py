"""Per-shot random streams derived from a master seed."""

from dataclasses import dataclass

import numpy as np

SEED_BITS = 64


@dataclass(frozen=True)
class ShotStreams:
    gates: np.random.Generator
    measurements: np.random.Generator


def make_streams(master_seed: int, shot_index: int) -> ShotStreams:
    """Independent generators for shot ``shot_index``.

    Structure:
      (master_seed, shot_index)
        ├── gates          branch choice at every edge
        └── measurements   outcome draws
    """
    if master_seed < 0 or shot_index < 0:
        raise ValueError(f"Seeds must be non-negative, got ({master_seed}, {shot_index})")
    root = np.random.SeedSequence([master_seed, shot_index])
    ss_gates, ss_measurements = root.spawn(2)
    return ShotStreams(
        gates=np.random.default_rng(ss_gates),
        measurements=np.random.default_rng(ss_measurements),
    )


def shot_seed(master_seed: int, shot_index: int) -> int:
    """64-bit fingerprint of a shot's entropy, recorded alongside its outcomes."""
    state = np.random.SeedSequence([master_seed, shot_index]).generate_state(2, dtype=np.uint32)
    return int(state[0]) | (int(state[1]) << 32)
