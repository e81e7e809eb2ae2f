"""Independent X/Z noise with reproducible counter-based streams.

Every trial owns two Philox streams, keyed by (master seed, trial index,
sector): the 128-bit Philox key is [seed, 2*trial_index + sector] with
sector 0 for bit-flip (X) errors and sector 1 for phase-flip (Z) errors.
Any trial can therefore be regenerated in isolation, and Monte Carlo
results do not depend on how trials are scheduled across workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import BitVector

SECTOR_X = 0
SECTOR_Z = 1


@dataclass(frozen=True)
class TrialStream:
    """Handle for one trial's private random streams."""

    seed: int
    trial_index: int

    def sector_rng(self, sector: int) -> np.random.Generator:
        key = np.array([self.seed, 2 * self.trial_index + sector], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class NoiseSample:
    """One trial's error pattern: each qubit flips independently with
    probability p in each sector."""

    x_error: BitVector
    z_error: BitVector


def sample_noise_dense(n_qubits: int, p: float, stream: TrialStream) -> tuple[np.ndarray, np.ndarray]:
    """Dense uint8 error vectors for the two sectors."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    x = (stream.sector_rng(SECTOR_X).random(n_qubits) < p).astype(np.uint8)
    z = (stream.sector_rng(SECTOR_Z).random(n_qubits) < p).astype(np.uint8)
    return x, z


def sample_noise(n_qubits: int, p: float, stream: TrialStream) -> NoiseSample:
    x, z = sample_noise_dense(n_qubits, p, stream)
    return NoiseSample(x_error=BitVector.from_dense(x), z_error=BitVector.from_dense(z))
