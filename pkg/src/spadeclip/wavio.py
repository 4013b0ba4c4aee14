"""Minimal WAV ingestion and emission: PCM16 and float32, mono.

Stereo input is downmixed to mono with a warning. All output is written
as 32-bit float at the input sample rate.
"""

from __future__ import annotations

import sys

import numpy as np
from scipy.io import wavfile

__all__ = ["read_wav", "write_wav"]


def read_wav(path: str) -> tuple[int, np.ndarray]:
    """Read a WAV file as (sample_rate, float64 mono samples in [-1, 1])."""
    rate, data = wavfile.read(path)
    if np.issubdtype(data.dtype, np.integer):
        info = np.iinfo(data.dtype)
        if info.bits != 16:
            raise ValueError(f"unsupported PCM width {info.bits} bits (want 16)")
        data = data.astype(np.float64) / 32768.0
    else:
        data = data.astype(np.float64)
    if data.ndim == 2:
        print(f"warning: downmixing {data.shape[1]} channels to mono", file=sys.stderr)
        data = data.mean(axis=1)
    return int(rate), data


def write_wav(path: str, rate: int, samples: np.ndarray) -> None:
    """Write mono samples as a 32-bit float WAV file."""
    wavfile.write(path, rate, np.asarray(samples, dtype=np.float32))
