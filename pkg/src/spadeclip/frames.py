"""Parseval tight frame operators built from the (possibly redundant) DFT.

The analysis operator maps a real length-N signal to P >= N complex
coefficients by zero-padding to length P and taking the normalized DFT.
The synthesis operator is the exact adjoint under the stacked
real/imaginary inner product: inverse DFT, truncation to N samples,
real part. For any redundancy the pair satisfies synthesize(analyze(x)) = x
and ||synthesize(c)|| <= ||c||.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

__all__ = ["FrameKind", "FrameOperator", "make_frame"]


class FrameKind(Enum):
    UNITARY_DFT = "unitary_dft"
    REDUNDANT_DFT = "redundant_dft"


@dataclass(frozen=True)
class FrameOperator:
    """Analysis/synthesis pair for a tight DFT frame.

    Immutable; `analyze` and `synthesize` are pure and thread-safe.
    """

    signal_len: int
    coeff_len: int
    kind: FrameKind

    def analyze(self, x: np.ndarray) -> np.ndarray:
        """Map a real length-N signal to P complex coefficients."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.signal_len,):
            raise ValueError(
                f"expected signal of length {self.signal_len}, got shape {x.shape}"
            )
        return np.fft.fft(x, n=self.coeff_len) / np.sqrt(self.coeff_len)

    def synthesize(self, c: np.ndarray) -> np.ndarray:
        """Map P complex coefficients back to a real length-N signal (adjoint of analyze)."""
        c = np.asarray(c, dtype=complex)
        if c.shape != (self.coeff_len,):
            raise ValueError(
                f"expected coefficients of length {self.coeff_len}, got shape {c.shape}"
            )
        return np.real(np.fft.ifft(c))[: self.signal_len] * np.sqrt(self.coeff_len)


def make_frame(signal_len: int, redundancy: float | Fraction = 1) -> FrameOperator:
    """Build a tight DFT frame with P = redundancy * signal_len coefficients.

    Redundancy 1 yields the unitary DFT; redundancy > 1 a redundant frame.
    Raises ValueError if signal_len < 1, redundancy < 1, or the implied
    coefficient count is not an integer.
    """
    if signal_len < 1:
        raise ValueError(f"signal_len must be positive, got {signal_len}")
    if redundancy < 1:
        raise ValueError(f"redundancy must be >= 1, got {redundancy}")
    p_exact = Fraction(redundancy).limit_denominator(10**9) * signal_len
    if p_exact.denominator != 1:
        raise ValueError(
            f"redundancy {redundancy} times N={signal_len} is not an integer"
        )
    coeff_len = int(p_exact)
    kind = FrameKind.UNITARY_DFT if coeff_len == signal_len else FrameKind.REDUNDANT_DFT
    return FrameOperator(signal_len=signal_len, coeff_len=coeff_len, kind=kind)
