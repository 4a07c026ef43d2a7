"""Frequency-selective Rayleigh channel with an exponential power delay profile.

Tap n has power ``pdp_constant * exp(-n * decay_factor)``; the constant is
chosen so the mean per-subcarrier gain is unity. The frequency response is the
unnormalized N-point DFT of the zero-padded taps, which makes unit total tap
energy map to unit average subcarrier gain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import ChannelConfig, OfdmConfig


@dataclass(frozen=True)
class ChannelRealization:
    taps: np.ndarray           # complex, length num_taps
    freq_response: np.ndarray  # complex, length num_subcarriers
    gains_sq: np.ndarray       # |freq_response|**2


def pdp_constant(channel_cfg: ChannelConfig) -> float:
    """Normalizing tap power so that E{|H_k|^2} = 1 for every subcarrier."""
    n = np.arange(channel_cfg.num_taps)
    return float(1.0 / np.exp(-n * channel_cfg.decay_factor).sum())


def tap_variances(channel_cfg: ChannelConfig) -> np.ndarray:
    n = np.arange(channel_cfg.num_taps)
    return pdp_constant(channel_cfg) * np.exp(-n * channel_cfg.decay_factor)


def draw_realization(channel_cfg: ChannelConfig, ofdm_cfg: OfdmConfig,
                     rng: np.random.Generator) -> ChannelRealization:
    """One circularly-symmetric complex Gaussian tap draw and its DFT."""
    var = tap_variances(channel_cfg)
    std = np.sqrt(var / 2.0)
    taps = std * (rng.standard_normal(channel_cfg.num_taps)
                  + 1j * rng.standard_normal(channel_cfg.num_taps))
    freq = np.fft.fft(taps, ofdm_cfg.num_subcarriers)
    return ChannelRealization(taps=taps, freq_response=freq, gains_sq=np.abs(freq) ** 2)


def dump_realization_csv(realization: ChannelRealization, fh) -> None:
    fh.write("tap_index,re,im\n")
    for i, h in enumerate(realization.taps):
        fh.write(f"{i},{float(h.real)!r},{float(h.imag)!r}\n")
    fh.write("k,gain_sq\n")
    for k, g in enumerate(realization.gains_sq):
        fh.write(f"{k},{float(g)!r}\n")
