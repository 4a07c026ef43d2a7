"""Narrowband interferer model and its per-subcarrier variance after the FFT.

Two independent routes compute the same quantity:

* ``analytic_variance`` evaluates the expectation directly. For each block
  offset r and delay xi it forms the pulse samples that land inside one
  OFDM block, applies the per-sample carrier phase ``exp(j 2 pi F_n n)``
  (``f_c * T_s`` reduces exactly to the normalized frequency F_n), and sums
  ``|DFT|^2`` over the contributing interferer symbols.
* ``mc_variance`` synthesizes the interferer time series with random QPSK
  symbols and random delays, pushes it through the 1/sqrt(N)-normalized
  receiver FFT, and averages ``|Z_k|^2``.

Both are linear in the interferer symbol power, which ``calibrate_sigma_b2``
exploits to hit a requested post-FFT signal-to-interference ratio.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .config import NbConfig, SystemConfig
from .errors import DomainError


@dataclass(frozen=True)
class RrcPulse:
    """Unit-energy root-raised-cosine pulse, truncated to +-span symbols."""

    rolloff: float
    symbol_period_s: float
    span_symbols: int

    @classmethod
    def from_config(cls, nb: NbConfig) -> "RrcPulse":
        return cls(rolloff=nb.rolloff, symbol_period_s=nb.symbol_period_s,
                   span_symbols=nb.pulse_span_symbols)

    def eval(self, t):
        """Pulse amplitude at time t (seconds); scalar or array."""
        t = np.asarray(t, dtype=float)
        big_t = self.symbol_period_s
        a = self.rolloff
        out = np.zeros(t.shape)
        mask = np.abs(t) <= self.span_symbols * big_t
        x = t[mask] / big_t
        if a > 0:
            at_zero = np.abs(x) < 1e-10
            at_sing = np.abs(np.abs(x) - 1.0 / (4.0 * a)) < 1e-10
        else:
            at_zero = np.abs(x) < 1e-10
            at_sing = np.zeros(x.shape, dtype=bool)
        with np.errstate(divide="ignore", invalid="ignore"):
            num = np.sin(np.pi * x * (1.0 - a)) + 4.0 * a * x * np.cos(np.pi * x * (1.0 + a))
            den = np.pi * x * (1.0 - (4.0 * a * x) ** 2)
            v = num / den
        v = np.where(at_zero, 1.0 - a + 4.0 * a / np.pi, v)
        if a > 0:
            lim = (a / np.sqrt(2.0)) * ((1.0 + 2.0 / np.pi) * np.sin(np.pi / (4.0 * a))
                                        + (1.0 - 2.0 / np.pi) * np.cos(np.pi / (4.0 * a)))
            v = np.where(at_sing, lim, v)
        out[mask] = v / np.sqrt(big_t)
        return out if t.ndim else float(out)


@dataclass(frozen=True)
class InterferenceProfile:
    variances: np.ndarray
    symbol_power: float
    normalized_freq: float
    method: str  # "analytic" | "montecarlo" | "flat"

    def scaled(self, factor: float) -> "InterferenceProfile":
        """Exact rescaling by linearity in the interferer symbol power."""
        return replace(self, variances=self.variances * factor,
                       symbol_power=self.symbol_power * factor)

    @classmethod
    def flat(cls, num_subcarriers: int, variance: float) -> "InterferenceProfile":
        return cls(variances=np.full(num_subcarriers, float(variance)),
                   symbol_power=float("nan"), normalized_freq=float("nan"),
                   method="flat")


def analytic_variance(cfg: SystemConfig, sigma_b2: float,
                      num_ofdm_symbols: int = 64, num_delays: int = 32,
                      rng: np.random.Generator | None = None) -> InterferenceProfile:
    """Delay-marginalized per-subcarrier interference variance.

    The infinite block average is replaced by ``num_ofdm_symbols`` offsets and
    the delay by an average over ``num_delays`` draws uniform in [0, T).
    """
    if num_ofdm_symbols < 1 or num_delays < 1:
        raise DomainError("num_ofdm_symbols and num_delays must be >= 1")
    if rng is None:
        rng = np.random.default_rng(0)
    n_sc = cfg.ofdm.num_subcarriers
    t_s = cfg.ofdm.sample_period_s
    pulse = RrcPulse.from_config(cfg.nb)
    big_t = pulse.symbol_period_s
    span = pulse.span_symbols
    f_n = cfg.nb.normalized_freq
    n = np.arange(n_sc)
    phase = np.exp(2j * np.pi * f_n * n)
    delays = rng.uniform(0.0, big_t, num_delays)
    acc = np.zeros(n_sc)
    for xi in delays:
        for r in range(num_ofdm_symbols):
            t0 = r * n_sc * t_s - xi
            l_lo = int(np.floor((t0 - span * big_t) / big_t)) - 1
            l_hi = int(np.ceil((t0 + (n_sc - 1) * t_s + span * big_t) / big_t)) + 1
            ls = np.arange(l_lo, l_hi + 1)
            samples = pulse.eval(t0 + n[None, :] * t_s - ls[:, None] * big_t)
            spectra = np.fft.fft(samples * phase[None, :], axis=1)
            acc += (np.abs(spectra) ** 2).sum(axis=0)
    acc *= sigma_b2 / (n_sc * num_ofdm_symbols * num_delays)
    return InterferenceProfile(variances=acc, symbol_power=sigma_b2,
                               normalized_freq=f_n, method="analytic")


def synthesize_nb_blocks(cfg: SystemConfig, sigma_b2: float, num_blocks: int,
                         rng: np.random.Generator) -> np.ndarray:
    """Interferer sample blocks (num_blocks x N) with QPSK symbols.

    Each block gets a fresh delay uniform in [0, T); the delay's uniform
    marginal absorbs the inter-block sample offset, so blocks are mutually
    independent and identically distributed.
    """
    n_sc = cfg.ofdm.num_subcarriers
    t_s = cfg.ofdm.sample_period_s
    pulse = RrcPulse.from_config(cfg.nb)
    big_t = pulse.symbol_period_s
    span = pulse.span_symbols
    n = np.arange(n_sc)
    phase = np.exp(2j * np.pi * cfg.nb.normalized_freq * n)
    l_lo = -span - 2
    l_hi = int(np.ceil((n_sc - 1) * t_s / big_t)) + span + 2
    ls = np.arange(l_lo, l_hi + 1)
    xi = rng.uniform(0.0, big_t, num_blocks)
    amp = np.sqrt(sigma_b2 / 2.0)
    symbols = amp * ((2 * rng.integers(0, 2, (num_blocks, ls.size)) - 1)
                     + 1j * (2 * rng.integers(0, 2, (num_blocks, ls.size)) - 1))
    t = -xi[:, None, None] + n[None, None, :] * t_s - ls[None, :, None] * big_t
    samples = pulse.eval(t)
    return np.einsum("bl,bln->bn", symbols, samples) * phase[None, :]


def mc_variance(cfg: SystemConfig, sigma_b2: float, num_symbols: int,
                rng: np.random.Generator, chunk: int = 2000) -> InterferenceProfile:
    profile, _power = mc_variance_and_power(cfg, sigma_b2, num_symbols, rng, chunk)
    return profile


def mc_variance_and_power(cfg: SystemConfig, sigma_b2: float, num_symbols: int,
                          rng: np.random.Generator,
                          chunk: int = 2000) -> tuple[InterferenceProfile, float]:
    """Monte Carlo profile plus the mean per-sample interferer power.

    The power is measured directly on the synthesized time samples, giving an
    independent handle on the FFT-domain total (Parseval under the 1/sqrt(N)
    convention).
    """
    if num_symbols < 1:
        raise DomainError("num_symbols must be >= 1")
    n_sc = cfg.ofdm.num_subcarriers
    acc = np.zeros(n_sc)
    power = 0.0
    done = 0
    while done < num_symbols:
        blocks = min(chunk, num_symbols - done)
        samples = synthesize_nb_blocks(cfg, sigma_b2, blocks, rng)
        spectra = np.fft.fft(samples, axis=1) / np.sqrt(n_sc)
        acc += (np.abs(spectra) ** 2).sum(axis=0)
        power += float((np.abs(samples) ** 2).sum())
        done += blocks
    profile = InterferenceProfile(variances=acc / num_symbols, symbol_power=sigma_b2,
                                  normalized_freq=cfg.nb.normalized_freq,
                                  method="montecarlo")
    return profile, power / (num_symbols * n_sc)


def calibrate_sigma_b2(cfg: SystemConfig, sir_db: float,
                       num_ofdm_symbols: int = 64, num_delays: int = 32,
                       rng: np.random.Generator | None = None) -> float:
    """Interferer symbol power achieving the requested post-FFT SIR.

    SIR is the mean OFDM subcarrier power (symbol_power, since the channel is
    gain-normalized) over the subcarrier-averaged interference variance.
    """
    if not np.isfinite(sir_db):
        raise DomainError("sir_db must be finite")
    unit = analytic_variance(cfg, 1.0, num_ofdm_symbols, num_delays, rng)
    total = float(unit.variances.sum())
    if total == 0.0:
        raise DomainError("interferer is entirely out of band; SIR calibration impossible")
    n_sc = cfg.ofdm.num_subcarriers
    return n_sc * cfg.link.symbol_power * 10.0 ** (-sir_db / 10.0) / total


def calibrated_profile(cfg: SystemConfig, num_ofdm_symbols: int = 64,
                       num_delays: int = 32,
                       rng: np.random.Generator | None = None) -> InterferenceProfile:
    """Analytic profile scaled so the post-FFT SIR equals cfg.link.sir_db."""
    if rng is None:
        rng = np.random.default_rng(0)
    unit = analytic_variance(cfg, 1.0, num_ofdm_symbols, num_delays, rng)
    total = float(unit.variances.sum())
    if total == 0.0:
        raise DomainError("interferer is entirely out of band; SIR calibration impossible")
    n_sc = cfg.ofdm.num_subcarriers
    sigma_b2 = n_sc * cfg.link.symbol_power * 10.0 ** (-cfg.link.sir_db / 10.0) / total
    return unit.scaled(sigma_b2)


def dump_profile_csv(fh, analytic: InterferenceProfile,
                     montecarlo: InterferenceProfile | None = None) -> None:
    if montecarlo is None:
        fh.write("k,variance_analytic\n")
        for k, v in enumerate(analytic.variances):
            fh.write(f"{k},{float(v)!r}\n")
    else:
        fh.write("k,variance_analytic,variance_mc\n")
        for k, (va, vm) in enumerate(zip(analytic.variances, montecarlo.variances)):
            fh.write(f"{k},{float(va)!r},{float(vm)!r}\n")
