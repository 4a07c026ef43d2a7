"""System parameters: OFDM grid, narrowband interferer, channel, and link budget.

Defaults reproduce the 1.25 MHz / 128-subcarrier system with a 15 kHz
root-raised-cosine QPSK interferer. All configs are frozen dataclasses;
derived quantities (subcarrier spacing, symbol durations, cyclic-prefix
loss) are exposed as properties so they can never drift out of sync with
the raw parameters.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from .errors import DomainError, NotSupportedError


@dataclass(frozen=True)
class OfdmConfig:
    bandwidth_hz: float = 1.25e6
    num_subcarriers: int = 128
    window_rolloff: float = 0.0
    cp_fraction: float = 0.25
    postfix_s: float = 0.0

    @property
    def subcarrier_spacing_hz(self) -> float:
        return self.bandwidth_hz / self.num_subcarriers

    @property
    def useful_symbol_s(self) -> float:
        return 1.0 / self.subcarrier_spacing_hz

    @property
    def sample_period_s(self) -> float:
        return 1.0 / self.bandwidth_hz

    @property
    def cp_loss_factor(self) -> float:
        """Useful-symbol fraction of the total symbol duration, in (0, 1]."""
        t_u = self.useful_symbol_s
        return t_u / (t_u + self.cp_fraction * t_u + self.postfix_s)


@dataclass(frozen=True)
class NbConfig:
    bandwidth_hz: float = 15e3
    rolloff: float = 0.35
    normalized_freq: float = 0.52
    pulse_span_symbols: int = 16

    @property
    def symbol_period_s(self) -> float:
        """RRC occupied-bandwidth relation: T = (1 + rolloff) / bandwidth."""
        return (1.0 + self.rolloff) / self.bandwidth_hz


@dataclass(frozen=True)
class ChannelConfig:
    num_taps: int = 5
    decay_factor: float = 0.2
    num_realizations: int = 10_000


@dataclass(frozen=True)
class LinkConfig:
    avg_snr_db: float = 20.0
    sir_db: float = 0.0
    est_error_var: float = 0.0
    target_ber: float = 1e-4
    symbol_power: float = 1.0

    @property
    def noise_variance(self) -> float:
        """Noise power for the configured average SNR at unit channel gain."""
        return self.symbol_power * 10.0 ** (-self.avg_snr_db / 10.0)


@dataclass(frozen=True)
class SystemConfig:
    ofdm: OfdmConfig = OfdmConfig()
    nb: NbConfig = NbConfig()
    channel: ChannelConfig = ChannelConfig()
    link: LinkConfig = LinkConfig()

    @property
    def carrier_offset_hz(self) -> float:
        """Interferer carrier offset from the OFDM carrier, F_n * BW."""
        return self.nb.normalized_freq * self.ofdm.bandwidth_hz


def cp_loss_factor(ofdm: OfdmConfig) -> float:
    return ofdm.cp_loss_factor


def _check(cond: bool, name: str) -> None:
    if not cond:
        raise DomainError(f"invariant violated: {name}")


def validate(cfg: SystemConfig) -> SystemConfig:
    """Check every invariant; raise DomainError naming the first violation."""
    o, n, c, l = cfg.ofdm, cfg.nb, cfg.channel, cfg.link
    _check(o.bandwidth_hz > 0, "ofdm.bandwidth_hz > 0")
    _check(isinstance(o.num_subcarriers, int) and o.num_subcarriers >= 1,
           "ofdm.num_subcarriers positive integer")
    _check(0.0 <= o.window_rolloff <= 1.0, "ofdm.window_rolloff in [0, 1]")
    if o.window_rolloff != 0.0:
        raise NotSupportedError("transmit windowing (ofdm.window_rolloff != 0) is not modeled")
    _check(o.cp_fraction >= 0, "ofdm.cp_fraction >= 0")
    _check(o.postfix_s >= 0, "ofdm.postfix_s >= 0")
    _check(0.0 < o.cp_loss_factor <= 1.0, "cp loss factor in (0, 1]")
    _check(n.bandwidth_hz > 0, "nb.bandwidth_hz > 0")
    _check(0.0 <= n.rolloff <= 1.0, "nb.rolloff in [0, 1]")
    _check(n.normalized_freq >= 0, "nb.normalized_freq >= 0")
    _check(isinstance(n.pulse_span_symbols, int) and n.pulse_span_symbols >= 1,
           "nb.pulse_span_symbols positive integer")
    _check(isinstance(c.num_taps, int) and c.num_taps >= 1, "channel.num_taps >= 1")
    _check(c.decay_factor > 0, "channel.decay_factor > 0")
    _check(isinstance(c.num_realizations, int) and c.num_realizations >= 1,
           "channel.num_realizations >= 1")
    _check(math.isfinite(l.avg_snr_db), "link.avg_snr_db finite")
    _check(math.isfinite(l.sir_db), "link.sir_db finite")
    _check(l.est_error_var >= 0, "link.est_error_var >= 0")
    _check(0.0 < l.target_ber < 0.5, "link.target_ber in (0, 0.5)")
    _check(l.symbol_power > 0, "link.symbol_power > 0")
    return cfg


# Flat key-value config file support. Keys mirror the dataclass fields.
_KEY_MAP = {
    "ofdm.bandwidth_hz": ("ofdm", "bandwidth_hz", float),
    "ofdm.num_subcarriers": ("ofdm", "num_subcarriers", int),
    "ofdm.window_rolloff": ("ofdm", "window_rolloff", float),
    "ofdm.cp_fraction": ("ofdm", "cp_fraction", float),
    "ofdm.postfix_s": ("ofdm", "postfix_s", float),
    "nb.bandwidth_hz": ("nb", "bandwidth_hz", float),
    "nb.rolloff": ("nb", "rolloff", float),
    "nb.normalized_freq": ("nb", "normalized_freq", float),
    "nb.pulse_span_symbols": ("nb", "pulse_span_symbols", int),
    "channel.num_taps": ("channel", "num_taps", int),
    "channel.decay_factor": ("channel", "decay_factor", float),
    "channel.num_realizations": ("channel", "num_realizations", int),
    "link.avg_snr_db": ("link", "avg_snr_db", float),
    "link.sir_db": ("link", "sir_db", float),
    "link.est_error_var": ("link", "est_error_var", float),
    "link.target_ber": ("link", "target_ber", float),
    "link.symbol_power": ("link", "symbol_power", float),
}


def updated(cfg: SystemConfig, overrides: dict) -> SystemConfig:
    """Return a copy of cfg with dotted-key overrides applied."""
    groups: dict[str, dict] = {}
    for key, value in overrides.items():
        if key not in _KEY_MAP:
            raise DomainError(f"unknown config key: {key}")
        section, field, typ = _KEY_MAP[key]
        groups.setdefault(section, {})[field] = typ(value)
    out = cfg
    for section, fields in groups.items():
        out = dataclasses.replace(out, **{section: dataclasses.replace(getattr(out, section), **fields)})
    return out


def parse_config(text: str) -> SystemConfig:
    """Parse flat ``key = value`` lines ('#' starts a comment)."""
    overrides = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KEY_MAP:
            raise DomainError(f"config line {lineno}: unknown key {key!r}")
        overrides[key] = value
    return validate(updated(SystemConfig(), overrides))


def load_config(path) -> SystemConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def dump_config(cfg: SystemConfig) -> str:
    """Serialize to the flat key-value format (round-trips through parse_config)."""
    lines = []
    for key, (section, field, _typ) in _KEY_MAP.items():
        lines.append(f"{key} = {getattr(getattr(cfg, section), field)!r}")
    return "\n".join(lines) + "\n"


def config_as_dict(cfg: SystemConfig) -> dict:
    """Fully-resolved parameters plus derived quantities, for provenance output."""
    out = {key: getattr(getattr(cfg, section), field)
           for key, (section, field, _typ) in _KEY_MAP.items()}
    out["derived.subcarrier_spacing_hz"] = cfg.ofdm.subcarrier_spacing_hz
    out["derived.useful_symbol_s"] = cfg.ofdm.useful_symbol_s
    out["derived.sample_period_s"] = cfg.ofdm.sample_period_s
    out["derived.cp_loss_factor"] = cfg.ofdm.cp_loss_factor
    out["derived.nb_symbol_period_s"] = cfg.nb.symbol_period_s
    out["derived.carrier_offset_hz"] = cfg.carrier_offset_hz
    out["derived.noise_variance"] = cfg.link.noise_variance
    return out
