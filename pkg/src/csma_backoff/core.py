"""Shared domain types: PHY parameters, MAC configuration, contention-window
ladder and RTS/CTS slot-duration arithmetic.

All times are stored in seconds. Frame-length fields hold bits excluding the
PHY header for ACK/RTS/CTS; `compute_timing` adds the PHY header.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, replace
from enum import Enum


class Strategy(str, Enum):
    """Backoff policy on success: halve the window or reset to the minimum."""

    PROPOSED = "proposed"
    CLASSICAL = "classical"


@dataclass(frozen=True)
class PhyParameters:
    """Frame lengths (bits) and channel timing constants (seconds)."""

    payload_bits: float = 8184.0
    mac_header_bits: float = 272.0
    phy_header_bits: float = 128.0
    ack_bits: float = 112.0        # excluding PHY header
    rts_bits: float = 160.0        # excluding PHY header
    cts_bits: float = 112.0        # excluding PHY header
    bit_rate: float = 1e6          # bits/second
    propagation_delay: float = 1e-6
    sifs: float = 28e-6
    slot_time: float = 50e-6
    difs: float = 128e-6

    def __post_init__(self):
        if self.bit_rate <= 0:
            raise ValueError("bit_rate must be strictly positive")
        for name in ("payload_bits", "mac_header_bits", "phy_header_bits",
                     "ack_bits", "rts_bits", "cts_bits", "propagation_delay",
                     "sifs", "slot_time", "difs"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


# Defaults above are the 1 Mbit/s FH PHY parameter set used throughout.
DEFAULT_PHY = PhyParameters()


@dataclass(frozen=True)
class MacConfig:
    """Backoff strategy and contention parameters.

    The window at stage i is W_i = 2**i * min_window and backoff counters at
    stage i are drawn uniformly from {0, ..., W_i - 1}.
    """

    strategy: Strategy = Strategy.PROPOSED
    num_stations: int = 10
    max_stage: int = 3
    min_window: int = 16

    def __post_init__(self):
        if self.num_stations < 1:
            raise ValueError("num_stations must be >= 1")
        if self.max_stage < 1:
            raise ValueError("max_stage must be >= 1")
        if self.min_window < 2:
            raise ValueError("min_window must be >= 2")

    def with_(self, **kwargs) -> "MacConfig":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class SlotDurations:
    """Durations of the three virtual slot types (seconds)."""

    t_success: float
    t_collision: float
    t_idle: float


def window(config: MacConfig, stage: int) -> int:
    """Contention window W_i = 2**stage * min_window.

    Counters at this stage are uniform on {0, ..., W_i - 1}.
    """
    if stage < 0 or stage > config.max_stage:
        raise ValueError(
            f"stage {stage} out of range [0, {config.max_stage}]")
    return (1 << stage) * config.min_window


def compute_timing(phy: PhyParameters) -> SlotDurations:
    """RTS/CTS slot durations.

    T_s covers the full RTS/CTS/DATA/ACK exchange with its SIFS gaps and the
    closing DIFS; T_c is an RTS that goes unanswered (RTS + DIFS + delay).
    """
    if phy.bit_rate <= 0:
        raise ValueError("bit_rate must be strictly positive")
    rate = phy.bit_rate
    rts = (phy.rts_bits + phy.phy_header_bits) / rate
    cts = (phy.cts_bits + phy.phy_header_bits) / rate
    ack = (phy.ack_bits + phy.phy_header_bits) / rate
    header = (phy.mac_header_bits + phy.phy_header_bits) / rate
    payload = phy.payload_bits / rate
    sigma = phy.propagation_delay

    t_success = (rts + phy.sifs + sigma
                 + cts + phy.sifs + sigma
                 + header + payload + phy.sifs + sigma
                 + ack + phy.difs + sigma)
    t_collision = rts + phy.difs + sigma
    return SlotDurations(t_success=t_success, t_collision=t_collision,
                         t_idle=phy.slot_time)


_PHY_FIELDS = ("payload_bits", "mac_header_bits", "phy_header_bits",
               "ack_bits", "rts_bits", "cts_bits", "bit_rate",
               "propagation_delay", "sifs", "slot_time", "difs")
_MAC_FIELDS = ("strategy", "num_stations", "max_stage", "min_window")


def load_config(path: str) -> tuple[PhyParameters, MacConfig]:
    """Read a two-section key/value config file.

    Sections `[phy]` and `[mac]` map 1:1 onto PhyParameters and MacConfig
    field names; missing keys keep the defaults. Unknown keys are rejected.
    """
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ValueError(f"cannot read config file: {path}")
    for section in parser.sections():
        if section not in ("phy", "mac"):
            raise ValueError(f"unknown config section [{section}]")

    phy_kwargs = {}
    if parser.has_section("phy"):
        for key, value in parser.items("phy"):
            if key not in _PHY_FIELDS:
                raise ValueError(f"unknown [phy] key: {key}")
            phy_kwargs[key] = float(value)

    mac_kwargs = {}
    if parser.has_section("mac"):
        for key, value in parser.items("mac"):
            if key not in _MAC_FIELDS:
                raise ValueError(f"unknown [mac] key: {key}")
            if key == "strategy":
                mac_kwargs[key] = Strategy(value.strip().lower())
            else:
                mac_kwargs[key] = int(value)

    return PhyParameters(**phy_kwargs), MacConfig(**mac_kwargs)
