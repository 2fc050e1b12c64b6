"""Secrecy energy-efficient beamformer design.

Thin wrapper over the compiled core. The heavy lifting (conic solves,
surrogate construction) lives in the C++ extension; this package just
re-exports the bound operations.
"""

from ._secbeam import (
    ChannelSet,
    SystemConfig,
    __version__,
    config_from_json,
    generate_channels,
    load_config,
    metrics,
    rng_algorithm,
    run,
    sweep,
)

__all__ = [
    "ChannelSet",
    "SystemConfig",
    "__version__",
    "config_from_json",
    "generate_channels",
    "load_config",
    "metrics",
    "rng_algorithm",
    "run",
    "sweep",
]
