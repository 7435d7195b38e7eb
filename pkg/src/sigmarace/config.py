"""Run configuration: precision, budgets, parallelism, output, RNG seed.

Defaults are fixed so every run is reproducible out of the box. A JSON config
file can be pointed at via the SIGMARACE_CONFIG environment variable; CLI
flags override individual fields.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass

from .errors import DomainError

ENV_CONFIG = "SIGMARACE_CONFIG"


@dataclass(frozen=True)
class RunConfig:
    precision: int = 128
    escalation_cap: int = 4096
    base_screen_bits: int = 48
    segment_size: int = 1 << 22
    parallelism: int = 1
    prime_search_budget: int = 500_000
    rho_budget: int = 4_000_000
    divisor_cap: int = 1 << 20
    sieve_value_budget: int = 10 ** 14
    zeta_term_cap: int = 2_000_000
    seed: int = 0x5EED60D
    output_format: str = "human"
    output_path: str | None = None

    def __post_init__(self):
        for name in (
            "precision",
            "escalation_cap",
            "base_screen_bits",
            "segment_size",
            "parallelism",
            "prime_search_budget",
            "rho_budget",
            "divisor_cap",
            "sieve_value_budget",
            "zeta_term_cap",
        ):
            if getattr(self, name) <= 0:
                raise DomainError(f"config field {name} must be positive")
        if self.escalation_cap < self.precision:
            raise DomainError("escalation cap below working precision")
        if self.output_format not in ("csv", "json", "human"):
            raise DomainError(f"unknown output format {self.output_format!r}")


def load_config(path: str | None = None, **overrides) -> RunConfig:
    """Config from (optional) JSON file plus keyword overrides."""
    fields = {}
    path = path or os.environ.get(ENV_CONFIG)
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        known = {f.name for f in dataclasses.fields(RunConfig)}
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        fields.update(data)
    fields.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**fields)
