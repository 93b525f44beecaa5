"""Experiment configuration, flat text serialization, and seed derivation.

Configs serialize to a line-oriented ``key = value`` format (``#`` starts a
comment) that round-trips losslessly: ints and floats keep their exact
values, list fields use comma separation. The canonical text doubles as
the input to per-trial stream-id derivation, so any runner that shares a
config reproduces the same sample streams.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, fields


def derive_stream_id(key: str, trial: int) -> int:
    """Stable 64-bit stream id from a configuration key and trial index."""
    digest = hashlib.blake2b(f"{key}|{trial}".encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


@dataclass
class ExperimentConfig:
    """Knobs shared by all experiment commands; unused fields keep defaults."""

    experiment: str = ""
    n: int = 2000
    nrows: int = 30
    b_list: tuple = (1, 2, 4, 8, 16, 32)
    d_list: tuple = (2, 3)
    beta_list: tuple = (1.0, 0.1, 0.01, 0.001)
    alpha_list: tuple = ()
    trials: int = 5
    seed: int = 8064113
    out_dir: str = "out"
    grid_size: int = 1000
    variant: str = "both"
    mode: str = "quick"
    tol: float = 1e-10
    cluster_dim: int = 60
    ell: int = 6
    eps: float = 0.1

    def __post_init__(self):
        self.b_list = tuple(int(v) for v in self.b_list)
        self.d_list = tuple(int(v) for v in self.d_list)
        self.beta_list = tuple(float(v) for v in self.beta_list)
        self.alpha_list = tuple(float(v) for v in self.alpha_list)
        self.validate()

    def validate(self):
        if self.n < 1 or self.nrows < 1 or self.grid_size < 2:
            raise ValueError("counts must be positive")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if any(v < 1 for v in self.b_list + self.d_list):
            raise ValueError("block sizes and depths must be positive")
        if self.mode not in ("quick", "full"):
            raise ValueError("mode must be 'quick' or 'full'")
        if self.variant not in ("exterior", "interior", "both"):
            raise ValueError("variant must be 'exterior', 'interior' or 'both'")

    def to_text(self) -> str:
        lines = []
        for f in sorted(fields(self), key=lambda f: f.name):
            lines.append(f"{f.name} = {_format_value(getattr(self, f.name))}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        values = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
        known = {f.name: f for f in fields(cls)}
        kwargs = {}
        for key, value in values.items():
            if key not in known:
                raise ValueError(f"unknown configuration key {key!r}")
            kwargs[key] = _parse_value(value, getattr(cls, key))
        return cls(**kwargs)

    def canonical_key(self, *extra) -> str:
        # presentation-only fields must not perturb derived sample streams
        lines = [
            line
            for line in self.to_text().splitlines()
            if not line.startswith(("out_dir ", "mode "))
        ]
        parts = ["\n".join(lines)]
        parts.extend(str(e) for e in extra)
        return "|".join(parts)


def _format_value(value) -> str:
    if isinstance(value, tuple):
        return ", ".join(_format_value(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_value(text: str, default):
    if isinstance(default, tuple):
        if not text:
            return ()
        items = [t.strip() for t in text.split(",") if t.strip()]
        elem = default[0] if default else 1.0
        return tuple(_parse_scalar(t, elem) for t in items)
    return _parse_scalar(text, default)


def _parse_scalar(text: str, default):
    if isinstance(default, bool):
        return text.lower() in ("1", "true", "yes")
    if isinstance(default, int):
        return int(text)
    if isinstance(default, float):
        return float(text)
    return text
