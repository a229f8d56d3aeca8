"""Engine-wide configuration with environment overrides.

The active configuration lives in a context variable so that nested
``use_config`` blocks (and threads) do not interfere with each other.
"""
from __future__ import annotations

import contextlib
import contextvars
import os
from dataclasses import dataclass, replace
from fractions import Fraction

ENV_PREFIX = "SKOLEMKIT_"


@dataclass(frozen=True)
class Config:
    depth: int = 8
    precision_cap: int = 256
    oracle_points: tuple[Fraction, ...] = (Fraction(20), Fraction(40))
    output: str = "text"

    def __post_init__(self) -> None:
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if self.precision_cap < 32:
            raise ValueError("precision_cap must be >= 32")
        if self.output not in ("text", "json"):
            raise ValueError("output must be 'text' or 'json'")
        if not self.oracle_points:
            raise ValueError("oracle_points must be nonempty")

    def with_(self, **changes) -> "Config":
        return replace(self, **changes)


def from_env(env: dict[str, str] | None = None, base: Config | None = None) -> Config:
    """Apply ``SKOLEMKIT_DEPTH``, ``SKOLEMKIT_PREC``, ``SKOLEMKIT_ORACLE_POINTS``
    (comma separated rationals) and ``SKOLEMKIT_OUTPUT`` on top of ``base``."""
    env = os.environ if env is None else env
    cfg = base or Config()
    changes: dict = {}
    if ENV_PREFIX + "DEPTH" in env:
        changes["depth"] = int(env[ENV_PREFIX + "DEPTH"])
    if ENV_PREFIX + "PREC" in env:
        changes["precision_cap"] = int(env[ENV_PREFIX + "PREC"])
    if ENV_PREFIX + "ORACLE_POINTS" in env:
        pts = env[ENV_PREFIX + "ORACLE_POINTS"].split(",")
        changes["oracle_points"] = tuple(Fraction(p.strip()) for p in pts if p.strip())
    if ENV_PREFIX + "OUTPUT" in env:
        changes["output"] = env[ENV_PREFIX + "OUTPUT"]
    return cfg.with_(**changes) if changes else cfg


_current: contextvars.ContextVar[Config] = contextvars.ContextVar("skolemkit_config", default=Config())


def get_config() -> Config:
    return _current.get()


@contextlib.contextmanager
def use_config(cfg: Config):
    token = _current.set(cfg)
    try:
        yield cfg
    finally:
        _current.reset(token)
