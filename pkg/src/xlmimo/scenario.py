"""
Configuration-driven experiment sweeps and result emission.

Configs are JSON objects; every length is in wavelengths and every angle in
radians. See ``configs/`` in the repository for complete examples.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Callable, Iterable, Literal, Sequence

import numpy as np

from .channels import (ChannelMatrix, HybridSpec, hybrid_channel, los_channel_dyadic,
                       los_channel_scalar, nlos_fourier_planewave)
from .errors import ConfigError, XLMimoError
from .geometry import X_AXIS, SurfaceSpec, build_upa, rotate_surface, stack_points
from .metrics import capacity_waterfilling, edof

log = logging.getLogger(__name__)

CSV_HEADER = ("scenario", "theta_rad", "N", "d1_lambda", "edof", "rank", "wall_s")
ChannelKind = Literal["los_dyadic", "los_scalar", "nlos", "hybrid"]


def default_d1_grid() -> list[float]:
    return [float(x) for x in np.geomspace(5.0, 200.0, 20)]


@dataclass
class ScenarioConfig:
    kind: Literal["fig4", "fig5", "custom"]
    side: float = 10.0
    distance: float = 7.0
    thetas: list = field(default_factory=lambda: [0.0, math.pi / 6, math.pi / 3])
    n_grid: list = field(default_factory=lambda: [4, 8, 16, 24, 32])
    rotation_axis: tuple = X_AXIS
    tx_n: int = 20
    d1_grid: list = field(default_factory=default_d1_grid)
    d2_offset: float = 2.0
    tx: SurfaceSpec | None = None
    rx: SurfaceSpec | None = None
    channel: ChannelKind = "los_dyadic"
    rician_k: float = 1.0
    seed: int = 0
    total_power: float | None = None
    noise_power: float = 1.0
    output_format: Literal["csv", "json"] = "csv"

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.kind not in ("fig4", "fig5", "custom"):
            raise ConfigError(f"unknown scenario kind {self.kind!r}")
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"unknown output format {self.output_format!r}")
        for name in ("side", "distance", "d2_offset", "noise_power"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ConfigError(f"{name} must be a positive number, got {v!r}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {self.seed!r}")
        if self.kind == "fig4":
            if not self.thetas or not self.n_grid:
                raise ConfigError("fig4 needs non-empty thetas and n_grid")
            if any(not math.isfinite(t) for t in self.thetas):
                raise ConfigError("thetas must be finite")
            if any(int(n) != n or n < 1 for n in self.n_grid):
                raise ConfigError(f"n_grid entries must be positive integers, got {self.n_grid}")
        elif self.kind == "fig5":
            if not self.d1_grid or any(not (d > 0 and math.isfinite(d)) for d in self.d1_grid):
                raise ConfigError("d1_grid must be a non-empty list of positive distances")
            if int(self.tx_n) != self.tx_n or self.tx_n < 1:
                raise ConfigError(f"tx_n must be a positive integer, got {self.tx_n}")
        else:
            if self.tx is None or self.rx is None:
                raise ConfigError("custom scenario needs both tx and rx surfaces")
            if self.channel not in ("los_dyadic", "los_scalar", "nlos", "hybrid"):
                raise ConfigError(f"unknown channel kind {self.channel!r}")
            if not self.rician_k >= 0:
                raise ConfigError("rician_k must be non-negative")
            if self.total_power is not None and not self.total_power > 0:
                raise ConfigError("total_power must be positive")

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ScenarioConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kw = dict(data)
        try:
            for key in ("tx", "rx"):
                if kw.get(key) is not None:
                    kw[key] = surface_from_dict(kw[key])
            if "rotation_axis" in kw:
                kw["rotation_axis"] = tuple(float(x) for x in kw["rotation_axis"])
            return cls(**kw)
        except XLMimoError as exc:
            raise ConfigError(str(exc)) from exc
        except TypeError as exc:
            raise ConfigError(f"malformed config: {exc}") from exc

    @classmethod
    def from_json(cls, path: str | Path) -> "ScenarioConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config root must be a JSON object")
        return cls.from_dict(data)

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        for key in ("tx", "rx"):
            if out[key] is not None:
                out[key] = {k: (list(v) if isinstance(v, tuple) else v) for k, v in out[key].items()}
        out["rotation_axis"] = list(self.rotation_axis)
        return out


def surface_from_dict(d: dict[str, Any]) -> SurfaceSpec:
    """Surface from either ``{n_x, n_y, spacing, ...}`` or ``{n, side, ...}``."""
    d = dict(d)
    extra = {k: tuple(d.pop(k)) for k in ("center", "rotation_axis") if k in d}
    if "rotation_angle" in d:
        extra["rotation_angle"] = float(d.pop("rotation_angle"))
    if "side" in d:
        n, side = d.pop("n"), d.pop("side")
        if d:
            raise ConfigError(f"unexpected surface keys {sorted(d)}")
        return SurfaceSpec.square(n, side, **extra)
    return SurfaceSpec(**d, **extra)


@dataclass
class ResultRow:
    scenario: str
    theta_rad: float | None = None
    N: int | None = None
    d1_lambda: float | None = None
    edof: float = float("nan")
    rank: int = 0
    wall_s: float = 0.0
    capacity_bits: float | None = None

    def record(self) -> dict[str, Any]:
        return {k: getattr(self, k) for k in CSV_HEADER}


def _timed(fn: Callable[[], ResultRow]) -> ResultRow:
    t0 = time.perf_counter()
    row = fn()
    row.wall_s = time.perf_counter() - t0
    return row


def _map(tasks: Sequence[Callable[[], ResultRow]], threads: int) -> list[ResultRow]:
    if threads <= 1:
        return [_timed(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_timed, tasks))


def fig4_geometry(config: ScenarioConfig, n: int, theta: float):
    tx = build_upa(SurfaceSpec.square(n, config.side))
    rx = build_upa(SurfaceSpec.square(n, config.side, center=(0.0, 0.0, config.distance)))
    return tx, rotate_surface(rx, config.rotation_axis, theta)


def run_fig4(config: ScenarioConfig, threads: int = 1) -> list[ResultRow]:
    """EDoF of two square surfaces against grid size ``N`` and tilt ``theta``."""
    if config.kind != "fig4":
        raise ConfigError(f"expected a fig4 config, got {config.kind!r}")
    config.validate()
    grid = sorted((float(t), int(n)) for t in config.thetas for n in config.n_grid)

    def point(theta: float, n: int) -> Callable[[], ResultRow]:
        def run() -> ResultRow:
            tx, rx = fig4_geometry(config, n, theta)
            rep = edof(los_channel_dyadic(tx, rx))
            log.info("fig4 theta=%.4f N=%d edof=%.4f", theta, n, rep.edof)
            return ResultRow("fig4", theta_rad=theta, N=n, edof=rep.edof, rank=rep.rank)
        return run

    return _map([point(t, n) for t, n in grid], threads)


FIG5_VARIANTS = ("fig5-two", "fig5-ue1", "fig5-ue2")


def run_fig5(config: ScenarioConfig, threads: int = 1) -> list[ResultRow]:
    """EDoF of one surface serving two tri-polarized point users on its axis.

    Each ``d1`` yields three rows: both users, user 1 alone, user 2 alone.
    """
    if config.kind != "fig5":
        raise ConfigError(f"expected a fig5 config, got {config.kind!r}")
    config.validate()
    tx = build_upa(SurfaceSpec.square(int(config.tx_n), config.side))

    def point(d1: float, variant: str) -> Callable[[], ResultRow]:
        def run() -> ResultRow:
            ue1 = (0.0, 0.0, d1)
            ue2 = (0.0, 0.0, d1 + config.d2_offset)
            users = {"fig5-two": [ue1, ue2], "fig5-ue1": [ue1], "fig5-ue2": [ue2]}[variant]
            rep = edof(los_channel_dyadic(tx, stack_points(users)))
            return ResultRow(variant, N=int(config.tx_n), d1_lambda=d1, edof=rep.edof, rank=rep.rank)
        return run

    tasks = [point(float(d1), v) for d1 in sorted(config.d1_grid) for v in FIG5_VARIANTS]
    return _map(tasks, threads)


def build_custom_channel(config: ScenarioConfig) -> ChannelMatrix:
    tx = build_upa(config.tx)
    rx = build_upa(config.rx)
    if config.channel == "los_dyadic":
        return los_channel_dyadic(tx, rx)
    if config.channel == "los_scalar":
        return los_channel_scalar(tx, rx)
    nlos = nlos_fourier_planewave(tx, rx, seed=config.seed)
    if config.channel == "nlos":
        return nlos
    return hybrid_channel(los_channel_scalar(tx, rx), nlos, HybridSpec(config.rician_k))


def run_custom(config: ScenarioConfig, threads: int = 1) -> list[ResultRow]:
    """Single channel evaluation from fully specified surfaces."""
    if config.kind != "custom":
        raise ConfigError(f"expected a custom config, got {config.kind!r}")
    config.validate()

    def run() -> ResultRow:
        try:
            h = build_custom_channel(config)
        except XLMimoError as exc:
            raise type(exc)(f"custom scenario ({config.channel}): {exc}") from exc
        rep = edof(h)
        cap = None
        if config.total_power is not None:
            cap = capacity_waterfilling(h, config.total_power, config.noise_power)
        return ResultRow("custom", theta_rad=float(config.rx.rotation_angle), N=int(config.tx.n_x),
                         edof=rep.edof, rank=rep.rank, capacity_bits=cap)

    return _map([run], threads)


RUNNERS = {"fig4": run_fig4, "fig5": run_fig5, "custom": run_custom}


def run(config: ScenarioConfig, threads: int = 1) -> list[ResultRow]:
    return RUNNERS[config.kind](config, threads)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(rows: Iterable[ResultRow], fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in rows:
            writer.writerow([_fmt(v) for v in r.record().values()])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([r.record() for r in rows], indent=1) + "\n"
    raise ConfigError(f"unknown output format {fmt!r}")


def emit(rows: Iterable[ResultRow], fmt: str, path: str | Path) -> Path:
    """Write rows as CSV or JSON. Floats use round-trip (up to 17 digit) precision."""
    text = render(rows, fmt)
    path = Path(path)
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc
    return path
