#!/usr/bin/env python3
"""
Demand sweep plans.

A plan is a per-commodity box with a grid resolution. In axis-chain mode it
expands into chains that vary one commodity's demand over its interval while
every other coordinate stays fixed (at `base` when given, otherwise at each
grid value of the remaining axes).
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.errors import ConfigurationError, StructuralError
from core.game import CongestionGame

logger = logging.getLogger(__name__)

Point = Tuple[float, ...]


@dataclass(frozen=True)
class Chain:
    axis: int
    points: Tuple[Point, ...]


@dataclass(frozen=True)
class SweepPlan:
    box: Tuple[Tuple[float, float], ...]
    resolution: int = 2
    axes: Optional[Tuple[int, ...]] = None
    base: Optional[Point] = None
    seed: Optional[int] = None
    jitter: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "box", tuple((float(lo), float(hi)) for lo, hi in self.box))
        if not self.box:
            raise ConfigurationError("a sweep needs at least one demand interval")
        for i, (lo, hi) in enumerate(self.box):
            if not (math.isfinite(lo) and math.isfinite(hi)) or lo < 0.0 or hi < lo:
                raise ConfigurationError(f"demand interval {i} must satisfy 0 <= lo <= hi, got [{lo}, {hi}]")
        if int(self.resolution) < 2:
            raise ConfigurationError("grid resolution must be at least 2")
        if not 0.0 <= self.jitter < 0.5:
            raise ConfigurationError("jitter is a fraction of the grid step in [0, 0.5)")
        if self.axes is not None:
            object.__setattr__(self, "axes", tuple(int(a) for a in self.axes))
            if any(a < 0 or a >= len(self.box) for a in self.axes):
                raise ConfigurationError("chain axis out of range")
        if self.base is not None:
            object.__setattr__(self, "base", tuple(float(v) for v in self.base))
            if len(self.base) != len(self.box):
                raise ConfigurationError("base demand must have one entry per commodity")

    @property
    def chain_mode(self) -> bool:
        return self.axes is not None

    @classmethod
    def chain(cls, game: CongestionGame, commodity: str, lo: float, hi: float, steps: int,
              base: Optional[Sequence[float]] = None) -> "SweepPlan":
        """Single chain along `commodity`, every other demand fixed at `base` (default 0)."""
        axis = game.commodity_index.get(commodity)
        if axis is None:
            raise StructuralError(f"unknown commodity id: {commodity}")
        fixed = list(base) if base is not None else [0.0] * game.n_commodities
        if len(fixed) != game.n_commodities:
            raise StructuralError(f"base demand has {len(fixed)} entries for {game.n_commodities} commodities")
        box = [(v, v) for v in fixed]
        box[axis] = (lo, hi)
        return cls(tuple(box), steps, axes=(axis,), base=tuple(fixed))

    def axis_values(self, i: int) -> np.ndarray:
        lo, hi = self.box[i]
        if hi == lo:
            return np.array([lo])
        values = np.linspace(lo, hi, self.resolution)
        if self.jitter > 0.0 and self.resolution > 2:
            rng = np.random.default_rng(None if self.seed is None else self.seed + i)
            step = (hi - lo) / (self.resolution - 1)
            values[1:-1] += rng.uniform(-self.jitter, self.jitter, self.resolution - 2) * step
        return values

    def grid_points(self) -> List[Point]:
        axes = [self.axis_values(i) for i in range(len(self.box))]
        return [tuple(float(v) for v in p) for p in itertools.product(*axes)]

    def chains(self) -> List[Chain]:
        if not self.chain_mode:
            raise ConfigurationError("plan is not in axis-chain mode")
        out = []
        values = [self.axis_values(i) for i in range(len(self.box))]
        for axis in self.axes:
            if self.base is not None:
                anchors = [self.base]
            else:
                others = [values[i] if i != axis else np.array([0.0]) for i in range(len(self.box))]
                anchors = list(itertools.product(*others))
            for anchor in anchors:
                points = []
                for v in values[axis]:
                    p = [float(a) for a in anchor]
                    p[axis] = float(v)
                    points.append(tuple(p))
                if len(points) >= 2:
                    out.append(Chain(axis, tuple(points)))
        return out

    def points(self) -> List[Point]:
        """Distinct demand points of the plan in first-seen order."""
        if not self.chain_mode:
            return self.grid_points()
        seen: Dict[Point, None] = {}
        for chain in self.chains():
            for p in chain.points:
                seen.setdefault(p, None)
        return list(seen)


def _commodity_position(game: CongestionGame, token: str) -> int:
    if token in game.commodity_index:
        return game.commodity_index[token]
    raise StructuralError(f"unknown commodity id: {token}")


def parse_box(text: str, game: CongestionGame, base: Optional[Sequence[float]] = None) -> Tuple[Tuple[float, float], ...]:
    """'h:lo:hi,h2:lo:hi' -> box; commodities not named are pinned at `base` (default 0)."""
    fixed = list(base) if base is not None else [0.0] * game.n_commodities
    box = [(v, v) for v in fixed]
    for part in filter(None, (p.strip() for p in text.split(","))):
        fields = part.split(":")
        if len(fields) != 3:
            raise StructuralError(f"box entry {part!r} must look like commodity:lo:hi")
        try:
            box[_commodity_position(game, fields[0])] = (float(fields[1]), float(fields[2]))
        except ValueError:
            raise StructuralError(f"box entry {part!r} has a non-numeric bound")
    return tuple(box)


def parse_chain(text: str, game: CongestionGame, base: Optional[Sequence[float]] = None) -> SweepPlan:
    """'h:lo:hi:steps' -> single-chain plan."""
    fields = text.split(":")
    if len(fields) != 4:
        raise StructuralError(f"chain {text!r} must look like commodity:lo:hi:steps")
    try:
        lo, hi, steps = float(fields[1]), float(fields[2]), int(fields[3])
    except ValueError:
        raise StructuralError(f"chain {text!r} has a non-numeric field")
    return SweepPlan.chain(game, fields[0], lo, hi, steps, base)
