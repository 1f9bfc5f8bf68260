#!/usr/bin/env python3
"""
Census of active regimes over a set of demand points, and the construction
of a singleton game in which one commodity attains all 2^m - 1 regimes.
"""

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.costs import AffineCost
from core.errors import StructuralError
from core.game import Commodity, CongestionGame, DemandVector, Resource
from solver.beckmann import SolverConfig, solve_beckmann
from singleton.regions import RegimeLabel
from utils.task_manager import TaskManager

logger = logging.getLogger(__name__)


@dataclass
class RegimeCensus:
    counts: Dict[str, int]
    labels: Dict[str, RegimeLabel]
    failures: List[Tuple[Tuple[float, ...], str]] = field(default_factory=list)

    @property
    def distinct(self) -> int:
        return len(self.labels)

    def regimes_of(self, hid: str) -> List[Tuple[str, ...]]:
        return [label.regime(hid) for label in self.labels.values()]

    def to_dict(self):
        return {
            "distinct": self.distinct,
            "regimes": [{"signature": sig, "count": self.counts[sig], **self.labels[sig].to_dict()}
                        for sig in self.labels],
            "failures": [{"demand": list(mu), "error": msg} for mu, msg in self.failures],
        }


def grid_demands(box: Sequence[Tuple[float, float]], resolution: int) -> List[Tuple[float, ...]]:
    """Full tensor grid over a per-commodity box, `resolution` points per axis."""
    if resolution < 2:
        raise StructuralError("grid resolution must be at least 2")
    axes = [np.linspace(lo, hi, resolution) if hi > lo else np.array([lo]) for lo, hi in box]
    return [tuple(float(v) for v in point) for point in itertools.product(*axes)]


def regime_census(game: CongestionGame, box: Optional[Sequence[Tuple[float, float]]] = None,
                  grid: int = 2, demands: Optional[Sequence[Sequence[float]]] = None,
                  commodities: Optional[Sequence[str]] = None,
                  config: Optional[SolverConfig] = None,
                  threads: Optional[int] = None) -> RegimeCensus:
    """
    Distinct active regimes over a demand grid (or an explicit demand list).

    `commodities` projects each regime label onto the named commodities.
    Solver failures at individual points are recorded, not raised.
    """
    if not game.singleton:
        raise StructuralError("regime census needs a singleton game")
    if demands is None:
        if box is None:
            raise StructuralError("regime census needs a demand box or explicit demands")
        if len(box) != game.n_commodities:
            raise StructuralError("demand box must give one interval per commodity")
        demands = grid_demands(box, grid)
    config = config or SolverConfig.from_settings()

    manager = TaskManager()
    run = manager.create_run("regime census", game.name)
    points = [(f"mu={list(mu)}", mu) for mu in demands]

    def work(mu):
        report = solve_beckmann(game, DemandVector.for_game(game, mu), config)
        return RegimeLabel.from_report(report, commodities)

    results = manager.run_tasks(run, points, work, threads)
    counts: Counter = Counter()
    labels: Dict[str, RegimeLabel] = {}
    for task_id in run.tasks:
        if task_id not in results:
            continue
        label = results[task_id]
        counts[label.signature] += 1
        labels.setdefault(label.signature, label)
    failures = [(t.demand, t.metadata.get("error", "")) for t in manager.failed_tasks(run)]
    logger.info("regime census: %d distinct regimes over %d points (%d failed)",
                len(labels), len(points), len(failures))
    return RegimeCensus(dict(counts), labels, failures)


def max_regime_game(m: int) -> CongestionGame:
    """
    Resources 1..m with c_i(x) = x + i; commodity i may use only resource i and
    commodity m+1 may use any resource.
    """
    if m < 1:
        raise StructuralError("m must be at least 1")
    resources = [Resource(str(i), AffineCost(1.0, float(i))) for i in range(1, m + 1)]
    commodities = [Commodity(str(i), [[str(i)]]) for i in range(1, m + 1)]
    commodities.append(Commodity(str(m + 1), [[str(i)] for i in range(1, m + 1)]))
    return CongestionGame(resources, commodities, name=f"all-regimes m={m}")


def max_regime_demands(m: int) -> List[Tuple[Tuple[str, ...], DemandVector]]:
    """
    For every nonempty regime rho of commodity m+1, the demand realising it.

    With i_max = max(rho): mu^i = 0 for i in rho and i_max otherwise, and
    mu^{m+1} = sum_{i in rho} (i_max - i). Commodity m+1 then puts i_max - i on
    each i in rho at cost i_max, while every other resource costs i_max + i.
    """
    game = max_regime_game(m)
    out = []
    for size in range(1, m + 1):
        for rho in itertools.combinations(range(1, m + 1), size):
            i_max = max(rho)
            values = [0.0 if i in rho else float(i_max) for i in range(1, m + 1)]
            values.append(float(sum(i_max - i for i in rho)))
            out.append((tuple(str(i) for i in rho), DemandVector.for_game(game, values)))
    return out
