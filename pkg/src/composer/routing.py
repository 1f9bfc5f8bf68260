#!/usr/bin/env python3
"""
Constrained routing games (CRGs) and their relation to congestion games.

A CRG restricts each commodity to an explicit list of origin-destination
paths in a directed multigraph. Reading edges as resources and paths as
strategies turns it into a congestion game; conversely every congestion game
embeds into a common-OD CRG over a series-parallel chain of
(resource | zero-cost bypass) blocks.
"""

import itertools
import logging
import re
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from core.costs import ConstantCost
from core.errors import StructuralError, WardropKitError
from core.game import Commodity, CongestionGame, DemandVector, FlowProfile, Resource, load_from_flow
from composer.sp_network import Network, NetworkEdge, SPNetwork, is_series_parallel
from solver.beckmann import SolverConfig, as_demand, solve_beckmann
from solver.report import strategy_costs
from utils import settings

logger = logging.getLogger(__name__)

EMBED_MODES = ("auto", "bypass", "super-terminal")


@dataclass(frozen=True, init=False)
class RoutingCommodity:
    id: str
    origin: str
    destination: str
    paths: Tuple[Tuple[str, ...], ...]

    def __init__(self, id: str, origin: str, destination: str, paths: Sequence[Sequence[str]]):
        object.__setattr__(self, "id", str(id))
        object.__setattr__(self, "origin", str(origin))
        object.__setattr__(self, "destination", str(destination))
        object.__setattr__(self, "paths", tuple(tuple(str(e) for e in p) for p in paths))


class ConstrainedRoutingGame:
    def __init__(self, network: Network, commodities: Sequence[RoutingCommodity], name: str = "",
                 sp_expression: Optional[SPNetwork] = None):
        self.network = network
        self.commodities: Tuple[RoutingCommodity, ...] = tuple(commodities)
        self.name = name
        self.sp_expression = sp_expression
        self._validate()

    def _validate(self):
        if not self.commodities:
            raise StructuralError("a routing game needs at least one commodity")
        ids = [c.id for c in self.commodities]
        if len(ids) != len(set(ids)):
            raise StructuralError("duplicate commodity ids")
        for com in self.commodities:
            if not com.paths:
                raise StructuralError(f"commodity {com.id} has no paths")
            if len(set(com.paths)) != len(com.paths):
                raise StructuralError(f"commodity {com.id} lists a path twice")
            for path in com.paths:
                self.path_vertices(com, path)

    @property
    def commodity_ids(self) -> Tuple[str, ...]:
        return tuple(c.id for c in self.commodities)

    def commodity(self, hid: str) -> RoutingCommodity:
        for com in self.commodities:
            if com.id == hid:
                return com
        raise StructuralError(f"unknown commodity id: {hid}")

    def path_vertices(self, com: RoutingCommodity, path: Sequence[str]) -> Tuple[str, ...]:
        """Vertex sequence of a path, checking it runs from origin to destination."""
        if not path:
            raise StructuralError(f"commodity {com.id} has an empty path")
        vertices = [com.origin]
        for eid in path:
            edge = self.network.edge(eid)
            if edge.tail != vertices[-1]:
                raise StructuralError(
                    f"commodity {com.id}: path {list(path)} is not connected at edge {eid}")
            vertices.append(edge.head)
        if vertices[-1] != com.destination:
            raise StructuralError(
                f"commodity {com.id}: path {list(path)} ends at {vertices[-1]}, not {com.destination}")
        return tuple(vertices)

    @property
    def is_common_od(self) -> bool:
        return len({(c.origin, c.destination) for c in self.commodities}) == 1

    def terminals(self) -> Tuple[str, str]:
        if not self.is_common_od:
            raise StructuralError("routing game does not have a common origin and destination")
        return self.commodities[0].origin, self.commodities[0].destination

    def to_congestion_game(self) -> CongestionGame:
        """Edges become resources and paths become strategies, orders preserved."""
        resources = [Resource(e.id, e.cost) for e in self.network.edges]
        commodities = [Commodity(c.id, c.paths) for c in self.commodities]
        return CongestionGame(resources, commodities, name=self.name)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {}
        if self.name:
            data["name"] = self.name
        data["vertices"] = list(self.network.vertices)
        data["edges"] = [e.to_dict() for e in self.network.edges]
        data["commodities"] = [{"id": c.id, "origin": c.origin, "destination": c.destination,
                                "paths": [list(p) for p in c.paths]} for c in self.commodities]
        if self.sp_expression is not None:
            data["sp_expression"] = self.sp_expression.to_dict()
        return data

    def __eq__(self, other):
        return isinstance(other, ConstrainedRoutingGame) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return id(self)


@dataclass(frozen=True)
class EquivalenceWitness:
    """Commodity bijection h <-> h~ and, per pair, a strategy bijection k <-> k~."""

    commodity_map: Tuple[Tuple[str, str], ...]
    strategy_maps: Tuple[Tuple[Tuple[int, int], ...], ...]

    def swapped(self, commodity: str, first: int, second: int) -> "EquivalenceWitness":
        """Copy whose strategy map for `commodity` exchanges the images of two strategies."""
        maps = []
        for (h, _), pairs in zip(self.commodity_map, self.strategy_maps):
            if h == commodity:
                image = dict(pairs)
                image[first], image[second] = image[second], image[first]
                pairs = tuple(sorted(image.items()))
            maps.append(pairs)
        return EquivalenceWitness(self.commodity_map, tuple(maps))

    def problems(self, source: CongestionGame, target: CongestionGame) -> List[str]:
        issues = []
        sources = [h for h, _ in self.commodity_map]
        targets = [t for _, t in self.commodity_map]
        if sorted(sources) != sorted(source.commodity_ids):
            issues.append("commodity map does not cover the source game's commodities exactly once")
        if sorted(targets) != sorted(target.commodity_ids):
            issues.append("commodity map does not cover the target game's commodities exactly once")
        if issues:
            return issues
        for (h, t), pairs in zip(self.commodity_map, self.strategy_maps):
            n_src = len(source.commodity(h).strategies)
            n_dst = len(target.commodity(t).strategies)
            if sorted(k for k, _ in pairs) != list(range(n_src)) or \
                    sorted(k for _, k in pairs) != list(range(n_dst)):
                issues.append(f"strategy map of {h} -> {t} is not a bijection")
        return issues

    def to_dict(self):
        return {"commodities": [list(p) for p in self.commodity_map],
                "strategies": [[list(pair) for pair in pairs] for pairs in self.strategy_maps]}


def identity_witness(game: CongestionGame) -> EquivalenceWitness:
    return EquivalenceWitness(
        tuple((hid, hid) for hid in game.commodity_ids),
        tuple(tuple((k, k) for k in range(len(c.strategies))) for c in game.commodities),
    )


def _fresh(name: str, taken) -> str:
    while name in taken:
        name += "'"
    return name


def embed_sp(game: CongestionGame) -> Tuple[ConstrainedRoutingGame, EquivalenceWitness]:
    """
    Series chain of one (resource | zero-cost bypass) parallel block per
    resource; strategy s becomes the path taking the resource edge exactly on
    the resources of s.
    """
    taken = set(game.resource_ids)
    bypass = {}
    for rid in game.resource_ids:
        bypass[rid] = _fresh(f"{rid}.bypass", taken)
        taken.add(bypass[rid])
    blocks = [SPNetwork.parallel(SPNetwork.edge(r.id, r.cost), SPNetwork.edge(bypass[r.id], ConstantCost(0.0)))
              for r in game.resources]
    expression = SPNetwork.series(*blocks)
    network = expression.flatten("O", "D")

    commodities = []
    for com in game.commodities:
        paths = [tuple(rid if rid in s.resources else bypass[rid] for rid in game.resource_ids)
                 for s in com.strategies]
        commodities.append(RoutingCommodity(com.id, "O", "D", paths))
    crg = ConstrainedRoutingGame(network, commodities, name=f"{game.name or 'game'} (SP embedding)",
                                 sp_expression=expression)
    return crg, identity_witness(game)


def _bypass_ids(network: Network, needed: Sequence[str]) -> Dict[str, str]:
    """Ids for bypass edges, continuing a shared numeric suffix (e1, e2, e3 -> e4, ...)."""
    taken = set(network.edge_index)
    matches = [re.fullmatch(r"(.*?)(\d+)", e.id) for e in network.edges]
    prefixes = {m.group(1) for m in matches if m}
    ids = {}
    if all(matches) and len(prefixes) == 1:
        prefix = prefixes.pop()
        counter = max(int(m.group(2)) for m in matches)
        for eid in needed:
            counter += 1
            ids[eid] = _fresh(f"{prefix}{counter}", taken)
            taken.add(ids[eid])
    else:
        for eid in needed:
            ids[eid] = _fresh(f"{eid}.bypass", taken)
            taken.add(ids[eid])
    return ids


def _hop_path(graph: nx.MultiDiGraph, network: Network, start: str, end: str) -> List[str]:
    """Edge ids of a hop-shortest path; among parallel edges the first listed wins."""
    if start == end:
        return []
    vertices = nx.shortest_path(graph, start, end)
    edges = []
    for u, v in zip(vertices, vertices[1:]):
        edges.append(next(e.id for e in network.edges if e.tail == u and e.head == v))
    return edges


def _bypass_terminals(crg: ConstrainedRoutingGame) -> Optional[Tuple[str, str]]:
    sources, sinks = crg.network.sources(), crg.network.sinks()
    if len(sources) != 1 or len(sinks) != 1:
        return None
    graph = crg.network.to_networkx()
    source, sink = sources[0], sinks[0]
    for com in crg.commodities:
        if not nx.has_path(graph, source, com.origin) or not nx.has_path(graph, com.destination, sink):
            return None
    return source, sink


def embed_common_od(crg: ConstrainedRoutingGame, mode: Optional[str] = None) -> ConstrainedRoutingGame:
    """
    Common-OD version of a multi-origin CRG.

    bypass          reuse the network's unique source and sink as O and D;
                    each commodity is extended along hop-shortest paths
                    O -> O^h and D^h -> D over zero-cost copies of those edges
    super-terminal  new super-source and super-sink with zero-cost connectors
    auto            bypass when the network allows it, else super-terminal
    """
    mode = mode or settings.get_value("composer", "embed_mode", "auto")
    if mode not in EMBED_MODES:
        raise StructuralError(f"unknown embedding mode {mode!r}; expected one of {EMBED_MODES}")
    terminals = _bypass_terminals(crg)
    if mode == "auto":
        mode = "bypass" if terminals else "super-terminal"
    if mode == "bypass":
        if terminals is None:
            raise StructuralError("bypass embedding needs a unique source and sink reaching every commodity")
        return _embed_with_bypasses(crg, *terminals)
    return _embed_with_super_terminals(crg)


def _embed_with_bypasses(crg: ConstrainedRoutingGame, source: str, sink: str) -> ConstrainedRoutingGame:
    network = crg.network
    graph = network.to_networkx()
    extensions = []
    needed = set()
    for com in crg.commodities:
        head = _hop_path(graph, network, source, com.origin)
        tail = _hop_path(graph, network, com.destination, sink)
        extensions.append((head, tail))
        needed.update(head)
        needed.update(tail)
    ordered = [e.id for e in network.edges if e.id in needed]
    ids = _bypass_ids(network, ordered)
    extra = [NetworkEdge(ids[eid], network.edge(eid).tail, network.edge(eid).head, ConstantCost(0.0))
             for eid in ordered]

    commodities = []
    for com, (head, tail) in zip(crg.commodities, extensions):
        paths = [tuple(ids[e] for e in head) + path + tuple(ids[e] for e in tail) for path in com.paths]
        commodities.append(RoutingCommodity(com.id, source, sink, paths))
    logger.debug("bypass embedding added %d edges", len(extra))
    return ConstrainedRoutingGame(network.with_edges([], extra), commodities,
                                  name=f"{crg.name or 'crg'} (common OD)")


def _embed_with_super_terminals(crg: ConstrainedRoutingGame) -> ConstrainedRoutingGame:
    network = crg.network
    vertices = set(network.vertices)
    source = _fresh("O", vertices)
    sink = _fresh("D", vertices | {source})
    taken = set(network.edge_index)
    out_links, in_links = {}, {}
    extra = []
    for com in crg.commodities:
        if com.origin not in out_links:
            eid = _fresh(f"{source}->{com.origin}", taken)
            taken.add(eid)
            out_links[com.origin] = eid
            extra.append(NetworkEdge(eid, source, com.origin, ConstantCost(0.0)))
    for com in crg.commodities:
        if com.destination not in in_links:
            eid = _fresh(f"{com.destination}->{sink}", taken)
            taken.add(eid)
            in_links[com.destination] = eid
            extra.append(NetworkEdge(eid, com.destination, sink, ConstantCost(0.0)))
    commodities = [
        RoutingCommodity(com.id, source, sink,
                         [(out_links[com.origin],) + p + (in_links[com.destination],) for p in com.paths])
        for com in crg.commodities
    ]
    return ConstrainedRoutingGame(network.with_edges([source, sink], extra), commodities,
                                  name=f"{crg.name or 'crg'} (common OD)")


@dataclass(frozen=True)
class RoutingConditions:
    series_parallel: bool
    same_vertex_sequence: bool
    exchange_closed: bool
    details: Tuple[str, ...] = field(default_factory=tuple)

    def as_triple(self) -> Tuple[bool, bool, bool]:
        return self.series_parallel, self.same_vertex_sequence, self.exchange_closed

    def to_dict(self):
        return {"sp": self.series_parallel, "same_vertex_sequence": self.same_vertex_sequence,
                "exchange_closed": self.exchange_closed, "details": list(self.details)}


def _ordered_common(seq: Sequence[str], common) -> List[str]:
    return [v for v in seq if v in common]


def check_routing_conditions(crg: ConstrainedRoutingGame) -> RoutingConditions:
    """
    Structural conditions under which a common-OD CRG keeps monotone loads:

      series_parallel       the network reduces to a single O->D edge
      same_vertex_sequence  paths of a commodity meet their shared vertices in
                            the same order; on series-parallel networks they
                            must also visit the same vertex set
      exchange_closed       following one path to a vertex shared with
                            another and continuing along the other yields a
                            path of the same commodity
    """
    source, sink = crg.terminals()
    details = []
    sp = is_series_parallel(crg.network, source, sink)
    if not sp:
        details.append("network is not two-terminal series-parallel")

    same_sequence = True
    exchange = True
    for com in crg.commodities:
        sequences = [crg.path_vertices(com, p) for p in com.paths]
        allowed = set(com.paths)
        for (i, p), (j, q) in itertools.combinations(list(enumerate(sequences)), 2):
            common = set(p) & set(q)
            if _ordered_common(p, common) != _ordered_common(q, common) or (sp and set(p) != set(q)):
                if same_sequence:
                    details.append(f"commodity {com.id}: paths {i} and {j} visit different vertex sequences")
                same_sequence = False
        for (i, p), (j, q) in itertools.permutations(list(enumerate(sequences)), 2):
            for v in set(p) & set(q) - {com.origin, com.destination}:
                spliced = com.paths[i][:p.index(v)] + com.paths[j][q.index(v):]
                if spliced not in allowed:
                    if exchange:
                        details.append(f"commodity {com.id}: splicing path {i} into path {j} at {v} "
                                       f"gives {list(spliced)}, which is not listed")
                    exchange = False
    return RoutingConditions(sp, same_sequence, exchange, tuple(details))


@dataclass(frozen=True)
class EquivalenceVerdict:
    passed: bool
    failures: Tuple[str, ...] = field(default_factory=tuple)
    lambdas: Tuple[Tuple[Tuple[float, ...], Tuple[float, ...]], ...] = field(default_factory=tuple)

    def to_dict(self):
        return {"pass": self.passed, "failures": list(self.failures),
                "lambda": [{"source": list(a), "target": list(b)} for a, b in self.lambdas]}


def map_flow(witness: EquivalenceWitness, source: CongestionGame, target: CongestionGame,
             flow: FlowProfile) -> FlowProfile:
    """Push a source-game flow through the witness onto the target game."""
    rows = [[0.0] * len(c.strategies) for c in target.commodities]
    for (h, t), pairs in zip(witness.commodity_map, witness.strategy_maps):
        src_row = flow[h]
        dst_row = rows[target.commodity_index[t]]
        for k, k_t in pairs:
            dst_row[k_t] = src_row[k]
    return FlowProfile.from_lists(target, rows)


def map_flow_back(witness: EquivalenceWitness, source: CongestionGame, target: CongestionGame,
                  flow: FlowProfile) -> FlowProfile:
    """Pull a target-game flow back onto the source game."""
    rows = [[0.0] * len(c.strategies) for c in source.commodities]
    for (h, t), pairs in zip(witness.commodity_map, witness.strategy_maps):
        dst_row = flow[t]
        src_row = rows[source.commodity_index[h]]
        for k, k_t in pairs:
            src_row[k] = dst_row[k_t]
    return FlowProfile.from_lists(source, rows)


def check_equivalence(game: CongestionGame, crg: ConstrainedRoutingGame, witness: EquivalenceWitness,
                      demands: Sequence, config: Optional[SolverConfig] = None, seed: int = 0,
                      samples: int = 3, cost_tol: float = 1e-9, lambda_tol: float = 1e-5) -> EquivalenceVerdict:
    """
    Random feasible flows mapped through the witness must keep every strategy
    cost, and both games must reach the same equilibrium costs.
    """
    target = crg.to_congestion_game()
    problems = witness.problems(game, target)
    if problems:
        return EquivalenceVerdict(False, tuple(problems))
    config = config or SolverConfig.from_settings()
    rng = np.random.default_rng(seed)
    failures: List[str] = []
    lambdas = []
    target_of = dict(witness.commodity_map)

    for raw in demands:
        demand = as_demand(game, raw)
        mapped = DemandVector.for_game(target, {target_of[h]: mu for h, mu in zip(demand.keys, demand.values)})
        for _ in range(samples):
            rows = [list(rng.dirichlet(np.ones(len(c.strategies))) * mu)
                    for c, mu in zip(game.commodities, demand.values)]
            flow = FlowProfile.from_lists(game, rows)
            mapped_flow = map_flow(witness, game, target, flow)
            src_costs = strategy_costs(game, [c(x) for c, x in zip(game.costs, load_from_flow(game, flow).values)])
            dst_loads = load_from_flow(target, mapped_flow).values
            dst_costs = strategy_costs(target, [c(x) for c, x in zip(target.costs, dst_loads)])
            for (h, t), pairs in zip(witness.commodity_map, witness.strategy_maps):
                for k, k_t in pairs:
                    a = src_costs[game.commodity_index[h]][k]
                    b = dst_costs[target.commodity_index[t]][k_t]
                    if abs(a - b) > cost_tol * (1.0 + abs(a)):
                        failures.append(f"demand {list(demand.values)}: commodity {h} strategy {k} costs "
                                        f"{a:.12g} but mapped strategy {k_t} of {t} costs {b:.12g}")
        try:
            left = solve_beckmann(game, demand, config)
            right = solve_beckmann(target, mapped, config)
        except WardropKitError as e:
            failures.append(f"demand {list(demand.values)}: solver failed ({e})")
            continue
        right_levels = tuple(right.lambda_of(target_of[h]) for h in game.commodity_ids)
        lambdas.append((left.commodity_costs, right_levels))
        for h, a, b in zip(game.commodity_ids, left.commodity_costs, right_levels):
            if abs(a - b) > lambda_tol * (1.0 + abs(a)):
                failures.append(f"demand {list(demand.values)}: lambda of {h} is {a:.9g} vs {b:.9g}")

    # one message per distinct failing pair is enough
    unique = tuple(dict.fromkeys(failures))
    return EquivalenceVerdict(not unique, unique, tuple(lambdas))
