#!/usr/bin/env python3
"""
Region Mapping Module for wardrop-kit

Merges the per-point labels of a demand sweep into a legend: one entry per
distinct cost-order label and one per distinct active-regime label, with
frequency, first/last grid index and the demand bounding box of its points.
"""

import json
import logging
from collections import defaultdict
from typing import Any, Dict, List, Optional, Sequence

from formats import numbers

logger = logging.getLogger(__name__)


def create_region_entry(label_id, signature, description, demand, index):
    """
    Create a legend entry for a label first seen at one grid point.

    Args:
        label_id (str): Short id used in the sweep CSV (O1, R3, ...)
        signature (str): Canonical label text ("alpha<beta", "alpha:{r1}|beta:{r3}")
        description (dict): Serialised WeakOrderLabel or RegimeLabel
        demand (tuple): Demand vector of the point
        index (int): Row index of the point in the sweep

    Returns:
        dict: Legend entry
    """
    return {
        'id': label_id,
        'signature': signature,
        'label': description,
        'frequency': 1,
        'first_index': index,
        'last_index': index,
        'demand_bounds': [[float(v), float(v)] for v in demand],
    }


def _absorb(entry, demand, index):
    entry['frequency'] += 1
    entry['first_index'] = min(entry['first_index'], index)
    entry['last_index'] = max(entry['last_index'], index)
    for bounds, v in zip(entry['demand_bounds'], demand):
        bounds[0] = min(bounds[0], float(v))
        bounds[1] = max(bounds[1], float(v))


class RegionMapper:
    """Assigns stable ids to labels in first-seen order and accumulates entries."""

    def __init__(self, order_prefix: str = "O", regime_prefix: str = "R"):
        self.order_prefix = order_prefix
        self.regime_prefix = regime_prefix
        self.orders: Dict[str, Dict[str, Any]] = {}
        self.regimes: Dict[str, Dict[str, Any]] = {}
        self.failures: List[Dict[str, Any]] = []
        self.points = 0

    def _record(self, table, prefix, signature, description, demand, index) -> str:
        if signature in table:
            _absorb(table[signature], demand, index)
        else:
            table[signature] = create_region_entry(f"{prefix}{len(table) + 1}", signature,
                                                   description, demand, index)
        return table[signature]['id']

    def add_point(self, index: int, demand: Sequence[float], order_label, regime_label):
        """
        Record one solved grid point.

        Returns:
            tuple: (order label id, regime label id)
        """
        self.points += 1
        order_id = self._record(self.orders, self.order_prefix, order_label.signature,
                                order_label.to_dict(), demand, index)
        regime_id = self._record(self.regimes, self.regime_prefix, regime_label.signature,
                                 regime_label.to_dict(), demand, index)
        return order_id, regime_id

    def add_failure(self, index: int, demand: Sequence[float], error: str):
        self.points += 1
        self.failures.append({'index': index, 'demand': [float(v) for v in demand], 'error': error})

    def legend(self, game_name: str = "", tolerances: Optional[Dict[str, float]] = None) -> Dict[str, Any]:
        """
        Generate the legend with label distributions.

        Returns:
            dict: Legend (metadata, orders, regimes, failures)
        """
        order_distribution = defaultdict(int)
        regime_distribution = defaultdict(int)
        for entry in self.orders.values():
            order_distribution[entry['id']] += entry['frequency']
        for entry in self.regimes.values():
            regime_distribution[entry['id']] += entry['frequency']

        return {
            'metadata': {
                'game': game_name,
                'points': self.points,
                'failed': len(self.failures),
                'distinct_orders': len(self.orders),
                'distinct_regimes': len(self.regimes),
                'order_distribution': dict(order_distribution),
                'regime_distribution': dict(regime_distribution),
                'tolerances': dict(tolerances or {}),
            },
            'orders': list(self.orders.values()),
            'regimes': list(self.regimes.values()),
            'failures': list(self.failures),
        }


def save_legend(legend, output_path):
    """
    Save a legend to a JSON file.

    Args:
        legend (dict): Legend to save
        output_path (str): Path to save the file
    """
    numbers.dump(legend, output_path)
    logger.info("region legend saved to %s", output_path)


def load_legend(input_path):
    """
    Load a legend from a JSON file.

    Returns:
        dict: Loaded legend
    """
    with open(input_path, 'r', encoding='utf-8') as f:
        legend = json.load(f)
    logger.debug("region legend loaded from %s", input_path)
    return legend


def compare_legends(old_legend, new_legend, kind='orders'):
    """
    Compare the labels of two legends.

    Args:
        old_legend (dict): Reference legend
        new_legend (dict): Legend to compare
        kind (str): 'orders' or 'regimes'

    Returns:
        dict: Added, removed and unchanged signatures with counts
    """
    old_signatures = {entry['signature'] for entry in old_legend.get(kind, [])}
    new_signatures = {entry['signature'] for entry in new_legend.get(kind, [])}

    added = new_signatures - old_signatures
    removed = old_signatures - new_signatures
    unchanged = old_signatures & new_signatures

    return {
        'added': sorted(added),
        'removed': sorted(removed),
        'unchanged': sorted(unchanged),
        'summary': {
            'added_count': len(added),
            'removed_count': len(removed),
            'unchanged_count': len(unchanged)
        }
    }
