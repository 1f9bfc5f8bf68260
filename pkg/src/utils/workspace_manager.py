#!/usr/bin/env python3
"""
Workspace Manager for wardrop-kit

Lays out an output directory for CLI artefacts:

    <base>/results   JSON reports and verdicts
    <base>/sweeps    sweep CSVs and region legends
    <base>/logs      task logs of sweeps
"""

import csv
import logging
from pathlib import Path
from typing import Any, Sequence

from formats import numbers

logger = logging.getLogger(__name__)


class WorkspaceManager:
    def __init__(self, base_path="./workspace"):
        """
        Initialize workspace manager.

        Args:
            base_path (str): Base path for the workspace
        """
        self.base_path = Path(base_path)
        self.results_dir = self.base_path / "results"
        self.sweeps_dir = self.base_path / "sweeps"
        self.logs_dir = self.base_path / "logs"
        self.create_directories()

    def create_directories(self):
        """Create necessary directories for the workspace."""
        for directory in (self.base_path, self.results_dir, self.sweeps_dir, self.logs_dir):
            directory.mkdir(parents=True, exist_ok=True)

    def save_report(self, name: str, data: Any) -> Path:
        """
        Save a JSON artefact (report, verdict, game) under results/.

        Args:
            name (str): File stem
            data: JSON-serialisable data

        Returns:
            Path: Written file
        """
        path = self.results_dir / f"{name}.json"
        numbers.dump(data, path)
        logger.info("saved %s", path)
        return path

    def save_csv(self, name: str, header: Sequence[str], rows: Sequence[Sequence[str]]) -> Path:
        """Save a sweep table under sweeps/."""
        path = self.sweeps_dir / f"{name}.csv"
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
        logger.info("saved %s", path)
        return path

    def save_legend(self, name: str, legend: Any) -> Path:
        path = self.sweeps_dir / f"{name}_legend.json"
        numbers.dump(legend, path)
        return path

    def save_log(self, log_name: str, content: str) -> Path:
        """
        Save log content to a file.

        Args:
            log_name (str): Name of the log file
            content (str): Log content
        """
        log_file = self.logs_dir / f"{log_name}.log"
        with open(log_file, 'w', encoding='utf-8') as f:
            f.write(content)
        return log_file
