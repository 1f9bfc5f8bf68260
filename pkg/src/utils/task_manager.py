#!/usr/bin/env python3
"""
Task tracking for demand sweeps.

A SweepRun groups one SweepTask per demand point. Tasks are executed through
a thread pool capped by settings.thread_count(); a point whose solve raises
a WardropKitError is marked failed (inconclusive) instead of aborting the run.
"""

import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime
from enum import Enum
from threading import Lock
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from core.errors import WardropKitError
from utils import settings

logger = logging.getLogger(__name__)


class TaskStatus(Enum):
    PENDING = "pending"
    IN_PROGRESS = "in_progress"
    COMPLETED = "completed"
    FAILED = "failed"


class SweepTask:
    def __init__(self, task_id: str, name: str, demand: Sequence[float]):
        self.task_id = task_id
        self.name = name
        self.demand = tuple(float(v) for v in demand)
        self.status = TaskStatus.PENDING
        self.created_at = datetime.now()
        self.started_at: Optional[datetime] = None
        self.completed_at: Optional[datetime] = None
        self.metadata: Dict[str, Any] = {}

    def start(self):
        """Mark task as in progress."""
        self.status = TaskStatus.IN_PROGRESS
        self.started_at = datetime.now()

    def complete(self):
        """Mark task as completed."""
        self.status = TaskStatus.COMPLETED
        self.completed_at = datetime.now()

    def fail(self, error_message: str = ""):
        """Mark task as failed; the point is inconclusive."""
        self.status = TaskStatus.FAILED
        self.completed_at = datetime.now()
        self.metadata["error"] = error_message

    def to_dict(self) -> Dict[str, Any]:
        return {
            "task_id": self.task_id,
            "name": self.name,
            "demand": list(self.demand),
            "status": self.status.value,
            "created_at": self.created_at.isoformat() if self.created_at else None,
            "started_at": self.started_at.isoformat() if self.started_at else None,
            "completed_at": self.completed_at.isoformat() if self.completed_at else None,
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SweepTask':
        task = cls(data["task_id"], data["name"], data.get("demand", []))
        task.status = TaskStatus(data.get("status", "pending"))
        task.metadata = data.get("metadata", {})
        for key in ("created_at", "started_at", "completed_at"):
            if data.get(key):
                setattr(task, key, datetime.fromisoformat(data[key]))
        return task


class SweepRun:
    def __init__(self, run_id: str, name: str, description: str = ""):
        self.run_id = run_id
        self.name = name
        self.description = description
        self.tasks: List[str] = []
        self.status = TaskStatus.PENDING
        self.created_at = datetime.now()
        self.started_at: Optional[datetime] = None
        self.completed_at: Optional[datetime] = None

    def add_task(self, task_id: str):
        if task_id not in self.tasks:
            self.tasks.append(task_id)

    def start(self):
        self.status = TaskStatus.IN_PROGRESS
        self.started_at = datetime.now()

    def complete(self):
        self.status = TaskStatus.COMPLETED
        self.completed_at = datetime.now()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "run_id": self.run_id,
            "name": self.name,
            "description": self.description,
            "tasks": self.tasks,
            "status": self.status.value,
            "created_at": self.created_at.isoformat() if self.created_at else None,
            "started_at": self.started_at.isoformat() if self.started_at else None,
            "completed_at": self.completed_at.isoformat() if self.completed_at else None,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SweepRun':
        run = cls(data["run_id"], data["name"], data.get("description", ""))
        run.tasks = data.get("tasks", [])
        run.status = TaskStatus(data.get("status", "pending"))
        for key in ("created_at", "started_at", "completed_at"):
            if data.get(key):
                setattr(run, key, datetime.fromisoformat(data[key]))
        return run


class TaskManager:
    def __init__(self):
        self.tasks: Dict[str, SweepTask] = {}
        self.runs: Dict[str, SweepRun] = {}
        self._lock = Lock()

    def create_run(self, name: str, description: str = "") -> SweepRun:
        run_id = f"run_{len(self.runs) + 1:03d}"
        run = SweepRun(run_id, name, description)
        self.runs[run_id] = run
        return run

    def create_task(self, run: SweepRun, name: str, demand: Sequence[float]) -> SweepTask:
        task_id = f"{run.run_id}_point_{len(run.tasks) + 1:05d}"
        task = SweepTask(task_id, name, demand)
        self.tasks[task_id] = task
        run.add_task(task_id)
        return task

    def run_tasks(self, run: SweepRun, points: Sequence[Tuple[str, Sequence[float]]],
                  work: Callable[[Tuple[float, ...]], Any],
                  threads: Optional[int] = None) -> Dict[str, Any]:
        """
        Evaluate `work(demand)` for each (name, demand) point.

        Returns task_id -> result for completed tasks; failures are recorded on
        the tasks. Results are keyed, so aggregation does not depend on
        completion order.
        """
        tasks = [self.create_task(run, name, demand) for name, demand in points]
        threads = threads or settings.thread_count()
        run.start()

        def execute(task: SweepTask):
            with self._lock:
                task.start()
            try:
                result = work(task.demand)
            except WardropKitError as e:
                with self._lock:
                    task.fail(str(e))
                logger.info("sweep point %s inconclusive: %s", task.name, e)
                return task.task_id, None
            with self._lock:
                task.complete()
            return task.task_id, result

        if threads > 1 and len(tasks) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                outcomes = list(pool.map(execute, tasks))
        else:
            outcomes = [execute(task) for task in tasks]
        run.complete()
        return {task_id: result for task_id, result in outcomes
                if self.tasks[task_id].status == TaskStatus.COMPLETED}

    def list_tasks(self, run: Optional[SweepRun] = None, status: Optional[TaskStatus] = None) -> List[SweepTask]:
        """List tasks, optionally restricted to one run and/or one status."""
        tasks = [self.tasks[t] for t in run.tasks] if run else list(self.tasks.values())
        if status:
            tasks = [t for t in tasks if t.status == status]
        return tasks

    def failed_tasks(self, run: Optional[SweepRun] = None) -> List[SweepTask]:
        return self.list_tasks(run, TaskStatus.FAILED)

    def summary(self, run: SweepRun) -> Dict[str, int]:
        tasks = self.list_tasks(run)
        return {
            "total": len(tasks),
            "completed": sum(t.status == TaskStatus.COMPLETED for t in tasks),
            "failed": sum(t.status == TaskStatus.FAILED for t in tasks),
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            "runs": {run_id: run.to_dict() for run_id, run in self.runs.items()},
            "tasks": {task_id: task.to_dict() for task_id, task in self.tasks.items()},
        }

    def save(self, path: str):
        """Save runs and tasks to a JSON file."""
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, 'w') as f:
            json.dump(self.to_dict(), f, indent=2)

    @classmethod
    def load(cls, path: str) -> 'TaskManager':
        """Load runs and tasks saved by `save`."""
        manager = cls()
        with open(path, 'r') as f:
            data = json.load(f)
        manager.runs = {k: SweepRun.from_dict(v) for k, v in data.get("runs", {}).items()}
        manager.tasks = {k: SweepTask.from_dict(v) for k, v in data.get("tasks", {}).items()}
        return manager
