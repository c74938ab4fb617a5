"""Label-query oracles: ground-truth answer keys or a human at a terminal.

Both oracles share the same ``query(point_id) -> label`` surface, track a
hard query budget, and append every answer to an audit log.
"""

from __future__ import annotations

import json
import sys
import time
from dataclasses import dataclass, field

from .vecspace import Dataset

__all__ = [
    "OracleError",
    "BudgetExhausted",
    "MissingLabel",
    "SessionAborted",
    "QueryBudget",
    "GroundTruthOracle",
    "InteractiveOracle",
    "write_query_log",
]


class OracleError(Exception):
    pass


class BudgetExhausted(OracleError):
    """The query limit was reached; oracle state is unchanged."""


class MissingLabel(OracleError):
    """The queried point has no ground-truth label."""


class SessionAborted(OracleError):
    """The interactive input stream closed mid-session."""


@dataclass
class QueryBudget:
    limit: int
    used: int = 0
    log: list = field(default_factory=list)  # (point id, label, timestamp)

    def __post_init__(self):
        if self.limit < 1:
            raise ValueError("query limit must be >= 1")

    def charge(self, point_id, label) -> None:
        if self.used >= self.limit:
            raise BudgetExhausted(f"query budget of {self.limit} exhausted")
        self.used += 1
        self.log.append((point_id, label, time.time()))

    @property
    def remaining(self) -> int:
        return self.limit - self.used


class GroundTruthOracle:
    """Answers queries from a dataset's stored labels."""

    def __init__(self, data: Dataset, limit: int):
        self.data = data
        self.budget = QueryBudget(limit=limit)

    def query(self, point_id):
        if self.budget.used >= self.budget.limit:
            raise BudgetExhausted(f"query budget of {self.budget.limit} exhausted")
        label = self.data.label_of(point_id)  # raises KeyError on unknown id
        if label is None:
            raise MissingLabel(f"point {point_id!r} has no ground-truth label")
        self.budget.charge(point_id, label)
        return label


class InteractiveOracle:
    """Prompts a human annotator for each label.

    ``documents`` maps point ids to display text; ids without text are
    shown bare. Input outside the label universe is re-prompted; a closed
    input stream raises SessionAborted (seeds gathered so far stay valid).
    """

    def __init__(self, data: Dataset, label_universe, limit: int,
                 documents=None, input_stream=None, output_stream=None):
        self.data = data
        self.label_universe = tuple(label_universe)
        if not self.label_universe:
            raise ValueError("interactive oracle needs a closed label set")
        self.documents = documents or {}
        self.stdin = input_stream if input_stream is not None else sys.stdin
        self.stdout = output_stream if output_stream is not None else sys.stdout
        self.budget = QueryBudget(limit=limit)

    def query(self, point_id):
        if self.budget.used >= self.budget.limit:
            raise BudgetExhausted(f"query budget of {self.budget.limit} exhausted")
        self.data.index_of(point_id)  # raises KeyError on unknown id
        text = self.documents.get(point_id)
        self.stdout.write(f"--- query {self.budget.used + 1}/{self.budget.limit} ---\n")
        self.stdout.write(f"point: {point_id}\n")
        if text is not None:
            self.stdout.write(f"{text}\n")
        self.stdout.write(f"labels: {', '.join(str(y) for y in self.label_universe)}\n")
        while True:
            self.stdout.write("label> ")
            self.stdout.flush()
            line = self.stdin.readline()
            if line == "":
                raise SessionAborted("input stream closed during labeling")
            answer = line.strip()
            for label in self.label_universe:
                if answer == str(label):
                    self.budget.charge(point_id, label)
                    return label
            self.stdout.write(f"'{answer}' is not a valid label, try again\n")


def write_query_log(budget: QueryBudget, path) -> None:
    """Persist the audit log as JSON-lines."""
    with open(path, "w") as fh:
        for point_id, label, ts in budget.log:
            fh.write(json.dumps(
                {"id": point_id, "label": label, "timestamp": ts}, sort_keys=True
            ))
            fh.write("\n")
