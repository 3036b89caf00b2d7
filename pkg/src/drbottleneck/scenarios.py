"""Empirical scenario sets and their CSV persistence.

A scenario set holds N observed cost vectors over the ground elements.  The
CSV layout is one header row of element ids (0..n-1) followed by one row per
scenario; floats are written with shortest round-trip precision so that
save followed by load is the identity.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ScenarioParseError
from .systems import CombinatorialSystem, ground_size


@dataclass(frozen=True)
class ScenarioSet:
    """N empirical cost vectors of common length n."""

    costs: np.ndarray
    source: str = ""

    def __post_init__(self):
        arr = np.array(self.costs, dtype=float)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DomainError("scenario costs must form a nonempty N-by-n matrix")
        if not np.all(np.isfinite(arr)):
            raise DomainError("scenario costs must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "costs", arr)

    @property
    def count(self) -> int:
        return self.costs.shape[0]

    @property
    def width(self) -> int:
        return self.costs.shape[1]

    def scenario(self, k: int) -> np.ndarray:
        return self.costs[k]


def require_matching_width(scenarios: ScenarioSet, system: CombinatorialSystem) -> None:
    n = ground_size(system)
    if scenarios.width != n:
        offending = min(scenarios.width, n)
        raise DomainError(
            f"scenario width {scenarios.width} does not match the instance "
            f"ground size {n}; first offending column is {offending}"
        )


def save_scenarios(path, scenarios: ScenarioSet) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(range(scenarios.width))
        for row in scenarios.costs:
            writer.writerow([repr(float(x)) for x in row])


def _parse_header(row: list[str]) -> int:
    for col, cell in enumerate(row):
        try:
            value = int(cell)
        except ValueError:
            raise ScenarioParseError(
                f"header cell {cell!r} is not an element id", row=0, column=col
            )
        if value != col:
            raise ScenarioParseError(
                f"header ids must be dense 0..n-1; got {value} at column {col}",
                row=0,
                column=col,
            )
    if not row:
        raise ScenarioParseError("empty header row", row=0)
    return len(row)


def load_scenarios(path_or_text, source: str = "") -> ScenarioSet:
    """Read a scenario CSV from a path, file object, or literal text."""
    if hasattr(path_or_text, "read"):
        fh = path_or_text
        close = False
    elif isinstance(path_or_text, str) and "\n" in path_or_text:
        fh = io.StringIO(path_or_text)
        close = False
    else:
        fh = open(path_or_text, "r", newline="", encoding="utf-8")
        close = True
    try:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ScenarioParseError("scenario file is empty", row=0)
        width = _parse_header(header)
        rows = []
        for idx, row in enumerate(reader, start=1):
            if not row:
                continue
            if len(row) != width:
                raise ScenarioParseError(
                    f"row {idx} has {len(row)} cells, expected {width}", row=idx
                )
            values = []
            for col, cell in enumerate(row):
                try:
                    values.append(float(cell))
                except ValueError:
                    raise ScenarioParseError(
                        f"cell {cell!r} is not numeric", row=idx, column=col
                    )
            rows.append(values)
        if not rows:
            raise ScenarioParseError("no scenario rows found", row=1)
        return ScenarioSet(np.array(rows, dtype=float), source=source or "csv")
    finally:
        if close:
            fh.close()
