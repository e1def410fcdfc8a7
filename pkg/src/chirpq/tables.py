"""Tabulated scan results with reproducibility metadata.

A ScanTable is the unit of CSV output: equal-length observable columns over
one swept parameter, plus a metadata record (all input ratios, solver
settings, code version) sufficient to reproduce the run deterministically.
The CSV carries the metadata as a single ``# metadata: {json}`` header line.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = ["ScanTable", "metadata_hash"]


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def metadata_hash(metadata: dict, length: int = 12) -> str:
    """Stable short hash of a metadata record, used in output file names."""
    return hashlib.md5(_canonical_json(metadata).encode()).hexdigest()[:length]


@dataclass
class ScanTable:
    """Observable columns over one swept parameter."""

    param_name: str
    columns: dict[str, np.ndarray]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) > 1:
            raise ValueError(f"columns have unequal lengths: {lengths}")
        if self.param_name not in self.columns:
            raise ValueError(f"missing swept-parameter column {self.param_name!r}")

    @property
    def param_values(self) -> np.ndarray:
        return self.columns[self.param_name]

    def __len__(self) -> int:
        return len(self.param_values)

    def default_filename(self, experiment: str, suffix: str = ".csv") -> str:
        return f"{experiment}_{metadata_hash(self.metadata)}{suffix}"

    def to_csv(self, path) -> Path:
        path = Path(path)
        names = list(self.columns)
        lines = [f"# metadata: {_canonical_json(self.metadata)}", ",".join(names)]
        data = np.column_stack([np.asarray(self.columns[n], dtype=float)
                                for n in names])
        for row in data:
            lines.append(",".join(f"{x:.17g}" for x in row))
        path.write_text("\n".join(lines) + "\n")
        return path

    def to_json(self, path) -> Path:
        """JSON mirror of the CSV content: metadata plus column arrays."""
        path = Path(path)
        payload = {"metadata": self.metadata,
                   "columns": {n: [float(x) for x in self.columns[n]]
                               for n in self.columns}}
        path.write_text(_canonical_json(payload) + "\n")
        return path

    @classmethod
    def from_csv(cls, path) -> "ScanTable":
        path = Path(path)
        with path.open() as fh:
            first = fh.readline().rstrip("\n")
            if not first.startswith("# metadata:"):
                raise ValueError(f"{path}: missing '# metadata:' header line")
            metadata = json.loads(first.split(":", 1)[1])
            names = fh.readline().rstrip("\n").split(",")
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
        if data.size == 0:
            raise ValueError(f"{path}: no data rows")
        columns = {n: data[:, i] for i, n in enumerate(names)}
        param = metadata.get("param_name", names[0])
        return cls(param_name=param, columns=columns, metadata=metadata)
