"""Reader for the simulation CSV format: one ``# metadata:`` JSON header
line, a column-name row, then numeric rows."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = ["CsvTable", "SchemaError", "read_csv"]


class SchemaError(ValueError):
    """Input CSV does not match the expected experiment schema."""


@dataclass
class CsvTable:
    path: Path
    metadata: dict
    columns: dict[str, np.ndarray]

    @property
    def experiment(self) -> str:
        return self.metadata.get("experiment", "")

    def require(self, experiment_prefix: str, columns: set[str]) -> None:
        if not self.experiment.startswith(experiment_prefix):
            raise SchemaError(
                f"{self.path}: experiment {self.experiment!r} does not match "
                f"{experiment_prefix!r}")
        missing = columns - set(self.columns)
        if missing:
            raise SchemaError(
                f"{self.path}: missing columns {sorted(missing)}; has "
                f"{sorted(self.columns)}")


def read_csv(path) -> CsvTable:
    path = Path(path)
    try:
        with path.open() as fh:
            header = fh.readline().rstrip("\n")
            if not header.startswith("# metadata:"):
                raise SchemaError(f"{path}: missing '# metadata:' header")
            metadata = json.loads(header.split(":", 1)[1])
            names = fh.readline().rstrip("\n").split(",")
            if names == [""]:
                raise SchemaError(f"{path}: no column row")
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")  # loadtxt warns on no rows
                data = np.loadtxt(fh, delimiter=",", ndmin=2)
    except OSError as err:
        raise SchemaError(f"{path}: {err}") from err
    if data.size == 0:
        raise SchemaError(f"{path}: no data rows")
    if data.shape[1] != len(names):
        raise SchemaError(f"{path}: {data.shape[1]} data columns vs "
                          f"{len(names)} names")
    columns = {n: data[:, i] for i, n in enumerate(names)}
    return CsvTable(path=path, metadata=metadata, columns=columns)
