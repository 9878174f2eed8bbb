"""Reading the simulator's CSV outputs: metadata lines, header, columns."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class FigureInputError(Exception):
    """A CSV input is missing, malformed, or inconsistent with the job."""


@dataclass(frozen=True)
class CsvTable:
    """One parsed CSV: '#' metadata as a dict plus named numeric columns."""

    path: str
    meta: dict[str, str]
    columns: dict[str, np.ndarray]

    @property
    def fingerprint(self) -> str:
        return self.meta.get("fingerprint", "")

    @property
    def kind(self) -> str:
        return self.meta.get("kind", "")

    def pulse_lines(self) -> list[str]:
        keys = sorted(k for k in self.meta if k.startswith("pulse"))
        return [f"{k}: {self.meta[k]}" for k in keys]


def read_table(path: str) -> CsvTable:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [ln.rstrip("\n") for ln in fh]
    except OSError as exc:
        raise FigureInputError(f"{path}: cannot read ({exc})") from exc

    meta: dict[str, str] = {}
    header: list[str] | None = None
    rows: list[list[float]] = []
    for n, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if sep:
                meta[key.strip()] = value.strip()
            continue
        cells = line.split(",")
        if header is None:
            header = [c.strip() for c in cells]
            continue
        try:
            rows.append([float(c) for c in cells])
        except ValueError as exc:
            raise FigureInputError(f"{path}:{n}: non-numeric cell") from exc
        if len(rows[-1]) != len(header):
            raise FigureInputError(
                f"{path}:{n}: {len(rows[-1])} cells for {len(header)} columns"
            )

    if header is None:
        raise FigureInputError(f"{path}: empty file, no header row")
    if not rows:
        raise FigureInputError(f"{path}: no data rows")
    data = np.asarray(rows, dtype=float)
    return CsvTable(
        path=path,
        meta=meta,
        columns={name: data[:, i] for i, name in enumerate(header)},
    )


def require_columns(table: CsvTable, names: list[str]) -> list[np.ndarray]:
    missing = [n for n in names if n not in table.columns]
    if missing:
        raise FigureInputError(
            f"{table.path}: missing column '{missing[0]}' "
            f"(has: {', '.join(table.columns)})"
        )
    return [table.columns[n] for n in names]
