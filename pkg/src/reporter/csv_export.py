"""CSV table output with the effective config on the first line."""

import csv
import json
from typing import TextIO

FLOAT_FORMAT = ".12g"


def format_cell(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, FLOAT_FORMAT)
    return str(value)


def write_table(
    stream: TextIO, columns: list[str], rows: list[tuple | list], config: dict | None = None
) -> None:
    if config is not None:
        stream.write(f"# config: {json.dumps(config, sort_keys=True)}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(f"Row {row!r} does not match columns {columns}")
        writer.writerow([format_cell(v) for v in row])


def generate_csv(
    columns: list[str], rows: list[tuple | list], output_path: str, config: dict | None = None
) -> str:
    """Write a header plus rows, floats at 12 significant digits. Returns the output path."""
    with open(output_path, "w", newline="", encoding="utf-8") as f:
        write_table(f, columns, rows, config)

    return output_path
