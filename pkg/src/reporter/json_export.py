"""JSON artifacts and JSON-lines shot streams."""

import json
import sys
from contextlib import contextmanager
from datetime import datetime, timezone


@contextmanager
def _open_output(output_path: str | None):
    if output_path is None:
        yield sys.stdout
    else:
        with open(output_path, "w", encoding="utf-8") as f:
            yield f


def write_json(payload: dict, output_path: str | None, config: dict) -> str | None:
    """Single JSON document: config, a generation timestamp, then the payload keys."""
    document = {
        "config": config,
        "generated_at": datetime.now(timezone.utc).isoformat(),
        **payload,
    }
    with _open_output(output_path) as f:
        json.dump(document, f, indent=2)
        f.write("\n")
    return output_path


def write_jsonl(records: list[dict], output_path: str | None, config: dict) -> str | None:
    """Config line followed by one compact record per line; no timestamps."""
    with _open_output(output_path) as f:
        f.write(json.dumps({"config": config}, sort_keys=True) + "\n")
        for record in records:
            f.write(json.dumps(record, sort_keys=True) + "\n")
    return output_path
