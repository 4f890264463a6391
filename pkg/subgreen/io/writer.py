"""
Report writer module for saving run reports and radial profile tables.

This module serializes a run report to JSON (top-level keys sorted, checks kept in
execution order, infinities spelled "+inf" and "-inf", NaN as null), validates it
against the report schema shipped with the package, and writes radial profile tables
of potentials and solutions as CSV files with columns ``r`` and ``value``.

Dependencies:
    - jsonschema: For validating reports against the shipped schema.
    - pandas: For writing the profile tables.
"""

import json
from importlib import resources
from pathlib import Path
from typing import Any, Union

import jsonschema
import numpy as np
import numpy.typing as npt
import pandas as pd

from subgreen.common.exceptions import ReportError

from .utils import _encode

SCHEMA_FILE = "report_schema.json"

FloatArray = npt.NDArray[np.float64]


def load_report_schema() -> dict[str, Any]:
    """
    Load the JSON schema every report validates against.

    Returns:
        dict[str, Any]: The schema document.
    """
    text = resources.files("subgreen.io").joinpath(SCHEMA_FILE).read_text(
        encoding="utf-8"
    )
    schema: dict[str, Any] = json.loads(text)
    return schema

def dump_report(report: dict[str, Any]) -> str:
    """
    Encode and validate a report, returning its JSON text.

    Args:
        report (dict[str, Any]): The report as assembled by the pipeline.

    Returns:
        str: Indented JSON with sorted top-level keys and a trailing newline. Nested
            objects keep their insertion order, so checks stay in execution order.

    Raises:
        ReportError: If the encoded report does not validate against the schema or
            cannot be serialized.
    """
    encoded = _encode(report)
    try:
        jsonschema.validate(instance=encoded, schema=load_report_schema())
    except jsonschema.ValidationError as e:
        raise ReportError(
            f"Report does not match the schema at '{'/'.join(map(str, e.path))}':", e
        ) from e
    return dump_json({key: encoded[key] for key in sorted(encoded)})

def dump_json(obj: Any) -> str:
    """
    Encode an object and serialize it as strict JSON.

    Args:
        obj (Any): Report fragment, dataclass or plain value.

    Returns:
        str: Indented JSON in insertion order with a trailing newline.

    Raises:
        ReportError: If the object cannot be serialized.
    """
    try:
        return json.dumps(
            _encode(obj), indent=2, ensure_ascii=False, allow_nan=False
        ) + "\n"
    except (TypeError, ValueError) as e:
        raise ReportError("Error in serializing report:", e) from e

def save_report(report: dict[str, Any], save_path: Union[Path, str]) -> Path:
    """
    Validate a report and write it as JSON.

    Args:
        report (dict[str, Any]): The report as assembled by the pipeline.
        save_path (Path | str): Destination file.

    Returns:
        Path: The written file.

    Raises:
        ReportError: If validation or writing fails.
    """
    text = dump_report(report)
    path = Path(save_path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise ReportError(f"Error in writing report '{path}':", e) from e
    return path

def save_profiles(
        profiles: dict[str, tuple[FloatArray, FloatArray]],
        save_dir: Union[Path, str]
    ) -> list[Path]:
    """
    Write one CSV table (columns r, value) per radial profile.

    Args:
        profiles (dict[str, tuple[FloatArray, FloatArray]]): Profile name mapped to
            its radii and values.
        save_dir (Path | str): Output directory; created when missing.

    Returns:
        list[Path]: The written files, in the order of `profiles`.

    Raises:
        ReportError: If a table cannot be written.
    """
    out_dir = Path(save_dir)
    written: list[Path] = []
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, (radii, values) in profiles.items():
            path = out_dir / f"{name}.csv"
            table = pd.DataFrame({"r": np.asarray(radii), "value": np.asarray(values)})
            table.to_csv(path, index=False, float_format="%.17g")
            written.append(path)
    except OSError as e:
        raise ReportError(f"Error in writing profiles to '{out_dir}':", e) from e
    return written
