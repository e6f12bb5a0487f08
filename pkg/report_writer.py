"""
Zapis raportów (JSON + opcjonalny CSV) i wczytywanie plików wejściowych JSON.

Raport ma postać {"manifest": ..., "result": ..., "status": ..., "error": ...};
poddrzewo "result" nie zawiera znaczników czasu, więc ponowne uruchomienie
z tym samym manifestem daje identyczne bajty.
"""

import json
import logging
import math
from dataclasses import asdict, dataclass, field
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
from jsonschema import Draft7Validator

from config import OUTPUT_CONFIG, TOOL_VERSION
from errors import InputSchemaError, MWalkError, ReportIoError

logger = logging.getLogger(__name__)

COMMANDS = (
    "validate", "certify", "exact", "estimate", "ratio",
    "riesz", "sweep", "adversary", "suite", "rademacher",
)


@dataclass
class RunManifest:
    """Pełny opis wywołania - wystarcza do odtworzenia raportu."""
    command: str
    argv: List[str]
    inputs: Dict[str, Optional[str]]
    parameters: Dict[str, Any]
    seed: int
    output: str
    tool_version: str = TOOL_VERSION
    timestamp: str = field(default_factory=lambda: datetime.now().isoformat())

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def to_jsonable(obj: Any) -> Any:
    """Sprowadza wyniki modułów (dataclassy z to_dict, numpy, enumy) do typów JSON."""
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        value = float(obj)
        # JSON nie ma inf/nan
        if math.isnan(value) or math.isinf(value):
            return str(value)
        return value
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def write_report(result: Any, manifest: RunManifest, path: str,
                 rows: Optional[List[Dict[str, Any]]] = None,
                 error: Optional[MWalkError] = None) -> Dict[str, str]:
    """
    Zapisuje raport JSON; gdy `rows` podane - także CSV obok (ta sama nazwa, .csv).
    Zwraca ścieżki zapisanych plików.
    """
    report_path = Path(path)
    document = {
        "manifest": to_jsonable(manifest),
        "result": to_jsonable(result) if error is None else None,
        "status": "ok" if error is None else "error",
        "error": error.to_dict() if error is not None else None,
    }

    written = {}
    try:
        report_path.parent.mkdir(parents=True, exist_ok=True)
        with open(report_path, 'w', encoding='utf-8') as f:
            json.dump(document, f, indent=2, ensure_ascii=False, sort_keys=True)
            f.write("\n")
        written["json"] = str(report_path)

        if rows is not None:
            csv_path = report_path.with_suffix(".csv")
            pd.DataFrame(to_jsonable(rows)).to_csv(csv_path, index=False)
            written["csv"] = str(csv_path)
    except OSError as e:
        raise ReportIoError(f"Nie można zapisać raportu {report_path}: {e}") from e

    logger.info(f"Raport zapisany: {', '.join(written.values())}")
    return written


def default_output_path(command: str) -> str:
    return str(Path(OUTPUT_CONFIG["output_dir"]) / f"{command}_report.json")


def read_json_input(path: str, schema: Dict[str, Any], what: str) -> Any:
    """
    Wczytuje plik JSON i waliduje go schematem.
    Błędy składni podają linię i kolumnę, błędy schematu - ścieżkę pola.
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise InputSchemaError(f"{what}: nie można odczytać {path}: {e}") from e
    return parse_json_input(text, schema, f"{what} ({path})")


def parse_json_input(text: str, schema: Dict[str, Any], what: str) -> Any:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputSchemaError(f"{what}: line {e.lineno}, column {e.colno}: {e.msg}") from e

    errors = sorted(Draft7Validator(schema).iter_errors(document), key=lambda err: list(err.absolute_path))
    if errors:
        first = errors[0]
        field_path = "/".join(str(p) for p in first.absolute_path) or "<root>"
        raise InputSchemaError(f"{what}: field '{field_path}': {first.message}")
    return document


def load_report_schema() -> Dict[str, Any]:
    schema_path = Path(__file__).resolve().parent / OUTPUT_CONFIG["schema_file"]
    with open(schema_path, 'r', encoding='utf-8') as f:
        return json.load(f)
