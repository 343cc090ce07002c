import json
import logging
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from ..exceptions import ScenarioError
from ..schemas.scenario import ScenarioConfig

logger = logging.getLogger(__name__)


def _field_diagnostics(error: ValidationError) -> List[str]:
    diagnostics = []
    for item in error.errors():
        location = ".".join(str(part) for part in item["loc"]) or "<root>"
        diagnostics.append(f"{location}: {item['msg']}")
    return diagnostics


def parse_scenario(data: Dict[str, Any], overrides: Optional[Dict[str, Any]] = None) -> ScenarioConfig:
    """Validate scenario data, applying top-level overrides such as dt or duration"""
    merged = dict(data)
    merged.update({key: value for key, value in (overrides or {}).items() if value is not None})
    try:
        return ScenarioConfig.model_validate(merged)
    except ValidationError as e:
        diagnostics = _field_diagnostics(e)
        logger.error(f"Invalid scenario: {'; '.join(diagnostics)}")
        raise ScenarioError("invalid scenario", diagnostics) from e


def load_scenario(path: str, overrides: Optional[Dict[str, Any]] = None) -> ScenarioConfig:
    """Read a scenario JSON file; missing fields take the towing-circle defaults"""
    try:
        with open(path) as f:
            text = f.read()
    except OSError as e:
        logger.error(f"Error reading scenario {path}: {str(e)}")
        raise ScenarioError(f"cannot read scenario file {path}", [e.strerror or str(e)]) from e

    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(
            f"malformed JSON in {path}", [f"line {e.lineno}, column {e.colno}: {e.msg}"]
        ) from e
    if not isinstance(data, dict):
        raise ScenarioError(f"malformed scenario in {path}", ["top level must be a JSON object"])

    return parse_scenario(data, overrides)
