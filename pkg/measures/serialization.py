from __future__ import annotations

from typing import Any, Dict, Optional

from core.errors import DataError
from measures.base import SimilarityMeasure
from measures.reference import LocalSimParams, T11Measure, T21Measure, attribute_from_dict
from measures.registry import MEASURES

MEASURE_FORMAT_VERSION = 1


def measure_to_document(measure: SimilarityMeasure, config: Optional[Dict[str, Any]] = None, extra: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """JSON envelope: tag, run config, embedded network documents and local parameters."""
    doc = {
        "format_version": MEASURE_FORMAT_VERSION,
        "name": measure.name,
        "tag": measure.tag.value,
        "trained": bool(measure.trained),
        "measure": measure.to_dict(),
        "config": dict(config or {}),
    }
    if extra:
        doc.update(extra)
    return doc


def measure_from_document(doc: Dict[str, Any]) -> SimilarityMeasure:
    if doc.get("format_version") != MEASURE_FORMAT_VERSION:
        raise DataError(f"unsupported measure format_version {doc.get('format_version')!r}")
    name = doc.get("name")
    cls = MEASURES.get(name)
    if cls is None:
        raise DataError(f"unknown measure '{name}' in document")
    body = doc.get("measure") or {}
    try:
        if cls in (T11Measure, T21Measure):
            attributes = [attribute_from_dict(a) for a in body["attributes"]]
            if cls is T11Measure:
                measure = T11Measure(int(body["input_width"]), attributes)
            else:
                params = body.get("local_params")
                measure = T21Measure(
                    int(body["input_width"]),
                    attributes,
                    LocalSimParams.from_dict(params) if params is not None else None,
                )
        else:
            measure = cls.from_dict(body)
    except (KeyError, TypeError, ValueError) as e:
        raise DataError(f"malformed measure document: {e}") from None
    if measure.learned:
        measure.trained = bool(doc.get("trained", False))
    return measure
