"""
Tables of counts over parameter ranges, rendered as csv, json or plain text.
"""

from concurrent.futures import ThreadPoolExecutor
from itertools import product
from typing import Any, Dict, List, Mapping, Optional, Sequence
import csv
import io
import json
import math

from ..config import settings
from ..models import ElementSet, Family, MeetMode, OutputFormat, ParameterValue
from ..utils.logger_config import get_logger
from .evaluation_service import build_request, decimal_string, evaluate, parameter_names
from .numtheory import DomainError

logger = get_logger(__name__)

Row = Dict[str, Any]


class TableError(DomainError):
    """Table ranges that cannot be generated"""


def _row_count(family: Family, ranges: Mapping[str, Sequence[ParameterValue]]) -> int:
    return math.prod(len(ranges.get(name, (None,))) for name in parameter_names(family))


def build_rows(
    family: Family,
    ranges: Mapping[str, Sequence[ParameterValue]],
    mode: Optional[MeetMode] = None,
    max_rows: Optional[int] = None,
    workers: Optional[int] = None,
) -> List[Row]:
    """
    Evaluate a family on the cartesian product of its parameter ranges.

    Rows come out in parameter order (first parameter slowest); each row maps
    every parameter name to its value and ``count`` to the exact count.

    Raises:
        TableError: if a range is empty or the product exceeds the row cap
        pydantic.ValidationError / DomainError: if a tuple is invalid for the family
    """
    max_rows = settings.TABLE_MAX_ROWS if max_rows is None else max_rows
    workers = settings.CHECK_WORKERS if workers is None else workers
    names = parameter_names(family)

    missing = [name for name in names if name not in ranges]
    if missing:
        raise TableError(f"{family.value} needs parameters: {', '.join(missing)}",
                         constraint="every parameter given")
    if any(not ranges[name] for name in names):
        raise TableError("parameter ranges must be nonempty", constraint="l <= m in every a..b")
    rows = _row_count(family, ranges)
    if rows > max_rows:
        raise TableError(f"table would have {rows} rows, above the cap {max_rows}",
                         constraint=f"rows <= {max_rows}")

    tuples = [dict(zip(names, values)) for values in product(*(ranges[name] for name in names))]
    requests = [build_request(family, parameters, mode) for parameters in tuples]
    logger.info(f"Building {len(requests)} rows for {family.value}")

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            counts = list(executor.map(lambda request: evaluate(request).count, requests))
    else:
        counts = [evaluate(request).count for request in requests]
    return [{**parameters, "count": count} for parameters, count in zip(tuples, counts)]


def _text(value: Any) -> str:
    if isinstance(value, ElementSet):
        return ",".join(str(element) for element in value.elements)
    if isinstance(value, int):
        return decimal_string(value)
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, ElementSet):
        return list(value.elements)
    return value


def render_csv(rows: List[Row], columns: Sequence[str]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([*columns, "count"])
    for row in rows:
        writer.writerow([_text(row[name]) for name in (*columns, "count")])
    return buffer.getvalue()


def render_json(rows: List[Row], columns: Sequence[str]) -> str:
    """Compact array of objects; counts are decimal strings"""
    payload = [
        {**{name: _json_value(row[name]) for name in columns}, "count": decimal_string(row["count"])}
        for row in rows
    ]
    return json.dumps(payload, separators=(",", ":")) + "\n"


def render_plain(rows: List[Row], columns: Sequence[str]) -> str:
    lines = [
        " ".join(f"{name}={_text(row[name])}" for name in (*columns, "count"))
        for row in rows
    ]
    return "".join(line + "\n" for line in lines)


_RENDERERS = {
    OutputFormat.CSV: render_csv,
    OutputFormat.JSON: render_json,
    OutputFormat.PLAIN: render_plain,
}


def render_table(family: Family, rows: List[Row], output_format: OutputFormat) -> str:
    return _RENDERERS[output_format](rows, parameter_names(family))
