"""Chart serialization."""

__all__ = ["save_chart", "load_chart", "chart_to_json", "chart_from_json", "FORMAT", "VERSION", "CONVENTION"]

import json

from pathlib import Path

from ..utils import to_jsonable
from ._chart import Chart

FORMAT = "torchaa-chart"
VERSION = 1
CONVENTION = {
    "coordinates": "(q1..qn, p1..pn)",
    "symplectic_form": "sum dp ^ dq",
    "vector_field": "(dF/dp, -dF/dq)",
    "chart": "(I_noncompact, I_compact, x, phi)",
    "canonical_form": "dI_a ^ dx^a + dI_i ^ dphi^i",
}


def chart_to_json(chart: Chart) -> str:
    """
    Serialize a chart to a versioned JSON document.

    Floats are written with their shortest round-trip representation,
    so the numeric payload is restored bit for bit.
    """
    document = {"format": FORMAT, "version": VERSION, "convention": CONVENTION}
    document.update(chart.to_dict())
    return json.dumps(to_jsonable(document), indent=1, sort_keys=True, allow_nan=False)


def chart_from_json(text: str) -> Chart:
    """Inverse of :func:`chart_to_json`."""
    document = json.loads(text)
    if document.get("format") != FORMAT:
        raise ValueError(f"not a chart document (format {document.get('format')!r})")
    if int(document.get("version", -1)) > VERSION:
        raise ValueError(f"chart document version {document['version']} is newer than {VERSION}")
    return Chart.from_dict(document)


def save_chart(chart: Chart, path: str | Path) -> Path:
    """
    Write ``chart`` to ``path`` as JSON.

    Returns
    -------
    Path
        Written file.

    """
    path = Path(path)
    path.write_text(chart_to_json(chart) + "\n")
    return path


def load_chart(path: str | Path) -> Chart:
    """Read a chart written by :func:`save_chart`."""
    return chart_from_json(Path(path).read_text())
