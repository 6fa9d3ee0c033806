"""
Chemotaxis Consumption Verifier - Report Rendering

Writes report objects (anything with to_dict) as YAML documents and renders
a Markdown summary table of their scalar entries.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

import numpy as np
import yaml
from tabulate import tabulate

logger = logging.getLogger(__name__)


def _plain(value: Any) -> Any:
    """Convert numpy scalars and containers to YAML-safe builtins."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        return value.item()
    return value


def render_yaml(report: Any, header: Optional[str] = None) -> str:
    """YAML text of a report; an optional header becomes a leading comment."""
    payload = _plain(report.to_dict() if hasattr(report, "to_dict") else report)
    body = yaml.safe_dump(payload, sort_keys=False, default_flow_style=False)
    if header:
        lines = "".join(f"# {line}\n" for line in header.splitlines())
        return lines + body
    return body


def write_report(directory: Path, name: str, report: Any, header: Optional[str] = None) -> Path:
    """Write reports/<name>.yaml under directory."""
    path = Path(directory) / "reports" / f"{name}.yaml"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_yaml(report, header), encoding="utf-8")
    logger.info(f"Report written: {path}")
    return path


def _flatten(prefix: str, value: Any, rows: list) -> None:
    if isinstance(value, Mapping):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(value, (list, tuple)) and len(value) > 6:
        rows.append((prefix, f"[{len(value)} entries]"))
    else:
        rows.append((prefix, value))


def render_summary(title: str, sections: Dict[str, Any]) -> str:
    """Markdown summary: one table per section with flattened key paths."""
    parts = [f"# {title}", ""]
    for name, report in sections.items():
        payload = _plain(report.to_dict() if hasattr(report, "to_dict") else report)
        rows: list = []
        _flatten("", payload, rows)
        parts.append(f"## {name}")
        parts.append("")
        parts.append(tabulate(rows, headers=["quantity", "value"], tablefmt="github", floatfmt=".6g"))
        parts.append("")
    return "\n".join(parts)


def write_summary(directory: Path, title: str, sections: Dict[str, Any]) -> Path:
    path = Path(directory) / "summary.md"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_summary(title, sections), encoding="utf-8")
    return path
