# -*- coding: utf-8 -*-
"""
导出管理器
把结果表写成 CSV 或 JSON（浮点数按 repr 输出，可逐位复现）
"""

import csv
import io
import json
import logging
import time
from typing import Dict, List, Optional, Sequence, TextIO

from .. import __version__
from ..utils.helpers import format_cell, json_safe

logger = logging.getLogger(__name__)

TOOL_NAME = "mirror-radiation"

# 两种前置因子写入 JSON 元数据
PREFACTORS = {
    "bose": "1/(2*pi*omega_prime*k)",
    "fermi": "1/(2*pi*omega*k)",
}


class ExportManager:
    """结果表导出"""

    def __init__(self, command: str, columns: Sequence[str], params: Optional[Dict] = None,
                 stamp: bool = False):
        self.command = command
        self.columns = list(columns)
        self.params = dict(params or {})
        self.stamp = stamp

    def _check(self, rows: List[Dict]):
        for row in rows:
            missing = [c for c in self.columns if c not in row]
            if missing:
                raise KeyError(f"行缺少列: {missing}")

    def export_csv(self, rows: List[Dict], stream: TextIO):
        """按列顺序写 CSV，表头为列名"""
        self._check(rows)
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(self.columns)
        for row in rows:
            writer.writerow([format_cell(row[c]) for c in self.columns])

    def metadata(self, warnings: Sequence[str] = (), regimes: Sequence[str] = ()) -> Dict:
        data = {
            "tool": TOOL_NAME,
            "version": __version__,
            "command": self.command,
            "params": json_safe(self.params),
            "hbar": 1,
            "prefactors": dict(PREFACTORS),
            "regimes": sorted(set(regimes)),
            "warnings": list(dict.fromkeys(warnings)),
        }
        if self.stamp:
            data["stamp"] = time.strftime("%Y-%m-%dT%H:%M:%S")
        return data

    def export_json(self, rows: List[Dict], stream: TextIO, warnings: Sequence[str] = (),
                    regimes: Sequence[str] = ()):
        """写 JSON：{"metadata": {...}, "rows": [...]}"""
        self._check(rows)
        metadata = self.metadata(warnings, regimes)
        metadata["columns"] = self.columns
        data = {
            "metadata": metadata,
            "rows": [{c: json_safe(row[c]) for c in self.columns} for row in rows],
        }
        json.dump(data, stream, ensure_ascii=False, indent=2, allow_nan=False)
        stream.write("\n")

    def export(self, rows: List[Dict], fmt: str, stream: TextIO, **meta):
        if fmt == "csv":
            self.export_csv(rows, stream)
        elif fmt == "json":
            self.export_json(rows, stream, **meta)
        else:
            raise ValueError(f"未知的输出格式: {fmt}")
        logger.debug("[Export] %s: %d 行 (%s)", self.command, len(rows), fmt)

    def render(self, rows: List[Dict], fmt: str, **meta) -> str:
        buf = io.StringIO()
        self.export(rows, fmt, buf, **meta)
        return buf.getvalue()
