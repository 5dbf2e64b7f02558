# modules/reports.py
import json
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from fpdf import FPDF

from utils import DEFAULT_SETTINGS, ensure_folder, get_logger

logger = get_logger(__name__)

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


@dataclass
class CheckReport:
    """Outcome of one checker on one model; to_dict() is the JSON schema."""
    model: str
    checker: str
    status: str = PASS
    per_degree: List[Dict[str, Any]] = field(default_factory=list)
    max_s: Optional[int] = None
    witnesses: List[str] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = None

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def fail(self, reason: str):
        self.status = FAIL
        self.details.setdefault("failures", []).append(reason)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "model": self.model,
            "checker": self.checker,
            "status": self.status,
            "per_degree": sorted(self.per_degree, key=lambda row: row.get("degree", 0)),
            "max_s": self.max_s,
            "witnesses": list(self.witnesses),
        }
        if self.details:
            data["details"] = self.details
        if self.seed is not None:
            data["seed"] = self.seed
        return data


def status_of(ok: bool) -> str:
    return PASS if ok else FAIL


class ReportsModule:
    """
    Reports Module
    - Tabulate checker output per degree (pandas)
    - Render text tables and the JSON envelope
    - Export to CSV, Excel or PDF
    """

    def __init__(self, reports: Sequence[CheckReport], command: str = "", source: str = ""):
        self.reports = list(reports)
        self.command = command
        self.source = source

    # ---------------- FILTER ----------------
    def filter_degrees(self, max_degree: Optional[int]) -> "ReportsModule":
        if max_degree is None:
            return self
        trimmed = []
        for r in self.reports:
            rows = [row for row in r.per_degree if row.get("degree", 0) <= max_degree]
            trimmed.append(CheckReport(r.model, r.checker, r.status, rows, r.max_s,
                                       r.witnesses, r.details, r.seed))
        return ReportsModule(trimmed, self.command, self.source)

    # ---------------- TABLES ----------------
    @staticmethod
    def to_dataframe(report: CheckReport) -> pd.DataFrame:
        if not report.per_degree:
            return pd.DataFrame(columns=["degree"])
        rows = [{k: _cell(v) for k, v in row.items()} for row in report.per_degree]
        df = pd.DataFrame(rows)
        if "degree" in df.columns:
            df = df.sort_values("degree", kind="stable").reset_index(drop=True)
        return df

    def combined_dataframe(self) -> pd.DataFrame:
        frames = []
        for r in self.reports:
            df = self.to_dataframe(r)
            df.insert(0, "checker", r.checker)
            df.insert(0, "model", r.model)
            df["status"] = r.status
            frames.append(df)
        if not frames:
            return pd.DataFrame(columns=["model", "checker", "degree", "status"])
        return pd.concat(frames, ignore_index=True, sort=False).fillna("")

    def render_text(self) -> str:
        blocks = []
        for r in self.reports:
            header = f"[{r.status.upper()}] {r.checker} on {r.model}"
            if r.max_s is not None:
                header += f"  max_s = {r.max_s}"
            lines = [header]
            df = self.to_dataframe(r)
            if not df.empty:
                lines.append(df.to_string(index=False))
            for w in r.witnesses:
                lines.append(f"  witness: {w}")
            for reason in r.details.get("failures", []):
                lines.append(f"  failure: {reason}")
            for note in r.details.get("notes", []):
                lines.append(f"  note: {note}")
            blocks.append("\n".join(lines))
        return "\n\n".join(blocks) + "\n"

    # ---------------- JSON ----------------
    def envelope(self) -> Dict[str, Any]:
        return {
            "schema_version": DEFAULT_SETTINGS["schema_version"],
            "command": self.command,
            "model": self.source,
            "status": PASS if all(r.passed for r in self.reports) else FAIL,
            "reports": [r.to_dict() for r in self.reports],
        }

    def to_json(self) -> str:
        return json.dumps(self.envelope(), indent=2, ensure_ascii=False) + "\n"

    # ---------------- EXPORT ----------------
    def export(self, path: str) -> str:
        ext = os.path.splitext(path)[1].lower()
        ensure_folder(os.path.dirname(os.path.abspath(path)))
        if ext == ".csv":
            return self.export_csv(path)
        if ext in (".xlsx", ".xls"):
            return self.export_excel(path)
        if ext == ".pdf":
            return self.export_pdf(path)
        if ext == ".json":
            with open(path, "w", encoding="utf-8") as f:
                f.write(self.to_json())
            return path
        raise ValueError(f"Unsupported export format '{ext}' (use .csv, .xlsx, .pdf or .json)")

    def export_csv(self, path: str) -> str:
        self.combined_dataframe().to_csv(path, index=False)
        logger.info("CSV exported to %s", path)
        return path

    def export_excel(self, path: str) -> str:
        with pd.ExcelWriter(path, engine="openpyxl") as writer:
            for n, r in enumerate(self.reports):
                sheet = f"{n + 1}_{r.checker}"[:31]
                self.to_dataframe(r).to_excel(writer, sheet_name=sheet, index=False)
            if not self.reports:
                pd.DataFrame().to_excel(writer, sheet_name="empty", index=False)
        logger.info("Excel exported to %s", path)
        return path

    def export_pdf(self, path: str) -> str:
        pdf = FPDF()
        pdf.add_page()
        row_height = 8
        for r in self.reports:
            pdf.set_font("Arial", "B", 11)
            pdf.cell(0, row_height, _latin1(f"{r.checker} on {r.model}: {r.status}"), ln=1)
            df = self.to_dataframe(r)
            if df.empty:
                continue
            pdf.set_font("Arial", size=8)
            col_width = (pdf.w - 20) / len(df.columns)
            for col in df.columns:
                pdf.cell(col_width, row_height, _latin1(str(col)), border=1)
            pdf.ln(row_height)
            for _, row in df.iterrows():
                for col in df.columns:
                    pdf.cell(col_width, row_height, _latin1(str(row[col]))[:40], border=1)
                pdf.ln(row_height)
            pdf.ln(row_height)
        pdf.output(path)
        logger.info("PDF exported to %s", path)
        return path


def _cell(value: Any) -> Any:
    if isinstance(value, (list, tuple)):
        return "(" + ",".join(str(v) for v in value) + ")"
    if isinstance(value, dict):
        return json.dumps(value, ensure_ascii=False)
    if value is None:
        return ""
    return value


def _latin1(text: str) -> str:
    # the core fpdf fonts only cover latin-1
    return text.encode("latin-1", "replace").decode("latin-1")
