# ---------------- utils/pdf_exports.py ----------------
# -*- coding: utf-8 -*-
"""
PDF Exports Utility
===================

Page Overview (for future devs)
------------------------------
Central place for generating PDFs used throughout the app.

Current exports:
- Verification report PDF (checks table, gate counts, cost bounds)

Design rules:
- Return PDF as bytes (so Streamlit can download via st.download_button,
  and `cli.py build --pdf` can write them to disk).
- Take the report as its to_dict() payload, not the dataclass.
- Missing keys render as "—".
"""

from __future__ import annotations

from io import BytesIO
from typing import Any, Dict, List, Mapping, Optional

from reportlab.lib import colors
from reportlab.lib.enums import TA_CENTER, TA_LEFT
from reportlab.lib.pagesizes import LETTER
from reportlab.lib.styles import getSampleStyleSheet
from reportlab.lib.units import inch
from reportlab.platypus import Paragraph, SimpleDocTemplate, Spacer, Table, TableStyle


def build_verification_pdf(
    *,
    report: Mapping[str, Any],
    title: str = "Generic Circuit Verification",
    generated_at: Optional[Any] = None,
) -> bytes:
    """
    Build a verification report PDF as bytes.

    Args:
        report: VerificationReport.to_dict() payload
        title: Header title
        generated_at: Optional timestamp line (left out when None)

    Returns:
        PDF bytes
    """
    buffer = BytesIO()

    doc = SimpleDocTemplate(
        buffer,
        pagesize=LETTER,
        leftMargin=0.75 * inch,
        rightMargin=0.75 * inch,
        topMargin=0.7 * inch,
        bottomMargin=0.7 * inch,
        title=title,
    )

    styles = getSampleStyleSheet()
    h1 = styles["Heading1"]
    h2 = styles["Heading2"]
    body = styles["BodyText"]

    h1.alignment = TA_CENTER
    h2.spaceBefore = 10
    h2.spaceAfter = 6
    body.leading = 14
    body.alignment = TA_LEFT

    story: List[Any] = []

    # ---------------- Header ----------------
    story.append(Paragraph(_safe_text(title), h1))
    story.append(Spacer(1, 6))

    verdict = str(report.get("verdict", "—")).upper()
    story.append(Paragraph(f"<b>Verdict:</b> {verdict}", body))
    story.append(Paragraph(f"<b>Function:</b> {_safe_text(report.get('label', '—'))}", body))
    if report.get("source"):
        story.append(Paragraph(f"<b>Input:</b> {_safe_text(report['source'])}", body))
    story.append(
        Paragraph(
            f"<b>m:</b> {report.get('m', '—')} &nbsp; <b>mu:</b> {report.get('mu', '—')} "
            f"&nbsp; <b>tau:</b> {_complex_text(report.get('tau'))}",
            body,
        )
    )
    story.append(Paragraph(f"<b>Seed:</b> {report.get('seed', '—')}", body))
    story.append(Paragraph(f"<b>Input hash:</b> {_safe_text(report.get('input_hash', '—'))}", body))
    story.append(Spacer(1, 10))

    # ---------------- Checks ----------------
    story.append(Paragraph("Checks", h2))
    checks = report.get("checks") or []
    if checks:
        rows = [["Check", "Residual", "Tolerance", "Result"]]
        for c in checks:
            rows.append(
                [
                    _safe_text(c.get("name", "")),
                    _sci(c.get("residual")),
                    _sci(c.get("tolerance")),
                    "pass" if c.get("passed") else "FAIL",
                ]
            )
        story.append(_styled_table(rows, col_widths=[2.2 * inch, 1.4 * inch, 1.4 * inch, 0.9 * inch]))
    else:
        story.append(Paragraph("No checks were run.", body))
    story.append(Spacer(1, 10))

    # ---------------- Coefficients ----------------
    alpha = report.get("alpha") or []
    if alpha:
        story.append(Paragraph("Coefficients", h2))
        rows = [["i", "alpha_i"]] + [[str(i), _complex_text(a)] for i, a in enumerate(alpha)]
        story.append(_styled_table(rows, col_widths=[0.6 * inch, 3.0 * inch]))
        story.append(Spacer(1, 10))

    roots = report.get("extension_roots") or []
    if roots:
        story.append(
            Paragraph(
                "<b>Extra interpolation roots (not eigenvalues of U):</b> "
                + ", ".join(_complex_text(r) for r in roots),
                body,
            )
        )
        story.append(Spacer(1, 10))

    # ---------------- Gate counts ----------------
    story.append(Paragraph("Gate Counts", h2))
    counts: Dict[str, Any] = dict(report.get("gate_counts") or {})
    counts.update({f"two-level {k}": v for k, v in (report.get("two_level") or {}).items()})
    if counts:
        rows = [["Kind", "Count"]] + [[_safe_text(k), str(v)] for k, v in sorted(counts.items())]
        story.append(_styled_table(rows, col_widths=[2.2 * inch, 1.0 * inch]))
    else:
        story.append(Paragraph("No gates recorded.", body))
    story.append(Spacer(1, 10))

    # ---------------- Cost bounds ----------------
    cost = report.get("cost")
    if cost:
        story.append(Paragraph("Cost Bounds", h2))
        rows = [["K", "m", "mu", "bound_A", "bound_small", "total_bound"]]
        rows.append([str(cost.get(k, "—")) for k in ("K", "m", "mu", "bound_A", "bound_small", "total_bound")])
        story.append(_styled_table(rows))
        story.append(Paragraph(f"c_syn = {cost.get('c_syn', '—')} elementary gates per two-level factor", body))

    if generated_at is not None:
        story.append(Spacer(1, 12))
        story.append(Paragraph(f"Generated: {_safe_text(generated_at)}", styles["Italic"]))

    doc.build(story)
    pdf_bytes = buffer.getvalue()
    buffer.close()
    return pdf_bytes


# -------------------------
# Helpers
# -------------------------
def _safe_text(x: Any) -> str:
    if x is None:
        return ""
    s = str(x)
    # ReportLab markup: escape the three specials, collapse control chars
    s = s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    return " ".join(s.replace("\r", " ").replace("\n", " ").split()).strip()


def _sci(x: Any) -> str:
    try:
        return f"{float(x):.3e}"
    except (TypeError, ValueError):
        return "—"


def _complex_text(pair: Any) -> str:
    try:
        re_part, im_part = float(pair[0]), float(pair[1])
    except (TypeError, ValueError, IndexError):
        return "—"
    return f"{re_part:.6g} {'-' if im_part < 0 else '+'} {abs(im_part):.6g}i"


def _styled_table(rows: List[List[str]], col_widths: Optional[List[float]] = None) -> Table:
    tbl = Table(rows, colWidths=col_widths)
    tbl.setStyle(
        TableStyle(
            [
                ("BACKGROUND", (0, 0), (-1, 0), colors.HexColor("#eeeeee")),
                ("TEXTCOLOR", (0, 0), (-1, 0), colors.black),
                ("FONTNAME", (0, 0), (-1, 0), "Helvetica-Bold"),
                ("FONTSIZE", (0, 0), (-1, 0), 10),
                ("ALIGN", (0, 0), (-1, 0), "LEFT"),
                ("GRID", (0, 0), (-1, -1), 0.25, colors.HexColor("#cccccc")),
                ("VALIGN", (0, 0), (-1, -1), "TOP"),
                ("FONTSIZE", (0, 1), (-1, -1), 9),
                ("FONTNAME", (0, 1), (-1, -1), "Helvetica"),
                ("ROWBACKGROUNDS", (0, 1), (-1, -1), [colors.white, colors.HexColor("#fafafa")]),
            ]
        )
    )
    return tbl
