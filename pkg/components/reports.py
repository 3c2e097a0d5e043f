"""Tabular emission of report values as an aligned table, CSV or JSON.

Exact rationals are written as num/den next to a 6-decimal column, so a
c_2 sitting exactly on 1 survives the trip through a file.
"""

from __future__ import annotations

import io
import json
from functools import singledispatch
from typing import Any, Iterable

import numpy as np
import pandas as pd

from services.analysis_service import (
    Classification,
    CoverageReport,
    DensityReport,
    DominanceReport,
    PrimorialReport,
)
from services.cardinality_service import CardinalityReport, CountMethod, FactorCount
from services.hyperbola_service import HyperbolaSpec
from services.verification_service import VerificationResult
from utils.data_utils import format_decimal, format_ratio, parse_ratio
from utils.exceptions import PreconditionError

FORMATS = ("table", "csv", "json")

COLUMNS: dict[str, list[str]] = {
    "dominance": ["a", "n", "c2", "c2_decimal", "classification"],
    "card": ["a", "n", "d", "m", "p", "t", "count", "method", "total"],
    "density": [
        "a", "x", "L", "e_a_count", "c_a_count", "empirical_density", "empirical_density_decimal",
        "k_a", "bound", "rigorous_bound", "prime_cutoff", "residue_sign",
    ],
    "primorial": ["a", "t", "k", "N_k", "c2", "c2_decimal", "c2_power", "c2_power_decimal", "log_log", "c2_over_log_log"],
    "coverage": ["d", "m", "a", "n", "covered", "missing_count", "missing", "theorem_applies"],
    "verify": ["check", "checked", "mismatches"],
    "solve": ["b", "a", "p", "t", "x1", "x2", "x3"],
    "sumset": ["residue"],
}


@singledispatch
def report_kind(report: Any) -> str:
    raise PreconditionError(f"no tabular layout for {type(report).__name__}")


@report_kind.register
def _(report: DominanceReport) -> str:
    return "dominance"


@report_kind.register
def _(report: CardinalityReport) -> str:
    return "card"


@report_kind.register
def _(report: DensityReport) -> str:
    return "density"


@report_kind.register
def _(report: PrimorialReport) -> str:
    return "primorial"


@report_kind.register
def _(report: CoverageReport) -> str:
    return "coverage"


@report_kind.register
def _(report: VerificationResult) -> str:
    return "verify"


@singledispatch
def report_rows(report: Any) -> list[dict]:
    """One report value flattened to rows (plain dicts pass through)"""
    if isinstance(report, dict):
        return [report]
    raise PreconditionError(f"no tabular layout for {type(report).__name__}")


@report_rows.register
def _(report: DominanceReport) -> list[dict]:
    return [{
        "a": report.a,
        "n": report.n,
        "c2": format_ratio(report.c2),
        "c2_decimal": format_decimal(report.c2),
        "classification": report.classification.value,
    }]


@report_rows.register
def _(report: CardinalityReport) -> list[dict]:
    spec = report.spec
    return [
        {"a": spec.a, "n": spec.n, "d": spec.d, "m": spec.m, "p": f.p, "t": f.t,
         "count": f.count, "method": f.method.value, "total": report.total}
        for f in report.per_factor
    ]


@report_rows.register
def _(report: DensityReport) -> list[dict]:
    return [{
        "a": report.a,
        "x": report.x,
        "L": format_ratio(report.L),
        "e_a_count": report.e_a_count,
        "c_a_count": report.c_a_count,
        "empirical_density": format_ratio(report.empirical_density),
        "empirical_density_decimal": format_decimal(report.empirical_density),
        "k_a": format_ratio(report.k_a),
        "bound": f"{report.bound:.6f}",
        "rigorous_bound": f"{report.rigorous_bound:.6f}",
        "prime_cutoff": report.prime_cutoff,
        "residue_sign": report.residue_sign,
    }]


@report_rows.register
def _(report: PrimorialReport) -> list[dict]:
    return [
        {
            "a": report.a,
            "t": report.t,
            "k": row.k,
            "N_k": row.N_k,
            "c2": format_ratio(row.c2),
            "c2_decimal": format_decimal(row.c2),
            "c2_power": format_ratio(row.c2_power),
            "c2_power_decimal": format_decimal(row.c2_power),
            "log_log": f"{row.log_log:.6f}",
            "c2_over_log_log": f"{float(row.c2) / row.log_log:.6f}",
        }
        for row in report.rows
    ]


@report_rows.register
def _(report: CoverageReport) -> list[dict]:
    spec = report.spec
    missing = report.missing.to_list()
    return [{
        "d": spec.d,
        "m": spec.m,
        "a": spec.a,
        "n": spec.n,
        "covered": report.covered,
        "missing_count": len(missing),
        "missing": " ".join(str(v) for v in missing),
        "theorem_applies": report.theorem_applies,
    }]


@report_rows.register
def _(report: VerificationResult) -> list[dict]:
    return [{"check": report.name, "checked": report.checked, "mismatches": len(report.mismatches)}]


def _native(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def to_frame(reports: Iterable[Any], kind: str | None = None) -> pd.DataFrame:
    """Flatten reports into a frame; `kind` fixes the columns when the stream is empty"""
    reports = list(reports)
    if kind is None:
        if not reports:
            raise PreconditionError("an empty report stream needs an explicit kind")
        kind = report_kind(reports[0])
    rows = [row for report in reports for row in report_rows(report)]
    columns = COLUMNS.get(kind) or (list(rows[0]) if rows else [])
    return pd.DataFrame(rows, columns=columns)


def write_reports(reports: Iterable[Any], fmt: str = "csv", kind: str | None = None) -> str:
    """Render reports in input order as table, CSV or JSON text"""
    if fmt not in FORMATS:
        raise PreconditionError(f"unknown format {fmt!r}, expected one of {', '.join(FORMATS)}")
    df = to_frame(reports, kind)
    if fmt == "csv":
        return df.to_csv(index=False, lineterminator="\n")
    if fmt == "json":
        return json.dumps(df.to_dict(orient="records"), indent=2, default=_native) + "\n"
    if df.empty:
        return " ".join(df.columns) + "\n"
    return df.to_string(index=False) + "\n"


def read_dominance_csv(text: str) -> list[DominanceReport]:
    """Parse dominance CSV back into reports (factor breakdowns are not stored)"""
    df = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False)
    missing = [c for c in COLUMNS["dominance"] if c not in df.columns]
    if missing:
        raise PreconditionError(f"dominance CSV lacks columns {missing}")
    return [
        DominanceReport(int(row.a), int(row.n), parse_ratio(row.c2), Classification(row.classification))
        for row in df.itertuples(index=False)
    ]


def read_card_csv(text: str) -> list[CardinalityReport]:
    """Parse card CSV back into reports, one per distinct (a, n, d, m) in order of appearance"""
    df = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False)
    missing = [c for c in COLUMNS["card"] if c not in df.columns]
    if missing:
        raise PreconditionError(f"card CSV lacks columns {missing}")
    reports = []
    for (a, n, d, m), group in df.groupby(["a", "n", "d", "m"], sort=False):
        rows = group.to_dict(orient="records")
        per_factor = tuple(
            FactorCount(int(row["p"]), int(row["t"]), int(row["count"]), CountMethod(row["method"]))
            for row in rows
        )
        spec = HyperbolaSpec(int(d), int(m), int(a), int(n))
        reports.append(CardinalityReport(spec, per_factor, int(rows[0]["total"])))
    return reports
