import json
from fractions import Fraction

import pytest

from components.reports import read_card_csv, read_dominance_csv, to_frame, write_reports
from services.analysis_service import AnalysisService, Classification, DominanceReport
from services.cardinality_service import CardinalityService
from services.hyperbola_service import HyperbolaSpec
from services.verification_service import VerificationResult
from utils.data_utils import format_decimal, format_ratio, format_residues, parse_ratio
from utils.exceptions import PreconditionError


def dominance(a, n):
    c2 = CardinalityService.ratio_c2(a, n).value
    return DominanceReport(a, n, c2, Classification.of(c2))


def test_dominance_csv_rows():
    text = write_reports([dominance(11, 441), dominance(2, 25)])
    assert text.splitlines() == [
        "a,n,c2,c2_decimal,classification",
        "11,441,8/7,1.142857,sum-dominant",
        "2,25,1/1,1.000000,balanced",
    ]


def test_empty_stream_writes_header_only():
    assert write_reports([], "csv", kind="dominance") == "a,n,c2,c2_decimal,classification\n"
    assert json.loads(write_reports([], "json", kind="dominance")) == []
    with pytest.raises(PreconditionError):
        write_reports([], "csv")


def test_dominance_csv_round_trip():
    reports = list(AnalysisService.dominance_scan(3, 120, workers=1))
    assert read_dominance_csv(write_reports(reports)) == reports


def test_card_csv_round_trip():
    reports = [
        CardinalityService.card_signed_sumset(HyperbolaSpec(2, 2, 1, 45)),
        CardinalityService.card_signed_sumset(HyperbolaSpec(2, 1, 11, 2**6 * 441)),
        CardinalityService.card_signed_sumset(HyperbolaSpec(3, 1, 2, 33)),
        CardinalityService.card_signed_sumset(HyperbolaSpec(3, 0, 1, 143)),
    ]
    assert read_card_csv(write_reports(reports)) == reports


def test_card_csv_needs_its_header():
    with pytest.raises(PreconditionError):
        read_card_csv("a,n,c2\n1,9,2/3\n")


def test_card_rows_have_fixed_header():
    report = CardinalityService.card_signed_sumset(HyperbolaSpec(2, 2, 1, 45))
    assert write_reports([report]).splitlines() == [
        "a,n,d,m,p,t,count,method,total",
        "1,45,2,2,3,2,2,closed-form-odd-p,6",
        "1,45,2,2,5,1,3,closed-form-odd-p,6",
    ]


def test_json_keeps_exact_ratio():
    rows = json.loads(write_reports([dominance(11, 441)], "json"))
    assert rows == [{"a": 11, "n": 441, "c2": "8/7", "c2_decimal": "1.142857", "classification": "sum-dominant"}]


def test_table_output_mentions_values():
    text = write_reports([dominance(11, 441)], "table")
    assert "8/7" in text and "sum-dominant" in text


def test_other_report_kinds():
    primorial = to_frame([AnalysisService.primorial_series(4, 3)])
    assert list(primorial["c2"]) == ["2/1", "8/3", "16/5"]

    coverage = to_frame([AnalysisService.coverage_check(HyperbolaSpec(3, 3, 1, 3))])
    assert coverage.loc[0, "missing"] == "1"
    assert not coverage.loc[0, "covered"]

    verify = to_frame([VerificationResult("demo", 4, ["x"])])
    assert verify.to_dict(orient="records") == [{"check": "demo", "checked": 4, "mismatches": 1}]

    solve = to_frame([{"b": 0, "a": 1, "p": 11, "t": 1, "x1": 1, "x2": 2, "x3": 3}], kind="solve")
    assert list(solve.columns) == ["b", "a", "p", "t", "x1", "x2", "x3"]


def test_unknown_format_rejected():
    with pytest.raises(PreconditionError):
        write_reports([dominance(1, 9)], "xml")


def test_data_utils():
    assert format_ratio(Fraction(3)) == "3/1"
    assert format_decimal(Fraction(2, 3)) == "0.666667"
    assert parse_ratio("8/7") == Fraction(8, 7)
    assert parse_ratio(" 2 ") == 2
    with pytest.raises(PreconditionError):
        parse_ratio("one half")
    with pytest.raises(PreconditionError):
        parse_ratio("1/0")
    assert format_residues(list(range(3))) == "{0, 1, 2}"
    assert format_residues(list(range(30)), limit=2) == "{0, 1, ... (30 total)}"
