"""Report generation: one dict per command, text rendered from the same dict."""

import json
from typing import Any, Dict, List, Optional, Sequence

from rich.table import Table

from . import __version__
from .fncurve import Curve, CurveParams, OracleResult
from .galois import GaloisVerdict, summarize
from .local import SingularityReport
from .poly import format_poly


def to_json(report: Dict[str, Any]) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False)


class ReportGenerator:
    """Builds the report dicts shared by the CLI and the scenario suite."""

    def __init__(self, seed: int = 0):
        self.seed = seed

    def provenance(self, params: CurveParams) -> Dict[str, Any]:
        return {
            "q": params.q,
            "n": params.n,
            "m": params.m,
            "tool_version": __version__,
            "seed": self.seed,
        }

    def generate_curve_report(self, curve: Curve, fnc: Dict[str, bool],
                              emit_poly: bool = False) -> Dict[str, Any]:
        params = curve.params
        report = {
            "report_type": "curve",
            "provenance": self.provenance(params),
            "params": params.as_dict(),
            "degree": curve.degree,
            "terms": curve.terms,
            "fnc": fnc,
        }
        if emit_poly:
            report["poly"] = format_poly(curve.F)
        return report

    def generate_fnc_report(self, curve: Curve, power: int, nonclassical: bool,
                            oracle: Optional[OracleResult]) -> Dict[str, Any]:
        params = curve.params
        return {
            "report_type": "fnc",
            "provenance": self.provenance(params),
            "params": params.as_dict(),
            "power": power,
            "nonclassical": nonclassical,
            "oracle": None if oracle is None else {
                "ext": oracle.ext,
                "checked": oracle.checked,
                "failures": oracle.failures,
                "witness": str(oracle.witness) if oracle.witness is not None else None,
            },
        }

    def generate_singularity_report(self, report: SingularityReport, field: str) -> Dict[str, Any]:
        params = report.params
        return {
            "report_type": "singularities",
            "provenance": self.provenance(params),
            "params": params.as_dict(),
            "field": field,
            "verified_within": report.verified_within,
            "rows": [rec.to_dict() for rec in report.records],
            "summary": {
                "predicted_count": report.predicted_count,
                "found_count": report.found_count,
                "match": report.match,
                "mismatches": list(report.mismatches),
                "by_case": report.by_case(),
            },
        }

    def generate_galois_report(self, params: CurveParams, verdicts: Sequence[GaloisVerdict],
                               field: str, include_deck: bool = False) -> Dict[str, Any]:
        rows = []
        for v in verdicts:
            row = v.to_dict()
            if include_deck:
                row["deck"] = [el.to_dict() for el in v.deck]
                row["relations"] = v.relations
            rows.append(row)
        return {
            "report_type": "galois",
            "provenance": self.provenance(params),
            "params": params.as_dict(),
            "field": field,
            "rows": rows,
            "summary": summarize(verdicts),
        }

    def generate_points_report(self, params: CurveParams, ext: int, count: int) -> Dict[str, Any]:
        return {
            "report_type": "points",
            "provenance": self.provenance(params),
            "params": params.as_dict(),
            "ext": ext,
            "count": count,
        }

    def generate_suite_report(self, results: List[Dict[str, Any]]) -> Dict[str, Any]:
        statuses = [r["status"] for r in results]
        return {
            "report_type": "suite",
            "tool_version": __version__,
            "summary": {
                "total_scenarios": len(results),
                "passed": statuses.count("PASS"),
                "failed": statuses.count("FAIL") + statuses.count("ERROR"),
                "skipped": statuses.count("SKIPPED"),
            },
            "scenario_results": results,
        }

    # -- text ------------------------------------------------------------------

    def generate_human_readable_summary(self, report: Dict[str, Any]) -> str:
        formatter = {
            "curve": self._format_curve,
            "fnc": self._format_fnc,
            "singularities": self._format_singularities,
            "galois": self._format_galois,
            "points": self._format_points,
            "suite": self._format_suite,
        }.get(report.get("report_type"))
        if formatter is None:
            return "Unknown report type"
        return formatter(report)

    def _header(self, title: str, report: Dict[str, Any]) -> str:
        p = report["params"]
        return f"# {title}: q={p['q']}, n={p['n']}, m={p['m']}\n"

    def _format_curve(self, report: Dict[str, Any]) -> str:
        text = self._header("Curve", report)
        text += f"- **Degree**: {report['degree']}\n- **Terms**: {report['terms']}\n"
        for key, value in report["fnc"].items():
            text += f"- **Frobenius nonclassical (N={key})**: {'yes' if value else 'no'}\n"
        if "poly" in report:
            text += f"\nF = {report['poly']}\n"
        return text

    def _format_fnc(self, report: Dict[str, Any]) -> str:
        text = self._header("Frobenius nonclassicality", report)
        text += f"- **Power N**: {report['power']}\n"
        text += f"- **Identity holds**: {'yes' if report['nonclassical'] else 'no'}\n"
        oracle = report.get("oracle")
        if oracle:
            text += f"- **Oracle**: {oracle['checked']} smooth points over GF(q^{oracle['ext']}), "
            text += f"{oracle['failures']} failure(s)\n"
            if oracle["witness"]:
                text += f"- **Witness**: {oracle['witness']}\n"
        return text

    def _format_singularities(self, report: Dict[str, Any]) -> str:
        s = report["summary"]
        text = self._header("Singular points", report)
        text += f"- **Found / predicted**: {s['found_count']} / {s['predicted_count']} ({report['verified_within']})\n"
        text += f"- **Match**: {'✅' if s['match'] else '❌'}\n"
        for case, count in sorted(s["by_case"].items()):
            text += f"- **Case {case}**: {count}\n"
        for mismatch in s["mismatches"]:
            text += f"- ❌ {mismatch}\n"
        return text

    def _format_galois(self, report: Dict[str, Any]) -> str:
        s = report["summary"]
        text = self._header("Galois points", report)
        text += f"- **GALOIS-certified**: {s['galois']}\n"
        text += f"- **NOT-GALOIS-certified**: {s['not_galois']}\n"
        text += f"- **INCONCLUSIVE**: {s['inconclusive']}\n"
        return text

    def _format_points(self, report: Dict[str, Any]) -> str:
        text = self._header("Rational points", report)
        return text + f"- **Points over GF(q^{report['ext']})**: {report['count']}\n"

    def _format_suite(self, report: Dict[str, Any]) -> str:
        s = report["summary"]
        text = "# Scenario suite\n"
        text += f"- **Passed**: {s['passed']}/{s['total_scenarios']}\n"
        for r in report["scenario_results"]:
            if r["status"] in ("FAIL", "ERROR"):
                text += f"- ❌ **{r['scenario']}**: {r.get('error') or ', '.join(r.get('differences', []))}\n"
        return text

    def render_table(self, report: Dict[str, Any]) -> Optional[Table]:
        """Per-row table for reports that have rows."""
        kind = report.get("report_type")
        if kind == "singularities":
            table = Table(title="Singular points")
            for column in ("Point", "Mult", "Case", "Ordinary", "Tangents (order)"):
                table.add_column(column)
            for row in report["rows"]:
                tangents = ", ".join(f"{t['line']} ({t['imult']})" for t in row["tangents"])
                table.add_row(row["point"], str(row["mult"]), str(row["case"]),
                              "yes" if row["ordinary"] else "no", tangents)
            return table
        if kind == "galois":
            table = Table(title="Galois verdicts")
            for column in ("Point", "Degree", "Deck", "Verdict", "Rule", "Witness line"):
                table.add_column(column)
            for row in report["rows"]:
                obstruction = row["obstruction"] or {}
                style = {"GALOIS-certified": "green", "NOT-GALOIS-certified": "red"}.get(row["verdict"], "yellow")
                table.add_row(row["point"], str(row["degree"]), str(row["deck_order"]),
                              f"[{style}]{row['verdict']}[/{style}]",
                              obstruction.get("rule", ""), obstruction.get("line", ""))
            return table
        if kind == "suite":
            table = Table(title="Scenario results")
            table.add_column("Scenario", style="bold")
            table.add_column("Status")
            for r in report["scenario_results"]:
                style = {"PASS": "green", "SKIPPED": "yellow"}.get(r["status"], "red")
                status = f"[{style}]{r['status']}[/{style}]"
                table.add_row(r["scenario"], status)
            return table
        return None
