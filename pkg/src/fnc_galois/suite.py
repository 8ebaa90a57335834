"""Scenario suite: YAML scenario files checked against expectations and golden JSON."""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml
from pydantic import BaseModel, ConfigDict, ValidationError
from rich.console import Console

from .config import EngineConfig
from .errors import FncGaloisError
from .fncurve import CurveParams, build_curve, check_frobenius_nonclassical, count_points, working_curve, working_extension
from .galois import parse_candidates, scan, summarize
from .local import find_singular_points
from .poly import format_poly
from .reporter import to_json

console = Console(stderr=True)

CHECKS = ("build", "fnc", "singularities", "galois", "points")


class ScenarioParams(BaseModel):
    model_config = ConfigDict(extra="forbid")

    q: int
    n: int
    m: int


def golden_differences(golden: Any, actual: Any, path: str = "") -> List[str]:
    """Paths where `actual` disagrees with `golden`; keys absent from golden are ignored."""
    if isinstance(golden, dict):
        if not isinstance(actual, dict):
            return [f"{path or '/'}: expected a mapping"]
        diffs = []
        for key, value in golden.items():
            where = f"{path}/{key}"
            if key not in actual:
                diffs.append(f"{where}: missing")
            else:
                diffs.extend(golden_differences(value, actual[key], where))
        return diffs
    if golden != actual:
        return [f"{path or '/'}: expected {golden!r}, got {actual!r}"]
    return []


class ScenarioRunner:
    """Runs curve scenarios and compares their results with golden files."""

    def __init__(self, golden_dir: Path = Path("testdata"), config: Optional[EngineConfig] = None,
                 threads: int = 1, verbose: bool = False):
        self.golden_dir = Path(golden_dir)
        self.config = config or EngineConfig()
        self.threads = threads
        self.verbose = verbose

    def load_scenario(self, scenario_file: Path) -> Dict[str, Any]:
        with open(scenario_file, "r") as f:
            data = yaml.safe_load(f)
        if not isinstance(data, dict):
            raise FncGaloisError(f"{scenario_file} is not a YAML mapping")
        if "params" not in data:
            raise FncGaloisError(f"{scenario_file} has no params")
        try:
            ScenarioParams.model_validate(data["params"])
        except ValidationError as e:
            raise FncGaloisError(f"{scenario_file} has invalid params: {e}") from e
        return data

    def execute(self, scenario: Dict[str, Any]) -> Dict[str, Any]:
        """Run the scenario's checks and return the result mapping."""
        p = ScenarioParams.model_validate(scenario["params"])
        params = CurveParams(p.q, p.n, p.m)
        checks = scenario.get("checks", list(CHECKS))
        unknown = [c for c in checks if c not in CHECKS]
        if unknown:
            raise FncGaloisError(f"unknown check(s): {', '.join(unknown)}")

        result: Dict[str, Any] = {"params": params.as_dict()}
        curve = build_curve(params)
        if "build" in checks:
            result["build"] = {"degree": curve.degree, "terms": curve.terms,
                               "poly": format_poly(curve.F)}
        if "fnc" in checks:
            result["fnc"] = {
                "n": check_frobenius_nonclassical(curve, params.n),
                "m": check_frobenius_nonclassical(curve, params.m),
            }

        needs_field = "singularities" in checks or "galois" in checks
        if needs_field:
            ext = self.config.work_ext or working_extension(params, self.config.field_size_cap, self.config.max_ext)
            wc = working_curve(params, ext)
        if "singularities" in checks:
            report = find_singular_points(wc, self.config.max_ext)
            result["singularities"] = {
                "predicted_count": report.predicted_count,
                "found_count": report.found_count,
                "match": report.match,
                "by_case": report.by_case(),
            }
        if "galois" in checks:
            seed = int(scenario.get("seed", 0))
            candidates = parse_candidates(wc, scenario.get("candidates", ["base"]), seed)
            verdicts = scan(wc, candidates, self.config, int(scenario.get("search_ext", 1)),
                            seed, self.threads)
            result["galois"] = {
                "summary": summarize(verdicts),
                "deck_orders": sorted({v.deck_order for v in verdicts}),
                "rules": sorted({v.obstruction.rule.value for v in verdicts if v.obstruction}),
            }
        if "points" in checks:
            ext = int(scenario.get("points_ext", 1))
            result["points"] = {"ext": ext, "count": count_points(curve, ext, self.threads)}
        return result

    def run_scenario(self, scenario_file: Path, record: bool = False) -> Dict[str, Any]:
        """One scenario: expectations from the YAML first, then the golden file."""
        scenario_file = Path(scenario_file)
        try:
            scenario = self.load_scenario(scenario_file)
        except (OSError, yaml.YAMLError, FncGaloisError) as e:
            console.print(f"❌ [red]Failed to load scenario {scenario_file.name}: {e}[/red]")
            return {"scenario": scenario_file.stem, "status": "ERROR", "error": str(e)}

        name = scenario.get("name", scenario_file.stem)
        if not scenario.get("enabled", True):
            console.print(f"⏭️  [yellow]Scenario {name} disabled, skipping[/yellow]")
            return {"scenario": scenario_file.stem, "status": "SKIPPED"}

        if self.verbose:
            console.print(f"🚀 [bold blue]Running scenario: {name}[/bold blue]")
        try:
            result = self.execute(scenario)
        except (FncGaloisError, TypeError, ValueError) as e:
            console.print(f"❌ [red]Scenario {name} failed: {e}[/red]")
            return {"scenario": scenario_file.stem, "status": "ERROR", "error": str(e)}

        differences = golden_differences(scenario.get("expected", {}), result)
        golden_path = self.golden_dir / f"{scenario_file.stem}.json"
        if record:
            self.golden_dir.mkdir(parents=True, exist_ok=True)
            golden_path.write_text(to_json(result) + "\n")
            console.print(f"💾 [green]Golden file written: {golden_path}[/green]")
        elif golden_path.exists():
            golden = json.loads(golden_path.read_text())
            differences.extend(golden_differences(golden, result))
        else:
            console.print(f"[yellow]Warning: no golden file {golden_path}[/yellow]")

        return {
            "scenario": scenario_file.stem,
            "name": name,
            "tags": scenario.get("tags", []),
            "status": "PASS" if not differences else "FAIL",
            "differences": differences,
            "result": result,
        }

    def run_all(self, scenarios: List[Path], record: bool = False) -> List[Dict[str, Any]]:
        return [self.run_scenario(path, record) for path in scenarios]


def discover_scenarios(root: Path, tags: Optional[List[str]] = None) -> List[Path]:
    """Scenario files under root, optionally restricted to ones carrying any of `tags`."""
    root = Path(root)
    files = [root] if root.is_file() else sorted(root.rglob("*.yaml"))
    if not tags:
        return files
    selected = []
    for path in files:
        try:
            with open(path, "r") as f:
                data = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError):
            continue
        if set(data.get("tags", [])) & set(tags):
            selected.append(path)
    return selected
