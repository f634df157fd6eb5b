#!/usr/bin/env python3
"""End-to-end walkthrough on the bundled fixtures.

Builds both reference hierarchies, runs the four showcase queries (three
answerable ones on the employee data, one failing one on the food data),
and prints the answers plus the repair proposals.
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from fuzzysumm.cli import build_state, render_repair_table, render_results_table, run_query

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

EMPLOYEE_QUERIES = [
    ("young employees, cut at 0.5", "strict",
     "Select Income, ProfessionalBackground From Employee Where Age FEQ $Young THOLD 0.5;"),
    ("young + comfortable income (needs the exhaustive reading)", "exhaustive",
     "Select ProfessionalBackground From Employee Where Age FEQ $Young THOLD 0.3 "
     "AND Income FEQ $Comfortable THOLD 0.3;"),
    ("young-or-adult with poor-or-modest income", "strict",
     "Select * From Employee Where Age FEQ ($Young, $Adult) THOLD 0.3 "
     "And Income FEQ ($Poor, $Modest) THOLD 0.3;"),
]

FOOD_QUERY = (
    "older people who consume excessive candy (fails, then gets repaired)",
    "exhaustive",
    "Select 3 0.25 Dairy-product, Lipid From Food-consumption "
    "Where Age FEQ ($Old) THOLD 0.25 AND Candy FEQ ($Excessive) THOLD 0.25;",
)


def show(state, title, mode, text):
    print(f"\n=== {title}\n    {text}\n    mode = {mode}")
    code, payload, results, report = run_query(state, text, mode=mode, k=None, alpha=None)
    if results:
        print(render_results_table(results), end="")
    else:
        print(render_repair_table(report), end="")
    print(f"    exit code: {code}")


def main() -> None:
    employee = build_state(
        FIXTURES / "employee_schema.json",
        hierarchy_path=FIXTURES / "employee_hierarchy.json",
    )
    print(f"employee hierarchy: {len(employee.hierarchy)} summaries")
    for title, mode, text in EMPLOYEE_QUERIES:
        show(employee, title, mode, text)

    food = build_state(
        FIXTURES / "food_schema.json", hierarchy_path=FIXTURES / "food_hierarchy.json"
    )
    print(f"\nfood hierarchy: {len(food.hierarchy)} summaries")
    show(food, *FOOD_QUERY)

    print("\nfor the full pipeline from raw rows, try:")
    print("  fuzzysumm build --schema fixtures/employee_data_schema.json "
          "--data fixtures/employee.csv --threshold 0.4 --out /tmp/emp.json")


if __name__ == "__main__":
    main()
