#!/usr/bin/env python3
"""Regenerate the JSON/CSV fixtures under fixtures/.

The employee and food-consumption summary hierarchies are published
reference tables; they are entered here literally (expanding the food
table's label abbreviations) and serialized through the package's own
loaders so the files on disk are canonical.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from fuzzysumm.summary import ConceptSummary, SummaryHierarchy

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


def dump(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {path.relative_to(ROOT)}")


# --------------------------------------------------------------------------
# Employee: schema, raw data, summary hierarchy
# --------------------------------------------------------------------------

EMPLOYEE_SCHEMA = {
    "attributes": [
        {
            "name": "Age",
            "ftype": 1,
            "labels": [{"name": "Young"}, {"name": "Adult"}, {"name": "Old"}],
            "cluster_count": 3,
        },
        {
            "name": "Income",
            "ftype": 1,
            "labels": [{"name": "Poor"}, {"name": "Modest"}, {"name": "Comfortable"}],
            "cluster_count": 3,
        },
        {"name": "ProfessionalBackground", "ftype": 1, "labels": []},
    ]
}

# label-valued variant used to ingest the raw employee rows (Age and Income
# are stored as labels there, so they match by identity instead of FCM)
EMPLOYEE_DATA_SCHEMA = {
    "attributes": [
        {
            "name": "Age",
            "ftype": 4,
            "labels": [{"name": "Young"}, {"name": "Adult"}, {"name": "Old"}],
            "cluster_count": 3,
        },
        {
            "name": "Income",
            "ftype": 4,
            "labels": [{"name": "Poor"}, {"name": "Modest"}, {"name": "Comfortable"}],
            "cluster_count": 3,
        },
        {
            "name": "ProfessionalBackground",
            "ftype": 1,
            "labels": [{"name": "Junior"}, {"name": "Confirmed"}, {"name": "Senior"}],
            "cluster_count": 3,
        },
    ]
}

EMPLOYEE_CSV = """\
id,Age,Income,ProfessionalBackground
t1,$Adult,$Modest,10
t2,$Adult,$Modest,5
t3,$Young,$Modest,3
t4,$Adult,$Poor,20
t5,$Adult,$Poor,7
t6,$Adult,$Comfortable,12
"""

# numeric variant: clusterable end to end with the ordered employee schema
EMPLOYEE_NUMERIC_CSV = """\
id,Age,Income,ProfessionalBackground
t1,23,1200,1
t2,27,1500,3
t3,41,2600,12
t4,45,2900,15
t5,63,4100,30
t6,66,4500,33
"""

E = {  # employee hierarchy: id -> (extent, intent)
    "z0": ({"t1": 1.0, "t2": 1.0, "t3": 1.0, "t4": 1.0, "t5": 1.0, "t6": 1.0}, []),
    "z11": ({"t1": 0.5, "t2": 0.6, "t4": 0.8, "t5": 0.4, "t6": 0.5}, ["Age::Adult"]),
    "z12": ({"t1": 0.5, "t2": 0.4, "t3": 0.7, "t5": 0.6, "t6": 0.5}, ["Income::Modest"]),
    "z13": ({"t1": 0.5, "t2": 0.4, "t3": 0.7, "t5": 0.6, "t6": 0.5}, ["Age::Young"]),
    "z21": ({"t1": 0.5, "t2": 0.6, "t4": 0.4}, ["Age::Adult", "Income::Modest"]),
    "z22": ({"t1": 0.5, "t2": 0.4, "t3": 0.7}, ["Age::Young", "Income::Modest"]),
    "z23": ({"t2": 0.4, "t4": 0.6, "t5": 0.7}, ["Age::Adult", "Income::Poor"]),
    "z24": ({"t1": 0.5, "t2": 0.6, "t5": 0.4, "t6": 0.5}, ["Age::Young", "Age::Adult"]),
    "z31": ({"t2": 0.4, "t4": 0.6}, ["Age::Adult", "Income::Poor", "Income::Modest"]),
    "z32": ({"t1": 0.5, "t2": 0.4}, ["Age::Young", "Age::Adult", "Income::Modest"]),
    "z33": ({"t2": 0.4, "t5": 0.4}, ["Age::Young", "Age::Adult", "Income::Poor"]),
    "z34": ({"t1": 0.4, "t6": 0.8}, ["Age::Young", "Age::Adult", "Income::Comfortable"]),
    "z41": ({"t2": 0.4}, ["Age::Young", "Age::Adult", "Income::Poor", "Income::Modest"]),
    "z42": ({"t1": 0.4}, ["Age::Young", "Age::Adult", "Income::Modest", "Income::Comfortable"]),
    "z5": ({}, ["Age::Young", "Age::Adult", "Income::Poor", "Income::Modest",
                "Income::Comfortable"]),
}

# --------------------------------------------------------------------------
# Food consumption: schema, raw data, summary hierarchy
# --------------------------------------------------------------------------

FOOD_SCHEMA = {
    "attributes": [
        {
            "name": "Age",
            "ftype": 4,
            "labels": [{"name": "Child"}, {"name": "Young"}, {"name": "Adult"}, {"name": "Old"}],
            "cluster_count": 4,
        },
        {
            "name": "Candy",
            "ftype": 4,
            "labels": [{"name": "Low"}, {"name": "Average"}, {"name": "Great"},
                       {"name": "Excessive"}],
            "cluster_count": 4,
        },
        {
            "name": "Dairy-product",
            "ftype": 4,
            "labels": [{"name": "Low"}, {"name": "Average"}, {"name": "Great"},
                       {"name": "Excessive"}],
            "cluster_count": 4,
        },
        {
            "name": "Lipid",
            "ftype": 4,
            "labels": [{"name": "Low"}, {"name": "Average"}, {"name": "Great"},
                       {"name": "Excessive"}],
            "cluster_count": 4,
        },
    ]
}

FOOD_CSV = """\
id,Age,Candy,Dairy-product,Lipid
t1,$Young,$Great,$Average,$Great
t2,$Child,$Great,$Excessive,$Average
t3,$Adult,$Low,$Average,$Great
t4,$Old,$Low,$Excessive,$Low
t5,$Young,$Great,$Low,$Great
t6,$Adult,$Low,$Great,$Great
t7,$Old,$Low,$Great,$Low
t8,$Child,$Excessive,$Excessive,$Average
t9,$Adult,$Low,$Average,$Great
t10,$Child,$Excessive,$Excessive,$Great
"""

ABBREV = {
    "CA": "Age::Child", "YA": "Age::Young", "AA": "Age::Adult", "OA": "Age::Old",
    "LC": "Candy::Low", "AC": "Candy::Average", "GC": "Candy::Great", "EC": "Candy::Excessive",
    "LD": "Dairy-product::Low", "AD": "Dairy-product::Average",
    "GD": "Dairy-product::Great", "ED": "Dairy-product::Excessive",
    "LL": "Lipid::Low", "AL": "Lipid::Average", "GL": "Lipid::Great", "EL": "Lipid::Excessive",
}

F = {  # food hierarchy: id -> (extent, intent as abbreviations)
    "z1": ({"t1": 0.7, "t2": 0.2, "t3": 0.4, "t4": 0.1, "t5": 0.1, "t6": 0.2, "t7": 0.2,
            "t8": 0.6, "t9": 0.3, "t10": 0.4}, "AL"),
    "z21": ({"t1": 0.7, "t2": 0.2, "t5": 0.9, "t6": 0.3, "t8": 0.1, "t9": 0.2, "t10": 0.4},
            "YA AL"),
    "z22": ({"t2": 0.8, "t3": 0.6, "t5": 0.9, "t6": 0.8, "t9": 0.7, "t10": 0.4}, "GL AL"),
    "z23": ({"t2": 0.2, "t3": 0.2, "t4": 0.1, "t6": 0.9, "t7": 0.8, "t8": 0.1, "t9": 0.4,
             "t10": 0.4}, "GD AL"),
    "z24": ({"t1": 0.2, "t2": 0.1, "t3": 0.2, "t4": 0.1, "t6": 0.3, "t7": 0.2, "t9": 0.4},
            "AC LC"),
    "z25": ({"t1": 0.8, "t3": 0.8, "t5": 0.2, "t6": 0.1, "t7": 0.2, "t9": 0.6}, "AD AL"),
    "z26": ({"t1": 0.3, "t4": 0.9, "t7": 0.8, "t8": 0.4}, "LL AL"),
    "z31": ({"t1": 0.3, "t2": 0.2, "t5": 0.1, "t8": 0.1, "t10": 0.4}, "YA CA GC AL"),
    "z32": ({"t2": 0.2, "t5": 0.9, "t6": 0.3, "t9": 0.2, "t10": 0.4}, "YA GL AL"),
    "z33": ({"t2": 0.2, "t6": 0.3, "t8": 0.1, "t9": 0.2, "t10": 0.4}, "YA GD AL"),
    "z34": ({"t1": 0.2, "t2": 0.1, "t6": 0.3, "t9": 0.2}, "YA AC AL"),
    "z35": ({"t2": 0.2, "t3": 0.2, "t6": 0.8, "t9": 0.4, "t10": 0.4}, "GL GD AL"),
    "z36": ({"t2": 0.2, "t4": 0.1, "t8": 0.1, "t10": 0.4}, "ED GD AL"),
    "z37": ({"t1": 0.7, "t5": 0.2, "t6": 0.1, "t9": 0.2}, "YA AD AL"),
    "z38": ({"t2": 0.1, "t3": 0.2, "t4": 0.1, "t6": 0.3, "t7": 0.2, "t9": 0.4}, "GD AC AL"),
    "z39": ({"t3": 0.6, "t5": 0.2, "t6": 0.1, "t9": 0.6}, "GL AD AL"),
    "z310": ({"t1": 0.2, "t3": 0.2, "t6": 0.1, "t7": 0.2, "t9": 0.4}, "AC AD AL"),
    "z311": ({"t1": 0.2, "t4": 0.1, "t7": 0.2}, "AC LL AL"),
    "z312": ({"t4": 0.1, "t7": 0.8, "t8": 0.1}, "GD LL AL"),
    "z41": ({"t2": 0.2, "t5": 0.1, "t10": 0.4}, "YA CA GL GC AL"),
    "z42": ({"t5": 0.2, "t8": 0.1, "t10": 0.4}, "YA CA GC EC AL"),
    "z43": ({"t1": 0.2, "t2": 0.1}, "YA CA GC AC AL"),
    "z44": ({"t1": 0.3, "t8": 0.1}, "YA CA GC LL AL"),
    "z45": ({"t1": 0.2, "t5": 0.1}, "YA CA GC AD LD AL"),
    "z46": ({"t2": 0.2, "t8": 0.1, "t10": 0.4}, "YA CA GC GD ED AL"),
    "z47": ({"t2": 0.2, "t6": 0.3, "t9": 0.2, "t10": 0.4}, "YA GL GD AL"),
    "z48": ({"t5": 0.2, "t6": 0.1, "t9": 0.2}, "YA GL AD AL"),
    "z49": ({"t1": 0.2, "t6": 0.1, "t9": 0.2}, "YA AC AD AL"),
    "z410": ({"t2": 0.1, "t3": 0.2, "t6": 0.3, "t9": 0.4}, "GL GD AC AL"),
    "z411": ({"t2": 0.1, "t4": 0.1}, "ED GD AC AL"),
    "z412": ({"t3": 0.2, "t4": 0.1, "t6": 0.3, "t7": 0.4, "t9": 0.4}, "GD AC LC AL"),
    "z413": ({"t1": 0.2, "t7": 0.2}, "AC AD LL AL"),
    "z414": ({"t4": 0.1, "t7": 0.2, "t8": 0.1}, "ED GD LL AL"),
    "z51": ({"t5": 0.1, "t10": 0.4}, "YA CA GL GC EC AL"),
    "z52": ({"t8": 0.1, "t10": 0.4}, "YA CA GC EC GD ED AL"),
    "z53": ({"t2": 0.2, "t10": 0.4}, "YA CA GC GL ED GD AL"),
    "z54": ({"t2": 0.1, "t6": 0.3, "t9": 0.2}, "YA GL GD AC AL"),
    "z55": ({"t3": 0.2, "t6": 0.1, "t7": 0.2, "t9": 0.4}, "AD GD AC LC AL"),
    "z56": ({"t3": 0.1, "t4": 0.1, "t7": 0.4}, "GD AC LC OA AL"),
    "z61": ({"t3": 0.2, "t6": 0.1, "t9": 0.4}, "AD GD AC LC GL AL"),
    "z62": ({"t4": 0.1, "t7": 0.2}, "OA LC AC LL GD AL"),
    "z63": ({"t3": 0.1, "t7": 0.4}, "AD GD AC LC OA AL"),
    "z71": ({"t10": 0.4}, "YA CA GC EC GD ED GL AL"),
    "z72": ({"t2": 0.1}, "YA CA AC GC GL GD ED AL"),
    "z73": ({"t1": 0.2}, "YA CA GC AC LL AD LD AL"),
    "z74": ({"t8": 0.1}, "YA CA GC EC GD ED LL AL"),
    "z75": ({"t5": 0.1}, "CA YA GC EC AD LD GL AL"),
    "z76": ({"t6": 0.1, "t9": 0.2}, "YA GL AD AC GD LC AL"),
    "z77": ({"t4": 0.1}, "OA LC AC LL GD ED AL"),
    "z78": ({"t3": 0.1}, "OA AD GD AC LC GL AL"),
    "z79": ({"t7": 0.2}, "OA LC AC LL GD AD AL"),
    "z8": ({}, "EL"),
}

# --------------------------------------------------------------------------
# Research-topics context (3 documents x 3 topics)
# --------------------------------------------------------------------------

TOPICS_SCHEMA = {
    "attributes": [
        {
            "name": "Topic",
            "ftype": 4,
            "labels": [{"name": "D"}, {"name": "C"}, {"name": "F"}],
            "cluster_count": 3,
        }
    ]
}

TOPICS_CONTEXT = {
    "objects": ["D1", "D2", "D3"],
    "attributes": ["Topic::D", "Topic::C", "Topic::F"],
    "degrees": [[0.8, 0.12, 0.61], [0.9, 0.85, 0.13], [0.1, 0.14, 0.87]],
}


def hierarchy_from(table, expand_abbrevs: bool) -> SummaryHierarchy:
    summaries = []
    for sid, (extent, intent) in table.items():
        if expand_abbrevs:
            keys = [ABBREV[a] for a in intent.split()]
        else:
            keys = list(intent)
        pairs = frozenset(tuple(k.split("::", 1)) for k in keys)
        summaries.append(ConceptSummary(id=sid, extent=dict(extent), intent=pairs))
    return SummaryHierarchy(summaries)


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)
    dump(FIXTURES / "employee_schema.json", EMPLOYEE_SCHEMA)
    dump(FIXTURES / "employee_data_schema.json", EMPLOYEE_DATA_SCHEMA)
    (FIXTURES / "employee.csv").write_text(EMPLOYEE_CSV, encoding="utf-8")
    print("wrote fixtures/employee.csv")
    (FIXTURES / "employee_numeric.csv").write_text(EMPLOYEE_NUMERIC_CSV, encoding="utf-8")
    print("wrote fixtures/employee_numeric.csv")
    hierarchy_from(E, expand_abbrevs=False).save(FIXTURES / "employee_hierarchy.json")
    print("wrote fixtures/employee_hierarchy.json")

    dump(FIXTURES / "food_schema.json", FOOD_SCHEMA)
    (FIXTURES / "food.csv").write_text(FOOD_CSV, encoding="utf-8")
    print("wrote fixtures/food.csv")
    hierarchy_from(F, expand_abbrevs=True).save(FIXTURES / "food_hierarchy.json")
    print("wrote fixtures/food_hierarchy.json")

    dump(FIXTURES / "topics_schema.json", TOPICS_SCHEMA)
    dump(FIXTURES / "topics_context.json", TOPICS_CONTEXT)


if __name__ == "__main__":
    main()
