"""
아이템 직선 f_o(w1) 과 교차점 내보내기 (외부 플로팅용)
"""

import csv
import io
import itertools
from typing import Any, Dict, List

from engines.solver import item_line
from models.instance_models import Instance
from models.solver_models import DifferenceRatio
from utils.io_helpers import format_fraction, format_ratio

CSV_COLUMNS = ["kind", "item", "other", "category", "slope", "intercept", "w1", "ratio", "coincident"]


def export_lines(instance: Instance) -> Dict[str, Any]:
    """아이템별 (기울기, 절편)과 같은 카테고리 쌍의 교차점

    평행선은 기록하지 않고, 일치하는 직선은 coincident 로 표시한다.
    교차점의 ratio 는 w1 / w2 (= 그 쌍의 r_{2/1}).
    """
    lines = {item: item_line(instance, item) for item in instance.items}
    intersections: List[Dict[str, Any]] = []
    for category in instance.categories:
        for first, second in itertools.combinations(category.items, 2):
            line, other = lines[first], lines[second]
            if line.is_coincident(other):
                intersections.append(
                    {"item": first, "other": second, "category": category.id,
                     "w1": None, "ratio": None, "coincident": True}
                )
                continue
            w1 = line.intersection(other)
            if w1 is None:
                continue
            intersections.append(
                {
                    "item": first,
                    "other": second,
                    "category": category.id,
                    "w1": format_fraction(w1),
                    "ratio": format_ratio(DifferenceRatio.of(w1, 1 - w1)),
                    "coincident": False,
                }
            )

    return {
        "lines": [
            {"item": item, "category": instance.category_of(item).id,
             "slope": format_fraction(line.slope), "intercept": format_fraction(line.intercept)}
            for item, line in lines.items()
        ],
        "intersections": intersections,
    }


def lines_to_csv(export: Dict[str, Any]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for line in export["lines"]:
        writer.writerow({"kind": "line", **line})
    for point in export["intersections"]:
        writer.writerow({"kind": "intersection", **point})
    return buffer.getvalue()
