"""Bounds for everyday long cylinders, as a pandas table"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

import pandas as pd

from .formulas import capped_bound, conjectured_density, rule_of_thumb, uncapped_bound

FLAG_GAP = 5e-4
DIGITS = 4


@dataclass(frozen=True)
class TableItem:
    label: str
    t: float
    printed: float


# t is the printed length-to-radius ratio of each item
ITEMS: List[TableItem] = [
    TableItem("Broomstick", 108.0, 0.9956),
    TableItem("20' PVC Pipe", 320.0, 0.9353),
    TableItem("Capellini", 600.0, 0.9219),
    TableItem("Carbon Nanotube", 2.64e8, 0.9069),
]

COLUMNS = ["label", "t", "shape", "bound", "digits", "printed", "trivial", "flagged"]
EXTENDED_COLUMNS = ["rule_of_thumb", "conjectured", "capped"]


def printed_digits(value: float, digits: int = DIGITS) -> str:
    return f"{value:.{digits}f}"


def make_table(extended: bool = False) -> pd.DataFrame:
    """Flat-ended bounds for the reference items.

    A row is flagged when the computed bound and the reference value differ
    by more than FLAG_GAP.
    """
    rows = []
    for item in ITEMS:
        result = uncapped_bound(item.t)
        row = {
            "label": item.label,
            "t": item.t,
            "shape": result.shape,
            "bound": result.bound,
            "digits": printed_digits(result.bound),
            "printed": item.printed,
            "trivial": result.trivial,
            "flagged": abs(result.bound - item.printed) > FLAG_GAP,
        }
        if extended:
            row["rule_of_thumb"] = rule_of_thumb(item.t)
            row["conjectured"] = conjectured_density(item.t)
            row["capped"] = capped_bound(item.t).bound
        rows.append(row)
    columns = COLUMNS + (EXTENDED_COLUMNS if extended else [])
    return pd.DataFrame(rows, columns=columns)


def table_csv(df: pd.DataFrame) -> str:
    return df.to_csv(index=False, lineterminator="\r\n")


def table_json(df: pd.DataFrame) -> str:
    return df.to_json(orient="records", indent=2)
