"""Bundled fixtures and loaders for the UCI benchmark files.

The UCI files are not shipped. :func:`load_uci` reads a locally downloaded
copy and applies the column naming and typing used for the comparison runs.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .context import RawDataset, Schema, parse_dataset
from .errors import InputError

FIXTURES = {
    "watermelon": Schema(decision="good", id_column="id"),
    "balloons": Schema(decision="inflated", positive_label="T"),
    "balloons_binary": Schema(decision="inflated", positive_label="T"),
}


def fixture_text(name: str) -> str:
    if name not in FIXTURES:
        raise InputError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}")
    return resources.files("capos").joinpath("data", f"{name}.csv").read_text()


def load_fixture(name: str) -> RawDataset:
    return parse_dataset(fixture_text(name), FIXTURES[name])


def _haberman(text: str) -> str:
    return "age,year,nodes,status\n" + text


def _wine(text: str) -> str:
    # classes 1 and 2 only; class 3 rows are dropped
    names = ["class", "alcohol", "malic_acid", "ash", "alcalinity", "magnesium", "phenols",
             "flavanoids", "nonflavanoid_phenols", "proanthocyanins", "color_intensity", "hue",
             "od280_od315", "proline"]
    rows = [r for r in text.splitlines() if r.strip() and not r.startswith("3,")]
    return ",".join(names) + "\n" + "\n".join(rows) + "\n"


def _arff(text: str) -> str:
    names, rows, in_data = [], [], False
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith("%"):
            continue
        low = s.lower()
        if low.startswith("@attribute"):
            names.append(s.split()[1].strip("'\""))
        elif low.startswith("@data"):
            in_data = True
        elif in_data:
            rows.append(s)
    return ",".join(names) + "\n" + "\n".join(rows) + "\n"


def _caesarian(text: str) -> str:
    if text.lstrip().lower().startswith(("@relation", "%")):
        text = _arff(text)
    lines = text.splitlines()
    lines[0] = "age,delivery_number,delivery_time,blood_pressure,heart_problem,caesarian"
    return "\n".join(lines) + "\n"


# file name, text transform, schema, two-valued policy
UCI = {
    "haberman": ("haberman.data", _haberman,
                 Schema(decision="status", positive_label="1"), "both"),
    "wine": ("wine.data", _wine, Schema(decision="class", positive_label="1"), "both"),
    "caesarian": ("caesarian.csv.arff", _caesarian,
                  Schema(decision="caesarian", positive_label="1",
                         continuous=("age", "delivery_number"),
                         discrete=("delivery_time", "blood_pressure")), "both"),
    "diabetes": ("diabetes_data_upload.csv", lambda t: t,
                 Schema(decision="class", positive_label="Positive", continuous=("Age",)),
                 "indicator"),
    "parkinsons": ("parkinsons.data", lambda t: t,
                   Schema(decision="status", positive_label="1", id_column="name"), "both"),
}


def load_uci(name: str, directory) -> tuple[RawDataset, str]:
    """Load UCI dataset ``name`` from ``directory``.

    Returns the dataset and the two-valued policy to pass to ``build_context``.
    Raises FileNotFoundError when the file is absent.
    """
    if name not in UCI:
        raise InputError(f"unknown UCI dataset {name!r}; choose from {sorted(UCI)}")
    filename, transform, schema, policy = UCI[name]
    path = Path(directory) / filename
    text = path.read_text()
    return parse_dataset(transform(text), schema), policy
