#!/usr/bin/env python3
# Copyright 2026 The lam-audit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Convert the raw COMPAS, German credit and Adult files into headered CSVs.

The raw files are the ones bundled with the `responsibly` Python package
(responsibly/dataset/{compas,german,adult}). Usage:

    pip download --no-deps responsibly
    python3 scripts/prepare_datasets.py responsibly-0.1.2-py3-none-any.whl data/

Only the standard library is used so the output is reproducible anywhere.
"""

import csv
import io
import sys
import zipfile
from pathlib import Path

COMPAS_COLUMNS = [
    "id", "sex", "age", "age_cat", "race", "priors_count", "c_charge_degree",
    "decile_score", "score_text", "two_year_recid", "is_recid",
    "days_b_screening_arrest",
]

GERMAN_COLUMNS = [
    "status", "duration", "credit_history", "purpose", "credit_amount",
    "savings", "employment", "installment_rate", "status_sex",
    "other_debtors", "present_residence_since", "property", "age",
    "installment_plans", "housing", "number_of_existing_credits", "job",
    "number_of_people_liable_for", "telephone", "foreign_worker", "credit",
]

ADULT_COLUMNS = [
    "age", "workclass", "fnlwgt", "education", "education_num",
    "marital_status", "occupation", "relationship", "race", "sex",
    "capital_gain", "capital_loss", "hours_per_week", "native_country",
    "income",
]
ADULT_KEEP = ["age", "education", "race", "sex", "income"]


def read_member(source, name):
    if source.suffix == ".whl":
        with zipfile.ZipFile(source) as wheel:
            return wheel.read(f"responsibly/dataset/{name}").decode("utf-8")
    return (source / name).read_text(encoding="utf-8")


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    print(f"{path}: {len(rows)} rows")


def compas(source, out_dir):
    reader = csv.DictReader(io.StringIO(read_member(source, "compas/compas-scores-two-years.csv")))
    rows = []
    for record in reader:
        row = []
        for column in COMPAS_COLUMNS:
            value = record[column].strip()
            row.append(value if value else "NA")
        rows.append(row)
    write_csv(out_dir / "compas.csv", COMPAS_COLUMNS, rows)


def german(source, out_dir):
    rows = [line.split() for line in read_member(source, "german/german.data").splitlines() if line.strip()]
    write_csv(out_dir / "german.csv", GERMAN_COLUMNS, rows)


def adult(source, out_dir):
    keep = [ADULT_COLUMNS.index(c) for c in ADULT_KEEP]
    rows = []
    for line in read_member(source, "adult/adult.data").splitlines():
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != len(ADULT_COLUMNS):
            continue
        rows.append([fields[i] for i in keep])
    write_csv(out_dir / "adult.csv", ADULT_KEEP, rows)


def main(argv):
    if len(argv) != 3:
        print(__doc__)
        return 2
    source, out_dir = Path(argv[1]), Path(argv[2])
    out_dir.mkdir(parents=True, exist_ok=True)
    compas(source, out_dir)
    german(source, out_dir)
    adult(source, out_dir)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
