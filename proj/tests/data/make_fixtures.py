#!/usr/bin/env python3
# Copyright (c) 2026, The crosswalk authors.
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
"""Regenerates the binary fixtures under tests/data/formats.

Needs pyarrow. The XLSX workbook is assembled by hand so no spreadsheet
library is required. Outputs are committed; rerun only when they change.
"""
import datetime as dt
import pathlib
import zipfile

import pyarrow as pa
import pyarrow.parquet as pq

OUT = pathlib.Path(__file__).resolve().parent / "formats"


def typed_table():
    return pa.table({
        "name": pa.array(["alpha", None, "gamma", "", "épée"], pa.string()),
        "count": pa.array([1, -2, None, 40000000000, 0], pa.int64()),
        "small": pa.array([7, 8, 9, None, -1], pa.int32()),
        "ratio": pa.array([0.5, None, 1e-7, -3.25, 100.0], pa.float64()),
        "flag": pa.array([True, False, None, True, False], pa.bool_()),
        "day": pa.array([dt.date(2018, 4, 20), None, dt.date(1995, 4, 1), dt.date(2000, 2, 29),
                         dt.date(1970, 1, 1)], pa.date32()),
        "at": pa.array([dt.datetime(2020, 3, 15, 12, 30, 0), None, dt.datetime(1999, 12, 31, 23, 59, 59, 500000),
                        dt.datetime(1970, 1, 1), dt.datetime(2024, 2, 29, 6, 0)], pa.timestamp("us", tz="UTC")),
        "tags": pa.array([["a", "b"], [], None, ["it's"], ["x"]], pa.list_(pa.string())),
    })


def write_parquet():
    t = typed_table()
    pq.write_table(t, OUT / "typed_plain.parquet", compression="NONE", use_dictionary=False)
    pq.write_table(t, OUT / "typed_snappy_dict.parquet", compression="SNAPPY", use_dictionary=True)
    pq.write_table(t, OUT / "typed_gzip_v2.parquet", compression="GZIP", data_page_version="2.0")
    nested = pa.table({
        "id": pa.array(["1", "2"]),
        "point": pa.array([{"x": 1, "y": 2}, {"x": 3, "y": 4}]),
    })
    pq.write_table(nested, OUT / "nested.parquet")


SHEET = """<?xml version="1.0" encoding="UTF-8" standalone="yes"?>
<worksheet xmlns="http://schemas.openxmlformats.org/spreadsheetml/2006/main"><sheetData>{rows}</sheetData></worksheet>"""


def cell(ref, value):
    if value is None:
        return ""
    kind, raw = value
    if kind == "s":
        return f'<c r="{ref}" t="s"><v>{raw}</v></c>'
    if kind == "inline":
        return f'<c r="{ref}" t="inlineStr"><is><t>{raw}</t></is></c>'
    if kind == "b":
        return f'<c r="{ref}" t="b"><v>{raw}</v></c>'
    if kind == "f":
        return f'<c r="{ref}" t="str"><f>A1&amp;B1</f><v>{raw}</v></c>'
    return f'<c r="{ref}"><v>{raw}</v></c>'


def sheet_xml(rows):
    out = []
    for r, values in enumerate(rows, start=1):
        cells = "".join(cell(f"{chr(65 + c)}{r}", v) for c, v in enumerate(values))
        out.append(f'<row r="{r}">{cells}</row>')
    return SHEET.format(rows="".join(out))


def write_xlsx():
    shared = ["PropertyID", "RV", "Retail", "Y", "Town &amp; Country"]
    rates = [
        [("s", 0), ("s", 1), ("s", 2)],
        [("n", "8171240704001"), ("n", "33750"), ("s", 3)],
        [("inline", "8173620028005"), ("n", "10730.5"), None],
        [("s", 4), ("b", "1"), ("f", "computed")],
    ]
    notes = [[("inline", "note")], [("inline", "second sheet")]]
    files = {
        "[Content_Types].xml": '<?xml version="1.0" encoding="UTF-8"?><Types xmlns="http://schemas.openxmlformats.org/package/2006/content-types"/>',
        "xl/workbook.xml": '<?xml version="1.0" encoding="UTF-8"?><workbook xmlns="http://schemas.openxmlformats.org/spreadsheetml/2006/main" xmlns:r="http://schemas.openxmlformats.org/officeDocument/2006/relationships"><sheets><sheet name="Rates" sheetId="1" r:id="rId1"/><sheet name="Notes" sheetId="2" r:id="rId2"/></sheets></workbook>',
        "xl/_rels/workbook.xml.rels": '<?xml version="1.0" encoding="UTF-8"?><Relationships xmlns="http://schemas.openxmlformats.org/package/2006/relationships"><Relationship Id="rId1" Type="http://schemas.openxmlformats.org/officeDocument/2006/relationships/worksheet" Target="worksheets/sheet1.xml"/><Relationship Id="rId2" Type="http://schemas.openxmlformats.org/officeDocument/2006/relationships/worksheet" Target="worksheets/sheet2.xml"/></Relationships>',
        "xl/sharedStrings.xml": '<?xml version="1.0" encoding="UTF-8"?><sst xmlns="http://schemas.openxmlformats.org/spreadsheetml/2006/main">'
        + "".join(f"<si><t>{s}</t></si>" for s in shared) + "</sst>",
        "xl/worksheets/sheet1.xml": sheet_xml(rates),
        "xl/worksheets/sheet2.xml": sheet_xml(notes),
    }
    with zipfile.ZipFile(OUT / "workbook.xlsx", "w", zipfile.ZIP_DEFLATED) as z:
        for name, body in files.items():
            info = zipfile.ZipInfo(name, date_time=(2026, 1, 1, 0, 0, 0))
            info.compress_type = zipfile.ZIP_DEFLATED
            z.writestr(info, body)


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    write_parquet()
    write_xlsx()
