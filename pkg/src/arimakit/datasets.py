"""Built-in health tables (2012-2016, Philippines) and wide-CSV reading/writing.

CSV layout: UTF-8, first header cell ``name``, remaining header cells
consecutive integer years, one row per series, empty cell = missing.
Fields containing commas or quotes are double-quoted with ``""`` escaping.
"""
from dataclasses import dataclass
import csv
import io
import re

from .errors import CSVParseError
from .series import Series

_ = None  # blank cell in the printed table

_TABLES = {
    "deaths": (
        "Ten leading causes of death",
        [
            ("Diseases of the heart", (112581, 118740, 125906, 68572, 74134)),
            ("Diseases of the vascular system", (68826, 68325, 69913, 58715, 60470)),
            ("malignant neoplasms", (50507, 53601, 56219, 49595, 57809)),
            ("pneumonia", (50144, 53101, 54877, 58310, 56938)),
            ("accidents", (36375, 40071, 43853, 34506, 33452)),
            ("diabetes mellitus", (22910, 27064, 31687, 34050, 33295)),
            ("chronic lower respiratory diseases", (24275, 23867, 52114, 31729, 28641)),
            ("tuberculosis, all forms", (22693, 23216, 24929, 24644, 24642)),
            ("nephritis, nephrotic syndrome and nephrosis", (13555, 14954, 15359, 23760, 24365)),
            ("certain conditions originating in perinatal period",
             (11374, 10436, 10174, 18061, 19759)),
        ],
    ),
    "morbidity": (
        "Leading causes of morbidity",
        [
            ("Acute respiratory infection", (2793066, 2174740, 1445320, 2115018, 3080343)),
            ("ALTRI and pneumonia", (569122, 674597, 488415, 474406, 786085)),
            ("Hypertension", (512604, 410432, 475693, 601173, 886203)),
            ("Bronchitis", (338789, 249173, 204086, 202343, 200176)),
            ("Influenza", (232584, 149777, 172683, 147400, 216074)),
            ("Urinary tract infection", (276442, 235446, 213666, 298200, 288588)),
            ("Acute watery diarrhea", (235110, 74876, 91202, 130246, 139700)),
            ("TB respiratory", (93094, 70053, 32335, 62396, 87422)),
            ("Acute febrile illness", (85471, _, _, 55759, _)),
            ("Dengue fever", (44172, 53750, 26077, 69532, 56487)),
            ("TB other forms", (_, 30971, 25727, _, _)),
        ],
    ),
    "infant_deaths": (
        "Leading causes of infant's deaths",
        [
            ("All causes", (22283, 22254, 21992, 20750, 21874)),
            ("Bacterial sepsis of new-born", (3669, 3156, 2731, 2157, 2136)),
            ("Pneumonia", (2792, 2738, 3146, 2370, 2885)),
            ("Respiratory distress of new-born", (2414, 2497, 2347, 2276, 2263)),
            ("Congenital malformation of the heart", (1452, 1356, 1383, 1398, 1407)),
            ("Disorder related to short gestation and low birth weight, not elsewhere classified",
             (1455, 1422, 1466, 1278, 1202)),
            ("Congenital pneumonia", (1115, 989, 728, 625, 734)),
            ("Neonatal aspiration syndromes", (1104, 994, 969, 1036, 1196)),
            ("Intrauterine hypoxia and birth asphyxia", (906, 871, 838, 802, 832)),
            ("Other congenital malformations", (883, 896, 895, 1030, 1000)),
            ("Diarrhea and gastroenteritis of presumed infectious origin",
             (911, 843, 901, 824, 1328)),
            ("All other causes", (5582, 6492, 6588, 6954, 6891)),
        ],
    ),
}

TABLE_IDS = tuple(_TABLES)
_START_YEAR = 2012

_NUMBER = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


@dataclass(frozen=True)
class Dataset:
    title: str
    start_year: int
    series: tuple

    def __post_init__(self):
        object.__setattr__(self, "series", tuple(self.series))
        seen = set()
        width = None
        for s in self.series:
            if s.name in seen:
                raise ValueError(f"duplicate series name {s.name!r}")
            seen.add(s.name)
            if s.start_year != self.start_year:
                raise ValueError(f"series {s.name!r} starts in {s.start_year}, "
                                 f"dataset starts in {self.start_year}")
            if width is None:
                width = len(s)
            elif len(s) != width:
                raise ValueError(f"series {s.name!r} does not share the dataset year axis")

    @property
    def names(self):
        return [s.name for s in self.series]

    @property
    def years(self):
        if not self.series:
            return []
        return list(self.series[0].years)

    def get(self, name):
        """Look up a series by exact name, falling back to a unique case-insensitive match."""
        for s in self.series:
            if s.name == name:
                return s
        matches = [s for s in self.series if s.name.casefold() == name.casefold()]
        if len(matches) == 1:
            return matches[0]
        raise KeyError(name)


def builtin(table_id):
    """One of ``deaths``, ``morbidity``, ``infant_deaths`` exactly as printed."""
    try:
        title, rows = _TABLES[table_id]
    except KeyError:
        raise KeyError(f"unknown table {table_id!r}; choose from {', '.join(TABLE_IDS)}") from None
    return Dataset(title=title, start_year=_START_YEAR,
                   series=[Series(name, _START_YEAR, values) for name, values in rows])


def _format_value(v):
    if v is None:
        return ""
    if v.is_integer() and abs(v) < 2 ** 53:
        return str(int(v))
    return repr(v)


def write_csv(dataset, stream=None):
    """Serialise to the wide CSV layout. Returns the text if ``stream`` is None."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["name"] + [str(y) for y in dataset.years])
    for s in dataset.series:
        writer.writerow([s.name] + [_format_value(v) for v in s.values])
    text = buf.getvalue()
    if stream is None:
        return text
    stream.write(text)
    return None


def read_csv(source, title="csv"):
    """Parse a wide CSV from bytes, text, or a binary/text stream."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, (bytes, bytearray)):
        try:
            source = bytes(source).decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise CSVParseError(f"input is not valid UTF-8 ({exc})") from None
    elif source.startswith("﻿"):
        source = source[1:]

    rows = list(csv.reader(io.StringIO(source, newline="")))
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    if not rows:
        raise CSVParseError("empty input", row=1)
    header = [c.strip() for c in rows[0]]
    if header[0] != "name":
        raise CSVParseError(f"first header cell must be 'name', got {header[0]!r}", row=1, column=1)
    if len(header) < 2:
        raise CSVParseError("header has no year columns", row=1)
    years = []
    for j, cell in enumerate(header[1:], start=2):
        if not re.fullmatch(r"[+-]?\d+", cell):
            raise CSVParseError(f"year header {cell!r} is not an integer", row=1, column=j)
        years.append(int(cell))
        if len(years) > 1 and years[-1] != years[-2] + 1:
            raise CSVParseError(
                f"non-consecutive years: {years[-2]} followed by {years[-1]}", row=1, column=j)

    series, seen = [], set()
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise CSVParseError(f"expected {len(header)} cells, found {len(row)}", row=i)
        name = row[0].strip()
        if not name:
            raise CSVParseError("empty series name", row=i, column=1)
        if name in seen:
            raise CSVParseError(f"duplicate series name {name!r}", row=i, column=1)
        seen.add(name)
        values = []
        for j, cell in enumerate(row[1:], start=2):
            cell = cell.strip()
            if not cell:
                values.append(None)
            elif _NUMBER.match(cell):
                v = float(cell)
                if v in (float("inf"), float("-inf")):
                    raise CSVParseError(f"value {cell!r} overflows", row=i, column=j)
                values.append(v)
            else:
                raise CSVParseError(f"non-numeric cell {cell!r}", row=i, column=j)
        series.append(Series(name, years[0], values))
    return Dataset(title=title, start_year=years[0], series=series)
