"""Built-in constructions of the named matroids the pipeline uses, plus
ingestion of external matroid lists.

External catalogs are data, not vendored: this module ships the parsers and
validates everything it loads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from . import matroid as mt
from .errors import ParseError, UnknownName, ValidationError
from .matroid import Matroid, from_bases, from_matrix, mask_of, set_of, uniform


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    matroid: Matroid
    provenance: str


_P8_MATRIX = [
    (1, 0, 0, 0),
    (0, 1, 0, 0),
    (0, 0, 1, 0),
    (0, 0, 0, 1),
    (0, 1, 1, 2),
    (1, 0, 1, 1),
    (1, 1, 0, 1),
    (2, 1, 1, 0),
]

_GOLAY_MATRIX = [
    (1, 0, 0, 0, 0, 0),
    (0, 1, 0, 0, 0, 0),
    (0, 0, 1, 0, 0, 0),
    (0, 0, 0, 1, 0, 0),
    (0, 0, 0, 0, 1, 0),
    (0, 0, 0, 0, 0, 1),
    (1, 1, 1, 1, 1, 0),
    (1, 1, 2, 2, 0, 1),
    (1, 2, 1, 0, 2, 1),
    (2, 1, 0, 1, 2, 1),
    (2, 0, 1, 2, 1, 1),
    (0, 2, 2, 1, 1, 1),
]

_S8_MATRIX = [
    (1, 0, 0, 0),
    (0, 1, 0, 0),
    (0, 0, 1, 0),
    (0, 0, 0, 1),
    (0, 1, 1, 1),
    (1, 0, 1, 1),
    (1, 1, 0, 1),
    (1, 1, 1, 1),
]

_FANO_LINES = [
    (1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 5, 6),
]

# ternary 3-spike: tip 2 with legs {1,4}, {3,5}, {6,7}, plus the two
# transversal lines {1,3,6} and {4,5,7}
_P7_LINES = [(1, 2, 4), (2, 3, 5), (2, 6, 7), (1, 3, 6), (4, 5, 7)]

_PAPPUS_LINES = [
    (1, 2, 3), (4, 5, 6), (7, 8, 9),
    (1, 5, 7), (1, 6, 8), (2, 4, 7), (2, 6, 9), (3, 4, 8), (3, 5, 9),
]

_VAMOS_NONBASES = [
    (1, 2, 3, 4), (1, 2, 5, 6), (1, 2, 7, 8), (3, 4, 5, 6), (3, 4, 7, 8),
]

_M431_NONBASES = [(1, 2, 3, 4), (1, 2, 5, 6), (1, 3, 5, 7), (2, 3, 5, 8)]

_P8_RELAXATIONS = [(1, 4, 5, 8), (2, 3, 6, 7), (4, 6, 7, 8)]


def _from_nonbases(n, r, nonbases):
    nb = {mask_of(s) for s in nonbases}
    bases = {
        mask_of(c)
        for c in combinations(range(1, n + 1), r)
        if mask_of(c) not in nb
    }
    return Matroid._make(n, r, bases)


def _rank3_from_lines(n, lines):
    return _from_nonbases(n, 3, lines)


@lru_cache(maxsize=None)
def builtin(name: str) -> CatalogEntry:
    """Construct a named matroid from its defining data."""
    key = name.strip()
    um = re.fullmatch(r"[Uu](\d)(\d)", key)
    if um:
        r, n = int(um.group(1)), int(um.group(2))
        if not 0 <= r <= n or n < 1:
            raise UnknownName(f"bad uniform parameters in {name!r}")
        return CatalogEntry(f"U{r}{n}", uniform(r, n), f"uniform matroid U_{r},{n}")
    builders = {
        "F7": lambda: CatalogEntry(
            "F7", _rank3_from_lines(7, _FANO_LINES), "Fano plane, standard lines"
        ),
        "F7-": lambda: CatalogEntry(
            "F7-", builtin("F7").matroid.relax((1, 2, 3)), "non-Fano: one line relaxed"
        ),
        "F7--": lambda: CatalogEntry(
            "F7--", builtin("F7-").matroid.relax((1, 4, 5)), "Fano with two lines relaxed"
        ),
        "F7-3": lambda: CatalogEntry(
            "F7-3", builtin("F7--").matroid.relax((1, 6, 7)), "Fano with three lines relaxed"
        ),
        "MK4": lambda: CatalogEntry(
            "MK4",
            from_matrix(
                [(1, -1, 0), (1, 0, -1), (1, 0, 0), (0, 1, -1), (0, 1, 0), (0, 0, 1)]
            ),
            "cycle matroid of K4 via signed edge incidence vectors",
        ),
        "MK4+e": lambda: CatalogEntry(
            "MK4+e", builtin("MK4").matroid.free_extension(), "free extension of M(K4)"
        ),
        "P7": lambda: CatalogEntry(
            "P7", _rank3_from_lines(7, _P7_LINES), "ternary 3-spike, 5 long lines"
        ),
        "CoExtP7": lambda: CatalogEntry(
            "CoExtP7",
            builtin("P7").matroid.free_coextension(),
            "free coextension of P7 (list index 430)",
        ),
        "M430": lambda: CatalogEntry(
            "M430", builtin("CoExtP7").matroid, "alias of CoExtP7"
        ),
        "M548": lambda: CatalogEntry(
            "M548", builtin("CoExtP7").matroid.dual(), "dual of CoExtP7"
        ),
        "P8": lambda: CatalogEntry(
            "P8", from_matrix(_P8_MATRIX), "rank-4 matroid from its rational matrix"
        ),
        "P8'": lambda: CatalogEntry(
            "P8'",
            builtin("P8").matroid.relax(_P8_RELAXATIONS[0]),
            "P8 with one circuit hyperplane relaxed",
        ),
        "P8''": lambda: CatalogEntry(
            "P8''",
            builtin("P8'").matroid.relax(_P8_RELAXATIONS[1]),
            "P8 with two circuit hyperplanes relaxed",
        ),
        "P8'''": lambda: CatalogEntry(
            "P8'''",
            builtin("P8''").matroid.relax(_P8_RELAXATIONS[2]),
            "P8 with three circuit hyperplanes relaxed; not representable",
        ),
        "M575": lambda: CatalogEntry("M575", builtin("P8").matroid, "alias of P8"),
        "M570": lambda: CatalogEntry("M570", builtin("P8'").matroid, "alias of P8'"),
        "M467": lambda: CatalogEntry("M467", builtin("P8''").matroid, "alias of P8''"),
        "M466": lambda: CatalogEntry("M466", builtin("P8'''").matroid, "alias of P8'''"),
        "V8": lambda: CatalogEntry(
            "V8", _from_nonbases(8, 4, _VAMOS_NONBASES), "Vamos matroid"
        ),
        "M431": lambda: CatalogEntry(
            "M431", _from_nonbases(8, 4, _M431_NONBASES), "four circuit hyperplanes"
        ),
        "S8": lambda: CatalogEntry(
            "S8", from_matrix(_S8_MATRIX, p=2), "binary 4-spike (list index 912)"
        ),
        "Pappus": lambda: CatalogEntry(
            "Pappus", _rank3_from_lines(9, _PAPPUS_LINES), "Pappus configuration"
        ),
        "NonPappus": lambda: CatalogEntry(
            "NonPappus",
            _rank3_from_lines(9, _PAPPUS_LINES[:-1]),
            "Pappus configuration without the conclusion line",
        ),
        "NonPappus\\9+e": lambda: CatalogEntry(
            "NonPappus\\9+e",
            builtin("NonPappus").matroid.delete((9,)).free_extension(),
            "free extension of the non-Pappus matroid minus its ninth point",
        ),
        "Golay": lambda: CatalogEntry(
            "Golay",
            from_matrix(_GOLAY_MATRIX, p=3),
            "extended ternary Golay code over GF(3); hyperplane supports S(5,6,12)",
        ),
    }
    try:
        build = builders[key]
    except KeyError:
        raise UnknownName(f"unknown catalog name {name!r}") from None
    return build()


BUILTIN_NAMES = (
    "U24", "U25", "U36", "U13", "U33",
    "F7", "F7-", "F7--", "F7-3", "MK4", "MK4+e",
    "P7", "CoExtP7", "M548",
    "P8", "P8'", "P8''", "P8'''",
    "V8", "M431", "S8",
    "Pappus", "NonPappus", "NonPappus\\9+e", "Golay",
)


def builtin_set():
    return [builtin(n) for n in BUILTIN_NAMES]


# -- file formats -------------------------------------------------------------


def write(entries, path) -> None:
    """Matroid text format: header + bases/nonbases block per entry."""
    with open(path, "w", encoding="utf-8") as fh:
        for ent in entries:
            m = ent.matroid
            fh.write(f"matroid {ent.name} n={m.n} r={m.r}\n")
            nonb = sorted(m.nonbases())
            if len(nonb) < len(m.bases):
                fh.write("nonbases\n")
                rows = nonb
            else:
                fh.write("bases\n")
                rows = sorted(m.bases)
            for row in rows:
                fh.write(" ".join(str(e) for e in sorted(set_of(row))) + "\n")
            fh.write("\n")


def write_compact(entries, path) -> None:
    """One line per matroid: `<n> <r> <comma-separated nonbases>`."""
    with open(path, "w", encoding="utf-8") as fh:
        for ent in entries:
            m = ent.matroid
            nonb = sorted(m.nonbases())
            blocks = ",".join(
                " ".join(str(e) for e in sorted(set_of(x))) for x in nonb
            )
            fh.write(f"{m.n} {m.r} {blocks}\n")


def parse(path, validate: bool = True):
    """Parse either the text format or the compact format; entries are
    validated (exchange axiom) unless told otherwise."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    first = next(
        (ln for ln in lines if ln.strip() and not ln.lstrip().startswith("#")), ""
    )
    if first.startswith("matroid"):
        return _parse_text(lines, validate)
    return _parse_compact(lines, validate)


def _parse_text(lines, validate):
    entries = []
    i = 0
    while i < len(lines):
        ln = lines[i].strip()
        i += 1
        if not ln or ln.startswith("#"):
            continue
        mh = re.fullmatch(r"matroid\s+(\S+)\s+n=(\d+)\s+r=(\d+)", ln)
        if not mh:
            raise ParseError(f"expected matroid header, got {ln!r}", line=i)
        name, n, r = mh.group(1), int(mh.group(2)), int(mh.group(3))
        while i < len(lines) and (
            not lines[i].strip() or lines[i].lstrip().startswith("#")
        ):
            i += 1
        if i >= len(lines) or lines[i].strip() not in ("bases", "nonbases"):
            raise ParseError("expected a 'bases' or 'nonbases' block", line=i + 1)
        kind = lines[i].strip()
        i += 1
        rows = []
        while i < len(lines) and lines[i].strip():
            row = lines[i].strip()
            i += 1
            if row.startswith("#"):
                continue
            try:
                rows.append(tuple(int(x) for x in row.split()))
            except ValueError as exc:
                raise ParseError(f"bad subset line {row!r}", line=i) from exc
        entries.append(_finish_entry(name, n, r, kind, rows, validate, i))
    return entries


def _parse_compact(lines, validate):
    entries = []
    for lineno, ln in enumerate(lines, start=1):
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        head, _, rest = ln.partition(" ")
        n2, _, blocks = rest.partition(" ")
        try:
            n, r = int(head), int(n2)
        except ValueError as exc:
            raise ParseError(f"bad compact header in {ln!r}", line=lineno) from exc
        rows = []
        if blocks.strip():
            for blk in blocks.split(","):
                try:
                    rows.append(tuple(int(x) for x in blk.split()))
                except ValueError as exc:
                    raise ParseError(f"bad block {blk!r}", line=lineno) from exc
        entries.append(
            _finish_entry(
                f"entry{len(entries)}", n, r, "nonbases", rows, validate, lineno
            )
        )
    return entries


def _finish_entry(name, n, r, kind, rows, validate, lineno):
    for row in rows:
        if any(e < 1 or e > n for e in row):
            raise ParseError(f"element outside 1..{n} in {row}", line=lineno)
        if len(row) != r:
            raise ParseError(f"subset {row} does not have size r={r}", line=lineno)
    if kind == "bases":
        bases = [mask_of(row) for row in rows]
        m = Matroid._make(n, r, bases)
    else:
        m = _from_nonbases(n, r, rows)
    if validate:
        try:
            m.validate()
        except Exception as exc:
            raise ValidationError(f"entry {name!r}: {exc}") from exc
    return CatalogEntry(name, m, f"parsed from file (line {lineno})")
