"""Plain-text family format.

::

    # optional comments
    n 7
    1 2 4
    2 3 5
    -

One set per line as 1-based elements, ``-`` for the empty set. The ``n``
line is optional; without it the ground set is the largest element seen
(or ``n`` passed by the caller).
"""

from __future__ import annotations

import hashlib
from pathlib import Path
from typing import Iterable, Optional, TextIO, Union

from diffam.family import SetFamily, elements_of, mask_of, MAX_N


class FamilyFormatError(ValueError):
    """Malformed family text."""


def parse_family(text: str, n: Optional[int] = None) -> SetFamily:
    declared = None
    rows: list[tuple[int, list[int]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] == "n":
            if declared is not None or rows:
                raise FamilyFormatError(f"line {lineno}: 'n' must come before any set")
            if len(tokens) != 2 or not tokens[1].isdigit():
                raise FamilyFormatError(f"line {lineno}: expected 'n <int>'")
            declared = int(tokens[1])
            continue
        if tokens == ["-"]:
            rows.append((lineno, []))
            continue
        try:
            elems = [int(t) for t in tokens]
        except ValueError:
            raise FamilyFormatError(f"line {lineno}: non-integer token in {line!r}") from None
        if len(set(elems)) != len(elems):
            raise FamilyFormatError(f"line {lineno}: repeated element")
        rows.append((lineno, elems))

    if declared is not None and n is not None and declared != n:
        raise FamilyFormatError(f"file declares n={declared} but n={n} was requested")
    ground = declared if declared is not None else n
    if ground is None:
        ground = max((max(e) for _, e in rows if e), default=1)
    if not 1 <= ground <= MAX_N:
        raise FamilyFormatError(f"ground set size {ground} outside [1, {MAX_N}]")

    seen: dict[int, int] = {}
    for lineno, elems in rows:
        bad = [e for e in elems if not 1 <= e <= ground]
        if bad:
            raise FamilyFormatError(f"line {lineno}: element {bad[0]} outside [1, {ground}]")
        m = mask_of(elems, ground)
        if m in seen:
            raise FamilyFormatError(f"line {lineno}: duplicate of line {seen[m]}")
        seen[m] = lineno
    return SetFamily.from_masks(seen, ground)


def format_family(family: SetFamily, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"n {family.n}")
    for m in family:
        lines.append(" ".join(map(str, elements_of(m))) or "-")
    return "\n".join(lines) + "\n"


def read_family(source: Union[str, Path, TextIO], n: Optional[int] = None) -> SetFamily:
    if hasattr(source, "read"):
        return parse_family(source.read(), n)
    return parse_family(Path(source).read_text(), n)


def write_family(path: Union[str, Path], family: SetFamily, comments: Iterable[str] = ()) -> None:
    Path(path).write_text(format_family(family, comments))


def file_digest(path: Union[str, Path]) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
