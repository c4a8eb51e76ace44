"""Line-oriented text formats for families and posets.

Family::

    family 3
    -
    1
    1,2
    0x7

Poset::

    poset 3
    0 < 1
    1 < 2
    label 0 bottom

Blank lines and ``#`` comments are ignored.  Emission is canonical, so
``parse(emit(x)) == x`` for every object.
"""
from __future__ import annotations

from pathlib import Path

from .errors import FormatError, ValidationError
from .family import GROUND_CAP, SetFamily, bits
from .poset import Poset, poset_from_relations

__all__ = [
    "parse_family", "emit_family", "read_family", "write_family",
    "parse_poset", "emit_poset", "read_poset", "write_poset",
]


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _header(lines, keyword: str) -> tuple[int, int]:
    try:
        no, line = next(lines)
    except StopIteration:
        raise FormatError(f"empty input, expected '{keyword} <size>'", line=1) from None
    parts = line.split()
    if len(parts) != 2 or parts[0] != keyword:
        raise FormatError(f"expected '{keyword} <size>'", line=no)
    try:
        size = int(parts[1])
    except ValueError:
        raise FormatError(f"size {parts[1]!r} is not an integer", line=no) from None
    if size < 0:
        raise FormatError("size must be nonnegative", line=no)
    return no, size


def _parse_member(token: str, n: int, no: int) -> int:
    if token == "-":
        return 0
    if token.lower().startswith("0x"):
        try:
            mask = int(token, 16)
        except ValueError:
            raise FormatError(f"bad hex mask {token!r}", line=no) from None
        if mask >> n:
            raise FormatError(f"mask {token} has bits outside [{n}]", line=no)
        return mask
    mask = 0
    prev = 0
    for part in token.split(","):
        part = part.strip()
        try:
            e = int(part)
        except ValueError:
            raise FormatError(f"bad element {part!r}", line=no) from None
        if not 1 <= e <= n:
            raise FormatError(f"element {e} outside 1..{n}", line=no)
        if e <= prev:
            raise FormatError("elements must be strictly ascending", line=no)
        prev = e
        mask |= 1 << (e - 1)
    return mask


def parse_family(text: str) -> SetFamily:
    lines = _lines(text)
    no, n = _header(lines, "family")
    if n > GROUND_CAP:
        raise FormatError(f"ground size {n} exceeds {GROUND_CAP}", line=no)
    members = []
    for no, line in lines:
        members.append(_parse_member(line.replace(" ", ""), n, no))
    return SetFamily(n, members)


def emit_family(F: SetFamily) -> str:
    out = [f"family {F.ground}"]
    for m in F.members:
        out.append(",".join(str(i + 1) for i in bits(m)) if m else "-")
    return "\n".join(out) + "\n"


def parse_poset(text: str) -> Poset:
    lines = _lines(text)
    no, size = _header(lines, "poset")
    pairs = []
    labels: dict[int, str] = {}

    def index(token, no):
        try:
            i = int(token)
        except ValueError:
            raise FormatError(f"bad element index {token!r}", line=no) from None
        if not 0 <= i < size:
            raise FormatError(f"element {i} outside 0..{size - 1}", line=no)
        return i

    for no, line in lines:
        parts = line.split()
        if parts[0] == "label":
            if len(parts) != 3:
                raise FormatError("expected 'label <i> <name>'", line=no)
            i = index(parts[1], no)
            if i in labels:
                raise FormatError(f"element {i} labelled twice", line=no)
            labels[i] = parts[2]
        elif len(parts) == 3 and parts[1] == "<":
            pairs.append((index(parts[0], no), index(parts[2], no)))
        else:
            raise FormatError("expected 'i < j' or 'label i name'", line=no)
    names = None
    if labels:
        names = [labels.get(i, str(i)) for i in range(size)]
    try:
        return poset_from_relations(size, pairs, names)
    except ValidationError as exc:
        raise FormatError(str(exc), line=no) from None


def emit_poset(P: Poset) -> str:
    """Cover pairs only; the parser restores the closure."""
    out = [f"poset {P.size}"]
    out += [f"{x} < {y}" for x, y in P.covers()]
    if P.labels:
        out += [f"label {i} {name}" for i, name in enumerate(P.labels)]
    return "\n".join(out) + "\n"


def read_family(path) -> SetFamily:
    return parse_family(Path(path).read_text())


def write_family(F: SetFamily, path) -> None:
    Path(path).write_text(emit_family(F))


def read_poset(path) -> Poset:
    return parse_poset(Path(path).read_text())


def write_poset(P: Poset, path) -> None:
    Path(path).write_text(emit_poset(P))
