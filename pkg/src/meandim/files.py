"""Textual file formats for subshifts, measures and rectangle families.

Subshift files (.sft)::

    # comments and blank lines are ignored
    dimension: 2
    alphabet: 0 1
    certified: row-lift        # optional exactness certificate
    forbidden:
    (0,0)=1 (1,0)=1            # one pattern per line; 1D cells are (m)=sym

Measure files (.measure)::

    type: bernoulli            # or markov-row
    alphabet: 0 1              # optional; defaults to 0 1 2 ...
    weights: 0.5 0.5           # bernoulli
    transition:                # markov-row: one row per line
    0.618033988749895 0.381966011250105
    1 0
    stationary: 0.7236 0.2764  # optional; computed when absent

Rectangle files for the greedy-cover demo hold one ``a b c d`` quadruple
per line.  Parsers report the offending line number; writers emit the
canonical form (sorted cells, single spaces) and round-trip.
"""

from __future__ import annotations

from pathlib import Path

from .errors import ParseError
from .information import MeasureSpec
from .lattice import IntRect
from .subshift import Alphabet, Pattern, SftSpec


def _meaningful_lines(text: str):
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield i, line


def parse_sft_text(text: str) -> SftSpec:
    dimension = None
    alph: Alphabet | None = None
    certified = None
    forbidden: list[Pattern] = []
    in_forbidden = False
    for lineno, line in _meaningful_lines(text):
        if not in_forbidden and ":" in line:
            key, _, rest = line.partition(":")
            key = key.strip().lower()
            rest = rest.strip()
            if key == "dimension":
                if rest not in ("1", "2"):
                    raise ParseError(f"dimension must be 1 or 2, got {rest!r}", lineno)
                dimension = int(rest)
                continue
            if key == "alphabet":
                toks = rest.split()
                if not toks:
                    raise ParseError("alphabet line lists no symbols", lineno)
                try:
                    alph = Alphabet(tuple(toks))
                except ValueError as e:
                    raise ParseError(str(e), lineno)
                continue
            if key == "certified":
                certified = rest
                continue
            if key == "forbidden":
                if rest:
                    raise ParseError("forbidden: starts a block; patterns go on "
                                     "their own lines", lineno)
                in_forbidden = True
                continue
            raise ParseError(f"unknown key {key!r}", lineno)
        if not in_forbidden:
            raise ParseError(f"unexpected line {line!r} before the forbidden block", lineno)
        if dimension is None or alph is None:
            raise ParseError("dimension and alphabet must precede the forbidden block", lineno)
        forbidden.append(_parse_pattern_line(line, lineno, dimension, alph))
    if dimension is None:
        raise ParseError("missing 'dimension:' line")
    if alph is None:
        raise ParseError("missing 'alphabet:' line")
    try:
        return SftSpec(dimension, alph, tuple(forbidden), certified=certified)
    except ValueError as e:
        raise ParseError(str(e))


def _parse_pattern_line(line: str, lineno: int, dimension: int, alph: Alphabet) -> Pattern:
    cells: dict[tuple[int, int], str] = {}
    for tok in line.split():
        if "=" not in tok or not tok.startswith("("):
            raise ParseError(f"bad cell constraint {tok!r}; expected (m,n)=sym", lineno)
        coords, _, sym = tok.partition("=")
        coords = coords.strip()
        if not (coords.startswith("(") and coords.endswith(")")):
            raise ParseError(f"bad cell coordinates {coords!r}", lineno)
        parts = coords[1:-1].split(",")
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise ParseError(f"non-integer coordinate in {coords!r}", lineno)
        if dimension == 1:
            if len(nums) != 1:
                raise ParseError("1D cells are written (m)=sym", lineno)
            pt = (nums[0], 0)
        else:
            if len(nums) != 2:
                raise ParseError("2D cells are written (m,n)=sym", lineno)
            pt = (nums[0], nums[1])
        if pt in cells:
            raise ParseError(f"duplicate cell {coords} in one pattern", lineno)
        if sym not in alph.symbols:
            raise ParseError(f"symbol {sym!r} not in the alphabet", lineno)
        cells[pt] = sym
    if not cells:
        raise ParseError("empty forbidden pattern", lineno)
    return Pattern.from_dict(cells)


def parse_sft(path) -> SftSpec:
    return parse_sft_text(Path(path).read_text(encoding="utf-8"))


def write_sft(sft: SftSpec) -> str:
    """Canonical text form; parse(write(s)) == s and write is a fixpoint."""
    lines = [f"dimension: {sft.dimension}",
             "alphabet: " + " ".join(sft.alphabet.symbols)]
    if sft.certified:
        lines.append(f"certified: {sft.certified}")
    lines.append("forbidden:")
    pats = sorted(sft.forbidden, key=lambda p: p.cells)
    for p in pats:
        toks = []
        for (m, n), sym in p.cells:
            coord = f"({m})" if sft.dimension == 1 else f"({m},{n})"
            toks.append(f"{coord}={sym}")
        lines.append(" ".join(toks))
    return "\n".join(lines) + "\n"


def parse_measure_text(text: str) -> MeasureSpec:
    kind = None
    alph: Alphabet | None = None
    weights = None
    rows: list[list[float]] = []
    stationary = None
    in_transition = False
    for lineno, line in _meaningful_lines(text):
        if ":" in line and not (in_transition and _is_number_row(line)):
            in_transition = False
            key, _, rest = line.partition(":")
            key = key.strip().lower()
            rest = rest.strip()
            if key == "type":
                if rest not in ("bernoulli", "markov-row"):
                    raise ParseError(f"type must be bernoulli or markov-row, got {rest!r}",
                                     lineno)
                kind = rest
            elif key == "alphabet":
                try:
                    alph = Alphabet(tuple(rest.split()))
                except ValueError as e:
                    raise ParseError(str(e), lineno)
            elif key == "weights":
                weights = _parse_floats(rest, lineno)
            elif key == "transition":
                if rest:
                    rows.append(_parse_floats(rest, lineno))
                in_transition = True
            elif key == "stationary":
                stationary = _parse_floats(rest, lineno)
            else:
                raise ParseError(f"unknown key {key!r}", lineno)
            continue
        if in_transition:
            rows.append(_parse_floats(line, lineno))
            continue
        raise ParseError(f"unexpected line {line!r}", lineno)
    if kind is None:
        raise ParseError("missing 'type:' line")
    if kind == "bernoulli":
        if weights is None:
            raise ParseError("bernoulli measure needs a 'weights:' line")
        if alph is None:
            alph = Alphabet(tuple(str(i) for i in range(len(weights))))
        try:
            return MeasureSpec.bernoulli(alph, weights)
        except ValueError as e:
            raise ParseError(str(e))
    if not rows:
        raise ParseError("markov-row measure needs a 'transition:' block")
    if alph is None:
        alph = Alphabet(tuple(str(i) for i in range(len(rows))))
    try:
        return MeasureSpec.markov_row(alph, rows, stationary)
    except ValueError as e:
        raise ParseError(str(e))


def _is_number_row(line: str) -> bool:
    try:
        [float(t) for t in line.split()]
        return True
    except ValueError:
        return False


def _parse_floats(text: str, lineno: int) -> list[float]:
    try:
        vals = [float(t) for t in text.split()]
    except ValueError:
        raise ParseError(f"expected numbers, got {text!r}", lineno)
    if not vals:
        raise ParseError("expected at least one number", lineno)
    return vals


def parse_measure(path) -> MeasureSpec:
    return parse_measure_text(Path(path).read_text(encoding="utf-8"))


def write_measure(measure: MeasureSpec) -> str:
    lines = [f"type: {measure.kind}",
             "alphabet: " + " ".join(measure.alphabet.symbols)]
    if measure.kind == "bernoulli":
        lines.append("weights: " + " ".join(repr(w) for w in measure.weights))
    else:
        lines.append("transition:")
        for row in measure.transition:
            lines.append(" ".join(repr(x) for x in row))
        lines.append("stationary: " + " ".join(repr(x) for x in measure.stationary))
    return "\n".join(lines) + "\n"


def parse_rects_text(text: str) -> list[IntRect]:
    rects = []
    for lineno, line in _meaningful_lines(text):
        toks = line.split()
        if len(toks) != 4:
            raise ParseError(f"expected 'a b c d', got {line!r}", lineno)
        try:
            a, b, c, d = (int(t) for t in toks)
        except ValueError:
            raise ParseError(f"non-integer bound in {line!r}", lineno)
        try:
            rects.append(IntRect(a, b, c, d))
        except ValueError as e:
            raise ParseError(str(e), lineno)
    return rects


def parse_rects(path) -> list[IntRect]:
    return parse_rects_text(Path(path).read_text(encoding="utf-8"))
