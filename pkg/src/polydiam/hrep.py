"""Reading and writing the ``.hrep`` text format.

::

    # optional comment lines
    m n
    a_11 ... a_1n b_1
    ...
    a_m1 ... a_mn b_m

Entries may be integers, decimals or ``p/q`` rationals. All of them are read
as exact rationals; rows keep that exactness when their norms are rational.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import ParseError
from .polytope import HRepresentation


def _number(tok: str, line: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError, OverflowError):
        raise ParseError(line, f"not a number: {tok!r}") from None


def parse_hrep(text: str) -> HRepresentation:
    lines = [(i + 1, ln.split()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, toks) for i, toks in lines if toks and not toks[0].startswith("#")]
    if not lines:
        raise ParseError(1, "empty input, expected header 'm n'")
    hline, header = lines[0]
    if len(header) != 2:
        raise ParseError(hline, "header must be two integers 'm n'")
    try:
        m, n = int(header[0]), int(header[1])
    except ValueError:
        raise ParseError(hline, "header must be two integers 'm n'") from None
    if m < 1 or n < 1:
        raise ParseError(hline, "m and n must be positive")
    body = lines[1:]
    if len(body) != m:
        last = body[-1][0] if body else hline
        raise ParseError(last, f"expected {m} constraint rows, found {len(body)}")
    A, b = [], []
    for line, toks in body:
        if len(toks) != n + 1:
            raise ParseError(line, f"expected {n + 1} entries, found {len(toks)}")
        vals = [_number(t, line) for t in toks]
        A.append(vals[:-1])
        b.append(vals[-1])
    return HRepresentation.from_arrays(A, b)


def read_hrep(path) -> HRepresentation:
    with open(path, encoding="utf-8") as fh:
        return parse_hrep(fh.read())


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return repr(float(x))


def format_hrep(H: HRepresentation, comment: str | None = None) -> str:
    A = H.A_exact if H.exact else H.A
    b = H.b_exact if H.exact else H.b
    out = []
    if comment:
        out.extend(f"# {c}" for c in comment.splitlines())
    out.append(f"{H.m} {H.n}")
    for row, rhs in zip(A, b):
        out.append(" ".join(_fmt(x) for x in (*row, rhs)))
    return "\n".join(out) + "\n"


def write_hrep(H: HRepresentation, path, comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_hrep(H, comment))


def stacked(H: HRepresentation) -> np.ndarray:
    """``[A | b]`` as one float array."""
    return np.column_stack([H.A, H.b])
