"""Exhaustive, duplicate-free formula enumeration by size.

``depth`` counts connective and quantifier occurrences, so level ``n`` holds
every formula with exactly ``n`` of them.  Within a level the order is fixed:
unary nodes first (``~``, then quantifiers), then ``&``, ``|``, ``->`` over
all splits of the remaining size.
"""
from __future__ import annotations

from typing import Iterator, Sequence, Union

from .syntax import BOT, And, Atom, Exists, Forall, Formula, Imp, Neg, Or, parse

FRAGMENTS = ("propositional", "~-free", "full", "unary-fo", "~-free-fo")

DEFAULT_FO_ATOMS = ("P(x)", "P(c)", "q")


def _atoms(atoms: Sequence[Union[str, Formula]]) -> list:
    out = []
    for a in atoms:
        f = parse(a) if isinstance(a, str) else a
        if not isinstance(f, Atom):
            raise ValueError(f"not an atom: {a!r}")
        out.append(f)
    return out


def formula_levels(atoms, depth: int, fragment: str = "propositional",
                   variables: Sequence[str] = ("x",)) -> list:
    """Return ``levels`` with ``levels[n]`` the formulas of size exactly ``n``."""
    if fragment not in FRAGMENTS:
        raise ValueError(f"unknown fragment {fragment!r}; expected one of {FRAGMENTS}")
    if depth < 0:
        raise ValueError("depth must be non-negative")
    base = _atoms(atoms) + [BOT]
    strong = fragment not in ("~-free", "~-free-fo")
    quantified = fragment in ("full", "unary-fo", "~-free-fo")
    levels = [base]
    for n in range(1, depth + 1):
        level = []
        prev = levels[n - 1]
        if strong:
            level.extend(Neg(a) for a in prev)
        if quantified:
            for v in variables:
                level.extend(Forall(v, a) for a in prev)
                level.extend(Exists(v, a) for a in prev)
        for op in (And, Or, Imp):
            for i in range(n):
                lefts, rights = levels[i], levels[n - 1 - i]
                level.extend(op(a, b) for a in lefts for b in rights)
        levels.append(level)
    return levels


def enumerate_formulas(atoms, depth: int, fragment: str = "propositional",
                       variables: Sequence[str] = ("x",)) -> Iterator[Formula]:
    """Stream all formulas of the fragment with at most ``depth`` connectives.

    ``unary-fo`` and ``~-free-fo`` yield sentences only; ``full`` also
    yields open formulas.
    """
    for level in formula_levels(atoms, depth, fragment, variables):
        for f in level:
            if fragment in ("unary-fo", "~-free-fo") and f.fv:
                continue
            yield f


def count_formulas(n_atoms: int, depth: int, fragment: str = "propositional",
                   n_variables: int = 1) -> int:
    """Closed-form size recurrence; ``unary-fo`` is not supported (needs a scan)."""
    unary = {"propositional": 1, "~-free": 0, "full": 1 + 2 * n_variables}[fragment]
    s = [n_atoms + 1]
    for n in range(1, depth + 1):
        s.append(unary * s[n - 1] + 3 * sum(s[i] * s[n - 1 - i] for i in range(n)))
    return sum(s)
