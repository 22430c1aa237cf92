"""Sorted literal containers shared by the whole checker.

Literals use the AIGER packing: variable ``v`` appears as ``2*v`` when
positive and ``2*v + 1`` when negated.  Cubes (conjunctions) and clauses
(disjunctions) are strictly sorted literal tuples with at most one literal
per variable, each carrying a 64-bit signature used as a subsumption
pre-filter.  States are plain tuples of 0/1 values indexed by variable.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

State = Sequence  # 0/1 per variable, indexed by variable number


def neg(lit: int) -> int:
    """Flip the polarity of a literal."""
    return lit ^ 1


def lit_var(lit: int) -> int:
    return lit >> 1


def lit_negated(lit: int) -> bool:
    return bool(lit & 1)


def make_lit(var: int, negated: bool = False) -> int:
    return (var << 1) | int(negated)


def signature(lits: Iterable[int]) -> int:
    """64-bit mask with bit ``v % 64`` set for every occurring variable."""
    sig = 0
    for lit in lits:
        sig |= 1 << ((lit >> 1) & 63)
    return sig


class _LitTuple:
    """Strictly sorted literal tuple over pairwise distinct variables."""

    __slots__ = ("lits", "sig")

    def __init__(self, lits: Iterable[int] = ()):
        ordered = sorted(lits)
        prev_var = -1
        for lit in ordered:
            if lit < 0:
                raise ValueError(f"negative literal code {lit}")
            if lit >> 1 == prev_var:
                raise ValueError(f"variable {lit >> 1} occurs twice")
            prev_var = lit >> 1
        self.lits = tuple(ordered)
        self.sig = signature(self.lits)

    @classmethod
    def _wrap(cls, lits: tuple[int, ...], sig: int):
        # Fast path for literals already known to be sorted and consistent.
        obj = cls.__new__(cls)
        obj.lits = lits
        obj.sig = sig
        return obj

    def __len__(self) -> int:
        return len(self.lits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.lits)

    def __contains__(self, lit: int) -> bool:
        return lit in self.lits

    def __eq__(self, other) -> bool:
        return type(other) is type(self) and other.lits == self.lits

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.lits))

    def __repr__(self) -> str:
        body = " ".join(f"~x{l >> 1}" if l & 1 else f"x{l >> 1}" for l in self.lits)
        return f"{type(self).__name__}({body})"


class Cube(_LitTuple):
    """Consistent conjunction of literals."""

    def negate(self) -> "Clause":
        return Clause._wrap(tuple(l ^ 1 for l in self.lits), self.sig)


class Clause(_LitTuple):
    """Disjunction of literals."""

    def negate(self) -> Cube:
        return Cube._wrap(tuple(l ^ 1 for l in self.lits), self.sig)


def negate_cube(cube: Cube) -> Clause:
    return cube.negate()


def negate_clause(clause: Clause) -> Cube:
    return clause.negate()


def subsumes(c: _LitTuple, d: _LitTuple) -> bool:
    """True iff the literals of ``c`` are a subset of the literals of ``d``.

    Signature pre-filter first, then a single merge pass over the sorted
    literal tuples.
    """
    if c.sig & ~d.sig:
        return False
    cl, dl = c.lits, d.lits
    if len(cl) > len(dl):
        return False
    i = j = 0
    nc, nd = len(cl), len(dl)
    while i < nc and j < nd:
        a, b = cl[i], dl[j]
        if a == b:
            i += 1
            j += 1
        elif a > b:
            j += 1
        else:
            return False
    return i == nc


def clause_covers_state(clause: Clause, state: State) -> bool:
    """True iff every literal of ``clause`` is falsified by the total state."""
    for lit in clause.lits:
        if state[lit >> 1] != (lit & 1):
            return False
    return True


def cube_of_state(state: State) -> Cube:
    """Total cube fixing every variable to its value in ``state``."""
    lits = tuple((v << 1) | (state[v] ^ 1) for v in range(len(state)))
    return Cube._wrap(lits, signature(lits))
