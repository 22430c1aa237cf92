"""Circuit-to-CNF translation with polarity-aware gate clauses.

Solver variables 0..max_var mirror the circuit variables (variable 0 is the
constant, pinned false by a unit clause); next-state variables for the
latches are allocated above them.  Gate clauses follow the
polarity-restricted encoding: a gate used only positively contributes
``(~g | a)`` and ``(~g | b)``, one used only negatively contributes
``(g | ~a | ~b)``, and both sets appear when both polarities are reachable
from the roots.  Latch updates are full bi-implications, which forces both
polarities throughout the next-state cones.

Engine-side cubes and clauses live in "latch space": variable ``p`` there is
the p-th declared latch.  This module owns the translation between latch
space and solver variables.
"""

from __future__ import annotations

import numpy as np

from .aiger import TransitionSystem
from .logic import Cube, State


class EncodedSystem:
    """CNF for the transition relation plus variable maps."""

    __slots__ = (
        "sys",
        "var_count",
        "trans_clauses",
        "init_clauses",
        "bad_literal",
        "latch_cur",
        "latch_primed",
        "input_vars",
        "_cur_to_pos",
    )

    def __init__(self, sys: TransitionSystem, var_count, trans_clauses,
                 init_clauses, bad_literal, latch_cur, latch_primed):
        self.sys = sys
        self.var_count = var_count
        self.trans_clauses = tuple(trans_clauses)
        self.init_clauses = tuple(init_clauses)
        self.bad_literal = bad_literal
        self.latch_cur = latch_cur
        self.latch_primed = latch_primed
        self.input_vars = sys._input_vars
        self._cur_to_pos = {int(v): p for p, v in enumerate(latch_cur)}

    @property
    def n_latches(self) -> int:
        return len(self.latch_cur)

    @property
    def prime_map(self) -> dict[int, int]:
        """Current-latch solver variable -> next-state solver variable."""
        return {int(c): int(p) for c, p in zip(self.latch_cur, self.latch_primed)}

    # -- latch-space translation ------------------------------------------

    def current_lits(self, cube_or_clause) -> list[int]:
        """Latch-space literals as solver literals over current-state vars."""
        return [(int(self.latch_cur[l >> 1]) << 1) | (l & 1) for l in cube_or_clause.lits]

    def prime_cube(self, cube: Cube) -> list[int]:
        """Literal-wise image of a latch-space cube over next-state vars."""
        out = []
        for l in cube.lits:
            p = l >> 1
            if p >= len(self.latch_primed):
                raise ValueError(f"variable {p} has no prime image")
            out.append((int(self.latch_primed[p]) << 1) | (l & 1))
        return out

    def state_from_model(self, model) -> tuple:
        return tuple(int(model[v]) for v in self.latch_cur)

    def step_from_model(self, model) -> tuple:
        return tuple(int(model[v]) for v in self.input_vars)


def encode(sys: TransitionSystem) -> EncodedSystem:
    """Translate the circuit; satisfiability-faithful for (state, input, state')."""
    n_latch = sys.n_latches
    latch_cur = sys._latch_vars.copy()
    latch_primed = np.arange(sys.max_var + 1, sys.max_var + 1 + n_latch, dtype=np.int32)
    var_count = sys.max_var + 1 + n_latch

    gate_of = {out >> 1: (a, b) for out, a, b in sys.gates}
    need_pos = np.zeros(sys.max_var + 1, dtype=bool)
    need_neg = np.zeros(sys.max_var + 1, dtype=bool)

    def mark(lit: int, positive: bool):
        stack = [(lit, positive)]
        while stack:
            l, pol = stack.pop()
            v = l >> 1
            if l & 1:
                pol = not pol
            store = need_pos if pol else need_neg
            if store[v]:
                continue
            store[v] = True
            ops = gate_of.get(v)
            if ops is None:
                continue
            a, b = ops
            if pol:
                stack.append((a, True))
                stack.append((b, True))
            else:
                stack.append((a, False))
                stack.append((b, False))

    for _, nxt in sys.latches:
        mark(nxt, True)
        mark(nxt, False)
    mark(sys.bad, True)

    clauses: list[tuple[int, ...]] = [(1,)]  # constant variable 0 is false
    for out, a, b in sys.gates:
        g = out >> 1
        if need_pos[g]:
            clauses.append((out ^ 1, a))
            clauses.append((out ^ 1, b))
        if need_neg[g]:
            clauses.append((out, a ^ 1, b ^ 1))
    for p, (_, nxt) in enumerate(sys.latches):
        pv = int(latch_primed[p])
        clauses.append((2 * pv + 1, nxt))       # pv -> next
        clauses.append((2 * pv, nxt ^ 1))       # next -> pv
    init = tuple((2 * int(v) + 1,) for v in latch_cur)
    return EncodedSystem(sys, var_count, clauses, init, sys.bad, latch_cur, latch_primed)


def to_dimacs(enc: EncodedSystem) -> str:
    """Transition-relation clauses in DIMACS, for external auditing."""
    lines = [f"p cnf {enc.var_count} {len(enc.trans_clauses)}"]
    for cl in enc.trans_clauses:
        lines.append(" ".join(str(-(l >> 1) - 1 if l & 1 else (l >> 1) + 1) for l in cl) + " 0")
    return "\n".join(lines) + "\n"
