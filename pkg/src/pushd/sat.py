"""Incremental CDCL solving with assumptions and used-assumption extraction.

A ``SolverInstance`` owns a fixed set of variables, accepts clauses over
literal codes (``2*v`` positive, ``2*v + 1`` negated), and answers
``solve(assumptions)`` queries.  Clauses are only ever added; an UNSAT answer
reports the subset of the passed assumptions used by the refutation, and
re-solving with only that subset stays UNSAT.  Unassigned variables take
phase ``False``, so extracted models are deterministic for a fixed seed.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import _satcore as core


class ResourceOutError(RuntimeError):
    """A solve call exceeded its step budget (decisions + conflicts)."""


class SatResult:
    """Either a total model or the used subset of the assumptions."""

    __slots__ = ("is_sat", "model", "used", "decisions", "conflicts", "propagations")

    def __init__(self, is_sat, model, used, decisions, conflicts, propagations):
        self.is_sat = is_sat
        self.model = model
        self.used = used
        self.decisions = decisions
        self.conflicts = conflicts
        self.propagations = propagations

    @property
    def steps(self) -> int:
        return self.decisions + self.conflicts

    def model_value(self, var: int) -> bool:
        if not self.is_sat:
            raise ValueError("model_value queried on an UNSAT result")
        return bool(self.model[var])

    def __repr__(self) -> str:
        return f"SatResult(sat={self.is_sat})"


class SolverInstance:
    """One incremental CDCL solver over ``n_vars`` variables."""

    def __init__(self, n_vars: int, seed: int = 0):
        if n_vars < 0:
            raise ValueError("negative variable count")
        self.n_vars = n_vars
        self.seed = seed
        cap = 2 * n_vars + 1024
        self._arena = np.full(cap, -1, dtype=np.int32)
        self._assigns = np.full(n_vars, 2, dtype=np.int8)
        self._vlevel = np.zeros(n_vars, dtype=np.int32)
        self._reason = np.full(n_vars, -1, dtype=np.int32)
        self._trail = np.zeros(n_vars + 1, dtype=np.int32)
        self._trail_lim = np.zeros(n_vars + 2, dtype=np.int32)
        self._seen = np.zeros(n_vars, dtype=np.uint8)
        self._learnt = np.zeros(n_vars + 1, dtype=np.int32)
        self._core = np.zeros(n_vars + 1, dtype=np.int32)
        self._st = np.zeros(16, dtype=np.int64)
        self._st[core.ST_TOP] = 2 * n_vars
        self._stf = np.ones(1, dtype=np.float64)
        self._counters = np.zeros(4, dtype=np.int64)
        if seed:
            rng = np.random.default_rng(seed)
            self._activity = rng.random(n_vars) * 1e-6
        else:
            self._activity = np.zeros(n_vars, dtype=np.float64)
        # a descending-activity array is a valid max-heap
        order = np.lexsort((np.arange(n_vars), -self._activity)).astype(np.int32)
        self._heap = order
        self._hpos = np.zeros(n_vars, dtype=np.int32)
        self._hpos[order] = np.arange(n_vars, dtype=np.int32)
        self._st[core.ST_HEAP] = n_vars
        self._clauses: list[tuple[int, ...]] = []
        self.debug_recheck = False

    # -- clause database -------------------------------------------------

    def _check_lit(self, lit: int):
        if not 0 <= lit < 2 * self.n_vars:
            raise ValueError(f"literal {lit} outside the allocated variables")

    def _root_value(self, lit: int) -> int:
        a = self._assigns[lit >> 1]
        return 2 if a == 2 else int(a) ^ (lit & 1)

    def add_clause(self, lits: Iterable[int]) -> None:
        """Permanently add a clause; the empty clause freezes the instance."""
        lits = sorted(lits)
        clean = []
        for lit in lits:
            self._check_lit(lit)
            if clean and clean[-1] == lit:
                continue
            if clean and clean[-1] == (lit ^ 1):
                return  # tautology
            clean.append(int(lit))
        self._clauses.append(tuple(clean))
        if self._st[core.ST_FROZEN]:
            return
        assert self._st[core.ST_DLEVEL] == 0
        # simplify against the root-level assignment
        keep = []
        for lit in clean:
            val = self._root_value(lit)
            if val == 1:
                return  # already satisfied forever
            if val == 2:
                keep.append(lit)
        if not keep:
            self._st[core.ST_FROZEN] = 1
            return
        if len(keep) == 1:
            core._enqueue(self._assigns, self._vlevel, self._reason, self._trail,
                          self._st, keep[0], -1)
            return
        self._ensure_arena(3 + len(keep))
        core._install_clause(self._arena, self._st,
                             np.array(keep, dtype=np.int32), len(keep))

    def _ensure_arena(self, need: int):
        top = int(self._st[core.ST_TOP])
        if top + need <= self._arena.shape[0]:
            return
        cap = max(2 * self._arena.shape[0], top + need + 1024)
        fresh = np.empty(cap, dtype=np.int32)
        fresh[:top] = self._arena[:top]
        self._arena = fresh

    def iter_clauses(self):
        """Original (deduplicated) literal tuples of every added clause."""
        return iter(self._clauses)

    # -- solving ----------------------------------------------------------

    def solve(self, assumptions: Sequence[int] = (), step_budget: int | None = None) -> SatResult:
        """Solve under assumptions.

        Returns a SAT result with a total model, or an UNSAT result whose
        ``used`` literals are a sufficient subset of ``assumptions``.  Raises
        ``ResourceOutError`` when the step budget runs out.
        """
        seen = {}
        assumps = []
        for lit in assumptions:
            lit = int(lit)
            self._check_lit(lit)
            prev = seen.get(lit >> 1)
            if prev is None:
                seen[lit >> 1] = lit
                assumps.append(lit)
            elif prev != lit:
                raise ValueError("contradictory assumptions")
        assumps_arr = np.array(assumps, dtype=np.int32)
        budget = np.int64(step_budget if step_budget is not None else 2**62)
        if budget <= 0:
            raise ResourceOutError("no solve budget left")
        before = self._counters.copy()
        while True:
            status = core._search(self._arena, self._assigns, self._vlevel,
                                  self._reason, self._trail, self._trail_lim,
                                  self._seen, self._activity, self._heap,
                                  self._hpos, self._learnt, self._core,
                                  assumps_arr, self._st, self._stf,
                                  self._counters, budget)
            if status == core.GROW:
                self._ensure_arena(3 + int(self._st[core.ST_PENDING_LEN]))
                continue
            break
        delta = self._counters - before
        dec, conf, props = int(delta[core.C_DECISIONS]), int(delta[core.C_CONFLICTS]), int(delta[core.C_PROPS])
        if status == core.BUDGET:
            raise ResourceOutError("solver step budget exceeded")
        if status == core.SAT:
            model = np.where(self._assigns == 2, 0, self._assigns).astype(np.uint8)
            core._backtrack_root(self._assigns, self._reason, self._trail,
                                 self._trail_lim, self._heap, self._hpos,
                                 self._activity, self._st)
            return SatResult(True, model, None, dec, conf, props)
        used = tuple(int(self._core[i]) for i in range(int(self._st[core.ST_CORE])))
        result = SatResult(False, None, used, dec, conf, props)
        if self.debug_recheck and used:
            self.debug_recheck = False
            try:
                again = self.solve(used)
            finally:
                self.debug_recheck = True
            if again.is_sat:
                raise RuntimeError("used-assumption subset did not re-solve UNSAT")
        return result

    @property
    def propagations(self) -> int:
        return int(self._counters[core.C_PROPS])

    @property
    def decisions(self) -> int:
        return int(self._counters[core.C_DECISIONS])

    @property
    def conflicts(self) -> int:
        return int(self._counters[core.C_CONFLICTS])


def from_dimacs(text: str) -> SolverInstance:
    """Load a DIMACS CNF into a fresh solver (vars are shifted to 0-based)."""
    n_vars = 0
    clauses = []
    pending: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"malformed problem line {line!r}")
            n_vars = int(parts[2])
            continue
        for tok in line.split():
            v = int(tok)
            if v == 0:
                clauses.append(tuple(pending))
                pending = []
            else:
                code = 2 * (abs(v) - 1) + (1 if v < 0 else 0)
                pending.append(code)
    if pending:
        raise ValueError("trailing literals without terminating 0")
    solver = SolverInstance(n_vars)
    for cl in clauses:
        solver.add_clause(cl)
    return solver
