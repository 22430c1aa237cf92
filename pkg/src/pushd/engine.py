"""The model-checking engine.

Reachability layers are delta-encoded: a learned clause lives in exactly one
``deltas[j]`` and belongs to every layer ``L_i`` with ``i <= j``.  One solver
instance is kept per time index; solver ``i`` holds the transition relation,
the initial-state units for index 0 only, and every clause of ``L_i``.

Three scheduling modes share the blocking machinery:

* ``iteration`` - classic two-phase loop: block all bad states at the current
  bound, then run one clause-propagation pass over all levels.
* ``triggered`` - propagation folded into the main loop.  A failed push keeps
  the solver model as a witness; the push is retried exactly when a newly
  added clause covers that witness, so clauses sit as far forward as possible
  at all times.
* ``none`` - no pushing at all; convergence can only be detected when a delta
  level is emptied by subsumption.

Safe answers carry an invariant clause set that is verified on fresh solvers;
Unsafe answers carry a trace that is replayed through the circuit simulator
before being returned.  Engine cubes, clauses, and states are in latch space
(variable ``p`` is the p-th latch); the encoder translates to solver vars.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

from .aiger import TransitionSystem, eval_bad, simulate_step
from .encoder import EncodedSystem
from .logic import Clause, Cube, clause_covers_state, cube_of_state, negate_clause, negate_cube, subsumes
from .sat import ResourceOutError, SatResult, SolverInstance


class InternalCheckError(RuntimeError):
    """An internal consistency check or certificate replay failed."""


class _ResourceOut(Exception):
    """Internal signal: frame or SAT-step budget exhausted."""


@dataclass(frozen=True)
class Trace:
    """Replayable counterexample: initial latch state plus one input vector
    per frame.  The final vector exhibits the bad valuation combinationally,
    so a trace with ``k`` transitions carries ``k + 1`` steps."""

    initial: tuple
    steps: tuple

    @property
    def transitions(self) -> int:
        return len(self.steps) - 1


def replay_trace(sys: TransitionSystem, trace: Trace) -> bool:
    """True iff the trace starts in the initial state and reaches bad."""
    if any(trace.initial):
        return False
    if not trace.steps:
        return False
    state = tuple(trace.initial)
    for step in trace.steps[:-1]:
        state = simulate_step(sys, state, step)
    return eval_bad(sys, state, trace.steps[-1])


class Witness(NamedTuple):
    """Model of a failed push: a state of L_i whose successor leaves the
    clause, certifying the clause cannot move to L_{i+1} yet."""

    state: tuple
    inputs: tuple


_REQUEST = object()  # attachment marker: push pending


class _Record:
    __slots__ = ("clause", "attach", "alive", "level", "seq")

    def __init__(self, clause: Clause, attach, level: int, seq: int):
        self.clause = clause
        self.attach = attach
        self.alive = True
        self.level = level
        self.seq = seq


class _Obligation:
    __slots__ = ("state", "cube", "index", "successor", "inputs_to_successor", "bad_inputs")

    def __init__(self, state, index, successor=None, inputs_to_successor=None, bad_inputs=None):
        self.state = tuple(state)
        self.cube = cube_of_state(self.state)
        self.index = index
        self.successor = successor
        self.inputs_to_successor = inputs_to_successor
        self.bad_inputs = bad_inputs  # set on root obligations only


@dataclass(frozen=True)
class Event:
    kind: str
    data: dict


@dataclass
class EngineConfig:
    mode: str = "triggered"          # none | iteration | triggered
    wdm: bool = False                # witness-directed minimization order
    max_frames: int = 128
    sat_step_limit: Optional[int] = None
    seed: int = 0
    verify_certificates: bool = True
    reschedule: bool = True          # False forces minimal counterexamples
    rebuild_interval: int = 0        # solver rebuild after N clause removals
    debug_checks: bool = False
    event_sink: Optional[Callable[[Event], None]] = None

    def __post_init__(self):
        if self.mode not in ("none", "iteration", "triggered"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.wdm and self.mode != "triggered":
            raise ValueError("witness-directed minimization requires mode='triggered'")
        if self.max_frames < 0:
            raise ValueError("max_frames must be non-negative")


@dataclass
class EngineStats:
    mode: str = "triggered"
    frames: int = 0
    steps_used: int = 0
    propagations: int = 0
    sat_calls: dict = field(default_factory=lambda: {
        "bad": 0, "block": 0, "minimize": 0, "push": 0, "verify": 0})
    clauses_learned: int = 0
    clauses_added: int = 0
    clauses_pushed: int = 0
    clauses_subsumed: int = 0
    clauses_skipped: int = 0
    witnesses_created: int = 0
    witnesses_killed: int = 0
    obligations_created: int = 0
    obligations_rescheduled: int = 0
    obligations_dropped: int = 0
    quiescence_points: int = 0

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in (
            "mode", "frames", "steps_used", "propagations", "clauses_learned",
            "clauses_added", "clauses_pushed", "clauses_subsumed",
            "clauses_skipped", "witnesses_created", "witnesses_killed",
            "obligations_created", "obligations_rescheduled",
            "obligations_dropped", "quiescence_points")}
        d["sat_calls"] = dict(self.sat_calls)
        d["sat_calls_total"] = sum(self.sat_calls.values())
        return d


@dataclass
class Safe:
    invariant: tuple
    stats: EngineStats

    verdict = "safe"


@dataclass
class Unsafe:
    trace: Trace
    stats: EngineStats

    verdict = "unsafe"


@dataclass
class ResourceOut:
    reason: str
    stats: EngineStats

    verdict = "unknown"


CheckOutcome = Safe | Unsafe | ResourceOut


def verify_invariant(enc: EncodedSystem, clauses, seed: int = 0):
    """Check initiation, consecution, and safety of a clause set on fresh
    solvers.  Returns ``(ok, detail, solve_count)``; ``detail`` describes the
    violated check and its model when ``ok`` is false."""
    clauses = list(clauses)
    solves = 0

    init_solver = SolverInstance(enc.var_count, seed=seed)
    for unit in enc.init_clauses:
        init_solver.add_clause(unit)
    for c in clauses:
        solves += 1
        res = init_solver.solve([l ^ 1 for l in enc.current_lits(c)])
        if res.is_sat:
            return False, f"initiation fails for {c!r}", solves

    step_solver = SolverInstance(enc.var_count, seed=seed)
    for cl in enc.trans_clauses:
        step_solver.add_clause(cl)
    for c in clauses:
        step_solver.add_clause(enc.current_lits(c))
    for c in clauses:
        solves += 1
        res = step_solver.solve(enc.prime_cube(negate_clause(c)))
        if res.is_sat:
            state = enc.state_from_model(res.model)
            return False, f"consecution fails for {c!r} from state {state}", solves

    solves += 1
    res = step_solver.solve([enc.bad_literal])
    if res.is_sat:
        state = enc.state_from_model(res.model)
        return False, f"safety fails: bad state {state} satisfies the invariant", solves
    return True, None, solves


class Engine:
    """One safety check over an encoded system.  Drive via :meth:`run`."""

    def __init__(self, enc: EncodedSystem, cfg: EngineConfig):
        self.enc = enc
        self.sys = enc.sys
        self.cfg = cfg
        self.stats = EngineStats(mode=cfg.mode + ("+wdm" if cfg.wdm else ""))
        self.init_state = (0,) * enc.n_latches
        self.frontier = 0
        self.deltas: list[list[_Record]] = [[]]
        self.requests: list[deque] = [deque()]
        self.obls: list[list[_Obligation]] = [[]]
        self.solvers: list[Optional[SolverInstance]] = []
        self._rng = random.Random(cfg.seed)
        self._seq = 0
        self._removals = 0
        self._primed_to_pos = {int(v): p for p, v in enumerate(enc.latch_primed)}
        self._ensure_level(1)

    # -- plumbing ----------------------------------------------------------

    def _emit(self, kind: str, **data):
        if self.cfg.event_sink is not None:
            self.cfg.event_sink(Event(kind, data))

    def _ensure_level(self, n: int):
        while len(self.deltas) <= n:
            self.deltas.append([])
            self.requests.append(deque())
            self.obls.append([])

    def _live(self, j: int):
        return [rec for rec in self.deltas[j] if rec.alive]

    def _live_layer(self, j: int):
        """Clauses of L_j: every live record at level >= j."""
        for m in range(j, len(self.deltas)):
            for rec in self.deltas[m]:
                if rec.alive:
                    yield rec.clause

    def _solver(self, idx: int) -> SolverInstance:
        while len(self.solvers) <= idx:
            self.solvers.append(None)
        if self.solvers[idx] is None:
            s = SolverInstance(self.enc.var_count, seed=self.cfg.seed)
            s.debug_recheck = self.cfg.debug_checks
            for cl in self.enc.trans_clauses:
                s.add_clause(cl)
            if idx == 0:
                for unit in self.enc.init_clauses:
                    s.add_clause(unit)
            for clause in self._live_layer(idx):
                s.add_clause(self.enc.current_lits(clause))
            self.solvers[idx] = s
        return self.solvers[idx]

    def _solve(self, idx: int, assumptions, kind: str) -> SatResult:
        limit = self.cfg.sat_step_limit
        budget = None
        if limit is not None:
            budget = limit - self.stats.steps_used
            if budget <= 0:
                raise _ResourceOut("sat step limit reached")
        try:
            res = self._solver(idx).solve(assumptions, step_budget=budget)
        except ResourceOutError:
            self.stats.steps_used = limit
            raise _ResourceOut("sat step limit reached")
        self.stats.sat_calls[kind] += 1
        self.stats.steps_used += res.steps
        self.stats.propagations += res.propagations
        return res

    def _maybe_rebuild(self):
        if self.cfg.rebuild_interval <= 0 or self._removals < self.cfg.rebuild_interval:
            return
        self._removals = 0
        for idx, s in enumerate(self.solvers):
            if s is not None:
                self.solvers[idx] = None
                self._solver(idx)

    # -- clause insertion with subsumption cascade -------------------------

    def _add_clause_cascade(self, clause: Clause, i: int, origin: str) -> list[int]:
        """Insert ``clause`` into delta level ``i``.

        Skips the insertion when an equal-or-higher level already subsumes
        the clause.  Otherwise removes subsumed clauses at level ``i``, kills
        covered witnesses, reschedules covered obligations, and for blocking
        insertions walks the lower levels doing the same until the clause is
        itself strictly subsumed.  Returns the levels emptied on the way.
        """
        if not any(l & 1 for l in clause.lits):
            raise InternalCheckError(f"clause {clause!r} excludes the initial state")
        self._ensure_level(i)
        for j in range(i, len(self.deltas)):
            for rec in self.deltas[j]:
                if rec.alive and subsumes(rec.clause, clause):
                    self.stats.clauses_skipped += 1
                    self._emit("clause_skipped", level=i, lits=clause.lits,
                               by=rec.clause.lits)
                    return []
        self._seq += 1
        rec = _Record(clause, _REQUEST if self.cfg.mode == "triggered" else None,
                      i, self._seq)
        self.deltas[i].append(rec)
        self.stats.clauses_added += 1
        self._emit("clause_added", level=i, lits=clause.lits, rec=rec.seq, origin=origin)
        if self.cfg.mode == "triggered":
            self.requests[i].append(rec)
            self._emit("request_created", level=i, rec=rec.seq, reason="insert")
        solver_targets = range(i + 1) if origin == "blocking" else (i,)
        for j in solver_targets:
            if j < len(self.solvers) and self.solvers[j] is not None:
                self.solvers[j].add_clause(self.enc.current_lits(clause))
        emptied: list[int] = []
        self._subsume_level(clause, rec, i, True, emptied)
        if origin == "blocking":
            for j in range(i - 1, 0, -1):
                if self._subsume_level(clause, None, j, False, emptied):
                    break
        return emptied

    def _subsume_level(self, clause: Clause, skip_rec, j: int, do_obls: bool,
                       emptied: list[int]) -> bool:
        """One level of the cascade; True means a strict subsumer stopped it."""
        removed = []
        stopper = None
        for rec in self.deltas[j]:
            if not rec.alive or rec is skip_rec:
                continue
            if rec.clause.lits == clause.lits:
                removed.append(rec)
            elif subsumes(rec.clause, clause):
                stopper = rec
            elif subsumes(clause, rec.clause):
                removed.append(rec)
        if stopper is not None:
            if removed:
                raise InternalCheckError("delta level holds comparable clauses")
            return True
        for rec in removed:
            self._remove_record(rec, "subsumed")
            self.stats.clauses_subsumed += 1
        if self.cfg.mode == "triggered":
            for rec in self.deltas[j]:
                if (rec.alive and rec is not skip_rec
                        and isinstance(rec.attach, Witness)
                        and clause_covers_state(clause, rec.attach.state)):
                    state = rec.attach.state
                    rec.attach = _REQUEST
                    self.requests[j].append(rec)
                    self.stats.witnesses_killed += 1
                    self._emit("witness_killed", level=j, rec=rec.seq,
                               lits=rec.clause.lits, state=state, by=clause.lits)
                    self._emit("request_created", level=j, rec=rec.seq, reason="trigger")
        if do_obls and self.cfg.reschedule and self.obls[j]:
            kept = []
            for ob in self.obls[j]:
                if clause_covers_state(clause, ob.state):
                    if j + 1 <= self.frontier:
                        ob.index = j + 1
                        self.obls[j + 1].append(ob)
                        self.stats.obligations_rescheduled += 1
                        self._emit("obligation_rescheduled", level=j, to=j + 1)
                    else:
                        self.stats.obligations_dropped += 1
                        self._emit("obligation_dropped", level=j)
                else:
                    kept.append(ob)
            self.obls[j] = kept
        if removed and not any(rec.alive for rec in self.deltas[j]):
            emptied.append(j)
        return False

    def _remove_record(self, rec: _Record, reason: str):
        rec.alive = False
        rec.attach = None
        self._removals += 1
        self._emit("clause_removed", level=rec.level, rec=rec.seq,
                   lits=rec.clause.lits, reason=reason)

    # -- queries ------------------------------------------------------------

    def _get_bad_state(self, k: int):
        res = self._solve(k, [self.enc.bad_literal], "bad")
        if not res.is_sat:
            return None
        state = self.enc.state_from_model(res.model)
        step = self.enc.step_from_model(res.model)
        if self.cfg.debug_checks:
            self._check_extraction(state, k)
        return state, step

    def _check_extraction(self, state, level):
        for c in self._live_layer(level):
            if clause_covers_state(c, state):
                raise InternalCheckError(
                    f"extracted state {state} violates layer {level} clause {c!r}")

    def _core_to_cube(self, used, state) -> Cube:
        lits = []
        for sl in used:
            pos = self._primed_to_pos[sl >> 1]
            lits.append((pos << 1) | (sl & 1))
        if not any((l & 1) == 0 for l in lits):
            # keep the blocking clause satisfiable in the all-zero initial
            # state: retain one positive literal of the blocked state
            for p, v in enumerate(state):
                if v:
                    lits.append(p << 1)
                    break
        return Cube(lits)

    def _wdm_order(self, cube: Cube, i: int) -> list[int]:
        self._ensure_level(i)
        witnesses = [rec.attach.state for rec in self.deltas[i]
                     if rec.alive and isinstance(rec.attach, Witness)]
        scores = {lit: 0 for lit in cube.lits}
        for w in witnesses:
            for lit in cube.lits:
                if w[lit >> 1] == (lit & 1):  # w falsifies lit
                    scores[lit] += 1
        return sorted(cube.lits, key=lambda m: (-scores[m], m))

    def _minimize_cube(self, cube: Cube, i: int) -> Cube:
        """Greedy single pass dropping literals while the block query stays
        UNSAT and the cube keeps a positive literal (stays off the initial
        state).  Each successful drop is shrunk further to the used core."""
        if self.cfg.wdm:
            order = self._wdm_order(cube, i)
        else:
            order = list(cube.lits)
            self._rng.shuffle(order)
        cur = set(cube.lits)
        for lit in order:
            if lit not in cur or len(cur) == 1:
                continue
            cand = cur - {lit}
            if not any((l & 1) == 0 for l in cand):
                continue
            res = self._solve(i - 1, self._prime_lits(cand), "minimize")
            if res.is_sat:
                continue
            core = {((self._primed_to_pos[sl >> 1] << 1) | (sl & 1)) for sl in res.used}
            if core and any((l & 1) == 0 for l in core):
                cur = core
            else:
                cur = cand
        return Cube(cur)

    def _prime_lits(self, lits) -> list[int]:
        primed = self.enc.latch_primed
        return [(int(primed[l >> 1]) << 1) | (l & 1) for l in sorted(lits)]

    # -- obligations and push requests ---------------------------------------

    def _handle_obligation(self, ob: _Obligation) -> Optional[CheckOutcome]:
        if ob.index == 0 or ob.state == self.init_state:
            return self._counterexample(ob)
        res = self._solve(ob.index - 1, self._prime_lits(ob.cube.lits), "block")
        if res.is_sat:
            pred = self.enc.state_from_model(res.model)
            inputs = self.enc.step_from_model(res.model)
            if self.cfg.debug_checks:
                self._check_extraction(pred, ob.index - 1)
                if simulate_step(self.sys, pred, inputs) != ob.state:
                    raise InternalCheckError("predecessor model does not step to its obligation")
            self.obls[ob.index].append(ob)
            child = _Obligation(pred, ob.index - 1, successor=ob,
                                inputs_to_successor=inputs)
            self.obls[ob.index - 1].append(child)
            self.stats.obligations_created += 1
            return None
        cube = self._core_to_cube(res.used, ob.state)
        cube = self._minimize_cube(cube, ob.index)
        clause = negate_cube(cube)
        self.stats.clauses_learned += 1
        emptied = self._add_clause_cascade(clause, ob.index, "blocking")
        out = self._first_convergence(emptied)
        if out is not None:
            return out
        if self.cfg.reschedule and ob.index < self.frontier:
            ob.index += 1
            self.obls[ob.index].append(ob)
            self.stats.obligations_rescheduled += 1
        return None

    def _pop_request(self, i: int) -> Optional[_Record]:
        q = self.requests[i]
        while q:
            rec = q.popleft()
            if rec.alive and rec.attach is _REQUEST:
                return rec
        return None

    def _handle_push_request(self, rec: _Record, i: int) -> Optional[CheckOutcome]:
        res = self._solve(i, self.enc.prime_cube(negate_clause(rec.clause)), "push")
        if res.is_sat:
            w = Witness(self.enc.state_from_model(res.model),
                        self.enc.step_from_model(res.model))
            rec.attach = w
            self.stats.witnesses_created += 1
            self._emit("witness_set", level=i, rec=rec.seq, lits=rec.clause.lits,
                       state=w.state, inputs=w.inputs)
            return None
        self._remove_record(rec, "pushed")
        self.stats.clauses_pushed += 1
        emptied = []
        if not any(r.alive for r in self.deltas[i]):
            emptied.append(i)
        emptied.extend(self._add_clause_cascade(rec.clause, i + 1, "push"))
        return self._first_convergence(emptied)

    # -- convergence and certificates ----------------------------------------

    def _first_convergence(self, emptied) -> Optional[CheckOutcome]:
        if self.cfg.mode == "iteration":
            return None  # detected by the propagation pass, per the two-phase loop
        for j in sorted(set(emptied)):
            if 1 <= j <= self.frontier:
                out = self._try_converge(j)
                if out is not None:
                    return out
        return None

    def _try_converge(self, j: int) -> Optional[Safe]:
        clauses = tuple(self._live_layer(j + 1))
        ok, detail, solves = verify_invariant(self.enc, clauses, seed=self.cfg.seed)
        self.stats.sat_calls["verify"] += solves
        if not ok:
            self._emit("convergence_rejected", level=j, detail=detail)
            return None
        self._emit("converged", level=j)
        if self.cfg.debug_checks:
            self._check_frontier_safety()
        return Safe(clauses, self.stats)

    def _check_frontier_safety(self):
        for m in range(self.frontier):
            if self._solver(m).solve([self.enc.bad_literal]).is_sat:
                raise InternalCheckError(f"layer {m} admits a bad state")

    def _counterexample(self, ob: _Obligation) -> Unsafe:
        steps = []
        cur = ob
        while cur.successor is not None:
            steps.append(cur.inputs_to_successor)
            if self.cfg.debug_checks:
                if simulate_step(self.sys, cur.state, cur.inputs_to_successor) != cur.successor.state:
                    raise InternalCheckError("obligation chain does not replay")
            cur = cur.successor
        steps.append(cur.bad_inputs)
        trace = Trace(tuple(ob.state), tuple(steps))
        if self.cfg.verify_certificates or self.cfg.debug_checks:
            if not replay_trace(self.sys, trace):
                raise InternalCheckError("counterexample trace failed replay")
        return Unsafe(trace, self.stats)

    # -- frontier ------------------------------------------------------------

    def _advance(self) -> Optional[CheckOutcome]:
        self.frontier += 1
        self.stats.frames = self.frontier
        self._ensure_level(self.frontier + 1)
        self._emit("frontier_advanced", frontier=self.frontier)
        for j in range(1, self.frontier + 1):
            if not any(rec.alive for rec in self.deltas[j]):
                out = self._try_converge(j)
                if out is not None:
                    return out
        if self.frontier > self.cfg.max_frames:
            raise _ResourceOut("frame limit reached")
        return None

    # -- drivers ---------------------------------------------------------------

    def _run_event_driven(self) -> CheckOutcome:
        requests_on = self.cfg.mode == "triggered"
        while True:
            acted = False
            i = 0
            while i <= self.frontier:
                if self.obls[i]:
                    out = self._handle_obligation(self.obls[i].pop())
                    if out is not None:
                        return out
                    acted = True
                    break
                if requests_on:
                    rec = self._pop_request(i)
                    if rec is not None:
                        out = self._handle_push_request(rec, i)
                        if out is not None:
                            return out
                        acted = True
                        break
                i += 1
            if acted:
                continue
            self.stats.quiescence_points += 1
            self._emit("quiescence", frontier=self.frontier)
            if self.cfg.debug_checks:
                self._check_quiescence()
            self._maybe_rebuild()
            got = self._get_bad_state(self.frontier)
            if got is not None:
                state, step = got
                self.obls[self.frontier].append(
                    _Obligation(state, self.frontier, bad_inputs=step))
                self.stats.obligations_created += 1
                continue
            out = self._advance()
            if out is not None:
                return out

    def _run_iteration(self) -> CheckOutcome:
        while True:
            while True:  # blocking phase
                got = self._get_bad_state(self.frontier)
                if got is None:
                    break
                state, step = got
                self.obls[self.frontier].append(
                    _Obligation(state, self.frontier, bad_inputs=step))
                self.stats.obligations_created += 1
                while True:
                    i = next((j for j in range(self.frontier + 1) if self.obls[j]), None)
                    if i is None:
                        break
                    out = self._handle_obligation(self.obls[i].pop())
                    if out is not None:
                        return out
            for i in range(1, self.frontier + 1):  # propagation phase
                self._ensure_level(i + 1)
                for rec in list(self.deltas[i]):
                    if not rec.alive:
                        continue
                    res = self._solve(i, self.enc.prime_cube(negate_clause(rec.clause)), "push")
                    if res.is_sat:
                        continue  # the model is discarded in this mode
                    self._remove_record(rec, "pushed")
                    self.stats.clauses_pushed += 1
                    self._add_clause_cascade(rec.clause, i + 1, "push")
                if not any(rec.alive for rec in self.deltas[i]):
                    out = self._try_converge(i)
                    if out is not None:
                        return out
            self._maybe_rebuild()
            self.frontier += 1
            self.stats.frames = self.frontier
            self._ensure_level(self.frontier + 1)
            self._emit("frontier_advanced", frontier=self.frontier)
            if self.frontier > self.cfg.max_frames:
                raise _ResourceOut("frame limit reached")

    # -- debug instrumentation --------------------------------------------------

    def _check_quiescence(self):
        top = len(self.deltas)
        for j in range(1, top):
            recs = self._live(j)
            for a in range(len(recs)):
                for b in range(len(recs)):
                    if a != b and subsumes(recs[a].clause, recs[b].clause):
                        raise InternalCheckError(
                            f"delta {j} is redundant: {recs[a].clause!r} subsumes {recs[b].clause!r}")
        for j in range(1, top):
            for m in range(j + 1, top):
                for hi in self._live(m):
                    for lo in self._live(j):
                        if subsumes(hi.clause, lo.clause):
                            raise InternalCheckError(
                                f"level {m} clause subsumes level {j} clause")
        if self.cfg.mode != "triggered":
            return
        for j in range(1, self.frontier + 1):
            for rec in self._live(j):
                if not isinstance(rec.attach, Witness):
                    raise InternalCheckError(
                        f"record at level {j} holds no witness at quiescence")
                w = rec.attach
                for c in self._live_layer(j):
                    if clause_covers_state(c, w.state):
                        raise InternalCheckError(
                            f"witness at level {j} no longer satisfies its layer")
                nxt = simulate_step(self.sys, w.state, w.inputs)
                if not clause_covers_state(rec.clause, nxt):
                    raise InternalCheckError(
                        f"witness successor does not leave {rec.clause!r}")

    # -- entry -------------------------------------------------------------------

    def run(self) -> CheckOutcome:
        try:
            if self.cfg.mode == "iteration":
                return self._run_iteration()
            return self._run_event_driven()
        except _ResourceOut as exc:
            return ResourceOut(str(exc), self.stats)


def check(enc: EncodedSystem, cfg: EngineConfig | None = None) -> CheckOutcome:
    """Run the safety check for an encoded system."""
    return Engine(enc, cfg or EngineConfig()).run()
