"""CDCL search kernels over flat int32 arrays.

The solver state lives in numpy arrays owned by ``sat.SolverInstance``; the
functions here mutate them in place.  Everything is written to compile under
numba's nopython mode (see ``_jit.kernel``) while running unchanged as plain
Python when the JIT is disabled.

Arena layout: slots ``[0, 2*nvars)`` are the per-literal watch-list heads;
clauses live above that as ``[size, next0, next1, lit0, lit1, ...]`` where
``lit0``/``lit1`` are the watched literals and ``next0``/``next1`` chain the
respective watch lists.  ``-1`` terminates a list.

Assignments: ``assigns[v]`` is 0 (false), 1 (true) or 2 (unassigned).
Decision level ``d >= 1`` owns trail entries ``trail[trail_lim[d]:...]``.
"""

import numpy as np

from ._jit import kernel

# search() status codes
SAT = 1
UNSAT = 0
GROW = 2
BUDGET = 3

# int64 solver-state slots
ST_TRAIL = 0        # trail size
ST_QHEAD = 1        # propagation head
ST_DLEVEL = 2       # current decision level
ST_TOP = 3          # arena allocation point
ST_HEAP = 4         # order-heap size
ST_PENDING = 5      # 1 = learnt clause waiting for arena space
ST_PENDING_BT = 6
ST_PENDING_LEN = 7
ST_CORE = 8         # used-assumption count after an UNSAT answer
ST_FROZEN = 9       # 1 = empty clause derived, permanently unsat
ST_RESTART = 10     # restarts performed so far
ST_CONFL_CUR = 11   # conflicts since the last restart

# int64 counter slots (cumulative per solver)
C_PROPS = 0
C_DECISIONS = 1
C_CONFLICTS = 2

RESTART_BASE = 64
VAR_DECAY_INV = 1.0 / 0.95


@kernel
def _heap_less(activity, a, b):
    # Max-heap order with deterministic index tie-break.
    if activity[a] != activity[b]:
        return activity[a] > activity[b]
    return a < b


@kernel
def _heap_sift_up(heap, hpos, activity, i):
    v = heap[i]
    while i > 0:
        p = (i - 1) >> 1
        if _heap_less(activity, v, heap[p]):
            heap[i] = heap[p]
            hpos[heap[p]] = i
            i = p
        else:
            break
    heap[i] = v
    hpos[v] = i


@kernel
def _heap_sift_down(heap, hpos, activity, i, size):
    v = heap[i]
    while True:
        c = 2 * i + 1
        if c >= size:
            break
        if c + 1 < size and _heap_less(activity, heap[c + 1], heap[c]):
            c += 1
        if _heap_less(activity, heap[c], v):
            heap[i] = heap[c]
            hpos[heap[c]] = i
            i = c
        else:
            break
    heap[i] = v
    hpos[v] = i


@kernel
def _heap_insert(heap, hpos, activity, st, v):
    if hpos[v] >= 0:
        return
    i = st[ST_HEAP]
    heap[i] = v
    hpos[v] = i
    st[ST_HEAP] = i + 1
    _heap_sift_up(heap, hpos, activity, i)


@kernel
def _heap_pop(heap, hpos, activity, st):
    v = heap[0]
    hpos[v] = -1
    n = st[ST_HEAP] - 1
    st[ST_HEAP] = n
    if n > 0:
        heap[0] = heap[n]
        hpos[heap[0]] = 0
        _heap_sift_down(heap, hpos, activity, 0, n)
    return v


@kernel
def _bump(activity, heap, hpos, stf, v):
    act = activity[v] + stf[0]
    activity[v] = act
    if act > 1e100:
        for u in range(activity.shape[0]):
            activity[u] *= 1e-100
        stf[0] *= 1e-100
    if hpos[v] >= 0:
        _heap_sift_up(heap, hpos, activity, hpos[v])


@kernel
def _enqueue(assigns, vlevel, reason, trail, st, lit, why):
    v = lit >> 1
    assigns[v] = (lit & 1) ^ 1
    vlevel[v] = st[ST_DLEVEL]
    reason[v] = why
    trail[st[ST_TRAIL]] = lit
    st[ST_TRAIL] += 1


@kernel
def _new_level(trail_lim, st):
    st[ST_DLEVEL] += 1
    trail_lim[st[ST_DLEVEL]] = st[ST_TRAIL]


@kernel
def _cancel_until(assigns, reason, trail, trail_lim, heap, hpos, activity, st, level):
    if st[ST_DLEVEL] <= level:
        return
    target = trail_lim[level + 1]
    i = st[ST_TRAIL] - 1
    while i >= target:
        v = trail[i] >> 1
        assigns[v] = 2
        reason[v] = -1
        _heap_insert(heap, hpos, activity, st, v)
        i -= 1
    st[ST_TRAIL] = target
    st[ST_QHEAD] = target
    st[ST_DLEVEL] = level


@kernel
def _install_clause(arena, st, lits, n):
    base = st[ST_TOP]
    arena[base] = n
    for k in range(n):
        arena[base + 3 + k] = lits[k]
    l0 = lits[0]
    l1 = lits[1]
    arena[base + 1] = arena[l0]
    arena[l0] = base
    arena[base + 2] = arena[l1]
    arena[l1] = base
    st[ST_TOP] = base + 3 + n
    return base


@kernel
def _propagate(arena, assigns, vlevel, reason, trail, st, counters):
    while st[ST_QHEAD] < st[ST_TRAIL]:
        p = trail[st[ST_QHEAD]]
        st[ST_QHEAD] += 1
        counters[C_PROPS] += 1
        fl = p ^ 1  # this literal just became false
        addr = fl   # arena slot holding the next link of the current list node
        cur = arena[addr]
        while cur != -1:
            base = cur
            l0 = arena[base + 3]
            if l0 == fl:
                slot = base + 1
                other = arena[base + 4]
            else:
                slot = base + 2
                other = l0
            nxt = arena[slot]
            vo = assigns[other >> 1]
            if vo != 2 and (vo ^ (other & 1)) == 1:
                addr = slot
                cur = nxt
                continue
            size = arena[base]
            found = -1
            for k in range(2, size):
                cand = arena[base + 3 + k]
                vc = assigns[cand >> 1]
                if vc == 2 or (vc ^ (cand & 1)) == 1:
                    found = k
                    break
            if found >= 0:
                cand = arena[base + 3 + found]
                if l0 == fl:
                    arena[base + 3] = cand
                else:
                    arena[base + 4] = cand
                arena[base + 3 + found] = fl
                arena[addr] = nxt          # unlink from fl's watch list
                arena[slot] = arena[cand]  # push onto cand's watch list
                arena[cand] = base
                cur = nxt
                continue
            if vo != 2:
                # other is false too: conflict
                st[ST_QHEAD] = st[ST_TRAIL]
                return base
            # clause is unit: imply other
            v = other >> 1
            assigns[v] = (other & 1) ^ 1
            vlevel[v] = st[ST_DLEVEL]
            reason[v] = base
            trail[st[ST_TRAIL]] = other
            st[ST_TRAIL] += 1
            addr = slot
            cur = nxt
    return -1


@kernel
def _analyze(arena, assigns, vlevel, reason, trail, seen, activity, heap, hpos, stf, st, learnt, confl):
    """First-UIP conflict analysis; returns (learnt length, backtrack level).

    ``learnt[0]`` is the asserting literal, ``learnt[1]`` the literal of the
    backtrack level (the second watch).
    """
    pathc = 0
    idx = st[ST_TRAIL] - 1
    n = 1
    dlevel = st[ST_DLEVEL]
    c = confl
    skip = -1
    while True:
        size = arena[c]
        for k in range(size):
            q = arena[c + 3 + k]
            if q == skip:
                continue
            v = q >> 1
            if seen[v] == 0 and vlevel[v] > 0:
                seen[v] = 1
                _bump(activity, heap, hpos, stf, v)
                if vlevel[v] >= dlevel:
                    pathc += 1
                else:
                    learnt[n] = q
                    n += 1
        while seen[trail[idx] >> 1] == 0:
            idx -= 1
        p = trail[idx]
        idx -= 1
        seen[p >> 1] = 0
        pathc -= 1
        if pathc <= 0:
            break
        c = reason[p >> 1]
        skip = p
    learnt[0] = p ^ 1
    for k in range(1, n):
        seen[learnt[k] >> 1] = 0
    if n == 1:
        return n, 0
    mi = 1
    for k in range(2, n):
        if vlevel[learnt[k] >> 1] > vlevel[learnt[mi] >> 1]:
            mi = k
    tmp = learnt[1]
    learnt[1] = learnt[mi]
    learnt[mi] = tmp
    return n, vlevel[learnt[1] >> 1]


@kernel
def _analyze_final(arena, vlevel, reason, trail, trail_lim, seen, st, core, p):
    """Assumptions responsible for the falsified assumption literal ``p``."""
    core[0] = p
    n = 1
    if st[ST_DLEVEL] == 0:
        return n
    seen[p >> 1] = 1
    lo = trail_lim[1]
    i = st[ST_TRAIL] - 1
    while i >= lo:
        v = trail[i] >> 1
        if seen[v] == 1:
            r = reason[v]
            if r == -1:
                # a decision below the assumption prefix is an assumption
                core[n] = trail[i]
                n += 1
            else:
                size = arena[r]
                for k in range(size):
                    q = arena[r + 3 + k]
                    if vlevel[q >> 1] > 0:
                        seen[q >> 1] = 1
            seen[v] = 0
        i -= 1
    seen[p >> 1] = 0
    return n


@kernel
def _luby(i):
    # Luby restart sequence, 0-based index: 1 1 2 1 1 2 4 ...
    size = 1
    seq = 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


@kernel
def _search(arena, assigns, vlevel, reason, trail, trail_lim, seen, activity,
            heap, hpos, learnt, core, assumps, st, stf, counters, budget):
    if st[ST_FROZEN] == 1:
        st[ST_CORE] = 0
        return UNSAT
    start_steps = counters[C_DECISIONS] + counters[C_CONFLICTS]
    if st[ST_PENDING] == 1:
        # arena was grown while a learnt clause was waiting; install it now
        n = st[ST_PENDING_LEN]
        _cancel_until(assigns, reason, trail, trail_lim, heap, hpos, activity,
                      st, st[ST_PENDING_BT])
        base = _install_clause(arena, st, learnt, n)
        _enqueue(assigns, vlevel, reason, trail, st, learnt[0], base)
        st[ST_PENDING] = 0
    while True:
        confl = _propagate(arena, assigns, vlevel, reason, trail, st, counters)
        if confl >= 0:
            counters[C_CONFLICTS] += 1
            st[ST_CONFL_CUR] += 1
            if st[ST_DLEVEL] == 0:
                st[ST_FROZEN] = 1
                st[ST_CORE] = 0
                return UNSAT
            n, bt = _analyze(arena, assigns, vlevel, reason, trail, seen,
                             activity, heap, hpos, stf, st, learnt, confl)
            stf[0] *= VAR_DECAY_INV
            if counters[C_DECISIONS] + counters[C_CONFLICTS] - start_steps >= budget:
                _cancel_until(assigns, reason, trail, trail_lim, heap, hpos,
                              activity, st, 0)
                return BUDGET
            if n == 1:
                _cancel_until(assigns, reason, trail, trail_lim, heap, hpos,
                              activity, st, 0)
                _enqueue(assigns, vlevel, reason, trail, st, learnt[0], -1)
            else:
                if st[ST_TOP] + 3 + n > arena.shape[0]:
                    st[ST_PENDING] = 1
                    st[ST_PENDING_BT] = bt
                    st[ST_PENDING_LEN] = n
                    return GROW
                _cancel_until(assigns, reason, trail, trail_lim, heap, hpos,
                              activity, st, bt)
                base = _install_clause(arena, st, learnt, n)
                _enqueue(assigns, vlevel, reason, trail, st, learnt[0], base)
            if st[ST_CONFL_CUR] >= RESTART_BASE * _luby(st[ST_RESTART]):
                st[ST_RESTART] += 1
                st[ST_CONFL_CUR] = 0
                _cancel_until(assigns, reason, trail, trail_lim, heap, hpos,
                              activity, st, 0)
        else:
            nxt = -1
            while st[ST_DLEVEL] < assumps.shape[0]:
                p = assumps[st[ST_DLEVEL]]
                vp = assigns[p >> 1]
                if vp == 2:
                    nxt = p
                    break
                if (vp ^ (p & 1)) == 1:
                    _new_level(trail_lim, st)  # already satisfied: dummy level
                else:
                    st[ST_CORE] = _analyze_final(arena, vlevel, reason, trail,
                                                 trail_lim, seen, st, core, p)
                    _cancel_until(assigns, reason, trail, trail_lim, heap,
                                  hpos, activity, st, 0)
                    return UNSAT
            if nxt == -1:
                v = -1
                while st[ST_HEAP] > 0:
                    cand = _heap_pop(heap, hpos, activity, st)
                    if assigns[cand] == 2:
                        v = cand
                        break
                if v == -1:
                    return SAT
                counters[C_DECISIONS] += 1
                if counters[C_DECISIONS] + counters[C_CONFLICTS] - start_steps >= budget:
                    _heap_insert(heap, hpos, activity, st, v)
                    _cancel_until(assigns, reason, trail, trail_lim, heap,
                                  hpos, activity, st, 0)
                    return BUDGET
                nxt = (v << 1) | 1  # default phase: false
            _new_level(trail_lim, st)
            _enqueue(assigns, vlevel, reason, trail, st, nxt, -1)


@kernel
def _backtrack_root(assigns, reason, trail, trail_lim, heap, hpos, activity, st):
    _cancel_until(assigns, reason, trail, trail_lim, heap, hpos, activity, st, 0)
