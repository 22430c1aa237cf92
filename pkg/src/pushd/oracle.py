"""Ground-truth reachability by explicit breadth-first search.

States are packed into integers (bit ``p`` = latch ``p``); every input
valuation is enumerated at every dequeued state, so reported counterexamples
have minimal length.  Intended for differential testing against the engine
on small circuits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._jit import kernel
from .aiger import TransitionSystem
from .engine import Trace


@dataclass(frozen=True)
class OracleSafe:
    reachable_count: int


@dataclass(frozen=True)
class OracleUnsafe:
    trace: Trace


@dataclass(frozen=True)
class OracleTooLarge:
    reason: str


OracleResult = OracleSafe | OracleUnsafe | OracleTooLarge


@kernel
def _bfs(gate_out, gate_a, gate_b, latch_next, latch_vars, input_vars,
         bad_lit, n_latches, n_inputs, values, visited, parent, parent_in, queue):
    visited[0] = 1
    parent[0] = -1
    queue[0] = 0
    head = 0
    tail = 1
    reach = 1
    n_gates = gate_out.shape[0]
    while head < tail:
        s = queue[head]
        head += 1
        for inp in range(1 << n_inputs):
            values[0] = 0
            for q in range(n_inputs):
                values[input_vars[q]] = (inp >> q) & 1
            for p in range(n_latches):
                values[latch_vars[p]] = (s >> p) & 1
            for g in range(n_gates):
                a = gate_a[g]
                b = gate_b[g]
                va = values[a >> 1] ^ (a & 1)
                vb = values[b >> 1] ^ (b & 1)
                values[gate_out[g]] = va & vb
            if values[bad_lit >> 1] ^ (bad_lit & 1):
                return 1, s, inp, reach
            ns = 0
            for p in range(n_latches):
                nl = latch_next[p]
                if values[nl >> 1] ^ (nl & 1):
                    ns |= 1 << p
            if visited[ns] == 0:
                visited[ns] = 1
                parent[ns] = s
                parent_in[ns] = inp
                queue[tail] = ns
                tail += 1
                reach += 1
    return 0, -1, -1, reach


def _unpack(packed: int, width: int) -> tuple:
    return tuple((packed >> i) & 1 for i in range(width))


def bfs_check(sys: TransitionSystem, max_latches: int = 20, max_inputs: int = 8) -> OracleResult:
    """Explore from the all-zero state; minimal counterexample or Safe."""
    n_l, n_i = sys.n_latches, sys.n_inputs
    if n_l > max_latches:
        return OracleTooLarge(f"{n_l} latches exceeds the bound {max_latches}")
    if n_i > max_inputs:
        return OracleTooLarge(f"{n_i} inputs exceeds the bound {max_inputs}")

    n_states = 1 << n_l
    gate_out = np.array([o >> 1 for o, _, _ in sys.gates], dtype=np.int32)
    gate_a = np.array([a for _, a, _ in sys.gates], dtype=np.int32)
    gate_b = np.array([b for _, _, b in sys.gates], dtype=np.int32)
    values = np.zeros(sys.max_var + 1, dtype=np.uint8)
    visited = np.zeros(n_states, dtype=np.uint8)
    parent = np.full(n_states, -1, dtype=np.int64)
    parent_in = np.full(n_states, -1, dtype=np.int64)
    queue = np.zeros(n_states, dtype=np.int64)

    found, bad_state, bad_inp, reach = _bfs(
        gate_out, gate_a, gate_b, sys._latch_next, sys._latch_vars,
        sys._input_vars, sys.bad, n_l, n_i, values, visited, parent,
        parent_in, queue)
    if not found:
        return OracleSafe(int(reach))

    steps = [_unpack(int(bad_inp), n_i)]
    s = int(bad_state)
    while parent[s] >= 0:
        steps.append(_unpack(int(parent_in[s]), n_i))
        s = int(parent[s])
    steps.reverse()
    return OracleUnsafe(Trace(initial=(0,) * n_l, steps=tuple(steps)))
