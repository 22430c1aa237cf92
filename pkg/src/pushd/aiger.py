"""ASCII AIGER circuits: parsing, validation, writing, and simulation.

Supports the classic ``aag`` header (``M I L O A``) where a single output is
treated as the bad signal, plus the format-1.9 ``B`` extension with explicit
bad-property lines.  Latches must be zero-initialized; constraint, justice,
and fairness sections are rejected.
"""

from __future__ import annotations

import numpy as np

from .logic import State


class AigerError(ValueError):
    """Malformed circuit text or an ill-formed circuit description."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TransitionSystem:
    """Immutable and-inverter circuit with latches and one tracked bad signal.

    Latches all reset to 0.  Gates are topologically ordered: a gate's output
    variable is strictly greater than both operand variables, so a single
    forward sweep evaluates the whole netlist.
    """

    __slots__ = (
        "max_var",
        "inputs",
        "latches",
        "bad",
        "gates",
        "_input_vars",
        "_latch_vars",
        "_latch_next",
        "_gate_arr",
    )

    def __init__(self, max_var, inputs, latches, bad, gates):
        inputs = tuple(inputs)
        latches = tuple((int(l), int(n)) for l, n in latches)
        gates = tuple((int(o), int(a), int(b)) for o, a, b in gates)

        top = 2 * max_var + 1
        defined = {0}
        for lit in inputs:
            self._check_def(lit, top, defined, "input")
        for lit, nxt in latches:
            self._check_def(lit, top, defined, "latch")
            if not 0 <= nxt <= top:
                raise AigerError(f"next-state literal {nxt} out of range")
        for out, a, b in gates:
            self._check_def(out, top, defined, "gate output")
            for op in (a, b):
                if not 0 <= op <= top:
                    raise AigerError(f"gate operand {op} out of range")
                if op >> 1 >= out >> 1:
                    raise AigerError(
                        f"gate {out} not topologically ordered (operand {op})"
                    )
        if not 0 <= bad <= top:
            raise AigerError(f"bad literal {bad} out of range")
        for lit in [n for _, n in latches] + [bad] + [op for _, a, b in gates for op in (a, b)]:
            if lit >> 1 and lit >> 1 not in defined:
                raise AigerError(f"variable {lit >> 1} used but never defined")

        self.max_var = int(max_var)
        self.inputs = inputs
        self.latches = latches
        self.bad = int(bad)
        self.gates = gates
        self._input_vars = np.array([l >> 1 for l in inputs], dtype=np.int32)
        self._latch_vars = np.array([l >> 1 for l, _ in latches], dtype=np.int32)
        self._latch_next = np.array([n for _, n in latches], dtype=np.int32)
        self._gate_arr = np.array(gates, dtype=np.int32).reshape(len(gates), 3)

    @staticmethod
    def _check_def(lit, top, defined, what):
        if lit & 1 or lit < 2:
            raise AigerError(f"{what} literal {lit} must be an even literal >= 2")
        if lit > top:
            raise AigerError(f"{what} literal {lit} out of range")
        var = lit >> 1
        if var in defined:
            raise AigerError(f"variable {var} defined twice")
        defined.add(var)

    @property
    def n_inputs(self) -> int:
        return len(self.inputs)

    @property
    def n_latches(self) -> int:
        return len(self.latches)

    @property
    def n_gates(self) -> int:
        return len(self.gates)

    def initial_state(self) -> tuple:
        return (0,) * len(self.latches)

    def eval_values(self, state: State, step: State) -> np.ndarray:
        """Value of every variable in the combinational frame (state, step)."""
        if len(state) != self.n_latches:
            raise ValueError("state is not total over the latches")
        if len(step) != self.n_inputs:
            raise ValueError("step is not total over the inputs")
        values = np.zeros(self.max_var + 1, dtype=np.uint8)
        values[self._input_vars] = step
        values[self._latch_vars] = state
        for out, a, b in self._gate_arr:
            values[out >> 1] = (values[a >> 1] ^ (a & 1)) & (values[b >> 1] ^ (b & 1))
        return values


def lit_value(values: np.ndarray, lit: int) -> int:
    return int(values[lit >> 1]) ^ (lit & 1)


def simulate_step(sys: TransitionSystem, state: State, step: State) -> tuple:
    """Next latch assignment after one clock step under the given inputs."""
    values = sys.eval_values(state, step)
    return tuple(lit_value(values, n) for n in sys._latch_next)


def eval_bad(sys: TransitionSystem, state: State, step: State) -> bool:
    """Value of the bad signal in the combinational frame (state, step)."""
    return bool(lit_value(sys.eval_values(state, step), sys.bad))


def parse_aag(text: str, property_index: int = 0) -> TransitionSystem:
    """Parse an ASCII AIGER circuit and select the tracked bad signal.

    With ``B`` bad-property lines present those define the properties;
    otherwise the plain outputs do.  ``property_index`` picks among them.
    """
    lines = text.splitlines()
    pos = 0

    def take(what: str) -> tuple[str, int]:
        nonlocal pos
        if pos >= len(lines):
            raise AigerError(f"unexpected end of file, expected {what}", len(lines))
        pos += 1
        return lines[pos - 1], pos

    def ints(raw: str, lineno: int, what: str, count_min: int, count_max: int) -> list[int]:
        toks = raw.split()
        if not count_min <= len(toks) <= count_max:
            raise AigerError(f"expected {what}", lineno)
        out = []
        for t in toks:
            if not t.isdigit():
                raise AigerError(f"malformed number {t!r} in {what}", lineno)
            out.append(int(t))
        return out

    raw, lineno = take("header")
    toks = raw.split()
    if not toks or toks[0] != "aag":
        raise AigerError("header must start with 'aag'", lineno)
    counts = ints(" ".join(toks[1:]), lineno, "header counts 'M I L O A [B C J F]'", 5, 9)
    counts += [0] * (9 - len(counts))
    m, i, l, o, a, b, c, j, f = counts
    if c or j or f:
        raise AigerError("constraint/justice/fairness sections are not supported", lineno)

    top = 2 * m + 1

    def check_lit(lit: int, lineno: int) -> int:
        if lit > top:
            raise AigerError(f"literal {lit} exceeds 2*M+1 = {top}", lineno)
        return lit

    defined: dict[int, int] = {}

    def define(lit: int, lineno: int, what: str):
        if lit & 1 or lit < 2:
            raise AigerError(f"{what} literal {lit} must be an even literal >= 2", lineno)
        var = check_lit(lit, lineno) >> 1
        if var in defined:
            raise AigerError(f"variable {var} already defined on line {defined[var]}", lineno)
        defined[var] = lineno

    inputs = []
    for _ in range(i):
        raw, lineno = take("input definition")
        (lit,) = ints(raw, lineno, "one input literal", 1, 1)
        define(lit, lineno, "input")
        inputs.append(lit)

    latches = []
    for _ in range(l):
        raw, lineno = take("latch definition")
        vals = ints(raw, lineno, "latch literal and next-state literal", 2, 3)
        define(vals[0], lineno, "latch")
        check_lit(vals[1], lineno)
        if len(vals) == 3 and vals[2] != 0:
            raise AigerError("only zero-initialized latches are supported", lineno)
        latches.append((vals[0], vals[1]))

    outputs = []
    for _ in range(o):
        raw, lineno = take("output literal")
        (lit,) = ints(raw, lineno, "one output literal", 1, 1)
        outputs.append(check_lit(lit, lineno))

    bads = []
    for _ in range(b):
        raw, lineno = take("bad-property literal")
        (lit,) = ints(raw, lineno, "one bad literal", 1, 1)
        bads.append(check_lit(lit, lineno))

    gates = []
    for _ in range(a):
        raw, lineno = take("and-gate definition")
        out, op_a, op_b = ints(raw, lineno, "and gate 'out a b'", 3, 3)
        define(out, lineno, "gate output")
        check_lit(op_a, lineno)
        check_lit(op_b, lineno)
        gates.append((out, op_a, op_b))

    # Trailing symbol table, then optional comment section from a 'c' line on.
    while pos < len(lines):
        raw, lineno = take("symbol or comment")
        if raw == "c":
            break
        toks = raw.split(None, 1)
        if toks and toks[0][:1] in ("i", "l", "o", "b") and toks[0][1:].isdigit():
            continue
        if raw.strip() == "":
            continue
        raise AigerError(f"unexpected content {raw!r}", lineno)

    properties = bads if b else outputs
    if not properties:
        raise AigerError("circuit declares no output or bad property", 1)
    if not 0 <= property_index < len(properties):
        raise AigerError(
            f"property index {property_index} out of range (have {len(properties)})"
        )

    try:
        return TransitionSystem(m, inputs, latches, properties[property_index], gates)
    except AigerError:
        raise
    except ValueError as exc:  # pragma: no cover - constructor re-validation
        raise AigerError(str(exc)) from exc


def write_aag(sys: TransitionSystem, bad_section: bool = True) -> str:
    """Serialize back to ASCII AIGER (1.9 ``b`` line, or a plain output)."""
    out = []
    o, b = (0, 1) if bad_section else (1, 0)
    out.append(f"aag {sys.max_var} {sys.n_inputs} {sys.n_latches} {o} {sys.n_gates}"
               + (f" {b}" if bad_section else ""))
    out.extend(str(lit) for lit in sys.inputs)
    out.extend(f"{lit} {nxt}" for lit, nxt in sys.latches)
    out.append(str(sys.bad))
    out.extend(f"{g} {a_} {b_}" for g, a_, b_ in sys.gates)
    return "\n".join(out) + "\n"
