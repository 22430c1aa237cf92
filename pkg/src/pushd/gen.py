"""Circuit and CNF generators for tests and benchmarks.

The builder allocates variables in creation order (inputs and latches before
the gates that use them), so built circuits always satisfy the topological
ordering the parser enforces.
"""

from __future__ import annotations

import random
from pathlib import Path

from .aiger import TransitionSystem, write_aag

TRUE = 1
FALSE = 0


class CircuitBuilder:
    """Incremental and-inverter circuit construction."""

    def __init__(self):
        self._next_var = 1
        self._inputs: list[int] = []
        self._latches: list[int] = []
        self._next_of: dict[int, int] = {}
        self._gates: list[tuple[int, int, int]] = []

    def _alloc(self) -> int:
        lit = 2 * self._next_var
        self._next_var += 1
        return lit

    def new_input(self) -> int:
        lit = self._alloc()
        self._inputs.append(lit)
        return lit

    def new_latch(self) -> int:
        lit = self._alloc()
        self._latches.append(lit)
        return lit

    def set_next(self, latch: int, nxt: int):
        self._next_of[latch] = nxt

    def and_(self, a: int, b: int) -> int:
        out = self._alloc()
        self._gates.append((out, a, b))
        return out

    def not_(self, a: int) -> int:
        return a ^ 1

    def or_(self, a: int, b: int) -> int:
        return self.and_(a ^ 1, b ^ 1) ^ 1

    def xor_(self, a: int, b: int) -> int:
        return self.or_(self.and_(a, b ^ 1), self.and_(a ^ 1, b))

    def build(self, bad: int) -> TransitionSystem:
        missing = [l for l in self._latches if l not in self._next_of]
        if missing:
            raise ValueError(f"latches without next-state function: {missing}")
        return TransitionSystem(
            self._next_var - 1,
            self._inputs,
            [(l, self._next_of[l]) for l in self._latches],
            bad,
            self._gates,
        )


def _counter(bits: int, bad_at_max: bool = True, enable: bool = False) -> TransitionSystem:
    """Binary up-counter; bad fires at the all-ones count."""
    b = CircuitBuilder()
    en = b.new_input() if enable else TRUE
    latches = [b.new_latch() for _ in range(bits)]
    carry = en
    for l in latches:
        b.set_next(l, b.xor_(l, carry))
        carry = b.and_(carry, l)
    allset = TRUE
    for l in latches:
        allset = b.and_(allset, l)
    return b.build(allset if bad_at_max else FALSE)


def _shift_register(depth: int, bad_lit_of=None) -> TransitionSystem:
    b = CircuitBuilder()
    i = b.new_input()
    latches = [b.new_latch() for _ in range(depth)]
    src = i
    for l in latches:
        b.set_next(l, src)
        src = l
    bad = bad_lit_of(b, latches) if bad_lit_of else latches[-1]
    return b.build(bad)


def handcrafted_systems() -> list[tuple[str, TransitionSystem]]:
    """Small named systems with known verdicts, for corpus and CLI tests."""
    systems = []

    b = CircuitBuilder()
    l = b.new_latch()
    b.set_next(l, l ^ 1)
    systems.append(("toggle_unsafe", b.build(l)))  # next(l) = ~l, bad = l

    b = CircuitBuilder()
    i = b.new_input()
    l = b.new_latch()
    b.set_next(l, b.and_(l, i))
    systems.append(("gated_latch_safe", b.build(l)))  # next(l) = l & i

    b = CircuitBuilder()
    l = b.new_latch()
    b.set_next(l, l)
    systems.append(("const_false_safe", b.build(FALSE)))

    b = CircuitBuilder()
    l = b.new_latch()
    b.set_next(l, l)
    systems.append(("const_true_unsafe", b.build(TRUE)))

    systems.append(("counter2_unsafe", _counter(2)))
    systems.append(("counter3_unsafe", _counter(3)))
    systems.append(("counter2_enable_unsafe", _counter(2, enable=True)))
    systems.append(("counter3_enable_unsafe", _counter(3, enable=True)))

    systems.append(("shift3_unsafe", _shift_register(3)))
    systems.append(("shift3_tail_unsafe", _shift_register(
        3, lambda b, ls: b.and_(ls[-1], ls[0] ^ 1))))

    # two swapped latches stay at 00 forever
    b = CircuitBuilder()
    a = b.new_latch()
    c = b.new_latch()
    b.set_next(a, c)
    b.set_next(c, a)
    systems.append(("swap_safe", b.build(b.and_(a, c))))

    # parity of two toggling latches is invariant
    b = CircuitBuilder()
    i = b.new_input()
    a = b.new_latch()
    c = b.new_latch()
    b.set_next(a, b.xor_(a, i))
    b.set_next(c, b.xor_(c, i))
    systems.append(("parity_safe", b.build(b.xor_(a, c))))

    # sticky gated latches: each can only ever fall back to 0
    b = CircuitBuilder()
    i0 = b.new_input()
    i1 = b.new_input()
    a = b.new_latch()
    c = b.new_latch()
    b.set_next(a, b.and_(a, i0))
    b.set_next(c, b.and_(c, i1))
    systems.append(("sticky_pair_safe", b.build(b.and_(a, c))))

    # a counter that wraps before reaching the bad pattern
    b = CircuitBuilder()
    l0 = b.new_latch()
    l1 = b.new_latch()
    # counts 00 -> 01 -> 10 -> 00 ... ; 11 is unreachable
    b.set_next(l0, b.and_(l0 ^ 1, l1 ^ 1))
    b.set_next(l1, l0)
    systems.append(("mod3_counter_safe", b.build(b.and_(l0, l1))))

    return systems


def random_system(seed: int, max_latches: int = 8, max_inputs: int = 4,
                  max_gates: int = 40) -> TransitionSystem:
    """Random and-inverter circuit with a randomly chosen bad signal.

    The structure is tuned to give a usable mix of safe and unsafe systems
    at the default sizes.
    """
    rng = random.Random(seed)
    b = CircuitBuilder()
    n_inputs = rng.randint(0, max_inputs)
    n_latches = rng.randint(1, max_latches)
    n_gates = rng.randint(1, max_gates)

    inputs = [b.new_input() for _ in range(n_inputs)]
    latches = [b.new_latch() for _ in range(n_latches)]
    pool = [TRUE] + inputs + latches

    def pick() -> int:
        return rng.choice(pool) ^ rng.randint(0, 1)

    gates = []
    for _ in range(n_gates):
        g = b.and_(pick(), pick())
        gates.append(g)
        pool.append(g)

    for l in latches:
        b.set_next(l, pick())

    # bias the bad signal toward conjunctions of state bits so that a decent
    # fraction of instances is safe
    candidates = gates + latches if gates else latches
    bad = rng.choice(candidates)
    r = rng.random()
    if r < 0.45:
        width = rng.randint(2, max(2, min(4, n_latches + len(gates))))
        terms = rng.sample(latches + gates, min(width, len(latches) + len(gates)))
        acc = TRUE
        for t in terms:
            acc = b.and_(acc, t ^ rng.randint(0, 1))
        bad = acc
    elif r < 0.55:
        bad = bad ^ 1
    return b.build(bad)


def random_cnf(seed: int, max_vars: int = 30):
    """Random small CNF: (n_vars, clauses, assumptions) with literal codes.

    Variable counts are skewed small so a brute-force enumeration oracle
    stays cheap; the largest instances use clause ratios in the almost-surely
    satisfiable regime.
    """
    rng = random.Random(seed)
    r = rng.random()
    if r < 0.80:
        n = rng.randint(2, 12)
        ratio = rng.uniform(1.0, 7.0)
    elif r < 0.92:
        n = rng.randint(13, 16)
        ratio = rng.uniform(2.0, 6.0)
    else:
        n = rng.randint(17, max_vars)
        ratio = rng.uniform(1.5, 3.0)
    m = max(1, int(n * ratio))
    clauses = []
    for _ in range(m):
        width = rng.choice((1, 2, 3, 3, 3, 3))
        vs = rng.sample(range(n), min(width, n))
        clauses.append(tuple(2 * v + rng.randint(0, 1) for v in vs))
    assumptions = []
    if rng.random() < 0.35:
        for v in rng.sample(range(n), min(rng.randint(1, 4), n)):
            assumptions.append(2 * v + rng.randint(0, 1))
    return n, clauses, assumptions


def write_corpus(directory, systems) -> list[Path]:
    """Write (name, system) pairs as .aag files; returns the paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, sys_ in systems:
        p = directory / f"{name}.aag"
        p.write_text(write_aag(sys_))
        paths.append(p)
    return paths
