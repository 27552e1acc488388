"""Independent oracles shared by the test modules.

Everything here recomputes expected behavior from first principles with
deliberately different machinery than the package (per-basis-state bit
arithmetic, explicit enumeration), so agreement is meaningful.
"""

from __future__ import annotations

import itertools
import math
import re

import numpy as np

from qcool.circuits import Circuit, McNot, ResetInstr


def apply_mcnot_int(state: int, target: int, controls, n: int) -> int:
    """Bit-level action of one multi-controlled NOT on a basis state."""
    for q, pol in controls:
        if ((state >> (n - q)) & 1) != pol:
            return state
    return state ^ (1 << (n - target))


def circuit_permutation(circuit: Circuit) -> list[int]:
    """Forward permutation realized by a reset-free circuit."""
    n = circuit.n_qubits
    out = []
    for s in range(1 << n):
        cur = s
        for gate in circuit.instructions:
            assert isinstance(gate, McNot), "oracle handles pure NOT circuits"
            cur = apply_mcnot_int(cur, gate.target, gate.controls, n)
        out.append(cur)
    return out


def sorted_half_sum(v: np.ndarray) -> float:
    """Target excitation after any maximal cooling of the diagonal v."""
    return float(np.sort(np.asarray(v))[: v.size // 2].sum())


def state_energy(state: int) -> int:
    return bin(state).count("1")


def work_of_permutation(perm, v: np.ndarray) -> float:
    """Energy gained by the register when v is pushed through perm."""
    after = np.zeros_like(v)
    for src, dst in enumerate(perm):
        after[dst] += v[src]
    return float(
        sum(state_energy(j) * (after[j] - v[j]) for j in range(len(v)))
    )


def pairing_work_values(n: int, p: float) -> list[float]:
    """Work of every transposition pairing of must-move states.

    Maximal cooling forces the light states sitting in the target-1 half
    to trade places with the heavy states sitting in the target-0 half.
    Each bijection between the two forced sets, realized as plain
    transpositions, is one way to reach maximal cooling; this enumerates
    them all.
    """
    dim = 1 << n
    half = dim >> 1
    w = [state_energy(j) for j in range(dim)]
    order = sorted(range(dim), key=lambda j: (w[j], j))
    top = set(order[:half])
    move_down = sorted(s for s in top if s >= half)
    move_up = sorted(s for s in range(half) if s not in top)
    assert len(move_down) == len(move_up)
    v = np.ones(1)
    for _ in range(n):
        v = np.kron(v, np.array([1.0 - p, p]))
    works = []
    for assignment in itertools.permutations(move_up):
        perm = list(range(dim))
        for a, b in zip(move_down, assignment):
            perm[a], perm[b] = perm[b], perm[a]
        works.append(work_of_permutation(perm, v))
    return works


# -- strict OpenQASM 3 checker ---------------------------------------------

_HEADER = ("OPENQASM 3.0;", 'include "stdgates.inc";')
_QUBIT_RE = re.compile(r"^qubit\[(\d+)\] q;$")
_X_RE = re.compile(r"^x q\[(\d+)\];$")
_CTRL_RE = re.compile(r"^ctrl\((\d+)\) @ x ((?:q\[\d+\], )*q\[\d+\]);$")
_PRAGMA_RE = re.compile(r"^// @thermal_reset q\[(\d+)\]$")
_RESET_RE = re.compile(r"^reset q\[(\d+)\];$")
_OPERAND_RE = re.compile(r"q\[(\d+)\]")


class QasmSyntaxError(AssertionError):
    pass


def _tokenize(text: str) -> tuple[int, list[tuple]]:
    lines = text.splitlines()
    if text and not text.endswith("\n"):
        raise QasmSyntaxError("missing trailing newline")
    if len(lines) < 3 or (lines[0], lines[1]) != _HEADER:
        raise QasmSyntaxError("bad header")
    m = _QUBIT_RE.match(lines[2])
    if not m:
        raise QasmSyntaxError(f"bad qubit declaration: {lines[2]!r}")
    n = int(m.group(1))
    items: list[tuple] = []
    for line in lines[3:]:
        if m := _X_RE.match(line):
            items.append(("x", int(m.group(1))))
        elif m := _CTRL_RE.match(line):
            k = int(m.group(1))
            ops = [int(q) for q in _OPERAND_RE.findall(m.group(2))]
            if len(ops) != k + 1:
                raise QasmSyntaxError(f"ctrl({k}) with {len(ops)} operands")
            if len(set(ops)) != len(ops):
                raise QasmSyntaxError("repeated operand")
            items.append(("ctrl", ops[:-1], ops[-1]))
        elif m := _PRAGMA_RE.match(line):
            items.append(("pragma", int(m.group(1))))
        elif m := _RESET_RE.match(line):
            items.append(("reset", int(m.group(1))))
        else:
            raise QasmSyntaxError(f"unrecognized statement: {line!r}")
    for item in items:
        qubits = (
            item[1] + [item[2]] if item[0] == "ctrl" else [item[1]]
        )
        if any(not 0 <= q < n for q in qubits):
            raise QasmSyntaxError(f"operand outside register: {item}")
    return n, items


def parse_qasm(text: str) -> Circuit:
    """Reparse exported text into an equivalent circuit.

    Runs of `x` immediately around a `ctrl` that hit its control qubits
    are folded back into open controls.  (An explicit x-conjugated closed
    control and an open control are the same operation, so this recovers
    the action exactly.)  Every reset must carry its pragma line.
    """
    n, items = _tokenize(text)
    instrs: list = []
    i = 0
    while i < len(items):
        kind = items[i][0]
        if kind == "ctrl":
            _, controls, target = items[i]
            instrs.append(
                McNot(target + 1, tuple((c + 1, 1) for c in controls))
            )
            i += 1
        elif kind == "x":
            j = i
            while j < len(items) and items[j][0] == "x":
                j += 1
            run = [items[k][1] for k in range(i, j)]
            conj: list[int] = []
            if j < len(items) and items[j][0] == "ctrl":
                _, controls, target = items[j]
                # longest suffix of the run mirrored after the ctrl
                k = 0
                while (
                    k < len(run)
                    and j + 1 + k < len(items)
                    and items[j + 1 + k][0] == "x"
                    and items[j + 1 + k][1] == run[len(run) - 1 - k]
                    and run[len(run) - 1 - k] in controls
                ):
                    k += 1
                conj = run[len(run) - k :]
                for q in run[: len(run) - k]:
                    instrs.append(McNot(q + 1))
                polarity = {c: 0 if c in conj else 1 for c in controls}
                instrs.append(
                    McNot(
                        target + 1,
                        tuple((c + 1, polarity[c]) for c in controls),
                    )
                )
                i = j + 1 + k
            else:
                for q in run:
                    instrs.append(McNot(q + 1))
                i = j
        elif kind == "pragma":
            q = items[i][1]
            if i + 1 >= len(items) or items[i + 1] != ("reset", q):
                raise QasmSyntaxError("pragma without matching reset")
            instrs.append(ResetInstr((q + 1,)))
            i += 2
        elif kind == "reset":
            raise QasmSyntaxError("reset without thermal pragma")
        else:
            raise QasmSyntaxError(f"unhandled item {items[i]!r}")
    return Circuit(n, tuple(instrs))


def count_ctrl_statements(text: str) -> int:
    _, items = _tokenize(text)
    return sum(1 for item in items if item[0] == "ctrl")
