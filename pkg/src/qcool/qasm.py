"""OpenQASM 3 export.

Output sticks to the stdgates vocabulary: every multi-controlled NOT is a
`ctrl(k) @ x` with closed controls only, open controls being conjugated
by explicit `x` gates.  Thermal resets carry a machine-readable pragma
comment in front of the plain `reset`, since resetting to a bath
temperature (rather than to |0>) is not expressible in the language:

    // @thermal_reset q[i]
    reset q[i];

Qubit q (1-based) maps to register element q[q-1].  Export is
deterministic: equal circuits produce byte-identical text.
"""

from __future__ import annotations

from pathlib import Path

from .circuits import Circuit, McNot, ResetInstr

__all__ = ["THERMAL_RESET_PRAGMA", "export_qasm", "write_qasm"]

THERMAL_RESET_PRAGMA = "// @thermal_reset"


def _gate_lines(gate: McNot) -> list[str]:
    target = f"q[{gate.target - 1}]"
    open_controls = [f"q[{q - 1}]" for q, b in gate.controls if b == 0]
    lines = [f"x {c};" for c in open_controls]
    if gate.controls:
        operands = ", ".join(
            [f"q[{q - 1}]" for q, _ in gate.controls] + [target]
        )
        lines.append(f"ctrl({len(gate.controls)}) @ x {operands};")
    else:
        lines.append(f"x {target};")
    lines.extend(f"x {c};" for c in reversed(open_controls))
    return lines


def export_qasm(circuit: Circuit) -> str:
    lines = [
        "OPENQASM 3.0;",
        'include "stdgates.inc";',
        f"qubit[{circuit.n_qubits}] q;",
    ]
    for ins in circuit.instructions:
        if isinstance(ins, McNot):
            lines.extend(_gate_lines(ins))
        elif isinstance(ins, ResetInstr):
            for q in ins.qubits:
                lines.append(f"{THERMAL_RESET_PRAGMA} q[{q - 1}]")
                lines.append(f"reset q[{q - 1}];")
        else:
            raise TypeError(f"not an instruction: {ins!r}")
    return "\n".join(lines) + "\n"


def write_qasm(circuit: Circuit, path: str | Path) -> None:
    Path(path).write_text(export_qasm(circuit))
