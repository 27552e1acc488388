"""Diagonal-state simulation of cooling circuits.

Every state here is the diagonal of a density matrix in the computational
basis, held as a length-2**n probability vector (sum 1, entries >= 0).
NOT-gate circuits, depolarizing noise, and thermal resets all map
diagonals to diagonals, so nothing else needs to be tracked.

Noise model: after a gate (or a layer of non-overlapping gates), each
touched qubit subset is depolarized with probability p, meaning the state
of those qubits is replaced by the uniform mixture:

    v' = (1 - p) v + p (marginal over untouched) x (uniform on touched)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .circuits import Circuit, McNot, ResetInstr

__all__ = [
    "NoiseModel",
    "apply_mcnot",
    "depolarize",
    "marginal",
    "reset_qubits",
    "simulate",
    "validate_prob_vector",
]


def _register_size(v: np.ndarray) -> int:
    dim = v.size
    if dim < 2 or dim & (dim - 1):
        raise ValueError(f"vector length {dim} is not a power of two")
    return dim.bit_length() - 1


def validate_prob_vector(v: np.ndarray, *, atol: float = 1e-12) -> None:
    """Raise unless v is nonnegative and sums to 1 within atol."""
    v = np.asarray(v)
    _register_size(v)
    if np.any(v < 0.0):
        raise ValueError("probability vector has a negative entry")
    total = float(v.sum())
    if abs(total - 1.0) > atol:
        raise ValueError(f"probability vector sums to {total}, not 1")


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing strength and where it strikes.

    per-gate: every NOT gate depolarizes exactly the qubits it touches.
    per-layer: gates are packed greedily (in program order) into layers
    of disjoint support; each layer depolarizes the union of its touched
    qubits once.  Resets close the open layer and carry no noise.
    """

    probability: float
    placement: Literal["per-gate", "per-layer"] = "per-gate"

    def __post_init__(self) -> None:
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError("noise probability must lie in [0, 1]")
        if self.placement not in ("per-gate", "per-layer"):
            raise ValueError(f"unknown placement {self.placement!r}")


def apply_mcnot(v: np.ndarray, gate: McNot) -> np.ndarray:
    """Pushforward of the diagonal under one multi-controlled NOT.

    Swaps the probabilities of every basis-state pair related by the
    gate, leaves the rest alone.
    """
    v = np.asarray(v)
    n = _register_size(v)
    if max(gate.touched) > n:
        raise ValueError(f"gate touches qubit {max(gate.touched)} of {n}")
    idx = np.arange(v.size)
    sel = np.ones(v.size, dtype=bool)
    for q, pol in gate.controls:
        sel &= ((idx >> (n - q)) & 1) == pol
    tmask = 1 << (n - gate.target)
    lo = idx[sel & ((idx & tmask) == 0)]
    hi = lo | tmask
    out = v.copy()
    out[lo] = v[hi]
    out[hi] = v[lo]
    return out


def depolarize(v: np.ndarray, qubits: Sequence[int], probability: float) -> np.ndarray:
    """Mix the listed qubits toward uniform with the given probability."""
    if not 0.0 <= probability <= 1.0:
        raise ValueError("noise probability must lie in [0, 1]")
    v = np.asarray(v, dtype=np.float64)
    n = _register_size(v)
    qs = sorted(set(int(q) for q in qubits))
    if not qs or qs[0] < 1 or qs[-1] > n:
        raise ValueError(f"qubits {qubits!r} invalid for {n}-qubit register")
    if probability == 0.0:
        return v.copy()
    t = v.reshape((2,) * n)
    axes = tuple(q - 1 for q in qs)
    uniform = t.mean(axis=axes, keepdims=True)
    return ((1.0 - probability) * t + probability * uniform).ravel()


def reset_qubits(v: np.ndarray, qubits: Sequence[int], bath_excitation: float) -> np.ndarray:
    """Trace out the listed qubits and retensor them at the bath excitation."""
    if not 0.0 <= bath_excitation <= 0.5:
        raise ValueError("bath excitation must lie in [0, 1/2]")
    v = np.asarray(v, dtype=np.float64)
    n = _register_size(v)
    qs = sorted(set(int(q) for q in qubits))
    if not qs or qs[0] < 1 or qs[-1] > n:
        raise ValueError(f"qubits {qubits!r} invalid for {n}-qubit register")
    t = v.reshape((2,) * n)
    kept = t.sum(axis=tuple(q - 1 for q in qs), keepdims=True)
    fresh = np.array([1.0 - bath_excitation, bath_excitation])
    for q in qs:
        shape = [1] * n
        shape[q - 1] = 2
        kept = kept * fresh.reshape(shape)
    return kept.ravel()


def marginal(v: np.ndarray, qubit: int = 1) -> float:
    """Probability that the given qubit reads 1."""
    v = np.asarray(v)
    n = _register_size(v)
    if not 1 <= qubit <= n:
        raise ValueError(f"qubit {qubit} outside 1..{n}")
    idx = np.arange(v.size)
    return float(v[((idx >> (n - qubit)) & 1) == 1].sum())


def simulate(
    circuit: Circuit,
    v0: np.ndarray,
    *,
    noise: NoiseModel | None = None,
    bath_excitation: float = 0.0,
) -> np.ndarray:
    """Run a circuit on a diagonal state; returns the final vector.

    Resets retensor their qubits at bath_excitation.  Noise (if any)
    strikes per gate or per layer according to the model.
    """
    v = np.array(v0, dtype=np.float64)
    n = _register_size(v)
    if circuit.n_qubits != n:
        raise ValueError(
            f"circuit width {circuit.n_qubits} does not match vector ({n} qubits)"
        )
    p = noise.probability if noise is not None else 0.0
    per_layer = noise is not None and noise.placement == "per-layer"
    layer: set[int] = set()

    def close_layer() -> None:
        nonlocal v
        if layer:
            v = depolarize(v, sorted(layer), p)
            layer.clear()

    for ins in circuit.instructions:
        if isinstance(ins, McNot):
            if per_layer and layer.intersection(ins.touched):
                close_layer()
            v = apply_mcnot(v, ins)
            if p > 0.0:
                if per_layer:
                    layer.update(ins.touched)
                else:
                    v = depolarize(v, ins.touched, p)
        elif isinstance(ins, ResetInstr):
            close_layer()
            v = reset_qubits(v, ins.qubits, bath_excitation)
        else:
            raise TypeError(f"not an instruction: {ins!r}")
    close_layer()
    return v
