"""Cooling methods: dynamic, sub-optimal dynamic, heat-bath, semi-open.

Each method describes how cooling unitaries are arranged around a
register so that qubit 1 (the global target) ends cold:

  dynamic      one maximal-cooling unitary over all n qubits;
  suboptimal   n**r qubits cooled in r rounds of n-qubit clusters, the
               cluster targets of one round feeding the next;
  hbac         one n-qubit cluster, recooled for r rounds with designated
               qubits reset to the bath between rounds;
  semiopen     fresh auxiliaries every round, the partly-cooled target
               recooled against them with a temperature-aware unitary.

Closed-form populations avoid subtracting nearly-equal numbers: the final
ground-state deficit is always accumulated as a sum of the smallest joint
probabilities, which stays accurate deep into the low-temperature regime.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Sequence, Union

import jsonschema
import numpy as np

from . import sim
from .circuits import Circuit, GateCounts, ResetInstr, embed, gate_counts
from .constants import DEFAULT_QUBIT_CAP
from .errors import ConfigError, ResourceLimitError
from .protocols import (
    BUILTIN_PROTOCOLS,
    heterogeneous_max_cooling,
    protocol_unitary,
)
from .synth import synthesize_circuit
from .thermo import (
    EnergyGap,
    Temperature,
    ThermalSpec,
    probability_from_temperature,
    temperature_from_probability,
    thermal_product_vector,
)
from .unitary import CoolingUnitary

__all__ = [
    "CoolingReport",
    "CustomProtocol",
    "Dynamic",
    "HBAC",
    "MethodConfig",
    "SemiOpen",
    "SubOptimal",
    "build_circuit",
    "config_from_json",
    "dynamic_final_p",
    "final_probability",
    "hbac_final_p",
    "method_label",
    "report",
    "semi_open_final_p",
    "sub_optimal_final_p",
    "total_qubits",
    "total_work_cost",
    "work_cost",
]


@dataclass(frozen=True)
class CustomProtocol:
    """User-supplied cycle list standing in for a built-in protocol."""

    cycles: tuple[tuple[Union[int, str], ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "cycles", tuple(tuple(c) for c in self.cycles)
        )


ProtocolChoice = Union[str, CustomProtocol]


def _check_protocol(choice: ProtocolChoice) -> None:
    if isinstance(choice, CustomProtocol):
        return
    if choice not in BUILTIN_PROTOCOLS:
        raise ConfigError(
            f"unknown protocol {choice!r}; expected one of "
            f"{BUILTIN_PROTOCOLS} or a CustomProtocol"
        )


def _resolve_protocol(choice: ProtocolChoice, n_qubits: int) -> CoolingUnitary:
    if isinstance(choice, CustomProtocol):
        return CoolingUnitary(n_qubits, choice.cycles)
    return protocol_unitary(choice, n_qubits)


@dataclass(frozen=True)
class Dynamic:
    """Single-shot cooling of qubit 1 across the whole register."""

    n_qubits: int
    protocol: ProtocolChoice = "minimal-work"

    def __post_init__(self) -> None:
        if self.n_qubits < 2:
            raise ConfigError("dynamic cooling needs at least 2 qubits")
        _check_protocol(self.protocol)


@dataclass(frozen=True)
class SubOptimal:
    """Clustered dynamic cooling: n**r qubits in r rounds of n-clusters."""

    cluster_size: int
    rounds: int
    protocol: ProtocolChoice = "minimal-work"

    def __post_init__(self) -> None:
        if self.cluster_size < 2:
            raise ConfigError("cluster size must be >= 2")
        if self.rounds < 1:
            raise ConfigError("rounds must be >= 1")
        _check_protocol(self.protocol)


@dataclass(frozen=True)
class HBAC:
    """Heat-bath cooling: one cluster, reset chosen qubits between rounds.

    reset_qubits defaults to every auxiliary (2..n).  Resetting the
    target is permitted but pointless, so it draws a warning.
    """

    cluster_size: int
    rounds: int
    reset_qubits: tuple[int, ...] = ()
    protocol: ProtocolChoice = "minimal-work"

    def __post_init__(self) -> None:
        if self.cluster_size < 2:
            raise ConfigError("cluster size must be >= 2")
        if self.rounds < 1:
            raise ConfigError("rounds must be >= 1")
        _check_protocol(self.protocol)
        qs = tuple(sorted(int(q) for q in self.reset_qubits))
        if not qs:
            qs = tuple(range(2, self.cluster_size + 1))
        object.__setattr__(self, "reset_qubits", qs)
        if len(set(qs)) != len(qs):
            raise ConfigError("duplicate reset qubit")
        if qs[0] < 1 or qs[-1] > self.cluster_size:
            raise ConfigError(
                f"reset qubits {qs} outside 1..{self.cluster_size}"
            )
        if 1 in qs:
            warnings.warn(
                "resetting the target qubit discards its cooling",
                stacklevel=2,
            )


@dataclass(frozen=True)
class SemiOpen:
    """Fresh auxiliaries every round; total width 1 + sum(n_i - 1)."""

    cluster_sizes: tuple[int, ...]
    protocol: ProtocolChoice = "minimal-work"

    def __post_init__(self) -> None:
        sizes = tuple(int(n) for n in self.cluster_sizes)
        object.__setattr__(self, "cluster_sizes", sizes)
        if not sizes:
            raise ConfigError("at least one round required")
        if any(n < 2 for n in sizes):
            raise ConfigError("every cluster must have >= 2 qubits")
        _check_protocol(self.protocol)


MethodConfig = Union[Dynamic, SubOptimal, HBAC, SemiOpen]


def total_qubits(config: MethodConfig) -> int:
    """Physical register width the method occupies."""
    if isinstance(config, Dynamic):
        return config.n_qubits
    if isinstance(config, SubOptimal):
        return config.cluster_size**config.rounds
    if isinstance(config, HBAC):
        return config.cluster_size
    if isinstance(config, SemiOpen):
        return 1 + sum(n - 1 for n in config.cluster_sizes)
    raise TypeError(f"not a method config: {config!r}")


def method_label(config: MethodConfig) -> str:
    """Short deterministic identifier used in result rows."""
    proto = (
        "custom" if isinstance(config.protocol, CustomProtocol) else config.protocol
    )
    if isinstance(config, Dynamic):
        base = f"dynamic-n{config.n_qubits}"
    elif isinstance(config, SubOptimal):
        base = f"suboptimal-n{config.cluster_size}-r{config.rounds}"
    elif isinstance(config, HBAC):
        base = f"hbac-n{config.cluster_size}-r{config.rounds}"
        default = tuple(range(2, config.cluster_size + 1))
        if config.reset_qubits != default:
            base += "-reset" + "+".join(str(q) for q in config.reset_qubits)
    elif isinstance(config, SemiOpen):
        base = "semiopen-" + "+".join(str(n) for n in config.cluster_sizes)
    else:
        raise TypeError(f"not a method config: {config!r}")
    return f"{base}-{proto}"


def _check_cap(n: int, cap: int = DEFAULT_QUBIT_CAP) -> None:
    if n > cap:
        raise ResourceLimitError(
            f"register of {n} qubits exceeds the cap of {cap}"
        )


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p < 0.5 or math.isnan(p):
        raise ValueError(f"excitation probability {p} outside [0, 1/2)")
    return p


# -- closed forms ---------------------------------------------------------


def dynamic_final_p(p: float, n_qubits: int) -> float:
    """Target excitation after maximal cooling of n homogeneous qubits.

    Equals the total probability of the 2**(n-1) least likely basis
    states: the binomial tail above excitation number n/2, plus half of
    the middle class when n is even.  Terms are added smallest first.
    """
    p = _check_p(p)
    n = int(n_qubits)
    if n < 1:
        raise ValueError("n_qubits must be >= 1")
    q = 1.0 - p
    acc = 0.0
    for w in range(n, n // 2, -1):
        acc += math.comb(n, w) * p**w * q ** (n - w)
    if n % 2 == 0:
        acc += (math.comb(n, n // 2) // 2) * p ** (n // 2) * q ** (n // 2)
    return acc


def sub_optimal_final_p(p: float, cluster_size: int, rounds: int) -> float:
    """Iterate the n-qubit dynamic map r times."""
    p = _check_p(p)
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    t = p
    for _ in range(rounds):
        t = dynamic_final_p(t, cluster_size)
    return t


def _hetero_round_final_p(t: float, p: float, n_qubits: int) -> float:
    # Maximal cooling of a (t, p, ..., p) register leaves the target with
    # the summed probability of the smallest half of the joint diagonal.
    spec = ThermalSpec((t,) + (p,) * (n_qubits - 1))
    v = thermal_product_vector(spec)
    half = np.sort(v, kind="stable")[: v.size // 2]
    return math.fsum(half)


def semi_open_final_p(p: float, cluster_sizes: Sequence[int]) -> float:
    """Target excitation after successive rounds on fresh auxiliaries."""
    p = _check_p(p)
    sizes = [int(n) for n in cluster_sizes]
    if not sizes or any(n < 1 for n in sizes):
        raise ValueError("cluster sizes must be positive")
    t = dynamic_final_p(p, sizes[0])
    for n in sizes[1:]:
        t = _hetero_round_final_p(t, p, n)
    return t


def hbac_final_p(
    p: float,
    cluster_size: int,
    rounds: int,
    *,
    reset_qubits: Sequence[int] | None = None,
    protocol: ProtocolChoice = "minimal-work",
    rederive_each_round: bool = False,
) -> float:
    """Target excitation after r heat-bath rounds.

    The round-1 cooling permutation is reapplied every round.  With
    rederive_each_round the permutation is instead recomputed each round
    as a stable descending sort of the current diagonal (and the protocol
    argument is ignored); circuits built for this method always use the
    fixed permutation.
    """
    p = _check_p(p)
    n = int(cluster_size)
    if n < 2:
        raise ValueError("cluster size must be >= 2")
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    _check_cap(n)
    if reset_qubits is None:
        reset = tuple(range(2, n + 1))
    else:
        reset = tuple(sorted(int(q) for q in reset_qubits))
        if not reset or reset[0] < 1 or reset[-1] > n:
            raise ValueError(f"reset qubits {reset} outside 1..{n}")
    v = thermal_product_vector(p, n)
    unitary = None if rederive_each_round else _resolve_protocol(protocol, n)
    for k in range(rounds):
        if k:
            v = sim.reset_qubits(v, reset, p)
        if rederive_each_round:
            order = np.argsort(-v, kind="stable")
            perm = np.empty(v.size, dtype=np.int64)
            perm[order] = np.arange(v.size)
            unitary = CoolingUnitary.from_permutation(perm)
        v = unitary.apply_to_prob_vector(v)
    return sim.marginal(v, 1)


# -- work accounting ------------------------------------------------------


def work_cost(
    unitary: CoolingUnitary,
    state: np.ndarray | ThermalSpec,
    gap: EnergyGap = EnergyGap.unit(),
) -> float:
    """Energy change of the register under the permutation.

    Basis state j carries energy gap * excitationNumber(j); the work is
    the expected energy after minus before.  Positive for any cooling of
    a thermal state, exactly 0 for the identity.
    """
    if isinstance(state, ThermalSpec):
        state = thermal_product_vector(state)
    v = np.asarray(state, dtype=np.float64)
    if v.shape != (unitary.dim,):
        raise ValueError(
            f"state length {v.size} does not match {unitary.dim} basis states"
        )
    after = unitary.apply_to_prob_vector(v)
    weights = np.bitwise_count(
        np.arange(unitary.dim, dtype=np.uint32)
    ).astype(np.float64)
    return float(gap.value * np.dot(weights, after - v))


def _semi_open_rounds(
    config: SemiOpen, p: float
) -> list[tuple[ThermalSpec, CoolingUnitary]]:
    out = []
    t = p
    for i, n in enumerate(config.cluster_sizes):
        spec = ThermalSpec((t,) + (p,) * (n - 1))
        if i == 0:
            u = _resolve_protocol(config.protocol, n)
        else:
            u = heterogeneous_max_cooling(spec)
        out.append((spec, u))
        t = sim.marginal(
            u.apply_to_prob_vector(thermal_product_vector(spec)), 1
        )
    return out


def final_probability(config: MethodConfig, p: float) -> float:
    """Target excitation the method reaches from a homogeneous bath at p."""
    p = _check_p(p)
    _check_cap(total_qubits(config))
    custom = isinstance(config.protocol, CustomProtocol)
    if isinstance(config, Dynamic):
        if custom:
            u = _resolve_protocol(config.protocol, config.n_qubits)
            v = thermal_product_vector(p, config.n_qubits)
            return sim.marginal(u.apply_to_prob_vector(v), 1)
        return dynamic_final_p(p, config.n_qubits)
    if isinstance(config, SubOptimal):
        if custom:
            u = _resolve_protocol(config.protocol, config.cluster_size)
            t = p
            for _ in range(config.rounds):
                v = thermal_product_vector(t, config.cluster_size)
                t = sim.marginal(u.apply_to_prob_vector(v), 1)
            return t
        return sub_optimal_final_p(p, config.cluster_size, config.rounds)
    if isinstance(config, HBAC):
        return hbac_final_p(
            p,
            config.cluster_size,
            config.rounds,
            reset_qubits=config.reset_qubits,
            protocol=config.protocol,
        )
    if isinstance(config, SemiOpen):
        if custom:
            rounds = _semi_open_rounds(config, p)
            spec, u = rounds[0]
            t = sim.marginal(
                u.apply_to_prob_vector(thermal_product_vector(spec)), 1
            )
            for n in config.cluster_sizes[1:]:
                t = _hetero_round_final_p(t, p, n)
            return t
        return semi_open_final_p(p, config.cluster_sizes)
    raise TypeError(f"not a method config: {config!r}")


def total_work_cost(
    config: MethodConfig, p: float, gap: EnergyGap = EnergyGap.unit()
) -> float:
    """Work drawn over every unitary the method applies.

    Resets exchange heat with the bath, not work, so they contribute
    nothing.  Parallel cluster copies in one round each pay the same
    cost, hence the n**(r-1-k) multiplicity for clustered rounds.
    """
    p = _check_p(p)
    _check_cap(total_qubits(config))
    if isinstance(config, Dynamic):
        u = _resolve_protocol(config.protocol, config.n_qubits)
        return work_cost(u, thermal_product_vector(p, config.n_qubits), gap)
    if isinstance(config, SubOptimal):
        n, r = config.cluster_size, config.rounds
        u = _resolve_protocol(config.protocol, n)
        t = p
        total = 0.0
        for k in range(r):
            v = thermal_product_vector(t, n)
            total += n ** (r - 1 - k) * work_cost(u, v, gap)
            t = sim.marginal(u.apply_to_prob_vector(v), 1)
        return total
    if isinstance(config, HBAC):
        n = config.cluster_size
        u = _resolve_protocol(config.protocol, n)
        v = thermal_product_vector(p, n)
        total = 0.0
        for k in range(config.rounds):
            if k:
                v = sim.reset_qubits(v, config.reset_qubits, p)
            total += work_cost(u, v, gap)
            v = u.apply_to_prob_vector(v)
        return total
    if isinstance(config, SemiOpen):
        total = 0.0
        for spec, u in _semi_open_rounds(config, p):
            total += work_cost(u, thermal_product_vector(spec), gap)
        return total
    raise TypeError(f"not a method config: {config!r}")


# -- circuits -------------------------------------------------------------


def build_circuit(config: MethodConfig, initial_p: float | None = None) -> Circuit:
    """Full register-wide circuit realizing the method.

    Semi-open rounds after the first depend on how cold the target
    already is, so initial_p is required for multi-round semi-open
    configs and ignored elsewhere.
    """
    width = total_qubits(config)
    _check_cap(width)
    if isinstance(config, Dynamic):
        return synthesize_circuit(_resolve_protocol(config.protocol, config.n_qubits))
    if isinstance(config, SubOptimal):
        n = config.cluster_size
        base = synthesize_circuit(_resolve_protocol(config.protocol, n))
        survivors = list(range(1, width + 1))
        instructions: list = []
        for _ in range(config.rounds):
            next_survivors = []
            for i in range(0, len(survivors), n):
                chunk = survivors[i : i + n]
                instructions.extend(embed(base, width, chunk).instructions)
                next_survivors.append(chunk[0])
            survivors = next_survivors
        return Circuit(width, tuple(instructions))
    if isinstance(config, HBAC):
        base = synthesize_circuit(
            _resolve_protocol(config.protocol, config.cluster_size)
        )
        instructions = list(base.instructions)
        for _ in range(config.rounds - 1):
            instructions.append(ResetInstr(config.reset_qubits))
            instructions.extend(base.instructions)
        return Circuit(width, tuple(instructions))
    if isinstance(config, SemiOpen):
        if initial_p is None:
            if len(config.cluster_sizes) > 1:
                raise ConfigError(
                    "semi-open circuits need initial_p: later rounds "
                    "depend on the reached temperature"
                )
            initial_p = 0.0
        rounds = _semi_open_rounds(config, _check_p(initial_p))
        instructions = []
        next_free = 2
        for (spec, u), n in zip(rounds, config.cluster_sizes):
            members = [1] + list(range(next_free, next_free + n - 1))
            next_free += n - 1
            instructions.extend(
                embed(synthesize_circuit(u), width, members).instructions
            )
        return Circuit(width, tuple(instructions))
    raise TypeError(f"not a method config: {config!r}")


# -- reporting ------------------------------------------------------------


@dataclass(frozen=True)
class CoolingReport:
    method: str
    total_qubits: int
    initial_excitation: float
    final_excitation: float
    work_in_gap_units: float
    work_joules: float | None
    initial_temperature: Temperature | None
    final_temperature: Temperature | None
    gate_counts: GateCounts
    circuit: Circuit | None


def report(
    config: MethodConfig,
    *,
    initial_p: float | None = None,
    temperature: Temperature | None = None,
    gap: EnergyGap | None = None,
    include_circuit: bool = True,
) -> CoolingReport:
    """Analyze a method end to end.

    Give either initial_p directly, or a Temperature plus a physical
    EnergyGap.  Temperatures are reported only when the gap is physical.
    """
    if initial_p is None:
        if temperature is None or gap is None:
            raise ValueError(
                "need initial_p, or temperature together with a gap"
            )
        initial_p = probability_from_temperature(temperature, gap)
    elif temperature is not None:
        raise ValueError("give initial_p or temperature, not both")
    initial_p = _check_p(initial_p)
    work_gap = gap if gap is not None else EnergyGap.unit()
    final_p = final_probability(config, initial_p)
    work_units = total_work_cost(config, initial_p, EnergyGap.unit())
    physical = gap is not None and not gap.dimensionless
    circuit = build_circuit(config, initial_p) if include_circuit else None
    counts = gate_counts(circuit) if circuit is not None else gate_counts(
        build_circuit(config, initial_p)
    )
    return CoolingReport(
        method=method_label(config),
        total_qubits=total_qubits(config),
        initial_excitation=initial_p,
        final_excitation=final_p,
        work_in_gap_units=work_units,
        work_joules=work_units * gap.value if physical else None,
        initial_temperature=(
            temperature_from_probability(initial_p, gap) if physical else None
        ),
        final_temperature=(
            temperature_from_probability(final_p, gap) if physical else None
        ),
        gate_counts=counts,
        circuit=circuit,
    )


# -- configuration documents ----------------------------------------------


@lru_cache(maxsize=1)
def _method_schema() -> dict:
    text = resources.files("qcool.schemas").joinpath(
        "method_config.schema.json"
    ).read_text()
    return json.loads(text)


def config_from_json(source: str | Path | dict) -> MethodConfig:
    """Parse and validate a method-config document.

    Raises ConfigError on any structural or semantic problem.
    """
    if isinstance(source, (str, Path)):
        try:
            doc = json.loads(Path(source).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
    else:
        doc = source
    try:
        jsonschema.validate(doc, _method_schema())
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"invalid config: {exc.message}") from exc
    protocol: ProtocolChoice = doc.get("protocol", "minimal-work")
    if protocol == "custom":
        protocol = CustomProtocol(tuple(tuple(c) for c in doc["cycles"]))
    method = doc["method"]
    if method == "dynamic":
        return Dynamic(doc["n_qubits"], protocol)
    if method == "suboptimal":
        return SubOptimal(doc["cluster_size"], doc["rounds"], protocol)
    if method == "hbac":
        return HBAC(
            doc["cluster_size"],
            doc["rounds"],
            tuple(doc.get("reset_qubits", ())),
            protocol,
        )
    if method == "semiopen":
        return SemiOpen(tuple(doc["cluster_sizes"]), protocol)
    raise ConfigError(f"unknown method {method!r}")
