"""Surface-code translation of logical resource counts.

The model has a handful of constants collected in a JSON profile:

* code distance ``d``: smallest odd value with
  ``prefactor (p / p_th)^((d+1)/2) * logical_qubits * cycles <= failure_budget``;
* Toffoli latency: ``(c0 + c1 d) * ref_factories / factories`` cycles;
* physical qubits: ``routing_overhead * logical_qubits * 2 d^2 + factories * factory_qubits_each``.

The shipped ``default`` profile was fitted once against published rows and is
frozen; ``BLOCHLCU_PROFILE_DIR`` points at an alternative profile directory.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields, replace
from importlib import resources
from pathlib import Path

PROFILE_ENV = "BLOCHLCU_PROFILE_DIR"
SECONDS_PER_DAY = 86400.0


class InfeasibleError(ValueError):
    """No code distance within the allowed range meets the failure budget."""


@dataclass(frozen=True)
class PhysicalParams:
    physical_error_rate: float = 1e-4
    threshold: float = 0.01
    prefactor: float = 0.1
    cycle_time_s: float = 1e-6
    factories: int = 4
    failure_budget: float = 1e-3
    routing_overhead: float = 1.3
    factory_qubits_each: int = 50000
    latency_cycles_const: float = 2.0
    latency_cycles_per_distance: float = 0.85
    latency_reference_factories: int = 4
    max_distance: int = 51
    name: str = "custom"
    version: int = 1

    def __post_init__(self):
        if not 0 < self.physical_error_rate < self.threshold:
            raise ValueError(
                f"need 0 < p < p_th, got p={self.physical_error_rate}, p_th={self.threshold}"
            )
        if not self.cycle_time_s > 0:
            raise ValueError("cycle time must be positive")
        if self.factories < 1:
            raise ValueError("need at least one factory")
        if not self.failure_budget > 0:
            raise ValueError("failure budget must be positive")

    def latency_cycles(self, distance: int) -> float:
        base = self.latency_cycles_const + self.latency_cycles_per_distance * distance
        return base * self.latency_reference_factories / self.factories

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class PhysicalReport:
    code_distance: int
    physical_qubits: int
    runtime_days: float
    runtime_seconds: float
    logical_error: float

    def as_dict(self) -> dict:
        return asdict(self)


def profile_dir() -> Path:
    env = os.environ.get(PROFILE_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("blochlcu") / "profiles"))


def load_profile(path: str | os.PathLike | None = None) -> PhysicalParams:
    """Read a profile by file path, or ``default.json`` from :func:`profile_dir`.

    Unknown keys are rejected so that typos do not silently fall back to defaults.
    """
    p = Path(path) if path is not None else profile_dir() / "default.json"
    data = json.loads(p.read_text())
    known = {f.name for f in fields(PhysicalParams)}
    extra = set(data) - known - {"description"}
    if extra:
        raise ValueError(f"unknown profile keys in {p}: {sorted(extra)}")
    data.pop("description", None)
    return PhysicalParams(**data)


def logical_error(P: PhysicalParams, distance: int, logical_qubits: int, cycles: float) -> float:
    ratio = P.physical_error_rate / P.threshold
    return P.prefactor * ratio ** ((distance + 1) / 2) * logical_qubits * cycles


def estimate_physical(toffolis: int, logical_qubits: int, P: PhysicalParams | None = None) -> PhysicalReport:
    """Code distance, physical qubit count and runtime for a logical workload.

    Raises:
        ValueError: non-positive inputs.
        InfeasibleError: the budget is not met at ``P.max_distance``.
    """
    P = load_profile() if P is None else P
    toffolis, logical_qubits = int(toffolis), int(logical_qubits)
    if toffolis < 1 or logical_qubits < 1:
        raise ValueError(f"need toffolis >= 1 and logical_qubits >= 1, got {toffolis}, {logical_qubits}")
    for d in range(3, P.max_distance + 1, 2):
        cycles = toffolis * P.latency_cycles(d)
        err = logical_error(P, d, logical_qubits, cycles)
        if err <= P.failure_budget:
            break
    else:
        raise InfeasibleError(
            f"no odd code distance <= {P.max_distance} meets budget {P.failure_budget:g}"
        )
    qubits = P.routing_overhead * logical_qubits * 2 * d * d + P.factories * P.factory_qubits_each
    seconds = cycles * P.cycle_time_s
    return PhysicalReport(d, int(round(qubits)), seconds / SECONDS_PER_DAY, seconds, err)


def with_overrides(P: PhysicalParams, **kw) -> PhysicalParams:
    return replace(P, **{k: v for k, v in kw.items() if v is not None})
