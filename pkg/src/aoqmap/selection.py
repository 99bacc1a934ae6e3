"""Noise-aware layout scoring, best-layout selection, and postselection."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .circuits import Circuit, decompose_to_basis
from .hamiltonians import ProblemHamiltonian, expectation
from .topology import CouplingGraph, SubtopologyTemplate, enumerate_layouts, graph_from_dict


class CalibrationError(KeyError):
    """A touched qubit or edge has no calibration entry."""


@dataclass(frozen=True)
class Calibration:
    """Per-qubit readout/single-qubit error rates and per-edge two-qubit rates.

    T1/T2 are stored when present but do not enter the cost function.
    """

    readout_error: tuple[float, ...]
    sq_error: tuple[float, ...]
    edge_error: dict
    t1: tuple | None = None
    t2: tuple | None = None

    def __post_init__(self):
        for name, rates in (("readout", self.readout_error), ("single-qubit", self.sq_error)):
            if any(not 0.0 <= r <= 1.0 for r in rates):
                raise ValueError(f"{name} error rates must lie in [0, 1]")
        norm = {}
        for (u, v), e in self.edge_error.items():
            if not 0.0 <= e <= 1.0:
                raise ValueError(f"two-qubit error {e} out of [0, 1]")
            norm[(min(u, v), max(u, v))] = float(e)
        object.__setattr__(self, "edge_error", norm)

    def two_qubit_error(self, u: int, v: int) -> float:
        try:
            return self.edge_error[(min(u, v), max(u, v))]
        except KeyError:
            raise CalibrationError(f"no two-qubit calibration for edge ({u},{v})") from None


def uniform_calibration(num_qubits: int, graph: CouplingGraph, readout: float = 0.01,
                        sq: float = 0.001, tq: float = 0.01) -> Calibration:
    return Calibration(
        readout_error=(readout,) * num_qubits,
        sq_error=(sq,) * num_qubits,
        edge_error={e: tq for e in graph.edges},
    )


@dataclass(frozen=True)
class CostReport:
    layout: tuple[int, ...]
    cost: float
    gate_error_product: float
    measurement_error_product: float
    gate_count: int = 0


def circuit_cost(circuit: Circuit, layout, cal: Calibration,
                 measured_positions=None) -> CostReport:
    """Estimated-error cost C = 1 - prod(1 - p_gate) * prod(1 - p_meas).

    Gates are counted on the basis-decomposed circuit; every position in
    `measured_positions` (default: all) contributes its readout error.
    """
    layout = tuple(layout)
    if len(layout) < circuit.n:
        raise ValueError(f"layout covers {len(layout)} positions, circuit needs {circuit.n}")
    dec = decompose_to_basis(circuit)
    gate_product = 1.0
    for g in dec.gates:
        if g.is_two_qubit:
            a, b = g.qubits
            gate_product *= 1.0 - cal.two_qubit_error(layout[a], layout[b])
        else:
            q = layout[g.qubits[0]]
            try:
                gate_product *= 1.0 - cal.sq_error[q]
            except IndexError:
                raise CalibrationError(f"no single-qubit calibration for qubit {q}") from None
    if measured_positions is None:
        measured_positions = range(circuit.n)
    meas_product = 1.0
    for p in measured_positions:
        q = layout[p]
        try:
            meas_product *= 1.0 - cal.readout_error[q]
        except IndexError:
            raise CalibrationError(f"no readout calibration for qubit {q}") from None
    return CostReport(layout=layout, cost=1.0 - gate_product * meas_product,
                      gate_error_product=gate_product,
                      measurement_error_product=meas_product,
                      gate_count=len(dec.gates))


def select_layout(circuit: Circuit, tmpl: SubtopologyTemplate, graph: CouplingGraph,
                  cal: Calibration):
    """Argmin-cost layout over all monomorphisms; ties go to the
    lexicographically smallest layout."""
    layouts = enumerate_layouts(tmpl, graph)
    if not layouts:
        raise ValueError(f"{tmpl.kind}-{tmpl.n} template is not embeddable in the device graph")
    best = None
    for layout in layouts:  # already lexicographically sorted
        report = circuit_cost(circuit, layout, cal)
        if best is None or report.cost < best.cost:
            best = report
    return best.layout, best


def postselect(variants, h: ProblemHamiltonian):
    """Pick the (label, counts) variant with minimal problem expectation.

    Ties resolve to the earliest variant in input order.
    """
    variants = list(variants)
    if not variants:
        raise ValueError("postselect needs at least one variant")
    best = None
    for idx, (label, counts) in enumerate(variants):
        val = expectation(h, counts)
        if best is None or val < best[0]:
            best = (val, idx, label)
    return best[2], best[0]


def calibration_from_dict(data: dict) -> Calibration:
    qubits = data["qubits"]
    t1 = tuple(q.get("t1") for q in qubits) if any("t1" in q for q in qubits) else None
    t2 = tuple(q.get("t2") for q in qubits) if any("t2" in q for q in qubits) else None
    return Calibration(
        readout_error=tuple(float(q["readout_error"]) for q in qubits),
        sq_error=tuple(float(q["sq_error"]) for q in qubits),
        edge_error={tuple(e["pair"]): float(e["error"]) for e in data["edges"]},
        t1=t1,
        t2=t2,
    )


def device_from_dict(data: dict):
    """Device JSON -> (CouplingGraph, Calibration | None); validates that
    every device edge carries a two-qubit error entry when calibration is
    present."""
    graph = graph_from_dict(data)
    cal = None
    if "calibration" in data:
        cal = calibration_from_dict(data["calibration"])
        if len(cal.readout_error) != graph.num_qubits:
            raise ValueError("calibration qubit list does not match num_qubits")
        missing = [e for e in graph.edges if e not in cal.edge_error]
        if missing:
            raise ValueError(f"calibration missing two-qubit entries for edges {sorted(missing)}")
    return graph, cal


def device_from_json(text: str):
    return device_from_dict(json.loads(text))
