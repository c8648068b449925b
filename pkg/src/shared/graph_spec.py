"""Graph and measurement-program files: validated JSON models plus helpers."""

import math
from pathlib import Path
from typing import Literal

import networkx as nx
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator

from shared.errors import GraphSpecError, ProgramError
from shared.growth_law import thermal_shrink
from shared.pauli_core import BlochOp, CanonicalGate, DiagonalGate, canonicalize_gate

PURE_TOL = 1e-12


class NodeSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int
    theta: float | None = None
    azimuth: float = 0.0
    bloch: tuple[float, float, float] | None = None
    T: float | None = None

    @model_validator(mode="after")
    def check_input(self):
        if (self.theta is None) == (self.bloch is None):
            raise ValueError(f"Node {self.id}: give exactly one of 'theta' or 'bloch'")
        if self.T is not None and self.T < 0:
            raise ValueError(f"Node {self.id}: temperature must be non-negative")
        self.input_op()
        return self

    def input_op(self) -> BlochOp:
        """Initial Bloch operator, thermal shrink applied."""
        shrink = thermal_shrink(self.T)
        if self.theta is not None:
            return BlochOp.from_angles(self.theta, self.azimuth, shrink)
        x, y, z = self.bloch
        return BlochOp(x * shrink, y * shrink, z * shrink)

    @property
    def is_pure(self) -> bool:
        op = self.input_op()
        return abs(math.sqrt(op.x**2 + op.y**2 + op.z**2) - 1.0) <= PURE_TOL


class EdgeSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    a: int
    b: int
    phi: float | None = None
    phis: tuple[float, float, float, float] | None = None
    growth_a: float | None = None
    growth_b: float | None = None

    @model_validator(mode="after")
    def check_edge(self):
        if self.a == self.b:
            raise ValueError(f"Self-loop on node {self.a}")
        if (self.phi is None) == (self.phis is None):
            raise ValueError(f"Edge ({self.a},{self.b}): give exactly one of 'phi' or 'phis'")
        if (self.growth_a is None) != (self.growth_b is None):
            raise ValueError(f"Edge ({self.a},{self.b}): growth_a and growth_b come together")
        return self

    def gate(self) -> DiagonalGate:
        if self.phis is not None:
            return DiagonalGate(self.phis)
        return DiagonalGate.controlled_phase(self.phi)

    def canonical(self) -> CanonicalGate:
        return canonicalize_gate(self.gate())


class GraphSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    nodes: list[NodeSpec]
    edges: list[EdgeSpec] = []

    @model_validator(mode="after")
    def check_graph(self):
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise ValueError("Duplicate node ids")
        known = set(ids)
        for e in self.edges:
            if e.a not in known or e.b not in known:
                raise ValueError(f"Edge ({e.a},{e.b}) references an unknown node")
        return self

    @property
    def node_ids(self) -> list[int]:
        return [n.id for n in self.nodes]

    def node(self, node_id: int) -> NodeSpec:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)

    def to_networkx(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(self.node_ids)
        for i, e in enumerate(self.edges):
            g.add_edge(e.a, e.b, key=i)
        return g

    def degree(self, node_id: int) -> int:
        return self.to_networkx().degree(node_id)

    def sorted_edges(self) -> list[EdgeSpec]:
        """Canonical gate order: by (min endpoint, max endpoint), file order on ties."""
        return sorted(self.edges, key=lambda e: (min(e.a, e.b), max(e.a, e.b)))

    def is_uniform_phase(self, tol: float = 1e-12) -> bool:
        phis = [e.canonical().phi for e in self.edges]
        return not phis or max(phis) - min(phis) <= tol


class MeasurementStep(BaseModel):
    model_config = ConfigDict(frozen=True)

    qubit: int
    basis: Literal["Z", "XY"]
    angle: float = 0.0
    flip_on: list[int] = []

    @model_validator(mode="after")
    def check_step(self):
        if self.basis == "Z" and self.flip_on:
            raise ValueError(f"Z measurement of qubit {self.qubit} cannot be adaptive")
        return self

    def angle_given(self, outcomes: list[int]) -> float:
        """Base angle plus pi times the XOR of the referenced prior outcome bits."""
        parity = 0
        for index in self.flip_on:
            parity ^= outcomes[index]
        return self.angle + math.pi * parity


class MeasurementProgram(BaseModel):
    model_config = ConfigDict(frozen=True)

    steps: list[MeasurementStep]

    @field_validator("steps")
    @classmethod
    def check_references(cls, steps: list[MeasurementStep]) -> list[MeasurementStep]:
        for i, step in enumerate(steps):
            for ref in step.flip_on:
                if not 0 <= ref < i:
                    raise ValueError(f"Step {i} flips on step {ref}, which does not precede it")
        return steps

    @property
    def measured_qubits(self) -> list[int]:
        return [s.qubit for s in self.steps]

    def check_against(self, graph: GraphSpec) -> None:
        known = set(graph.node_ids)
        seen = set()
        for i, step in enumerate(self.steps):
            if step.qubit not in known:
                raise ProgramError(f"Step {i} measures unknown qubit {step.qubit}")
            if step.qubit in seen:
                raise ProgramError(f"Step {i} measures qubit {step.qubit}, which is already consumed")
            seen.add(step.qubit)


def load_graph_spec(path: str | Path) -> GraphSpec:
    try:
        return GraphSpec.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except ValidationError as e:
        raise GraphSpecError(str(e)) from e


def load_program(path: str | Path) -> MeasurementProgram:
    try:
        return MeasurementProgram.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except ValidationError as e:
        raise ProgramError(str(e)) from e


def graph_from_networkx(
    graph: nx.Graph,
    theta: float,
    phi: float,
    azimuth: float = 0.0,
    T: float | None = None,
) -> GraphSpec:
    """Uniform instance: every node at polar angle theta, every edge V_phi."""
    index = {node: i for i, node in enumerate(sorted(graph.nodes))}
    nodes = [
        NodeSpec(id=index[n], theta=theta, azimuth=azimuth, T=T) for n in sorted(graph.nodes)
    ]
    edges = [EdgeSpec(a=index[u], b=index[v], phi=phi) for u, v in graph.edges()]
    return GraphSpec(nodes=nodes, edges=edges)
