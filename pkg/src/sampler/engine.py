"""Branch-sampling simulator for diagonal-gate graphs with adaptive XY / Z measurements."""

import logging
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from decomposer.decompose import DecompositionCache, Infeasible, decompose_product
from sampler.admission import AdmissionReport, edge_growth, validate_run
from sampler.rng import make_streams, shot_seed
from shared.config import SamplerConfig
from shared.errors import (
    AdmissionRejected,
    BudgetExceededError,
    MarginTooSmallError,
)
from shared.graph_spec import GraphSpec, MeasurementProgram
from shared.pauli_core import BlochOp, rotate_z
from shared.state_spaces import Discretization, angles_for_margin, cylinder_extremals

logger = logging.getLogger(__name__)

BUDGET_TOL = 1e-9
PROB_TOL = 1e-9


class MeasuredOutcome(NamedTuple):
    qubit: int
    basis: str
    angle: float
    bit: int


@dataclass(frozen=True)
class ShotRecord:
    shot: int
    seed: int
    outcomes: tuple[MeasuredOutcome, ...]
    branch_count: int
    max_support: int

    @property
    def bits(self) -> str:
        return "".join(str(o.bit) for o in self.outcomes)

    def as_dict(self) -> dict:
        return {
            "shot": self.shot,
            "seed": self.seed,
            "outcomes": [o._asdict() for o in self.outcomes],
            "bits": self.bits,
            "branch_count": self.branch_count,
            "max_support": self.max_support,
        }


@dataclass(frozen=True)
class GatePlan:
    """One edge with its canonical phase, local phases and the grown output polygons."""

    a: int
    b: int
    phi: float
    gamma_a: float
    gamma_b: float
    out_a: Discretization
    out_b: Discretization

    @property
    def entangling(self) -> bool:
        return 0.0 < self.phi < 2 * math.pi


@dataclass
class BatchResult:
    records: list[ShotRecord]
    distribution: dict[str, float]
    admission: AdmissionReport


def empirical_distribution(records: list[ShotRecord]) -> dict[str, float]:
    if not records:
        return {}
    counts = Counter(r.bits for r in records)
    return {bits: counts[bits] / len(records) for bits in sorted(counts)}


def tv_bound(n_measured: int, n_shots: int, eta: float) -> float:
    """Acceptance threshold 3 sqrt(2^k / n) + 10 eta for sampler-vs-exact comparisons."""
    if n_shots <= 0:
        return math.inf
    return 3.0 * math.sqrt(2**n_measured / n_shots) + 10.0 * eta


class Sampler:
    """Simulator bound to one admitted graph and program."""

    def __init__(
        self,
        graph: GraphSpec,
        program: MeasurementProgram,
        config: SamplerConfig | None = None,
    ):
        self.graph = graph
        self.program = program
        self.config = config or SamplerConfig()
        program.check_against(graph)

        eta = self.config.eta
        if eta <= 0:
            raise MarginTooSmallError(f"Sampling needs a positive margin eta, got {eta}")
        self.admission = validate_run(graph, eta)
        if not self.admission.accepted:
            raise AdmissionRejected(self.admission)

        self.n_angles = self.config.n_angles or angles_for_margin(eta)
        if (1.0 + eta) * math.cos(math.pi / self.n_angles) < 1.0:
            raise MarginTooSmallError(
                f"{self.n_angles}-gon output cylinders are too coarse for eta={eta}"
            )
        self.inputs = {n.id: n.input_op() for n in graph.nodes}
        self.plan = self._build_plan(eta)
        self.cache = DecompositionCache() if self.config.cache else None

    def _build_plan(self, eta: float) -> list[GatePlan]:
        budget = {nid: op.radius for nid, op in self.inputs.items()}
        plan = []
        for edge in self.graph.sorted_edges():
            canonical = edge.canonical()
            g_a, g_b = edge_growth(edge)
            budget[edge.a] *= g_a * (1.0 + eta)
            budget[edge.b] *= g_b * (1.0 + eta)
            plan.append(
                GatePlan(
                    a=edge.a,
                    b=edge.b,
                    phi=canonical.phi,
                    gamma_a=canonical.gamma_a,
                    gamma_b=canonical.gamma_b,
                    out_a=cylinder_extremals(budget[edge.a], self.n_angles),
                    out_b=cylinder_extremals(budget[edge.b], self.n_angles),
                )
            )
        return plan

    def _check_budget(self, gate: GatePlan, a: BlochOp, b: BlochOp) -> None:
        for node, op, out in ((gate.a, a, gate.out_a), (gate.b, b, gate.out_b)):
            if op.radius > out.parent.r + BUDGET_TOL:
                raise BudgetExceededError(
                    f"Node {node}: radius {op.radius:.9g} exceeds its budget {out.parent.r:.9g}"
                )

    def run_shot(self, shot_index: int, seed: int) -> ShotRecord:
        streams = make_streams(seed, shot_index)
        ops = dict(self.inputs)
        max_support = 0
        for gate in self.plan:
            a, b = ops[gate.a], ops[gate.b]
            if gate.entangling:
                dec = decompose_product(
                    a, b, gate.phi, gate.out_a, gate.out_b, self.config.lp_eps, self.cache
                )
                if isinstance(dec, Infeasible):
                    raise MarginTooSmallError(
                        f"Gate ({gate.a},{gate.b}) output not decomposable "
                        f"(violation {dec.objective:.3e}); increase eta"
                    )
                max_support = max(max_support, len(dec))
                if self.config.debug and dec.weight_error() > 1e-9:
                    raise BudgetExceededError(f"Gate ({gate.a},{gate.b}) weights do not sum to 1")
                a, b = dec.sample(streams.gates)
            a, b = rotate_z(a, gate.gamma_a), rotate_z(b, gate.gamma_b)
            if self.config.debug:
                self._check_budget(gate, a, b)
            ops[gate.a], ops[gate.b] = a, b

        outcomes: list[MeasuredOutcome] = []
        bits: list[int] = []
        for step in self.program.steps:
            op = ops[step.qubit]
            if step.basis == "Z":
                angle = 0.0
                projection = op.z
            else:
                angle = step.angle_given(bits)
                projection = math.cos(angle) * op.x + math.sin(angle) * op.y
            p0 = 0.5 * (1.0 + projection)
            if not -PROB_TOL <= p0 <= 1.0 + PROB_TOL:
                raise BudgetExceededError(f"Qubit {step.qubit}: outcome probability {p0} outside [0, 1]")
            bit = 0 if streams.measurements.random() < p0 else 1
            bits.append(bit)
            outcomes.append(MeasuredOutcome(step.qubit, step.basis, angle, bit))
        return ShotRecord(
            shot=shot_index,
            seed=shot_seed(seed, shot_index),
            outcomes=tuple(outcomes),
            branch_count=sum(1 for g in self.plan if g.entangling),
            max_support=max_support,
        )

    def run_batch(self, n_shots: int, seed: int) -> BatchResult:
        if n_shots < 0:
            raise ValueError(f"n_shots must be non-negative, got {n_shots}")
        logger.info(
            f"Sampling {n_shots} shots on {len(self.graph.nodes)} qubits "
            f"(eta={self.config.eta}, {self.n_angles}-gon outputs)"
        )
        threads = max(1, min(self.config.threads, n_shots or 1))
        if threads == 1:
            records = [self.run_shot(i, seed) for i in range(n_shots)]
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                records = list(pool.map(lambda i: self.run_shot(i, seed), range(n_shots)))
        if self.cache is not None:
            logger.debug(
                f"Decomposition cache: {len(self.cache)} entries, "
                f"{self.cache.hits} hits, {self.cache.misses} misses"
            )
        return BatchResult(records, empirical_distribution(records), self.admission)


def run_shot(
    g: GraphSpec,
    prog: MeasurementProgram,
    seed: int,
    config: SamplerConfig | None = None,
    shot_index: int = 0,
) -> ShotRecord:
    return Sampler(g, prog, config).run_shot(shot_index, seed)


def run_batch(
    g: GraphSpec,
    prog: MeasurementProgram,
    n_shots: int,
    seed: int,
    config: SamplerConfig | None = None,
) -> BatchResult:
    return Sampler(g, prog, config).run_batch(n_shots, seed)


def tv_distance(p: dict[str, float], q: dict[str, float]) -> float:
    keys = set(p) | set(q)
    return 0.5 * float(np.sum([abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys]))
