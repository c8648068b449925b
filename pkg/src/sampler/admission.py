"""Admission test: does every node's radius budget end inside the Bloch ball?"""

import logging
from dataclasses import dataclass, field

from shared.graph_spec import EdgeSpec, GraphSpec
from shared.growth_law import GrowthQuery, is_cyl_separable, lambda_of_phi

logger = logging.getLogger(__name__)

BUDGET_TOL = 1e-12


@dataclass(frozen=True)
class NodeBudget:
    node: int
    initial_radius: float
    degree: int
    final_radius: float

    @property
    def slack(self) -> float:
        return 1.0 - self.final_radius

    @property
    def admitted(self) -> bool:
        return self.final_radius <= 1.0 + BUDGET_TOL


@dataclass
class AdmissionReport:
    eta: float
    nodes: list[NodeBudget] = field(default_factory=list)
    invalid_edges: list[tuple[int, int]] = field(default_factory=list)

    @property
    def violating_nodes(self) -> list[int]:
        bad = {n.node for n in self.nodes if not n.admitted}
        for a, b in self.invalid_edges:
            bad.update((a, b))
        return sorted(bad)

    @property
    def accepted(self) -> bool:
        return not self.violating_nodes

    @property
    def min_slack(self) -> float:
        return min((n.slack for n in self.nodes), default=1.0)

    def as_dict(self) -> dict:
        return {
            "eta": self.eta,
            "accepted": self.accepted,
            "violating_nodes": self.violating_nodes,
            "invalid_edges": [list(e) for e in self.invalid_edges],
            "nodes": [
                {
                    "id": n.node,
                    "initial_radius": n.initial_radius,
                    "degree": n.degree,
                    "final_radius": n.final_radius,
                    "slack": n.slack,
                }
                for n in self.nodes
            ],
        }


def edge_growth(edge: EdgeSpec) -> tuple[float, float]:
    """Growth factors of the two endpoints, lambda(phi) on both unless the edge overrides them."""
    if edge.growth_a is not None:
        return edge.growth_a, edge.growth_b
    growth = lambda_of_phi(edge.canonical().phi)
    return growth, growth


def edge_growth_valid(edge: EdgeSpec, tol: float = 0.0) -> bool:
    if edge.growth_a is None:
        return True
    if edge.growth_a <= 0 or edge.growth_b <= 0:
        return False
    query = GrowthQuery(1.0 / edge.growth_a, 1.0 / edge.growth_b, edge.canonical().phi)
    return is_cyl_separable(query, tol)


def validate_run(g: GraphSpec, eta: float = 1e-3, sep_tol: float = 0.0) -> AdmissionReport:
    """r(n) times the product of (1 + eta)-inflated growth factors must stay <= 1 at every node."""
    if eta < 0:
        raise ValueError(f"eta must be non-negative, got {eta}")
    radius = {n.id: n.input_op().radius for n in g.nodes}
    budget = dict(radius)
    degree = {n.id: 0 for n in g.nodes}
    report = AdmissionReport(eta=eta)
    for edge in g.sorted_edges():
        if not edge_growth_valid(edge, sep_tol):
            report.invalid_edges.append((edge.a, edge.b))
            logger.warning(f"Edge ({edge.a},{edge.b}): growth factors do not keep the output separable")
        g_a, g_b = edge_growth(edge)
        budget[edge.a] *= g_a * (1.0 + eta)
        budget[edge.b] *= g_b * (1.0 + eta)
        degree[edge.a] += 1
        degree[edge.b] += 1
    report.nodes = [NodeBudget(nid, radius[nid], degree[nid], budget[nid]) for nid in g.node_ids]
    if not report.accepted:
        logger.info(f"Admission rejected for nodes {report.violating_nodes}")
    return report
