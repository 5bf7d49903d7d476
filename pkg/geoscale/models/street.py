# geoscale/models/street.py
from typing import Dict, List, Optional, Tuple

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator

from geoscale.models.geometry import Polyline, as_coordinate_array


class StreetSegment(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    id: str
    geometry: Polyline
    name: Optional[str] = None


class Node(BaseModel):
    """Junction after snapping and noding"""

    model_config = ConfigDict(frozen=True)

    id: int
    x: float
    y: float


class Edge(BaseModel):
    """
    Piece of a street segment between two junctions.

    start_angle / end_angle are the directions (radians) in which the edge
    leaves its start and end node.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    id: int
    start: int
    end: int
    coords: np.ndarray
    length: float
    start_angle: float
    end_angle: float
    segment_id: str
    name: Optional[str] = None

    @field_validator("coords", mode="before")
    @classmethod
    def coerce_coords(cls, v):
        arr = as_coordinate_array(v)
        arr.setflags(write=False)
        return arr

    @field_serializer("coords")
    def dump_coords(self, v: np.ndarray):
        return v.tolist()

    def other(self, node: int) -> int:
        return self.end if node == self.start else self.start

    def angle_at(self, at_start: bool) -> float:
        """Leaving direction at the start or at the end node"""
        return self.start_angle if at_start else self.end_angle


class Face(BaseModel):
    """Face of the arrangement traced along half-edges (left side)"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    id: int
    component: int
    half_edges: List[Tuple[int, bool]]  # (edge id, traversed forward)
    ring: np.ndarray
    signed_area: float
    is_outer: bool

    @field_serializer("ring")
    def dump_ring(self, v: np.ndarray):
        return v.tolist()


class PlanarArrangement(BaseModel):
    """Fully noded street network with its faces; immutable once built"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    nodes: Dict[int, Node]
    edges: Dict[int, Edge]
    faces: List[Face]
    components: Dict[int, int]  # node id -> component id
    snap_tolerance: float

    def incident(self) -> Dict[int, List[Tuple[int, bool]]]:
        """node id -> [(edge id, edge starts at node)]; a loop edge appears twice"""
        result: Dict[int, List[Tuple[int, bool]]] = {n: [] for n in self.nodes}
        for edge in self.edges.values():
            result[edge.start].append((edge.id, True))
            result[edge.end].append((edge.id, False))
        return result

    def degree(self, node: int) -> int:
        return sum(1 for e in self.edges.values() for end in (e.start, e.end) if end == node)

    @property
    def component_count(self) -> int:
        return len(set(self.components.values()))

    def euler_characteristic(self, component: int) -> int:
        nodes = [n for n, c in self.components.items() if c == component]
        edges = [e for e in self.edges.values() if self.components[e.start] == component]
        faces = [f for f in self.faces if f.component == component]
        return len(nodes) - len(edges) + len(faces)


class NaturalStreet(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int
    edge_ids: List[int] = Field(min_length=1)
    length: float
    name: Optional[str] = None


class ConnectivityGraph(BaseModel):
    """Natural streets as nodes, shared junctions as links"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    graph: nx.Graph

    @property
    def node_count(self) -> int:
        return self.graph.number_of_nodes()

    @property
    def link_count(self) -> int:
        return self.graph.number_of_edges()

    @property
    def degrees(self) -> Dict[int, int]:
        return {int(n): int(d) for n, d in sorted(self.graph.degree())}

    def to_json_dict(self) -> dict:
        return {
            "nodes": [
                {"id": int(n), "degree": int(self.graph.degree(n)), **self.graph.nodes[n]}
                for n in sorted(self.graph.nodes)
            ],
            "links": [
                {"source": int(a), "target": int(b), "junctions": sorted(data["junctions"])}
                for a, b, data in sorted(self.graph.edges(data=True))
            ],
        }


class Block(BaseModel):
    """Interior face: a minimum ring of street segments"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    id: int
    ring: np.ndarray
    area: float = Field(gt=0)
    edge_ids: List[int]
    adjacency: List[int]  # neighbour block ids sharing an edge
    touches_outer: bool
    component: int
    border_number: Optional[int] = Field(None, ge=1)

    @field_serializer("ring")
    def dump_ring(self, v: np.ndarray):
        return v.tolist()


class NaturalCity(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int
    block_ids: List[int]
    area: float
    hotspots: List[List[int]] = []
