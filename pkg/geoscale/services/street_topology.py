# geoscale/services/street_topology.py
"""
Natural streets, connectivity graph, street blocks, border numbers and
natural cities on a planar arrangement.
"""
import logging
import math
from collections import deque
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np
import shapely
from shapely.geometry import mapping

from geoscale.core.exceptions import InputError, NumericalError, TopologyError
from geoscale.io.geojson import feature_collection, make_feature
from geoscale.models.series import ValueSeries
from geoscale.models.street import (
    Block,
    ConnectivityGraph,
    NaturalCity,
    NaturalStreet,
    PlanarArrangement,
)
from geoscale.services.arrangement import interior_faces

logger = logging.getLogger("geoscale.street_topology")

STRATEGIES = ("every-best-fit", "self-best-fit", "same-name")

End = Tuple[int, bool]  # (edge id, the edge starts at the junction)

AREA_TIE = 1e-9  # relative; areas this close to the mean count as equal


def below_mean(area: float, mean: float) -> bool:
    return area < mean and not math.isclose(area, mean, rel_tol=AREA_TIE)


def deflection(theta_in: float, theta_out: float) -> float:
    """
    Deflection in degrees between two edge ends leaving the same junction.

    0 means the second edge continues the first in a straight line.
    """
    between = abs(theta_in - theta_out) % (2 * math.pi)
    between = min(between, 2 * math.pi - between)
    # rounded so that rotated copies of a network rank ties identically
    return round(180.0 - math.degrees(between), 9)


def _candidates(a: PlanarArrangement, ends: List[End], strategy: str,
                threshold: float) -> List[Tuple[float, End, End]]:
    pairs = []
    for i, first in enumerate(ends):
        for second in ends[i + 1:]:
            if first[0] == second[0]:
                continue
            e1, e2 = a.edges[first[0]], a.edges[second[0]]
            d = deflection(e1.angle_at(first[1]), e2.angle_at(second[1]))
            if strategy == "same-name":
                if not e1.name or e1.name != e2.name:
                    continue
            elif d > threshold:
                continue
            pairs.append((d, first, second))
    return pairs


def _pair_junction(a: PlanarArrangement, ends: List[End], strategy: str,
                   threshold: float) -> List[Tuple[End, End]]:
    """Pair the edge ends meeting at one junction"""
    candidates = _candidates(a, ends, strategy, threshold)
    used: Set[End] = set()
    pairs: List[Tuple[End, End]] = []
    if strategy == "self-best-fit":
        # each end in turn takes its own best remaining partner
        for end in sorted(ends):
            if end in used:
                continue
            options = [
                (d, other) for d, x, y in candidates
                for mine, other in ((x, y), (y, x))
                if mine == end and other not in used
            ]
            if not options:
                continue
            _, other = min(options)
            used.update((end, other))
            pairs.append((end, other))
        return pairs

    # every-best-fit and same-name: smallest deflection over the whole junction first
    for d, x, y in sorted(candidates):
        if x in used or y in used:
            continue
        used.update((x, y))
        pairs.append((x, y))
    return pairs


def trace_natural_streets(a: PlanarArrangement, strategy: str = "every-best-fit",
                          angle_threshold: float = 45.0) -> List[NaturalStreet]:
    """
    Join edges into natural streets.

    Every edge belongs to exactly one street. Unpaired edge ends terminate a
    street; a chain that closes on itself becomes a ring street.
    """
    if strategy not in STRATEGIES:
        raise InputError(f"unknown strategy: {strategy}")
    if not 0 < angle_threshold < 90:
        raise InputError(f"angle threshold must lie in (0, 90) degrees, got {angle_threshold}")

    partner: Dict[End, End] = {}
    for node, ends in sorted(a.incident().items()):
        for x, y in _pair_junction(a, ends, strategy, angle_threshold):
            partner[x] = y
            partner[y] = x

    assigned: Set[int] = set()

    def extend(end: End) -> List[int]:
        chain = []
        while end in partner:
            eid, at_start = partner[end]
            if eid in assigned:
                break
            assigned.add(eid)
            chain.append(eid)
            end = (eid, not at_start)
        return chain

    streets: List[NaturalStreet] = []
    for eid in sorted(a.edges):
        if eid in assigned:
            continue
        assigned.add(eid)
        backward = extend((eid, True))
        forward = extend((eid, False))
        members = backward[::-1] + [eid] + forward
        names = {a.edges[m].name for m in members}
        streets.append(NaturalStreet(
            id=len(streets),
            edge_ids=members,
            length=sum(a.edges[m].length for m in members),
            name=names.pop() if len(names) == 1 else None,
        ))

    logger.info(f"Traced {len(streets)} natural streets from {len(a.edges)} edges ({strategy})")
    return streets


def street_junctions(street: NaturalStreet, a: PlanarArrangement) -> Set[int]:
    return {n for eid in street.edge_ids for n in (a.edges[eid].start, a.edges[eid].end)}


def check_partition(streets: Sequence[NaturalStreet], a: PlanarArrangement) -> None:
    seen: Dict[int, int] = {}
    for street in streets:
        for eid in street.edge_ids:
            if eid not in a.edges:
                raise TopologyError(f"street {street.id} references unknown edge {eid}")
            if eid in seen:
                raise TopologyError(f"edge {eid} belongs to streets {seen[eid]} and {street.id}")
            seen[eid] = street.id
    missing = sorted(set(a.edges) - set(seen))
    if missing:
        raise TopologyError(f"edges not covered by any street: {missing[:5]}")


def connectivity_graph(streets: Sequence[NaturalStreet], a: PlanarArrangement) -> ConnectivityGraph:
    """Link two streets when they share at least one junction"""
    check_partition(streets, a)

    at_node: Dict[int, List[int]] = {}
    for street in streets:
        for node in sorted(street_junctions(street, a)):
            at_node.setdefault(node, []).append(street.id)

    g = nx.Graph()
    for street in streets:
        g.add_node(street.id, length=street.length, name=street.name)
    for node, members in sorted(at_node.items()):
        for i, s1 in enumerate(members):
            for s2 in members[i + 1:]:
                if g.has_edge(s1, s2):
                    g.edges[s1, s2]["junctions"].append(node)
                else:
                    g.add_edge(s1, s2, junctions=[node])

    logger.info(f"Connectivity graph: {g.number_of_nodes()} streets, {g.number_of_edges()} links")
    return ConnectivityGraph(graph=g)


def degree_series(graph: ConnectivityGraph) -> ValueSeries:
    """Street degrees for head/tail analysis; isolated streets are left out"""
    degrees = [d for d in graph.degrees.values() if d > 0]
    if not degrees:
        raise NumericalError("no connected streets: every degree is zero")
    if len(degrees) < graph.node_count:
        logger.warning(f"Left {graph.node_count - len(degrees)} isolated streets out of the degree series")
    return ValueSeries(values=[float(d) for d in degrees], label="degree")


def extract_blocks(a: PlanarArrangement) -> List[Block]:
    """Interior faces as blocks, with edge adjacency and contact with the outer face"""
    faces = interior_faces(a)
    outer_ids = {f.id for f in a.faces if f.is_outer}
    face_of: Dict[Tuple[int, bool], int] = {}
    for face in a.faces:
        for h in face.half_edges:
            face_of[h] = face.id

    block_id = {face.id: i for i, face in enumerate(faces)}
    blocks: List[Block] = []
    for face in faces:
        neighbours: Set[int] = set()
        touches_outer = False
        for eid, fwd in face.half_edges:
            other = face_of[(eid, not fwd)]
            if other in outer_ids:
                touches_outer = True
            elif other in block_id and other != face.id:
                neighbours.add(block_id[other])
        blocks.append(Block(
            id=block_id[face.id],
            ring=face.ring,
            area=face.signed_area,
            edge_ids=sorted({eid for eid, _ in face.half_edges}),
            adjacency=sorted(neighbours),
            touches_outer=touches_outer,
            component=face.component,
        ))
    logger.info(f"Extracted {len(blocks)} blocks")
    return blocks


def area_series(blocks: Sequence[Block]) -> ValueSeries:
    if not blocks:
        raise NumericalError("no blocks: the network encloses no area")
    return ValueSeries(values=[b.area for b in blocks], label="area")


def _bfs_levels(members: Iterable[int], adjacency: Dict[int, List[int]],
                seeds: Iterable[int]) -> Dict[int, int]:
    member_set = set(members)
    levels = {s: 1 for s in sorted(seeds)}
    queue = deque(sorted(levels))
    while queue:
        current = queue.popleft()
        for nb in adjacency[current]:
            if nb in member_set and nb not in levels:
                levels[nb] = levels[current] + 1
                queue.append(nb)
    return levels


def border_numbers(blocks: Sequence[Block]) -> Dict[int, int]:
    """
    Topological distance of each block from the outermost border.

    Blocks sharing an edge with their component's outer face get 1; their
    neighbours not yet labelled get 2, and so on.
    """
    if not blocks:
        raise InputError("border numbers need at least one block")
    adjacency = {b.id: b.adjacency for b in blocks}
    levels = _bfs_levels(adjacency, adjacency, [b.id for b in blocks if b.touches_outer])
    unreached = sorted(set(adjacency) - set(levels))
    if unreached:
        raise TopologyError(f"blocks not connected to any border: {unreached[:5]}")
    return dict(sorted(levels.items()))


def with_border_numbers(blocks: Sequence[Block], border: Dict[int, int]) -> List[Block]:
    return [b.model_copy(update={"border_number": border[b.id]}) for b in blocks]


def topological_center(blocks: Sequence[Block], border: Dict[int, int]) -> Set[int]:
    """Blocks with the highest border number"""
    if not border:
        return set()
    top = max(border[b.id] for b in blocks)
    return {b.id for b in blocks if border[b.id] == top}


def natural_cities(blocks: Sequence[Block]) -> List[NaturalCity]:
    """Edge-connected patches of blocks smaller than the mean block area"""
    if len(blocks) < 2:
        raise InputError(f"natural cities need at least 2 blocks, got {len(blocks)}")
    mean = float(np.mean([b.area for b in blocks]))
    small = [b for b in blocks if below_mean(b.area, mean)]

    g = nx.Graph()
    g.add_nodes_from(b.id for b in small)
    small_ids = set(g.nodes)
    for b in small:
        g.add_edges_from((b.id, nb) for nb in b.adjacency if nb in small_ids)

    area = {b.id: b.area for b in blocks}
    cities = []
    for members in sorted(nx.connected_components(g), key=min):
        ids = sorted(members)
        cities.append(NaturalCity(id=len(cities), block_ids=ids, area=sum(area[i] for i in ids)))
    logger.info(f"{len(small)} of {len(blocks)} blocks below mean area {mean!r}: {len(cities)} natural cities")
    return cities


def city_hotspots(city: NaturalCity, blocks: Sequence[Block]) -> List[List[int]]:
    """
    Nested hotspots: repeat the below-mean selection inside the city.

    Each level keeps the members strictly below the mean area of the previous
    level; it stops when nothing falls below or a single block remains.
    """
    area = {b.id: b.area for b in blocks}
    levels: List[List[int]] = []
    members = list(city.block_ids)
    while len(members) >= 2:
        mean = sum(area[m] for m in members) / len(members)
        below = [m for m in members if below_mean(area[m], mean)]
        if not below:
            break
        levels.append(below)
        members = below
    return levels


def with_hotspots(cities: Sequence[NaturalCity], blocks: Sequence[Block]) -> List[NaturalCity]:
    return [c.model_copy(update={"hotspots": city_hotspots(c, blocks)}) for c in cities]


def city_center(city: NaturalCity, blocks: Sequence[Block]) -> Set[int]:
    """
    Topological centre of a city taken as a whole.

    City blocks next to a non-member block or the outer face get border
    number 1 inside the city.
    """
    members = set(city.block_ids)
    adjacency = {b.id: b.adjacency for b in blocks}
    by_id = {b.id: b for b in blocks}
    seeds = [
        m for m in members
        if by_id[m].touches_outer or any(nb not in members for nb in adjacency[m])
    ]
    if not seeds:
        # a city covering every block of an enclosed component
        seeds = sorted(members)
    levels = _bfs_levels(members, adjacency, seeds)
    top = max(levels.values())
    return {m for m, level in levels.items() if level == top}


def _block_shapes(blocks: Sequence[Block]):
    return [shapely.make_valid(shapely.Polygon(b.ring)) for b in blocks]


def assign_points(blocks: Sequence[Block], points: np.ndarray) -> Dict[int, int]:
    """
    Count points per block; a point on a shared edge goes to the lower block id.

    Points outside every block are not counted.
    """
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    counts: Dict[int, int] = {}
    free = np.ones(len(points), dtype=bool)
    for block, shape in zip(blocks, _block_shapes(blocks)):
        hit = free & shapely.intersects_xy(shape, points[:, 0], points[:, 1])
        counts[block.id] = int(hit.sum())
        free &= ~hit
    if free.any():
        logger.debug(f"{int(free.sum())} points fall outside every block")
    return counts


def _street_coords(street: NaturalStreet, a: PlanarArrangement) -> np.ndarray:
    """Member edge geometries joined head to tail along the chain"""
    edges = [a.edges[eid] for eid in street.edge_ids]
    first = edges[0].coords
    if len(edges) > 1 and edges[0].start in (edges[1].start, edges[1].end):
        first = first[::-1]
    parts = [first]
    for edge in edges[1:]:
        c = edge.coords
        if np.allclose(c[-1], parts[-1][-1]):
            c = c[::-1]
        parts.append(c[1:])
    return np.vstack(parts)


def streets_geojson(streets: Sequence[NaturalStreet], a: PlanarArrangement,
                    graph: Optional[ConnectivityGraph] = None) -> dict:
    degrees = graph.degrees if graph is not None else {}
    features = []
    for street in streets:
        properties = {"id": street.id, "length": street.length, "edges": street.edge_ids}
        if street.name:
            properties["name"] = street.name
        if street.id in degrees:
            properties["degree"] = degrees[street.id]
        geometry = {"type": "LineString", "coordinates": _street_coords(street, a).tolist()}
        features.append(make_feature(geometry, properties))
    return feature_collection(features)


def blocks_geojson(blocks: Sequence[Block]) -> dict:
    features = []
    for block in blocks:
        properties = {"id": block.id, "area": block.area, "adjacency": block.adjacency}
        if block.border_number is not None:
            properties["border_number"] = block.border_number
        geometry = {"type": "Polygon", "coordinates": [block.ring.tolist()]}
        features.append(make_feature(geometry, properties))
    return feature_collection(features)


def cities_geojson(cities: Sequence[NaturalCity], blocks: Sequence[Block]) -> dict:
    shapes = dict(zip([b.id for b in blocks], _block_shapes(blocks)))
    features = []
    for city in cities:
        outline = shapely.union_all([shapes[i] for i in city.block_ids])
        properties = {"id": city.id, "area": city.area, "blocks": city.block_ids}
        if city.hotspots:
            properties["hotspots"] = city.hotspots
        features.append(make_feature(mapping(outline), properties))
    return feature_collection(features)
