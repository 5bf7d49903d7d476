# geoscale/services/arrangement.py
"""
Noding of street segments into a planar arrangement and face tracing.

Junctions are segment endpoints, crossings and endpoints that come within the
snap tolerance of another segment. Interior vertices of an input polyline stay
as edge geometry; they never become junctions on their own.
"""
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
import shapely
from shapely import STRtree

from geoscale.core.config import settings
from geoscale.core.exceptions import GeometryError, InputError, TopologyError
from geoscale.models.geometry import snap_tolerance_for
from geoscale.models.street import Edge, Face, Node, PlanarArrangement, StreetSegment
from geoscale.services.geometry import ring_signed_area

logger = logging.getLogger("geoscale.arrangement")

HalfEdge = Tuple[int, bool]


class _Entry:
    """Vertex or split point along one input segment"""

    __slots__ = ("position", "xy", "junction", "node")

    def __init__(self, position: float, xy: np.ndarray, junction: bool):
        self.position = position
        self.xy = xy
        self.junction = junction
        self.node = -1


def _piece_split_points(coords: List[np.ndarray], tol: float) -> Dict[int, List[Tuple[float, np.ndarray]]]:
    """
    Split parameters per straight piece: (piece index, t in [0, 1], point).

    Pieces are the 2-point sub-segments of every input polyline. Crossings come
    from an STRtree intersects query; near misses from a dwithin query on the
    segment endpoints.
    """
    starts, ends, source, index = [], [], [], []
    for s, arr in enumerate(coords):
        starts.append(arr[:-1])
        ends.append(arr[1:])
        source.extend([s] * (len(arr) - 1))
        index.extend(range(len(arr) - 1))
    a = np.vstack(starts)
    b = np.vstack(ends)
    source = np.asarray(source)
    index = np.asarray(index)
    last = np.asarray([len(arr) - 2 for arr in coords])

    pieces = shapely.linestrings(np.stack([a, b], axis=1))
    tree = STRtree(pieces)
    splits: Dict[int, List[Tuple[float, np.ndarray]]] = {}

    def add(piece: int, point: np.ndarray) -> None:
        d = b[piece] - a[piece]
        t = float(np.dot(point - a[piece], d) / np.dot(d, d))
        splits.setdefault(piece, []).append((min(max(t, 0.0), 1.0), point))

    left, right = tree.query(pieces, predicate="intersects")
    keep = left < right
    left, right = left[keep], right[keep]
    # consecutive pieces of one polyline always touch at their shared vertex
    same = source[left] == source[right]
    keep = ~(same & (np.abs(index[left] - index[right]) == 1))
    left, right = left[keep], right[keep]
    if len(left):
        hits = shapely.intersection(pieces[left], pieces[right])
        points, owner = shapely.get_coordinates(hits, return_index=True)
        for point, k in zip(points, owner):
            add(int(left[k]), point)
            add(int(right[k]), point)

    endpoints = np.vstack([np.vstack([arr[0], arr[-1]]) for arr in coords])
    end_source = np.repeat(np.arange(len(coords)), 2)
    end_piece = np.column_stack([np.zeros(len(coords), dtype=int), last]).ravel()
    ends, near = tree.query(shapely.points(endpoints), predicate="dwithin", distance=tol)
    for p, k in zip(ends, near):
        if source[k] == end_source[p] and index[k] == end_piece[p]:
            continue
        d = b[k] - a[k]
        t = min(max(float(np.dot(endpoints[p] - a[k], d) / np.dot(d, d)), 0.0), 1.0)
        add(int(k), a[k] + t * d)

    # re-key by (source, piece index)
    by_piece: Dict[int, List[Tuple[float, np.ndarray]]] = {}
    for k, found in splits.items():
        by_piece.setdefault(int(source[k]), []).extend(
            (float(index[k]) + t, point) for t, point in found
        )
    return by_piece


def _entries(arr: np.ndarray, split_points: List[Tuple[float, np.ndarray]], tol: float) -> List[_Entry]:
    """Vertices and split points of one polyline in order, near-duplicates merged"""
    raw = [_Entry(float(i), arr[i], i == 0 or i == len(arr) - 1) for i in range(len(arr))]
    raw.extend(_Entry(pos, np.asarray(xy, dtype=float), True) for pos, xy in split_points)
    raw.sort(key=lambda e: e.position)

    merged: List[_Entry] = [raw[0]]
    for entry in raw[1:]:
        prev = merged[-1]
        if math.hypot(*(entry.xy - prev.xy)) <= tol:
            # keep original vertex coordinates, keep the junction flag
            if prev.position != int(prev.position) and entry.position == int(entry.position):
                prev.xy = entry.xy
            prev.junction = prev.junction or entry.junction
            continue
        merged.append(entry)
    return merged


def _cluster_junctions(junctions: List[np.ndarray], tol: float) -> Tuple[List[int], List[np.ndarray]]:
    """Union junction points closer than tol; returns per-point cluster id and cluster centres"""
    points = np.asarray(junctions, dtype=float)
    tree = STRtree(shapely.points(points))
    left, right = tree.query(shapely.points(points), predicate="dwithin", distance=tol)

    g = nx.Graph()
    g.add_nodes_from(range(len(points)))
    g.add_edges_from(zip(left.tolist(), right.tolist()))

    cluster_of = [0] * len(points)
    centres: List[np.ndarray] = []
    for members in sorted(nx.connected_components(g), key=min):
        for m in members:
            cluster_of[m] = len(centres)
        centres.append(points[sorted(members)].mean(axis=0))
    return cluster_of, centres


def _direction(a: np.ndarray, b: np.ndarray) -> float:
    return math.atan2(float(b[1] - a[1]), float(b[0] - a[0]))


def _same_geometry(x: np.ndarray, y: np.ndarray, tol: float) -> bool:
    if len(x) != len(y):
        return False
    return bool(np.allclose(x, y, atol=tol, rtol=0) or np.allclose(x, y[::-1], atol=tol, rtol=0))


def _trace_faces(nodes: Dict[int, Node], edges: Dict[int, Edge],
                 components: Dict[int, int]) -> List[Face]:
    """
    Walk every half-edge once, keeping the face on the left.

    At the head node the walk continues along the outgoing half-edge that comes
    next clockwise from the reversed arrival direction. Dead ends turn back on
    themselves, so dangling edges lie on a face boundary without closing one.
    """
    outgoing: Dict[int, List[Tuple[float, int, bool]]] = {n: [] for n in nodes}
    for e in edges.values():
        outgoing[e.start].append((e.start_angle, e.id, True))
        outgoing[e.end].append((e.end_angle, e.id, False))
    order: Dict[int, List[HalfEdge]] = {}
    slot: Dict[HalfEdge, int] = {}
    for n, items in outgoing.items():
        items.sort()
        order[n] = [(eid, fwd) for _, eid, fwd in items]
        for i, h in enumerate(order[n]):
            slot[h] = i

    visited = set()
    faces: List[Face] = []
    for eid in sorted(edges):
        for fwd in (True, False):
            first = (eid, fwd)
            if first in visited:
                continue
            walk: List[HalfEdge] = []
            h = first
            while True:
                visited.add(h)
                walk.append(h)
                edge = edges[h[0]]
                head = edge.end if h[1] else edge.start
                ring = order[head]
                h = ring[(slot[(h[0], not h[1])] - 1) % len(ring)]
                if h == first:
                    break

            parts = []
            for e_id, forward in walk:
                c = edges[e_id].coords
                parts.append((c if forward else c[::-1])[:-1])
            ring_xy = np.vstack(parts + [parts[0][:1]])
            start = edges[walk[0][0]]
            faces.append(Face.model_construct(
                id=len(faces),
                component=components[start.start if walk[0][1] else start.end],
                half_edges=walk,
                ring=ring_xy,
                signed_area=ring_signed_area(ring_xy),
                is_outer=False,
            ))

    outer: Dict[int, Face] = {}
    for face in faces:
        best = outer.get(face.component)
        if best is None or face.signed_area < best.signed_area:
            outer[face.component] = face
    outer_ids = {f.id for f in outer.values()}
    return [
        Face(
            id=f.id,
            component=f.component,
            half_edges=f.half_edges,
            ring=f.ring,
            signed_area=f.signed_area,
            is_outer=f.id in outer_ids,
        )
        for f in faces
    ]


def default_snap_tolerance(segments: Sequence[StreetSegment]) -> float:
    """Configured SNAP_TOLERANCE, else SNAP_FACTOR x the diagonal of all coordinates"""
    if settings.SNAP_TOLERANCE is not None:
        return settings.SNAP_TOLERANCE
    coords = np.vstack([s.geometry.vertices for s in segments])
    return snap_tolerance_for(coords, settings.SNAP_FACTOR)


def build_arrangement(segments: Sequence[StreetSegment],
                      snap_tolerance: Optional[float] = None) -> PlanarArrangement:
    if not segments:
        raise InputError("a street network needs at least 1 segment")
    ids = [s.id for s in segments]
    if len(set(ids)) != len(ids):
        dup = sorted({i for i in ids if ids.count(i) > 1})
        raise InputError(f"duplicate segment ids: {dup[:5]}")
    tol = snap_tolerance if snap_tolerance is not None else default_snap_tolerance(segments)
    if not tol > 0:
        raise InputError(f"snap tolerance must be positive, got {tol}")

    coords = [s.geometry.vertices for s in segments]
    split_points = _piece_split_points(coords, tol)
    entries = [_entries(arr, split_points.get(i, []), tol) for i, arr in enumerate(coords)]

    junction_xy = [e.xy for line in entries for e in line if e.junction]
    cluster_of, centres = _cluster_junctions(junction_xy, tol)
    k = 0
    for line in entries:
        for e in line:
            if e.junction:
                e.node = cluster_of[k]
                k += 1

    # raw pieces between consecutive junctions: (start node, end node, coords, segment)
    raw: List[Tuple[int, int, np.ndarray, StreetSegment]] = []
    for seg, line in zip(segments, entries):
        current = [line[0]]
        for e in line[1:]:
            current.append(e)
            if not e.junction:
                continue
            start, end = current[0].node, e.node
            xy = [centres[start]]
            for inner in current[1:-1]:
                if math.hypot(*(inner.xy - xy[-1])) > tol:
                    xy.append(inner.xy)
            if len(xy) > 1 and math.hypot(*(centres[end] - xy[-1])) <= tol:
                xy.pop()
            xy.append(centres[end])
            current = [e]
            if len(xy) == 2 and (start == end or math.hypot(*(xy[1] - xy[0])) <= tol):
                logger.debug(f"Dropped collapsed piece of segment {seg.id}")
                continue
            xy = np.asarray(xy, dtype=float)
            if start == end:
                # closed loop: split at the middle vertex
                mid = len(xy) // 2
                centres.append(xy[mid])
                new = len(centres) - 1
                raw.append((start, new, xy[: mid + 1], seg))
                raw.append((new, end, xy[mid:], seg))
            else:
                raw.append((start, end, xy, seg))

    if not raw:
        raise GeometryError("all segments collapse within the snap tolerance")

    # merge identical duplicates, renumber nodes by first use
    kept: List[Tuple[int, int, np.ndarray, StreetSegment]] = []
    by_pair: Dict[Tuple[int, int], List[np.ndarray]] = {}
    for start, end, xy, seg in raw:
        key = (min(start, end), max(start, end))
        if any(_same_geometry(xy, other, tol) for other in by_pair.get(key, [])):
            logger.debug(f"Merged duplicate edge of segment {seg.id}")
            continue
        by_pair.setdefault(key, []).append(xy)
        kept.append((start, end, xy, seg))

    renumber: Dict[int, int] = {}
    for start, end, _, _ in kept:
        for n in (start, end):
            if n not in renumber:
                renumber[n] = len(renumber)
    nodes = {
        new: Node(id=new, x=float(centres[old][0]), y=float(centres[old][1]))
        for old, new in renumber.items()
    }

    edges: Dict[int, Edge] = {}
    for start, end, xy, seg in kept:
        eid = len(edges)
        steps = np.diff(xy, axis=0)
        edges[eid] = Edge(
            id=eid,
            start=renumber[start],
            end=renumber[end],
            coords=xy,
            length=float(np.hypot(steps[:, 0], steps[:, 1]).sum()),
            start_angle=_direction(xy[0], xy[1]),
            end_angle=_direction(xy[-1], xy[-2]),
            segment_id=seg.id,
            name=seg.name,
        )

    g = nx.MultiGraph()
    g.add_nodes_from(nodes)
    g.add_edges_from((e.start, e.end) for e in edges.values())
    components: Dict[int, int] = {}
    for c, members in enumerate(sorted(nx.connected_components(g), key=min)):
        for n in members:
            components[n] = c

    faces = _trace_faces(nodes, edges, components)
    arrangement = PlanarArrangement(
        nodes=nodes,
        edges=edges,
        faces=faces,
        components=components,
        snap_tolerance=tol,
    )
    for c in sorted(set(components.values())):
        chi = arrangement.euler_characteristic(c)
        if chi != 2:
            raise TopologyError(f"Euler check failed for component {c}: V - E + F = {chi}")

    logger.info(
        f"Built arrangement: {len(nodes)} nodes, {len(edges)} edges, "
        f"{len(faces)} faces, {arrangement.component_count} components"
    )
    return arrangement


def interior_faces(a: PlanarArrangement) -> List[Face]:
    return [f for f in a.faces if not f.is_outer and f.signed_area > 0]
