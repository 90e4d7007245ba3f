"""Grid discretization of the quasihyperbolic density and shortest paths.

The domain is covered by a level-0 lattice of cell size h anchored at the
bounding-box corner. Cells within 8 cell-widths of the boundary split into
four until boundary_layer extra levels are reached. A leaf cell becomes a
node when its center lies inside with delta > cell/2. Neighboring leaves
(same level 4/8-neighborhood, or one level apart) are joined when the
connecting segment stays inside; each edge carries the trapezoid weight
|u-v| * (1/delta(u) + 1/delta(v)) / 2 and, in parallel, its Euclidean
length for the inner metric.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph
from scipy.spatial import cKDTree

from .domains import Domain, FootFingersSpec, foot_fingers_layout
from .errors import DomainError, ResolutionError, UnreachableError
from .geometry import as_point
from .paths import PathPolyline

_NO_PRED = -9999  # scipy's "no predecessor" sentinel


@dataclass(frozen=True)
class GridParams:
    h: float
    boundary_layer: int = 0
    diag: bool = True

    def __post_init__(self):
        if not (isinstance(self.h, (int, float)) and math.isfinite(self.h) and self.h > 0):
            raise ResolutionError("h must be a positive real")
        if int(self.boundary_layer) != self.boundary_layer or self.boundary_layer < 0:
            raise ResolutionError("boundary_layer must be a nonnegative integer")


class GridGraph:
    """Immutable weighted grid graph over a compiled domain."""

    def __init__(self, domain: Domain, params: GridParams, centers: np.ndarray,
                 deltas: np.ndarray, levels: np.ndarray, csr_qh, csr_euc,
                 labels: np.ndarray, warnings: list[str]):
        self.domain = domain
        self.params = params
        self.centers = centers
        self.deltas = deltas
        self.levels = levels
        self.csr_qh = csr_qh
        self.csr_euc = csr_euc
        self.labels = labels
        self.warnings = warnings
        self._tree = cKDTree(centers)

    @property
    def node_count(self) -> int:
        return len(self.centers)

    @property
    def edge_count(self) -> int:
        return self.csr_qh.nnz // 2

    def __repr__(self) -> str:
        return (f"GridGraph({self.node_count} nodes, {self.edge_count} edges, "
                f"h={self.params.h}, layers={self.params.boundary_layer})")

    # -- node lookup ------------------------------------------------------

    def nearest_node(self, p) -> int:
        """Nearest node by Euclidean distance; ties go to the lowest index."""
        pt = as_point(p)
        if not self.domain.contains(pt):
            raise DomainError(f"point ({pt.x}, {pt.y}) is not inside the domain")
        arr = np.array([pt.x, pt.y])
        k = min(8, self.node_count)
        d, idx = self._tree.query(arr, k=k)
        d = np.atleast_1d(d)
        idx = np.atleast_1d(idx)
        tied = idx[d <= d.min() * (1.0 + 1e-12)]
        return int(tied.min())

    def attach(self, p) -> tuple[int, float, float]:
        """Attach a query point to an admissible node.

        Returns (node, qh stub weight, Euclidean stub length). The node is
        the nearest one whose connecting segment provably stays inside
        (certified by the delta balls or by an explicit crossing test).
        """
        pt = as_point(p)
        if not self.domain.contains(pt):
            raise DomainError(f"point ({pt.x}, {pt.y}) is not inside the domain")
        arr = np.array([pt.x, pt.y])
        dp = float(self.domain.delta_many(arr[None])[0])
        k = min(64, self.node_count)
        dists, idxs = self._tree.query(arr, k=k)
        dists = np.atleast_1d(dists)
        idxs = np.atleast_1d(idxs)
        for o in np.lexsort((idxs, dists)):
            d = float(dists[o])
            u = int(idxs[o])
            if d < 1e-15:
                return u, 0.0, 0.0
            if min(dp, self.deltas[u]) <= d:
                crosses = self.domain.crossings(arr[None], self.centers[u][None])
                if bool(crosses[0]):
                    continue
            stub = d * 0.5 * (1.0 / dp + 1.0 / self.deltas[u])
            return u, stub, d
        raise ResolutionError(
            f"no admissible node near ({pt.x}, {pt.y}); refine the grid")

    # -- shortest paths ---------------------------------------------------

    def _check_component(self, u: int, v: int) -> None:
        if self.labels[u] != self.labels[v]:
            raise UnreachableError(
                "endpoints fall in different graph components; refine the grid "
                "or check that the domain is connected")

    def qh_distance(self, x, y) -> float:
        px, py = as_point(x), as_point(y)
        if px.x == py.x and px.y == py.y:
            return 0.0
        u, stub_u, _ = self.attach(px)
        v, stub_v, _ = self.attach(py)
        if u == v:
            return stub_u + stub_v
        self._check_component(u, v)
        # run from the lower node id so k(x, y) == k(y, x) bitwise
        d = csgraph.dijkstra(self.csr_qh, directed=False, indices=min(u, v))
        return stub_u + stub_v + float(d[max(u, v)])

    def qh_geodesic(self, x, y) -> PathPolyline:
        px, py = as_point(x), as_point(y)
        dx = float(self.domain.delta_many(np.array([[px.x, px.y]]))[0])
        if px.x == py.x and px.y == py.y:
            if not self.domain.contains(px):
                raise DomainError(f"point ({px.x}, {px.y}) is not inside the domain")
            return PathPolyline(np.array([[px.x, px.y]]), np.array([dx]))
        u, _, _ = self.attach(px)
        v, _, _ = self.attach(py)
        dy = float(self.domain.delta_many(np.array([[py.x, py.y]]))[0])
        if u == v:
            chain = [u]
        else:
            self._check_component(u, v)
            _, pred = csgraph.dijkstra(self.csr_qh, directed=False, indices=u,
                                       return_predecessors=True)
            chain = self._chain(pred, u, v)
        points = np.vstack([[px.x, px.y], self.centers[chain], [py.x, py.y]])
        deltas = np.concatenate([[dx], self.deltas[chain], [dy]])
        return PathPolyline(points, deltas)

    @staticmethod
    def _chain(pred: np.ndarray, u: int, v: int) -> list[int]:
        out = [v]
        while out[-1] != u:
            p = int(pred[out[-1]])
            if p == _NO_PRED:
                raise UnreachableError("no path between the attached nodes")
            out.append(p)
        return out[::-1]

    def inner_distance(self, x, y) -> float:
        px, py = as_point(x), as_point(y)
        if px.x == py.x and px.y == py.y:
            return 0.0
        u, _, eu = self.attach(px)
        v, _, ev = self.attach(py)
        if u == v:
            return eu + ev
        self._check_component(u, v)
        d = csgraph.dijkstra(self.csr_euc, directed=False, indices=min(u, v))
        return eu + ev + float(d[max(u, v)])

    def inner_geodesic(self, x, y) -> PathPolyline:
        px, py = as_point(x), as_point(y)
        dx = float(self.domain.delta_many(np.array([[px.x, px.y]]))[0])
        dy = float(self.domain.delta_many(np.array([[py.x, py.y]]))[0])
        u, _, _ = self.attach(px)
        v, _, _ = self.attach(py)
        if u == v:
            chain = [u]
        else:
            self._check_component(u, v)
            _, pred = csgraph.dijkstra(self.csr_euc, directed=False, indices=u,
                                       return_predecessors=True)
            chain = self._chain(pred, u, v)
        points = np.vstack([[px.x, px.y], self.centers[chain], [py.x, py.y]])
        deltas = np.concatenate([[dx], self.deltas[chain], [dy]])
        return PathPolyline(points, deltas)

    def dist_field(self, source) -> np.ndarray:
        """Quasihyperbolic distance from a point to every node (stub included)."""
        u, stub, _ = self.attach(source)
        d = csgraph.dijkstra(self.csr_qh, directed=False, indices=u)
        return d + stub

    def node_field(self, node: int) -> np.ndarray:
        return csgraph.dijkstra(self.csr_qh, directed=False, indices=int(node))

    def node_field_with_pred(self, node: int) -> tuple[np.ndarray, np.ndarray]:
        return csgraph.dijkstra(self.csr_qh, directed=False, indices=int(node),
                                return_predecessors=True)

    def multi_source_field(self, nodes) -> np.ndarray:
        """Min quasihyperbolic graph distance from a node set to every node."""
        nodes = np.asarray(nodes, dtype=np.int64)
        if len(nodes) == 0:
            raise ValueError("need at least one source node")
        n = self.node_count
        a = self.csr_qh
        indptr = np.concatenate([a.indptr, [a.indptr[-1] + len(nodes)]])
        indices = np.concatenate([a.indices, nodes])
        data = np.concatenate([a.data, np.zeros(len(nodes))])
        aug = sparse.csr_matrix((data, indices, indptr), shape=(n + 1, n + 1))
        d = csgraph.dijkstra(aug, directed=False, indices=n)
        return d[:n]

    def node_distance_matrix(self, nodes, chunk: int = 45) -> np.ndarray:
        """Pairwise graph distances between the given nodes."""
        nodes = np.asarray(nodes, dtype=np.int64)
        out = np.empty((len(nodes), len(nodes)))
        for s in range(0, len(nodes), chunk):
            rows = csgraph.dijkstra(self.csr_qh, directed=False,
                                    indices=nodes[s:s + chunk])
            out[s:s + chunk] = rows[:, nodes]
        return out


def _level_keys(ix: np.ndarray, iy: np.ndarray, ny: int) -> np.ndarray:
    return ix.astype(np.int64) * np.int64(ny) + iy.astype(np.int64)


def build_grid(domain: Domain, gp: GridParams) -> GridGraph:
    lo = np.asarray(domain.bbox_lo, dtype=float)
    hi = np.asarray(domain.bbox_hi, dtype=float)
    h = float(gp.h)
    levels_max = int(gp.boundary_layer)
    n0x = max(1, int(math.ceil((hi[0] - lo[0]) / h - 1e-12)))
    n0y = max(1, int(math.ceil((hi[1] - lo[1]) / h - 1e-12)))

    # refine: split any cell whose center is within 8 cell-widths of a curve
    gx, gy = np.meshgrid(np.arange(n0x), np.arange(n0y), indexing="ij")
    cur_ix, cur_iy = gx.ravel(), gy.ravel()
    lev_ix: list[np.ndarray] = []
    lev_iy: list[np.ndarray] = []
    lev_cent: list[np.ndarray] = []
    lev_delta: list[np.ndarray] = []
    for lev in range(levels_max + 1):
        s = h / (1 << lev)
        cent = lo + (np.column_stack([cur_ix, cur_iy]) + 0.5) * s
        dist = domain.delta_many(cent)
        if lev < levels_max:
            split = dist < 8.0 * s
        else:
            split = np.zeros(len(cur_ix), dtype=bool)
        keep = ~split
        kcent = cent[keep]
        inside = domain.contains_many(kcent)
        ok = inside & (dist[keep] > 0.5 * s)
        order = np.lexsort((cur_iy[keep][ok], cur_ix[keep][ok]))
        lev_ix.append(cur_ix[keep][ok][order])
        lev_iy.append(cur_iy[keep][ok][order])
        lev_cent.append(kcent[ok][order])
        lev_delta.append(dist[keep][ok][order])
        if lev < levels_max:
            six, siy = cur_ix[split], cur_iy[split]
            cur_ix = ((2 * six)[:, None] + np.array([0, 1, 0, 1])).ravel()
            cur_iy = ((2 * siy)[:, None] + np.array([0, 0, 1, 1])).ravel()
            if len(cur_ix) == 0 and lev + 1 <= levels_max:
                # nothing left to refine; remaining levels are empty
                for _ in range(lev + 1, levels_max + 1):
                    lev_ix.append(np.zeros(0, dtype=np.int64))
                    lev_iy.append(np.zeros(0, dtype=np.int64))
                    lev_cent.append(np.zeros((0, 2)))
                    lev_delta.append(np.zeros(0))
                break

    counts = [len(a) for a in lev_ix]
    total = int(sum(counts))
    if total == 0:
        raise ResolutionError("grid admits no nodes; decrease h or refine less")
    offsets = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
    centers = np.vstack([c for c in lev_cent if len(c)] or [np.zeros((0, 2))])
    deltas = np.concatenate(lev_delta)
    levels = np.concatenate([np.full(counts[i], i, dtype=np.int8)
                             for i in range(len(counts))])

    keys = [_level_keys(lev_ix[i], lev_iy[i], n0y * (1 << i)) for i in range(len(counts))]

    edges_u: list[np.ndarray] = []
    edges_v: list[np.ndarray] = []

    def lookup(level: int, qx: np.ndarray, qy: np.ndarray, src_global: np.ndarray):
        """Append edges src -> (qx,qy)@level for candidates that exist."""
        nx = n0x * (1 << level)
        ny = n0y * (1 << level)
        valid = (qx >= 0) & (qx < nx) & (qy >= 0) & (qy < ny)
        if not valid.any():
            return
        qk = _level_keys(qx[valid], qy[valid], ny)
        pos = np.searchsorted(keys[level], qk)
        inb = pos < len(keys[level])
        hit = np.zeros(len(qk), dtype=bool)
        hit[inb] = keys[level][pos[inb]] == qk[inb]
        if not hit.any():
            return
        edges_u.append(src_global[valid][hit])
        edges_v.append(offsets[level] + pos[hit])

    for lev in range(len(counts)):
        if counts[lev] == 0:
            continue
        ix, iy = lev_ix[lev], lev_iy[lev]
        src = offsets[lev] + np.arange(counts[lev], dtype=np.int64)
        same = [(1, 0), (0, 1)] + ([(1, 1), (1, -1)] if gp.diag else [])
        for dx, dy in same:
            lookup(lev, ix + dx, iy + dy, src)
        if lev + 1 < len(counts) and counts[lev + 1] > 0:
            side = [(2, 0), (2, 1), (-1, 0), (-1, 1),   # left/right fine neighbors
                    (0, 2), (1, 2), (0, -1), (1, -1)]   # top/bottom fine neighbors
            corner = [(2, 2), (2, -1), (-1, 2), (-1, -1)] if gp.diag else []
            for ax, ay in side + corner:
                lookup(lev + 1, 2 * ix + ax, 2 * iy + ay, src)

    if edges_u:
        eu = np.concatenate(edges_u)
        ev = np.concatenate(edges_v)
        seg = centers[ev] - centers[eu]
        elen = np.hypot(seg[:, 0], seg[:, 1])
        # certified-inside edges skip the crossing test: the segment lies in
        # the delta-ball of one endpoint whenever min(delta) > |u-v|
        need = np.minimum(deltas[eu], deltas[ev]) <= elen
        ok = np.ones(len(eu), dtype=bool)
        if need.any():
            ok[need] = ~domain.crossings(centers[eu[need]], centers[ev[need]])
        eu, ev, elen = eu[ok], ev[ok], elen[ok]
        wq = elen * 0.5 * (1.0 / deltas[eu] + 1.0 / deltas[ev])
        rows = np.concatenate([eu, ev])
        cols = np.concatenate([ev, eu])
        csr_qh = sparse.csr_matrix(
            (np.concatenate([wq, wq]), (rows, cols)), shape=(total, total))
        csr_euc = sparse.csr_matrix(
            (np.concatenate([elen, elen]), (rows, cols)), shape=(total, total))
    else:
        csr_qh = sparse.csr_matrix((total, total))
        csr_euc = sparse.csr_matrix((total, total))

    _, labels = csgraph.connected_components(csr_qh, directed=False)

    warnings: list[str] = []
    finest = h / (1 << levels_max)
    if isinstance(domain.spec, FootFingersSpec):
        for f in foot_fingers_layout(domain.spec):
            if f.w < 4.0 * finest:
                warnings.append(
                    f"corridor of finger {f.m} (width {f.w:.3e}) is narrower than 4 "
                    f"finest cells ({finest:.3e}); distances through it may be coarse")

    graph = GridGraph(domain, gp, centers, deltas, levels, csr_qh, csr_euc,
                      labels, warnings)

    # anchors falling in distinct components signal an under-resolved build
    anchor_comps = set()
    for name, anc in sorted(domain.anchors.items()):
        arr = np.array([[anc.point.x, anc.point.y]])
        if domain.contains_many(arr)[0]:
            try:
                u, _, _ = graph.attach(anc.point)
            except (ResolutionError, DomainError):
                continue
            anchor_comps.add(int(labels[u]))
    if len(anchor_comps) > 1:
        warnings.append(
            f"declared anchors span {len(anchor_comps)} graph components; "
            f"the grid may be too coarse for the narrow features")
    return graph


def nearest_node(g: GridGraph, p) -> int:
    return g.nearest_node(p)


def qh_distance(g: GridGraph, x, y) -> float:
    return g.qh_distance(x, y)


def qh_geodesic(g: GridGraph, x, y) -> PathPolyline:
    return g.qh_geodesic(x, y)


def inner_distance(g: GridGraph, x, y) -> float:
    return g.inner_distance(x, y)


def dist_field(g: GridGraph, source) -> np.ndarray:
    return g.dist_field(source)
