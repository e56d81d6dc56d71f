"""Truncated universal covering tree of a regular graph.

Tree vertices are non-backtracking walks from the root, stored in BFS order.
Every vertex at depth 1..R-1 has exactly q children and they occupy one
contiguous block, so most tree operators reduce to a reshape and a sum.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import NotRegularError, RadiusTooLargeError, ZeroThetaError
from .graph import Graph, classify
from .satake import eval_Ak

DEFAULT_MAX_TREE_VERTICES = 2_000_000


def max_tree_vertices() -> int:
    env = os.environ.get("LPX_MAX_TREE_VERTICES")
    return int(env) if env else DEFAULT_MAX_TREE_VERTICES


def tree_size(q: int, R: int) -> int:
    """Number of vertices of the depth-R ball in the (q+1)-regular tree."""
    return 1 + (q + 1) * (q**R - 1) // (q - 1)


@dataclass(frozen=True, eq=False)
class TruncatedCover:
    base: Graph
    q: int
    root: int
    radius: int
    parent: np.ndarray  # -1 at the root
    depth: np.ndarray
    pi: np.ndarray  # covering map to base vertices
    level_start: np.ndarray  # level k occupies level_start[k]:level_start[k+1]

    @property
    def size(self) -> int:
        return len(self.pi)

    def level(self, k: int) -> slice:
        return slice(int(self.level_start[k]), int(self.level_start[k + 1]))

    def sphere_sizes(self) -> list[int]:
        return np.diff(self.level_start).tolist()

    def child_sum(self, f: np.ndarray) -> np.ndarray:
        """``out[v] = sum of f over the children of v`` (0 at leaves)."""
        out = np.zeros(self.size, dtype=np.result_type(f, np.float64))
        if self.radius == 0:
            return out
        q = self.q
        out[0] = f[1 : q + 2].sum()
        if self.radius > 1:
            inner = int(self.level_start[self.radius])
            out[1:inner] = f[int(self.level_start[2]) :].reshape(-1, q).sum(axis=1)
        return out

    def adjacency_apply(self, f: np.ndarray) -> np.ndarray:
        """Tree adjacency operator; neighbours beyond depth R are missing."""
        out = self.child_sum(f)
        out[1:] += f[self.parent[1:]]
        return out

    def interior(self, margin: int = 1) -> np.ndarray:
        """Mask of vertices at depth <= R - margin."""
        return self.depth <= self.radius - margin

    def ancestor(self, steps: int) -> np.ndarray:
        """``steps``-th ancestor of every vertex (-1 when above the root)."""
        a = np.arange(self.size)
        for _ in range(steps):
            a = np.where(a >= 0, self.parent[np.maximum(a, 0)], -1)
        return a

    def first_child(self, v: int) -> int:
        if self.depth[v] >= self.radius:
            raise IndexError("leaf has no children")
        if v == 0:
            return 1
        return int(self.level_start[2]) + (v - 1) * self.q

    def children(self, v: int) -> range:
        c = self.first_child(v)
        return range(c, c + (self.q + 1 if v == 0 else self.q))

    def adjacency_lists(self) -> list[tuple[int, ...]]:
        adj: list[list[int]] = [[] for _ in range(self.size)]
        for v in range(1, self.size):
            p = int(self.parent[v])
            adj[v].append(p)
            adj[p].append(v)
        return [tuple(sorted(a)) for a in adj]

    def sphere_sum_operator(self, k: int):
        """Return ``f -> (v -> sum of f over the tree sphere of radius k at v)``,
        restricted to the truncation."""
        if k < 0:
            raise ValueError("k must be >= 0")

        ancestors = [self.ancestor(i) for i in range(k + 1)]

        def apply(f: np.ndarray) -> np.ndarray:
            f = np.asarray(f)
            # down[j][v] = sum over descendants of v exactly j levels below
            down = [f.astype(np.result_type(f, np.float64))]
            for _ in range(k):
                down.append(self.child_sum(down[-1]))
            out = down[k].copy()
            for i in range(1, k + 1):
                a, below = ancestors[i], ancestors[i - 1]
                ok = a >= 0
                term = down[k - i][a[ok]]
                if i < k:
                    term = term - down[k - i - 1][below[ok]]
                out[ok] += term
            return out

        return apply


def unfold(g: Graph, root: int, R: int, cap: int | None = None) -> TruncatedCover:
    """Depth-R ball of the universal cover, realised as non-backtracking walks
    from ``root``.  Children follow the base graph's sorted neighbour order."""
    cls = classify(g)
    if cls.kind != "regular":
        raise NotRegularError("unfold needs a (q+1)-regular graph with q >= 2")
    if R < 1:
        raise ValueError("radius must be >= 1")
    if not 0 <= root < g.n:
        raise ValueError(f"root {root} out of range")
    q = cls.q
    cap = max_tree_vertices() if cap is None else cap
    total = tree_size(q, R)
    if total > cap:
        raise RadiusTooLargeError(
            f"radius {R} needs {total} tree vertices, cap is {cap} (LPX_MAX_TREE_VERTICES)"
        )
    nbr = np.array(g.adjacency, dtype=np.int64)  # n x (q+1)

    pis = [np.array([root], dtype=np.int64)]
    parents = [np.array([-1], dtype=np.int64)]
    prev_pi = np.array([-1], dtype=np.int64)  # pi of each vertex's parent
    offset = 0
    for k in range(R):
        cur = pis[-1]
        cand = nbr[cur]
        keep = cand != prev_pi[:, None]
        width = q + 1 if k == 0 else q
        children = cand[keep].reshape(len(cur), width)
        pis.append(children.ravel())
        par = np.repeat(np.arange(offset, offset + len(cur)), width)
        parents.append(par)
        prev_pi = np.repeat(cur, width)
        offset += len(cur)

    sizes = [len(p) for p in pis]
    level_start = np.zeros(R + 2, dtype=np.int64)
    np.cumsum(sizes, out=level_start[1:])
    depth = np.repeat(np.arange(R + 1), sizes)
    return TruncatedCover(
        base=g,
        q=q,
        root=root,
        radius=R,
        parent=np.concatenate(parents),
        depth=depth,
        pi=np.concatenate(pis),
        level_start=level_start,
    )


def lift(cover: TruncatedCover, f) -> np.ndarray:
    f = np.asarray(f)
    if f.shape != (cover.base.n,):
        raise ValueError(f"expected a base function of length {cover.base.n}")
    return f[cover.pi]


def spherical_average(cover: TruncatedCover, tf: np.ndarray) -> np.ndarray:
    """Replace each value by the mean over its sphere around the root."""
    tf = np.asarray(tf)
    means = np.add.reduceat(tf, cover.level_start[:-1]) / np.diff(cover.level_start)
    return means[cover.depth]


@dataclass(frozen=True, eq=False)
class RayCoordinate:
    ray: np.ndarray  # ray[j] = tree vertex at depth j
    c: np.ndarray


def ray_coordinate(cover: TruncatedCover) -> RayCoordinate:
    """Horocyclic coordinate towards the end of the leftmost ray from the root.

    ``c(v) = depth(v) - 2 j`` where ``j`` is the depth at which the root path
    of ``v`` leaves the ray.
    """
    ray = [0]
    for _ in range(cover.radius):
        ray.append(cover.first_child(ray[-1]))
    ray = np.array(ray, dtype=np.int64)
    on_ray = np.zeros(cover.size, dtype=bool)
    on_ray[ray] = True
    meet = np.zeros(cover.size, dtype=np.int64)
    # parents come before children in BFS order, so one pass suffices
    for s in range(1, cover.radius + 1):
        sl = cover.level(s)
        idx = np.arange(sl.start, sl.stop)
        meet[idx] = np.where(on_ray[idx], s, meet[cover.parent[idx]])
    return RayCoordinate(ray=ray, c=cover.depth - 2 * meet)


def sectorial_function(cover: TruncatedCover, rc: RayCoordinate, theta: complex) -> np.ndarray:
    """``v -> theta^(-c(v))``."""
    if theta == 0:
        raise ZeroThetaError("theta must be non-zero")
    return complex(theta) ** (-rc.c.astype(float))


def spherical_values(theta: complex, q: int, R: int) -> np.ndarray:
    """``A_k(theta) / |S_k|`` for k = 0..R."""
    if theta == 0:
        raise ZeroThetaError("theta must be non-zero")
    vals = [1 + 0j]
    for k in range(1, R + 1):
        vals.append(eval_Ak(theta, k, q) / ((q + 1) * q ** (k - 1)))
    return np.array(vals, dtype=complex)


def spherical_function(cover: TruncatedCover, theta: complex) -> np.ndarray:
    return spherical_values(theta, cover.q, cover.radius)[cover.depth]


@dataclass(frozen=True)
class PartialNorm:
    shells: np.ndarray
    partial_sums: np.ndarray
    growth_exponent: float
    window: tuple[int, int]


def growth_fit(shells: np.ndarray, lo: int, hi: int) -> float:
    """Fit ``log a_k = alpha k + beta log(k+1) + c`` on ``lo <= k <= hi``; return alpha.

    The log term absorbs the polynomial factor carried by the shell sums of
    spherical functions, which otherwise biases the slope at short radii.
    """
    ks = np.arange(lo, hi + 1)
    a = np.asarray(shells[lo : hi + 1], dtype=float)
    pos = a > 0
    if not pos.any():
        return -math.inf
    ks, y = ks[pos], np.log(a[pos])
    if len(ks) >= 4:
        X = np.column_stack([ks, np.log(ks + 1.0), np.ones_like(ks, dtype=float)])
    elif len(ks) >= 2:
        X = np.column_stack([ks, np.ones_like(ks, dtype=float)])
    else:
        return math.nan
    coef, *_ = np.linalg.lstsq(X.astype(float), y, rcond=None)
    return float(coef[0])


def lp_partial_norm(cover: TruncatedCover, tf: np.ndarray, p: float) -> PartialNorm:
    if p < 1:
        raise ValueError("p must be >= 1")
    w = np.abs(np.asarray(tf)) ** p
    shells = np.add.reduceat(w, cover.level_start[:-1])
    lo, hi = math.ceil(cover.radius / 2), cover.radius
    return PartialNorm(
        shells=shells,
        partial_sums=np.cumsum(shells),
        growth_exponent=growth_fit(shells, lo, hi),
        window=(lo, hi),
    )
