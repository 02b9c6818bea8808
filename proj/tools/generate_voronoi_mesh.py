#!/usr/bin/env python3
"""Centroidal Voronoi mesh of a rectangle, written in the patchdg JSON format.

Seeds are mirrored across the four sides so that every cell of an interior
seed is bounded and clipped exactly by the rectangle; a few Lloyd sweeps
make the cells well shaped.
"""

import argparse
import json

import numpy as np
from scipy.spatial import Voronoi


def mirrored(points, box):
    x0, x1, y0, y1 = box
    left = points.copy()
    left[:, 0] = 2 * x0 - left[:, 0]
    right = points.copy()
    right[:, 0] = 2 * x1 - right[:, 0]
    down = points.copy()
    down[:, 1] = 2 * y0 - down[:, 1]
    up = points.copy()
    up[:, 1] = 2 * y1 - up[:, 1]
    return np.vstack([points, left, right, down, up])


def polygon_area_centroid(poly):
    x, y = poly[:, 0], poly[:, 1]
    xs, ys = np.roll(x, -1), np.roll(y, -1)
    cross = x * ys - xs * y
    area = 0.5 * cross.sum()
    cx = ((x + xs) * cross).sum() / (6 * area)
    cy = ((y + ys) * cross).sum() / (6 * area)
    return area, np.array([cx, cy])


def cells_of(points, box):
    vor = Voronoi(mirrored(points, box))
    cells = []
    for i in range(len(points)):
        region = vor.regions[vor.point_region[i]]
        if -1 in region or not region:
            raise RuntimeError("unbounded cell for an interior seed")
        poly = vor.vertices[region]
        area, _ = polygon_area_centroid(poly)
        if area < 0:
            poly = poly[::-1]
        cells.append(poly)
    return cells


def lloyd(points, box, sweeps):
    for _ in range(sweeps):
        points = np.array([polygon_area_centroid(c)[1] for c in cells_of(points, box)])
    return points


def build_mesh(cells, box, merge_tol):
    x0, x1, y0, y1 = box
    nodes, index, out = [], {}, []

    def node_id(p):
        p = p.copy()
        for k, lo, hi in ((0, x0, x1), (1, y0, y1)):
            if abs(p[k] - lo) < merge_tol:
                p[k] = lo
            if abs(p[k] - hi) < merge_tol:
                p[k] = hi
        key = (round(p[0] / merge_tol), round(p[1] / merge_tol))
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                hit = index.get((key[0] + dx, key[1] + dy))
                if hit is not None and np.linalg.norm(nodes[hit] - p) < merge_tol:
                    return hit
        index[key] = len(nodes)
        nodes.append(p)
        return index[key]

    for poly in cells:
        ids = []
        for p in poly:
            i = node_id(p)
            if not ids or ids[-1] != i:
                ids.append(i)
        if len(ids) > 1 and ids[0] == ids[-1]:
            ids.pop()
        out.append(ids)
    return nodes, out


def collapse_short_edges(nodes, cells, box, min_length):
    """Merge the endpoints of edges shorter than min_length, as mesh generators
    for polygonal meshes usually do; boundary and corner nodes stay in place."""
    x0, x1, y0, y1 = box
    nodes = [np.array(p) for p in nodes]

    def pinned(p):
        on_x = abs(p[0] - x0) < 1e-12 or abs(p[0] - x1) < 1e-12
        on_y = abs(p[1] - y0) < 1e-12 or abs(p[1] - y1) < 1e-12
        return on_x, on_y

    while True:
        best = None
        for c in cells:
            for i in range(len(c)):
                a, b = c[i], c[(i + 1) % len(c)]
                length = np.linalg.norm(nodes[a] - nodes[b])
                if length < min_length and (best is None or length < best[0]):
                    best = (length, a, b)
        if best is None:
            break
        _, a, b = best
        pa, pb = pinned(nodes[a]), pinned(nodes[b])
        if all(pa) and all(pb):
            break
        if all(pa) or (any(pa) and not any(pb)):
            merged = nodes[a]
        elif all(pb) or (any(pb) and not any(pa)):
            merged = nodes[b]
        else:
            merged = 0.5 * (nodes[a] + nodes[b])
        nodes[a] = merged
        new_cells = []
        for c in cells:
            ids = []
            for i in c:
                i = a if i == b else i
                if not ids or ids[-1] != i:
                    ids.append(i)
            if len(ids) > 1 and ids[0] == ids[-1]:
                ids.pop()
            new_cells.append(ids)
        cells = new_cells
    used = sorted({i for c in cells for i in c})
    renumber = {old: new for new, old in enumerate(used)}
    return [nodes[i] for i in used], [[renumber[i] for i in c] for c in cells]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--cells", type=int, required=True)
    parser.add_argument("--seed", type=int, default=2024)
    parser.add_argument("--sweeps", type=int, default=60)
    parser.add_argument("--box", type=float, nargs=4, default=[-1.0, 1.0, -1.0, 1.0])
    parser.add_argument("--merge-tol", type=float, default=1e-9)
    parser.add_argument("--collapse", type=float, default=0.1,
                        help="collapse edges shorter than this fraction of the mean cell size")
    parser.add_argument("--out", required=True)
    args = parser.parse_args()

    box = tuple(args.box)
    rng = np.random.default_rng(args.seed)
    points = np.column_stack([rng.uniform(box[0], box[1], args.cells), rng.uniform(box[2], box[3], args.cells)])
    points = lloyd(points, box, args.sweeps)
    nodes, cells = build_mesh(cells_of(points, box), box, args.merge_tol)
    cell_size = np.sqrt((box[1] - box[0]) * (box[3] - box[2]) / args.cells)
    nodes, cells = collapse_short_edges(nodes, cells, box, args.collapse * cell_size)
    with open(args.out, "w") as f:
        json.dump({"nodes": [[float(x), float(y)] for x, y in nodes], "cells": cells}, f)
        f.write("\n")


if __name__ == "__main__":
    main()
