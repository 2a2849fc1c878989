#!/usr/bin/env python3
"""Regenerates data/channel_coarse.mesh, the pinned coarse mesh of the
channel-with-cylinder benchmark.

Layout: a tensor grid of blocks over (0, 2.2) x (0, 0.41) whose 2x2 block
patch around the obstacle, [0.1, 0.3]^2, is replaced by a ring of eight cells
between that square and the circle of radius 0.05 centred at (0.2, 0.2).
"""
import math
import sys

XS = [round(0.1 * i, 10) for i in range(23)]
YS = [0.0, 0.1, 0.2, 0.3, 0.41]
CENTER = (0.2, 0.2)
RADIUS = 0.05

INFLOW, OUTFLOW, WALL, CYLINDER = 0, 1, 2, 3


def main(out):
    verts = []
    grid = {}
    for j, y in enumerate(YS):
        for i, x in enumerate(XS):
            if (i, j) == (2, 2):
                continue  # centre of the obstacle patch
            grid[(i, j)] = len(verts)
            verts.append((x, y))

    cells = []
    bfaces = []
    nx, ny = len(XS) - 1, len(YS) - 1
    for j in range(ny):
        for i in range(nx):
            if i in (1, 2) and j in (1, 2):
                continue
            c = len(cells)
            cells.append((grid[(i, j)], grid[(i + 1, j)], grid[(i, j + 1)], grid[(i + 1, j + 1)]))
            if i == 0:
                bfaces.append((c, 0, INFLOW))
            if i == nx - 1:
                bfaces.append((c, 1, OUTFLOW))
            if j == 0:
                bfaces.append((c, 2, WALL))
            if j == ny - 1:
                bfaces.append((c, 3, WALL))

    # Square points in counter-clockwise order starting at angle 0.
    square = [(3, 2), (3, 3), (2, 3), (1, 3), (1, 2), (1, 1), (2, 1), (3, 1)]
    inner = []
    for s in range(8):
        t = s * math.pi / 4.0
        inner.append(len(verts))
        verts.append((CENTER[0] + RADIUS * math.cos(t), CENTER[1] + RADIUS * math.sin(t)))
    for s in range(8):
        a, b = s, (s + 1) % 8
        # xi_0 runs radially outward, xi_1 counter-clockwise: positive Jacobian.
        c = len(cells)
        cells.append((inner[a], grid[square[a]], inner[b], grid[square[b]]))
        bfaces.append((c, 0, CYLINDER))

    for cell in cells:
        p = [verts[v] for v in cell]
        # Jacobian determinant of the bilinear map at each corner.
        for xi, eta in ((0, 0), (1, 0), (0, 1), (1, 1)):
            dxi = [(1 - eta) * (p[1][k] - p[0][k]) + eta * (p[3][k] - p[2][k]) for k in (0, 1)]
            deta = [(1 - xi) * (p[2][k] - p[0][k]) + xi * (p[3][k] - p[1][k]) for k in (0, 1)]
            assert dxi[0] * deta[1] - dxi[1] * deta[0] > 0.0, cell

    out.write("# Coarse mesh of the channel-with-cylinder benchmark, format version 1.\n")
    out.write("# Generated by tools/gen_channel_mesh.py. See docs/mesh_format.md.\n")
    out.write("# boundary ids: 0 inflow (x=0), 1 outflow (x=2.2), 2 walls, 3 cylinder\n")
    out.write("dim 2\n")
    out.write(f"vertices {len(verts)}\n")
    for x, y in verts:
        out.write(f"{x:.17g} {y:.17g}\n")
    out.write(f"cells {len(cells)}\n")
    for cell in cells:
        out.write(" ".join(str(v) for v in cell) + "\n")
    out.write(f"boundary {len(bfaces)}\n")
    for c, f, b in bfaces:
        out.write(f"{c} {f} {b}\n")


if __name__ == "__main__":
    main(sys.stdout)
