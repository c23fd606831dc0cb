"""Reference lattice topologies used as routing baselines.

All three live on a rows x cols grid sized to hold the requested qubit
count (rows = floor(sqrt(q)), cols as needed). Vertex ids are row-major.

  square        grid edges only, interior degree 4
  triangular    grid plus one consistent diagonal per face, interior degree 6
  cross_square  grid plus both diagonals in checkerboard faces; the
                crossing diagonals make it deliberately non-planar, which
                is tolerated for this baseline (flagged planar_exempt)
"""
from __future__ import annotations

import math

from .graph import CouplingGraph

LATTICE_KINDS = ("square", "triangular", "cross_square")


def grid_shape(n_qubits: int) -> tuple[int, int]:
    if n_qubits < 1:
        raise ValueError("need at least one qubit")
    rows = max(1, int(math.isqrt(n_qubits)))
    cols = -(-n_qubits // rows)
    return rows, cols


def lattice(kind: str, n_qubits: int) -> CouplingGraph:
    if kind not in LATTICE_KINDS:
        raise ValueError(f"unknown lattice kind {kind!r}, pick one of {LATTICE_KINDS}")
    rows, cols = grid_shape(n_qubits)

    def vid(i: int, j: int) -> int:
        return i * cols + j

    edges: list[tuple[int, int, float]] = []
    for i in range(rows):
        for j in range(cols):
            if j + 1 < cols:
                edges.append((vid(i, j), vid(i, j + 1), 1.0))
            if i + 1 < rows:
                edges.append((vid(i, j), vid(i + 1, j), 1.0))
    for i in range(rows - 1):
        for j in range(cols - 1):
            if kind == "triangular":
                edges.append((vid(i, j), vid(i + 1, j + 1), 1.0))
            elif kind == "cross_square" and (i + j) % 2 == 0:
                edges.append((vid(i, j), vid(i + 1, j + 1), 1.0))
                edges.append((vid(i + 1, j), vid(i, j + 1), 1.0))
    return CouplingGraph(rows * cols, edges)


def planar_exempt(kind: str) -> bool:
    """cross_square trades planarity for connectivity; the others keep it."""
    return kind == "cross_square"
