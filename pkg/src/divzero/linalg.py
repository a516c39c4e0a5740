"""Exact linear algebra over Q(i): reduced row echelon form, rank, nullspace."""

from __future__ import annotations

from typing import Sequence

from .scalar import ONE, ZERO, Scalar, as_scalar

__all__ = ["rref", "rank", "nullspace", "in_span"]


def _matrix(rows: Sequence[Sequence]) -> list[list[Scalar]]:
    m = [[as_scalar(x) for x in row] for row in rows]
    if m and any(len(row) != len(m[0]) for row in m):
        raise ValueError("ragged matrix")
    return m


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = _matrix(rows)
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((k for k in range(r, len(m)) if m[k][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for k in range(len(m)):
            if k != r and m[k][c]:
                f = m[k][c]
                m[k] = [a - f * b for a, b in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Scalar]]:
    """Basis of ``{v : A v = 0}``, one vector per free column."""
    reduced, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [ZERO] * ncols
        v[fc] = ONE
        for row, pc in zip(reduced, pivots):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


def in_span(vectors: Sequence[Sequence], target: Sequence) -> bool:
    """True when ``target`` is a linear combination of ``vectors``."""
    if not vectors:
        return not any(as_scalar(x) for x in target)
    return rank(list(vectors) + [target]) == rank(vectors)
