"""Classical MDS (power iteration) and convex hulls for the tree map."""
from __future__ import annotations

import numpy as np

POWER_TOL = 1e-10
POWER_MAX_ITER = 10_000


def _power_iteration(B: np.ndarray, rng: np.random.Generator) -> tuple[float, np.ndarray]:
    """Dominant (by magnitude) eigenpair of a symmetric matrix."""
    n = B.shape[0]
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(POWER_MAX_ITER):
        w = B @ v
        norm = np.linalg.norm(w)
        if norm < POWER_TOL:
            return 0.0, v
        v_new = w / norm
        lam = float(v_new @ B @ v_new)
        if np.linalg.norm(B @ v_new - lam * v_new) <= POWER_TOL:
            return lam, v_new
        v = v_new
    return lam, v


def mds(matrix: np.ndarray, k: int) -> np.ndarray:
    """Torgerson MDS to k dimensions (k in {1, 2}).

    Double-centers the squared distances, extracts the top-k eigenpairs by
    power iteration with deflation, clamps negative eigenvalues to zero, and
    flips each axis so the lowest-index point with a nonzero coordinate is
    positive.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError("distance matrix must be square")
    if not np.array_equal(matrix, matrix.T):
        raise ValueError("distance matrix must be symmetric")
    if k not in (1, 2):
        raise ValueError("k must be 1 or 2")
    n = matrix.shape[0]
    coords = np.zeros((n, k))
    if n == 1:
        return coords
    D2 = matrix**2
    row = D2.mean(axis=1, keepdims=True)
    col = D2.mean(axis=0, keepdims=True)
    B = -0.5 * (D2 - row - col + D2.mean())
    rng = np.random.default_rng(0)
    for axis in range(k):
        lam, v = _power_iteration(B, rng)
        B = B - lam * np.outer(v, v)
        scale = np.sqrt(max(lam, 0.0))
        column = v * scale
        for x in column:
            if x != 0.0:
                if x < 0.0:
                    column = -column
                break
        coords[:, axis] = column
    return coords


def convex_hull(points: np.ndarray) -> list[int]:
    """Monotone-chain hull, counterclockwise, collinear boundary points excluded.

    Returns indices into the input. A single point degenerates to one vertex,
    two points to a segment.
    """
    points = np.asarray(points, dtype=np.float64)
    if len(points) == 0:
        raise ValueError("no points")
    order = sorted(range(len(points)), key=lambda i: (points[i, 0], points[i, 1]))
    # Drop exact duplicates, keeping the lowest index.
    unique: list[int] = []
    for i in order:
        if unique and points[i, 0] == points[unique[-1], 0] and points[i, 1] == points[unique[-1], 1]:
            continue
        unique.append(i)
    if len(unique) <= 2:
        return unique

    def cross(o, a, b):
        return (points[a, 0] - points[o, 0]) * (points[b, 1] - points[o, 1]) - (
            points[a, 1] - points[o, 1]
        ) * (points[b, 0] - points[o, 0])

    lower: list[int] = []
    for i in unique:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], i) <= 0:
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in reversed(unique):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], i) <= 0:
            upper.pop()
        upper.append(i)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 2:  # all collinear: keep the two extremes
        return [unique[0], unique[-1]]
    return hull


def point_in_hull(point, hull_points, eps: float = 1e-9) -> bool:
    """Point containment in a counterclockwise convex polygon (boundary inclusive)."""
    hp = np.asarray(hull_points, dtype=np.float64)
    if len(hp) == 1:
        return bool(np.allclose(point, hp[0], atol=eps))
    if len(hp) == 2:
        a, b = hp
        ab = b - a
        t = np.dot(point - a, ab) / max(np.dot(ab, ab), eps)
        proj = a + np.clip(t, 0.0, 1.0) * ab
        return bool(np.linalg.norm(point - proj) <= eps)
    x, y = point
    for i in range(len(hp)):
        ax, ay = hp[i]
        bx, by = hp[(i + 1) % len(hp)]
        if (bx - ax) * (y - ay) - (by - ay) * (x - ax) < -eps:
            return False
    return True
