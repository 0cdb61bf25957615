"""Least-squares learning of per-attribute weights against the
co-interest targets, plus min-max normalization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

RCOND = 1e-10


@dataclass(frozen=True)
class WeightVector:
    q: tuple[float, ...]
    normalized: bool = False
    rank_deficient: bool = False
    degenerate: bool = False

    def as_array(self) -> np.ndarray:
        return np.asarray(self.q)


def solve_weights(F: np.ndarray, s: np.ndarray) -> WeightVector:
    """Minimum-norm least-squares solution of q . F = s via the
    pseudoinverse; rank deficiency is flagged but still solvable."""
    F = np.asarray(F, dtype=float)
    s = np.asarray(s, dtype=float).ravel()
    if F.ndim != 2:
        raise ValueError("F must be 2-dimensional")
    if s.shape[0] != F.shape[1]:
        raise ValueError(
            f"target length {s.shape[0]} does not match pair count {F.shape[1]}"
        )
    rank = np.linalg.matrix_rank(F, tol=None)
    q = s @ np.linalg.pinv(F, rcond=RCOND)
    return WeightVector(tuple(q), rank_deficient=rank < min(F.shape))


def residual(q: np.ndarray, F: np.ndarray, s: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(q) @ np.asarray(F) - np.asarray(s)))


def normalize_weights(w: WeightVector) -> WeightVector:
    """Min-max scale components into [0,1]; an all-equal vector maps to
    the uniform 1/n with the degenerate flag set."""
    q = np.asarray(w.q, dtype=float)
    lo, hi = q.min(), q.max()
    if hi == lo:
        uniform = np.full_like(q, 1.0 / len(q))
        return WeightVector(
            tuple(uniform),
            normalized=True,
            rank_deficient=w.rank_deficient,
            degenerate=True,
        )
    scaled = (q - lo) / (hi - lo)
    return WeightVector(
        tuple(scaled), normalized=True, rank_deficient=w.rank_deficient
    )
