import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np
import scipy.sparse

LOGGER = logging.getLogger(__name__)

RECONSTRUCTION_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class OneSparsePart:
    """Column j holds the single entry at row perm[j] with value values[j]."""

    perm: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        perm = np.asarray(self.perm, dtype=np.int64)
        values = np.asarray(self.values, dtype=np.float64)
        if perm.shape != values.shape or perm.ndim != 1:
            raise ValueError(f"Permutation {perm.shape} and values {values.shape} must be matching vectors")
        if not np.array_equal(np.sort(perm), np.arange(len(perm))):
            raise ValueError(f"{perm.tolist()} is not a bijection")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "values", values)

    @property
    def dim(self) -> int:
        return len(self.perm)

    def matrix(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim))
        out[self.perm, np.arange(self.dim)] = self.values
        return out

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.perm, np.arange(self.dim)))


@dataclass(frozen=True, eq=False)
class OneSparseDecomposition:
    dim: int
    parts: Tuple[OneSparsePart, ...]

    @property
    def num_parts(self) -> int:
        return len(self.parts)

    def reconstruct(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim))
        for part in self.parts:
            out += part.matrix()
        return out

    def max_abs_value(self) -> float:
        if not self.parts:
            return 0.0
        return float(max(np.max(np.abs(part.values)) for part in self.parts))


def _colour_entries(entries, n, num_colours) -> Dict[Tuple[int, int], int]:
    """Proper edge colouring of the bipartite row/column multigraph of the
    nonzeros using `num_colours` (= max degree) colours, by alternating-path
    recolouring."""
    at_row: List[Dict[int, int]] = [dict() for _ in range(n)]
    at_col: List[Dict[int, int]] = [dict() for _ in range(n)]

    def first_free(used):
        for colour in range(num_colours):
            if colour not in used:
                return colour
        raise RuntimeError("Edge colouring ran out of colours")

    for r, c in entries:
        a = first_free(at_row[r])
        b = first_free(at_col[c])
        if a in at_col[c]:
            # Swap a/b along the path that leaves column c on colour a.
            path = []
            node, on_column, colour = c, True, a
            while True:
                table = at_col if on_column else at_row
                nxt = table[node].get(colour)
                if nxt is None:
                    break
                path.append((nxt, node, colour) if on_column else (node, nxt, colour))
                node, on_column = nxt, not on_column
                colour = b if colour == a else a
            for pr, pc, colour in path:
                del at_row[pr][colour]
                del at_col[pc][colour]
            for pr, pc, colour in path:
                swapped = b if colour == a else a
                at_row[pr][swapped] = pc
                at_col[pc][swapped] = pr
        at_row[r][a] = c
        at_col[c][a] = r

    return {(r, c): colour for r in range(n) for colour, c in at_row[r].items()}


def one_sparse_decompose(matrix) -> OneSparseDecomposition:
    """Split a square matrix into at most s 1-sparse parts (s = max nonzeros
    per row or column). Partial matchings are completed with zero-valued
    entries so every part's column-to-row map is a bijection."""
    if scipy.sparse.issparse(matrix):
        matrix = matrix.toarray()
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {matrix.shape}")
    n = matrix.shape[0]
    entries = [(int(r), int(c)) for r, c in np.argwhere(matrix != 0)]
    if not entries:
        return OneSparseDecomposition(n, ())
    num_colours = int(max(np.count_nonzero(matrix, axis=0).max(), np.count_nonzero(matrix, axis=1).max()))
    colouring = _colour_entries(entries, n, num_colours)

    parts = []
    for colour in range(num_colours):
        perm = np.full(n, -1, dtype=np.int64)
        values = np.zeros(n)
        for (r, c), k in colouring.items():
            if k == colour:
                perm[c] = r
                values[c] = matrix[r, c]
        free_rows = sorted(set(range(n)) - set(perm[perm >= 0].tolist()))
        free_cols = np.flatnonzero(perm < 0)
        perm[free_cols] = free_rows
        parts.append(OneSparsePart(perm, values))

    decomposition = OneSparseDecomposition(n, tuple(parts))
    error = np.max(np.abs(decomposition.reconstruct() - matrix))
    if error > RECONSTRUCTION_TOL:
        raise RuntimeError(f"1-sparse decomposition does not reproduce the matrix (error {error:.3e})")
    LOGGER.debug("Decomposed %dx%d matrix into %d parts", n, n, len(parts))
    return decomposition
