"""Finite windows of graded GF(2) chain complexes with operators.

Shared engine for the equivariant and involutive modules: a complex is a
family of degree-indexed basis lists, a degree -1 differential, and named
degree-homogeneous operators (q, v, U, Q).  Homology is computed per
degree with explicit representatives so module actions can be pushed to
homology, and stable (operator-power) subspaces can be extracted.
"""

from __future__ import annotations

import numpy as np

from . import f2linalg as la
from .errors import InputError, InternalError


class GradedComplex:
    """Chain data on a degree window.

    basis[d] is a list of hashable labels; diff[d] and ops[name][d] are
    GF(2) matrices acting by columns (column j = image of basis[d][j]).
    Degrees absent from `basis` are zero.
    """

    def __init__(self, basis: dict[int, list], diff: dict[int, np.ndarray],
                 ops: dict[str, tuple[int, dict[int, np.ndarray]]]):
        self.basis = {d: list(b) for d, b in basis.items() if b}
        self.diff = diff
        self.ops = ops
        self.index = {
            d: {lab: i for i, lab in enumerate(b)} for d, b in self.basis.items()
        }

    def dim(self, d: int) -> int:
        return len(self.basis.get(d, ()))

    def degrees(self) -> list[int]:
        return sorted(self.basis)

    def d_matrix(self, d: int) -> np.ndarray:
        m = self.diff.get(d)
        if m is None:
            return la.f2_zeros(self.dim(d - 1), self.dim(d))
        return m

    def op_matrix(self, name: str, d: int) -> np.ndarray:
        shift, mats = self.ops[name]
        m = mats.get(d)
        if m is None:
            return la.f2_zeros(self.dim(d + shift), self.dim(d))
        return m

    def op_shift(self, name: str) -> int:
        return self.ops[name][0]

    # -- consistency ----------------------------------------------------

    def check_differential(self):
        for d in self.degrees():
            dd = la.f2_mul(self.d_matrix(d - 1), self.d_matrix(d))
            if dd.any():
                raise InternalError(f"differential does not square to zero at degree {d}")

    def check_op_commutes(self, name: str, lo_safe: int | None = None):
        """D . op = op . D wherever every intermediate degree is in-window.

        lo_safe: lowest degree at which the identity is enforced (both
        compositions must land at degrees >= the window bottom).
        """
        shift = self.op_shift(name)
        for d in self.degrees():
            if lo_safe is not None and d + shift - 1 < lo_safe:
                continue
            left = la.f2_mul(self.d_matrix(d + shift), self.op_matrix(name, d))
            right = la.f2_mul(self.op_matrix(name, d - 1), self.d_matrix(d))
            if left.shape == right.shape and (left ^ right).any():
                raise InternalError(f"operator {name} does not commute with D at degree {d}")


class Homology:
    """Per-degree homology of a GradedComplex with chosen representatives."""

    def __init__(self, cx: GradedComplex):
        self.complex = cx
        self._img = {}   # degree -> chain-level basis matrix of the boundaries
        self._reps = {}  # degree -> chain-level matrix, columns = class reps
        self._op_cache: dict[tuple[str, int], np.ndarray] = {}
        for d in cx.degrees():
            n = cx.dim(d)
            img = la.image_basis_f2(cx.d_matrix(d + 1))
            ker = la.kernel_basis_f2(cx.d_matrix(d))
            reps = []
            span = img
            for z in ker:
                aug = np.concatenate([span, z.reshape(-1, 1)], axis=1)
                if la.rank_f2(aug) > span.shape[1]:
                    reps.append(z)
                    span = aug
            self._img[d] = img
            self._reps[d] = (
                np.stack(reps, axis=1) if reps else la.f2_zeros(n, 0)
            )

    def dim(self, d: int) -> int:
        return self._reps.get(d, la.f2_zeros(0, 0)).shape[1]

    def dims(self) -> dict[int, int]:
        return {d: self.dim(d) for d in self.complex.degrees() if self.dim(d)}

    def reps(self, d: int) -> np.ndarray:
        if d not in self._reps:
            return la.f2_zeros(self.complex.dim(d), 0)
        return self._reps[d]

    def classify(self, d: int, v: np.ndarray) -> np.ndarray:
        """Coordinates of a cycle's class in the chosen basis of H_d."""
        img, reps = self._img.get(d), self._reps.get(d)
        if img is None:
            if np.asarray(v).any():
                raise InternalError("nonzero chain in an empty degree")
            return np.zeros(0, dtype=np.uint8)
        m = np.concatenate([img, reps], axis=1)
        x = la.solve_f2(m, v)
        if x is None:
            raise InternalError("vector is not a cycle: cannot classify")
        return x[img.shape[1]:]

    def induced_op(self, name: str, d: int) -> np.ndarray:
        """Matrix of the operator on homology, H_d -> H_{d+shift}."""
        key = (name, d)
        if key in self._op_cache:
            return self._op_cache[key]
        cx = self.complex
        shift = cx.op_shift(name)
        reps = self.reps(d)
        cols = []
        for j in range(reps.shape[1]):
            w = la.f2_mul(cx.op_matrix(name, d), reps[:, j].reshape(-1, 1)).reshape(-1)
            cols.append(self.classify(d + shift, w))
        out = (
            np.stack(cols, axis=1) if cols else la.f2_zeros(self.dim(d + shift), 0)
        )
        self._op_cache[key] = out
        return out

    def op_power(self, name: str, d: int, k: int) -> np.ndarray:
        """Matrix of op^k on homology, from H_d down to H_{d + k*shift}."""
        shift = self.complex.op_shift(name)
        n = self.dim(d)
        m = la.f2_eye(n)
        cur = d
        for _ in range(k):
            m = la.f2_mul(self.induced_op(name, cur), m)
            cur += shift
        return m

    def stable_rank(self, name: str, d: int, k: int) -> int:
        """Rank of op^k : H_{d - k*shift} -> H_d (the k-step stable image)."""
        shift = self.complex.op_shift(name)
        return la.rank_f2(self.op_power(name, d - k * shift, k))

    def stable_image(self, name: str, d: int, k: int) -> np.ndarray:
        shift = self.complex.op_shift(name)
        return la.image_basis_f2(self.op_power(name, d - k * shift, k))
