"""Quadratic forms stored as symmetric Gram matrices.

Flattened coordinates follow the upper triangle in row order,
``(0,0), (0,1), ..., (0,r), (1,1), ...``.  The coordinate of ``x_i*x_j`` is
the monomial coefficient, so off-diagonal Gram entries are half of it.
"""

from __future__ import annotations

from functools import cached_property
from typing import Mapping, Sequence

from .errors import NonSymmetric
from .field import FieldSpec, Raw
from .linalg import Matrix, symmetric_rank


def sym2_index(n: int) -> list[tuple[int, int]]:
    """Monomial order of Sym^2 on ``n`` variables."""
    return [(i, j) for i in range(n) for j in range(i, n)]


def sym3_index(n: int) -> list[tuple[int, int, int]]:
    return [(i, j, k) for i in range(n) for j in range(i, n) for k in range(j, n)]


class QuadraticForm:
    """A quadric in P^r given by its (r+1)x(r+1) symmetric Gram matrix."""

    def __init__(self, gram: Matrix, rank: int | None = None):
        if not gram.is_symmetric():
            raise NonSymmetric("Gram matrix is not symmetric")
        self.gram = gram
        if rank is not None:
            self.__dict__["rank"] = rank

    @property
    def field(self) -> FieldSpec:
        return self.gram.field

    @property
    def size(self) -> int:
        return self.gram.nrows

    @cached_property
    def rank(self) -> int:
        return symmetric_rank(self.gram)[0]

    @classmethod
    def from_flat(cls, field: FieldSpec, n: int, vec: Sequence[Raw]) -> "QuadraticForm":
        half = field.half()
        g = [[field.zero] * n for _ in range(n)]
        for (i, j), c in zip(sym2_index(n), vec):
            if i == j:
                g[i][i] = c
            elif c:
                g[i][j] = g[j][i] = field.mul(c, half)
        return cls(Matrix._raw(field, g, n))

    @classmethod
    def from_monomials(cls, field: FieldSpec, n: int, terms: Mapping[tuple[int, int], object]) -> "QuadraticForm":
        """Build from ``{(i, j): coefficient}`` with ``x_i*x_j`` monomials."""
        vec = [field.zero] * (n * (n + 1) // 2)
        pos = {ij: k for k, ij in enumerate(sym2_index(n))}
        for (i, j), c in terms.items():
            key = (min(i, j), max(i, j))
            vec[pos[key]] = field.add(vec[pos[key]], field.convert(c))
        return cls.from_flat(field, n, vec)

    def flat(self) -> list:
        f = self.field
        g = self.gram.rows
        two = f.convert(2)
        return [g[i][i] if i == j else f.mul(two, g[i][j]) for i, j in sym2_index(self.size)]

    def __call__(self, point: Sequence[Raw]) -> Raw:
        """Evaluate ``v^T G v``."""
        f = self.field
        total = f.zero
        for i, row in enumerate(self.gram.rows):
            if not point[i]:
                continue
            s = f.zero
            for j, g in enumerate(row):
                if g and point[j]:
                    s = f.add(s, f.mul(g, point[j]))
            total = f.add(total, f.mul(point[i], s))
        return total

    def pullback(self, m: Matrix) -> "QuadraticForm":
        """The form ``M G M^T``: substitute child coordinates ``y = M^T x``."""
        return QuadraticForm(m @ self.gram @ m.T)

    def __eq__(self, other) -> bool:
        return isinstance(other, QuadraticForm) and self.gram == other.gram

    def __hash__(self) -> int:
        return hash(self.gram)

    def __str__(self) -> str:
        f = self.field
        terms = []
        for (i, j), c in zip(sym2_index(self.size), self.flat()):
            if not c:
                continue
            mono = f"x{i}^2" if i == j else f"x{i}*x{j}"
            cs = f.format_scalar(c)
            terms.append(mono if cs == "1" else f"-{mono}" if cs == "-1" else f"{cs}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") or "0"

    def __repr__(self) -> str:
        return f"QuadraticForm({self}, over {self.field})"
