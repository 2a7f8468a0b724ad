"""Comparison of two lattices over the dvr ``Z_(p)``.

``E = F = Z_(p)^n`` and ``f`` is a square matrix over ``Z_(p)`` with
non-zero determinant, i.e. an isomorphism after inverting ``p``. The
iteration replaces ``E`` by the preimage of ``ker(f mod p)`` and divides
``f`` by ``p`` on it, recording the graded pieces of the kernel filtration
on ``E_k`` and the image filtration on ``F_k`` until the reduction becomes
injective.

Independently, :func:`snf_elementary_divisors` reduces ``f`` to Smith form
tracking p-adic valuations. Over a dvr the number of elementary divisors
``p^i`` equals the ``i``-th graded dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from nodalstab.frobenius import is_prime

Matrix = tuple[tuple[Fraction, ...], ...]


def vp(x: Fraction, p: int) -> int:
    """p-adic valuation of a non-zero rational."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def reduce_mod_p(x: Fraction, p: int) -> int:
    x = Fraction(x)
    if x.denominator % p == 0:
        raise ArithmeticError(f"{x} is not p-integral")
    return x.numerator * pow(x.denominator, -1, p) % p


def _det(M: Sequence[Sequence[Fraction]]) -> Fraction:
    A = [list(map(Fraction, row)) for row in M]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            if A[r][c]:
                t = A[r][c] / A[c][c]
                A[r] = [x - t * y for x, y in zip(A[r], A[c])]
    return det


@dataclass(frozen=True)
class DvrMatrixModel:
    p: int
    f: Matrix

    def __post_init__(self):
        f = tuple(tuple(Fraction(x) for x in row) for row in self.f)
        object.__setattr__(self, "f", f)
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        n = len(f)
        if n == 0 or any(len(row) != n for row in f):
            raise ValueError("matrix must be square and non-empty")
        for row in f:
            for x in row:
                if x.denominator % self.p == 0:
                    raise ValueError(f"entry {x} is not {self.p}-integral")
        if _det(f) == 0:
            raise ValueError("determinant is zero")

    @property
    def n(self) -> int:
        return len(self.f)

    def to_json(self) -> dict:
        return {"p": self.p, "matrix": [[_frac(x) for x in row] for row in self.f]}


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def normalize_map(m: DvrMatrixModel) -> tuple[DvrMatrixModel, int]:
    """Divide by the largest power of ``p`` dividing every entry."""
    vals = [vp(x, m.p) for row in m.f for x in row if x != 0]
    if not vals:
        raise ValueError("zero matrix")
    shift = min(vals)
    scale = Fraction(1, m.p**shift)
    return DvrMatrixModel(m.p, tuple(tuple(x * scale for x in row) for row in m.f)), shift


# --- linear algebra over F_p on column vectors ------------------------------


def _rref_mod_p(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    A = [[x % p for x in row] for row in rows]
    pivots = []
    r = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                t = A[i][c]
                A[i] = [(x - t * y) % p for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def kernel_mod_p(M: list[list[int]], p: int) -> list[list[int]]:
    """Basis of ``{x : M x = 0}`` over F_p, as a list of column vectors."""
    n = len(M[0])
    R, pivots = _rref_mod_p(M, p)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        x = [0] * n
        x[fc] = 1
        for row, pc in zip(R, pivots):
            x[pc] = (-row[fc]) % p
        basis.append(x)
    return basis


def column_space_mod_p(M: list[list[int]], p: int) -> list[list[int]]:
    """Reduced row-echelon basis of the span of the columns of ``M``."""
    cols = [list(col) for col in zip(*M)]
    R, _ = _rref_mod_p(cols, p)
    return R


def rank_mod_p(M: list[list[int]], p: int) -> int:
    return len(_rref_mod_p(M, p)[0]) if M else 0


def _complete_basis(K: list[list[int]], n: int, p: int) -> list[list[int]]:
    """Standard vectors extending the independent set ``K`` to a basis of F_p^n."""
    extra = []
    current = [list(v) for v in K]
    for i in range(n):
        e = [0] * n
        e[i] = 1
        if rank_mod_p(current + [e], p) > len(current):
            current.append(e)
            extra.append(e)
    return extra


# --- the filtration loop ------------------------------------------------------


@dataclass(frozen=True)
class FiltrationResult:
    graded_dims_E: tuple[int, ...]
    graded_dims_F: tuple[int, ...]
    steps: int

    def to_json(self) -> dict:
        return {
            "graded_dims_E": list(self.graded_dims_E),
            "graded_dims_F": list(self.graded_dims_F),
            "steps": self.steps,
        }


def _matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def compute_filtration(m: DvrMatrixModel, max_steps: int | None = None) -> FiltrationResult:
    """Run the lattice iteration on a map that is non-zero mod ``p``.

    ``M`` holds ``f^(j) = f / p^j`` restricted to the current lattice,
    written in the lattice's basis. Each step keeps the lifted kernel
    vectors and multiplies a complement by ``p``; every column of the new
    matrix is then divisible by ``p``.
    """
    p, n = m.p, m.n
    M = [list(row) for row in m.f]
    red = [[reduce_mod_p(x, p) for x in row] for row in M]
    if not any(any(row) for row in red):
        raise ValueError("map is zero mod p; apply normalize_map first")
    if max_steps is None:
        # det = unit * p^(sum of exponents) bounds the number of steps
        max_steps = vp(_det(m.f), p) + 1

    kernel_dims = []
    image_spaces = []
    steps = 0
    while True:
        red = [[reduce_mod_p(x, p) for x in row] for row in M]
        K = kernel_mod_p(red, p)
        kernel_dims.append(len(K))
        image_spaces.append(column_space_mod_p(red, p))
        steps += 1
        if not K:
            break
        if steps > max_steps:
            raise ArithmeticError("filtration failed to terminate (map is p-divisible)")
        C = _complete_basis(K, n, p)
        # columns of U: kernel lifts, then p * complement
        U_cols = [list(map(Fraction, k)) for k in K] + [[Fraction(p * x) for x in c] for c in C]
        U = [list(r) for r in zip(*U_cols)]
        MU = _matmul(M, U)
        newM = []
        for row in MU:
            new_row = []
            for x in row:
                y = x / p
                if y.denominator % p == 0:
                    raise ArithmeticError("non-integral entry after lattice change")
                new_row.append(y)
            newM.append(new_row)
        M = newM

    # E side: Fil^0 = ker f_k, Fil^{j} = image of ker f^(j)_k; dims nest down to 0
    dims_E = [n - kernel_dims[0]] + [
        kernel_dims[j - 1] - kernel_dims[j] for j in range(1, len(kernel_dims))
    ]
    # F side: Fil_j = image of f^(j)_k inside F_k; nested increasing
    dims_F = []
    prev = []
    for space in image_spaces:
        if prev and rank_mod_p(prev + space, p) != len(space):
            raise ArithmeticError("image filtration is not increasing")
        dims_F.append(len(space) - len(prev))
        prev = space
    return FiltrationResult(tuple(dims_E), tuple(dims_F), steps)


def snf_elementary_divisors(m: DvrMatrixModel) -> list[int]:
    """Exponents ``e_1 <= ... <= e_n`` of the Smith form of ``f`` over ``Z_(p)``."""
    p = m.p
    A = [list(row) for row in m.f]
    n = len(A)
    exps = []
    for k in range(n):
        best = None
        for i in range(k, n):
            for j in range(k, n):
                if A[i][j] != 0:
                    v = vp(A[i][j], p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            raise ArithmeticError("singular matrix")
        v, i, j = best
        A[k], A[i] = A[i], A[k]
        for row in A:
            row[k], row[j] = row[j], row[k]
        piv = A[k][k]
        # piv has minimal valuation, so every quotient below is p-integral
        for r in range(k + 1, n):
            if A[r][k]:
                t = A[r][k] / piv
                A[r] = [x - t * y for x, y in zip(A[r], A[k])]
        for c in range(k + 1, n):
            if A[k][c]:
                t = A[k][c] / piv
                for r in range(n):
                    A[r][c] -= t * A[r][k]
        exps.append(v)
    return sorted(exps)


def divisor_multiplicities(exponents: Sequence[int]) -> tuple[int, ...]:
    top = max(exponents)
    return tuple(sum(1 for e in exponents if e == i) for i in range(top + 1))
