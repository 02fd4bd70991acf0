"""Exact exponential, logarithm and BCH machinery for upper triangular groups.

Matrices are sympy ``ImmutableMatrix`` objects with ``Rational`` entries. For a
strictly upper triangular n x n matrix N we have ``N^n = 0``, so ``exp`` and
``log`` are finite sums and everything below is exact.
"""

from __future__ import annotations

import json
import logging
from functools import lru_cache
from typing import List, Sequence, Tuple

from sympy import ImmutableMatrix, Rational, eye, zeros

from domain.errors import ExpressionSyntaxError, MatrixShapeError

LOGGER = logging.getLogger("sim.nilpotent")

MIN_SIZE = 3
MAX_SIZE = 6

Factor = Tuple[int, Rational]


def _check_size(matrix: ImmutableMatrix) -> int:
    if matrix.rows != matrix.cols:
        raise MatrixShapeError(f"expected a square matrix, got {matrix.rows}x{matrix.cols}")
    if not MIN_SIZE <= matrix.rows <= MAX_SIZE:
        raise MatrixShapeError(
            f"matrix size {matrix.rows} is outside {MIN_SIZE}..{MAX_SIZE}"
        )
    return matrix.rows


def _rational_matrix(entries: object) -> ImmutableMatrix:
    matrix = ImmutableMatrix(entries)
    return matrix.applyfunc(Rational)


def nil_matrix(entries: object) -> ImmutableMatrix:
    """Validate a strictly upper triangular matrix of supported size."""

    matrix = _rational_matrix(entries)
    n = _check_size(matrix)
    for i in range(n):
        for j in range(i + 1):
            if matrix[i, j] != 0:
                raise MatrixShapeError(
                    f"entry ({i + 1},{j + 1}) must be zero in a strictly upper triangular matrix"
                )
    return matrix


def unipotent_matrix(entries: object) -> ImmutableMatrix:
    matrix = _rational_matrix(entries)
    n = _check_size(matrix)
    for i in range(n):
        if matrix[i, i] != 1:
            raise MatrixShapeError(f"diagonal entry ({i + 1},{i + 1}) must be 1")
        for j in range(i):
            if matrix[i, j] != 0:
                raise MatrixShapeError(
                    f"entry ({i + 1},{j + 1}) must be zero in an upper triangular matrix"
                )
    return matrix


def mexp(N: ImmutableMatrix) -> ImmutableMatrix:
    n = N.rows
    result = eye(n)
    term = eye(n)
    for k in range(1, n):
        term = term * N / k
        result = result + term
    return ImmutableMatrix(result)


def mlog(U: ImmutableMatrix) -> ImmutableMatrix:
    n = U.rows
    X = U - eye(n)
    result = zeros(n, n)
    power = eye(n)
    for k in range(1, n):
        power = power * X
        result = result + power * Rational((-1) ** (k + 1), k)
    return ImmutableMatrix(result)


def lie_bracket(x: ImmutableMatrix, y: ImmutableMatrix) -> ImmutableMatrix:
    return ImmutableMatrix(x * y - y * x)


def bch_Z(x: ImmutableMatrix, y: ImmutableMatrix) -> ImmutableMatrix:
    """``Z`` with ``exp(x) exp(y) = exp(Z)``."""

    if x.shape != y.shape:
        raise MatrixShapeError(f"shape mismatch {x.shape} vs {y.shape}")
    return mlog(mexp(x) * mexp(y))


def bch_K(x: ImmutableMatrix, y: ImmutableMatrix) -> ImmutableMatrix:
    """``K`` with ``exp(x + y) = exp(x) exp(y) exp(K)``; K lies in the derived algebra."""

    return bch_Z(-bch_Z(x, y), x + y)


def bch_series(x: ImmutableMatrix, y: ImmutableMatrix, order: int = 4) -> ImmutableMatrix:
    """BCH series truncated after brackets of ``order`` letters (1 <= order <= 4)."""

    if not 1 <= order <= 4:
        raise ValueError("bch_series supports orders 1 through 4")
    result = x + y
    if order >= 2:
        xy = lie_bracket(x, y)
        result = result + xy / 2
    if order >= 3:
        result = result + (lie_bracket(x, xy) + lie_bracket(y, lie_bracket(y, x))) / 12
    if order >= 4:
        result = result - lie_bracket(y, lie_bracket(x, xy)) / 24
    return ImmutableMatrix(result)


def superdiagonal_depth(N: ImmutableMatrix) -> int:
    """Smallest d with a nonzero entry on the d-th superdiagonal; n for the zero matrix."""

    n = N.rows
    for d in range(1, n):
        if any(N[i, i + d] != 0 for i in range(n - d)):
            return d
    return n


def in_derived_algebra(K: ImmutableMatrix) -> bool:
    return superdiagonal_depth(K) >= 2


@lru_cache(maxsize=None)
def malcev_basis(n: int) -> Tuple[Tuple[int, int], ...]:
    """Index pairs ``(i, i + d)`` (0-based), ordered by depth d and then by i."""

    return tuple((i, i + d) for d in range(1, n) for i in range(n - d))


def elementary(n: int, i: int, j: int) -> ImmutableMatrix:
    matrix = zeros(n, n)
    matrix[i, j] = 1
    return ImmutableMatrix(matrix)


def _decompose(X: ImmutableMatrix, depth: int = 0) -> List[Factor]:
    n = X.rows
    heads: List[Factor] = []
    corrections: List[ImmutableMatrix] = []
    rest = X
    for index, (i, j) in enumerate(malcev_basis(n)):
        value = rest[i, j]
        if value == 0:
            continue
        head = elementary(n, i, j) * value
        heads.append((index, Rational(value)))
        remainder = ImmutableMatrix(rest - head)
        correction = bch_K(ImmutableMatrix(head), remainder)
        if any(entry != 0 for entry in correction):
            corrections.append(correction)
        rest = remainder
    factors = list(heads)
    for correction in reversed(corrections):
        factors.extend(_decompose(correction, depth + 1))
    LOGGER.debug("decompose depth %d: %d heads, %d corrections", depth, len(heads), len(corrections))
    return factors


def decompose_product(g: ImmutableMatrix) -> List[Factor]:
    """Factors ``(basis index, t)`` whose ordered ``exp(t V_index)`` product is ``g``."""

    return _decompose(mlog(unipotent_matrix(g)))


def reconstruct(factors: Sequence[Factor], n: int) -> ImmutableMatrix:
    basis = malcev_basis(n)
    result = eye(n)
    for index, value in factors:
        i, j = basis[index]
        result = result * mexp(elementary(n, i, j) * value)
    return ImmutableMatrix(result)


@lru_cache(maxsize=None)
def _depth_bound(n: int, depth: int) -> int:
    if depth >= n:
        return 0
    total = 0
    for d in range(depth, n):
        count = n - d
        total += count + count * _depth_bound(n, 2 * d)
    return total


def factor_bound(n: int) -> int:
    """Worst-case factor count of ``decompose_product`` for size ``n``.

    A peel at depth d leaves a correction of depth at least 2d, which is
    decomposed recursively.
    """

    return _depth_bound(n, 1)


def format_rational(value: Rational) -> str:
    value = Rational(value)
    if value.q == 1:
        return str(value.p)
    return f"{value.p}/{value.q}"


def format_matrix(matrix: ImmutableMatrix) -> List[List[str]]:
    return [[format_rational(matrix[i, j]) for j in range(matrix.cols)] for i in range(matrix.rows)]


def _parse_entry(raw: object, row: int, column: int) -> Rational:
    if isinstance(raw, bool) or not isinstance(raw, (int, str)):
        raise ExpressionSyntaxError(
            f"entry ({row + 1},{column + 1}) must be an integer or a 'p/q' string",
            position=0,
        )
    try:
        value = Rational(raw)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ExpressionSyntaxError(
            f"entry ({row + 1},{column + 1}) is not a rational: {raw!r}", position=0
        ) from exc
    if not value.is_Rational:
        raise ExpressionSyntaxError(
            f"entry ({row + 1},{column + 1}) is not a finite rational: {raw!r}", position=0
        )
    return value


def parse_matrix_json(text: str) -> ImmutableMatrix:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ExpressionSyntaxError(
            exc.msg, position=exc.pos, line=exc.lineno, column=exc.colno
        ) from exc
    if not isinstance(payload, list) or not all(isinstance(row, list) for row in payload):
        raise ExpressionSyntaxError("matrix must be a JSON array of arrays", position=0)
    if len({len(row) for row in payload}) > 1:
        raise MatrixShapeError("matrix rows have different lengths")
    return ImmutableMatrix(
        [[_parse_entry(raw, r, c) for c, raw in enumerate(row)] for r, row in enumerate(payload)]
    )


__all__ = [
    "MIN_SIZE",
    "MAX_SIZE",
    "Factor",
    "nil_matrix",
    "unipotent_matrix",
    "mexp",
    "mlog",
    "lie_bracket",
    "bch_Z",
    "bch_K",
    "bch_series",
    "superdiagonal_depth",
    "in_derived_algebra",
    "malcev_basis",
    "elementary",
    "decompose_product",
    "reconstruct",
    "factor_bound",
    "format_rational",
    "format_matrix",
    "parse_matrix_json",
]
