"""Exact counting and enumeration of report views.

A report view fixes one dimension as the horizontal axis and picks an
unordered set of further dimensions as pivots.  For ``n`` dimensions and
views of arity ``r`` there are ``n * C(n-1, r-1)`` of them.

All counts are bounded to the unsigned 64-bit range; anything larger raises
:class:`~olapcube.errors.ArithmeticOverflow` instead of silently growing.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import UINT64_MAX, ArithmeticOverflow, DomainError, check_u64

__all__ = [
    "ViewSpec",
    "ViewCensus",
    "factorial",
    "binomial",
    "view_count",
    "total_view_count",
    "census",
    "enumerate_views",
    "enumerate_all_views",
]


@dataclass(frozen=True)
class ViewSpec:
    """A horizontal-axis dimension plus pivot dimensions in display order.

    Equality compares display order too; use :meth:`identity` when two views
    that only list their pivots differently should be treated as one.
    """

    horizontal: str
    pivots: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "pivots", tuple(self.pivots))
        if self.horizontal in self.pivots:
            raise DomainError(f"horizontal dimension {self.horizontal!r} repeated in pivots")
        if len(set(self.pivots)) != len(self.pivots):
            raise DomainError(f"duplicate pivot dimension in {self.pivots!r}")

    @property
    def arity(self) -> int:
        return 1 + len(self.pivots)

    @property
    def dimensions(self) -> tuple[str, ...]:
        return (self.horizontal, *self.pivots)

    def identity(self) -> tuple[str, frozenset[str]]:
        return self.horizontal, frozenset(self.pivots)

    def __str__(self) -> str:
        if not self.pivots:
            return self.horizontal
        return f"{self.horizontal}|{','.join(self.pivots)}"


@dataclass(frozen=True)
class ViewCensus:
    n: int
    per_arity: dict[int, int]
    total: int


def factorial(k: int) -> int:
    """``k!`` by the textbook product; fails for ``k > 20`` (exceeds 64 bits)."""
    if k < 0:
        raise DomainError(f"factorial of negative number {k}")
    result = 1
    for i in range(2, k + 1):
        result = check_u64(result * i, f"{k}!")
    return result


def binomial(n: int, r: int) -> int:
    """``C(n, r)`` computed multiplicatively.

    Each running value ``C(n-r+i, i)`` is itself a binomial coefficient no
    larger than the result, so the call succeeds exactly when ``C(n, r)``
    fits in 64 bits.
    """
    if n < 0 or r < 0:
        raise DomainError(f"binomial({n}, {r}) needs non-negative arguments")
    if r > n:
        raise DomainError(f"binomial({n}, {r}) needs r <= n")
    r = min(r, n - r)
    result = 1
    for i in range(1, r + 1):
        result = check_u64(result * (n - r + i) // i, f"C({n}, {r})")
    return result


def _check_arity(n: int, r: int) -> None:
    if n < 1:
        raise DomainError(f"a cube needs at least one dimension, got n={n}")
    if not 1 <= r <= n:
        raise DomainError(f"view arity must be in 1..{n}, got r={r}")


def view_count(n: int, r: int) -> int:
    """Number of distinct report views of arity ``r`` over ``n`` dimensions."""
    _check_arity(n, r)
    return check_u64(n * binomial(n - 1, r - 1), f"view_count({n}, {r})")


def total_view_count(n: int) -> int:
    """Sum of :func:`view_count` over every arity ``1..n``."""
    if n < 1:
        raise DomainError(f"a cube needs at least one dimension, got n={n}")
    total = 0
    for r in range(1, n + 1):
        total += view_count(n, r)
        if total > UINT64_MAX:
            raise ArithmeticOverflow(f"total_view_count({n}) exceeds 64-bit unsigned range")
    return total


def census(n: int) -> ViewCensus:
    per_arity = {r: view_count(n, r) for r in range(1, n + 1)}
    return ViewCensus(n=n, per_arity=per_arity, total=total_view_count(n))


def enumerate_views(dims: Sequence[str], r: int) -> list[ViewSpec]:
    """Every view of arity ``r``, horizontal axis in ``dims`` order.

    Pivot sets come out as ``dims``-ordered combinations, which is also
    their lexicographic order with respect to ``dims``.
    """
    dims = list(dims)
    if len(set(dims)) != len(dims):
        raise DomainError(f"duplicate dimension names in {dims!r}")
    _check_arity(len(dims), r)
    views = []
    for h in dims:
        rest = [d for d in dims if d != h]
        for pivots in combinations(rest, r - 1):
            views.append(ViewSpec(h, pivots))
    return views


def enumerate_all_views(dims: Sequence[str]) -> list[ViewSpec]:
    return [v for r in range(1, len(dims) + 1) for v in enumerate_views(dims, r)]
