"""Dyck paths, plane trees, and the brute-force oracle.

Paths are strings over ``{U, D}`` at the boundary; internally a
:class:`DyckPath` wraps that string.  The Retakh condition keeps only paths
whose peaks all sit on level 1 or on an even level.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Union

from .config import DEFAULT_BUDGET

__all__ = [
    "Step",
    "DyckPath",
    "PlaneTree",
    "PathStats",
    "InvalidPathError",
    "BudgetExceeded",
    "validate",
    "peaks",
    "is_retakh",
    "enumerate_restricted",
    "enumerate_with_stats",
    "path_to_tree",
    "tree_to_path",
    "stats",
    "height_histogram",
    "total_even_height",
    "total_height",
    "total_leaves",
]


class InvalidPathError(ValueError):
    """Step sequence is not a Dyck path."""


class BudgetExceeded(RuntimeError):
    """Exhaustive enumeration requested beyond the configured semilength."""


class Step(str, enum.Enum):
    UP = "U"
    DOWN = "D"


@dataclass(frozen=True)
class DyckPath:
    """A step sequence, stored as its ``U``/``D`` string."""

    steps: str = ""

    def __post_init__(self) -> None:
        if isinstance(self.steps, str):
            s = self.steps
        else:
            s = "".join(Step(x).value for x in self.steps)
        if set(s) - {"U", "D"}:
            raise InvalidPathError(f"unknown step symbols in {s!r}")
        object.__setattr__(self, "steps", s)

    @classmethod
    def parse(cls, text: str) -> "DyckPath":
        return cls(text.strip().upper())

    @property
    def semilength(self) -> int:
        return len(self.steps) // 2

    def levels(self) -> list[int]:
        """Level after each step (prefixed by the starting level 0)."""
        out = [0]
        for s in self.steps:
            out.append(out[-1] + (1 if s == "U" else -1))
        return out

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[Step]:
        return (Step(s) for s in self.steps)

    def __str__(self) -> str:
        return self.steps


PathLike = Union[DyckPath, str]


def _as_path(path: PathLike) -> DyckPath:
    return path if isinstance(path, DyckPath) else DyckPath(path)


def validate(path: PathLike) -> bool:
    """True iff the level never goes negative and the path ends at 0."""
    try:
        path = _as_path(path)
    except InvalidPathError:
        return False
    level = 0
    for s in path.steps:
        level += 1 if s == "U" else -1
        if level < 0:
            return False
    return level == 0


def _require_valid(path: PathLike) -> DyckPath:
    path = _as_path(path)
    if not validate(path):
        raise InvalidPathError(f"not a Dyck path: {path.steps!r}")
    return path


def peaks(path: PathLike) -> list[tuple[int, int]]:
    """``(index, level)`` for each ``UD`` factor; index is that of the U step."""
    path = _require_valid(path)
    s = path.steps
    out = []
    level = 0
    for i, c in enumerate(s):
        level += 1 if c == "U" else -1
        if c == "U" and i + 1 < len(s) and s[i + 1] == "D":
            out.append((i, level))
    return out


def _allowed_peak(level: int) -> bool:
    return level == 1 or level % 2 == 0


def is_retakh(path: PathLike) -> bool:
    return all(_allowed_peak(lvl) for _, lvl in peaks(path))


@dataclass(frozen=True)
class PathStats:
    height: int
    peaks: list[tuple[int, int]] = field(default_factory=list)
    leaf_count: int = 1


def stats(path: PathLike) -> PathStats:
    """Height (max level), peak list, and leaf count of the matching tree."""
    path = _require_valid(path)
    pk = peaks(path)
    return PathStats(
        height=max(path.levels()),
        peaks=pk,
        leaf_count=len(pk) if path.steps else 1,
    )


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def enumerate_with_stats(n: int) -> Iterator[tuple[str, int, int]]:
    """Yield ``(steps, height, peak_count)`` for every Retakh path of semilength n.

    Depth-first, Up before Down, so the order is lexicographic.  A branch is
    cut as soon as it closes a peak on an odd level above 1.
    """
    if n < 0:
        raise ValueError("semilength must be non-negative")
    if n == 0:
        yield "", 0, 0
        return
    total = 2 * n
    buf: list[str] = []

    def rec(ups: int, level: int, height: int, npk: int, last_up: bool) -> Iterator[tuple[str, int, int]]:
        pos = len(buf)
        if pos == total:
            yield "".join(buf), height, npk
            return
        if ups < n:
            buf.append("U")
            yield from rec(ups + 1, level + 1, max(height, level + 1), npk, True)
            buf.pop()
        if level > 0:
            if last_up and not _allowed_peak(level):
                return
            buf.append("D")
            yield from rec(ups, level - 1, height, npk + (1 if last_up else 0), False)
            buf.pop()

    yield from rec(0, 0, 0, 0, False)


def enumerate_restricted(n: int) -> Iterator[DyckPath]:
    """Every Retakh path of semilength ``n``, once each, in lexicographic order."""
    for steps, _, _ in enumerate_with_stats(n):
        yield DyckPath(steps)


def _check_budget(n: int, budget: int | None) -> None:
    limit = DEFAULT_BUDGET if budget is None else budget
    if n > limit:
        raise BudgetExceeded(f"semilength {n} exceeds exhaustive budget {limit}")


def height_histogram(n: int, budget: int | None = None) -> dict[int, int]:
    _check_budget(n, budget)
    counts = Counter(h for _, h, _ in enumerate_with_stats(n))
    return dict(sorted(counts.items()))


def total_height(n: int, budget: int | None = None) -> int:
    return sum(h * c for h, c in height_histogram(n, budget).items())


def total_even_height(n: int, budget: int | None = None) -> int:
    return sum(h * c for h, c in height_histogram(n, budget).items() if h % 2 == 0)


def total_leaves(n: int, budget: int | None = None) -> int:
    """Total leaf count over Retakh trees with ``n + 1`` nodes."""
    _check_budget(n, budget)
    if n == 0:
        return 1
    return sum(npk for _, _, npk in enumerate_with_stats(n))


# ---------------------------------------------------------------------------
# plane trees
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PlaneTree:
    """Rooted ordered tree; a node is just the tuple of its children."""

    children: tuple["PlaneTree", ...] = ()

    @classmethod
    def leaf(cls) -> "PlaneTree":
        return cls(())

    def size(self) -> int:
        return sum(1 for _ in self._walk())

    def height(self) -> int:
        """Height in edges."""
        return max(d for _, d in self._walk())

    def leaves(self) -> int:
        return sum(1 for t, _ in self._walk() if not t.children)

    def _walk(self) -> Iterator[tuple["PlaneTree", int]]:
        stack = [(self, 0)]
        while stack:
            t, d = stack.pop()
            yield t, d
            stack.extend((c, d + 1) for c in reversed(t.children))

    def to_parens(self) -> str:
        """Balanced parentheses, each node written as ``(`` children ``)``."""
        return "(" + tree_to_path(self).steps.replace("U", "(").replace("D", ")") + ")"

    @classmethod
    def from_parens(cls, text: str) -> "PlaneTree":
        text = text.strip()
        if len(text) < 2 or text[0] != "(" or text[-1] != ")":
            raise ValueError(f"not a parenthesized tree: {text!r}")
        inner = text[1:-1]
        if set(inner) - {"(", ")"}:
            raise ValueError(f"unexpected symbols in {text!r}")
        return path_to_tree(inner.replace("(", "U").replace(")", "D"))

    def __str__(self) -> str:
        return self.to_parens()


def path_to_tree(path: PathLike) -> PlaneTree:
    """Up opens a new rightmost child, Down returns to the parent."""
    path = _require_valid(path)
    stack: list[list[PlaneTree]] = [[]]
    for s in path.steps:
        if s == "U":
            stack.append([])
        else:
            kids = stack.pop()
            stack[-1].append(PlaneTree(tuple(kids)))
    return PlaneTree(tuple(stack[0]))


def tree_to_path(tree: PlaneTree) -> DyckPath:
    out: list[str] = []
    stack: list[Iterator[PlaneTree]] = [iter(tree.children)]
    while stack:
        child = next(stack[-1], None)
        if child is None:
            stack.pop()
            if stack:
                out.append("D")
        else:
            out.append("U")
            stack.append(iter(child.children))
    return DyckPath("".join(out))


def tree_stats(tree: PlaneTree) -> tuple[int, int, int]:
    """``(nodes, height_in_edges, leaves)``."""
    return tree.size(), tree.height(), tree.leaves()
