"""Truncated order-2 Cayley tree: addressing, levels, linear indexing.

A vertex address is a digit string: "" for the root, otherwise a first
digit in {1,2,3} followed by digits in {1,2}. The root has 3 children,
every other vertex has 2; level l holds 3*2^(l-1) vertices. The linear
index flattens the ball of radius n level by level, addresses in
lexicographic order within each level, giving the basis used by all
matrices and configuration vectors.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import AddressOutOfShape, InvalidLevel

Address = str


def validate_address(addr: Address) -> None:
    if addr == "":
        return
    if addr[0] not in "123" or any(ch not in "12" for ch in addr[1:]):
        raise AddressOutOfShape(f"malformed address {addr!r}")


def level(addr: Address) -> int:
    return len(addr)


def parent(addr: Address) -> Optional[Address]:
    """Parent address, or None for the root."""
    validate_address(addr)
    if addr == "":
        return None
    return addr[:-1]


@dataclass(frozen=True)
class TreeShape:
    """Combinatorics of the tree truncated at level n."""

    n: int
    level_sizes: tuple[int, ...] = field(init=False)
    level_offsets: tuple[int, ...] = field(init=False)
    total_vertices: int = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidLevel(f"level count must be >= 1, got {self.n}")
        sizes = (1,) + tuple(3 * 2 ** (l - 1) for l in range(1, self.n + 1))
        offsets = [0]
        for s in sizes[:-1]:
            offsets.append(offsets[-1] + s)
        object.__setattr__(self, "level_sizes", sizes)
        object.__setattr__(self, "level_offsets", tuple(offsets))
        object.__setattr__(self, "total_vertices", sum(sizes))

    def check_level(self, l: int) -> None:
        if l > self.n:
            raise AddressOutOfShape(f"level {l} exceeds shape level {self.n}")

    def linear_index(self, addr: Address) -> int:
        """Position of addr in the level-by-level lexicographic flattening."""
        validate_address(addr)
        l = level(addr)
        self.check_level(l)
        if l == 0:
            return 0
        # first digit counts in base 3 over blocks of 2^(l-1); the rest in base 2
        pos = (int(addr[0]) - 1) * 2 ** (l - 1)
        for i, ch in enumerate(addr[1:], start=2):
            pos += (int(ch) - 1) * 2 ** (l - i)
        return self.level_offsets[l] + pos

    def address_of(self, index: int) -> Address:
        """Inverse of linear_index."""
        if not 0 <= index < self.total_vertices:
            raise AddressOutOfShape(f"index {index} outside [0, {self.total_vertices})")
        if index == 0:
            return ""
        l = max(k for k in range(self.n + 1) if self.level_offsets[k] <= index)
        pos = index - self.level_offsets[l]
        first, rest = divmod(pos, 2 ** (l - 1))
        digits = [str(first + 1)]
        for i in range(l - 2, -1, -1):
            bit, rest = divmod(rest, 2**i)
            digits.append(str(bit + 1))
        return "".join(digits)

    def children(self, addr: Address) -> list[Address]:
        """Children inside the shape; empty at level n (null boundary)."""
        validate_address(addr)
        l = level(addr)
        self.check_level(l)
        if l == self.n:
            return []
        if addr == "":
            return ["1", "2", "3"]
        return [addr + "1", addr + "2"]

    def addresses(self) -> Iterator[Address]:
        """All addresses in linear-index order."""
        for i in range(self.total_vertices):
            yield self.address_of(i)

    def parent_index(self, index: int) -> Optional[int]:
        p = parent(self.address_of(index))
        return None if p is None else self.linear_index(p)

    def child_indices(self, index: int) -> list[int]:
        return [self.linear_index(c) for c in self.children(self.address_of(index))]


def make_shape(n: int) -> TreeShape:
    return TreeShape(n)
