"""Monoid diffs, consolidated collections and arrangements."""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from ..errors import UnsupportedMonoid


@dataclass(frozen=True)
class Monoid:
    name: str
    zero: object
    one: object
    _combine: Callable[[object, object], object]
    _multiply: Callable[[object, object], object] | None = None
    lattice: bool = False

    def combine(self, a, b):
        return self._combine(a, b)

    def multiply(self, a, b):
        if self._multiply is None:
            raise UnsupportedMonoid(f"{self.name} diffs cannot be multiplied")
        return self._multiply(a, b)

    def is_zero(self, d) -> bool:
        return d == self.zero

    def __repr__(self) -> str:
        return self.name


def _lattice(pick):
    def combine(a, b):
        if a is None:
            return b
        if b is None:
            return a
        return pick(a, b)

    return combine


PRESENCE = Monoid("Presence", False, True, operator.or_, operator.and_)
COUNT = Monoid("Count", 0, 1, operator.add, operator.mul)
# lattice zero is the identity of MIN/MAX, i.e. "no value yet"
MIN_LATTICE = Monoid("MinLattice", None, None, _lattice(min), lattice=True)
MAX_LATTICE = Monoid("MaxLattice", None, None, _lattice(max), lattice=True)

LATTICES = {"MIN": MIN_LATTICE, "MAX": MAX_LATTICE}


class Collection:
    """Tuples with non-zero diffs; each tuple appears once."""

    __slots__ = ("monoid", "rows")

    def __init__(self, monoid: Monoid, rows: dict[tuple, object] | None = None):
        self.monoid = monoid
        self.rows: dict[tuple, object] = {}
        if rows:
            for t, d in rows.items():
                self.add(t, d)

    @classmethod
    def from_tuples(cls, monoid: Monoid, tuples: Iterable[tuple]) -> "Collection":
        c = cls(monoid)
        for t in tuples:
            c.add(tuple(t), monoid.one)
        return c

    @classmethod
    def from_pairs(cls, monoid: Monoid, pairs: Iterable[tuple[tuple, object]]) -> "Collection":
        c = cls(monoid)
        for t, d in pairs:
            c.add(t, d)
        return c

    def add(self, t: tuple, d) -> None:
        rows = self.rows
        if t in rows:
            merged = self.monoid.combine(rows[t], d)
            if self.monoid.is_zero(merged):
                del rows[t]
            else:
                rows[t] = merged
        elif not self.monoid.is_zero(d):
            rows[t] = d

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[tuple[tuple, object]]:
        return iter(self.rows.items())

    def __contains__(self, t: tuple) -> bool:
        return t in self.rows

    def tuples(self) -> set[tuple]:
        return set(self.rows)

    def copy(self) -> "Collection":
        c = Collection(self.monoid)
        c.rows = dict(self.rows)
        return c

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Collection) and self.monoid == other.monoid and self.rows == other.rows

    def __repr__(self) -> str:
        body = ", ".join(f"{t}: {d}" for t, d in sorted(self.rows.items(), key=lambda kv: kv[0]))
        return f"Collection[{self.monoid.name}]({{{body}}})"


class Arrangement:
    """Key-prefix index over a collection."""

    __slots__ = ("monoid", "key_arity", "index", "size")

    def __init__(self, monoid: Monoid, key_arity: int):
        self.monoid = monoid
        self.key_arity = key_arity
        self.index: dict[tuple, dict[tuple, object]] = {}
        self.size = 0

    @classmethod
    def build(cls, c: Collection, key_arity: int) -> "Arrangement":
        a = cls(c.monoid, key_arity)
        a.merge(c)
        return a

    def merge(self, c: Collection) -> None:
        k = self.key_arity
        for t, d in c:
            if len(t) < k:
                raise ValueError(f"tuple {t} shorter than key arity {k}")
            bucket = self.index.setdefault(t[:k], {})
            rest = t[k:]
            if rest in bucket:
                merged = self.monoid.combine(bucket[rest], d)
                if self.monoid.is_zero(merged):
                    del bucket[rest]
                    self.size -= 1
                    if not bucket:
                        del self.index[t[:k]]
                else:
                    bucket[rest] = merged
            else:
                bucket[rest] = d
                self.size += 1

    def get(self, key: tuple) -> list[tuple[tuple, object]]:
        return list(self.index.get(key, {}).items())

    def keys(self):
        return self.index.keys()

    def to_collection(self) -> Collection:
        c = Collection(self.monoid)
        for key, bucket in self.index.items():
            for rest, d in bucket.items():
                c.add(key + rest, d)
        return c

    def __len__(self) -> int:
        return self.size
