"""Physical operators over consolidated collections.

Row transforms are compiled from the planner's positional form into small
Python lambdas once per subplan, so the inner loops do no interpretation.
"""

from __future__ import annotations

from concurrent.futures import Executor
from typing import Callable

from ..errors import MonoidMismatch, UnsupportedLift, UnsupportedMonoid
from .collection import COUNT, PRESENCE, Arrangement, Collection, Monoid

RowFn = Callable[[tuple], "tuple | None"]

_PY_OP = {"=": "==", "!=": "!=", "<": "<", "<=": "<=", ">": ">", ">=": ">="}


def compile_row(filters: tuple = (), projection: tuple | None = None) -> RowFn:
    """Positional filters and projection as one row function.

    Operands are ``("c", index)`` or ``("k", constant)``. The function
    returns the projected tuple, or ``None`` when a filter rejects the row.
    """

    def expr(o) -> str:
        return f"r[{int(o[1])}]" if o[0] == "c" else repr(int(o[1]))

    conds = " and ".join(f"{expr(a)} {_PY_OP[op]} {expr(b)}" for a, op, b in filters)
    proj = "r" if projection is None else "(" + "".join(expr(o) + ", " for o in projection) + ")"
    body = f"{proj} if {conds} else None" if conds else proj
    return eval(f"lambda r: {body}")  # noqa: S307 - generated from integer positions only


def _check(a: Monoid, b: Monoid) -> None:
    if a != b:
        raise MonoidMismatch(f"cannot combine {a.name} with {b.name}")


def arrange(c: Collection, key_arity: int) -> Arrangement:
    return Arrangement.build(c, key_arity)


def _join_keys(l: Arrangement, r: Arrangement, keys, fn: RowFn, out: Collection) -> int:
    mul = l.monoid.multiply
    add = out.add
    emitted = 0
    for key in keys:
        rb = r.index.get(key)
        if not rb:
            continue
        lb = l.index[key]
        for lv, ld in lb.items():
            for rv, rd in rb.items():
                t = fn(key + lv + rv)
                if t is not None:
                    emitted += 1
                    add(t, mul(ld, rd))
    return emitted


def join_core(
    l: Arrangement,
    r: Arrangement,
    fn: RowFn | None = None,
    workers: int = 1,
    pool: Executor | None = None,
    counter: list[int] | None = None,
) -> Collection:
    """Match equal keys; rows are ``key + left value + right value``.

    With ``workers > 1`` the key space is hash-partitioned and each part
    joined separately; partial results are consolidated in partition order,
    so the result does not depend on the worker count.
    """
    _check(l.monoid, r.monoid)
    if l.key_arity != r.key_arity:
        raise ValueError("join inputs must have the same key arity")
    fn = fn or (lambda row: row)
    small, big = (l, r) if len(l.index) <= len(r.index) else (r, l)
    keys = [k for k in small.index if k in big.index]
    out = Collection(l.monoid)
    if workers <= 1 or pool is None or len(keys) < 2 * workers:
        emitted = _join_keys(l, r, keys, fn, out)
    else:
        parts = [[k for k in keys if hash(k) % workers == w] for w in range(workers)]
        partials = [Collection(l.monoid) for _ in parts]
        futures = [pool.submit(_join_keys, l, r, p, fn, o) for p, o in zip(parts, partials)]
        emitted = sum(f.result() for f in futures)
        for part in partials:
            for t, d in part:
                out.add(t, d)
    if counter is not None:
        counter[0] += emitted
    return out


def flat_map_op(c: Collection, fn: RowFn) -> Collection:
    out = Collection(c.monoid)
    for t, d in c:
        row = fn(t)
        if row is not None:
            out.add(row, d)
    return out


def concat_op(a: Collection, b: Collection) -> Collection:
    _check(a.monoid, b.monoid)
    out = a.copy()
    for t, d in b:
        out.add(t, d)
    return out


def distinct_op(c: Collection) -> Collection:
    if c.monoid is PRESENCE:
        return c.copy()
    if c.monoid is not COUNT:
        raise UnsupportedMonoid(f"distinct is not defined over {c.monoid.name}")
    return Collection.from_pairs(COUNT, ((t, 1) for t, d in c if d > 0))


def lift_diff(c: Collection, target: Monoid) -> Collection:
    if c.monoid is target:
        return c.copy()
    if c.monoid is PRESENCE and target is COUNT:
        return Collection.from_pairs(COUNT, ((t, 1) for t, d in c if d))
    if c.monoid is COUNT and target is PRESENCE:
        return Collection.from_pairs(PRESENCE, ((t, True) for t, d in c if d > 0))
    raise UnsupportedLift(f"no lift from {c.monoid.name} to {target.name}")


def _present(d) -> bool:
    return bool(d) if not isinstance(d, int) or isinstance(d, bool) else d > 0


def antijoin_op(l: Collection, r: Arrangement) -> Collection:
    """Keep the rows of ``l`` whose key has no positive match in ``r``.

    Written as ``l - (l semijoin r)`` over counts; presence inputs are
    lifted to counts first and cast back afterwards.
    """
    k = r.key_arity
    counts = l if l.monoid is COUNT else lift_diff(l, COUNT)
    matched = Collection(COUNT)
    for t, d in counts:
        bucket = r.index.get(t[:k])
        if bucket and any(_present(x) for x in bucket.values()):
            matched.add(t, -d)
    result = concat_op(counts, matched)
    return result if l.monoid is COUNT else lift_diff(result, l.monoid)


def reduce_lattice(c: Collection, lattice: Monoid) -> Collection:
    """Group on all but the last column and fold the last into the lattice."""
    if not lattice.lattice:
        raise UnsupportedMonoid(f"{lattice.name} is not a lattice")
    if c.monoid is lattice:
        return c.copy()
    out = Collection(lattice)
    for t, _ in c:
        out.add(t[:-1], t[-1])
    return out


def lattice_rows(c: Collection, monoid: Monoid) -> Collection:
    """A lattice collection read back as plain ``group + (value,)`` rows."""
    return Collection.from_pairs(monoid, ((g + (v,), monoid.one) for g, v in c))


def reduce_aggregate(
    contributions: Collection,
    group: Callable[[tuple], tuple],
    value: Callable[[tuple], int],
    fn: str,
    monoid: Monoid = PRESENCE,
) -> Collection:
    """One row per group with the aggregate appended.

    Each distinct contribution counts once, matching set semantics.
    """
    acc: dict[tuple, int] = {}
    for t, _ in contributions:
        g = group(t)
        if fn == "COUNT":
            acc[g] = acc.get(g, 0) + 1
        elif fn == "SUM":
            acc[g] = acc.get(g, 0) + value(t)
        elif fn == "MIN":
            v = value(t)
            acc[g] = v if g not in acc else min(acc[g], v)
        elif fn == "MAX":
            v = value(t)
            acc[g] = v if g not in acc else max(acc[g], v)
        else:
            raise ValueError(f"unknown aggregate {fn}")
    return Collection.from_pairs(monoid, ((g + (v,), monoid.one) for g, v in acc.items()))
