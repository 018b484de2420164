"""Abelian invariants through integer normal forms."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .group import FiniteGroup, Subgroup, commutator_subgroup, quotient


def smith_diagonal(rows: Sequence[Sequence[int]], ncols: int) -> list[int]:
    """Nonzero diagonal of the Smith normal form, ``d1 | d2 | ...``.

    Works on Python ints, so there is no overflow.
    """
    A = [list(map(int, r)) for r in rows if any(r)]
    diag: list[int] = []
    m = ncols
    col0 = 0
    while A and col0 < m:
        # pivot: smallest nonzero absolute entry
        best = None
        for i, r in enumerate(A):
            for j in range(col0, m):
                if r[j] and (best is None or abs(r[j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        A[0], A[i] = A[i], A[0]
        for r in A:
            r[col0], r[j] = r[j], r[col0]
        while True:
            piv = A[0][col0]
            done = True
            # clear the pivot column
            for r in A[1:]:
                q = r[col0] // piv
                if q:
                    for c in range(col0, m):
                        r[c] -= q * A[0][c]
                if r[col0]:
                    done = False
            # clear the pivot row
            for c in range(col0 + 1, m):
                q = A[0][c] // piv
                if q:
                    for r in A:
                        r[c] -= q * r[col0]
                if A[0][c]:
                    done = False
            if done:
                # divisibility: pivot must divide the remaining block
                bad = next(((r, c) for r in A[1:] for c in range(col0 + 1, m) if r[c] % piv), None)
                if bad is None:
                    break
                r, _ = bad
                for c in range(col0, m):
                    A[0][c] += r[c]
                continue
            # move the smallest entry of row/column to the pivot
            cands = [(abs(r[col0]), k, col0) for k, r in enumerate(A) if r[col0]]
            cands += [(abs(A[0][c]), 0, c) for c in range(col0, m) if A[0][c]]
            _, k, c = min(cands)
            A[0], A[k] = A[k], A[0]
            for r in A:
                r[col0], r[c] = r[c], r[col0]
        diag.append(abs(A[0][col0]))
        A = [r for r in A[1:] if any(r[col0 + 1:])]
        col0 += 1
    return diag


def abelian_group_invariants(A: FiniteGroup) -> list[int]:
    """Invariant factors ``d1 | d2 | ...`` (all > 1) of an abelian group.

    Builds a triangular relation basis along a chain of subgroups
    ``<g1> < <g1, g2> < ...`` and reduces it to Smith form.
    """
    n = A.order
    coords: dict[int, tuple[int, ...]] = {0: ()}
    members = np.zeros(n, dtype=bool)
    members[0] = True
    rels: list[list[int]] = []
    cands = list(A.gens) + list(range(1, n))
    for s in cands:
        if members[s]:
            continue
        k = len(rels)
        current = np.nonzero(members)[0]
        # smallest m with s^m in the current subgroup
        m, x = 1, s
        while not members[x]:
            x = int(A.mul[x, s])
            m += 1
        rels = [r + [0] for r in rels]
        rels.append([-c for c in coords[x]] + [m])
        new_coords = {}
        y = 0
        for j in range(m):
            for e in current:
                e = int(e)
                z = int(A.mul[e, y])
                new_coords[z] = coords[e] + (0,) * (k - len(coords[e])) + (j,)
            y = int(A.mul[y, s])
        coords = new_coords
        members[list(coords)] = True
        if len(coords) == n:
            break
    k = len(rels)
    return [d for d in smith_diagonal(rels, k) if d != 1]


def abelianization(G: FiniteGroup) -> tuple[FiniteGroup, Subgroup]:
    W = G.whole()
    D = commutator_subgroup(G, W, W)
    Q, _ = quotient(G, D)
    return Q, D


def abelian_invariants(G: FiniteGroup) -> list[int]:
    """Invariant factors of ``G / [G, G]``."""
    if G.is_abelian():
        return abelian_group_invariants(G)
    Q, _ = abelianization(G)
    return abelian_group_invariants(Q)


def invariants_from_orders(orders: Sequence[int]) -> list[int]:
    """Invariant factors from cyclic orders, e.g. ``[2, 6] -> [2, 6]``, ``[4, 6] -> [2, 12]``."""
    pp: dict[int, list[int]] = {}
    for m in orders:
        m = int(m)
        p = 2
        while m > 1:
            if m % p == 0:
                e = 1
                m //= p
                while m % p == 0:
                    m //= p
                    e *= p
                pp.setdefault(p, []).append(e * p)
            p += 1
    width = max((len(v) for v in pp.values()), default=0)
    out = [1] * width
    for p, powers in pp.items():
        powers.sort(reverse=True)
        for i, q in enumerate(powers):
            out[width - 1 - i] *= q
    return [d for d in out if d > 1]


def regular_table_invariants(table: np.ndarray, cols: Sequence[int]) -> list[int] | None:
    """Invariant factors of an abelian group given by its regular coset table.

    ``table[:, c]`` for ``c`` in ``cols`` must be right multiplication by
    elements generating the group.  Returns None if the group is not
    abelian.  No Cayley table is formed, so this works above the order cap.
    """
    from .fp import _kernel

    t = np.ascontiguousarray(table, dtype=np.int64)
    n = t.shape[0]
    S = _kernel.generating_columns(t, np.asarray(cols, dtype=np.int64))
    if not _kernel.columns_commute(t, S):
        return None
    basis = _kernel.relation_lattice(t, S, n)
    k = len(S)
    rows = [list(r) for r in basis] + [[n if i == j else 0 for j in range(k)] for i in range(k)]
    inv = [d for d in smith_diagonal(rows, k) if d != 1]
    if int(np.prod(inv, dtype=object)) != n:
        raise ArithmeticError("relation lattice does not match the table size")
    return inv
