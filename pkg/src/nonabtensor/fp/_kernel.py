"""Compiled core of the Felsch coset enumerator.

Columns encode letters: column ``2*i`` is generator ``i`` and ``2*i + 1`` its
inverse, so ``x ^ 1`` is the inverse column.  Undefined entries are ``-1``.
Coincidences are handled with a forwarding array ``p`` (union-find toward
the smaller coset number) and a queue of dead cosets whose rows are merged
into their representatives.
"""

import numpy as np
from numba import njit

OK = 0
LIMIT_EXCEEDED = 1

_DED_CAP = 1 << 18


@njit(cache=True)
def _rep(p, c):
    r = c
    while p[r] != r:
        r = p[r]
    while p[c] != r:
        n = p[c]
        p[c] = r
        c = n
    return r


@njit(cache=True)
def _merge(p, q, qn, a, b):
    a = _rep(p, a)
    b = _rep(p, b)
    if a == b:
        return qn
    if a > b:
        a, b = b, a
    p[b] = a
    q[qn] = b
    return qn + 1


@njit(cache=True)
def _push(ded, st, c, x):
    top = st[0]
    if top == ded.shape[0]:
        st[1] = 1
        return
    ded[top, 0] = c
    ded[top, 1] = x
    st[0] = top + 1


@njit(cache=True)
def _coincidence(table, p, q, ded, st, a, b):
    ncols = table.shape[1]
    qn = _merge(p, q, 0, a, b)
    i = 0
    while i < qn:
        c = q[i]
        i += 1
        for x in range(ncols):
            d = table[c, x]
            if d < 0:
                continue
            xi = x ^ 1
            if table[d, xi] == c:
                table[d, xi] = -1
            e = _rep(p, c)
            f = _rep(p, d)
            ex = table[e, x]
            if ex >= 0:
                qn = _merge(p, q, qn, f, ex)
            else:
                fx = table[f, xi]
                if fx >= 0:
                    qn = _merge(p, q, qn, e, fx)
                else:
                    table[e, x] = f
                    table[f, xi] = e
                    _push(ded, st, e, x)
    st[2] += qn


@njit(cache=True)
def _scan(table, p, q, ded, st, c, letters, off, ln):
    """Felsch scan of one word at coset ``c``.

    Returns 1 if the scan changed the table (deduction or coincidence).
    """
    end = off + ln
    f = c
    i = off
    while i < end:
        nx = table[f, letters[i]]
        if nx < 0:
            break
        f = nx
        i += 1
    if i == end:
        if f != c:
            _coincidence(table, p, q, ded, st, f, c)
            return 1
        return 0
    b = c
    j = end - 1
    while j >= i:
        nx = table[b, letters[j] ^ 1]
        if nx < 0:
            break
        b = nx
        j -= 1
    if j < i:
        if f != b:
            _coincidence(table, p, q, ded, st, f, b)
            return 1
        return 0
    if j == i:
        x = letters[i]
        table[f, x] = b
        table[b, x ^ 1] = f
        _push(ded, st, f, x)
        return 1
    return 0


@njit(cache=True)
def _process(table, p, q, ded, st, letters, offs, lens, col_start, col_ids):
    while st[0] > 0:
        st[0] -= 1
        c = ded[st[0], 0]
        x = ded[st[0], 1]
        if p[c] != c:
            continue
        for k in range(col_start[x], col_start[x + 1]):
            if p[c] != c:
                break
            w = col_ids[k]
            _scan(table, p, q, ded, st, c, letters, offs[w], lens[w])


@njit(cache=True)
def _full_pass(table, p, q, ded, st, nrows, letters, offs, lens, rel_ids):
    changed = 0
    for c in range(nrows):
        for k in range(rel_ids.shape[0]):
            if p[c] != c:
                break
            w = rel_ids[k]
            changed += _scan(table, p, q, ded, st, c, letters, offs[w], lens[w])
    return changed


@njit(cache=True)
def _grow(table, p, q, newcap):
    old = table.shape[0]
    t2 = np.full((newcap, table.shape[1]), -1, dtype=np.int32)
    t2[:old] = table
    p2 = np.arange(newcap).astype(np.int32)
    p2[:old] = p
    q2 = np.empty(newcap, dtype=np.int32)
    return t2, p2, q2


@njit(cache=True)
def felsch(ncols, letters, offs, lens, col_start, col_ids, rel_ids,
           sub_letters, sub_offs, sub_lens, limit):
    """Enumerate cosets of the subgroup spanned by the ``sub`` words.

    ``letters/offs/lens`` hold every cyclic conjugate of every relator and
    its inverse; ``col_start/col_ids`` index them by first letter and
    ``rel_ids`` selects one conjugate per relator for full passes.

    Returns ``(status, table, n_live, n_defined, n_coincident)``.
    """
    cap = min(limit, 1024)
    table = np.full((cap, ncols), -1, dtype=np.int32)
    p = np.arange(cap).astype(np.int32)
    q = np.empty(cap, dtype=np.int32)
    ded = np.empty((_DED_CAP, 2), dtype=np.int32)
    # st: [deduction top, overflow flag, coincidence count]
    st = np.zeros(3, dtype=np.int64)
    nrows = 1

    # subgroup generators: scan and fill at coset 0
    for s in range(sub_offs.shape[0]):
        off = sub_offs[s]
        end = off + sub_lens[s]
        while True:
            if p[0] != 0:
                break
            f = 0
            i = off
            while i < end:
                nx = table[f, sub_letters[i]]
                if nx < 0:
                    break
                f = nx
                i += 1
            if i == end:
                if f != 0:
                    _coincidence(table, p, q, ded, st, f, 0)
                break
            b = 0
            j = end - 1
            while j >= i:
                nx = table[b, sub_letters[j] ^ 1]
                if nx < 0:
                    break
                b = nx
                j -= 1
            if j < i:
                if f != b:
                    _coincidence(table, p, q, ded, st, f, b)
                break
            x = sub_letters[i]
            if j == i:
                table[f, x] = b
                table[b, x ^ 1] = f
                _push(ded, st, f, x)
                break
            if nrows == cap:
                if cap >= limit:
                    return LIMIT_EXCEEDED, table[:0], 0, nrows, st[2]
                cap = min(limit, 2 * cap)
                table, p, q = _grow(table, p, q, cap)
            n = nrows
            nrows += 1
            table[f, x] = n
            table[n, x ^ 1] = f
            _push(ded, st, f, x)
        _process(table, p, q, ded, st, letters, offs, lens, col_start, col_ids)

    cur = 0
    while True:
        _process(table, p, q, ded, st, letters, offs, lens, col_start, col_ids)
        if st[1] != 0:
            st[1] = 0
            st[0] = 0
            _full_pass(table, p, q, ded, st, nrows, letters, offs, lens, rel_ids)
            continue
        # next definition: first undefined entry of the lowest live row
        col = -1
        while cur < nrows:
            if p[cur] == cur:
                for x in range(ncols):
                    if table[cur, x] < 0:
                        col = x
                        break
                if col >= 0:
                    break
            cur += 1
        if col < 0:
            # table complete: confirm every relator closes at every coset
            if _full_pass(table, p, q, ded, st, nrows, letters, offs, lens, rel_ids) == 0 \
                    and st[0] == 0 and st[1] == 0:
                break
            cur = 0
            continue
        if nrows == cap:
            if cap >= limit:
                return LIMIT_EXCEEDED, table[:0], 0, nrows, st[2]
            cap = min(limit, 2 * cap)
            table, p, q = _grow(table, p, q, cap)
        n = nrows
        nrows += 1
        table[cur, col] = n
        table[n, col ^ 1] = cur
        _push(ded, st, cur, col)

    # compact live cosets, preserving their relative order
    newidx = np.full(nrows, -1, dtype=np.int32)
    live = 0
    for c in range(nrows):
        if p[c] == c:
            newidx[c] = live
            live += 1
    out = np.empty((live, ncols), dtype=np.int32)
    for c in range(nrows):
        if p[c] == c:
            r = newidx[c]
            for x in range(ncols):
                out[r, x] = newidx[_rep(p, table[c, x])]
    return OK, out, live, nrows, st[2]


@njit(cache=True)
def reduce_words(words, lengths):
    """Free and cyclic reduction of column-coded padded words, in place.

    Returns the new lengths; reduced words are left-aligned.
    """
    n = words.shape[0]
    out_len = np.empty(n, dtype=np.int64)
    buf = np.empty(words.shape[1], dtype=np.int32)
    for r in range(n):
        top = 0
        for i in range(lengths[r]):
            x = words[r, i]
            if top > 0 and buf[top - 1] == (x ^ 1):
                top -= 1
            else:
                buf[top] = x
                top += 1
        lo = 0
        hi = top
        while hi - lo >= 2 and buf[lo] == (buf[hi - 1] ^ 1):
            lo += 1
            hi -= 1
        ln = hi - lo
        for i in range(ln):
            words[r, i] = buf[lo + i]
        for i in range(ln, words.shape[1]):
            words[r, i] = -1
        out_len[r] = ln
    return out_len


@njit(cache=True)
def first_failure(table, words, lengths):
    """First ``(word, coset)`` where a column-coded word does not return."""
    n = table.shape[0]
    for r in range(words.shape[0]):
        ln = lengths[r]
        for c in range(n):
            f = c
            for i in range(ln):
                f = table[f, words[r, i]]
            if f != c:
                return r, c
    return -1, -1


@njit(cache=True)
def _scan_fill(table, p, q, ded, st, nrows_cap, c, letters, off, ln):
    """HLT scan of one word at coset ``c``, defining cosets to close gaps.

    Returns ``(nrows, ok)``; ``ok`` is 0 when capacity ran out.
    """
    nrows, cap = nrows_cap[0], nrows_cap[1]
    end = off + ln
    while True:
        if p[c] != c:
            return nrows, 1
        f = c
        i = off
        while i < end:
            nx = table[f, letters[i]]
            if nx < 0:
                break
            f = nx
            i += 1
        if i == end:
            if f != c:
                _coincidence(table, p, q, ded, st, f, c)
                st[0] = 0
            return nrows, 1
        b = c
        j = end - 1
        while j >= i:
            nx = table[b, letters[j] ^ 1]
            if nx < 0:
                break
            b = nx
            j -= 1
        if j < i:
            if f != b:
                _coincidence(table, p, q, ded, st, f, b)
                st[0] = 0
            return nrows, 1
        x = letters[i]
        if j == i:
            table[f, x] = b
            table[b, x ^ 1] = f
            return nrows, 1
        if nrows == cap:
            return nrows, 0
        table[f, x] = nrows
        table[nrows, x ^ 1] = f
        nrows += 1


@njit(cache=True)
def _first_incomplete(table, p, nrows):
    for c in range(nrows):
        if p[c] == c:
            for x in range(table.shape[1]):
                if table[c, x] < 0:
                    return c
    return -1


@njit(cache=True)
def hlt(ncols, letters, offs, lens, rel_ids, sub_letters, sub_offs, sub_lens, limit):
    """Relator-based (HLT) enumeration; same inputs and outputs as ``felsch``.

    Each live coset in turn has every relator scanned and filled at it,
    then its row completed.  Suits presentations with many short relators.
    Merging cosets keeps closed relator cycles closed, so once every live
    coset has been processed the table is complete and consistent; no
    final pass is needed.
    """
    cap = min(limit, 1024)
    table = np.full((cap, ncols), -1, dtype=np.int32)
    p = np.arange(cap).astype(np.int32)
    q = np.empty(cap, dtype=np.int32)
    ded = np.empty((_DED_CAP, 2), dtype=np.int32)
    st = np.zeros(3, dtype=np.int64)
    nc = np.zeros(2, dtype=np.int64)
    nrows = 1

    c = 0  # next coset in definition order
    while True:
        if c < nrows:
            target = c
        else:
            # coincidences may have cleared entries of finished rows
            target = _first_incomplete(table, p, nrows)
            if target < 0:
                break
        ok = 1
        if target == 0:
            for s in range(sub_offs.shape[0]):
                nc[0] = nrows
                nc[1] = cap
                nrows, ok = _scan_fill(table, p, q, ded, st, nc, 0, sub_letters, sub_offs[s], sub_lens[s])
                if ok == 0:
                    break
        if ok == 1 and p[target] == target:
            for k in range(rel_ids.shape[0]):
                w = rel_ids[k]
                nc[0] = nrows
                nc[1] = cap
                nrows, ok = _scan_fill(table, p, q, ded, st, nc, target, letters, offs[w], lens[w])
                if ok == 0 or p[target] != target:
                    break
        if ok == 1 and p[target] == target:
            for x in range(ncols):
                if table[target, x] < 0:
                    if nrows == cap:
                        ok = 0
                        break
                    table[target, x] = nrows
                    table[nrows, x ^ 1] = target
                    nrows += 1
        if ok == 0:
            if cap >= limit:
                return LIMIT_EXCEEDED, table[:0], 0, nrows, st[2]
            cap = min(limit, 2 * cap)
            table, p, q = _grow(table, p, q, cap)
            continue
        if target == c:
            c += 1
            while c < nrows and p[c] != c:
                c += 1

    newidx = np.full(nrows, -1, dtype=np.int32)
    live = 0
    for c in range(nrows):
        if p[c] == c:
            newidx[c] = live
            live += 1
    out = np.empty((live, ncols), dtype=np.int32)
    for c in range(nrows):
        if p[c] == c:
            r = newidx[c]
            for x in range(ncols):
                out[r, x] = newidx[_rep(p, table[c, x])]
    return OK, out, live, nrows, st[2]


@njit(cache=True)
def _orbit_mask(table, cols, k):
    n = table.shape[0]
    seen = np.zeros(n, dtype=np.bool_)
    stack = np.empty(n, dtype=np.int64)
    seen[0] = True
    stack[0] = 0
    top = 1
    while top:
        top -= 1
        c = stack[top]
        for j in range(k):
            d = table[c, cols[j]]
            if not seen[d]:
                seen[d] = True
                stack[top] = d
                top += 1
    return seen


@njit(cache=True)
def generating_columns(table, cand):
    """Greedy subset of the columns ``cand`` whose elements generate the group.

    In a regular table the subgroup generated by some columns is the orbit
    of row 0 under them.
    """
    chosen = np.empty(len(cand), dtype=np.int64)
    k = 0
    seen = _orbit_mask(table, chosen, 0)
    for x in cand:
        if not seen[table[0, x]]:
            chosen[k] = x
            k += 1
            seen = _orbit_mask(table, chosen, k)
    return chosen[:k]


@njit(cache=True)
def columns_commute(table, cols):
    n = table.shape[0]
    for a in range(len(cols)):
        for b in range(a + 1, len(cols)):
            for c in range(n):
                if table[table[c, cols[a]], cols[b]] != table[table[c, cols[b]], cols[a]]:
                    return False
    return True


@njit(cache=True)
def _egcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


@njit(cache=True)
def relation_lattice(table, cols, modulus):
    """Hermite basis, mod ``modulus``, of the relations among ``cols``.

    Coset ``c`` gets the exponent vector ``v(c)`` of its spanning-tree word;
    every edge ``c -> c s`` yields the relation ``v(c) + e_s - v(c s)``.
    ``modulus`` must be a multiple of the group exponent so that
    ``modulus * Z^k`` lies inside the lattice.
    """
    n = table.shape[0]
    k = len(cols)
    vec = np.zeros((n, k), dtype=np.int64)
    done = np.zeros(n, dtype=np.bool_)
    queue = np.empty(n, dtype=np.int64)
    done[0] = True
    queue[0] = 0
    head, tail = 0, 1
    while head < tail:
        c = queue[head]
        head += 1
        for j in range(k):
            d = table[c, cols[j]]
            if not done[d]:
                done[d] = True
                for i in range(k):
                    vec[d, i] = vec[c, i]
                vec[d, j] = (vec[d, j] + 1) % modulus
                queue[tail] = d
                tail += 1
    basis = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        basis[i, i] = modulus
    r = np.empty(k, dtype=np.int64)
    for c in range(n):
        for j in range(k):
            d = table[c, cols[j]]
            for i in range(k):
                r[i] = (vec[c, i] - vec[d, i]) % modulus
            r[j] = (r[j] + 1) % modulus
            for i in range(k):
                if r[i] == 0:
                    continue
                g, a, b = _egcd(basis[i, i], r[i])
                p, q = basis[i, i] // g, r[i] // g
                for t in range(i, k):
                    bi, ri = basis[i, t], r[t]
                    basis[i, t] = (a * bi + b * ri) % modulus
                    r[t] = (q * bi - p * ri) % modulus
                if basis[i, i] == 0:
                    basis[i, i] = modulus
    return basis
