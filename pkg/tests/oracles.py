"""Independent reference computations used by the tests.

Nothing here imports the engine beyond reading a multiplication table as
a nested list, so a shared bug cannot make both sides agree.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter


def table(G) -> list[list[int]]:
    return [list(map(int, row)) for row in G.mul]


def _inverse(mul, g):
    return next(h for h in range(len(mul)) if mul[g][h] == 0)


def _power(mul, g, k):
    x = 0
    for _ in range(k):
        x = mul[x][g]
    return x


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def elementary_divisors(mul) -> list[int]:
    """Prime-power cyclic factors of an abelian group, read off from
    ``#{x : x^(p^k) = 1}`` for each prime ``p`` and ``k``."""
    n = len(mul)
    out = []
    for p, e in _factor(n).items():
        counts = [1]
        for k in range(1, e + 1):
            counts.append(sum(1 for x in range(n) if _power(mul, x, p ** k) == 0))
        # number of cyclic factors of order >= p^k
        at_least = [round(math.log(counts[k] // counts[k - 1], p)) for k in range(1, e + 1)]
        at_least.append(0)
        for k in range(1, e + 1):
            out += [p ** k] * (at_least[k - 1] - at_least[k])
    return sorted(out)


def invariant_factors(divisors) -> list[int]:
    """Merge prime-power (or arbitrary) cyclic orders into ``d1 | d2 | ...``."""
    by_prime: dict[int, list[int]] = {}
    for d in divisors:
        for p, e in _factor(d).items():
            by_prime.setdefault(p, []).append(p ** e)
    if not by_prime:
        return []
    width = max(len(v) for v in by_prime.values())
    out = [1] * width
    for v in by_prime.values():
        v = sorted(v, reverse=True)
        for i, q in enumerate(v):
            out[width - 1 - i] *= q
    return [d for d in out if d > 1]


def abelian_tensor(ds, es) -> list[int]:
    """Invariants of ``A (x)_Z B`` for cyclic decompositions ``ds``, ``es``."""
    return invariant_factors(math.gcd(d, e) for d in ds for e in es)


def abelian_exterior(ds) -> list[int]:
    """Invariants of the exterior square of the abelian group with cyclic orders ``ds``."""
    return invariant_factors(math.gcd(ds[i], ds[j]) for i in range(len(ds)) for j in range(i + 1, len(ds)))


def order_of(invariants) -> int:
    return math.prod(invariants)


# ---------------------------------------------------------------------------
# brute-force subgroup arithmetic on nested lists


def closure(mul, seeds) -> frozenset[int]:
    out = {0}
    frontier = [0]
    seeds = list(set(seeds))
    while frontier:
        nxt = []
        for x in frontier:
            for s in seeds:
                y = mul[x][s]
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(out)


def comm(mul, a, b):
    return mul[mul[mul[a][b]][_inverse(mul, a)]][_inverse(mul, b)]


def commutator_sub(mul, A, B) -> frozenset[int]:
    return closure(mul, [comm(mul, a, b) for a in A for b in B])


def lower_central(mul, k) -> frozenset[int]:
    S = frozenset(range(len(mul)))
    for _ in range(k - 1):
        S = commutator_sub(mul, S, range(len(mul)))
    return S


def derived(mul, k) -> frozenset[int]:
    S = frozenset(range(len(mul)))
    for _ in range(k - 1):
        S = commutator_sub(mul, S, S)
    return S


def center(mul) -> frozenset[int]:
    n = len(mul)
    return frozenset(z for z in range(n) if all(mul[z][x] == mul[x][z] for x in range(n)))


def frak_d(mul, n) -> frozenset[int]:
    """Nested loops over every tuple ``(x1, ..., xn)`` with ``xi`` in the i-th derived term."""
    terms = [sorted(derived(mul, i)) for i in range(1, n + 1)]
    out = set()
    for g in range(len(mul)):
        ok = True
        for xs in itertools.product(*terms):
            y = g
            for x in xs:
                y = comm(mul, y, x)
            if y != 0:
                ok = False
                break
        if ok:
            out.add(g)
    return frozenset(out)


# ---------------------------------------------------------------------------
# actions and compatibility


def automorphisms(mul) -> list[tuple[int, ...]]:
    n = len(mul)
    out = []
    for p in itertools.permutations(range(1, n)):
        f = (0, *p)
        if all(f[mul[a][b]] == mul[f[a]][f[b]] for a in range(n) for b in range(n)):
            out.append(f)
    return out


def actions(actor, target) -> list[list[tuple[int, ...]]]:
    """Every homomorphism ``actor -> Aut(target)`` as a list of permutations."""
    auts = automorphisms(target)
    n = len(actor)
    out = []
    for images in itertools.product(auts, repeat=n - 1):
        rho = [tuple(range(len(target))), *images]
        # rho(a b) = rho(a) o rho(b)
        if all(rho[actor[a][b]] == tuple(rho[a][rho[b][x]] for x in range(len(target)))
               for a in range(n) for b in range(n)):
            out.append(rho)
    return out


def compatible(mulG, mulH, actHG, actGH) -> bool:
    """Both compatibility equations, with left conjugation ``^g x = g x g^-1``."""
    def conj(mul, g, x):
        return mul[mul[g][x]][_inverse(mul, g)]
    nG, nH = len(mulG), len(mulH)
    for g in range(nG):
        for g2 in range(nG):
            for h in range(nH):
                # ^(^g h) g2 = ^g(^h(^(g^-1) g2))
                lhs = actHG[actGH[g][h]][g2]
                rhs = conj(mulG, g, actHG[h][conj(mulG, _inverse(mulG, g), g2)])
                if lhs != rhs:
                    return False
    for h in range(nH):
        for h2 in range(nH):
            for g in range(nG):
                lhs = actGH[actHG[h][g]][h2]
                rhs = conj(mulH, h, actGH[g][conj(mulH, _inverse(mulH, h), h2)])
                if lhs != rhs:
                    return False
    return True


def first_incompatible(groups):
    """Search pairs of small groups and action pairs for an incompatible one."""
    for mulG, mulH in itertools.product(groups, repeat=2):
        for aHG in actions(mulH, mulG):
            for aGH in actions(mulG, mulH):
                if not compatible(mulG, mulH, aHG, aGH):
                    return mulG, mulH, aHG, aGH
    return None


def element_order_counts(mul) -> Counter:
    n = len(mul)
    out = Counter()
    for g in range(n):
        k, x = 1, g
        while x != 0:
            x = mul[x][g]
            k += 1
        out[k] += 1
    return out
