"""Instance generators and exhaustive checks for the tensor-power results.

Every check recomputes what it tests from group tables: lifts, brackets
and series are evaluated directly in ``H`` and never read back from the
map being checked.  Reports are plain dicts, written as JSON lines.
"""

from __future__ import annotations

import json
import time
from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import config
from .catalog import build
from .errors import EngineError, ResourceLimitError
from .group import (
    ActionTable,
    FiniteGroup,
    GroupHom,
    Obstruction,
    Subgroup,
    extend_to_hom,
    normal_closure,
    quotient,
)
from .series import (
    derived_term,
    frak_D,
    iterated_derivative,
    lower_central_term,
    predicates,
    subgroup_predicates,
    upper_central_term,
)
from .tensor import (
    CompatiblePair,
    TensorGroup,
    pairing_hom,
    require_compatible,
    schur_multiplier,
    self_pair,
    tensor_product,
    tensor_square,
)
from .tower import ExteriorTower, TensorPowerTower, _action_from_generators

PASS, FAIL, SKIPPED, NOT_APPLICABLE = "pass", "fail", "skipped", "not-applicable"


# ---------------------------------------------------------------------------
# extensions


@dataclass(frozen=True)
class ExtensionTriple:
    """``1 -> N -> H -> G -> 1`` with ``G = H/N``."""

    H: FiniteGroup
    N: Subgroup
    G: FiniteGroup
    proj: GroupHom

    def describe(self) -> dict:
        return {"group": self.H.name, "N": sorted(int(x) for x in self.N.array)}


def extension(H: FiniteGroup, N: Subgroup) -> ExtensionTriple:
    if not N.is_normal():
        raise ValueError("N is not normal in H")
    G, proj = quotient(H, N)
    G.name = f"{H.name}/N{N.order}" if H.name else None
    return ExtensionTriple(H, N, G, proj)


def normal_subgroups_within(H: FiniteGroup, bound: Subgroup) -> list[Subgroup]:
    """All normal subgroups of ``H`` contained in the normal subgroup ``bound``.

    Every normal subgroup is the join of the normal closures of its
    elements, so joins of those closures reach all of them.
    """
    singles = {}
    for x in bound.array:
        C = normal_closure(H, [int(x)])
        singles.setdefault(C.elements, C)
    found = {H.trivial().elements: H.trivial()}
    frontier = [H.trivial()]
    while frontier:
        nxt = []
        for A in frontier:
            for C in singles.values():
                if C <= A:
                    continue
                J = normal_closure(H, list(A.array) + list(C.array))
                if J.elements not in found:
                    found[J.elements] = J
                    nxt.append(J)
        frontier = nxt
    return sorted(found.values(), key=lambda S: (S.order, tuple(S.array)))


def enumerate_central_extensions(H: FiniteGroup, n: int) -> list[ExtensionTriple]:
    """Extensions by every normal ``N`` inside ``Z_n(H)``."""
    return [extension(H, N) for N in normal_subgroups_within(H, upper_central_term(H, n))]


def enumerate_frakD_extensions(H: FiniteGroup, n: int) -> list[ExtensionTriple]:
    """Extensions by every normal ``N`` inside the subgroup ``frak_D(H, n)``."""
    return [extension(H, N) for N in normal_subgroups_within(H, frak_D(H, n))]


# ---------------------------------------------------------------------------
# reports


@dataclass
class VerificationReport:
    claim: str
    instance: dict
    status: str = PASS
    witness: dict | None = None
    orders: dict = field(default_factory=dict)
    ms: float = 0.0
    notes: dict = field(default_factory=dict)

    def fail(self, **witness) -> VerificationReport:
        self.status = FAIL
        self.witness = {k: _plain(v) for k, v in witness.items()}
        return self

    def to_json(self) -> str:
        d = asdict(self)
        if d["witness"] is None:
            del d["witness"]
        if not d["notes"]:
            del d["notes"]
        return json.dumps(d, sort_keys=True)


def _plain(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, Obstruction):
        return asdict(v)
    return v


def _timed(claim: str, instance: dict, body: Callable[[VerificationReport], None]) -> VerificationReport:
    rep = VerificationReport(claim, instance)
    t0 = time.perf_counter()
    try:
        body(rep)
    except ResourceLimitError as e:
        rep.status = SKIPPED
        rep.witness = None
        rep.notes["reason"] = str(e)
        rep.notes["limit_kind"] = e.kind
    rep.ms = round((time.perf_counter() - t0) * 1000, 3)
    if rep.status == FAIL and rep.witness is None:
        rep.witness = {"reason": "unspecified"}
    return rep


# ---------------------------------------------------------------------------
# lifts and simple generators


def lift_table(t: ExtensionTriple, scheme: str = "min") -> np.ndarray:
    """A preimage in ``H`` for each element of ``G``: smallest or largest index."""
    img = t.proj.image
    lift = np.full(t.G.order, -1, dtype=np.int64)
    order = range(t.H.order) if scheme == "min" else range(t.H.order - 1, -1, -1)
    for h in order:
        if lift[img[h]] < 0:
            lift[img[h]] = h
    return lift


def _bracket(H: FiniteGroup, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return H.mul[H.mul[x, y], H.inv[H.mul[y, x]]]


def _dedupe(elems: np.ndarray, vals: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    pairs = np.unique(np.stack([elems.ravel(), vals.ravel()], axis=1), axis=0)
    return pairs[:, 0], pairs[:, 1]


def _power_simple(tower: TensorPowerTower, H: FiniteGroup, lift: np.ndarray, k: int):
    """``(element, value)`` for all ``g1 (x) ... (x) gk`` with value ``[h1, ..., hk]``.

    Pairs are deduplicated level by level; a repeated element with two
    values survives deduplication and shows up as an obstruction later.
    """
    elems = np.arange(tower.base.order)
    vals = lift.copy()
    for i in range(2, k + 1):
        pairing = tower.level(i).tensor.pairing
        g = np.arange(tower.base.order)
        e = pairing[elems[:, None], g[None, :]]
        v = _bracket(H, vals[:, None], lift[g][None, :])
        elems, vals = _dedupe(e, v)
    return elems, vals


def _wedge_simple(tower: ExteriorTower, H: FiniteGroup, lift: np.ndarray, k: int):
    """``(element, value)`` for iterated simple wedges, valued in ``H``."""
    elems = np.arange(tower.base.order)
    vals = lift.copy()
    for i in range(2, k + 1):
        pairing = tower.level(i).exterior.pairing
        e = pairing[elems[:, None], elems[None, :]]
        v = _bracket(H, vals[:, None], vals[None, :])
        elems, vals = _dedupe(e, v)
    return elems, vals


def _induced_map(domain: FiniteGroup, elems, vals, H: FiniteGroup):
    return extend_to_hom(domain, elems, vals, H)


# ---------------------------------------------------------------------------
# lemma checks


def _check_lifted_surjection(rep: VerificationReport, t: ExtensionTriple, n: int, domain: FiniteGroup,
                             simple, target: Subgroup, bracket_map: GroupHom, what: str) -> None:
    maps = {}
    for scheme in ("min", "max"):
        elems, vals = simple(lift_table(t, scheme))
        f = _induced_map(domain, elems, vals, t.H)
        if isinstance(f, Obstruction):
            rep.fail(reason=f"induced map not well defined ({scheme} lifts)", obstruction=f)
            return
        maps[scheme] = f
    f = maps["min"]
    rep.orders.update({what: domain.order, "target": target.order})
    if not np.array_equal(f.image, maps["max"].image):
        x = int(np.nonzero(f.image != maps["max"].image)[0][0])
        rep.fail(reason="map depends on the lift", element=x)
        return
    img = f.image_subgroup()
    if img != target:
        rep.fail(reason="image differs from the target term", image=img.order, target=target.order)
        return
    if domain.order % target.order:
        rep.fail(reason="order of the term does not divide", domain=domain.order, target=target.order)
        return
    square = t.proj.image[f.image]
    if not np.array_equal(square, bracket_map.image):
        x = int(np.nonzero(square != bracket_map.image)[0][0])
        rep.fail(reason="square does not commute", element=x)


def verify_lemma1(t: ExtensionTriple, n: int, limit: int = config.DEFAULT_COSET_LIMIT) -> VerificationReport:
    """Surjection ``G^(x)(n+1) -> gamma_(n+1)(H)`` from lifted brackets, for ``N <= Z_n(H)``."""

    def body(rep: VerificationReport) -> None:
        if not t.N <= upper_central_term(t.H, n):
            rep.status = NOT_APPLICABLE
            return
        tower = TensorPowerTower(t.G, limit)
        L = tower.level(n + 1)
        target = lower_central_term(t.H, n + 1)
        _check_lifted_surjection(rep, t, n, L.group,
                                 lambda lift: _power_simple(tower, t.H, lift, n + 1),
                                 target, L.lam, "tensor_power")

    return _timed("lemma1", {**t.describe(), "n": n}, body)


def verify_lemma2(t: ExtensionTriple, n: int, limit: int = config.DEFAULT_COSET_LIMIT) -> VerificationReport:
    """Surjection ``G^^(n+1) -> Gamma_(n+1)(H)`` from lifted brackets, for ``N <= frak_D(H, n)``."""

    def body(rep: VerificationReport) -> None:
        if not t.N <= frak_D(t.H, n):
            rep.status = NOT_APPLICABLE
            return
        tower = ExteriorTower(t.G, limit)
        L = tower.level(n + 1)
        target = derived_term(t.H, n + 1)
        _check_lifted_surjection(rep, t, n, L.group,
                                 lambda lift: _wedge_simple(tower, t.H, lift, n + 1),
                                 target, L.mu, "exterior_power")

    return _timed("lemma2", {**t.describe(), "n": n}, body)


def _transfer(rep: VerificationReport, G: FiniteGroup, term: Subgroup) -> None:
    pg, pt = predicates(G), subgroup_predicates(term)
    rep.orders.update({"quotient": G.order, "term": term.order})
    rep.notes.update({"quotient": pg.as_dict(), "term": pt.as_dict()})
    if pg.is_p_group and pg.prime is not None and term.order > 1:
        if not (pt.is_p_group and pt.prime == pg.prime):
            rep.fail(reason="p-group property not transferred", prime=pg.prime, term_order=term.order)
            return
    if pg.order == 1 and term.order != 1:
        rep.fail(reason="trivial quotient but nontrivial term", term_order=term.order)
        return
    if pg.is_perfect and not pt.is_perfect:
        rep.fail(reason="perfect property not transferred")
        return
    if pg.is_solvable and not pt.is_solvable:
        rep.fail(reason="solvable property not transferred")


def verify_prop1(t: ExtensionTriple, n: int) -> VerificationReport:
    """Finite, p-group, perfect and solvable quotients pass to ``gamma_(n+1)(H)``."""

    def body(rep: VerificationReport) -> None:
        if not t.N <= upper_central_term(t.H, n):
            rep.status = NOT_APPLICABLE
            return
        _transfer(rep, t.G, lower_central_term(t.H, n + 1))

    return _timed("prop1", {**t.describe(), "n": n}, body)


def verify_prop3(t: ExtensionTriple, n: int) -> VerificationReport:
    """As :func:`verify_prop1` for ``Gamma_(n+1)(H)`` with ``N <= frak_D(H, n)``."""

    def body(rep: VerificationReport) -> None:
        if not t.N <= frak_D(t.H, n):
            rep.status = NOT_APPLICABLE
            return
        _transfer(rep, t.G, derived_term(t.H, n + 1))

    return _timed("prop3", {**t.describe(), "n": n}, body)


def verify_thm1(t: ExtensionTriple, limit: int = config.DEFAULT_COSET_LIMIT,
                strategy: str = "direct") -> VerificationReport:
    """Kernel of ``H (x) H -> G (x) G`` is the normal closure of ``h (x) x`` and ``x (x) h``, x in N."""

    def body(rep: VerificationReport) -> None:
        TH = tensor_square(t.H, strategy, limit)
        TG = tensor_square(t.G, strategy, limit)
        p = t.proj.image
        f = pairing_hom(TH, TG.pairing[p[:, None], p[None, :]], TG.T)
        if isinstance(f, Obstruction):
            rep.fail(reason="induced map not well defined", obstruction=f)
            return
        K = f.kernel()
        N = t.N.array
        seeds = np.concatenate([TH.pairing[:, N].ravel(), TH.pairing[N, :].ravel()])
        C = normal_closure(TH.T, np.unique(seeds))
        rep.orders.update({"HxH": TH.order, "GxG": TG.order, "kernel": K.order, "closure": C.order})
        if K != C:
            diff = sorted(K.elements ^ C.elements)
            rep.fail(reason="kernel differs from the normal closure", element=diff[0])
            return
        if not f.is_surjective():
            rep.fail(reason="induced map is not onto")

    return _timed("thm1", t.describe(), body)


# ---------------------------------------------------------------------------
# derivative identities


def _diagonal_action(tg: TensorGroup) -> ActionTable:
    """``B`` acting on ``A (x) B`` by ``^b(a (x) c) = ^b a (x) ^b c``."""
    pair = tg.origin
    B = pair.H
    gen_perms = {}
    for s in B.gens:
        vals = tg.pairing[pair.actHG.perm[s]][:, _conj_row(B, s)]
        hom = pairing_hom(tg, vals, tg.T)
        if isinstance(hom, Obstruction):
            raise EngineError(f"diagonal action of {s} is not well defined: {hom}")
        gen_perms[s] = hom.image
    return _action_from_generators(B, tg.T, gen_perms)


def _conj_row(G: FiniteGroup, g: int) -> np.ndarray:
    return G.mul[G.mul[g], G.inv[g]]


BJR_READINGS = ("left-first", "left-second", "right-first", "right-second")


def _bjr_x(A: FiniteGroup, act: np.ndarray, B: FiniteGroup, b: int, reading: str) -> np.ndarray:
    """``x(a, b)`` for all ``a`` under one reading of ``a ^b a^-1``.

    The exponent is a left (``^b y = b y b^-1``) or right (``y^b = b^-1 y b``)
    conjugation, attached to the first factor ``a`` or to the second ``a^-1``.
    """
    conv, attach = reading.split("-")
    conj = act[b] if conv == "left" else act[B.inv[b]]
    a = np.arange(A.order)
    if attach == "first":
        return A.mul[conj, A.inv[a]]
    return A.mul[a, conj[A.inv[a]]]


def bjr_readings(tg: TensorGroup) -> dict[str, tuple | None]:
    """Check ``(a (x) b) ^c(a (x) b)^-1 = x(a, b) (x) c`` under each reading of ``x``.

    Returns the first failing ``(a, b, c)`` per reading, or None when the
    reading holds for all triples.
    """
    pair = tg.origin
    A, B, T = pair.G, pair.H, tg.T
    act = pair.actHG.perm               # act[b, a] = ^b a
    diag = _diagonal_action(tg).perm    # diag[c, t] = ^c t
    P = tg.pairing
    a = np.arange(A.order)
    out: dict[str, tuple | None] = {}
    for name in BJR_READINGS:
        out[name] = None
        for b in range(B.order):
            ab = P[a, b]
            lhs = T.mul[ab[None, :], T.inv[diag[:, ab]]]   # [c, a]
            rhs = P[_bjr_x(A, act, B, b, name)].T           # [c, a]
            bad = np.argwhere(lhs != rhs)
            if bad.size:
                c, aa = bad[0]
                out[name] = (int(aa), int(b), int(c))
                break
    return out


def verify_bjr(pair: CompatiblePair, limit: int = config.DEFAULT_COSET_LIMIT) -> VerificationReport:
    """Report which reading of the derivative identity holds for every triple."""

    def body(rep: VerificationReport) -> None:
        tg = tensor_product(pair, "direct", limit)
        res = bjr_readings(tg)
        holding = [k for k, v in res.items() if v is None]
        rep.notes["readings"] = {k: ("holds" if v is None else list(v)) for k, v in res.items()}
        rep.notes["holding"] = holding
        rep.orders["tensor"] = tg.order
        if not holding:
            rep.fail(reason="no reading holds", **{k: list(v) for k, v in res.items()})

    return _timed("bjr", {"group": f"{pair.G.name}|{pair.H.name}"}, body)


def consistent_reading(reports: Iterable[VerificationReport]) -> str | None:
    """The single reading that holds in every bjr report, if exactly one does."""
    common = set(BJR_READINGS)
    for r in reports:
        common &= set(r.notes.get("holding", ()))
    return common.pop() if len(common) == 1 else None


def _restricted_pair(pair: CompatiblePair, S: Subgroup) -> tuple[CompatiblePair, np.ndarray]:
    """``(S, B)`` with actions restricted from ``(A, B)``; ``S`` must be ``B``-stable."""
    A, B = pair.G, pair.H
    SG, emb = S.as_group()
    back = np.full(A.order, -1, dtype=np.int64)
    back[emb] = np.arange(SG.order)
    on_S = back[pair.actHG.perm[:, emb]]
    if (on_S < 0).any():
        raise EngineError("subgroup is not stable under the action")
    actBS = ActionTable(B, SG, on_S)
    actSB = ActionTable(SG, B, pair.actGH.perm[emb])
    return require_compatible(SG, B, actBS, actSB), emb


def verify_dtech(pair: CompatiblePair, k: int, l: int,
                 limit: int = config.DEFAULT_COSET_LIMIT) -> VerificationReport:
    """``D_B^l(D_B^k(A) (x) B)`` equals the image of ``D_B^(k+l)(A) (x) B``."""

    def body(rep: VerificationReport) -> None:
        A, B = pair.G, pair.H
        Dk = iterated_derivative(A, B, pair.actHG, k)
        Dkl = iterated_derivative(A, B, pair.actHG, k + l)
        pk, emb_k = _restricted_pair(pair, Dk)
        pkl, emb_kl = _restricted_pair(pair, Dkl)
        Tk = tensor_product(pk, "direct", limit)
        Tkl = tensor_product(pkl, "direct", limit)
        act = _diagonal_action(Tk)
        lhs = iterated_derivative(Tk.T, B, act, l)
        back = np.full(A.order, -1, dtype=np.int64)
        back[emb_k] = np.arange(len(emb_k))
        incl = back[emb_kl]
        f = pairing_hom(Tkl, Tk.pairing[incl], Tk.T)
        if isinstance(f, Obstruction):
            rep.fail(reason="inclusion does not induce a map", obstruction=f)
            return
        rhs = f.image_subgroup()
        rep.orders.update({"Dk": Dk.order, "Dkl": Dkl.order, "tensor_k": Tk.order,
                           "tensor_kl": Tkl.order, "lhs": lhs.order, "rhs": rhs.order})
        if lhs != rhs:
            diff = sorted(lhs.elements ^ rhs.elements)
            rep.fail(reason="subgroups differ", element=diff[0])

    inst = {"group": f"{pair.G.name}|{pair.H.name}", "k": k, "l": l, "edge": k == 0 or l == 0}
    return _timed("dtech", inst, body)


def verify_schur_group(G: FiniteGroup, depth: int,
                       limit: int = config.DEFAULT_COSET_LIMIT) -> VerificationReport:
    """For perfect ``G`` with trivial multiplier, bracket maps are bijective up to ``depth``."""

    def body(rep: VerificationReport) -> None:
        if not predicates(G).is_perfect:
            rep.status = NOT_APPLICABLE
            rep.notes["reason"] = "not perfect"
            return
        M = schur_multiplier(G, limit)
        rep.orders["multiplier"] = M.order
        if M.order != 1:
            rep.status = NOT_APPLICABLE
            rep.notes["reason"] = "nontrivial multiplier"
            return
        ext, pw = ExteriorTower(G, limit), TensorPowerTower(G, limit)
        for i in range(2, depth + 1):
            step, lam = ext.level(i).step, pw.level(i).lam
            if not (step.is_injective() and step.is_surjective()):
                rep.fail(reason="step map not bijective", level=i)
                return
            if not (lam.is_injective() and lam.is_surjective()):
                rep.fail(reason="lambda not bijective", level=i)
                return

    return _timed("schur_group", {"group": G.name, "n": depth}, body)


# ---------------------------------------------------------------------------
# sweeps


def write_reports(reports: Iterable[VerificationReport], path) -> None:
    """Append one JSON object per line."""
    with Path(path).open("a", encoding="utf-8") as fh:
        for r in reports:
            fh.write(r.to_json() + "\n")
            fh.flush()


CLAIMS = ("lemma1", "lemma2", "thm1", "prop1", "prop3", "dtech", "bjr", "schur-group")


def reports_for(claim: str, name: str, n: int) -> list[VerificationReport]:
    """All instances of one claim for the catalog group ``name``.

    ``n`` is the series index for ``lemma1``, ``lemma2``, ``prop1`` and ``prop3``, the
    bound on ``k + l`` for ``dtech`` and the depth for ``schur-group``.
    """
    H = build(name)
    if claim in ("lemma1", "prop1"):
        check = verify_lemma1 if claim == "lemma1" else verify_prop1
        return [check(t, n) for t in enumerate_central_extensions(H, n)]
    if claim in ("lemma2", "prop3"):
        check = verify_lemma2 if claim == "lemma2" else verify_prop3
        return [check(t, n) for t in enumerate_frakD_extensions(H, n)]
    if claim == "thm1":
        return [verify_thm1(extension(H, N)) for N in normal_subgroups_within(H, H.whole())]
    if claim == "dtech":
        pair = self_pair(H)
        return [verify_dtech(pair, k, total - k) for total in range(n + 1) for k in range(total + 1)]
    if claim == "bjr":
        return [verify_bjr(self_pair(H))]
    if claim == "schur-group":
        return [verify_schur_group(H, n)]
    raise ValueError(f"unknown claim {claim!r}")


def _job(args) -> list[VerificationReport]:
    return reports_for(*args)


def sweep(claims: Iterable[str], names: Iterable[str], ns: Iterable[int] = (1,), *,
          workers: int = 1, report: str | None = None) -> list[VerificationReport]:
    """Run every claim over every catalog group and index.

    Jobs run in a process pool when ``workers > 1``; results come back in
    job order and are appended to ``report`` as they arrive.
    """
    jobs = [(c, name, n) for c in claims for name in names for n in ns]
    for c in {j[0] for j in jobs}:
        if c not in CLAIMS:
            raise ValueError(f"unknown claim {c!r}")
    results: list[VerificationReport] = []
    if workers <= 1:
        batches = map(_job, jobs)
        for reps in batches:
            results.extend(reps)
            if report:
                write_reports(reps, report)
        return results
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for reps in pool.map(_job, jobs):
            results.extend(reps)
            if report:
                write_reports(reps, report)
    return results
