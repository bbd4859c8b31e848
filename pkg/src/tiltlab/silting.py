"""Silting objects in the (d+1)-term window: certification and enumeration.

A candidate is a list of complexes of projectives supported in degrees
[-d, 0].  ``is_silting`` certifies the silting property constructively:
besides the vanishing conditions it builds, for every indecomposable
projective P(i), a tower of approximation triangles whose composite
connecting map is null-homotopic; the homotopy is kept as a witness.

Two independent enumerators produce the complete list of silting objects
up to isomorphism: a mutation search and, for hereditary algebras, a
clique search over a pool of rigid indecomposables.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product

import numpy as np
import sympy

from .algebra import BoundQuiverAlgebra
from .errors import (BudgetExceeded, PoolConstructionUnsupported,
                     RandomBudgetExhausted, SpecError, UndecidedIso,
                     WindowViolation)
from .homotopy import (ChainMap, ProjComplex, cocone_with_maps, hom_k,
                       hom_package, iso_k, k0_vector, left_mutation, minimize,
                       proj_stalk, right_approximation, right_mutation)
from .repcat import Representation, ext_dim, hom_dim
from .repcomplex import homology_dims

SILTING_WINDOW_NOTE = "terms must live in degrees [-d, 0]"


# -- presilting and K0 -------------------------------------------------------

def is_presilting(parts: list[ProjComplex], d: int):
    """No positive-shift homs between any two summands.

    Checks shifts 1..d, which suffice for window complexes, plus d+1 as a
    consistency probe.  Returns (ok, witness) with witness =
    (src_index, tgt_index, shift, dim) on failure.
    """
    for i, x in enumerate(parts):
        for j, y in enumerate(parts):
            for s in range(1, d + 2):
                dim = hom_k(x, y, s)
                if dim:
                    return False, (i, j, s, dim)
    return True, None


def k0_matrix(parts: list[ProjComplex]) -> sympy.Matrix:
    """Classes of the summands in K0(proj), as columns."""
    cols = [k0_vector(x) for x in parts]
    if not parts:
        return sympy.zeros(0, 0)
    return sympy.Matrix([[int(c[v]) for c in cols]
                         for v in range(parts[0].alg.n)])


def _k0_is_basis(parts: list[ProjComplex], n: int):
    m = k0_matrix(parts)
    if m.shape[1] != n:
        return False, {"classes": m.T.tolist(), "reason": "size"}
    det = int(m.det())
    if abs(det) != 1:
        return False, {"classes": m.T.tolist(), "det": det}
    return True, None


# -- the generation tower ----------------------------------------------------

@dataclass
class TowerStage:
    approx: list[tuple[int, int]]     # (summand index, multiplicity) in E_t
    z_shape: tuple                    # shape key of the stage target Z_t


@dataclass
class GeneratorTower:
    """Certificate that P(vertex) lies in the thick closure of the summands.

    The tower realizes P(vertex)[d] as an iterated extension of shifted
    summands up to the final connecting composite phi; ``witness`` solves
    the null-homotopy equation for phi against the retained operator.
    """
    vertex: int
    stages: list[TowerStage]
    phi_coords: np.ndarray
    witness: np.ndarray | None = None
    _bmat: np.ndarray | None = field(default=None, repr=False)
    _p: int = 0

    def replay(self) -> bool:
        if self.phi_coords.size == 0:
            return True
        if self.witness is None or self._bmat is None:
            return False
        lhs = (self._bmat @ self.witness) % self._p
        return not np.any((lhs - self.phi_coords) % self._p)


@dataclass
class SiltingResult:
    verdict: str                      # "yes" | "no" | "unknown"
    reason: str = ""
    towers: list[GeneratorTower] = field(default_factory=list)
    refutation: dict | None = None

    def __bool__(self):
        return self.verdict == "yes"


def _tower_for_vertex(parts: list[ProjComplex], v: int, d: int):
    """Run the approximation tower from P(v)[d]; returns (tower, certified)."""
    alg = parts[0].alg
    z = proj_stalk(alg, v).shift(d)
    z0 = z
    phi: ChainMap | None = None
    stages: list[TowerStage] = []
    for t in range(d + 1):
        e, g, chosen = right_approximation(parts, z, minimal=True)
        counts: list[tuple[int, int]] = []
        for pi, _ in chosen:
            if counts and counts[-1][0] == pi:
                counts[-1] = (pi, counts[-1][1] + 1)
            else:
                counts.append((pi, 1))
        stages.append(TowerStage(counts, z.shape_key()))
        vt, _, conn = cocone_with_maps(g)
        step = conn.shift(t)           # Z_t[t] -> V_t[t+1]
        phi = step if phi is None else step.compose(phi)
        z = vt
    pkg = hom_package(z0, phi.tgt, 0, cache=False)
    coords = pkg.coords_of(phi)
    tower = GeneratorTower(v, stages, coords, _p=alg.p)
    if pkg.is_nullhomotopic(phi):
        tower.witness = pkg.nullhomotopy(phi)
        tower._bmat = pkg._bmat
        return tower, True
    return tower, False


def basic_parts(parts: list[ProjComplex], seed: int = 0):
    """Representatives of the pairwise non-isomorphic summands."""
    out: list[ProjComplex] = []
    for x in parts:
        xm = minimize(x)
        for y in out:
            r = iso_k(y, xm, seed=seed)
            if r.verdict == "unknown":
                raise UndecidedIso(r.reason)
            if r:
                break
        else:
            out.append(xm)
    return out


def is_silting(parts: list[ProjComplex], d: int) -> SiltingResult:
    """Certify or refute the silting property for a window candidate.

    "no" answers carry a refutation (a nonvanishing hom or a K0 failure);
    "yes" answers carry one generation tower per vertex.  "unknown" means
    all checks passed except that some tower composite was not recognized
    as null-homotopic.
    """
    if not parts:
        return SiltingResult("no", "empty candidate")
    alg = parts[0].alg
    for i, x in enumerate(parts):
        t = x.trim()
        if not t.is_zero() and (t.lo < -d or t.hi > 0):
            return SiltingResult(
                "no", f"summand {i} occupies [{t.lo}, {t.hi}]; "
                + SILTING_WINDOW_NOTE)
    ok, witness = is_presilting(parts, d)
    if not ok:
        i, j, s, dim = witness
        return SiltingResult(
            "no", f"Hom(X{i}, X{j}[{s}]) has dimension {dim}",
            refutation={"kind": "presilting", "pair": (i, j),
                        "shift": s, "dim": dim})
    basic = basic_parts(parts)
    ok, refut = _k0_is_basis(basic, alg.n)
    if not ok:
        return SiltingResult(
            "no", "summand classes are not a Z-basis of K0",
            refutation={"kind": "k0", **refut})
    towers = []
    for v in range(alg.n):
        tower, certified = _tower_for_vertex(basic, v, d)
        towers.append(tower)
        if not certified:
            return SiltingResult(
                "unknown", f"generation tower for P({v}) did not close",
                towers=towers)
    return SiltingResult("yes", "certified", towers=towers)


# -- interning registry ------------------------------------------------------

class ComplexRegistry:
    """Stable integer ids for homotopy classes of complexes."""

    def __init__(self, seed: int = 0):
        self.items: list[ProjComplex] = []
        self.seed = seed
        self._by_fp: dict = {}

    @staticmethod
    def fingerprint(xm: ProjComplex):
        hdd = tuple(sorted(homology_dims(xm.expansion()).items()))
        return (xm.shape_key(), hdd)

    def intern(self, x: ProjComplex) -> int:
        xm = minimize(x)
        fp = self.fingerprint(xm)
        bucket = self._by_fp.setdefault(fp, [])
        for idx in bucket:
            r = iso_k(self.items[idx], xm, seed=self.seed)
            if r.verdict == "unknown":
                raise UndecidedIso(r.reason)
            if r:
                return idx
        idx = len(self.items)
        self.items.append(xm)
        bucket.append(idx)
        return idx

    def state(self, parts: list[ProjComplex]) -> tuple[int, ...]:
        return tuple(sorted(self.intern(x) for x in parts))


# -- enumeration -------------------------------------------------------------

@dataclass
class ClusterRecord:
    ids: tuple[int, ...]
    parts: list[ProjComplex]
    result: SiltingResult


@dataclass
class EnumerationResult:
    method: str
    d: int
    clusters: list[ClusterRecord]
    unknown: list[ClusterRecord]
    visited: int
    budget_exceeded: bool
    registry: ComplexRegistry
    stats: dict = field(default_factory=dict)

    @property
    def count(self) -> int:
        return len(self.clusters)


def _seed_clusters(alg: BoundQuiverAlgebra, d: int):
    projs = [proj_stalk(alg, v) for v in range(alg.n)]
    for mask in range(2 ** alg.n):
        yield [projs[v].shift(d) if (mask >> v) & 1 else projs[v]
               for v in range(alg.n)]


def enumerate_mutation(alg: BoundQuiverAlgebra, d: int, seed: int = 0,
                       max_nodes: int = 4096) -> EnumerationResult:
    """Breadth-first mutation search from the shifted-projective seeds."""
    registry = ComplexRegistry(seed)
    queue: deque = deque()
    visited: set = set()
    records: list[ClusterRecord] = []
    unknowns: list[ClusterRecord] = []
    stats = {"mutations": 0, "window_rejected": 0, "not_silting": 0,
             "seeds_accepted": 0}

    def admit(parts) -> None:
        res = is_silting(parts, d)
        if res.verdict == "no":
            stats["not_silting"] += 1
            return
        state = registry.state(parts)
        if state in visited:
            return
        visited.add(state)
        canonical = [registry.items[i] for i in state]
        rec = ClusterRecord(state, canonical, res)
        if res.verdict == "unknown":
            unknowns.append(rec)
            return
        records.append(rec)
        queue.append(rec)

    for cluster in _seed_clusters(alg, d):
        before = len(records)
        admit(cluster)
        if len(records) > before:
            stats["seeds_accepted"] += 1

    budget_exceeded = False
    while queue:
        if len(visited) > max_nodes:
            budget_exceeded = True
            break
        rec = queue.popleft()
        for k in range(len(rec.parts)):
            for mutate in (left_mutation, right_mutation):
                stats["mutations"] += 1
                try:
                    new_parts = mutate(rec.parts, k, d, seed)
                except WindowViolation:
                    stats["window_rejected"] += 1
                    continue
                admit(new_parts)

    records.sort(key=lambda r: r.ids)
    return EnumerationResult("mutation", d, records, unknowns, len(visited),
                             budget_exceeded, registry, stats)


# -- rigid pool + clique search (hereditary algebras) ------------------------

def euler_form(alg: BoundQuiverAlgebra, v: np.ndarray) -> int:
    q = sum(int(x) * int(x) for x in v)
    for a in alg.quiver.arrows:
        q -= int(v[a.src]) * int(v[a.tgt])
    return q


def _random_rep(alg: BoundQuiverAlgebra, dims, rng) -> Representation:
    mats = [rng.integers(0, alg.p, size=(dims[a.tgt], dims[a.src]))
            .astype(np.int64) for a in alg.quiver.arrows]
    return Representation(alg, list(dims), mats)


def rigid_indecomposables(alg: BoundQuiverAlgebra, seed: int = 0,
                          dim_bound: int = 3, tries: int = 16):
    """Rigid modules with one-dimensional endomorphism ring, one per
    admissible dimension vector with Euler form 1.

    Uses generic realizations: random matrices certified by End and Ext^1.
    """
    if not alg.is_hereditary():
        raise PoolConstructionUnsupported(
            "rigid pool construction needs a hereditary algebra")
    rng = np.random.default_rng(seed)
    found = []
    grid = sorted(product(range(dim_bound + 1), repeat=alg.n), reverse=True)
    for dims in sorted(v for v in grid if any(v) and euler_form(alg, v) == 1):
        for _ in range(tries):
            m = _random_rep(alg, dims, rng)
            if hom_dim(m, m) == 1 and ext_dim(m, m, 1) == 0:
                found.append(m)
                break
        else:
            raise RandomBudgetExhausted(
                f"no rigid realization found for dimension vector {dims}")
    return found


def rigid_pool(alg: BoundQuiverAlgebra, d: int, seed: int = 0,
               dim_bound: int = 3):
    """Window complexes that can appear in a silting object: shifted
    presentations of rigid indecomposables plus the far-shifted projectives."""
    from .heart import p_presentation
    pool = []
    for m in rigid_indecomposables(alg, seed=seed, dim_bound=dim_bound):
        pres = minimize(p_presentation(m, d))
        for j in range(d):
            shifted = pres.shift(j)
            if shifted.trim().lo >= -d:
                pool.append(shifted)
    for v in range(alg.n):
        pool.append(proj_stalk(alg, v).shift(d))
    return pool


def _bron_kerbosch(adj: list[set], n_target: int):
    """All maximal cliques, deterministically ordered."""
    cliques: list[list[int]] = []

    def expand(r: set, p: set, x: set) -> None:
        if not p and not x:
            cliques.append(sorted(r))
            return
        pivot = min(sorted(p | x), key=lambda u: (-len(adj[u] & p), u))
        for v in sorted(p - adj[pivot]):
            expand(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    expand(set(), set(range(len(adj))), set())
    return cliques


def enumerate_clique(alg: BoundQuiverAlgebra, d: int, seed: int = 0,
                     dim_bound: int = 3) -> EnumerationResult:
    """Independent enumeration: maximal compatible sets in the rigid pool."""
    pool = rigid_pool(alg, d, seed=seed, dim_bound=dim_bound)
    m = len(pool)
    compatible = [set() for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            if all(hom_k(pool[i], pool[j], s) == 0
                   and hom_k(pool[j], pool[i], s) == 0
                   for s in range(1, d + 1)):
                compatible[i].add(j)
                compatible[j].add(i)
    registry = ComplexRegistry(seed)
    records: list[ClusterRecord] = []
    unknowns: list[ClusterRecord] = []
    seen: set = set()
    stats = {"pool": m, "maximal_cliques": 0, "oversized": 0,
             "undersized": 0, "not_silting": 0}
    for clique in _bron_kerbosch(compatible, alg.n):
        stats["maximal_cliques"] += 1
        if len(clique) > alg.n:
            stats["oversized"] += 1
            continue
        if len(clique) < alg.n:
            stats["undersized"] += 1
            continue
        parts = [pool[i] for i in clique]
        res = is_silting(parts, d)
        if res.verdict == "no":
            stats["not_silting"] += 1
            continue
        state = registry.state(parts)
        if state in seen:
            continue
        seen.add(state)
        canonical = [registry.items[i] for i in state]
        rec = ClusterRecord(state, canonical, res)
        (unknowns if res.verdict == "unknown" else records).append(rec)
    records.sort(key=lambda r: r.ids)
    return EnumerationResult("clique", d, records, unknowns, len(seen), False,
                             registry, stats)


def _states_match(a: EnumerationResult, b: EnumerationResult):
    """Match b's clusters against a's registry; returns (ok, missing, extra)."""
    states_a = {rec.ids for rec in a.clusters}
    states_b = set()
    for rec in b.clusters:
        states_b.add(tuple(sorted(a.registry.intern(x) for x in rec.parts)))
    return states_a == states_b, sorted(states_a - states_b), \
        sorted(states_b - states_a)


def enumerate_silting(alg: BoundQuiverAlgebra, d: int,
                      method: str = "mutation", seed: int = 0,
                      max_nodes: int = 4096,
                      dim_bound: int = 3) -> EnumerationResult:
    """Enumerate silting objects in the (d+1)-term window.

    method "both" runs the mutation and clique searches and requires them
    to produce identical lists up to isomorphism.
    """
    if method == "mutation":
        out = enumerate_mutation(alg, d, seed=seed, max_nodes=max_nodes)
    elif method == "clique":
        out = enumerate_clique(alg, d, seed=seed, dim_bound=dim_bound)
    elif method == "both":
        a = enumerate_mutation(alg, d, seed=seed, max_nodes=max_nodes)
        b = enumerate_clique(alg, d, seed=seed, dim_bound=dim_bound)
        ok, missing, extra = _states_match(a, b)
        if not ok:
            raise SpecError(
                "enumeration methods disagree: "
                f"mutation-only={missing}, clique-only={extra}")
        out = EnumerationResult(
            "both", d, a.clusters, a.unknown + b.unknown, a.visited,
            a.budget_exceeded, a.registry,
            {"mutation": a.stats, "clique": b.stats})
    else:
        raise SpecError(f"unknown enumeration method: {method}")
    if out.budget_exceeded:
        raise BudgetExceeded(
            f"mutation search exceeded {max_nodes} nodes; partial count "
            f"{out.count}")
    return out
