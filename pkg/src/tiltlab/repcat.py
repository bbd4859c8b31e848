"""Finite-dimensional left modules over a bound quiver algebra.

A module is a representation: one F_p-space per vertex and one matrix per
arrow, shaped (target_dim, source_dim).  Projectives P(i) = Ae_i carry the
paths starting at i; injectives are duals of the paths ending at i.
"""

from __future__ import annotations

import numpy as np

from .algebra import BoundQuiverAlgebra
from .endsplit import DEFAULT_SPLIT_BUDGET, primitive_idempotents
from .errors import ResolutionDepthExceeded
from .linalg import (column_space, eye, in_span, is_invertible, modmat,
                     null_space, rank, rref, solve_right, span_union, zeros)
from .linalg import inv as linalg_inv

RESOLUTION_SIZE_BUDGET = 4096


class Representation:
    """A representation of the bound quiver: vertex spaces plus arrow maps."""

    def __init__(self, alg: BoundQuiverAlgebra, dims, mats):
        self.alg = alg
        self.dims = tuple(int(d) for d in dims)
        self.mats = [modmat(m, alg.p).reshape(self.dims[a.tgt], self.dims[a.src])
                     for a, m in zip(alg.quiver.arrows, mats)]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def act_walk(self, walk, src: int) -> np.ndarray:
        """Matrix of the path with the given walk acting out of vertex src."""
        m = eye(self.dims[src])
        for ai in walk:
            m = self.mats[ai] @ m % self.alg.p
        return m

    def act_path(self, path_idx: int) -> np.ndarray:
        a = self.alg
        return self.act_walk(a.paths[path_idx], int(a.path_src[path_idx]))

    def act_elem(self, coeffs: np.ndarray, src: int, tgt: int) -> np.ndarray:
        """Matrix of an algebra element supported on paths src -> tgt."""
        a = self.alg
        out = zeros(self.dims[tgt], self.dims[src])
        for b in np.nonzero(coeffs)[0]:
            assert a.path_src[b] == src and a.path_tgt[b] == tgt
            out = (out + int(coeffs[b]) * self.act_path(int(b))) % a.p
        return out

    def validate(self):
        for w in self.alg.ideal.walks:
            src = self.alg.quiver.arrows[w[0]].src
            if np.any(self.act_walk(w, src)):
                raise AssertionError(f"relation {w} does not act by zero")

    def __repr__(self):
        return f"Representation(dims={self.dims})"


class ModuleMap:
    """A homomorphism of representations, one matrix per vertex."""

    def __init__(self, src: Representation, tgt: Representation, vmaps):
        self.src = src
        self.tgt = tgt
        self.vmaps = [modmat(m, src.alg.p).reshape(tgt.dims[v], src.dims[v])
                      for v, m in enumerate(vmaps)]

    @property
    def alg(self):
        return self.src.alg

    def after(self, other: "ModuleMap") -> "ModuleMap":
        """self o other (other applied first)."""
        p = self.alg.p
        return ModuleMap(other.src, self.tgt,
                         [a @ b % p for a, b in zip(self.vmaps, other.vmaps)])

    def add(self, other: "ModuleMap") -> "ModuleMap":
        p = self.alg.p
        return ModuleMap(self.src, self.tgt,
                         [(a + b) % p for a, b in zip(self.vmaps, other.vmaps)])

    def scale(self, c: int) -> "ModuleMap":
        p = self.alg.p
        return ModuleMap(self.src, self.tgt, [c * m % p for m in self.vmaps])

    def neg(self) -> "ModuleMap":
        return self.scale(-1)

    def is_zero(self) -> bool:
        return all(not m.size or not np.any(m) for m in self.vmaps)

    def is_iso(self) -> bool:
        p = self.alg.p
        return all(is_invertible(m, p) if m.size else m.shape[0] == m.shape[1]
                   for m in self.vmaps)

    def validate(self):
        p = self.alg.p
        for a_idx, a in enumerate(self.alg.quiver.arrows):
            lhs = self.tgt.mats[a_idx] @ self.vmaps[a.src] % p
            rhs = self.vmaps[a.tgt] @ self.src.mats[a_idx] % p
            if not np.array_equal(lhs, rhs):
                raise AssertionError(f"map does not intertwine arrow {a.ident}")

    def total_matrix(self) -> np.ndarray:
        """Block-diagonal matrix on the direct sum of the vertex spaces."""
        n_s, n_t = self.src.total_dim, self.tgt.total_dim
        out = zeros(n_t, n_s)
        ro = co = 0
        for v in range(self.alg.n):
            dt, ds = self.tgt.dims[v], self.src.dims[v]
            out[ro:ro + dt, co:co + ds] = self.vmaps[v]
            ro += dt
            co += ds
        return out


def zero_map(src: Representation, tgt: Representation) -> ModuleMap:
    return ModuleMap(src, tgt, [zeros(tgt.dims[v], src.dims[v])
                                for v in range(src.alg.n)])


def identity_map(m: Representation) -> ModuleMap:
    return ModuleMap(m, m, [eye(d) for d in m.dims])


def zero_rep(alg: BoundQuiverAlgebra) -> Representation:
    return Representation(alg, [0] * alg.n,
                          [zeros(0, 0) for _ in alg.quiver.arrows])


def direct_sum(reps: list[Representation], alg=None) -> Representation:
    if not reps:
        return zero_rep(alg)
    alg = reps[0].alg
    dims = [sum(r.dims[v] for r in reps) for v in range(alg.n)]
    mats = []
    for ai, a in enumerate(alg.quiver.arrows):
        m = zeros(dims[a.tgt], dims[a.src])
        ro = co = 0
        for r in reps:
            dt, ds = r.dims[a.tgt], r.dims[a.src]
            m[ro:ro + dt, co:co + ds] = r.mats[ai]
            ro += dt
            co += ds
        mats.append(m)
    return Representation(alg, dims, mats)


# -- projectives, injectives, simples --------------------------------------

def _proj_cache(alg):
    if not hasattr(alg, "_tiltlab_proj"):
        alg._tiltlab_proj = {}
    return alg._tiltlab_proj


def proj_basis(alg: BoundQuiverAlgebra, v: int) -> list[list[int]]:
    """Per-vertex lists of global path indices forming the basis of P(v)."""
    return [alg.path_indices(v, w) for w in range(alg.n)]


def projective(alg: BoundQuiverAlgebra, v: int) -> Representation:
    """P(v) = A e_v, basis the surviving paths out of v."""
    cache = _proj_cache(alg)
    if v in cache:
        return cache[v]
    basis = proj_basis(alg, v)
    pos = [{b: k for k, b in enumerate(bs)} for bs in basis]
    dims = [len(bs) for bs in basis]
    mats = []
    for ai, a in enumerate(alg.quiver.arrows):
        m = zeros(dims[a.tgt], dims[a.src])
        for col, b in enumerate(basis[a.src]):
            idx = alg.reduce_walk(alg.paths[b] + (ai,))
            if idx is not None:
                m[pos[a.tgt][idx], col] = 1
        mats.append(m)
    rep = Representation(alg, dims, mats)
    cache[v] = rep
    return rep


def injective(alg: BoundQuiverAlgebra, v: int) -> Representation:
    """J(v) = D(e_v A), dual of the paths into v."""
    basis = [alg.path_indices(w, v) for w in range(alg.n)]
    pos = [{b: k for k, b in enumerate(bs)} for bs in basis]
    dims = [len(bs) for bs in basis]
    mats = []
    for ai, a in enumerate(alg.quiver.arrows):
        m = zeros(dims[a.tgt], dims[a.src])
        for row, x in enumerate(basis[a.tgt]):
            idx = alg.reduce_walk((ai,) + alg.paths[x])
            if idx is not None:
                m[row, pos[a.src][idx]] = 1
        mats.append(m)
    return Representation(alg, dims, mats)


def simple(alg: BoundQuiverAlgebra, v: int) -> Representation:
    dims = [1 if w == v else 0 for w in range(alg.n)]
    mats = [zeros(dims[a.tgt], dims[a.src]) for a in alg.quiver.arrows]
    return Representation(alg, dims, mats)


# -- hom spaces -------------------------------------------------------------

def hom_space_matrix(m: Representation, n: Representation) -> np.ndarray:
    """Constraint matrix whose kernel is Hom(M, N) in flattened coordinates.

    Coordinates: row-major flattenings of the vertex matrices f_v, vertex by
    vertex.  One block row of constraints per arrow.
    """
    alg = m.alg
    sizes = [n.dims[v] * m.dims[v] for v in range(alg.n)]
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    total = int(offsets[-1])
    rows = []
    for ai, a in enumerate(alg.quiver.arrows):
        u, w = a.src, a.tgt
        nrow = n.dims[w] * m.dims[u]
        if nrow == 0:
            continue
        block = zeros(nrow, total)
        # N_a f_u : vec(N_a X) = kron(N_a, I) vec(X)
        block[:, offsets[u]:offsets[u + 1]] = np.kron(n.mats[ai], eye(m.dims[u]))
        # f_w M_a : vec(X M_a) = kron(I, M_a^T) vec(X)
        block[:, offsets[w]:offsets[w + 1]] -= np.kron(eye(n.dims[w]), m.mats[ai].T)
        rows.append(block % alg.p)
    if not rows:
        return zeros(0, total)
    return np.concatenate(rows, axis=0)


def _unflatten(m: Representation, n: Representation, vec) -> ModuleMap:
    alg = m.alg
    vmaps = []
    at = 0
    for v in range(alg.n):
        size = n.dims[v] * m.dims[v]
        vmaps.append(np.asarray(vec[at:at + size]).reshape(n.dims[v], m.dims[v]))
        at += size
    return ModuleMap(m, n, vmaps)


def hom_basis(m: Representation, n: Representation) -> list[ModuleMap]:
    """Basis of Hom_A(M, N), deterministic."""
    sys = hom_space_matrix(m, n)
    ker = null_space(sys, m.alg.p)
    return [_unflatten(m, n, ker[:, k]) for k in range(ker.shape[1])]


def hom_dim(m: Representation, n: Representation) -> int:
    sys = hom_space_matrix(m, n)
    return sys.shape[1] - rank(sys, m.alg.p)


# -- kernels, images, quotients --------------------------------------------

def sub_from_subspaces(m: Representation, bases: list[np.ndarray]):
    """Subrepresentation on given invariant vertex subspaces (column bases)."""
    alg = m.alg
    dims = [b.shape[1] for b in bases]
    mats = []
    for ai, a in enumerate(alg.quiver.arrows):
        img = m.mats[ai] @ bases[a.src] % alg.p
        mats.append(solve_right(bases[a.tgt], img, alg.p) if dims[a.tgt] else
                    zeros(0, dims[a.src]))
    sub = Representation(alg, dims, mats)
    incl = ModuleMap(sub, m, bases)
    return sub, incl


def quotient_by_subspaces(m: Representation, bases: list[np.ndarray]):
    """Quotient by an invariant family of vertex subspaces.

    Returns (Q, projection, section) where section is a vertexwise right
    inverse of the projection (not a module map in general).
    """
    alg = m.alg
    projs, secs = [], []
    for v in range(alg.n):
        b = modmat(bases[v], alg.p) if bases[v] is not None else zeros(m.dims[v], 0)
        if b.ndim == 1:
            b = b.reshape(m.dims[v], -1)
        red, piv = rref(b.T, alg.p)
        b = red[: len(piv)].T  # canonical basis of the subspace
        r = b.shape[1]
        free = [c for c in range(m.dims[v]) if c not in piv]
        efree = zeros(m.dims[v], len(free))
        for k, fc in enumerate(free):
            efree[fc, k] = 1
        full = np.concatenate([b, efree], axis=1)
        finv = linalg_inv(full, alg.p) if full.size else zeros(0, 0)
        projs.append(finv[r:, :])
        secs.append(efree)
    dims = [pmat.shape[0] for pmat in projs]
    mats = []
    for ai, a in enumerate(alg.quiver.arrows):
        mats.append(projs[a.tgt] @ m.mats[ai] @ secs[a.src] % alg.p)
    q = Representation(alg, dims, mats)
    pi = ModuleMap(m, q, projs)
    return q, pi, secs


def kernel(f: ModuleMap):
    bases = [null_space(f.vmaps[v], f.alg.p) for v in range(f.alg.n)]
    return sub_from_subspaces(f.src, bases)


def image(f: ModuleMap):
    bases = [column_space(f.vmaps[v], f.alg.p) for v in range(f.alg.n)]
    return sub_from_subspaces(f.tgt, bases)


def cokernel(f: ModuleMap):
    bases = [column_space(f.vmaps[v], f.alg.p) for v in range(f.alg.n)]
    q, pi, _ = quotient_by_subspaces(f.tgt, bases)
    return q, pi


def radical_subspaces(m: Representation) -> list[np.ndarray]:
    alg = m.alg
    out = []
    for v in range(alg.n):
        imgs = [m.mats[ai] for ai, a in enumerate(alg.quiver.arrows) if a.tgt == v]
        out.append(span_union(*imgs, p=alg.p) if imgs else zeros(m.dims[v], 0))
    return out


def top(m: Representation):
    """(top M, projection, section): the radical quotient."""
    q, pi, secs = quotient_by_subspaces(m, radical_subspaces(m))
    return q, pi, secs


# -- projective sums and covers --------------------------------------------

class ProjSum:
    """An explicit ordered direct sum of indecomposable projectives P(v)."""

    def __init__(self, alg: BoundQuiverAlgebra, summands: list[int]):
        self.alg = alg
        self.summands = [int(v) for v in summands]
        self.mults = np.zeros(alg.n, dtype=np.int64)
        for v in self.summands:
            self.mults[v] += 1
        bases = [proj_basis(alg, v) for v in range(alg.n)]
        self.block_sizes = [[len(bases[v][w]) for w in range(alg.n)]
                            for v in range(alg.n)]
        # offsets[s][w]: start of summand s's block inside vertex space w
        self.offsets = []
        cursor = [0] * alg.n
        for v in self.summands:
            self.offsets.append(list(cursor))
            for w in range(alg.n):
                cursor[w] += self.block_sizes[v][w]
        self.rep = direct_sum([projective(alg, v) for v in self.summands], alg)
        self._pbasis = bases

    @property
    def count(self) -> int:
        return len(self.summands)

    def gen_column(self, s: int) -> tuple[int, int]:
        """(vertex, column) of the generator e_v of summand s."""
        v = self.summands[s]
        basis = self._pbasis[v][v]
        k = basis.index(self.alg.e_index[v])
        return v, self.offsets[s][v] + k

    def scatter(self, s: int, coeffs: np.ndarray) -> list[np.ndarray]:
        """Element of summand s from algebra coefficients (paths out of v)."""
        alg = self.alg
        v = self.summands[s]
        vecs = [zeros(self.rep.dims[w], 1)[:, 0] for w in range(alg.n)]
        for b in np.nonzero(coeffs)[0]:
            w = int(alg.path_tgt[b])
            k = self._pbasis[v][w].index(int(b))
            vecs[w][self.offsets[s][w] + k] = coeffs[b] % alg.p
        return vecs

    def gather(self, s: int, w: int, vec: np.ndarray) -> np.ndarray:
        """Algebra coefficients of summand s's block of a vertex-w vector."""
        alg = self.alg
        v = self.summands[s]
        out = np.zeros(alg.dim, dtype=np.int64)
        start = self.offsets[s][w]
        for k, b in enumerate(self._pbasis[v][w]):
            out[b] = vec[start + k] % alg.p
        return out


def alg_matrix_of_map(f: ModuleMap, src: ProjSum, tgt: ProjSum) -> np.ndarray:
    """Algebra-coefficient matrix (tgt.count, src.count, dim A) of f."""
    alg = src.alg
    out = np.zeros((tgt.count, src.count, alg.dim), dtype=np.int64)
    for c in range(src.count):
        v, col = src.gen_column(c)
        vec = f.vmaps[v][:, col]
        for r in range(tgt.count):
            out[r, c] = tgt.gather(r, v, vec)
    return out


def map_of_alg_matrix(mat: np.ndarray, src: ProjSum, tgt: ProjSum) -> ModuleMap:
    """Expand an algebra-coefficient matrix to the honest module map."""
    alg = src.alg
    vmaps = [zeros(tgt.rep.dims[w], src.rep.dims[w]) for w in range(alg.n)]
    for c in range(src.count):
        v = src.summands[c]
        for r in range(tgt.count):
            coeffs = mat[r, c]
            nz = np.nonzero(coeffs)[0]
            if nz.size == 0:
                continue
            for w in range(alg.n):
                for k, b in enumerate(src._pbasis[v][w]):
                    # image of basis path b of the source summand: b * u
                    colv = np.zeros(alg.dim, dtype=np.int64)
                    for bu in nz:
                        prod = alg.mult_index(int(b), int(bu))
                        if prod is not None:
                            colv[prod] = (colv[prod] + coeffs[bu]) % alg.p
                    target_block = tgt.scatter(r, colv)
                    vmaps[w][:, src.offsets[c][w] + k] = (
                        vmaps[w][:, src.offsets[c][w] + k] + target_block[w]) % alg.p
    return ModuleMap(src.rep, tgt.rep, vmaps)


def projective_cover(m: Representation):
    """(ProjSum P, cover map P -> M); multiplicities from top(M)."""
    alg = m.alg
    t, pi, secs = top(m)
    psum = ProjSum(alg, [v for v in range(alg.n) for _ in range(int(t.dims[v]))])
    vmaps = [zeros(m.dims[w], psum.rep.dims[w]) for w in range(alg.n)]
    s = 0
    for v in range(alg.n):
        for copy in range(t.dims[v]):
            gen_target = secs[v][:, copy]  # a preimage in M_v of the top basis
            for w in range(alg.n):
                for k, b in enumerate(psum._pbasis[v][w]):
                    col = psum.offsets[s][w] + k
                    vmaps[w][:, col] = (m.act_path(int(b)) @ gen_target) % alg.p
            s += 1
    cover = ModuleMap(psum.rep, m, vmaps)
    return psum, cover


def minimal_resolution(m: Representation, depth: int,
                       size_budget: int = RESOLUTION_SIZE_BUDGET):
    """Minimal projective resolution to the requested depth.

    Returns (sums, diffs): sums[t] is the ProjSum in homological degree t,
    diffs[t] the algebra matrix of sums[t+1] -> sums[t].  Stops early when
    the resolution terminates.
    """
    sums, diffs = [], []
    current = m
    prev_sum = None
    total = 0
    for _ in range(depth + 1):
        if current.is_zero():
            break
        psum, cover = projective_cover(current)
        total += psum.rep.total_dim
        if total > size_budget:
            raise ResolutionDepthExceeded(
                f"resolution size {total} exceeds budget {size_budget}")
        if prev_sum is not None:
            # cover of the syzygy composed with its inclusion into prev_sum
            comp = prev_incl.after(cover)
            diffs.append(alg_matrix_of_map(comp, psum, prev_sum))
        sums.append(psum)
        syz, syz_incl = kernel(cover)
        prev_sum = psum
        prev_incl = syz_incl
        current = syz
    return sums, diffs


def ext_dim(m: Representation, n: Representation, i: int) -> int:
    """dim Ext^i(M, N) from a minimal projective resolution."""
    if i < 0:
        return 0
    alg = m.alg
    sums, diffs = minimal_resolution(m, i + 1)
    if i >= len(sums):
        return 0

    def hom_coords_dim(t):
        return sum(n.dims[v] for v in sums[t].summands)

    def dmat(t):
        """Matrix of Hom(R_t, N) -> Hom(R_{t+1}, N), f -> f o d_t."""
        if t + 1 >= len(sums):
            return zeros(0, hom_coords_dim(t))
        src_ps, tgt_ps = sums[t], sums[t + 1]
        d = diffs[t]
        rows = sum(n.dims[v] for v in tgt_ps.summands)
        out = zeros(rows, hom_coords_dim(t))
        col = 0
        for r in range(src_ps.count):
            vr = src_ps.summands[r]
            for j in range(n.dims[vr]):
                unit = zeros(n.dims[vr], 1)[:, 0]
                unit[j] = 1
                ro = 0
                for c in range(tgt_ps.count):
                    vc = tgt_ps.summands[c]
                    coeffs = d[r, c]
                    if np.any(coeffs):
                        out[ro:ro + n.dims[vc], col] = (
                            n.act_elem(coeffs, vr, vc) @ unit) % alg.p
                    ro += n.dims[vc]
                col += 1
        return out

    di = dmat(i)
    nullity = di.shape[1] - rank(di, alg.p)
    if i == 0:
        return nullity
    return nullity - rank(dmat(i - 1), alg.p)


# -- decomposition and isomorphism -----------------------------------------

def _idempotent_blocks(m: Representation, e_total: np.ndarray):
    """Split a total-space idempotent into per-vertex column bases."""
    bases = []
    at = 0
    for v in range(m.alg.n):
        d = m.dims[v]
        bases.append(column_space(e_total[at:at + d, at:at + d], m.alg.p))
        at += d
    return bases


def split_by_idempotents(m: Representation, idems: list[np.ndarray]):
    out = []
    for e in idems:
        sub, incl = sub_from_subspaces(m, _idempotent_blocks(m, e))
        out.append((sub, incl))
    return out


def end_algebra_mats(m: Representation) -> list[np.ndarray]:
    return [f.total_matrix() for f in hom_basis(m, m)]


def decompose(m: Representation, seed: int = 0,
              budget: int = DEFAULT_SPLIT_BUDGET):
    """Indecomposable summands with multiplicities: list of (rep, mult).

    Deterministic given the seed; each part has a local endomorphism algebra
    over F_p.
    """
    if m.is_zero():
        return []
    rng = np.random.default_rng(seed)
    ends = end_algebra_mats(m)
    if len(ends) == 1:
        return [(m, 1)]
    idems = primitive_idempotents(ends, m.alg.p, rng, budget)
    parts = [sub for sub, _ in split_by_idempotents(m, idems)]
    groups: list[list[Representation]] = []
    for part in parts:
        placed = False
        for g in groups:
            if module_iso(g[0], part) is not None:
                g.append(part)
                placed = True
                break
        if not placed:
            groups.append([part])
    groups.sort(key=lambda g: (g[0].total_dim, g[0].dims))
    return [(g[0], len(g)) for g in groups]


def is_indecomposable(m: Representation, seed: int = 0) -> bool:
    parts = decompose(m, seed=seed)
    return len(parts) == 1 and parts[0][1] == 1


def module_iso(m: Representation, n: Representation):
    """An isomorphism M -> N, or None (certified), for indecomposables.

    Deterministic: for indecomposable M, N some composite g o f over the hom
    bases escapes rad End(M) iff M and N are isomorphic, and that f is then
    itself an isomorphism.
    """
    if m.dims != n.dims:
        return None
    if m.is_zero():
        return identity_map(m)
    p = m.alg.p
    fs = hom_basis(m, n)
    gs = hom_basis(n, m)
    if not fs or not gs or len(fs) != len(gs):
        return None
    # cheap pass: a basis map that is already invertible
    for f in fs:
        if f.is_iso():
            return f
    ends = end_algebra_mats(m)
    if p <= len(ends):
        from .errors import FieldTooSmall
        raise FieldTooSmall(f"p = {p} must exceed dim End = {len(ends)}")
    gram = np.zeros((len(ends), len(ends)), dtype=np.int64)
    for i in range(len(ends)):
        for j in range(i, len(ends)):
            tr = int(np.trace(ends[i] @ ends[j] % p)) % p
            gram[i, j] = tr
            gram[j, i] = tr
    radc = null_space(gram, p)
    flat = np.stack([b.reshape(-1) for b in ends], axis=1) % p
    rad_flat = (flat @ radc) % p
    for f in fs:
        for g in gs:
            comp = g.after(f).total_matrix().reshape(-1, 1)
            if not in_span(comp, rad_flat, p):
                # g o f escapes the radical of the local End(M), so it is
                # invertible and f is a split mono; equal dimension vectors
                # then force f to be an isomorphism
                assert f.is_iso()
                return f
    return None
