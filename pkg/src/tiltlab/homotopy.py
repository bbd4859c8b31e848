"""Bounded complexes of projectives and their homotopy category.

A ``ProjComplex`` keeps, per degree, an ordered list of vertices (one per
indecomposable projective summand) and stores differentials as matrices of
algebra elements: entry (r, c) of a differential is a coefficient vector
over the path basis, supported on paths from the target summand's vertex
to the source summand's vertex.  Expanding everything to honest
representations is available but most computations stay in algebra
coordinates, which keeps hom spaces, cones and Gaussian elimination small.
"""
from __future__ import annotations

import numpy as np

from .algebra import BoundQuiverAlgebra
from .endsplit import primitive_idempotents
from .errors import FieldTooSmall, NoSolution, WindowViolation
from .linalg import (column_space, in_span, inv, null_space, rank,
                     solve_right, span_union, zeros)
from .repcat import (
    ModuleMap,
    ProjSum,
    Representation,
    alg_matrix_of_map,
    projective_cover,
    sub_from_subspaces,
)
from .repcomplex import ComplexMap, RepComplex


# -- algebra-coefficient matrices ------------------------------------------

def azeros(alg: BoundQuiverAlgebra, r: int, c: int) -> np.ndarray:
    return np.zeros((r, c, alg.dim), dtype=np.int64)


def aidentity(alg: BoundQuiverAlgebra, summands: list[int]) -> np.ndarray:
    m = azeros(alg, len(summands), len(summands))
    for k, v in enumerate(summands):
        m[k, k, alg.e_index[v]] = 1
    return m


def amul(alg: BoundQuiverAlgebra, second: np.ndarray,
         first: np.ndarray) -> np.ndarray:
    """Matrix of the composite map (first applied first).

    Composition of maps between projectives multiplies the representing
    algebra elements in the opposite order, so entry (r, c) is
    sum_k first[k, c] * second[r, k].
    """
    return np.einsum("kca,rkb,abe->rce", first, second,
                     alg.mult_tensor) % alg.p


def _support_ok(alg: BoundQuiverAlgebra, mat: np.ndarray,
                src_summands: list[int], tgt_summands: list[int]) -> bool:
    for r, vr in enumerate(tgt_summands):
        for c, vc in enumerate(src_summands):
            for b in np.nonzero(mat[r, c])[0]:
                if alg.path_src[b] != vr or alg.path_tgt[b] != vc:
                    return False
    return True


def elem_inverse(alg: BoundQuiverAlgebra, u: np.ndarray, v: int) -> np.ndarray:
    """Inverse of u in e_v A e_v; u must have a nonzero scalar part."""
    lam = int(u[alg.e_index[v]]) % alg.p
    assert lam, "element has no scalar part"
    lam_inv = pow(lam, alg.p - 2, alg.p)
    rad = u.copy()
    rad[alg.e_index[v]] = 0
    # geometric series: (lam(e + lam^-1 r))^-1 = lam^-1 sum (-lam^-1 r)^k
    out = alg.unit_coeffs(v)
    term = alg.unit_coeffs(v)
    step = (-lam_inv * rad) % alg.p
    while True:
        term = alg.mult_coeffs(term, step)
        if not np.any(term):
            break
        out = (out + term) % alg.p
    return (lam_inv * out) % alg.p


# -- the complexes ----------------------------------------------------------

class ProjComplex:
    """A bounded complex of projectives in algebra coordinates.

    ``summands[k]`` lists the projective summands (by vertex) in degree
    ``lo + k``; ``dmats[k]`` is the algebra matrix of the differential
    from degree ``lo + k`` to ``lo + k + 1``.
    """

    def __init__(self, alg: BoundQuiverAlgebra, lo: int,
                 summands: list[list[int]], dmats: list[np.ndarray]):
        if len(dmats) != max(len(summands) - 1, 0):
            raise ValueError("need exactly len(summands) - 1 differentials")
        self.alg = alg
        self.lo = int(lo)
        self.summands = [list(map(int, s)) for s in summands]
        self.dmats = [np.asarray(m, dtype=np.int64) % alg.p for m in dmats]
        self._psums: dict[int, ProjSum] = {}
        self._expansion: RepComplex | None = None

    @property
    def hi(self) -> int:
        return self.lo + len(self.summands) - 1

    def degrees(self) -> range:
        return range(self.lo, self.lo + len(self.summands))

    def count(self, q: int) -> int:
        if self.lo <= q <= self.hi:
            return len(self.summands[q - self.lo])
        return 0

    def summands_at(self, q: int) -> list[int]:
        if self.lo <= q <= self.hi:
            return self.summands[q - self.lo]
        return []

    def dmat_at(self, q: int) -> np.ndarray:
        if self.lo <= q < self.hi:
            return self.dmats[q - self.lo]
        return azeros(self.alg, self.count(q + 1), self.count(q))

    @property
    def total_count(self) -> int:
        return sum(len(s) for s in self.summands)

    def is_zero(self) -> bool:
        return self.total_count == 0

    def graded_mults(self) -> dict[int, tuple[int, ...]]:
        out = {}
        for q in self.degrees():
            s = self.summands_at(q)
            if s:
                m = [0] * self.alg.n
                for v in s:
                    m[v] += 1
                out[q] = tuple(m)
        return out

    def shape_key(self):
        t = self.trim()
        return (t.lo, tuple(tuple(sorted(s)) for s in t.summands))

    def psum_at(self, q: int) -> ProjSum:
        if q not in self._psums:
            self._psums[q] = ProjSum(self.alg, self.summands_at(q))
        return self._psums[q]

    def expansion(self) -> RepComplex:
        if self._expansion is None:
            from .repcat import map_of_alg_matrix
            psums = [self.psum_at(q) for q in self.degrees()]
            terms = [ps.rep for ps in psums]
            diffs = [map_of_alg_matrix(self.dmats[k], psums[k], psums[k + 1])
                     for k in range(len(self.dmats))]
            self._expansion = RepComplex(self.alg, self.lo, terms, diffs)
        return self._expansion

    def validate(self) -> None:
        for k, m in enumerate(self.dmats):
            assert m.shape == (len(self.summands[k + 1]),
                               len(self.summands[k]), self.alg.dim)
            assert _support_ok(self.alg, m, self.summands[k],
                               self.summands[k + 1]), \
                f"differential at degree {self.lo + k} has bad support"
        for k in range(len(self.dmats) - 1):
            comp = amul(self.alg, self.dmats[k + 1], self.dmats[k])
            assert not np.any(comp), f"d^2 != 0 leaving degree {self.lo + k}"

    def shift(self, s: int) -> "ProjComplex":
        sign = 1 if s % 2 == 0 else -1
        return ProjComplex(self.alg, self.lo - s,
                           [list(l) for l in self.summands],
                           [(sign * m) % self.alg.p for m in self.dmats])

    def pad(self, lo: int, hi: int) -> "ProjComplex":
        if lo > self.lo or hi < self.hi:
            raise ValueError("pad window must contain the current window")
        summands = [self.summands_at(q) for q in range(lo, hi + 1)]
        dmats = [self.dmat_at(q) for q in range(lo, hi)]
        return ProjComplex(self.alg, lo, summands, dmats)

    def trim(self) -> "ProjComplex":
        k0, k1 = 0, len(self.summands)
        while k0 < k1 and not self.summands[k0]:
            k0 += 1
        while k1 > k0 and not self.summands[k1 - 1]:
            k1 -= 1
        if k0 == k1:
            return ProjComplex(self.alg, 0, [[]], [])
        return ProjComplex(self.alg, self.lo + k0,
                           self.summands[k0:k1], self.dmats[k0:k1 - 1])

    def __repr__(self):
        parts = ", ".join(f"{q}:{self.summands_at(q)}" for q in self.degrees())
        return f"ProjComplex({parts})"


def proj_stalk(alg: BoundQuiverAlgebra, v: int, degree: int = 0) -> ProjComplex:
    return ProjComplex(alg, degree, [[v]], [])


def proj_zero(alg: BoundQuiverAlgebra) -> ProjComplex:
    return ProjComplex(alg, 0, [[]], [])


def proj_direct_sum(parts: list[ProjComplex],
                    alg: BoundQuiverAlgebra | None = None) -> ProjComplex:
    parts = [x for x in parts if not x.is_zero()]
    if not parts:
        return proj_zero(alg)
    alg = parts[0].alg
    lo = min(x.lo for x in parts)
    hi = max(x.hi for x in parts)
    padded = [x.pad(lo, hi) for x in parts]
    summands = [sum((x.summands_at(q) for x in padded), [])
                for q in range(lo, hi + 1)]
    dmats = []
    for q in range(lo, hi):
        blk = azeros(alg, len(summands[q + 1 - lo]), len(summands[q - lo]))
        ro = co = 0
        for x in padded:
            r, c = x.count(q + 1), x.count(q)
            blk[ro:ro + r, co:co + c] = x.dmat_at(q)
            ro += r
            co += c
        dmats.append(blk)
    return ProjComplex(alg, lo, summands, dmats)


class ChainMap:
    """A degreewise map of projective complexes, in algebra coordinates."""

    def __init__(self, src: ProjComplex, tgt: ProjComplex,
                 mats: dict[int, np.ndarray]):
        self.src = src
        self.tgt = tgt
        self.alg = src.alg
        self.mats = {int(q): np.asarray(m, dtype=np.int64) % self.alg.p
                     for q, m in mats.items()}

    def map_at(self, q: int) -> np.ndarray:
        if q in self.mats:
            return self.mats[q]
        return azeros(self.alg, self.tgt.count(q), self.src.count(q))

    def validate(self) -> None:
        for q, m in self.mats.items():
            assert m.shape == (self.tgt.count(q), self.src.count(q),
                               self.alg.dim)
            assert _support_ok(self.alg, m, self.src.summands_at(q),
                               self.tgt.summands_at(q))
        for q in range(min(self.src.lo, self.tgt.lo) - 1,
                       max(self.src.hi, self.tgt.hi) + 1):
            lhs = amul(self.alg, self.map_at(q + 1), self.src.dmat_at(q))
            rhs = amul(self.alg, self.tgt.dmat_at(q), self.map_at(q))
            assert np.array_equal(lhs, rhs), f"not a chain map at degree {q}"

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self o other (other applied first)."""
        out = {}
        for q in range(max(self.src.lo, other.src.lo) - 1,
                       min(self.src.hi, other.src.hi) + 2):
            m = amul(self.alg, self.map_at(q), other.map_at(q))
            if np.any(m):
                out[q] = m
        return ChainMap(other.src, self.tgt, out)

    def add(self, other: "ChainMap") -> "ChainMap":
        qs = set(self.mats) | set(other.mats)
        return ChainMap(self.src, self.tgt,
                        {q: (self.map_at(q) + other.map_at(q)) % self.alg.p
                         for q in qs})

    def scale(self, c: int) -> "ChainMap":
        return ChainMap(self.src, self.tgt,
                        {q: (c * m) % self.alg.p for q, m in self.mats.items()})

    def is_zero(self) -> bool:
        return all(not np.any(m) for m in self.mats.values())

    def shift(self, s: int) -> "ChainMap":
        return ChainMap(self.src.shift(s), self.tgt.shift(s),
                        {q - s: m for q, m in self.mats.items()})

    def expand(self) -> ComplexMap:
        from .repcat import map_of_alg_matrix
        se, te = self.src.expansion(), self.tgt.expansion()
        maps = {}
        for q in range(min(self.src.lo, self.tgt.lo),
                       max(self.src.hi, self.tgt.hi) + 1):
            f = map_of_alg_matrix(self.map_at(q), self.src.psum_at(q),
                                  self.tgt.psum_at(q))
            maps[q] = ModuleMap(se.term_at(q), te.term_at(q), f.vmaps)
        return ComplexMap(se, te, maps)


def chain_identity(x: ProjComplex) -> ChainMap:
    return ChainMap(x, x, {q: aidentity(x.alg, x.summands_at(q))
                           for q in x.degrees()})


def chain_zero(src: ProjComplex, tgt: ProjComplex) -> ChainMap:
    return ChainMap(src, tgt, {})


def proj_cone(f: ChainMap) -> ProjComplex:
    """cone(f)^q = X^(q+1) + Y^q with d(x, y) = (-dx, f(x) + dy)."""
    alg = f.alg
    x, y = f.src, f.tgt
    lo = min(x.lo - 1, y.lo)
    hi = max(x.hi - 1, y.hi)
    summands = [x.summands_at(q + 1) + y.summands_at(q)
                for q in range(lo, hi + 1)]
    dmats = []
    for q in range(lo, hi):
        blk = azeros(alg, len(summands[q + 1 - lo]), len(summands[q - lo]))
        r0, c0 = x.count(q + 2), x.count(q + 1)
        blk[:r0, :c0] = (-x.dmat_at(q + 1)) % alg.p
        blk[r0:, :c0] = f.map_at(q + 1)
        blk[r0:, c0:] = y.dmat_at(q)
        dmats.append(blk)
    return ProjComplex(alg, lo, summands, dmats)


def cone_with_maps(f: ChainMap):
    """(cone, inclusion of the target, projection to the shifted source)."""
    c = proj_cone(f)
    x, y = f.src, f.tgt
    incl = ChainMap(y, c, {
        q: np.concatenate([azeros(f.alg, x.count(q + 1), y.count(q)),
                           aidentity(f.alg, y.summands_at(q))], axis=0)
        for q in y.degrees()})
    xs = x.shift(1)
    proj = ChainMap(c, xs, {
        q: np.concatenate([aidentity(f.alg, x.summands_at(q + 1)),
                           azeros(f.alg, x.count(q + 1), y.count(q))], axis=1)
        for q in c.degrees() if x.count(q + 1)})
    return c, incl, proj


def cocone_with_maps(g: ChainMap):
    """(cocone V, projection V -> source of g, connecting map target -> V[1])."""
    c, incl, _ = cone_with_maps(g)
    v = c.shift(-1)
    e = g.src
    pr = ChainMap(v, e, {
        q: np.concatenate([aidentity(g.alg, e.summands_at(q)),
                           azeros(g.alg, e.count(q), g.tgt.count(q - 1))],
                          axis=1)
        for q in v.degrees() if e.count(q)})
    # conn: Z -> V[1] = cone(g) is the canonical inclusion
    return v, pr, ChainMap(g.tgt, c, incl.mats)


# -- hom spaces in the homotopy category -----------------------------------

class _Layout:
    """Coordinates for degreewise maps out of a ProjComplex.

    A map f with f^q : X^q -> C^(q+offset) is recorded by the images of
    the summand generators; block (q, c) is a vector in the vertex space
    of C^(q+offset) at the summand's vertex.
    """

    def __init__(self, x: ProjComplex, c: RepComplex, offset: int):
        self.blocks = []  # (degree q, summand index, vertex, size, start)
        self.total = 0
        for q in range(min(x.lo, c.lo - offset), max(x.hi, c.hi - offset) + 1):
            term = c.term_at(q + offset)
            for s, v in enumerate(x.summands_at(q)):
                size = term.dims[v]
                self.blocks.append((q, s, v, size, self.total))
                self.total += size

    def block_start(self, q: int, s: int):
        for (bq, bs, _, size, start) in self.blocks:
            if bq == q and bs == s:
                return start, size
        return None


class HomPackage:
    """Hom(X, C[i]) for X a complex of projectives.

    Chain maps are solved for in generator-image coordinates; Z spans the
    chain maps, B the null-homotopic ones.  ``dim`` is the hom space in
    the homotopy category (equivalently, the derived category).
    """

    def __init__(self, x: ProjComplex, target, i: int, cs: RepComplex):
        alg = x.alg
        self.x = x
        self.target = target
        self.i = i
        self.cs = cs
        p = alg.p
        self.f_layout = _Layout(x, cs, 0)
        self.h_layout = _Layout(x, cs, -1)
        self.r_layout = _Layout(x, cs, 1)
        nf, nh, nr = self.f_layout.total, self.h_layout.total, self.r_layout.total

        m = zeros(nr, nf)
        for (q, c, v, size, start) in self.f_layout.blocks:
            row = self.r_layout.block_start(q, c)
            if row is None:
                continue
            rstart, rsize = row
            if rsize == 0:
                continue
            d = cs.diff_at(q)
            if size:
                m[rstart:rstart + rsize, start:start + size] -= d.vmaps[v]
        for (q, c, v, size, start) in self.r_layout.blocks:
            # contributions of f^(q+1) through the source differential
            dx = x.dmat_at(q)
            term = cs.term_at(q + 1)
            for r, vr in enumerate(x.summands_at(q + 1)):
                u = dx[r, c]
                if not np.any(u):
                    continue
                col = self.f_layout.block_start(q + 1, r)
                if col is None:
                    continue
                cstart, csize = col
                if csize == 0 or size == 0:
                    continue
                act = term.act_elem(u, vr, v)
                m[start:start + size, cstart:cstart + csize] += act
        m %= p

        b = zeros(nf, nh)
        for (q, c, v, size, start) in self.f_layout.blocks:
            if size == 0:
                continue
            hblk = self.h_layout.block_start(q, c)
            if hblk is not None and hblk[1]:
                d = cs.diff_at(q - 1)
                b[start:start + size, hblk[0]:hblk[0] + hblk[1]] += d.vmaps[v]
            dx = x.dmat_at(q)
            term = cs.term_at(q)
            for r, vr in enumerate(x.summands_at(q + 1)):
                u = dx[r, c]
                if not np.any(u):
                    continue
                hcol = self.h_layout.block_start(q + 1, r)
                if hcol is None or hcol[1] == 0:
                    continue
                b[start:start + size, hcol[0]:hcol[0] + hcol[1]] += \
                    term.act_elem(u, vr, v)
        b %= p
        self._bmat = b

        self.chain_space = null_space(m, p) if nf else zeros(0, 0)
        self.homotopy_image = column_space(b, p) if nf else zeros(0, 0)
        self.dim = self.chain_space.shape[1] - rank(self.homotopy_image, p)
        # representatives: columns of Z extending the homotopy image
        self._span = self.homotopy_image
        self.rep_coords = []
        for k in range(self.chain_space.shape[1]):
            col = self.chain_space[:, k]
            if not in_span(col, self._span, p):
                self.rep_coords.append(col)
                self._span = span_union(self._span, col.reshape(-1, 1), p=p)
        assert len(self.rep_coords) == self.dim
        self._basis = (np.column_stack([self.homotopy_image]
                                       + [c.reshape(-1, 1)
                                          for c in self.rep_coords])
                       if nf else zeros(0, 0))

    def reduce(self, coords: np.ndarray) -> np.ndarray:
        """Coordinates of a chain map's homotopy class in the chosen basis."""
        if self.f_layout.total == 0:
            return np.zeros(0, dtype=np.int64)
        sol = solve_right(self._basis, coords.reshape(-1, 1), self.x.alg.p)
        return sol[self.homotopy_image.shape[1]:, 0]

    def class_coords(self, f) -> np.ndarray:
        return self.reduce(self.coords_of(f))

    def coords_of(self, f) -> np.ndarray:
        """Generator-image coordinates of a ChainMap or ComplexMap."""
        out = np.zeros(self.f_layout.total, dtype=np.int64)
        if isinstance(f, ChainMap):
            for (q, c, v, size, start) in self.f_layout.blocks:
                if size == 0:
                    continue
                mat = f.map_at(q)
                ps = self.target.psum_at(q + self.i) if hasattr(
                    self.target, "psum_at") else None
                vec = np.zeros(size, dtype=np.int64)
                for r in range(mat.shape[0]):
                    coeffs = mat[r, c]
                    if np.any(coeffs):
                        vec = (vec + _scatter_vertex(ps, r, v, coeffs)) % \
                            self.x.alg.p
                out[start:start + size] = vec
        else:
            for (q, c, v, size, start) in self.f_layout.blocks:
                if size == 0:
                    continue
                ps = self.x.psum_at(q)
                _, col = ps.gen_column(c)
                out[start:start + size] = f.map_at(q).vmaps[v][:, col]
        return out

    def chainmap_of(self, coords: np.ndarray) -> ChainMap:
        """Assemble an algebra-coordinate chain map from solver coordinates."""
        assert hasattr(self.target, "psum_at"), "target is not projective"
        mats: dict[int, np.ndarray] = {}
        ts = self.target.shift(self.i)
        for (q, c, v, size, start) in self.f_layout.blocks:
            if size == 0:
                continue
            if q not in mats:
                mats[q] = azeros(self.x.alg, ts.count(q), self.x.count(q))
            ps = self.target.psum_at(q + self.i)
            vec = coords[start:start + size]
            for r in range(ts.count(q)):
                mats[q][r, c] = ps.gather(r, v, vec)
        return ChainMap(self.x, ts, mats)

    def chain_reps(self) -> list[ChainMap]:
        return [self.chainmap_of(c) for c in self.rep_coords]

    def complexmap_of(self, coords: np.ndarray) -> ComplexMap:
        """Assemble an honest map of complexes X.expansion() -> C[i]."""
        alg = self.x.alg
        xe = self.x.expansion()
        maps = {}
        for q in self.x.degrees():
            ps = self.x.psum_at(q)
            term = self.cs.term_at(q)
            vmaps = [zeros(term.dims[w], xe.term_at(q).dims[w])
                     for w in range(alg.n)]
            for (bq, c, v, size, start) in self.f_layout.blocks:
                if bq != q or size == 0:
                    continue
                gval = coords[start:start + size]
                for w in range(alg.n):
                    for k, bpath in enumerate(ps._pbasis[v][w]):
                        colv = (term.act_path(int(bpath)) @ gval) % alg.p
                        vmaps[w][:, ps.offsets[c][w] + k] = colv
            maps[q] = ModuleMap(xe.term_at(q), term, vmaps)
        return ComplexMap(xe, self.cs, maps)

    def is_nullhomotopic(self, f) -> bool:
        return not np.any(self.class_coords(f))

    def nullhomotopy(self, f):
        """Solve f = dh + hd; returns h-coordinates or None."""
        coords = f if isinstance(f, np.ndarray) else self.coords_of(f)
        if self.f_layout.total == 0:
            return np.zeros(0, dtype=np.int64)
        try:
            sol = solve_right(self._bmat, coords.reshape(-1, 1), self.x.alg.p)
        except NoSolution:
            return None
        return sol[:, 0]


def _scatter_vertex(ps: ProjSum, r: int, v: int, coeffs: np.ndarray):
    """The vertex-v block of summand r's element with the given coefficients."""
    vecs = ps.scatter(r, coeffs)
    return vecs[v]


def hom_package(x: ProjComplex, target, i: int = 0,
                cache: bool = True) -> HomPackage:
    key = (id(target), i)
    if cache:
        store = getattr(x, "_pkg_cache", None)
        if store is None:
            store = x._pkg_cache = {}
        if key in store:
            return store[key]
    if isinstance(target, ProjComplex):
        cs = target.expansion().shift(i)
    else:
        cs = target.shift(i)
    pkg = HomPackage(x, target, i, cs)
    if cache:
        store[key] = pkg
    return pkg


def hom_k(x: ProjComplex, target, i: int = 0) -> int:
    """dim Hom(X, target[i]) in the homotopy (= derived) category."""
    return hom_package(x, target, i).dim


# -- minimization (Gaussian elimination on invertible entries) --------------

def _find_unit(x: ProjComplex):
    alg = x.alg
    for k, m in enumerate(x.dmats):
        for r, vr in enumerate(x.summands[k + 1]):
            for c, vc in enumerate(x.summands[k]):
                if vr == vc and m[r, c, alg.e_index[vr]] % alg.p:
                    return k, r, c
    return None


def is_minimal(x: ProjComplex) -> bool:
    return _find_unit(x) is None


def minimize(x: ProjComplex) -> ProjComplex:
    """A homotopy-equivalent complex with radical differentials.

    Repeatedly cancels differential entries that are invertible algebra
    elements (nonzero scalar part on a matching vertex), then trims empty
    degrees.
    """
    alg = x.alg
    summands = [list(s) for s in x.summands]
    dmats = [m.copy() for m in x.dmats]
    while True:
        found = None
        for k, m in enumerate(dmats):
            for r, vr in enumerate(summands[k + 1]):
                for c, vc in enumerate(summands[k]):
                    if vr == vc and m[r, c, alg.e_index[vr]] % alg.p:
                        found = (k, r, c)
                        break
                if found:
                    break
            if found:
                break
        if found is None:
            break
        k, r, c = found
        m = dmats[k]
        v = summands[k][c]
        a_inv = elem_inverse(alg, m[r, c], v)
        keep_r = [i for i in range(m.shape[0]) if i != r]
        keep_c = [j for j in range(m.shape[1]) if j != c]
        beta = m[r][keep_c]          # remaining sources -> P(v)
        gamma = m[keep_r][:, c]      # P(v) -> remaining targets
        # correction gamma o a_inv o beta, with algebra products in
        # application order: beta first, then a_inv, then gamma
        t = alg.mult_tensor
        m1 = np.einsum("ca,b,abe->ce", beta, a_inv, t) % alg.p
        corr = np.einsum("ca,rb,abe->rce", m1, gamma, t) % alg.p
        dmats[k] = (m[np.ix_(keep_r, keep_c)] - corr) % alg.p
        if k > 0:
            dmats[k - 1] = dmats[k - 1][keep_c]
        if k + 1 < len(dmats):
            dmats[k + 1] = dmats[k + 1][:, keep_r]
        summands[k] = [vv for j, vv in enumerate(summands[k]) if j != c]
        summands[k + 1] = [vv for i, vv in enumerate(summands[k + 1])
                           if i != r]
    return ProjComplex(alg, x.lo, summands, dmats).trim()


# -- Grothendieck-group data ------------------------------------------------

def k0_vector(x: ProjComplex) -> np.ndarray:
    """Alternating sum of projective multiplicities, as integers."""
    out = np.zeros(x.alg.n, dtype=np.int64)
    for q in x.degrees():
        sign = 1 if q % 2 == 0 else -1
        for v in x.summands_at(q):
            out[v] += sign
    return out


# -- endomorphisms, decomposition, isomorphism ------------------------------

def chain_endos(x: ProjComplex) -> list[ChainMap]:
    """A basis of the honest chain endomorphisms (no homotopy quotient)."""
    pkg = hom_package(x, x, 0)
    return [pkg.chainmap_of(pkg.chain_space[:, k])
            for k in range(pkg.chain_space.shape[1])]


def _total_matrix(f: ChainMap) -> np.ndarray:
    """Block-diagonal matrix of the expansion over all degrees."""
    fe = f.expand()
    blocks = [fe.map_at(q).total_matrix()
              for q in range(f.src.lo, f.src.hi + 1)]
    n = sum(b.shape[0] for b in blocks)
    out = zeros(n, n)
    at = 0
    for b in blocks:
        out[at:at + b.shape[0], at:at + b.shape[1]] = b
        at += b.shape[0]
    return out


def decompose_complex(x: ProjComplex, seed: int = 0):
    """Indecomposable summands of a complex, with multiplicities.

    Returns a list of (ProjComplex, multiplicity), canonically ordered.
    The input is minimized first; idempotents of the chain endomorphism
    algebra split the minimized complex degreewise.
    """
    alg = x.alg
    xm = minimize(x)
    if xm.is_zero():
        return []
    endos = chain_endos(xm)
    if len(endos) == 1:
        return [(xm, 1)]
    rng = np.random.default_rng(seed)
    mats = [_total_matrix(f) for f in endos]
    idems = primitive_idempotents(mats, alg.p, rng)
    flat = np.column_stack([m.reshape(-1) for m in mats])
    parts = []
    for e_mat in idems:
        coords = solve_right(flat, e_mat.reshape(-1, 1), alg.p)[:, 0]
        e = None
        for c, f in zip(coords, endos):
            if c % alg.p:
                e = f.scale(int(c)) if e is None else e.add(f.scale(int(c)))
        parts.append(_split_off(xm, e))
    groups: list[list] = []
    for part in parts:
        for g in groups:
            ok, _, _ = _indec_iso_k(g[0], part)
            if ok:
                g.append(part)
                break
        else:
            groups.append([part])
    out = [(g[0], len(g)) for g in groups]
    out.sort(key=lambda t: t[0].shape_key())
    return out


def _split_off(x: ProjComplex, e: ChainMap) -> ProjComplex:
    """The summand of x carried by the idempotent chain map e."""
    alg = x.alg
    ee = e.expand()
    xe = x.expansion()
    subs, incls, psums, covers = {}, {}, {}, {}
    for q in x.degrees():
        mq = ee.map_at(q)
        spaces = [column_space(mq.vmaps[v], alg.p) for v in range(alg.n)]
        sub, incl = sub_from_subspaces(xe.term_at(q), spaces)
        ps, cover = projective_cover(sub)
        assert cover.is_iso(), "image of an idempotent failed to be projective"
        subs[q], incls[q], psums[q], covers[q] = sub, incl, ps, cover
    summands = [psums[q].summands for q in x.degrees()]
    dmats = []
    for q in range(x.lo, x.hi):
        d = xe.diff_at(q).after(incls[q])
        dsub = ModuleMap(subs[q], subs[q + 1],
                         [solve_right(incls[q + 1].vmaps[v], d.vmaps[v], alg.p)
                          for v in range(alg.n)])
        inv_next = ModuleMap(subs[q + 1], psums[q + 1].rep,
                             [inv(mm, alg.p) if mm.size else mm.T
                              for mm in covers[q + 1].vmaps])
        big = inv_next.after(dsub.after(covers[q]))
        dmats.append(alg_matrix_of_map(
            ModuleMap(psums[q].rep, psums[q + 1].rep, big.vmaps),
            psums[q], psums[q + 1]))
    return ProjComplex(alg, x.lo, summands, dmats).trim()


def _end_radical(pkg: HomPackage):
    """Radical of End_K(X) in the package's class coordinates.

    Returns (rad_basis, left_mult) where rad_basis has radical classes as
    columns and left_mult maps a class vector to its regular-representation
    matrix.
    """
    cached = getattr(pkg, "_rad_cache", None)
    if cached is not None:
        return cached
    alg = pkg.x.alg
    reps = pkg.chain_reps()
    m = len(reps)
    if alg.p <= m:
        raise FieldTooSmall(f"need p > dim End = {m}")
    lmats = []
    for f in reps:
        cols = [pkg.class_coords(f.compose(g)) for g in reps]
        lmats.append(np.column_stack(cols) if cols else zeros(0, 0))
    gram = zeros(m, m)
    for i in range(m):
        for j in range(m):
            gram[i, j] = int(np.trace(lmats[i] @ lmats[j] % alg.p)) % alg.p
    rad = null_space(gram, alg.p)

    def left_mult(vec: np.ndarray) -> np.ndarray:
        out = zeros(m, m)
        for i in range(m):
            if vec[i] % alg.p:
                out = (out + int(vec[i]) * lmats[i]) % alg.p
        return out

    pkg._rad_cache = (rad, left_mult)
    return rad, left_mult


def _indec_iso_k(x: ProjComplex, y: ProjComplex, want_witness: bool = False):
    """Isomorphism test for minimal complexes with indecomposable x.

    Returns (isomorphic, fwd, bwd); the witnesses are chain maps whose
    composites are homotopic to the identities (computed only on request).
    """
    if x.graded_mults() != y.graded_mults():
        return False, None, None
    pxy = hom_package(x, y, 0)
    pyx = hom_package(y, x, 0)
    if pxy.dim == 0 or pyx.dim == 0:
        return False, None, None
    pe = hom_package(x, x, 0)
    rad, left_mult = _end_radical(pe)
    alg = x.alg
    for f in pxy.chain_reps():
        for g in pyx.chain_reps():
            u = pe.class_coords(g.compose(f))
            if not np.any(u) or in_span(u, rad, alg.p):
                continue
            if not want_witness:
                return True, None, None
            # invert u in End_K(x) and correct g
            ident = pe.class_coords(chain_identity(x))
            uinv = solve_right(left_mult(u), ident.reshape(-1, 1),
                               alg.p)[:, 0]
            reps = pe.chain_reps()
            w = None
            for cval, h in zip(uinv, reps):
                if cval % alg.p:
                    piece = h.scale(int(cval))
                    w = piece if w is None else w.add(piece)
            gc = (w.compose(g) if w is not None
                  else chain_zero(y, x))
            assert pe.is_nullhomotopic(
                gc.compose(f).add(chain_identity(x).scale(-1)))
            pey = hom_package(y, y, 0)
            assert pey.is_nullhomotopic(
                f.compose(gc).add(chain_identity(y).scale(-1)))
            return True, f, gc
    return False, None, None


class IsoResult:
    def __init__(self, verdict: str, reason: str = "", fwd=None, bwd=None):
        assert verdict in ("yes", "no", "unknown")
        self.verdict = verdict
        self.reason = reason
        self.fwd = fwd
        self.bwd = bwd

    def __bool__(self):
        return self.verdict == "yes"

    def __repr__(self):
        return f"IsoResult({self.verdict!r}, {self.reason!r})"


def iso_k(x: ProjComplex, y: ProjComplex, seed: int = 0,
          want_witness: bool = False) -> IsoResult:
    """Decide isomorphism in the homotopy category.

    Minimizes both sides, splits them into indecomposables, and matches
    the summand multisets.
    """
    xm, ym = minimize(x), minimize(y)
    gx, gy = xm.graded_mults(), ym.graded_mults()
    if gx != gy:
        return IsoResult("no", f"graded multiplicities differ: {gx} vs {gy}")
    if xm.is_zero():
        return IsoResult("yes", "both zero")
    try:
        dx = decompose_complex(xm, seed=seed)
        dy = decompose_complex(ym, seed=seed)
    except Exception as exc:  # endomorphism splitting is randomized
        return IsoResult("unknown", f"decomposition failed: {exc}")
    if len(dx) == 1 and dx[0][1] == 1 and len(dy) == 1 and dy[0][1] == 1:
        ok, fwd, bwd = _indec_iso_k(dx[0][0], dy[0][0], want_witness)
        if ok:
            return IsoResult("yes", "indecomposable match", fwd, bwd)
        return IsoResult("no", "non-isomorphic indecomposables")
    remaining = [(c, m) for (c, m) in dy]
    for (cx, mx) in dx:
        hit = None
        for idx, (cy, my) in enumerate(remaining):
            ok, _, _ = _indec_iso_k(cx, cy)
            if ok:
                hit = idx
                break
        if hit is None or remaining[hit][1] != mx:
            return IsoResult("no", "summand multisets differ")
        remaining.pop(hit)
    if remaining:
        return IsoResult("no", "summand multisets differ")
    return IsoResult("yes", "matching summand decompositions")


# -- minimal approximations -------------------------------------------------

def _rad_pair_classes(parts, j, packages, end_pkgs, end_rads):
    """Coordinate spans of the radical composites landing at parts[j]."""
    alg = parts[j].alg
    pj = packages[j]
    total = []
    for l in range(len(parts)):
        if l == j:
            rad, _ = end_rads[j]
            for k in range(rad.shape[1]):
                coords = rad[:, k]
                u = None
                for cval, h in zip(coords, end_pkgs[j].chain_reps()):
                    if cval % alg.p:
                        piece = h.scale(int(cval))
                        u = piece if u is None else u.add(piece)
                if u is None:
                    continue
                for f in packages[j].chain_reps():
                    total.append(pj.class_coords(f.compose(u)))
        else:
            cross = hom_package(parts[j], parts[l], 0)
            for umap in cross.chain_reps():
                for f in packages[l].chain_reps():
                    total.append(pj.class_coords(f.compose(umap)))
    if not total:
        return zeros(pj.dim, 0)
    return column_space(np.column_stack(total), alg.p)


def right_approximation(parts: list[ProjComplex], z: ProjComplex,
                        minimal: bool = True):
    """A right add(parts)-approximation g: E -> Z.

    Returns (E, g, chosen) where chosen lists (part index, component chain
    map).  With minimal=True the approximation covers Hom(-, Z) modulo
    radical composites, summand by summand.
    """
    alg = z.alg
    packages = [hom_package(t, z, 0) for t in parts]
    chosen: list[tuple[int, ChainMap]] = []
    if minimal:
        end_pkgs = [hom_package(t, t, 0) for t in parts]
        end_rads = [_end_radical(pkg) for pkg in end_pkgs]
        for j, t in enumerate(parts):
            pj = packages[j]
            if pj.dim == 0:
                continue
            w = _rad_pair_classes(parts, j, packages, end_pkgs, end_rads)
            for f in pj.chain_reps():
                coords = pj.class_coords(f)
                if in_span(coords, w, alg.p):
                    continue
                chosen.append((j, f))
                orbit = [coords]
                for u in end_pkgs[j].chain_reps():
                    orbit.append(pj.class_coords(f.compose(u)))
                w = span_union(w, np.column_stack(orbit), p=alg.p)
    else:
        for j, t in enumerate(parts):
            for f in packages[j].chain_reps():
                chosen.append((j, f))
    e = proj_direct_sum([parts[j] for j, _ in chosen], alg)
    mats: dict[int, np.ndarray] = {}
    lo = min([z.lo] + [parts[j].lo for j, _ in chosen])
    hi = max([z.hi] + [parts[j].hi for j, _ in chosen])
    for q in range(lo, hi + 1):
        if z.count(q) == 0 or e.count(q) == 0:
            continue
        mats[q] = np.concatenate([f.map_at(q) for _, f in chosen], axis=1)
    g = ChainMap(e, z, mats)
    return e, g, chosen


def left_approximation(parts: list[ProjComplex], z: ProjComplex,
                       minimal: bool = True):
    """A left add(parts)-approximation g: Z -> E; mirror of the right case."""
    alg = z.alg
    packages = [hom_package(z, t, 0) for t in parts]
    chosen: list[tuple[int, ChainMap]] = []
    if minimal:
        end_pkgs = [hom_package(t, t, 0) for t in parts]
        end_rads = [_end_radical(pkg) for pkg in end_pkgs]
        for j, t in enumerate(parts):
            pj = packages[j]
            if pj.dim == 0:
                continue
            w_cols = []
            for l in range(len(parts)):
                if l == j:
                    rad, _ = end_rads[j]
                    for k in range(rad.shape[1]):
                        coords = rad[:, k]
                        u = None
                        for cval, h in zip(coords, end_pkgs[j].chain_reps()):
                            if cval % alg.p:
                                piece = h.scale(int(cval))
                                u = piece if u is None else u.add(piece)
                        if u is None:
                            continue
                        for f in packages[j].chain_reps():
                            w_cols.append(pj.class_coords(u.compose(f)))
                else:
                    cross = hom_package(parts[l], parts[j], 0)
                    for umap in cross.chain_reps():
                        for f in packages[l].chain_reps():
                            w_cols.append(pj.class_coords(umap.compose(f)))
            w = (column_space(np.column_stack(w_cols), alg.p)
                 if w_cols else zeros(pj.dim, 0))
            for f in pj.chain_reps():
                coords = pj.class_coords(f)
                if in_span(coords, w, alg.p):
                    continue
                chosen.append((j, f))
                orbit = [coords]
                for u in end_pkgs[j].chain_reps():
                    orbit.append(pj.class_coords(u.compose(f)))
                w = span_union(w, np.column_stack(orbit), p=alg.p)
    else:
        for j, t in enumerate(parts):
            for f in packages[j].chain_reps():
                chosen.append((j, f))
    e = proj_direct_sum([parts[j] for j, _ in chosen], alg)
    mats: dict[int, np.ndarray] = {}
    lo = min([z.lo] + [parts[j].lo for j, _ in chosen])
    hi = max([z.hi] + [parts[j].hi for j, _ in chosen])
    for q in range(lo, hi + 1):
        if z.count(q) == 0 or e.count(q) == 0:
            continue
        mats[q] = np.concatenate([f.map_at(q) for _, f in chosen], axis=0)
    g = ChainMap(z, e, mats)
    return e, g, chosen


# -- silting mutation -------------------------------------------------------

def left_mutation(cluster: list[ProjComplex], k: int, d: int,
                  seed: int = 0) -> list[ProjComplex]:
    """Replace cluster[k] by the cone over its minimal left approximation.

    Raises WindowViolation when the mutated summand leaves the degree
    window [-d, 0].
    """
    rest = [c for i, c in enumerate(cluster) if i != k]
    e, g, _ = left_approximation(rest, cluster[k], minimal=True)
    new = minimize(proj_cone(g))
    return rest + _window_checked_parts(new, d, seed)


def right_mutation(cluster: list[ProjComplex], k: int, d: int,
                   seed: int = 0) -> list[ProjComplex]:
    """Replace cluster[k] by the cocone over its minimal right approximation."""
    rest = [c for i, c in enumerate(cluster) if i != k]
    e, g, _ = right_approximation(rest, cluster[k], minimal=True)
    new = minimize(proj_cone(g).shift(-1))
    return rest + _window_checked_parts(new, d, seed)


def _window_checked_parts(x: ProjComplex, d: int, seed: int):
    if x.is_zero():
        raise WindowViolation("mutation produced a zero summand")
    if x.lo < -d or x.hi > 0:
        raise WindowViolation(
            f"mutated summand lives in [{x.lo}, {x.hi}], outside [-{d}, 0]")
    return [c for c, mult in decompose_complex(x, seed=seed)
            for _ in range(mult)]
