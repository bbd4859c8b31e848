"""Cochain complexes of quiver representations.

Complexes are stored on a finite window of degrees with differentials
raising degree by one.  Everything here works at the level of honest
representations; the projective / homotopy-category layer builds on top.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import BoundQuiverAlgebra
from .linalg import column_space, solve_right, zeros
from .repcat import (
    ModuleMap,
    Representation,
    direct_sum,
    identity_map,
    image,
    kernel,
    quotient_by_subspaces,
    zero_map,
    zero_rep,
)


class RepComplex:
    """A bounded cochain complex of representations.

    ``terms[k]`` sits in degree ``lo + k``; ``diffs[k]`` maps
    ``terms[k] -> terms[k + 1]``.
    """

    def __init__(self, alg: BoundQuiverAlgebra, lo: int,
                 terms: list[Representation], diffs: list[ModuleMap]):
        if len(diffs) != max(len(terms) - 1, 0):
            raise ValueError("need exactly len(terms) - 1 differentials")
        self.alg = alg
        self.lo = int(lo)
        self.terms = list(terms)
        self.diffs = list(diffs)

    @property
    def hi(self) -> int:
        return self.lo + len(self.terms) - 1

    @property
    def total_dim(self) -> int:
        return sum(t.total_dim for t in self.terms)

    def is_zero(self) -> bool:
        return all(t.is_zero() for t in self.terms)

    def degrees(self) -> range:
        return range(self.lo, self.lo + len(self.terms))

    def term_at(self, q: int) -> Representation:
        if self.lo <= q <= self.hi:
            return self.terms[q - self.lo]
        return zero_rep(self.alg)

    def diff_at(self, q: int) -> ModuleMap:
        """The differential leaving degree q (zero map outside the window)."""
        if self.lo <= q < self.hi:
            return self.diffs[q - self.lo]
        return zero_map(self.term_at(q), self.term_at(q + 1))

    def validate(self) -> None:
        for k, d in enumerate(self.diffs):
            assert d.src is self.terms[k] and d.tgt is self.terms[k + 1]
            d.validate()
        for k in range(len(self.diffs) - 1):
            assert self.diffs[k + 1].after(self.diffs[k]).is_zero(), \
                f"d^2 != 0 leaving degree {self.lo + k}"

    def shift(self, s: int) -> "RepComplex":
        """X[s], with (X[s])^q = X^(q+s) and differentials scaled by (-1)^s."""
        sign = 1 if s % 2 == 0 else -1
        diffs = [d.scale(sign) for d in self.diffs]
        return RepComplex(self.alg, self.lo - s, list(self.terms), diffs)

    def pad(self, lo: int, hi: int) -> "RepComplex":
        """The same complex on an enlarged window, padded with zero terms."""
        if lo > self.lo or hi < self.hi:
            raise ValueError("pad window must contain the current window")
        terms = [self.term_at(q) for q in range(lo, hi + 1)]
        diffs = [self.diff_at(q) for q in range(lo, hi)]
        # reuse the padded terms so identity checks in validate() hold
        for k in range(hi - lo):
            diffs[k] = ModuleMap(terms[k], terms[k + 1], diffs[k].vmaps)
        return RepComplex(self.alg, lo, terms, diffs)

    def trim(self) -> "RepComplex":
        """Drop zero terms at both ends of the window."""
        k0, k1 = 0, len(self.terms)
        while k0 < k1 and self.terms[k0].is_zero():
            k0 += 1
        while k1 > k0 and self.terms[k1 - 1].is_zero():
            k1 -= 1
        if k0 == k1:
            return RepComplex(self.alg, 0, [zero_rep(self.alg)], [])
        return RepComplex(self.alg, self.lo + k0,
                          self.terms[k0:k1], self.diffs[k0:k1 - 1])

    def graded_dims(self) -> dict[int, tuple[int, ...]]:
        return {q: self.term_at(q).dims for q in self.degrees()
                if not self.term_at(q).is_zero()}


def stalk_complex(m: Representation, degree: int = 0) -> RepComplex:
    return RepComplex(m.alg, degree, [m], [])


def _block_diag_map(f: ModuleMap, g: ModuleMap,
                    src: Representation, tgt: Representation) -> ModuleMap:
    alg = f.src.alg
    vmaps = []
    for v in range(alg.n):
        blk = zeros(tgt.dims[v], src.dims[v])
        r0, c0 = f.tgt.dims[v], f.src.dims[v]
        blk[:r0, :c0] = f.vmaps[v]
        blk[r0:, c0:] = g.vmaps[v]
        vmaps.append(blk)
    return ModuleMap(src, tgt, vmaps)


def complex_direct_sum(x: RepComplex, y: RepComplex) -> RepComplex:
    alg = x.alg
    lo, hi = min(x.lo, y.lo), max(x.hi, y.hi)
    xs, ys = x.pad(lo, hi), y.pad(lo, hi)
    terms = [direct_sum([xs.terms[k], ys.terms[k]], alg)
             for k in range(len(xs.terms))]
    diffs = [_block_diag_map(xs.diffs[k], ys.diffs[k], terms[k], terms[k + 1])
             for k in range(len(xs.diffs))]
    return RepComplex(alg, lo, terms, diffs)


class ComplexMap:
    """A degreewise map of complexes commuting with the differentials."""

    def __init__(self, src: RepComplex, tgt: RepComplex,
                 maps: dict[int, ModuleMap]):
        self.src = src
        self.tgt = tgt
        self.maps = dict(maps)

    def map_at(self, q: int) -> ModuleMap:
        if q in self.maps:
            return self.maps[q]
        return zero_map(self.src.term_at(q), self.tgt.term_at(q))

    def validate(self) -> None:
        for q, f in self.maps.items():
            assert f.src is self.src.term_at(q) and f.tgt is self.tgt.term_at(q)
            f.validate()
        for q in range(min(self.src.lo, self.tgt.lo) - 1,
                       max(self.src.hi, self.tgt.hi) + 1):
            lhs = self.map_at(q + 1).after(self.src.diff_at(q))
            rhs = self.tgt.diff_at(q).after(self.map_at(q))
            assert lhs.add(rhs.neg()).is_zero(), f"not a chain map at degree {q}"


def complex_cone(f: ComplexMap) -> RepComplex:
    """cone(f)^q = X^(q+1) + Y^q with d(x, y) = (-dx, f(x) + dy)."""
    alg = f.src.alg
    x, y = f.src, f.tgt
    lo = min(x.lo - 1, y.lo)
    hi = max(x.hi - 1, y.hi)
    terms = [direct_sum([x.term_at(q + 1), y.term_at(q)], alg)
             for q in range(lo, hi + 1)]
    diffs = []
    for q in range(lo, hi):
        src, tgt = terms[q - lo], terms[q + 1 - lo]
        dx, dy = x.diff_at(q + 1), y.diff_at(q)
        fq = f.map_at(q + 1)
        vmaps = []
        for v in range(alg.n):
            blk = zeros(tgt.dims[v], src.dims[v])
            r0 = x.term_at(q + 2).dims[v]
            c0 = x.term_at(q + 1).dims[v]
            blk[:r0, :c0] = (-dx.vmaps[v]) % alg.p
            blk[r0:, :c0] = fq.vmaps[v]
            blk[r0:, c0:] = dy.vmaps[v]
            vmaps.append(blk)
        diffs.append(ModuleMap(src, tgt, vmaps))
    return RepComplex(alg, lo, terms, diffs)


def complex_cocone(f: ComplexMap) -> RepComplex:
    return complex_cone(f).shift(-1)


@dataclass
class HomologyData:
    homology: Representation
    cycles: Representation
    cycles_incl: ModuleMap      # cycles -> C^q
    proj: list[np.ndarray]      # vertexwise projection cycles -> homology
    secs: list[np.ndarray]      # vertexwise sections homology -> cycles


def homology_data(c: RepComplex, q: int) -> HomologyData:
    alg = c.alg
    term = c.term_at(q)
    if c.lo <= q < c.hi:
        cyc, incl = kernel(c.diff_at(q))
    else:
        cyc, incl = term, identity_map(term)
    if c.lo < q <= c.hi:
        img, img_incl = image(c.diff_at(q - 1))
        # factor the image through the cycles
        gmaps = [solve_right(incl.vmaps[v], img_incl.vmaps[v], alg.p)
                 for v in range(alg.n)]
        g = ModuleMap(img, cyc, gmaps)
        h, pi, secs = _coker_of(g)
    else:
        h, pi, secs = _coker_of(zero_map(zero_rep(alg), cyc))
    return HomologyData(h, cyc, incl, pi.vmaps, secs)


def _coker_of(g: ModuleMap):
    alg = g.src.alg
    subs = [column_space(g.vmaps[v], alg.p) for v in range(alg.n)]
    return quotient_by_subspaces(g.tgt, subs)


def homology_at(c: RepComplex, q: int) -> Representation:
    return homology_data(c, q).homology


def homology_dims(c: RepComplex) -> dict[int, tuple[int, ...]]:
    out = {}
    for q in range(c.lo, c.hi + 1):
        h = homology_at(c, q)
        if not h.is_zero():
            out[q] = h.dims
    return out


def truncate_above(c: RepComplex, qmax: int) -> RepComplex:
    """Smart truncation keeping homology in degrees <= qmax.

    The degree-qmax term is replaced by the kernel of the outgoing
    differential.
    """
    alg = c.alg
    if qmax >= c.hi:
        return c
    if qmax < c.lo:
        return RepComplex(alg, qmax, [zero_rep(alg)], [])
    z, incl = kernel(c.diff_at(qmax))
    terms = [c.term_at(q) for q in range(c.lo, qmax)] + [z]
    diffs = [c.diff_at(q) for q in range(c.lo, qmax - 1)]
    if qmax > c.lo:
        d = c.diff_at(qmax - 1)
        co = [solve_right(incl.vmaps[v], d.vmaps[v], alg.p)
              for v in range(alg.n)]
        diffs.append(ModuleMap(terms[-2], z, co))
    return RepComplex(alg, c.lo, terms, diffs)


def truncate_below(c: RepComplex, qmin: int) -> RepComplex:
    """Smart truncation keeping homology in degrees >= qmin.

    The degree-qmin term is replaced by the cokernel of the incoming
    differential.
    """
    alg = c.alg
    if qmin <= c.lo:
        return c
    if qmin > c.hi:
        return RepComplex(alg, qmin, [zero_rep(alg)], [])
    q0, pi, secs = _coker_of(c.diff_at(qmin - 1))
    terms = [q0] + [c.term_at(q) for q in range(qmin + 1, c.hi + 1)]
    diffs = []
    if qmin < c.hi:
        d = c.diff_at(qmin)
        # induced map on the cokernel: well defined since d^2 = 0
        vmaps = [(d.vmaps[v] @ secs[v]) % alg.p for v in range(alg.n)]
        diffs.append(ModuleMap(q0, terms[1], vmaps))
        diffs.extend(c.diff_at(q) for q in range(qmin + 1, c.hi))
    return RepComplex(alg, qmin, terms, diffs)


def brutal_below(c: RepComplex, qmin: int) -> RepComplex:
    """Throw away all terms in degrees < qmin."""
    if qmin <= c.lo:
        return c
    if qmin > c.hi:
        return RepComplex(c.alg, qmin, [zero_rep(c.alg)], [])
    k = qmin - c.lo
    return RepComplex(c.alg, qmin, c.terms[k:], c.diffs[k:])
