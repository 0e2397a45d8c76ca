"""Hochschild cohomology and homology of a basic algebra.

Cohomology (and cohomology with bimodule coefficients) is the cohomology
of Hom over the vertex subalgebra E of the relative tensor powers of the
radical, i.e. of Hom_{A-bimod}(B_*, M) for the relative bar resolution
B_*.  Homology uses the cyclic E-coinvariant chain complex directly.

Truncated *absolute* bar complexes are implemented as independent oracles;
they share nothing with the relative route except the exact rank kernel.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import Algebra
from .complexes import (ModuleHomComplex, bar_resolution, FieldComplex,
                        module_complex_single, projective_resolution,
                        radical_tuples)
from .linalg import FieldSpec, Matrix
from .modules import ModuleRep, dual_bimodule, regular_bimodule, simple_module


@dataclass(frozen=True)
class HHProfile:
    """Graded dimension vector, certified for degrees 0..bound."""
    dims: tuple
    field: FieldSpec
    bound: int
    note: str = ""

    @staticmethod
    def from_dict(d, field, bound, note=""):
        dims = tuple(d.get(n, 0) for n in range(bound + 1))
        return HHProfile(dims, field, bound, note)

    def dim(self, n):
        if 0 <= n <= self.bound:
            return self.dims[n]
        raise IndexError(f"degree {n} not certified (bound {self.bound})")

    def as_tuple(self, upto=None):
        if upto is None:
            return self.dims
        return tuple(self.dims[n] for n in range(upto + 1))

    def total(self):
        return sum(self.dims)

    def __str__(self):
        s = ", ".join(str(d) for d in self.dims)
        return f"({s})" + (f"  [{self.note}]" if self.note else "")


def global_dimension(A: Algebra, cap: int):
    """Global dimension, or None if it exceeds cap.

    Computed as the maximum length of the minimal projective resolutions
    of the simple modules."""
    worst = 0
    for v in range(A.num_vertices):
        res = projective_resolution(simple_module(A, v), cap + 1)
        length = -min(res.terms)
        if length > cap:
            return None
        worst = max(worst, length)
    return worst


def _finiteness_note(A: Algebra, n_max: int) -> str:
    gd = global_dimension(A, n_max)
    if gd is not None:
        return (f"global dimension {gd}: degrees above {gd} vanish "
                "(theorem-based extrapolation, not computed)")
    return ""


def hh_with_coefficients(A: Algebra, M: ModuleRep, n_max: int,
                         note="") -> HHProfile:
    """Ext_{A-bimod}(A, M) in degrees 0..n_max via the relative bar
    resolution."""
    assert M.algebra is A.enveloping()
    bar = bar_resolution(A, n_max + 1)
    prof = ModuleHomComplex(bar, module_complex_single(M)).ext_profile()
    return HHProfile.from_dict(prof, A.field, n_max, note)


def hh_cohomology(A: Algebra, n_max: int) -> HHProfile:
    return hh_with_coefficients(A, regular_bimodule(A), n_max,
                                note=_finiteness_note(A, n_max))


def homology_via_serre_dual(A: Algebra, n_max: int) -> HHProfile:
    """Ext_{A-bimod}(A, DA): the maps-into-the-Serre-kernel route to
    Hochschild homology (dimensions only)."""
    return hh_with_coefficients(A, dual_bimodule(A), n_max)


def _cyclic_basis(A: Algebra, n: int):
    """Basis of the cyclic E-coinvariants of A (x)_E rad^{(x)_E n}:
    pairs (a0, tuple) with src(a0) = tgt(r_1) and tgt(a0) = src(r_n)."""
    out = []
    if n == 0:
        for a0 in range(A.dim):
            if A.src[a0] == A.tgt[a0]:
                out.append((a0, ()))
        return out
    for t in radical_tuples(A, n):
        v, w = A.tgt[t[0]], A.src[t[-1]]
        for a0 in range(A.dim):
            if A.src[a0] == v and A.tgt[a0] == w:
                out.append((a0, t))
    return out


def hh_homology(A: Algebra, n_max: int) -> HHProfile:
    """Hochschild homology from the relative cyclic chain complex
    C_n = (A (x)_E rad^{(x)_E n}) / [E, -]."""
    f = A.field
    note = _finiteness_note(A, n_max)
    bases = {n: _cyclic_basis(A, n) for n in range(n_max + 2)}
    pos = {n: {b: i for i, b in enumerate(bs)} for n, bs in bases.items()}
    boundaries = {}
    for n in range(1, n_max + 2):
        if not bases[n]:
            break
        entries = {}
        tgt_pos = pos[n - 1]
        for col, (a0, t) in enumerate(bases[n]):
            # i = 0: absorb r_1 into the A slot
            for s, c in A.mult[a0][t[0]].items():
                r = tgt_pos.get((s, t[1:]))
                if r is not None:
                    entries[(r, col)] = f.add(entries.get((r, col), f.zero), c)
            # 0 < i < n: contract adjacent radical slots
            for i in range(1, n):
                sign = f.one if i % 2 == 0 else f.neg(f.one)
                for s, c in A.mult[t[i - 1]][t[i]].items():
                    t2 = t[:i - 1] + (s,) + t[i + 1:]
                    r = tgt_pos.get((a0, t2))
                    if r is not None:
                        entries[(r, col)] = f.add(entries.get((r, col), f.zero),
                                                  f.mul(sign, c))
            # i = n: wrap r_n around to the left of the A slot
            sign = f.one if n % 2 == 0 else f.neg(f.one)
            for s, c in A.mult[t[-1]][a0].items():
                r = tgt_pos.get((s, t[:-1]))
                if r is not None:
                    entries[(r, col)] = f.add(entries.get((r, col), f.zero),
                                              f.mul(sign, c))
        boundaries[n] = Matrix.from_entries(f, len(bases[n - 1]), len(bases[n]),
                                            entries)
    from .linalg import rank
    ranks = {n: rank(m) for n, m in boundaries.items()}
    dims = {}
    for n in range(n_max + 1):
        d = len(bases.get(n, ())) - ranks.get(n, 0) - ranks.get(n + 1, 0)
        if d:
            dims[n] = d
    return HHProfile.from_dict(dims, f, n_max, note)


# ---------------------------------------------------------------------------
# Truncated absolute bar oracles (independent computations for cross-checks)


def _pair_expansions(A: Algebra):
    """For each basis element k, the list of (p, q, c) with  p*q ∋ c·k."""
    table = {k: [] for k in range(A.dim)}
    for p in range(A.dim):
        for q in range(A.dim):
            for k, c in A.mult[p][q].items():
                table[k].append((p, q, c))
    return table


def absolute_hh_cohomology(A: Algebra, n_max: int) -> HHProfile:
    """Cohomology of the truncated absolute bar cochain complex
    C^n = Hom_k(A^{(x) n}, A)."""
    f = A.field
    expansions = _pair_expansions(A)

    def tuples(n):
        out = [()]
        for _ in range(n):
            out = [t + (x,) for t in out for x in range(A.dim)]
        return out

    bases = {}
    pos = {}
    for n in range(n_max + 2):
        bs = [(t, s) for t in tuples(n) for s in range(A.dim)]
        bases[n] = bs
        pos[n] = {b: i for i, b in enumerate(bs)}
    mats = {}
    for n in range(n_max + 1):
        entries = {}
        tgt_pos = pos[n + 1]
        for col, (t, s) in enumerate(bases[n]):
            # x . phi(...) for a fresh first argument x
            for x in range(A.dim):
                for s2, c in A.mult[x][s].items():
                    r = tgt_pos[((x,) + t, s2)]
                    entries[(r, col)] = f.add(entries.get((r, col), f.zero), c)
            # phi(.. a_i a_{i+1} ..) with (a_i, a_{i+1}) expanding slot i
            for i in range(n):
                sign = f.neg(f.one) if i % 2 == 0 else f.one   # (-1)^{i+1}
                for (p, q, c) in expansions[t[i]]:
                    t2 = t[:i] + (p, q) + t[i + 1:]
                    r = tgt_pos[(t2, s)]
                    entries[(r, col)] = f.add(entries.get((r, col), f.zero),
                                              f.mul(sign, c))
            # (-1)^{n+1} phi(...) . y for a fresh last argument y
            sign = f.one if (n + 1) % 2 == 0 else f.neg(f.one)
            for y in range(A.dim):
                for s2, c in A.mult[s][y].items():
                    r = tgt_pos[(t + (y,), s2)]
                    entries[(r, col)] = f.add(entries.get((r, col), f.zero),
                                              f.mul(sign, c))
        mats[n] = Matrix.from_entries(f, len(bases[n + 1]), len(bases[n]), entries)
    dims = {n: len(bases[n]) for n in range(n_max + 2)}
    prof = FieldComplex(f, dims, mats).homology_dims()
    return HHProfile.from_dict(prof, f, n_max)


def absolute_hh_homology(A: Algebra, n_max: int) -> HHProfile:
    """Homology of the truncated absolute bar chain complex
    C_n = A^{(x) n+1}."""
    f = A.field

    def tuples(n):
        out = [()]
        for _ in range(n):
            out = [t + (x,) for t in out for x in range(A.dim)]
        return out

    bases = {n: tuples(n + 1) for n in range(n_max + 2)}
    pos = {n: {b: i for i, b in enumerate(bs)} for n, bs in bases.items()}
    boundaries = {}
    for n in range(1, n_max + 2):
        entries = {}
        tgt_pos = pos[n - 1]
        for col, t in enumerate(bases[n]):
            for i in range(n):
                sign = f.one if i % 2 == 0 else f.neg(f.one)
                for s, c in A.mult[t[i]][t[i + 1]].items():
                    t2 = t[:i] + (s,) + t[i + 2:]
                    r = tgt_pos[t2]
                    entries[(r, col)] = f.add(entries.get((r, col), f.zero),
                                              f.mul(sign, c))
            sign = f.one if n % 2 == 0 else f.neg(f.one)
            for s, c in A.mult[t[-1]][t[0]].items():
                t2 = (s,) + t[1:-1]
                r = tgt_pos[t2]
                entries[(r, col)] = f.add(entries.get((r, col), f.zero),
                                          f.mul(sign, c))
        boundaries[n] = Matrix.from_entries(f, len(bases[n - 1]), len(bases[n]),
                                            entries)
    from .linalg import rank
    ranks = {n: rank(m) for n, m in boundaries.items()}
    dims = {}
    for n in range(n_max + 1):
        d = len(bases[n]) - ranks.get(n, 0) - ranks.get(n + 1, 0)
        if d:
            dims[n] = d
    return HHProfile.from_dict(dims, f, n_max)
