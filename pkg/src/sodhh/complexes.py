"""Bounded complexes of projective modules and bimodules.

Grading is cohomological with differentials of degree +1; homological
objects live in negative degrees.  A ProjComplex over an algebra L has
terms that are finite direct sums of the indecomposable projectives L e_v;
bimodule complexes are ProjComplexes over the enveloping algebra A (x)
A^op, whose indecomposable projectives are the A e_v (x) e_w A.

Differential entries are algebra elements: the component from a summand
L e_v to a summand L e_w is an element x of e_v L e_w acting by right
multiplication y |-> y x.  Composites therefore multiply left-to-right:
"first a, then c" is the element a*c.

Sign conventions used throughout:
  shift       (X[s])^n = X^{n+s},  d_{X[s]} = (-1)^s d_X
  cone(f)     C^n = Y^n (+) X^{n+1},  d(y, x) = (d_Y y + f x, -d_X x)
  Hom         (d phi)_n = d_Y . phi - (-1)^n phi . d_X
  tensor      d(x (x) y) = dx (x) y + (-1)^{deg x} x (x) dy
  dual        entries transposed, scaled by (-1)^m at source degree m
"""

from __future__ import annotations

from .algebra import Algebra, LinearSolver, SubspaceReducer
from .linalg import ColumnEchelon, Matrix, rank


class SideMismatch(ValueError):
    """Complexes or modules with incompatible module structures."""


def _elem_mul(alg, x, y):
    return alg.multiply(x, y)


def _elem_add_into(field, acc, vec, scale):
    for k, v in vec.items():
        s = field.add(acc.get(k, field.zero), field.mul(scale, v))
        if s:
            acc[k] = s
        elif k in acc:
            del acc[k]


class ProjComplex:
    """Bounded complex of projective left L-modules, L basic."""

    def __init__(self, algebra: Algebra, terms, diffs, check=True):
        self.algebra = algebra
        self.terms = {n: tuple(t) for n, t in terms.items() if t}
        self.diffs = {}
        for n, d in diffs.items():
            if n in self.terms and (n + 1) in self.terms:
                self.diffs[n] = d
        self._cache = {}
        if check:
            self._validate()

    def _validate(self):
        alg = self.algebra
        for n, d in self.diffs.items():
            src_s, tgt_s = self.terms[n], self.terms[n + 1]
            assert len(d) == len(tgt_s) and all(len(row) == len(src_s) for row in d)
            for i, row in enumerate(d):
                for j, x in enumerate(row):
                    for k in x:
                        assert alg.tgt[k] == src_s[j] and alg.src[k] == tgt_s[i], \
                            f"entry not in e_v L e_w slice at degree {n}"
        for n in self.diffs:
            if (n + 1) not in self.diffs:
                continue
            d0, d1 = self.diffs[n], self.diffs[n + 1]
            for h in range(len(self.terms[n + 2])):
                for j in range(len(self.terms[n])):
                    acc = {}
                    for i in range(len(self.terms[n + 1])):
                        x = d0[i][j]
                        y = d1[h][i]
                        if x and y:
                            prod = alg.multiply(x, y)
                            for k, v in prod.items():
                                s = alg.field.add(acc.get(k, alg.field.zero), v)
                                if s:
                                    acc[k] = s
                                else:
                                    del acc[k]
                    assert not acc, f"d^2 != 0 at degree {n}"

    # -- structure -----------------------------------------------------------

    def degrees(self):
        return sorted(self.terms)

    def is_zero(self):
        return not self.terms

    def diff(self, n):
        if n in self.diffs:
            return self.diffs[n]
        src = self.terms.get(n, ())
        tgt = self.terms.get(n + 1, ())
        return [[{} for _ in src] for _ in tgt]

    def multiplicity_data(self):
        """Per-degree multiset of projective summands; the isomorphism
        proxy for minimal complexes."""
        out = {}
        for n, t in sorted(self.terms.items()):
            counts = {}
            for v in t:
                counts[v] = counts.get(v, 0) + 1
            out[n] = tuple(sorted(counts.items()))
        return out

    def euler_class(self):
        """K_0 class: alternating sum of summand multiplicities, as a dict
        vertex -> integer."""
        out = {}
        for n, t in self.terms.items():
            s = 1 if n % 2 == 0 else -1
            for v in t:
                out[v] = out.get(v, 0) + s
        return {v: c for v, c in out.items() if c}

    # -- constructions --------------------------------------------------------

    def shift(self, s: int) -> "ProjComplex":
        terms = {n - s: t for n, t in self.terms.items()}
        sign = 1 if s % 2 == 0 else -1
        diffs = {}
        for n, d in self.diffs.items():
            diffs[n - s] = [[self.algebra.scale(x, sign) for x in row] for row in d]
        return ProjComplex(self.algebra, terms, diffs, check=False)

    def realize(self):
        """Underlying complex of vector spaces (a FieldComplex)."""
        if "realize" in self._cache:
            return self._cache["realize"]
        alg = self.algebra
        f = alg.field
        bases = {}
        for n, t in self.terms.items():
            basis = []
            for s, v in enumerate(t):
                for k in alg.column_indices(v):
                    basis.append((s, k))
            bases[n] = basis
        dims = {n: len(b) for n, b in bases.items()}
        diffs = {}
        for n, d in self.diffs.items():
            src_b = bases[n]
            tgt_pos = {(s, k): i for i, (s, k) in enumerate(bases[n + 1])}
            entries = {}
            for col, (j, y) in enumerate(src_b):
                for i, row in enumerate(d):
                    x = row[j]
                    if not x:
                        continue
                    prod = alg.multiply({y: f.one}, x)
                    for k, v in prod.items():
                        entries[(tgt_pos[(i, k)], col)] = v
            diffs[n] = Matrix.from_entries(f, dims.get(n + 1, 0), dims[n], entries)
        fc = FieldComplex(f, dims, diffs)
        self._cache["realize"] = fc
        self._cache["realize_bases"] = bases
        return fc

    def realize_bases(self):
        self.realize()
        return self._cache["realize_bases"]

    def homology_dims(self):
        return self.realize().homology_dims()


def zero_complex(algebra) -> ProjComplex:
    return ProjComplex(algebra, {}, {}, check=False)


def single_projective(algebra, v, degree=0) -> ProjComplex:
    return ProjComplex(algebra, {degree: (v,)}, {}, check=False)


def direct_sum(complexes) -> ProjComplex:
    complexes = list(complexes)
    assert complexes
    alg = complexes[0].algebra
    terms = {}
    offsets = []  # per complex: degree -> summand offset
    for c in complexes:
        assert c.algebra is alg
        offs = {}
        for n, t in c.terms.items():
            offs[n] = len(terms.get(n, ()))
            terms[n] = tuple(terms.get(n, ())) + t
        offsets.append(offs)
    diffs = {}
    for n in {n for c in complexes for n in c.diffs}:
        tgt = terms[n + 1]
        src = terms[n]
        d = [[{} for _ in src] for _ in tgt]
        for c, offs in zip(complexes, offsets):
            if n not in c.diffs:
                continue
            oi, oj = offs[n + 1], offs[n]
            for i, row in enumerate(c.diffs[n]):
                for j, x in enumerate(row):
                    if x:
                        d[oi + i][oj + j] = dict(x)
        diffs[n] = d
    return ProjComplex(alg, terms, diffs, check=False), offsets


class ChainMap:
    """Degreewise map of ProjComplexes commuting with the differentials."""

    def __init__(self, source: ProjComplex, target: ProjComplex, mats, check=True):
        self.source = source
        self.target = target
        self.mats = {n: m for n, m in mats.items()
                     if n in source.terms and n in target.terms}
        if check:
            self._validate()

    def component(self, n):
        if n in self.mats:
            return self.mats[n]
        return [[{} for _ in self.source.terms.get(n, ())]
                for _ in self.target.terms.get(n, ())]

    def _validate(self):
        alg = self.source.algebra
        f = alg.field
        for n, m in self.mats.items():
            src_s = self.source.terms[n]
            tgt_s = self.target.terms[n]
            assert len(m) == len(tgt_s) and all(len(r) == len(src_s) for r in m)
            for i, row in enumerate(m):
                for j, x in enumerate(row):
                    for k in x:
                        assert alg.tgt[k] == src_s[j] and alg.src[k] == tgt_s[i]
        degs = (set(self.source.diffs) | set(self.target.diffs)
                | set(self.mats) | {n - 1 for n in self.mats})
        for n in degs:
            # f then d_Y  ==  d_X then f
            fm = self.component(n)
            fm1 = self.component(n + 1)
            dX = self.source.diff(n)
            dY = self.target.diff(n)
            nt = len(self.target.terms.get(n + 1, ()))
            ns = len(self.source.terms.get(n, ()))
            for h in range(nt):
                for j in range(ns):
                    acc = {}
                    for i in range(len(self.target.terms.get(n, ()))):
                        if fm[i][j] and dY[h][i]:
                            _elem_add_into(f, acc, alg.multiply(fm[i][j], dY[h][i]), f.one)
                    for i in range(len(self.source.terms.get(n + 1, ()))):
                        if dX[i][j] and fm1[h][i]:
                            _elem_add_into(f, acc, alg.multiply(dX[i][j], fm1[h][i]),
                                           f.neg(f.one))
                    assert not acc, f"chain map does not commute at degree {n}"


def cone(f: ChainMap) -> ProjComplex:
    X, Y = f.source, f.target
    alg = X.algebra
    degs = set(Y.terms) | {n - 1 for n in X.terms}
    terms = {}
    for n in degs:
        terms[n] = tuple(Y.terms.get(n, ())) + tuple(X.terms.get(n + 1, ()))
    diffs = {}
    for n in degs:
        if (n + 1) not in degs:
            continue
        ny, nx = len(Y.terms.get(n, ())), len(X.terms.get(n + 1, ()))
        ny1, nx1 = len(Y.terms.get(n + 1, ())), len(X.terms.get(n + 2, ()))
        if ny + nx == 0 or ny1 + nx1 == 0:
            continue
        d = [[{} for _ in range(ny + nx)] for _ in range(ny1 + nx1)]
        dY = Y.diff(n)
        for i in range(ny1):
            for j in range(ny):
                if dY[i][j]:
                    d[i][j] = dict(dY[i][j])
        fm = f.component(n + 1)
        for i in range(ny1):
            for j in range(nx):
                if fm[i][j]:
                    d[i][ny + j] = dict(fm[i][j])
        dX = X.diff(n + 1)
        for i in range(nx1):
            for j in range(nx):
                if dX[i][j]:
                    d[ny1 + i][ny + j] = alg.scale(dX[i][j], -1)
        diffs[n] = d
    return ProjComplex(alg, terms, diffs, check=False)


def dualize(X: ProjComplex) -> ProjComplex:
    """Termwise Hom(-, L): left projective complexes become right ones
    (complexes over the opposite algebra) and degrees are negated."""
    op = X.algebra.opposite()
    terms = {-n: t for n, t in X.terms.items()}
    diffs = {}
    for m, d in X.diffs.items():
        # dual differential: (X^{m+1})^v -> (X^m)^v at dual degree -m-1
        sign = 1 if m % 2 == 0 else -1
        src_s = X.terms[m + 1]
        tgt_s = X.terms[m]
        dd = [[X.algebra.scale(d[j][i], sign) for j in range(len(src_s))]
              for i in range(len(tgt_s))]
        diffs[-m - 1] = dd
    return ProjComplex(op, terms, diffs, check=False)


class FieldComplex:
    """Bounded complex of finite-dimensional vector spaces."""

    def __init__(self, field, dims, diffs, check=False):
        self.field = field
        self.dims = {n: d for n, d in dims.items() if d}
        self.diffs = {}
        for n, m in diffs.items():
            if self.dims.get(n) and self.dims.get(n + 1):
                self.diffs[n] = m
        if check:
            for n, m in self.diffs.items():
                if (n + 1) in self.diffs:
                    assert self.diffs[n + 1].mul(m).is_zero(), f"d^2 != 0 at {n}"

    def diff(self, n):
        if n in self.diffs:
            return self.diffs[n]
        return Matrix.zeros(self.field, self.dims.get(n + 1, 0), self.dims.get(n, 0))

    def homology_dims(self):
        ranks = {n: rank(m) for n, m in self.diffs.items()}
        out = {}
        for n, d in self.dims.items():
            h = d - ranks.get(n, 0) - ranks.get(n - 1, 0)
            if h:
                out[n] = h
        return out

    def total_dim(self):
        return sum(self.dims.values())


class ModuleComplex:
    """Bounded complex of (not necessarily projective) modules over L."""

    def __init__(self, algebra, modules, diffs, check=True):
        self.algebra = algebra
        self.modules = {n: m for n, m in modules.items() if m.dim}
        self.diffs = {n: d for n, d in diffs.items()
                      if n in self.modules and (n + 1) in self.modules}
        if check:
            for n, d in self.diffs.items():
                if (n + 1) in self.diffs:
                    assert self.diffs[n + 1].mul(d).is_zero()
                for i in range(algebra.dim):
                    lhs = d.mul(self.modules[n].action[i])
                    rhs = self.modules[n + 1].action[i].mul(d)
                    assert lhs == rhs, "differential is not L-linear"

    def diff(self, n):
        if n in self.diffs:
            return self.diffs[n]
        nr = self.modules[n + 1].dim if (n + 1) in self.modules else 0
        nc = self.modules[n].dim if n in self.modules else 0
        return Matrix.zeros(self.algebra.field, nr, nc)


# ---------------------------------------------------------------------------
# Hom complexes


class HomComplex:
    """Total Hom complex between two ProjComplexes over the same algebra.

    Basis cochains in degree n are (source degree i, source summand,
    target summand, slice basis element) with the component living in
    Hom(L e_v, L e_w) = e_v L e_w.
    """

    def __init__(self, X: ProjComplex, Y: ProjComplex):
        if X.algebra is not Y.algebra:
            raise SideMismatch("Hom requires complexes over the same algebra")
        self.X, self.Y = X, Y
        alg = X.algebra
        f = alg.field
        self.basis = {}
        slice_cache = {}

        def slc(v, w):
            if (v, w) not in slice_cache:
                slice_cache[(v, w)] = alg.slice_indices(v, w)
            return slice_cache[(v, w)]

        degs = set()
        for i in X.terms:
            for j in Y.terms:
                degs.add(j - i)
        for n in degs:
            basis = []
            for i in sorted(X.terms):
                if (i + n) not in Y.terms:
                    continue
                for sX, v in enumerate(X.terms[i]):
                    for sY, w in enumerate(Y.terms[i + n]):
                        # component L e_v -> L e_w is e_v L e_w,
                        # i.e. tgt(t) = v and src(t) = w
                        for t in slc(v, w):
                            basis.append((i, sX, sY, t))
            if basis:
                self.basis[n] = basis
        self.dims = {n: len(b) for n, b in self.basis.items()}
        self.pos = {n: {b: k for k, b in enumerate(bs)}
                    for n, bs in self.basis.items()}
        self.mats = {}
        for n in self.basis:
            if (n + 1) in self.basis:
                self.mats[n] = self._differential(n)
        self._field = f

    def _differential(self, n):
        alg = self.X.algebra
        f = alg.field
        sign = f.one if n % 2 == 0 else f.neg(f.one)
        tgt_pos = self.pos.get(n + 1, {})
        entries = {}
        for col, (i, sX, sY, t) in enumerate(self.basis[n]):
            # d_Y . phi : apply phi (element t), then the Y differential
            dY = self.Y.diff(i + n)
            for i2, row in enumerate(dY):
                u = row[sY]
                if u:
                    prod = alg.multiply({t: f.one}, u)
                    for k, v in prod.items():
                        r = tgt_pos.get((i, sX, i2, k))
                        if r is not None:
                            entries[(r, col)] = f.add(
                                entries.get((r, col), f.zero), v)
            # -(-1)^n phi . d_X : apply d_X, then phi
            dX = self.X.diff(i - 1)
            if self.X.terms.get(i - 1):
                for j2 in range(len(self.X.terms[i - 1])):
                    a = dX[sX][j2]
                    if a:
                        prod = alg.multiply(a, {t: f.one})
                        for k, v in prod.items():
                            r = tgt_pos.get((i - 1, j2, sY, k))
                            if r is not None:
                                entries[(r, col)] = f.sub(
                                    entries.get((r, col), f.zero), f.mul(sign, v))
        m = Matrix.from_entries(f, self.dims.get(n + 1, 0), self.dims[n], entries)
        return m

    def field_complex(self) -> FieldComplex:
        return FieldComplex(self._field, dict(self.dims), dict(self.mats))

    def ext_profile(self):
        return self.field_complex().homology_dims()

    def cocycle_representatives(self, n):
        """Vectors over the degree-n basis lifting a basis of H^n."""
        f = self._field
        if n not in self.basis:
            return []
        dn = self.mats.get(n)
        if dn is None:
            dn = Matrix.zeros(f, self.dims.get(n + 1, 0), self.dims[n])
        ech = ColumnEchelon(dn)
        kernel = ech.kernel_basis()
        red = SubspaceReducer(f, self.dims[n])
        prev = self.mats.get(n - 1)
        if prev is not None:
            for c in prev.cols:
                if c:
                    red.add(c)
        return [k for k in kernel if red.add(k)]

    def cochain_to_chainmap(self, vec, n) -> ChainMap:
        """A degree-n cocycle as a chain map X[-n] -> Y."""
        src = self.X.shift(-n)
        mats = {}
        for pos, c in vec.items():
            i, sX, sY, t = self.basis[n][pos]
            m = i + n  # degree in X[-n] where the component sits
            if m not in mats:
                mats[m] = [[{} for _ in src.terms[m]] for _ in self.Y.terms[m]]
            _elem_add_into(self._field, mats[m][sY][sX], {t: c}, self._field.one)
        return ChainMap(src, self.Y, mats)


def hom_complex(X, Y) -> HomComplex:
    return HomComplex(X, Y)


def ext_profile(X, Y):
    return HomComplex(X, Y).ext_profile()


class ModuleHomComplex:
    """Hom complex from a ProjComplex into a ModuleComplex.

    Hom(L e_v, M) is the graded block e_v M; basis cochains in degree n
    are (source degree, source summand, module basis position).
    """

    def __init__(self, X: ProjComplex, Ycx: ModuleComplex):
        assert X.algebra is Ycx.algebra
        alg = X.algebra
        f = alg.field
        self.X, self.Y = X, Ycx
        self.basis = {}
        for n in {j - i for i in X.terms for j in Ycx.modules}:
            basis = []
            for i in sorted(X.terms):
                M = Ycx.modules.get(i + n)
                if M is None:
                    continue
                for sX, v in enumerate(X.terms[i]):
                    for m in range(M.dim):
                        if M.grading[m] == v:
                            basis.append((i, sX, m))
            if basis:
                self.basis[n] = basis
        self.dims = {n: len(b) for n, b in self.basis.items()}
        self.pos = {n: {b: k for k, b in enumerate(bs)}
                    for n, bs in self.basis.items()}
        self.mats = {}
        for n in self.basis:
            if (n + 1) in self.basis:
                self.mats[n] = self._differential(n)
        self._field = f

    def _differential(self, n):
        alg = self.X.algebra
        f = alg.field
        sign = f.one if n % 2 == 0 else f.neg(f.one)
        tgt_pos = self.pos.get(n + 1, {})
        entries = {}
        for col, (i, sX, m) in enumerate(self.basis[n]):
            dM = self.Y.diffs.get(i + n)
            if dM is not None:
                for m2, v in dM.cols[m].items():
                    r = tgt_pos.get((i, sX, m2))
                    if r is not None:
                        entries[(r, col)] = f.add(entries.get((r, col), f.zero), v)
            if self.X.terms.get(i - 1):
                dX = self.X.diff(i - 1)
                M = self.Y.modules[i + n]
                for j2 in range(len(self.X.terms[i - 1])):
                    a = dX[sX][j2]
                    if not a:
                        continue
                    img = {}
                    for k, c in a.items():
                        _elem_add_into(f, img, M.action[k].cols[m], c)
                    for m2, v in img.items():
                        r = tgt_pos.get((i - 1, j2, m2))
                        if r is not None:
                            entries[(r, col)] = f.sub(
                                entries.get((r, col), f.zero), f.mul(sign, v))
        return Matrix.from_entries(f, self.dims.get(n + 1, 0), self.dims[n], entries)

    def ext_profile(self):
        return FieldComplex(self._field, dict(self.dims), dict(self.mats)).homology_dims()


def ext_profile_module(X: ProjComplex, Y) -> dict:
    if isinstance(Y, ModuleComplex):
        return ModuleHomComplex(X, Y).ext_profile()
    return ModuleHomComplex(X, module_complex_single(Y)).ext_profile()


def module_complex_single(M, degree=0) -> ModuleComplex:
    return ModuleComplex(M.algebra, {degree: M}, {}, check=False)


# ---------------------------------------------------------------------------
# Minimalization


def minimalize(X: ProjComplex) -> ProjComplex:
    """Strip contractible two-term summands until every differential entry
    lies in the radical.  Minimal perfect complexes are unique up to
    isomorphism, so the result's multiplicity data identifies X."""
    alg = X.algebra
    f = alg.field
    terms = {n: list(t) for n, t in X.terms.items()}
    diffs = {n: [[dict(x) for x in row] for row in X.diff(n)]
             for n in X.diffs}

    def find_unit():
        for n, d in diffs.items():
            for i, row in enumerate(d):
                v_tgt = terms[n + 1][i]
                for j, x in enumerate(row):
                    if terms[n][j] == v_tgt and x.get(alg.idempotents[v_tgt]):
                        return n, i, j
        return None

    while True:
        hit = find_unit()
        if hit is None:
            break
        n, i, j = hit
        d = diffs[n]
        v = terms[n][j]
        u = alg.local_inverse(d[i][j], v)
        # d' = delta - gamma . u . beta  on the remaining summands
        for i2 in range(len(terms[n + 1])):
            if i2 == i:
                continue
            gamma = d[i2][j]
            if not gamma:
                continue
            for j2 in range(len(terms[n])):
                if j2 == j:
                    continue
                beta = d[i][j2]
                if not beta:
                    continue
                corr = alg.multiply(alg.multiply(beta, u), gamma)
                _elem_add_into(f, d[i2][j2], corr, f.neg(f.one))
        # drop source summand j of term n and target summand i of term n+1
        for row in d:
            del row[j]
        del diffs[n][i]
        if (n - 1) in diffs:
            del diffs[n - 1][j]
        if (n + 1) in diffs:
            for row in diffs[n + 1]:
                del row[i]
        del terms[n][j]
        del terms[n + 1][i]

    clean_terms = {n: tuple(t) for n, t in terms.items() if t}
    clean_diffs = {n: d for n, d in diffs.items()
                   if n in clean_terms and (n + 1) in clean_terms}
    return ProjComplex(alg, clean_terms, clean_diffs, check=False)


# ---------------------------------------------------------------------------
# Tensor products over the base algebra A


def _env_pair(env):
    b, c = env._pair
    return b, c


def _decode_env_vertex(env, pos):
    b, c = env._pair
    return divmod(pos, c.num_vertices)


def _encode_env_vertex(env, v, w):
    b, c = env._pair
    return v * c.num_vertices + w


def _decode_env_elem(env, x):
    """Split an enveloping-algebra element into (a_idx, b_idx, coeff) terms."""
    b, c = env._pair
    return [(k // c.dim, k % c.dim, v) for k, v in x.items()]


def tensor_env_env(P: ProjComplex, Q: ProjComplex) -> ProjComplex:
    """Convolution of bimodule complexes: P (x)_A Q, both over env(A)."""
    env = P.algebra
    assert Q.algebra is env
    A, _ = _env_pair(env)
    f = A.field
    summands = {}  # degree -> list of (p, s1, s2, mu)
    for p, t1 in P.terms.items():
        for q, t2 in Q.terms.items():
            n = p + q
            lst = summands.setdefault(n, [])
            for s1, pos1 in enumerate(t1):
                v, w = _decode_env_vertex(env, pos1)
                for s2, pos2 in enumerate(t2):
                    v2, w2 = _decode_env_vertex(env, pos2)
                    for mu in A.slice_indices(w, v2):
                        lst.append((p, s1, s2, mu))
    terms = {}
    pos_index = {}
    for n, lst in summands.items():
        labels = []
        for p, s1, s2, mu in lst:
            v, _ = _decode_env_vertex(env, P.terms[p][s1])
            _, w2 = _decode_env_vertex(env, Q.terms[n - p][s2])
            labels.append(_encode_env_vertex(env, v, w2))
        terms[n] = tuple(labels)
        pos_index[n] = {key: i for i, key in enumerate(lst)}
    diffs = {}
    for n in terms:
        if (n + 1) not in terms:
            continue
        d = [[{} for _ in summands[n]] for _ in summands[n + 1]]
        tgt_pos = pos_index[n + 1]
        for col, (p, s1, s2, mu) in enumerate(summands[n]):
            q = n - p
            # d_P (x) id
            if p in P.diffs:
                for i1, row in enumerate(P.diffs[p]):
                    x = row[s1]
                    if not x:
                        continue
                    for (a, bidx, cf) in _decode_env_elem(env, x):
                        # new middle: y . mu ; outer entry x (x) e_{w2}
                        newmid = A.multiply({bidx: f.one}, {mu: f.one})
                        for mu2, cmid in newmid.items():
                            r = tgt_pos.get((p + 1, i1, s2, mu2))
                            if r is None:
                                continue
                            _, w2 = _decode_env_vertex(env, Q.terms[q][s2])
                            ekey = A.pair_index(a, A.idempotents[w2])
                            _elem_add_into(f, d[r][col], {ekey: f.mul(cf, cmid)}, f.one)
            # (-1)^p id (x) d_Q
            if q in Q.diffs:
                sign = f.one if p % 2 == 0 else f.neg(f.one)
                for i2, row in enumerate(Q.diffs[q]):
                    x = row[s2]
                    if not x:
                        continue
                    for (a, bidx, cf) in _decode_env_elem(env, x):
                        newmid = A.multiply({mu: f.one}, {a: f.one})
                        for mu2, cmid in newmid.items():
                            r = tgt_pos.get((p, s1, i2, mu2))
                            if r is None:
                                continue
                            v, _ = _decode_env_vertex(env, P.terms[p][s1])
                            ekey = A.pair_index(A.idempotents[v], bidx)
                            _elem_add_into(f, d[r][col],
                                           {ekey: f.mul(sign, f.mul(cf, cmid))}, f.one)
        diffs[n] = d
    return ProjComplex(env, terms, diffs, check=False)


def tensor_env_left(P: ProjComplex, X: ProjComplex) -> ProjComplex:
    """Apply a bimodule complex to a left-module complex: P (x)_A X."""
    env = P.algebra
    A = X.algebra
    if _env_pair(env)[0] is not A:
        raise SideMismatch("bimodule complex does not act on this algebra's "
                           "left modules")
    f = A.field
    summands = {}
    for p, t1 in P.terms.items():
        for q, t2 in X.terms.items():
            lst = summands.setdefault(p + q, [])
            for s1, pos1 in enumerate(t1):
                v, w = _decode_env_vertex(env, pos1)
                for s2, u in enumerate(t2):
                    for mu in A.slice_indices(w, u):
                        lst.append((p, s1, s2, mu))
    terms = {}
    pos_index = {}
    for n, lst in summands.items():
        labels = []
        for p, s1, s2, mu in lst:
            v, _ = _decode_env_vertex(env, P.terms[p][s1])
            labels.append(v)
        terms[n] = tuple(labels)
        pos_index[n] = {key: i for i, key in enumerate(lst)}
    diffs = {}
    for n in terms:
        if (n + 1) not in terms:
            continue
        d = [[{} for _ in summands[n]] for _ in summands[n + 1]]
        tgt_pos = pos_index[n + 1]
        for col, (p, s1, s2, mu) in enumerate(summands[n]):
            q = n - p
            if p in P.diffs:
                for i1, row in enumerate(P.diffs[p]):
                    x = row[s1]
                    for (a, bidx, cf) in _decode_env_elem(env, x):
                        newmid = A.multiply({bidx: f.one}, {mu: f.one})
                        for mu2, cmid in newmid.items():
                            r = tgt_pos.get((p + 1, i1, s2, mu2))
                            if r is not None:
                                _elem_add_into(f, d[r][col], {a: f.mul(cf, cmid)}, f.one)
            if q in X.diffs:
                sign = f.one if p % 2 == 0 else f.neg(f.one)
                for i2, row in enumerate(X.diffs[q]):
                    x = row[s2]
                    if not x:
                        continue
                    newmid = A.multiply({mu: f.one}, x)
                    for mu2, cmid in newmid.items():
                        r = tgt_pos.get((p, s1, i2, mu2))
                        if r is not None:
                            v, _ = _decode_env_vertex(env, P.terms[p][s1])
                            ekey = A.idempotents[v]
                            _elem_add_into(f, d[r][col],
                                           {ekey: f.mul(sign, cmid)}, f.one)
        diffs[n] = d
    return ProjComplex(A, terms, diffs, check=False)


def tensor_right_left(F: ProjComplex, G: ProjComplex) -> FieldComplex:
    """Contraction of a right-module complex with a left-module complex:
    F (x)_A G, a complex of plain vector spaces.  F lives over op(A)."""
    A = G.algebra
    if F.algebra is not A.opposite():
        raise SideMismatch("contraction needs a right complex against a "
                           "left complex over the same algebra")
    f = A.field
    slots = {}
    for p, t1 in F.terms.items():
        for q, t2 in G.terms.items():
            lst = slots.setdefault(p + q, [])
            for s1, v in enumerate(t1):
                for s2, u in enumerate(t2):
                    for mu in A.slice_indices(v, u):
                        lst.append((p, s1, s2, mu))
    pos_index = {n: {key: i for i, key in enumerate(lst)} for n, lst in slots.items()}
    dims = {n: len(lst) for n, lst in slots.items()}
    diffs = {}
    for n in slots:
        if (n + 1) not in slots:
            continue
        entries = {}
        tgt_pos = pos_index[n + 1]
        for col, (p, s1, s2, mu) in enumerate(slots[n]):
            q = n - p
            if p in F.diffs:
                for i1, row in enumerate(F.diffs[p]):
                    z = row[s1]
                    if not z:
                        continue
                    img = A.multiply(z, {mu: f.one})  # left multiplication in A
                    for mu2, c in img.items():
                        r = tgt_pos.get((p + 1, i1, s2, mu2))
                        if r is not None:
                            entries[(r, col)] = f.add(entries.get((r, col), f.zero), c)
            if q in G.diffs:
                sign = f.one if p % 2 == 0 else f.neg(f.one)
                for i2, row in enumerate(G.diffs[q]):
                    x = row[s2]
                    if not x:
                        continue
                    img = A.multiply({mu: f.one}, x)
                    for mu2, c in img.items():
                        r = tgt_pos.get((p, s1, i2, mu2))
                        if r is not None:
                            entries[(r, col)] = f.add(entries.get((r, col), f.zero),
                                                      f.mul(sign, c))
        diffs[n] = Matrix.from_entries(f, dims.get(n + 1, 0), dims[n], entries)
    return FieldComplex(f, dims, diffs)


def _decode_grading(env, code):
    _, c = env._pair
    return divmod(code, c.num_vertices)


def tensor_env_module(P: ProjComplex, M) -> ModuleComplex:
    """P (x)_A M for a bimodule complex P and a single bimodule M: the
    termwise twist (A e_v (x) e_w A) (x)_A M = A e_v (x) e_w M.  Used to
    convolve kernels with the Serre kernel DA."""
    from .modules import ModuleRep
    env = P.algebra
    A, _ = _env_pair(env)
    f = A.field
    blocks = {}   # degree -> list of (summand, a, m) basis
    pos = {}
    mods = {}
    for p, t in P.terms.items():
        basis = []
        grading = []
        for s, code in enumerate(t):
            v, w = _decode_env_vertex(env, code)
            for a in A.column_indices(v):
                for m in range(M.dim):
                    if _decode_grading(env, M.grading[m])[0] == w:
                        basis.append((s, a, m))
                        grading.append(_encode_env_vertex(
                            env, A.tgt[a], _decode_grading(env, M.grading[m])[1]))
        blocks[p] = basis
        pos[p] = {b: i for i, b in enumerate(basis)}
        if not basis:
            continue
        action = []
        for i in range(A.dim):
            for j in range(A.dim):
                cols = []
                for (s, a, m) in basis:
                    col = {}
                    for a2, c1 in A.mult[i][a].items():
                        for m2, c2 in M.action[A.pair_index(
                                A.idempotents[_decode_grading(env, M.grading[m])[0]], j)].cols[m].items():
                            r = pos[p].get((s, a2, m2))
                            if r is not None:
                                col[r] = f.add(col.get(r, f.zero), f.mul(c1, c2))
                    cols.append({k: v for k, v in col.items() if v})
                action.append(Matrix(f, len(basis), len(basis), cols))
        mods[p] = ModuleRep(env, len(basis), action, tuple(grading), check=False)
    diffs = {}
    for p in P.diffs:
        if p not in mods or (p + 1) not in mods:
            continue
        entries = {}
        tgt_pos = pos[p + 1]
        for col, (s, a, m) in enumerate(blocks[p]):
            for i1, row in enumerate(P.diffs[p]):
                x = row[s]
                if not x:
                    continue
                w = _decode_grading(env, M.grading[m])[0]
                for (xi, yi, cf) in _decode_env_elem(env, x):
                    prod = A.multiply({a: f.one}, {xi: f.one})
                    # left action of y on e_w M
                    yact = M.action[A.pair_index(yi, A.idempotents[
                        _decode_grading(env, M.grading[m])[1]])].cols[m]
                    for a2, c1 in prod.items():
                        for m2, c2 in yact.items():
                            r = tgt_pos.get((i1, a2, m2))
                            if r is not None:
                                key = (r, col)
                                entries[key] = f.add(entries.get(key, f.zero),
                                                     f.mul(cf, f.mul(c1, c2)))
        diffs[p] = Matrix.from_entries(
            f, len(blocks[p + 1]), len(blocks[p]), entries)
    return ModuleComplex(env, mods, diffs, check=False)


def serre_twist_left(X: ProjComplex) -> ModuleComplex:
    """DA (x)_A X for a left-module complex X: the Serre functor applied
    termwise (DA (x)_A A e_v = D(e_v A), which is injective, not
    projective)."""
    from .modules import ModuleRep
    A = X.algebra
    f = A.field
    blocks = {}
    pos = {}
    mods = {}
    for q, t in X.terms.items():
        basis = []
        grading = []
        for s, v in enumerate(t):
            for p in range(A.dim):
                if A.tgt[p] == v:   # duals of e_v A
                    basis.append((s, p))
                    grading.append(A.src[p])
        blocks[q] = basis
        pos[q] = {b: i for i, b in enumerate(basis)}
        if not basis:
            continue
        action = []
        for i in range(A.dim):
            cols = []
            for (s, p) in basis:
                # (b_i . p*)(x) = p*(x b_i)
                col = {}
                for x in range(A.dim):
                    c = A.mult[x][i].get(p)
                    if c:
                        r = pos[q].get((s, x))
                        if r is not None:
                            col[r] = c
                cols.append(col)
            action.append(Matrix(f, len(basis), len(basis), cols))
        mods[q] = ModuleRep(A, len(basis), action, tuple(grading), check=False)
    diffs = {}
    for q in X.diffs:
        if q not in mods or (q + 1) not in mods:
            continue
        entries = {}
        tgt_pos = pos[q + 1]
        for col, (s, p) in enumerate(blocks[q]):
            for i1, row in enumerate(X.diffs[q]):
                x = row[s]
                if not x:
                    continue
                # induced map g -> g . x on duals: (g.x)(z) = g(x z)
                for xi, cf in x.items():
                    for z in range(A.dim):
                        c = A.mult[xi][z].get(p)
                        if c:
                            r = tgt_pos.get((i1, z))
                            if r is not None:
                                key = (r, col)
                                entries[key] = f.add(entries.get(key, f.zero),
                                                     f.mul(cf, c))
        diffs[q] = Matrix.from_entries(f, len(blocks[q + 1]), len(blocks[q]), entries)
    return ModuleComplex(A, mods, diffs, check=False)


def tensor_right_module_complex(F: ProjComplex, Ycx: ModuleComplex) -> FieldComplex:
    """F (x)_A M for a right-module complex F (over op(A)) and a complex of
    left modules: termwise e_v A (x)_A M = e_v M."""
    A = Ycx.algebra
    assert F.algebra is A.opposite()
    f = A.field
    slots = {}
    for p, t in F.terms.items():
        for q, M in Ycx.modules.items():
            lst = slots.setdefault(p + q, [])
            for s1, v in enumerate(t):
                for m in range(M.dim):
                    if M.grading[m] == v:
                        lst.append((p, s1, m))
    pos_index = {n: {key: i for i, key in enumerate(lst)} for n, lst in slots.items()}
    dims = {n: len(lst) for n, lst in slots.items()}
    diffs = {}
    for n in slots:
        if (n + 1) not in slots:
            continue
        entries = {}
        tgt_pos = pos_index[n + 1]
        for col, (p, s1, m) in enumerate(slots[n]):
            q = n - p
            M = Ycx.modules[q]
            if p in F.diffs:
                for i1, row in enumerate(F.diffs[p]):
                    z = row[s1]
                    if not z:
                        continue
                    img = {}
                    for zi, c in z.items():
                        _elem_add_into(f, img, M.action[zi].cols[m], c)
                    for m2, c in img.items():
                        r = tgt_pos.get((p + 1, i1, m2))
                        if r is not None:
                            entries[(r, col)] = f.add(entries.get((r, col), f.zero), c)
            dM = Ycx.diffs.get(q)
            if dM is not None:
                sign = f.one if p % 2 == 0 else f.neg(f.one)
                for m2, c in dM.cols[m].items():
                    r = tgt_pos.get((p, s1, m2))
                    if r is not None:
                        entries[(r, col)] = f.add(entries.get((r, col), f.zero),
                                                  f.mul(sign, c))
        diffs[n] = Matrix.from_entries(f, dims.get(n + 1, 0), dims[n], entries)
    return FieldComplex(f, dims, diffs)


def tensor_module_with_field_complex(Ycx: ModuleComplex, W: FieldComplex) -> ModuleComplex:
    """Termwise M (x)_k W for a module complex and a vector-space complex."""
    from .modules import ModuleRep
    alg = Ycx.algebra
    f = alg.field
    blocks = {}
    pos = {}
    mods = {}
    for p, M in Ycx.modules.items():
        for q, d in W.dims.items():
            n = p + q
            lst = blocks.setdefault(n, [])
            for m in range(M.dim):
                for r in range(d):
                    lst.append((p, m, r))
    for n, lst in blocks.items():
        pos[n] = {b: i for i, b in enumerate(lst)}
        grading = [Ycx.modules[p].grading[m] for (p, m, r) in lst]
        action = []
        for i in range(alg.dim):
            cols = []
            for (p, m, r) in lst:
                col = {}
                for m2, c in Ycx.modules[p].action[i].cols[m].items():
                    col[pos[n][(p, m2, r)]] = c
                cols.append(col)
            action.append(Matrix(f, len(lst), len(lst), cols))
        mods[n] = ModuleRep(alg, len(lst), action, tuple(grading), check=False)
    diffs = {}
    for n in blocks:
        if (n + 1) not in blocks:
            continue
        entries = {}
        tgt_pos = pos[n + 1]
        for col, (p, m, r) in enumerate(blocks[n]):
            q = n - p
            dM = Ycx.diffs.get(p)
            if dM is not None:
                for m2, c in dM.cols[m].items():
                    rr = tgt_pos.get((p + 1, m2, r))
                    if rr is not None:
                        entries[(rr, col)] = f.add(entries.get((rr, col), f.zero), c)
            dW = W.diffs.get(q)
            if dW is not None:
                sign = f.one if p % 2 == 0 else f.neg(f.one)
                for r2, c in dW.cols[r].items():
                    rr = tgt_pos.get((p, m, r2))
                    if rr is not None:
                        entries[(rr, col)] = f.add(entries.get((rr, col), f.zero),
                                                   f.mul(sign, c))
        diffs[n] = Matrix.from_entries(f, len(blocks[n + 1]), len(blocks[n]), entries)
    return ModuleComplex(alg, mods, diffs, check=False)


def tensor_proj_with_field_complex(X: ProjComplex, W: FieldComplex) -> ProjComplex:
    """Termwise X (x)_k W; summands of X are repeated per basis slot of W."""
    alg = X.algebra
    f = alg.field
    summands = {}
    for p, t in X.terms.items():
        for q, d in W.dims.items():
            lst = summands.setdefault(p + q, [])
            for s, v in enumerate(t):
                for r in range(d):
                    lst.append((p, s, r))
    terms = {n: tuple(X.terms[p][s] for (p, s, r) in lst)
             for n, lst in summands.items()}
    pos = {n: {b: i for i, b in enumerate(lst)} for n, lst in summands.items()}
    diffs = {}
    for n in terms:
        if (n + 1) not in terms:
            continue
        d = [[{} for _ in summands[n]] for _ in summands[n + 1]]
        tgt_pos = pos[n + 1]
        for col, (p, s, r) in enumerate(summands[n]):
            q = n - p
            if p in X.diffs:
                for i1, row in enumerate(X.diffs[p]):
                    x = row[s]
                    if x:
                        rr = tgt_pos.get((p + 1, i1, r))
                        if rr is not None:
                            _elem_add_into(f, d[rr][col], x, f.one)
            dW = W.diffs.get(q)
            if dW is not None:
                sign = f.one if p % 2 == 0 else f.neg(f.one)
                v = X.terms[p][s]
                for r2, c in dW.cols[r].items():
                    rr = tgt_pos.get((p, s, r2))
                    if rr is not None:
                        _elem_add_into(f, d[rr][col],
                                       {alg.idempotents[v]: f.mul(sign, c)}, f.one)
        diffs[n] = d
    return ProjComplex(alg, terms, diffs, check=False)


# ---------------------------------------------------------------------------
# Relative bar resolution


def radical_tuples(A: Algebra, n: int):
    """Composable n-tuples of radical basis elements, adjacency
    src(r_i) = tgt(r_{i+1}) (function order, leftmost applied last)."""
    if n == 0:
        return [()]
    rad = A.radical_indices()
    tuples = [(r,) for r in rad]
    for _ in range(n - 1):
        tuples = [t + (r,) for t in tuples for r in rad if A.src[t[-1]] == A.tgt[r]]
        if not tuples:
            break
    return tuples if tuples and len(tuples[0]) == n else []


def bar_resolution(A: Algebra, n_max: int) -> ProjComplex:
    """Relative bar resolution of the diagonal bimodule over the vertex
    subalgebra: B_n = A (x)_E rad^{(x)_E n} (x)_E A in degree -n."""
    env = A.enveloping()
    f = A.field
    tuples = {n: radical_tuples(A, n) for n in range(n_max + 1)}
    terms = {}
    pos = {}
    for n in range(n_max + 1):
        tl = tuples[n]
        if n > 0 and not tl:
            break
        labels = []
        index = {}
        if n == 0:
            for v in range(A.num_vertices):
                index[("v", v)] = len(labels)
                labels.append(_encode_env_vertex(env, v, v))
        else:
            for t in tl:
                v = A.tgt[t[0]]
                w = A.src[t[-1]]
                index[t] = len(labels)
                labels.append(_encode_env_vertex(env, v, w))
        terms[-n] = tuple(labels)
        pos[n] = index
    diffs = {}
    for n in range(1, n_max + 1):
        if -n not in terms:
            break
        src_list = tuples[n]
        d = [[{} for _ in terms[-n]] for _ in terms[-n + 1]]
        for t in src_list:
            col = pos[n][t]
            v = A.tgt[t[0]]
            w = A.src[t[-1]]
            # i = 0: slide r_1 into the left A slot; entry r_1 (x) e_w
            head = t[0]
            key = ("v", A.src[head]) if n == 1 else t[1:]
            r = pos[n - 1][key]
            _elem_add_into(f, d[r][col],
                           {A.pair_index(head, A.idempotents[w]): f.one}, f.one)
            # 0 < i < n: contract adjacent radical slots; entry e_v (x) e_w
            for i in range(1, n):
                prod = A.mult[t[i - 1]][t[i]]
                sign = f.one if i % 2 == 0 else f.neg(f.one)
                for s, c in prod.items():
                    assert s not in A._idem_set  # rad is an ideal
                    t2 = t[:i - 1] + (s,) + t[i + 1:]
                    r2 = pos[n - 1][t2]
                    ekey2 = A.pair_index(A.idempotents[v], A.idempotents[w])
                    _elem_add_into(f, d[r2][col], {ekey2: f.mul(sign, c)}, f.one)
            # i = n: slide r_n into the right A slot; entry e_v (x) r_n
            tail = t[-1]
            key3 = ("v", A.tgt[tail]) if n == 1 else t[:-1]
            r3 = pos[n - 1][key3]
            sign = f.one if n % 2 == 0 else f.neg(f.one)
            _elem_add_into(f, d[r3][col],
                           {A.pair_index(A.idempotents[v], tail): sign}, f.one)
        diffs[-n] = d
    return ProjComplex(env, terms, diffs, check=True)


def bar_augmentation_matrix(A: Algebra, bar: ProjComplex) -> Matrix:
    """Multiplication map realize(B_0) -> A."""
    env = A.enveloping()
    f = A.field
    bases = bar.realize_bases()[0]
    entries = {}
    for col, (s, k) in enumerate(bases):
        i, j = divmod(k, A.dim)
        prod = A.mult[i][j]
        for t, c in prod.items():
            entries[(t, col)] = f.add(entries.get((t, col), f.zero), c)
    return Matrix.from_entries(f, A.dim, len(bases), entries)


# ---------------------------------------------------------------------------
# Minimal projective resolutions of modules


def projective_resolution(M, length: int) -> ProjComplex:
    """Minimal projective resolution of a module, in degrees -length..0.

    Stops early once a syzygy vanishes; the result then resolves M exactly.
    Generators are lifted along graded complements of rad . M, so the
    differentials land in the radical (the resolution is minimal).
    """
    from .modules import ModuleRep
    alg = M.algebra
    f = alg.field
    terms = {}
    diffs = {}
    current = M
    embed = None        # current basis -> realize(P_{step-1}) coordinates
    prev_cover_basis = None
    for step in range(length + 1):
        if current.dim == 0:
            break
        # generators: a graded complement of rad . current
        red = SubspaceReducer(f, current.dim)
        for r in alg.radical_indices():
            for col in current.action[r].cols:
                if col:
                    red.add(col)
        gens = [(current.grading[m], m) for m in range(current.dim)
                if red.add({m: f.one})]
        terms[-step] = tuple(v for v, _ in gens)
        if embed is not None:
            d = [[{} for _ in gens] for _ in terms[-step + 1]]
            for s, (v, m) in enumerate(gens):
                for colpos, c in embed[m].items():
                    s0, y = prev_cover_basis[colpos]
                    _elem_add_into(f, d[s0][s], {y: c}, f.one)
            diffs[-step] = d
        # cover map realize(P_step) -> current
        cover_cols = []
        cover_basis = []
        for s, (v, m) in enumerate(gens):
            for y in alg.column_indices(v):
                cover_cols.append(dict(current.action[y].cols[m]))
                cover_basis.append((s, y))
        cover_pos = {sy: i for i, sy in enumerate(cover_basis)}
        cover = Matrix(f, current.dim, len(cover_cols), cover_cols)
        kernel_vecs = ColumnEchelon(cover).kernel_basis()
        if not kernel_vecs:
            break
        # syzygy module: basis = kernel vectors, action by solving back
        solver = LinearSolver(Matrix(f, len(cover_cols), len(kernel_vecs),
                                     kernel_vecs))
        grading = []
        for kv in kernel_vecs:
            vv = {alg.tgt[cover_basis[c][1]] for c in kv}
            assert len(vv) == 1, "kernel basis not graded"
            grading.append(vv.pop())
        action = []
        for b in range(alg.dim):
            cols = []
            for kv in kernel_vecs:
                img: dict = {}
                for colpos, c in kv.items():
                    s0, y = cover_basis[colpos]
                    for y2, c2 in alg.multiply({b: f.one}, {y: f.one}).items():
                        ip = cover_pos[(s0, y2)]
                        s2 = f.add(img.get(ip, f.zero), f.mul(c, c2))
                        if s2:
                            img[ip] = s2
                        elif ip in img:
                            del img[ip]
                sol = solver.solve(img)
                assert sol is not None, "kernel is not action-invariant"
                cols.append(sol)
            action.append(Matrix(f, len(kernel_vecs), len(kernel_vecs), cols))
        current = ModuleRep(alg, len(kernel_vecs), action, tuple(grading),
                            check=False)
        embed = kernel_vecs
        prev_cover_basis = cover_basis
    return ProjComplex(alg, terms, diffs, check=True)
