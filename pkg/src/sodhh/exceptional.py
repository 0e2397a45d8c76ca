"""Exceptional collections, mutations, dual collections and projection
towers in the perfect derived category of a basic algebra.

Objects are bounded complexes of projective left modules, always kept in
minimal form.  Derived isomorphism is certified up to equality of minimal
multiplicity data plus Ext tables against the simple modules; minimal
perfect complexes are unique up to isomorphism, so multiplicity equality
is sound, and the probe tables guard against differential mismatch.

Left and right mutations are the object-level cone formulas
    L_E F = cone(ev : Hom*(E, F) (x) E -> F)
    R_E F = cone(coev : F -> Hom*(F, E)* (x) E)[-1]
assembled from explicit cocycle bases of the Hom complexes.
"""

from __future__ import annotations

from .algebra import Algebra, PathAlgebra, algebra_from_structure
from .complexes import (ChainMap, ProjComplex, cone, direct_sum,
                        ext_profile, ext_profile_module, hom_complex,
                        minimalize, module_complex_single, single_projective)
from .modules import simple_module


class MutationFailed(RuntimeError):
    """A mutated collection failed re-verification (an implementation bug:
    mutations always preserve exceptionality)."""


class NotStrong(ValueError):
    """Ext between collection members is not concentrated in degree 0."""


class NotFull(ValueError):
    """An object has no nonzero component in any ⟨E_i⟩ yet is nonzero."""


def probe_tables(X: ProjComplex):
    """Ext tables of X against every simple module (sorted, hashable)."""
    A = X.algebra
    out = []
    for v in range(A.num_vertices):
        prof = ext_profile_module(X, module_complex_single(simple_module(A, v)))
        out.append(tuple(sorted(prof.items())))
    return tuple(out)


def minimal_data(X: ProjComplex):
    """The isomorphism proxy: (multiplicity data, simple-probe Ext tables)."""
    m = minimalize(X)
    return (tuple(sorted(m.multiplicity_data().items())), probe_tables(m))


def same_object(X: ProjComplex, Y: ProjComplex) -> bool:
    return minimal_data(X) == minimal_data(Y)


def compose_chainmaps(first: ChainMap, second: ChainMap) -> ChainMap:
    """first : X -> Y, second : Y -> Z, composite X -> Z."""
    X, Y, Z = first.source, first.target, second.target
    alg = X.algebra
    f = alg.field
    mats = {}
    for n in set(first.mats) | set(second.mats):
        if n not in X.terms or n not in Z.terms:
            continue
        a = first.component(n)
        b = second.component(n)
        m = [[{} for _ in X.terms[n]] for _ in Z.terms[n]]
        for k in range(len(Z.terms[n])):
            for j in range(len(X.terms[n])):
                acc = {}
                for i in range(len(Y.terms.get(n, ()))):
                    if a[i][j] and b[k][i]:
                        prod = alg.multiply(a[i][j], b[k][i])
                        for key, v in prod.items():
                            s = f.add(acc.get(key, f.zero), v)
                            if s:
                                acc[key] = s
                            elif key in acc:
                                del acc[key]
                m[k][j] = acc
        mats[n] = m
    return ChainMap(X, Z, mats, check=False)


def _assemble_map_from(pieces, maps, target) -> ChainMap:
    """Block chain map (+) pieces -> target from maps[p] : pieces[p] -> target."""
    S, offsets = direct_sum(pieces)
    mats = {}
    for p, cm in enumerate(maps):
        for n in cm.mats:
            if n not in S.terms or n not in target.terms:
                continue
            if n not in mats:
                mats[n] = [[{} for _ in S.terms[n]] for _ in target.terms[n]]
            comp = cm.component(n)
            off = offsets[p].get(n, 0)
            for i, row in enumerate(comp):
                for j, x in enumerate(row):
                    if x:
                        mats[n][i][off + j] = dict(x)
    return ChainMap(S, target, mats)


def _assemble_map_to(source, pieces, maps) -> ChainMap:
    """Block chain map source -> (+) pieces from maps[p] : source -> pieces[p]."""
    T, offsets = direct_sum(pieces)
    mats = {}
    for p, cm in enumerate(maps):
        for n in cm.mats:
            if n not in source.terms or n not in T.terms:
                continue
            if n not in mats:
                mats[n] = [[{} for _ in source.terms[n]] for _ in T.terms[n]]
            comp = cm.component(n)
            off = offsets[p].get(n, 0)
            for i, row in enumerate(comp):
                for j, x in enumerate(row):
                    if x:
                        mats[n][off + i][j] = dict(x)
    return ChainMap(source, T, mats)


def evaluation_map(E: ProjComplex, F: ProjComplex) -> ChainMap:
    """ev : Hom*(E, F) (x) E -> F, summed over a cocycle basis lifting a
    basis of the Ext groups."""
    h = hom_complex(E, F)
    pieces, maps = [], []
    for d in sorted(h.basis):
        for vec in h.cocycle_representatives(d):
            cm = h.cochain_to_chainmap(vec, d)   # E[-d] -> F
            pieces.append(cm.source)
            maps.append(cm)
    if not pieces:
        from .complexes import zero_complex
        return ChainMap(zero_complex(E.algebra), F, {})
    return _assemble_map_from(pieces, maps, F)


def coevaluation_map(F: ProjComplex, E: ProjComplex) -> ChainMap:
    """coev : F -> Hom*(F, E)* (x) E, dual-basis components E[d] per
    degree-d cocycle."""
    h = hom_complex(F, E)
    pieces, maps = [], []
    for d in sorted(h.basis):
        for vec in h.cocycle_representatives(d):
            cm = h.cochain_to_chainmap(vec, d)   # F[-d] -> E
            shifted = ChainMap(F, E.shift(d),
                               {n - d: cm.mats[n] for n in cm.mats}, check=False)
            pieces.append(shifted.target)
            maps.append(shifted)
    if not pieces:
        from .complexes import zero_complex
        return ChainMap(F, zero_complex(F.algebra), {})
    return _assemble_map_to(F, pieces, maps)


def left_mutation_object(E: ProjComplex, F: ProjComplex) -> ProjComplex:
    return minimalize(cone(evaluation_map(E, F)))


def right_mutation_object(F: ProjComplex, E: ProjComplex) -> ProjComplex:
    return minimalize(cone(coevaluation_map(F, E)).shift(-1))


def is_exceptional_collection(objects):
    """(ok, violations): endomorphisms k and backwards Ext vanishing."""
    violations = []
    objects = list(objects)
    for i, X in enumerate(objects):
        prof = ext_profile(X, X)
        if prof != {0: 1}:
            violations.append(f"Ext*(E_{i+1}, E_{i+1}) = {prof}, expected k in degree 0")
    for j in range(len(objects)):
        for i in range(j):
            prof = ext_profile(objects[j], objects[i])
            if prof:
                violations.append(
                    f"Ext*(E_{j+1}, E_{i+1}) = {prof}, expected 0 (i < j)")
    return (not violations), violations


class ExceptionalCollection:
    def __init__(self, algebra: Algebra, objects, verify=True):
        self.algebra = algebra
        self.objects = tuple(minimalize(X) for X in objects)
        if verify:
            ok, violations = is_exceptional_collection(self.objects)
            if not ok:
                raise ValueError("not an exceptional collection: "
                                 + "; ".join(violations))

    def __len__(self):
        return len(self.objects)

    def ext_table(self):
        n = len(self.objects)
        return [[ext_profile(self.objects[i], self.objects[j])
                 for j in range(n)] for i in range(n)]


def projective_collection(A: Algebra, order=None) -> ExceptionalCollection:
    """The indecomposable projectives in a semiorthogonal (directed)
    order; `order` lists vertex positions, rightmost argument last."""
    if order is None:
        order = _directed_order(A)
    objs = [single_projective(A, v) for v in order]
    return ExceptionalCollection(A, objs)


def _directed_order(A: Algebra):
    """Vertex order with Hom(A e_u, A e_w) = 0 for u listed before w,
    i.e. e_u A e_w = 0; exists exactly for directed algebras."""
    verts = list(range(A.num_vertices))
    edges = {(v, w) for v in verts for w in verts
             if v != w and A.slice_indices(v, w)}
    # slice e_v A e_w != 0 means paths w -> v exist; order sinks first
    order = []
    remaining = set(verts)
    while remaining:
        found = None
        for v in sorted(remaining):
            if not any((u, v) in edges for u in remaining if u != v):
                found = v
                break
        if found is None:
            raise ValueError("algebra is not directed; no exceptional order")
        order.append(found)
        remaining.discard(found)
    return order


def mutate(coll: ExceptionalCollection, i: int, direction: str) -> ExceptionalCollection:
    """Mutation at a 1-based index: 'left' acts on the pair (E_i, E_{i+1})
    giving (L E_{i+1}, E_i); 'right' acts on (E_{i-1}, E_i) giving
    (E_i, R E_{i-1})."""
    objs = list(coll.objects)
    m = len(objs)
    if direction == "left":
        if not 1 <= i <= m - 1:
            raise IndexError(f"left mutation index {i} out of range 1..{m - 1}")
        E, F = objs[i - 1], objs[i]
        new = left_mutation_object(E, F)
        objs[i - 1], objs[i] = new, E
    elif direction == "right":
        if not 2 <= i <= m:
            raise IndexError(f"right mutation index {i} out of range 2..{m}")
        F, E = objs[i - 2], objs[i - 1]
        new = right_mutation_object(F, E)
        objs[i - 2], objs[i - 1] = E, new
    else:
        raise ValueError(direction)
    try:
        return ExceptionalCollection(coll.algebra, objs)
    except ValueError as exc:
        raise MutationFailed(str(exc)) from exc


def dual_collection(coll: ExceptionalCollection):
    """The dual objects F_i = R_{E_m} ... R_{E_{i+1}} (E_i) with shifts
    s_i making Ext^{s_i}(F_i, E_i) = k; returns (objects, shifts)."""
    objs = coll.objects
    m = len(objs)
    duals = []
    shifts = []
    for i in range(m):
        T = objs[i]
        for j in range(i + 1, m):
            T = right_mutation_object(T, objs[j])
        duals.append(T)
        table = ext_profile(T, objs[i])
        if len(table) != 1 or set(table.values()) != {1}:
            raise MutationFailed(
                f"dual object F_{i+1} has Ext table {table} against E_{i+1}")
        shifts.append(next(iter(table)))
    # delta property across the collection
    for i in range(m):
        for j in range(m):
            table = ext_profile(duals[j], objs[i])
            expected = {shifts[j]: 1} if i == j else {}
            if table != expected:
                raise MutationFailed(
                    f"Ext*(F_{j+1}, E_{i+1}) = {table}, expected {expected}")
    return duals, shifts


def bdi_check(coll: ExceptionalCollection, i: int) -> bool:
    """Graded dims of Ext*(BD_i(E_i), E_i) equal those of Ext*(E_i, E_i)
    after applying the shift recorded by the dual collection."""
    duals, shifts = dual_collection(coll)
    table = ext_profile(duals[i - 1], coll.objects[i - 1])
    shifted = {n - shifts[i - 1]: d for n, d in table.items()}
    return shifted == ext_profile(coll.objects[i - 1], coll.objects[i - 1])


class SodTower:
    """Filtration 0 = T_m -> ... -> T_0 = x with factors
    A_k = cone(T_k -> T_{k-1}) in <E_k>."""

    def __init__(self, obj, tower, factors, k0_checks):
        self.object = obj
        self.tower = tower
        self.factors = factors
        self.k0_checks = k0_checks


def sod_project(x: ProjComplex, coll: ExceptionalCollection) -> SodTower:
    """Project an object through the tower of an exceptional collection.

    Each factor is split off by a coevaluation cone, so it is a direct sum
    of shifts of E_k by construction; the verified content is that each
    truncation T_k has no Hom to the earlier E_j (j <= k), that the final
    residue vanishes (else NotFull), and that the K_0 classes add up."""
    x = minimalize(x)
    tower = [x]
    factors = []
    T = x
    for k, E in enumerate(coll.objects, start=1):
        coev = coevaluation_map(T, E)
        factor = coev.target
        T = minimalize(cone(coev).shift(-1))
        for j in range(k):
            prof = ext_profile(T, coll.objects[j])
            assert not prof, (
                f"truncation T_{k} has Ext against E_{j+1}: {prof}")
        factors.append(minimalize(factor))
        tower.append(T)
    if not T.is_zero():
        raise NotFull(
            "a nonzero residue survives all projection steps; "
            "the collection does not generate this object")
    total = {}
    for F in factors:
        for v, c in F.euler_class().items():
            total[v] = total.get(v, 0) + c
    k0_ok = {v: c for v, c in total.items() if c} == x.euler_class()
    return SodTower(x, tower, factors, {"k0_additive": k0_ok})


def _strongness_shifts(objs):
    """Per-object shifts making every Ext land in degree 0, or NotStrong.

    Mutations introduce shifts, so a collection can be strong only after
    renormalizing each object; the shift vector solves s_i - s_j = d_ij
    over the graph of nonzero Hom spaces (d_ij the single Ext degree)."""
    m = len(objs)
    deg = {}
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            prof = ext_profile(objs[i], objs[j])
            if not prof:
                continue
            if len(prof) > 1:
                raise NotStrong(
                    f"Ext*(E_{i+1}, E_{j+1}) has degrees {sorted(prof)}; "
                    "no shift makes the collection strong")
            deg[(i, j)] = next(iter(prof))
    # Ext^d(E_i[s_i], E_j[s_j]) = Ext^{d + s_j - s_i}(E_i, E_j), so strength
    # needs s_j - s_i = d_ij on every edge of the Hom graph
    shifts = [None] * m
    for start in range(m):
        if shifts[start] is not None:
            continue
        shifts[start] = 0
        queue = [start]
        while queue:
            i = queue.pop()
            for (a, b), d in deg.items():
                if a == i and shifts[b] is None:
                    shifts[b] = shifts[a] + d
                    queue.append(b)
                elif b == i and shifts[a] is None:
                    shifts[a] = shifts[b] - d
                    queue.append(a)
    for (i, j), d in deg.items():
        if shifts[j] - shifts[i] != d:
            raise NotStrong("inconsistent Ext degrees: no shift "
                            "normalization exists")
    return shifts


def endomorphism_algebra(coll: ExceptionalCollection,
                         vertex_names=None) -> PathAlgebra:
    """Basic endomorphism algebra of (+) E_i for a strong collection
    (strong after the per-object shift normalization that mutations make
    necessary), re-presented as a quiver with relations recovered by
    linear algebra on compositions of Hom-space bases."""
    shifts = _strongness_shifts(coll.objects)
    objs = tuple(E if s == 0 else E.shift(s)
                 for E, s in zip(coll.objects, shifts))
    m = len(objs)
    for i in range(m):
        for j in range(m):
            prof = ext_profile(objs[i], objs[j])
            if set(prof) - {0}:
                raise NotStrong(
                    f"Ext*(E_{i+1}, E_{j+1}) has degrees {sorted(prof)}")
    f = coll.algebra.field
    # cocycle bases of the degree-0 Hom spaces, as chain maps
    hom_bases = {}
    hcxs = {}
    for i in range(m):
        for j in range(m):
            h = hom_complex(objs[i], objs[j])
            hcxs[(i, j)] = h
            reps = h.cocycle_representatives(0) if i != j else []
            hom_bases[(i, j)] = [h.cochain_to_chainmap(v, 0) for v in reps]

    def class_coefficients(i, k, cm):
        """Coefficients of a degree-0 cocycle (given as a chain map
        E_i -> E_k) over the chosen basis, modulo coboundaries."""
        h = hcxs[(i, k)]
        vec = {}
        for n, mat in cm.mats.items():
            for r, row in enumerate(mat):
                for c, x in enumerate(row):
                    for t, val in x.items():
                        vec[h.pos[0][(n, c, r, t)]] = val
        basis_vecs = []
        for bcm in hom_bases[(i, k)]:
            bv = {}
            for n, mat in bcm.mats.items():
                for r, row in enumerate(mat):
                    for c, x in enumerate(row):
                        for t, val in x.items():
                            bv[h.pos[0][(n, c, r, t)]] = val
            basis_vecs.append(bv)
        dim0 = h.dims.get(0, 0)
        from .linalg import Matrix, solve_linear
        cols = list(basis_vecs)
        prev = h.mats.get(-1)
        ncob = 0
        if prev is not None:
            for ccol in prev.cols:
                cols.append(dict(ccol))
                ncob += 1
        M = Matrix(f, dim0, len(cols), [dict(c) for c in cols])
        rhs = Matrix(f, dim0, 1, [vec])
        sol = solve_linear(M, rhs)
        assert sol is not None, "composite is not a combination of basis cocycles"
        return {b: sol.cols[0][b] for b in range(len(basis_vecs))
                if b in sol.cols[0]}

    if vertex_names is None:
        vertex_names = tuple(str(i + 1) for i in range(m))
    labels = [f"e({v})" for v in vertex_names]
    idx = {}
    for (i, j), basis in sorted(hom_bases.items()):
        for b in range(len(basis)):
            idx[(i, j, b)] = len(labels)
            labels.append(f"h{i + 1}to{j + 1}_{b}")
    dim = len(labels)
    mult = [[{} for _ in range(dim)] for _ in range(dim)]
    for v in range(m):
        mult[v][v] = {v: f.one}
    for (i, j, b), k in idx.items():
        mult[j][k] = {k: f.one}   # e_tgt * h = h
        mult[k][i] = {k: f.one}   # h * e_src = h
    for (i, j, b1), k1 in idx.items():
        for (j2, l, b2), k2 in idx.items():
            if j2 != j:
                continue
            # product (second)(first) in function order: k2 * k1 composes
            # E_i -> E_j -> E_l, i.e. "k1 then k2"
            comp = compose_chainmaps(hom_bases[(i, j)][b1], hom_bases[(j, l)][b2])
            coeffs = class_coefficients(i, l, comp)
            mult[k2][k1] = {idx[(i, l, b)]: c for b, c in coeffs.items()}
    return algebra_from_structure(f, vertex_names, labels, mult,
                                  list(range(m)), arrow_name_prefix="t")
