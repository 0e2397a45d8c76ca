"""Finite-dimensional basic algebras presented by quivers with relations.

Composition is function-style throughout: a path from u to v is an element
of e_v * A * e_u, and p*q means "q then p".  Stored path descriptors list
arrows in traversal order (first-traversed first), so the concatenation
underlying p*q is q's arrows followed by p's arrows.

Normal forms modulo the relation ideal are computed stratum by stratum in
the path length, by plain linear algebra; relations must be homogeneous in
path length (all catalog relations are).  No Groebner machinery.
"""

from __future__ import annotations

from typing import NamedTuple

from .linalg import ColumnEchelon, FieldSpec, Matrix, _col_axpy


class NonAdmissible(ValueError):
    """A relation violates admissibility (path length < 2, mixed lengths, ...)."""


class NotFiniteDimensional(ValueError):
    """Path basis did not close below the configured length cap."""


class Arrow(NamedTuple):
    name: str
    source: str
    target: str


class Quiver(NamedTuple):
    vertices: tuple
    arrows: tuple

    @staticmethod
    def make(vertices, arrows):
        vs = tuple(vertices)
        if len(set(vs)) != len(vs):
            raise ValueError("duplicate vertex names")
        ars = tuple(Arrow(*a) if not isinstance(a, Arrow) else a for a in arrows)
        names = [a.name for a in ars]
        if len(set(names)) != len(names) or set(names) & set(vs):
            raise ValueError("arrow names must be unique and distinct from vertices")
        for a in ars:
            if a.source not in vs or a.target not in vs:
                raise ValueError(f"arrow {a.name} references undeclared vertex")
        return Quiver(vs, ars)


class Relation(NamedTuple):
    """Sum of (coefficient, path) terms; paths are arrow-name tuples in
    traversal order and must be parallel (shared source and target)."""
    terms: tuple


class SubspaceReducer:
    """Fully reduced column echelon of a growing subspace of k^dim.

    Supports canonical normal forms of vectors modulo the subspace: the
    residual of `normal_form` is supported away from all pivot rows.
    """

    __slots__ = ("field", "dim", "cols")

    def __init__(self, field, dim, vectors=()):
        self.field = field
        self.dim = dim
        self.cols = {}  # pivot row -> column dict, pivot entry 1, reduced
        for v in vectors:
            self.add(v)

    def normal_form(self, vec):
        f = self.field
        c = dict(vec)
        while True:
            hit = None
            for i in c:
                if i in self.cols:
                    hit = i if hit is None else max(hit, i)
            if hit is None:
                return c
            _col_axpy(f, c, self.cols[hit], c[hit])

    def add(self, vec) -> bool:
        """Insert vec's class; returns True if the subspace grew."""
        f = self.field
        c = self.normal_form(vec)
        if not c:
            return False
        low = max(c)
        inv = f.inv(c[low])
        c = {i: f.mul(v, inv) for i, v in c.items()}
        for c2 in self.cols.values():
            if low in c2:
                _col_axpy(f, c2, c, c2[low])
        self.cols[low] = c
        return True

    def contains(self, vec) -> bool:
        return not self.normal_form(vec)

    @property
    def rank(self):
        return len(self.cols)


class LinearSolver:
    """Repeated exact solves m @ x = rhs against a fixed matrix."""

    __slots__ = ("ech",)

    def __init__(self, m: Matrix):
        self.ech = ColumnEchelon(m)

    def solve(self, rhs_col: dict):
        f = self.ech.matrix.field
        residual, coeffs = self.ech.reduce_vector(rhs_col)
        if residual:
            return None
        x: dict = {}
        for k, factor in coeffs.items():
            _col_axpy(f, x, self.ech.combo[k], f.neg(factor))
        return x


class _TensorMultRow:
    """One lazily computed row of a tensor-product multiplication table."""

    __slots__ = ("table", "i", "cells")

    def __init__(self, table, i):
        self.table = table
        self.i = i
        self.cells = {}

    def __getitem__(self, j):
        cell = self.cells.get(j)
        if cell is None:
            b, c = self.table.b, self.table.c
            f = b.field
            dim_c = c.dim
            i1, i2 = divmod(self.i, dim_c)
            j1, j2 = divmod(j, dim_c)
            left = b.mult[i1][j1]
            right = c.mult[j2][i2]  # second slots compose in C^op
            cell = {}
            for a, va in left.items():
                for d, vd in right.items():
                    cell[a * dim_c + d] = f.mul(va, vd)
            self.cells[j] = cell
        return cell


class _TensorMult:
    """Lazy multiplication table of B (x) C^op; large enveloping algebras
    never materialize the full dim^2 x dim^2 table."""

    __slots__ = ("b", "c", "rows")

    def __init__(self, b, c):
        self.b = b
        self.c = c
        self.rows = {}

    def __getitem__(self, i):
        row = self.rows.get(i)
        if row is None:
            row = _TensorMultRow(self, i)
            self.rows[i] = row
        return row


class Algebra:
    """Finite-dimensional basic algebra with a vertex-graded basis.

    Basis element 0..dim-1; the first elements are not required to be the
    idempotents, but `idempotents[v]` gives the basis index of e_v and every
    non-idempotent basis element lies in the radical and in a single slice
    e_{vertex tgt} A e_{vertex src}.
    """

    def __init__(self, field: FieldSpec, labels, mult, idempotents, vertex_names,
                 grading=None):
        self.field = field
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        self.mult = mult  # mult[i][j] = sparse product vector of b_i * b_j
        self.idempotents = tuple(idempotents)
        self.vertex_names = tuple(vertex_names)
        self._idem_set = frozenset(self.idempotents)
        if grading is not None:
            self.src, self.tgt = grading
        else:
            self.src = [None] * self.dim  # vertex position v with  b * e_v = b
            self.tgt = [None] * self.dim  # vertex position v with  e_v * b = b
            for k in range(self.dim):
                for v, e in enumerate(self.idempotents):
                    if self.mult[k][e].get(k) == field.one and len(self.mult[k][e]) == 1:
                        self.src[k] = v
                    if self.mult[e][k].get(k) == field.one and len(self.mult[e][k]) == 1:
                        self.tgt[k] = v
                if self.src[k] is None or self.tgt[k] is None:
                    raise ValueError(
                        f"basis element {self.labels[k]} is not vertex-graded")
            self.src = tuple(self.src)
            self.tgt = tuple(self.tgt)
        self._cache = {}

    # -- structure ----------------------------------------------------------

    @property
    def num_vertices(self):
        return len(self.idempotents)

    def radical_indices(self):
        return [k for k in range(self.dim) if k not in self._idem_set]

    def slice_indices(self, v, w):
        """Basis of e_v A e_w (paths from w to v), as basis indices."""
        return [k for k in range(self.dim) if self.tgt[k] == v and self.src[k] == w]

    def column_indices(self, v):
        """Basis of A e_v (the indecomposable projective left module at v)."""
        return [k for k in range(self.dim) if self.src[k] == v]

    def unit(self):
        one = self.field.one
        return {e: one for e in self.idempotents}

    def idem(self, v):
        return {self.idempotents[v]: self.field.one}

    # -- arithmetic on sparse element vectors -------------------------------

    def multiply(self, x: dict, y: dict) -> dict:
        f = self.field
        out: dict = {}
        for i, xi in x.items():
            row = self.mult[i]
            for j, yj in y.items():
                cell = row[j]
                if not cell:
                    continue
                c = f.mul(xi, yj)
                for k, v in cell.items():
                    s = f.add(out.get(k, f.zero), f.mul(c, v))
                    if s:
                        out[k] = s
                    elif k in out:
                        del out[k]
        return out

    def add(self, x: dict, y: dict) -> dict:
        f = self.field
        out = dict(x)
        for k, v in y.items():
            s = f.add(out.get(k, f.zero), v)
            if s:
                out[k] = s
            elif k in out:
                del out[k]
        return out

    def scale(self, x: dict, c) -> dict:
        f = self.field
        c = f.coerce(c)
        if not c:
            return {}
        return {k: f.mul(v, c) for k, v in x.items()}

    def scalar_part(self, x: dict, v: int):
        """Coefficient of e_v in x."""
        return x.get(self.idempotents[v], self.field.zero)

    def local_inverse(self, x: dict, v: int) -> dict:
        """Inverse of a unit x in the local algebra e_v A e_v."""
        f = self.field
        c = self.scalar_part(x, v)
        if not c:
            raise ZeroDivisionError("not a unit in the local algebra")
        cinv = f.inv(c)
        e = self.idem(v)
        r = self.add(self.scale(x, cinv), self.scale(e, f.neg(f.one)))  # nilpotent
        out, term = dict(e), dict(e)
        while True:
            term = self.multiply(self.scale(r, -1), term)
            if not term:
                break
            out = self.add(out, term)
        return self.scale(out, cinv)

    # -- verification -------------------------------------------------------

    def check_axioms(self):
        """Associativity on all basis triples and two-sided unit."""
        one = self.unit()
        for i in range(self.dim):
            bi = {i: self.field.one}
            assert self.multiply(one, bi) == bi and self.multiply(bi, one) == bi
        for i in range(self.dim):
            for j in range(self.dim):
                ij = self.mult[i][j]
                for k in range(self.dim):
                    left = self.multiply(ij, {k: self.field.one})
                    right = self.multiply({i: self.field.one}, self.mult[j][k])
                    assert left == right, (self.labels[i], self.labels[j], self.labels[k])

    def radical_nilpotency_index(self):
        """Least N with rad^N = 0."""
        f = self.field
        current = [{k: f.one} for k in self.radical_indices()]
        n = 1
        while current:
            if n > self.dim + 1:
                raise AssertionError("radical is not nilpotent")
            nxt = []
            red = SubspaceReducer(f, self.dim)
            for x in current:
                for k in self.radical_indices():
                    p = self.multiply(x, {k: f.one})
                    if p and red.add(p):
                        nxt.append(p)
            current = nxt
            n += 1
        return n

    # -- derived algebras (cached) -------------------------------------------

    def opposite(self) -> "Algebra":
        if "op" not in self._cache:
            mult = [[self.mult[j][i] for j in range(self.dim)] for i in range(self.dim)]
            op = Algebra(self.field, self.labels, mult, self.idempotents, self.vertex_names)
            op._cache["op"] = self
            self._cache["op"] = op
        return self._cache["op"]

    def pair_index(self, i, j):
        return i * self.dim + j

    def enveloping(self) -> "Algebra":
        """A (x) A^op; left modules over it are (A,A)-bimodules via
        (a (x) b) . m = a m b."""
        if "env" not in self._cache:
            self._cache["env"] = tensor_opposite(self, self)
        return self._cache["env"]


def tensor_opposite(b: Algebra, c: Algebra) -> Algebra:
    """The algebra B (x) C^op; left modules over it are (B,C)-bimodules.
    The multiplication table is computed lazily cell by cell."""
    if b.field != c.field:
        raise ValueError("field mismatch")
    f = b.field
    dim_c = c.dim
    labels = []
    for i in range(b.dim):
        for j in range(dim_c):
            labels.append(f"{b.labels[i]}(x){c.labels[j]}")
    idems = []
    vnames = []
    for v, e in enumerate(b.idempotents):
        for w, e2 in enumerate(c.idempotents):
            idems.append(e * dim_c + e2)
            vnames.append(f"({b.vertex_names[v]},{c.vertex_names[w]})")
    # basis (p, q) is graded by (src_b(p), tgt_c(q)) -> (tgt_b(p), src_c(q))
    src = []
    tgt = []
    for i in range(b.dim):
        for j in range(dim_c):
            src.append(b.src[i] * c.num_vertices + c.tgt[j])
            tgt.append(b.tgt[i] * c.num_vertices + c.src[j])
    prod = Algebra(f, labels, _TensorMult(b, c), idems, vnames,
                   grading=(tuple(src), tuple(tgt)))
    prod._pair = (b, c)
    return prod


class PathAlgebra(Algebra):
    """Algebra presented by a quiver with admissible relations; the basis
    consists of the vertex idempotents and a set of residue paths."""

    def __init__(self, field, labels, mult, idempotents, vertex_names,
                 quiver, relations, basis_paths):
        super().__init__(field, labels, mult, idempotents, vertex_names)
        self.quiver = quiver
        self.relations = tuple(relations)
        self.basis_paths = tuple(basis_paths)  # per basis index: None or arrow-name tuple

    def arrow_element(self, name) -> dict:
        for k, p in enumerate(self.basis_paths):
            if p == (name,):
                return {k: self.field.one}
        # arrows are never reducible modulo an admissible ideal
        raise KeyError(name)

    def path_label(self, k):
        return self.labels[k]


def _path_label(arrow_names) -> str:
    return "*".join(arrow_names)


def validate_relation(quiver: Quiver, rel: Relation, index=None):
    where = f"relation {index}" if index is not None else "relation"
    arrows = {a.name: a for a in quiver.arrows}
    endpoints = None
    lengths = set()
    if not rel.terms:
        raise NonAdmissible(f"{where}: empty relation")
    for coeff, path in rel.terms:
        if len(path) < 2:
            raise NonAdmissible(f"{where}: path {path} has length < 2")
        lengths.add(len(path))
        for a, b in zip(path, path[1:]):
            if a not in arrows or b not in arrows:
                raise NonAdmissible(f"{where}: unknown arrow in {path}")
            if arrows[a].target != arrows[b].source:
                raise NonAdmissible(f"{where}: path {path} is not composable")
        ep = (arrows[path[0]].source, arrows[path[-1]].target)
        if endpoints is None:
            endpoints = ep
        elif endpoints != ep:
            raise NonAdmissible(f"{where}: terms are not parallel paths")
    if len(lengths) != 1:
        raise NonAdmissible(f"{where}: terms must share one path length "
                            "(length-homogeneous presentations only)")


def build_path_algebra(quiver: Quiver, relations, field: FieldSpec,
                       length_cap=None) -> PathAlgebra:
    """Quotient of the path algebra kQ by the ideal the relations generate.

    The basis is computed by length-increasing closure: at each path length
    the span of all paths is divided by the corresponding slice of the
    ideal, and the surviving paths become basis residues.  Raises
    NotFiniteDimensional if strata are still alive at the length cap.
    """
    quiver = Quiver.make(quiver.vertices, quiver.arrows)
    for idx, rel in enumerate(relations):
        validate_relation(quiver, rel, idx)
    if length_cap is None:
        length_cap = 2 * len(quiver.arrows) + 2

    arrows = list(quiver.arrows)
    arrow_ix = {a.name: i for i, a in enumerate(arrows)}
    by_source = {}
    for i, a in enumerate(arrows):
        by_source.setdefault(a.source, []).append(i)

    def path_src(p):
        return arrows[p[0]].source

    def path_tgt(p):
        return arrows[p[-1]].target

    rels_by_len = {}
    for rel in relations:
        L = len(rel.terms[0][1])
        vec = [(field.coerce(c), tuple(arrow_ix[n] for n in pth)) for c, pth in rel.terms]
        if all(not c for c, _ in vec):
            continue
        rels_by_len.setdefault(L, []).append(vec)

    # strata[l] = ordered list of all composable paths of length l
    strata = {1: [(i,) for i in range(len(arrows))]}
    survivors = {1: list(strata[1])}  # relations have length >= 2
    normal = {1: {p: {p: field.one} for p in strata[1]}}  # path -> residue combo

    length = 1
    while True:
        length += 1
        prev = strata[length - 1]
        cur = [p + (i,) for p in prev for i in by_source.get(path_tgt(p), ())]
        if not cur:
            break
        if length > length_cap:
            raise NotFiniteDimensional(
                f"path strata still alive at length {length_cap}")
        index = {p: n for n, p in enumerate(cur)}
        gens = []
        for L, rvecs in rels_by_len.items():
            if L > length:
                continue
            # all embeddings  left . relation . right  of total length
            for lft_len in range(0, length - L + 1):
                rgt_len = length - L - lft_len
                for rvec in rvecs:
                    src = path_src(tuple(a for a in rvec[0][1]))
                    tgt = path_tgt(tuple(a for a in rvec[0][1]))
                    rights = [q for q in strata.get(rgt_len, [()])
                              if rgt_len == 0 or path_tgt(q) == src]
                    lefts = [q for q in strata.get(lft_len, [()])
                             if lft_len == 0 or path_src(q) == tgt]
                    for rgt in (rights if rgt_len else [()]):
                        for lft in (lefts if lft_len else [()]):
                            vec = {}
                            for c, middle in rvec:
                                key = index[rgt + middle + lft]
                                vec[key] = field.add(vec.get(key, field.zero), c)
                            gens.append({k: v for k, v in vec.items() if v})
        reducer = SubspaceReducer(field, len(cur), gens)
        pivot_rows = set(reducer.cols.keys())
        surv = [p for n, p in enumerate(cur) if n not in pivot_rows]
        strata[length] = cur
        survivors[length] = surv
        normal[length] = {}
        for n, p in enumerate(cur):
            nf = reducer.normal_form({n: field.one})
            normal[length][p] = {cur[m]: v for m, v in nf.items()}
        if not surv:
            break

    max_len = max(l for l in survivors if survivors[l]) if any(survivors.values()) else 0

    # assemble the basis: idempotents first, then residues by length
    labels = [f"e({v})" for v in quiver.vertices]
    descr = [("e", v) for v in quiver.vertices]
    basis_paths = [None] * len(quiver.vertices)
    path_pos = {}
    for l in sorted(survivors):
        for p in survivors[l]:
            path_pos[p] = len(labels)
            names = tuple(arrows[i].name for i in p)
            labels.append(_path_label(names))
            descr.append(("p", p))
            basis_paths.append(names)
    dim = len(labels)
    vpos = {v: i for i, v in enumerate(quiver.vertices)}

    def nf_vector(p):
        l = len(p)
        if l > max_len or l not in normal:
            return {}
        return {path_pos[q]: v for q, v in normal[l][p].items() if q in path_pos}

    mult = [[{} for _ in range(dim)] for _ in range(dim)]
    for i in range(dim):
        for j in range(dim):
            ki, kj = descr[i], descr[j]
            if ki[0] == "e" and kj[0] == "e":
                if ki[1] == kj[1]:
                    mult[i][j] = {i: field.one}
            elif ki[0] == "e":
                # e_v * path = path if path ends at v
                if arrows[kj[1][-1]].target == ki[1]:
                    mult[i][j] = {j: field.one}
            elif kj[0] == "e":
                if arrows[ki[1][0]].source == kj[1]:
                    mult[i][j] = {i: field.one}
            else:
                p, q = ki[1], kj[1]
                # p*q is "q then p": traversal order q followed by p
                if arrows[q[-1]].target == arrows[p[0]].source:
                    mult[i][j] = nf_vector(q + p)

    alg = PathAlgebra(field, labels, mult, list(range(len(quiver.vertices))),
                      quiver.vertices, quiver, relations, basis_paths)
    return alg


def center(a: Algebra):
    """(dimension, basis vectors) of the center {z : zx = xz for all x}."""
    f = a.field
    entries = {}
    for i in range(a.dim):
        for j in range(a.dim):
            row_base = i * a.dim
            for k, v in a.mult[j][i].items():
                key = (row_base + k, j)
                entries[key] = f.add(entries.get(key, f.zero), v)
            for k, v in a.mult[i][j].items():
                key = (row_base + k, j)
                entries[key] = f.sub(entries.get(key, f.zero), v)
    m = Matrix.from_entries(f, a.dim * a.dim, a.dim, entries)
    from .linalg import rank_kernel_image
    _, kernel, _ = rank_kernel_image(m)
    basis = [dict(kernel.cols[j]) for j in range(kernel.ncols)]
    return len(basis), basis


def algebra_from_structure(field, vertex_names, labels, mult, idempotents,
                           arrow_name_prefix="a") -> PathAlgebra:
    """Re-present a concrete basic algebra as a quiver with relations.

    The input basis must be vertex-graded with every non-idempotent basis
    element in the radical.  Arrows are a slice-wise complement of rad^2 in
    rad; the path basis is chosen greedily by evaluation, and relations are
    recovered per length as kernel generators of the evaluation map.
    """
    raw = Algebra(field, labels, mult, idempotents, vertex_names)
    f = field
    rad = raw.radical_indices()
    radsq = SubspaceReducer(f, raw.dim)
    for i in rad:
        for j in rad:
            p = raw.mult[i][j]
            if p:
                radsq.add(p)
    # arrows: slice-wise complement of rad^2 inside rad
    arrow_vecs = []
    arrow_meta = []  # (source vertex pos, target vertex pos)
    for v in range(raw.num_vertices):
        for w in range(raw.num_vertices):
            sl = [k for k in rad if raw.tgt[k] == w and raw.src[k] == v]
            base = SubspaceReducer(f, raw.dim)
            for col in radsq.cols.values():
                if all(raw.tgt[k] == w and raw.src[k] == v for k in col):
                    base.add(col)
            for k in sl:
                vec = {k: f.one}
                if base.add(vec):
                    arrow_vecs.append(vec)
                    arrow_meta.append((v, w))
    arrows = [Arrow(f"{arrow_name_prefix}{n}", vertex_names[sv], vertex_names[tv])
              for n, (sv, tv) in enumerate(arrow_meta)]
    quiver = Quiver.make(vertex_names, arrows)

    # greedy path basis by evaluation
    span = SubspaceReducer(f, raw.dim)
    for e in raw.idempotents:
        span.add({e: f.one})
    basis_paths = []   # (arrow index tuple, evaluation vector)
    alive = [((i,), arrow_vecs[i]) for i in range(len(arrows))]
    kernels = {}       # length -> kernel combos over that length's enumerated paths
    enumerated = {1: [p for p, _ in alive]}
    length = 1
    relations = []
    while alive:
        for p, vec in alive:
            if span.add(vec):
                basis_paths.append((p, vec))
        if length + 1 > raw.dim + 1:
            break
        nxt = []
        for p, vec in alive:
            tv = arrow_meta[p[-1]][1]
            for i in range(len(arrows)):
                if arrow_meta[i][0] == tv:
                    prod = raw.multiply(arrow_vecs[i], vec)  # extend traversal at the end
                    nxt.append((p + (i,), prod))
        length += 1
        enumerated[length] = [p for p, _ in nxt]
        # kernel of evaluation on this stratum
        cols = {n: vec for n, (p, vec) in enumerate(nxt)}
        m = Matrix(f, raw.dim, len(nxt), [cols.get(n, {}) for n in range(len(nxt))])
        ech = ColumnEchelon(m)
        kernels[length] = ech.kernel_basis()
        # consequences of shorter kernels, projected to the enumerated stratum
        index = {p: n for n, p in enumerate(enumerated[length])}
        conseq = SubspaceReducer(f, len(nxt))
        for k in kernels.get(length - 1, []):
            for i in range(len(arrows)):
                for side in ("post", "pre"):
                    vec2 = {}
                    for n, c in k.items():
                        base = enumerated[length - 1][n]
                        q = base + (i,) if side == "post" else (i,) + base
                        pos = index.get(q)
                        if pos is not None:
                            vec2[pos] = f.add(vec2.get(pos, f.zero), c)
                    if vec2:
                        conseq.add(vec2)
        for k in kernels[length]:
            if conseq.add(k):
                terms = tuple(
                    (c, tuple(arrows[i].name for i in enumerated[length][n]))
                    for n, c in sorted(k.items()))
                relations.append(Relation(terms))
        alive = [(p, vec) for (p, vec) in nxt if vec]

    # new basis: idempotents then chosen paths (already in length order)
    new_labels = [f"e({v})" for v in vertex_names]
    new_idems = list(range(len(vertex_names)))
    new_paths = [None] * len(vertex_names)
    cob_cols = [{e: f.one} for e in raw.idempotents]
    for p, vec in basis_paths:
        new_labels.append(_path_label(tuple(arrows[i].name for i in p)))
        new_paths.append(tuple(arrows[i].name for i in p))
        cob_cols.append(vec)
    assert len(cob_cols) == raw.dim, "graded basis did not span"
    cob = Matrix(f, raw.dim, raw.dim, cob_cols)
    solver = LinearSolver(cob)

    def in_new_coords(vec):
        x = solver.solve(vec)
        assert x is not None
        return x

    dim = raw.dim
    new_mult = [[{} for _ in range(dim)] for _ in range(dim)]
    for i in range(dim):
        xi = dict(cob_cols[i])
        for j in range(dim):
            prod = raw.multiply(xi, cob_cols[j])
            if prod:
                new_mult[i][j] = in_new_coords(prod)
    return PathAlgebra(f, new_labels, new_mult, new_idems, vertex_names,
                       quiver, relations, new_paths)
