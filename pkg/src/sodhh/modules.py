"""Finite-dimensional module representations.

A ModuleRep is always a *left* module over its acting algebra; right
modules are left modules over the opposite algebra and (A,B)-bimodules are
left modules over A (x) B^op.  Module bases are vertex-graded: basis
vector m is fixed by the idempotent of `grading[m]` and killed by the
others, which keeps every Hom computation block-sparse.
"""

from __future__ import annotations

from .algebra import Algebra, PathAlgebra, algebra_from_structure, tensor_opposite
from .linalg import Matrix


class ModuleRep:
    __slots__ = ("algebra", "dim", "action", "grading")

    def __init__(self, algebra: Algebra, dim: int, action, grading, check=True):
        self.algebra = algebra
        self.dim = dim
        self.action = list(action)  # per algebra basis element, a dim x dim Matrix
        self.grading = tuple(grading)
        assert len(self.action) == algebra.dim and len(self.grading) == dim
        if check:
            self.check_axioms()

    def check_axioms(self):
        alg = self.algebra
        f = alg.field
        ident = Matrix.identity(f, self.dim)
        unit = Matrix.zeros(f, self.dim, self.dim)
        for e in alg.idempotents:
            unit = unit.add(self.action[e])
        assert unit == ident, "unit does not act as the identity"
        for m in range(self.dim):
            col = self.action[alg.idempotents[self.grading[m]]].cols[m]
            assert col == {m: f.one}, "basis is not graded as declared"
        for i in range(alg.dim):
            for j in range(alg.dim):
                lhs = self.action[i].mul(self.action[j])
                rhs = Matrix.zeros(f, self.dim, self.dim)
                for k, c in alg.mult[i][j].items():
                    rhs = rhs.add(self.action[k].scale(c))
                assert lhs == rhs, (
                    f"action not multiplicative on {alg.labels[i]}, {alg.labels[j]}")

    def act(self, elem: dict, vec: dict) -> dict:
        f = self.algebra.field
        out: dict = {}
        for k, c in elem.items():
            for m, v in vec.items():
                for m2, w in self.action[k].cols[m].items():
                    s = f.add(out.get(m2, f.zero), f.mul(c, f.mul(v, w)))
                    if s:
                        out[m2] = s
                    elif m2 in out:
                        del out[m2]
        return out


def simple_module(A: Algebra, v: int) -> ModuleRep:
    f = A.field
    action = []
    for k in range(A.dim):
        if k == A.idempotents[v]:
            action.append(Matrix.identity(f, 1))
        else:
            action.append(Matrix.zeros(f, 1, 1))
    return ModuleRep(A, 1, action, (v,), check=False)


def _env_encode(env, v, w):
    _, c = env._pair
    return v * c.num_vertices + w


def regular_bimodule(A: Algebra) -> ModuleRep:
    """A as a bimodule over itself: the diagonal."""
    env = A.enveloping()
    f = A.field
    action = []
    for i in range(A.dim):
        for j in range(A.dim):
            cols = []
            for k in range(A.dim):
                cols.append(A.multiply(A.mult[i][k], {j: f.one}))
            action.append(Matrix(f, A.dim, A.dim, cols))
    grading = tuple(_env_encode(env, A.tgt[k], A.src[k]) for k in range(A.dim))
    return ModuleRep(env, A.dim, action, grading, check=False)


def dual_bimodule(A: Algebra) -> ModuleRep:
    """DA = Hom_k(A, k) with (a.f.b)(x) = f(b x a); the Serre kernel."""
    env = A.enveloping()
    f = A.field
    action = []
    for i in range(A.dim):
        for j in range(A.dim):
            # (b_i (x) b_j) . p* = sum_x coeff_p(b_j b_x b_i) x*
            cols = [dict() for _ in range(A.dim)]
            for x in range(A.dim):
                prod = A.multiply(A.mult[j][x], {i: f.one})
                for p, c in prod.items():
                    if c:
                        cols[p][x] = c
            action.append(Matrix(f, A.dim, A.dim, cols))
    grading = tuple(_env_encode(env, A.src[k], A.tgt[k]) for k in range(A.dim))
    return ModuleRep(env, A.dim, action, grading, check=False)


def env_left_action(M: ModuleRep, i: int) -> Matrix:
    """Action of b_i (x) 1 on a bimodule."""
    env = M.algebra
    b, c = env._pair
    f = env.field
    out = Matrix.zeros(f, M.dim, M.dim)
    for e in c.idempotents:
        out = out.add(M.action[i * c.dim + e])
    return out


def env_right_action(M: ModuleRep, j: int) -> Matrix:
    """Action of 1 (x) b_j on a bimodule."""
    env = M.algebra
    b, c = env._pair
    f = env.field
    out = Matrix.zeros(f, M.dim, M.dim)
    for e in b.idempotents:
        out = out.add(M.action[e * c.dim + j])
    return out


def bimodule_from_actions(A: Algebra, B: Algebra, left_mats, right_mats,
                          check=True) -> ModuleRep:
    """(A,B)-bimodule from commuting left and right action matrices.

    The basis is regraded if necessary so that each vector is supported at
    a single vertex pair.
    """
    env = A.enveloping() if B is A else tensor_opposite(A, B)
    f = A.field
    dim = left_mats[0].nrows if left_mats else 0
    action = []
    for i in range(A.dim):
        for j in range(B.dim):
            action.append(left_mats[i].mul(right_mats[j]))
    # graded basis: concatenate images of the commuting projections
    basis_cols = []
    grading = []
    for v, ev in enumerate(A.idempotents):
        for w, ew in enumerate(B.idempotents):
            proj = left_mats[ev].mul(right_mats[ew])
            from .linalg import rank_kernel_image
            _, _, img = rank_kernel_image(proj)
            for col in img.cols:
                basis_cols.append(col)
                grading.append(_env_encode(env, v, w))
    assert len(basis_cols) == dim, "left/right idempotent actions do not split the basis"
    basechange = Matrix(f, dim, dim, basis_cols)
    from .algebra import LinearSolver
    solver = LinearSolver(basechange)
    new_action = []
    for m in action:
        cols = []
        for col in basechange.cols:
            img = m.apply(col)
            sol = solver.solve(img)
            assert sol is not None
            cols.append(sol)
        new_action.append(Matrix(f, dim, dim, cols))
    return ModuleRep(env, dim, new_action, tuple(grading), check=check)


def free_gluing_bimodule(b: Algebra, c: Algebra, d: int) -> ModuleRep:
    """k^d as a (b,c)-bimodule when b and c each have a single vertex
    acting through the idempotent (the catalog's gluing data)."""
    assert b.num_vertices == 1 and c.num_vertices == 1, "free gluing needs single vertices"
    f = b.field
    left = []
    for i in range(b.dim):
        left.append(Matrix.identity(f, d) if i == b.idempotents[0]
                    else Matrix.zeros(f, d, d))
    right = []
    for j in range(c.dim):
        right.append(Matrix.identity(f, d) if j == c.idempotents[0]
                     else Matrix.zeros(f, d, d))
    return bimodule_from_actions(b, c, left, right, check=False)


def triangular_gluing(b: Algebra, c: Algebra, m: ModuleRep,
                      arrow_name_prefix="g") -> PathAlgebra:
    """Upper-triangular extension with underlying space b (+) m (+) c and
    multiplication (b1,m1,c1)(b2,m2,c2) = (b1 b2, b1 m2 + m1 c2, c1 c2),
    re-presented as a quiver with relations.

    m is a (b,c)-bimodule; its elements become paths from c-vertices to
    b-vertices.  Arrow names of the re-presentation are generated.
    """
    env2 = m.algebra
    assert getattr(env2, "_pair", None) is not None and env2._pair[0] is b \
        and env2._pair[1] is c, "m must be a module over b (x) c^op"
    m.check_axioms()
    f = b.field
    nb, nm, nc = b.dim, m.dim, c.dim
    dim = nb + nm + nc
    OB, OM, OC = 0, nb, nb + nm

    # disambiguated vertex names
    if set(b.vertex_names) & set(c.vertex_names):
        vnames = tuple(f"b:{v}" for v in b.vertex_names) + \
            tuple(f"c:{v}" for v in c.vertex_names)
    else:
        vnames = tuple(b.vertex_names) + tuple(c.vertex_names)
    labels = [f"b.{l}" for l in b.labels] + [f"m{k}" for k in range(nm)] + \
        [f"c.{l}" for l in c.labels]

    mult = [[{} for _ in range(dim)] for _ in range(dim)]
    for i in range(nb):
        for j in range(nb):
            mult[OB + i][OB + j] = {OB + k: v for k, v in b.mult[i][j].items()}
    for i in range(nc):
        for j in range(nc):
            mult[OC + i][OC + j] = {OC + k: v for k, v in c.mult[i][j].items()}
    for i in range(nb):
        la = env_left_action(m, i)
        for k in range(nm):
            col = la.cols[k]
            if col:
                mult[OB + i][OM + k] = {OM + k2: v for k2, v in col.items()}
    for j in range(nc):
        ra = env_right_action(m, j)
        for k in range(nm):
            col = ra.cols[k]
            if col:
                mult[OM + k][OC + j] = {OM + k2: v for k2, v in col.items()}
    idems = [OB + e for e in b.idempotents] + [OC + e for e in c.idempotents]
    dims_check = nb + nm + nc
    assert dims_check == dim
    return algebra_from_structure(f, vnames, labels, mult, idems,
                                  arrow_name_prefix=arrow_name_prefix)
