"""Bimodule kernel calculus.

A kernel over A is one of
  * the diagonal (the algebra itself; the convolution unit, resolved by
    the relative bar resolution on demand),
  * the Serre kernel (the dual bimodule DA; convolving with it realizes
    the Serre functor),
  * a general kernel (a bounded complex of projective bimodules, i.e. a
    ProjComplex over the enveloping algebra), or
  * a decomposable kernel E (x)_k F' with E a left-module complex and F'
    a right-module complex, possibly carrying a symbolic Serre twist on
    one side (adjoints of decomposable kernels are DA-twists).

Convolution is the derived tensor product over A; it is computed
termwise, which is derived-correct because a contracted side is always
projective termwise.
"""

from __future__ import annotations

from .algebra import Algebra
from .complexes import (ModuleComplex, ModuleHomComplex, ProjComplex,
                        bar_resolution, dualize, ext_profile,
                        hom_complex, module_complex_single,
                        projective_resolution, radical_tuples,
                        serre_twist_left, tensor_env_env, tensor_env_left,
                        tensor_env_module, tensor_module_with_field_complex,
                        tensor_proj_with_field_complex, tensor_right_left,
                        tensor_right_module_complex)
from .exceptional import ExceptionalCollection, dual_collection
from .hochschild import HHProfile, hh_cohomology, hh_homology
from .modules import ModuleRep, dual_bimodule


class UnsupportedKernelShape(ValueError):
    """Adjoints are only available for diagonal and decomposable kernels."""


class NormalizationFailed(RuntimeError):
    """No shift of the dual objects satisfies the K_0 identity; evidence
    that the collection is not full."""


class RangeNotCertified(RuntimeError):
    """A profile is still nonzero at the degree bound, so Euler sums over
    the truncated range would be untrustworthy."""


class Kernel:
    def __init__(self, algebra, kind, complex=None, module=None,
                 left=None, right=None, twist=None):
        self.algebra = algebra
        self.kind = kind
        self.complex = complex      # general: ProjComplex over env(A)
        self.module = module        # serre: the dual bimodule
        self.left = left            # decomposable: ProjComplex over A
        self.right = right          # decomposable: ProjComplex over op(A)
        self.twist = twist          # None | 'left' | 'right'

    @staticmethod
    def diagonal(A: Algebra) -> "Kernel":
        return Kernel(A, "diagonal")

    @staticmethod
    def serre(A: Algebra) -> "Kernel":
        return Kernel(A, "serre", module=dual_bimodule(A))

    @staticmethod
    def general(P: ProjComplex) -> "Kernel":
        A, _ = P.algebra._pair
        return Kernel(A, "general", complex=P)

    @staticmethod
    def decomposable(E: ProjComplex, Fp: ProjComplex, twist=None) -> "Kernel":
        return Kernel(E.algebra if twist != "left" else Fp.algebra.opposite(),
                      "decomposable", left=E, right=Fp, twist=twist)

    def __repr__(self):
        return f"Kernel({self.kind}{', twist=' + self.twist if self.twist else ''})"


def diagonal_bar_depth(A: Algebra, requested: int) -> int:
    """Depth at which the relative bar resolution terminates, capped at
    the request; the resolution is finite iff the radical tensor powers
    die (true for directed algebras)."""
    n = 0
    while n <= requested and radical_tuples(A, n + 1):
        n += 1
    return n


def as_env_complex(K: Kernel, depth: int) -> ProjComplex:
    """A projective bimodule complex representing the kernel (for the
    diagonal, the bar resolution truncated at `depth`)."""
    A = K.algebra
    if K.kind == "general":
        return K.complex
    if K.kind == "diagonal":
        return bar_resolution(A, depth)
    if K.kind == "decomposable" and K.twist is None:
        return decomposable_to_env(K.left, K.right)
    raise UnsupportedKernelShape(f"cannot realize {K!r} as a projective "
                                 "bimodule complex")


def decomposable_to_env(E: ProjComplex, Fp: ProjComplex) -> ProjComplex:
    """E (x)_k F' as a complex of projective bimodules."""
    A = E.algebra
    env = A.enveloping()
    f = A.field
    op = Fp.algebra
    assert op is A.opposite()
    summands = {}
    for p, t1 in E.terms.items():
        for q, t2 in Fp.terms.items():
            lst = summands.setdefault(p + q, [])
            for s1, v in enumerate(t1):
                for s2, w in enumerate(t2):
                    lst.append((p, s1, s2))
    terms = {}
    pos = {}
    for n, lst in summands.items():
        labels = []
        for p, s1, s2 in lst:
            v = E.terms[p][s1]
            w = Fp.terms[n - p][s2]
            labels.append(_encode_env_vertex(env, v, w))
        terms[n] = tuple(labels)
        pos[n] = {key: i for i, key in enumerate(lst)}
    diffs = {}
    for n in terms:
        if (n + 1) not in terms:
            continue
        d = [[{} for _ in summands[n]] for _ in summands[n + 1]]
        tgt_pos = pos[n + 1]
        for col, (p, s1, s2) in enumerate(summands[n]):
            q = n - p
            w = Fp.terms[q][s2]
            if p in E.diffs:
                for i1, row in enumerate(E.diffs[p]):
                    x = row[s1]
                    if not x:
                        continue
                    r = tgt_pos.get((p + 1, i1, s2))
                    if r is not None:
                        for k, c in x.items():
                            key = A.pair_index(k, A.idempotents[w])
                            d[r][col][key] = c
            if q in Fp.diffs:
                sign = f.one if p % 2 == 0 else f.neg(f.one)
                v = E.terms[p][s1]
                for i2, row in enumerate(Fp.diffs[q]):
                    z = row[s2]
                    if not z:
                        continue
                    r = tgt_pos.get((p, s1, i2))
                    if r is not None:
                        for k, c in z.items():
                            key = A.pair_index(A.idempotents[v], k)
                            d[r][col][key] = f.mul(sign, c)
        diffs[n] = d
    return ProjComplex(env, terms, diffs, check=True)


def _encode_env_vertex(env, v, w):
    _, c = env._pair
    return v * c.num_vertices + w


def serre_kernel(A: Algebra) -> Kernel:
    return Kernel.serre(A)


def kernel_apply(K: Kernel, X: ProjComplex):
    """The kernel functor on objects: K ∘ X for a left-module complex X.
    Returns a ProjComplex when possible, else a ModuleComplex."""
    A = K.algebra
    if K.kind == "diagonal":
        return X
    if K.kind == "serre":
        return serre_twist_left(X)
    if K.kind == "general":
        return tensor_env_left(K.complex, X)
    if K.twist is None:
        W = tensor_right_left(K.right, X)
        return tensor_proj_with_field_complex(K.left, W)
    if K.twist == "left":
        # (DA (x) G) (x) (H' (x)_A X)
        W = tensor_right_left(K.right, X)
        M = serre_twist_left(K.left)
        return tensor_module_with_field_complex(M, W)
    # twist == 'right': G (x) (H' (x)_A DA (x)_A X)
    MX = serre_twist_left(X)
    W = tensor_right_module_complex(K.right, MX)
    return tensor_proj_with_field_complex(K.left, W)


def kernel_adjoint(K: Kernel, which: str) -> Kernel:
    """Left or right adjoint kernel.

    For K = E (x) F' the right adjoint is (DA (x)_A F'^v) (x) E^v and the
    left adjoint is F'^v (x) (E^v (x)_A DA); the DA factor stays symbolic
    (a twist tag) until the kernel is applied or convolved.  Taking the
    opposite adjoint of a twisted kernel undoes the twist by genuinely
    dualizing the parts again."""
    assert which in ("left", "right")
    if K.kind == "diagonal":
        return K
    if K.kind != "decomposable":
        raise UnsupportedKernelShape(
            f"adjoints of {K.kind} kernels are not supported")
    if K.twist is None:
        return Kernel.decomposable(dualize(K.right), dualize(K.left),
                                   twist=("left" if which == "right" else "right"))
    if K.twist == "left" and which == "left":
        return Kernel.decomposable(dualize(K.right), dualize(K.left), twist=None)
    if K.twist == "right" and which == "right":
        return Kernel.decomposable(dualize(K.right), dualize(K.left), twist=None)
    raise UnsupportedKernelShape(
        f"{which} adjoint of a {K.twist}-twisted kernel")


def convolution(L: Kernel, K: Kernel, depth: int = 8):
    """L ∘ K as a kernel; the diagonal acts as the unit and decomposable
    pairs contract through the inner plain complex."""
    A = L.algebra if L.kind != "serre" else K.algebra
    if K.kind == "diagonal":
        return L
    if L.kind == "diagonal":
        return K
    if K.kind == "serre":
        if L.kind == "decomposable" and L.twist is None:
            return Kernel.decomposable(L.left, L.right, twist="right")
        if L.kind == "general":
            return tensor_env_module(L.complex, K.module)
        raise UnsupportedKernelShape(f"{L!r} ∘ serre")
    if L.kind == "serre":
        if K.kind == "decomposable" and K.twist is None:
            return Kernel.decomposable(K.left, K.right, twist="left")
        raise UnsupportedKernelShape(f"serre ∘ {K!r}")
    if L.kind == "decomposable" and K.kind == "decomposable" \
            and L.twist is None and K.twist is None:
        W = tensor_right_left(L.right, K.left)
        E = tensor_proj_with_field_complex(L.left, W)
        return Kernel.decomposable(E, K.right)
    # fall back to projective bimodule complexes
    P = as_env_complex(L, depth)
    Q = as_env_complex(K, depth)
    return Kernel.general(tensor_env_env(P, Q))


def convolution_homology_dims(L: Kernel, K: Kernel) -> dict:
    """Graded homology dimensions of L ∘ K, supporting the adjoint-twisted
    decomposable shapes via the Kuenneth formula (exact over a field)."""
    assert L.kind == "decomposable" and K.kind == "decomposable"
    A = L.algebra

    def realized_homology(cx):
        if isinstance(cx, ProjComplex):
            return cx.realize().homology_dims()
        if isinstance(cx, ModuleComplex):
            from .complexes import FieldComplex
            dims = {n: M.dim for n, M in cx.modules.items()}
            return FieldComplex(A.field, dims, dict(cx.diffs)).homology_dims()
        return cx.homology_dims()

    # the middle contraction picks up DA when it sits between the parts
    mid_twisted = (L.twist == "right") or (K.twist == "left")
    if L.twist == "right" and K.twist == "left":
        raise UnsupportedKernelShape("convolution of doubly twisted kernels")
    if mid_twisted:
        W = tensor_right_module_complex(L.right, serre_twist_left(K.left))
    else:
        W = tensor_right_left(L.right, K.left)
    hL = realized_homology(L.left) if L.twist != "left" \
        else realized_homology(serre_twist_left(L.left))
    hW = W.homology_dims()
    if K.twist == "right":
        hR = tensor_right_module_complex(
            K.right, module_complex_single(_dual_as_left(A))).homology_dims()
    else:
        hR = K.right.realize().homology_dims()
    out = {}
    for a, da in hL.items():
        for b, db in hW.items():
            for c, dc in hR.items():
                n = a + b + c
                out[n] = out.get(n, 0) + da * db * dc
    return {n: d for n, d in out.items() if d}


def _dual_as_left(A: Algebra) -> ModuleRep:
    """DA with only its left A-action (grading by the left vertex)."""
    from .modules import env_left_action
    D = dual_bimodule(A)
    env = D.algebra
    _, c = env._pair
    action = [env_left_action(D, i) for i in range(A.dim)]
    grading = tuple(code // c.num_vertices for code in D.grading)
    return ModuleRep(A, D.dim, action, grading, check=False)


def ext_between(K1: Kernel, K2, n_max: int, depth: int = 8) -> dict:
    """Graded dims of Ext(K1, K2) between kernels; K2 may also be a
    ModuleComplex (e.g. a convolution with the Serre kernel)."""
    src = as_env_complex(K1, n_max + 1 if K1.kind == "diagonal" else depth)
    if isinstance(K2, Kernel):
        if K2.kind == "serre":
            env = src.algebra
            return ModuleHomComplex(
                src, module_complex_single(K2.module)).ext_profile()
        tgt = as_env_complex(K2, depth)
        return hom_complex(src, tgt).ext_profile()
    if isinstance(K2, ModuleComplex):
        return ModuleHomComplex(src, K2).ext_profile()
    if isinstance(K2, ProjComplex):
        return hom_complex(src, K2).ext_profile()
    raise TypeError(type(K2))


def generalized_hoh(e, t, n_max: int, algebra=None) -> HHProfile:
    """Hochschild cohomology with support t and coefficients e:
    the graded dimensions of Ext(e, e ∘ t).

    e: a Kernel, a projective bimodule complex, or 'diagonal';
    t: a Kernel, 'diagonal', 'serre', or a projective bimodule complex.
    """
    if isinstance(e, ProjComplex):
        e = Kernel.general(e)
    elif e == "diagonal":
        assert algebra is not None
        e = Kernel.diagonal(algebra)
    A = e.algebra
    if isinstance(t, ProjComplex):
        t = Kernel.general(t)
    elif t == "diagonal":
        t = Kernel.diagonal(A)
    elif t == "serre":
        t = Kernel.serre(A)
    depth = n_max + 1
    src = as_env_complex(e, depth)
    if t.kind == "diagonal":
        prof = hom_complex(src, src).ext_profile() if e.kind != "diagonal" \
            else ext_between(e, Kernel.general(src), n_max)
    elif t.kind == "serre":
        target = tensor_env_module(src, t.module)
        prof = ModuleHomComplex(src, target).ext_profile()
    else:
        target = tensor_env_env(src, as_env_complex(t, depth))
        prof = hom_complex(src, target).ext_profile()
    for n in prof:
        if n < 0:
            raise ValueError(f"negative-degree class at {n}; not a support "
                             "profile")
    return HHProfile.from_dict(prof, A.field, n_max)


# ---------------------------------------------------------------------------
# Projection kernels of an exceptional collection


def diagonal_class(A: Algebra, cap: int = 32) -> dict:
    depth = diagonal_bar_depth(A, cap)
    if radical_tuples(A, depth + 1):
        raise NormalizationFailed("the bar resolution does not terminate; "
                                  "no K_0 class for the diagonal")
    return bar_resolution(A, depth).euler_class()


def projection_kernels(coll: ExceptionalCollection, certified_full: bool = True):
    """Kernels P_i = E_i (x) F_i^v of the projection functors, with the
    dual-object shifts normalized by the K_0 identity
    sum_i [P_i] = [diagonal]."""
    A = coll.algebra
    duals, shifts = dual_collection(coll)
    target = diagonal_class(A)
    kernels = None
    for extra in (0, 1, -1):
        candidate = []
        total = {}
        for E, F, s in zip(coll.objects, duals, shifts):
            Fn = F.shift(s + extra)
            P = Kernel.decomposable(E, dualize(Fn))
            candidate.append(P)
            for v, c in decomposable_to_env(P.left, P.right).euler_class().items():
                total[v] = total.get(v, 0) + c
        if {v: c for v, c in total.items() if c} == target:
            kernels = candidate
            break
    if kernels is None:
        raise NormalizationFailed(
            "no shift of the dual objects satisfies the K_0 identity "
            "(the collection is not full)")
    for i, P in enumerate(kernels):
        prof = ext_profile(decomposable_to_env(P.left, P.right),
                           decomposable_to_env(P.left, P.right))
        if prof.get(0, 0) < 1:
            raise NormalizationFailed(
                f"Ext^0(P_{i+1}, P_{i+1}) has no identity class")
    return kernels


def orthogonality_report(kernels, serre: Kernel, n_max: int = 6) -> dict:
    """Ext(P_i, P_j ∘ S) for all ordered pairs, plus the vanishing of the
    adjoint convolutions P_i ∘ P_j^* (i < j) and P_i ∘ P_j^! (i > j)."""
    m = len(kernels)
    env_forms = [decomposable_to_env(P.left, P.right) for P in kernels]
    A = serre.algebra
    table = {}
    for i in range(m):
        for j in range(m):
            twisted = tensor_env_module(env_forms[j], serre.module)
            prof = ModuleHomComplex(env_forms[i], twisted).ext_profile()
            table[(i + 1, j + 1)] = dict(sorted(prof.items()))
    adjoint_vanishing = {}
    for i in range(m):
        for j in range(m):
            if i < j:
                conv = convolution_homology_dims(kernels[i],
                                                 kernel_adjoint(kernels[j], "left"))
                adjoint_vanishing[(i + 1, j + 1, "left")] = conv
            elif i > j:
                conv = convolution_homology_dims(kernels[i],
                                                 kernel_adjoint(kernels[j], "right"))
                adjoint_vanishing[(i + 1, j + 1, "right")] = conv
    offdiag_zero = all(not prof for (i, j), prof in table.items() if i != j)
    diag_ok = all(prof == {0: 1} for (i, j), prof in table.items() if i == j)
    adj_zero = all(not v for v in adjoint_vanishing.values())
    return {
        "ext_serre_table": table,
        "adjoint_convolutions": adjoint_vanishing,
        "offdiagonal_zero": offdiag_zero,
        "diagonal_identity": diag_ok,
        "adjoint_vanishing": adj_zero,
    }


def k0_identity_check(kernels, A: Algebra) -> bool:
    total = {}
    for P in kernels:
        for v, c in decomposable_to_env(P.left, P.right).euler_class().items():
            total[v] = total.get(v, 0) + c
    return {v: c for v, c in total.items() if c} == diagonal_class(A)


def additivity_check(A: Algebra, coll: ExceptionalCollection,
                     n_max: int = 6) -> dict:
    """Degreewise HH_n(A) = sum_i dim Ext^n(P_i, P_i ∘ S); each summand is
    (1, 0, ...) for exceptional-object components."""
    kernels = projection_kernels(coll)
    serre = Kernel.serre(A)
    hh = hh_homology(A, n_max)
    summands = []
    for P in kernels:
        envP = decomposable_to_env(P.left, P.right)
        twisted = tensor_env_module(envP, serre.module)
        prof = ModuleHomComplex(envP, twisted).ext_profile()
        summands.append(HHProfile.from_dict(prof, A.field, n_max))
    degreewise = all(
        hh.dim(n) == sum(s.dim(n) for s in summands) for n in range(n_max + 1))
    each_point = all(s.as_tuple() == (1,) + (0,) * n_max for s in summands)
    return {
        "hh_homology": hh,
        "summands": summands,
        "degreewise_equal": degreewise,
        "summands_are_points": each_point,
    }


def les_check(b: Algebra, c: Algebra, m: ModuleRep, n_max: int = 6) -> dict:
    """Euler identity (and, in the hereditary case, the full dimension
    chase) for the long exact sequence relating HH of a triangular gluing
    to HH of its pieces and the endomorphisms of the gluing bimodule."""
    from .modules import triangular_gluing
    glued = triangular_gluing(b, c, m)
    hhA = hh_cohomology(glued, n_max)
    hhb = hh_cohomology(b, n_max)
    hhc = hh_cohomology(c, n_max)
    res = projective_resolution(m, n_max + 1)
    extm = ModuleHomComplex(res, module_complex_single(m)).ext_profile()
    ext_prof = HHProfile.from_dict(extm, b.field, n_max)
    for prof, name in ((hhA, "HH(A)"), (hhb, "HH(b)"), (hhc, "HH(c)"),
                       (ext_prof, "Ext(m,m)")):
        if prof.dim(n_max) != 0:
            raise RangeNotCertified(f"{name} is nonzero at degree {n_max}")
    euler = sum((-1) ** t * (hhA.dim(t) - hhb.dim(t) - hhc.dim(t)
                             + ext_prof.dim(t))
                for t in range(n_max + 1))
    out = {
        "glued": glued,
        "hh_glued": hhA,
        "hh_b": hhb,
        "hh_c": hhc,
        "ext_mm": ext_prof,
        "euler_sum": euler,
        "euler_zero": euler == 0,
    }
    hereditary = not b.radical_indices() and not c.radical_indices()
    out["hereditary"] = hereditary
    if hereditary:
        chase = (hhA.dim(0), hhb.dim(0) + hhc.dim(0), ext_prof.dim(0),
                 hhA.dim(1))
        tail_zero = (all(hhA.dim(t) == 0 for t in range(2, n_max + 1))
                     and all(ext_prof.dim(t) == 0 for t in range(1, n_max + 1))
                     and all(hhb.dim(t) + hhc.dim(t) == 0
                             for t in range(1, n_max + 1)))
        a0, bc0, e0, a1 = chase
        partial_ok = a0 <= bc0 and (bc0 - a0) <= e0 and a1 <= e0 - (bc0 - a0)
        out["chase"] = chase
        out["chase_exact"] = (tail_zero and partial_ok
                              and a0 - bc0 + e0 - a1 == 0)
    return out


def fullness_certificate(A: Algebra, coll: ExceptionalCollection,
                         n_max: int = 6) -> dict:
    """Compare total Hochschild homology with the collection length; each
    exceptional component contributes exactly one dimension, so equality
    certifies fullness modulo the Nonvanishing Conjecture."""
    hh = hh_homology(A, n_max)
    from .hochschild import global_dimension
    gd = global_dimension(A, n_max)
    if gd is None:
        raise RangeNotCertified(
            f"global dimension exceeds {n_max}; total HH_* not certified")
    total = hh.total()
    m = len(coll)
    if m == total:
        verdict = "full modulo Nonvanishing Conjecture"
    elif m < total:
        verdict = "not full"
    else:
        verdict = "inconsistent"
    return {"hh_total": total, "collection_length": m, "verdict": verdict,
            "hh_homology": hh}
