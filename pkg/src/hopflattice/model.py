"""Vertex and plaquette operators on the edge space of a cell decomposition.

The state space is one copy of R per edge, in edge order.  Operators are
:class:`~hopflattice.tensorops.LocalOperator` objects built from iterated
coproducts whose legs act on the edges around a vertex or a face; nothing is
materialized on the full space except in the explicit small-space helpers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg

from .double import drinfeld_double, site_rep_check
from .errors import Mismatch, NonIntegerTrace
from .hopf import coproduct_tensors, dual_hopf, haar_integral, regular_actions
from .rep import DEFAULT_SEED
from .surface import dual_decomposition, dual_site, flip_edge
from .tensorops import LocalOperator, projector_trace, restrict

TOL_OP = 1e-10
TOL_TRACE = 1e-6
RANK_TOL = 1e-8
RANK_CHECK_LIMIT = 10_000
DENSE_RANK_LIMIT = 2048


def _max_abs(a):
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


@dataclass(eq=False)
class LatticeModel:
    algebra: object
    cells: object
    _coproducts: dict = field(default_factory=dict, repr=False)

    @property
    def n_edges(self):
        return self.cells.n_edges

    @property
    def edge_order(self):
        return tuple(range(self.cells.n_edges))

    @property
    def factor_dims(self):
        return (self.algebra.dim,) * self.cells.n_edges

    @property
    def state_dim(self):
        return self.algebra.dim ** self.cells.n_edges

    @cached_property
    def actions(self):
        return regular_actions(self.algebra)

    @cached_property
    def dual(self):
        return dual_hopf(self.algebra)

    @cached_property
    def haar(self):
        return haar_integral(self.algebra).element

    @cached_property
    def haar_dual(self):
        return haar_integral(self.dual).element

    @cached_property
    def double(self):
        return drinfeld_double(self.algebra)

    def coproduct_legs(self, k):
        """Iterated coproduct of R into k legs, shape (dim,) + (dim,) * k."""
        if ("R", k) not in self._coproducts:
            self._coproducts["R", k] = coproduct_tensors(self.algebra, k)
        return self._coproducts["R", k]

    def dual_coproduct_legs(self, k):
        """Iterated coproduct of R^* (dual to the product of R) into k legs.

        Rbar's coproduct lists the same legs in reverse order.
        """
        if ("R*", k) not in self._coproducts:
            t = coproduct_tensors(self.dual, k)
            self._coproducts["R*", k] = np.ascontiguousarray(
                t.transpose((0,) + tuple(range(k, 0, -1))))
        return self._coproducts["R*", k]

    # edge legs, shared with the labeled model
    def vertex_legs(self, s, offset=0):
        acts = self.actions
        return [(offset + self.cells.edge_of[d], acts.left if self.cells.is_positive(d) else acts.right)
                for d in self.cells.vertex_darts(s.anchor_dart)]

    def plaquette_legs(self, s, offset=0):
        acts = self.actions
        return [(offset + self.cells.edge_of[d],
                 acts.right_dual if self.cells.is_positive(d) else acts.left_dual)
                for d in self.cells.face_darts(s.anchor_dart)]

    def vertex_operator(self, s, a):
        """A^a at site s: legs counterclockwise from the face of s, left or right-by-S actions."""
        self.cells.check_site(s)
        legs = self.vertex_legs(s)
        coeff = np.tensordot(np.asarray(a), self.coproduct_legs(len(legs)), 1)
        return LocalOperator(coeff, legs, self.factor_dims)

    def plaquette_operator(self, s, alpha):
        """B^alpha at site s: traversal of the face starting at the vertex of s."""
        self.cells.check_site(s)
        legs = self.plaquette_legs(s)
        coeff = np.tensordot(np.asarray(alpha), self.dual_coproduct_legs(len(legs)), 1)
        return LocalOperator(coeff, legs, self.factor_dims)

    def default_site_at_vertex(self, v):
        d = self.cells.vertices[v][0]
        return self.cells.site(v, self.cells.face_of[d], d)

    def default_site_at_face(self, p):
        d = self.cells.faces[p][0]
        return self.cells.site(self.cells.vertex_of[d], p, d)

    def vertex_projector(self, v, anchor=None):
        s = self.default_site_at_vertex(v) if anchor is None else \
            self.cells.site(v, self.cells.face_of[anchor], anchor)
        return self.vertex_operator(s, self.haar)

    def plaquette_projector(self, p, anchor=None):
        s = self.default_site_at_face(p) if anchor is None else \
            self.cells.site(self.cells.vertex_of[anchor], p, anchor)
        return self.plaquette_operator(s, self.haar_dual)


def haar_projectors(M, tol=TOL_OP):
    """Projectors A_v and B_p, each checked to be independent of the anchor dart.

    Returns (A, B, residual) where A, B are lists of LocalOperators.
    """
    C = M.cells
    worst = 0.0
    A, B = [], []
    for v in range(C.n_vertices):
        ops = [M.vertex_projector(v, d) for d in C.vertices[v]]
        ref = ops[0].local_matrix()
        for op in ops[1:]:
            worst = max(worst, _max_abs(op.local_matrix() - ref))
        A.append(ops[0])
    for p in range(C.n_faces):
        ops = [M.plaquette_projector(p, d) for d in C.faces[p]]
        ref = ops[0].local_matrix()
        for op in ops[1:]:
            worst = max(worst, _max_abs(op.local_matrix() - ref))
        B.append(ops[0])
    if worst > tol:
        raise Mismatch(f"Haar projectors depend on the anchor (residual {worst:.3e})")
    return A, B, worst


def basis_families(M, s):
    """A^{e_a} and B^{e^b} at site s, for every basis index."""
    n = M.algebra.dim
    eye = np.eye(n)
    return ([M.vertex_operator(s, eye[a]) for a in range(n)],
            [M.plaquette_operator(s, eye[b]) for b in range(n)])


def site_double_action(M, s):
    """Residual of a (x) alpha -> A^a B^alpha being an algebra morphism of D(R)."""
    A, B = basis_families(M, s)
    mats, _ = restrict(A + B)
    n = M.algebra.dim
    return site_rep_check(M.double, np.array(mats[:n]), np.array(mats[n:]))


def _commutator_residual(X, Y):
    """max over pairs of |[X_i, Y_j]| for two families of square matrices."""
    worst = 0.0
    for x in X:
        xy = np.matmul(x, Y)
        yx = np.matmul(Y, x)
        worst = max(worst, _max_abs(xy - yx))
    return worst


def _family_pair_residual(fam1, fam2):
    # operators on disjoint sets of tensor factors commute exactly
    if not set(fam1[0].support) & set(fam2[0].support):
        return 0.0
    mats, _ = restrict(fam1 + fam2)
    k = len(fam1)
    return _commutator_residual(np.array(mats[:k]), np.array(mats[k:]))


def commutation_checks(M):
    """Residuals of the commutation relations between distinct vertices, distinct faces,
    and non-incident vertex/face pairs, for all basis labels."""
    C = M.cells
    n = M.algebra.dim
    eye = np.eye(n)
    vsites = [M.default_site_at_vertex(v) for v in range(C.n_vertices)]
    fsites = [M.default_site_at_face(p) for p in range(C.n_faces)]
    Afam = [[M.vertex_operator(s, eye[a]) for a in range(n)] for s in vsites]
    Bfam = [[M.plaquette_operator(s, eye[b]) for b in range(n)] for s in fsites]
    res = {"vertex_vertex": 0.0, "face_face": 0.0, "vertex_face_nonincident": 0.0}
    for v in range(C.n_vertices):
        for w in range(v + 1, C.n_vertices):
            res["vertex_vertex"] = max(res["vertex_vertex"], _family_pair_residual(Afam[v], Afam[w]))
    for p in range(C.n_faces):
        for q in range(p + 1, C.n_faces):
            res["face_face"] = max(res["face_face"], _family_pair_residual(Bfam[p], Bfam[q]))
    for v in range(C.n_vertices):
        for p in range(C.n_faces):
            if not C.incident(v, p):
                res["vertex_face_nonincident"] = max(res["vertex_face_nonincident"],
                                                     _family_pair_residual(Afam[v], Bfam[p]))
    return res


def projector_checks(M):
    """Idempotency and pairwise commutation of all Haar projectors, plus anchor independence."""
    A, B, anchor = haar_projectors(M)
    ops = A + B
    idem = 0.0
    for op in ops:
        m = op.local_matrix()
        idem = max(idem, _max_abs(m @ m - m))
    comm = 0.0
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            if not set(ops[i].support) & set(ops[j].support):
                continue
            mats, _ = restrict([ops[i], ops[j]])
            comm = max(comm, _max_abs(mats[0] @ mats[1] - mats[1] @ mats[0]))
    return {"idempotent": idem, "commute": comm, "anchor_independence": anchor}


def dual_model(M):
    """The model for Rbar on the dual decomposition."""
    return LatticeModel(M.dual, dual_decomposition(M.cells))


def duality_check(M, s, sample=None, seed=DEFAULT_SEED):
    """Residuals of the pairing identities between M and its dual model at site s.

    With the coordinate pairing of each edge, <y, O x> = <O' y, x> says that the
    local matrix of O equals the transpose of O'.  Both identities are checked on
    every basis label; ``sample`` limits the labels to a seeded random subset.
    """
    Md = dual_model(M)
    t = dual_site(M.cells, Md.cells, s)
    n = M.algebra.dim
    labels = np.arange(n)
    if sample is not None and sample < n:
        labels = np.sort(np.random.default_rng(seed).choice(n, size=sample, replace=False))
    eye = np.eye(n)
    S = M.algebra.antipode
    res = {"B_vs_dual_A": 0.0, "A_vs_dual_B": 0.0}
    for c in labels:
        b = M.plaquette_operator(s, eye[c])
        a_dual = Md.vertex_operator(t, S @ eye[c])   # Rbar shares the antipode matrix with R
        mats, _ = restrict([b, a_dual])
        res["B_vs_dual_A"] = max(res["B_vs_dual_A"], _max_abs(mats[0] - mats[1].T))
        a = M.vertex_operator(s, eye[c])
        b_dual = Md.plaquette_operator(t, eye[c])
        mats, _ = restrict([a, b_dual])
        res["A_vs_dual_B"] = max(res["A_vs_dual_B"], _max_abs(mats[0] - mats[1].T))
    return res


def _conjugate_factor(t, m, pos, S):
    """S_pos . t . S_pos on a local tensor with axes (out_1..out_m, in_1..in_m)."""
    t = np.moveaxis(np.tensordot(S, t, axes=(1, pos)), 0, pos)
    return np.moveaxis(np.tensordot(t, S, axes=(m + pos, 0)), -1, m + pos)


def orientation_reversal_consistency(M, e):
    """Flip edge e and compare every operator with its conjugate by S on that edge."""
    Mf = LatticeModel(M.algebra, flip_edge(M.cells, e))
    S = M.algebra.antipode
    n = M.algebra.dim
    eye = np.eye(n)
    worst = 0.0
    C = M.cells
    for d in range(C.n_darts):
        s = C.site(C.vertex_of[d], C.face_of[d], d)
        for c in range(n):
            for build in ("vertex_operator", "plaquette_operator"):
                op = getattr(M, build)(s, eye[c])
                opf = getattr(Mf, build)(s, eye[c])
                t = op.local_tensor()
                sup = op.support
                if e in sup:
                    t = _conjugate_factor(t, len(sup), sup.index(e), S)
                worst = max(worst, _max_abs(t - opf.local_tensor()))
    return worst


def _check_integer(value, what, tol=TOL_TRACE):
    if abs(np.imag(value)) > tol or abs(np.real(value) - round(float(np.real(value)))) > tol:
        raise NonIntegerTrace(value, what)
    return int(round(float(np.real(value))))


def _sketch_rank(ops, dims, k, seed):
    """Rank of P Omega for a random Omega with k columns (exact once k > rank P)."""
    total = int(np.prod(dims))
    rng = np.random.default_rng(seed)
    state = rng.standard_normal((total, k)).reshape(tuple(dims) + (k,))
    for op in reversed(ops):
        state = op.apply(state)
    Y = state.reshape(total, k)
    s = np.linalg.svd(Y, compute_uv=False)
    return int(np.sum(s > RANK_TOL * max(1.0, s[0] if s.size else 0.0)))


def _dense_rank(ops, dims):
    total = int(np.prod(dims))
    state = np.eye(total).reshape(tuple(dims) + (total,))
    for op in reversed(ops):
        state = op.apply(state)
    P = state.reshape(total, total)
    _, r, _ = scipy.linalg.qr(P, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    return int(np.sum(diag > RANK_TOL * max(1.0, diag[0] if diag.size else 0.0)))


def projector_dim(ops, dims, what="projector", rank_check=True, seed=DEFAULT_SEED, method="auto"):
    """Dimension of the image of a product of commuting projectors.

    Returns (dim, info) where info records the raw trace and the rank cross-check.
    """
    dims = tuple(dims)
    total = int(np.prod(dims))
    raw = projector_trace(ops, dims, method=method)
    dim = _check_integer(raw, what)
    info = {"trace": complex(raw) if np.iscomplexobj(raw) else float(raw), "rank": None}
    if rank_check and total <= RANK_CHECK_LIMIT:
        if total <= DENSE_RANK_LIMIT:
            rank = _dense_rank(ops, dims)
        else:
            rank = _sketch_rank(ops, dims, min(total, dim + 16), seed)
        info["rank"] = rank
        if rank != dim:
            raise NonIntegerTrace(raw, f"{what}: trace {dim} but rank {rank}")
    return dim, info


def ground_space_dim(M, rank_check=True, seed=DEFAULT_SEED, method="auto", return_info=False):
    A, B, _ = haar_projectors(M)
    dim, info = projector_dim(A + B, M.factor_dims, "ground space", rank_check, seed, method)
    return (dim, info) if return_info else dim
