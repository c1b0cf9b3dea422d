"""Labeled sites, the excitation space L(S) and protected spaces M(Y_1, ..., Y_n).

Labels are D(R)-modules given as one matrix per basis element of D(R).  The
extended space puts the label spaces first, then one copy of R per edge.

Two independent computations of dim M:

* route A: the joint fixed space of the tilde projectors on the extended space;
* route B: inside L(S), the isotypic projector of Y_i^* at each site s_i,
  divided by the product of the label dimensions.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .double import site_rep_check
from .errors import DimensionMismatch, NonIntegerMultiplicity, NotAMorphism
from .model import TOL_TRACE, LatticeModel, haar_projectors, projector_dim
from .rep import DEFAULT_SEED, block_module, check_morphism, dual_blocks, wedderburn
from .surface import require_disjoint
from .tensorops import LocalOperator, projector_trace, restrict

TOL_LABEL = 1e-9


class DoubleBlocks:
    """Blocks of D(R) with one irreducible module per block, built lazily."""

    def __init__(self, double, seed=DEFAULT_SEED):
        self.double = double
        self.seed = seed
        self.wedderburn = wedderburn(double.hopf, seed=seed)
        self._modules = {}

    @property
    def n_blocks(self):
        return self.wedderburn.n_blocks

    @property
    def dims(self):
        return self.wedderburn.block_dims

    @property
    def trivial(self):
        return self.wedderburn.trivial_index

    @cached_property
    def duals(self):
        return dual_blocks(self.wedderburn)

    def module(self, i):
        if i not in self._modules:
            self._modules[i] = block_module(self.double.hopf, self.wedderburn, i, seed=self.seed)
        return self._modules[i]


def invariant_dim(D, rho_y, rho_z):
    """dim of the D(R)-invariants in Y (x) Z, by the Haar integral of D(R)."""
    HD = D.hopf
    from .hopf import haar_integral
    h = haar_integral(HD).element
    delta = np.tensordot(h, HD.comul, 1)
    P = np.einsum("uw,uij,wkl->ikjl", delta, rho_y, rho_z)
    d = rho_y.shape[1] * rho_z.shape[1]
    return int(round(float(np.real(np.trace(P.reshape(d, d))))))


@dataclass(eq=False)
class LabeledModel:
    base: LatticeModel
    sites: list
    labels: list

    def __post_init__(self):
        require_disjoint(self.base.cells, self.sites)
        if len(self.sites) != len(self.labels):
            raise DimensionMismatch("one label per site is required")
        self.labels = [np.asarray(y) for y in self.labels]
        HD = self.base.double.hopf
        for y in self.labels:
            if y.ndim != 3 or y.shape[0] != HD.dim or y.shape[1] != y.shape[2]:
                raise DimensionMismatch(f"label of shape {y.shape} is not a D(R)-module family")
            res = check_morphism(HD, y)
            if res > TOL_LABEL:
                raise NotAMorphism(f"label fails the morphism test (residual {res:.3e})")

    @property
    def n_labels(self):
        return len(self.labels)

    @property
    def label_dims(self):
        return tuple(y.shape[1] for y in self.labels)

    @property
    def factor_dims(self):
        return self.label_dims + self.base.factor_dims

    @property
    def extended_dim(self):
        return int(np.prod(self.label_dims)) * self.base.state_dim

    def _label_of_vertex(self, v):
        return next((i for i, s in enumerate(self.sites) if s.vertex == v), None)

    def _label_of_face(self, p):
        return next((i for i, s in enumerate(self.sites) if s.face == p), None)

    def _lift(self, op):
        return LocalOperator(op.coeff, [(self.n_labels + f, m) for f, m in op.legs], self.factor_dims)

    def vertex_operator(self, v, a, site=None):
        """A~^a at vertex v.  At a labeled vertex the label takes the first leg,
        placed at the face of its site, followed by the edges counterclockwise."""
        M = self.base
        i = self._label_of_vertex(v)
        if i is None:
            s = site or M.default_site_at_vertex(v)
            return self._lift(M.vertex_operator(s, a))
        s = self.sites[i]
        legs = M.vertex_legs(s, offset=self.n_labels)
        y = np.tensordot(M.double.factor_r.T, self.labels[i], 1)      # e_c acting on Y_i
        coeff = np.tensordot(np.asarray(a), M.coproduct_legs(len(legs) + 1), 1)
        return LocalOperator(coeff, [(i, y)] + legs, self.factor_dims)

    def plaquette_operator(self, p, alpha, site=None):
        """B~^alpha at face p.  At a labeled face the label takes the last R^*-leg,
        after the traversal of the boundary that starts and ends at the site's vertex."""
        M = self.base
        i = self._label_of_face(p)
        if i is None:
            s = site or M.default_site_at_face(p)
            return self._lift(M.plaquette_operator(s, alpha))
        s = self.sites[i]
        legs = M.plaquette_legs(s, offset=self.n_labels)
        y = np.tensordot(M.double.factor_rbar.T, self.labels[i], 1)   # e^c acting on Y_i
        coeff = np.tensordot(np.asarray(alpha), M.dual_coproduct_legs(len(legs) + 1), 1)
        return LocalOperator(coeff, legs + [(i, y)], self.factor_dims)

    def site_families(self, v, p, site=None):
        """A~^{e_a} at v and B~^{e^b} at p for every basis index."""
        n = self.base.algebra.dim
        eye = np.eye(n)
        return ([self.vertex_operator(v, eye[a], site) for a in range(n)],
                [self.plaquette_operator(p, eye[b], site) for b in range(n)])


def tilde_operators(LM):
    """Tilde Haar projectors: one per vertex and one per face."""
    M = LM.base
    C = M.cells
    A = [LM.vertex_operator(v, M.haar) for v in range(C.n_vertices)]
    B = [LM.plaquette_operator(p, M.haar_dual) for p in range(C.n_faces)]
    return A, B


def labeled_site_rep_residual(LM, i):
    """Site-morphism residual of (A~, B~) at the i-th labeled site."""
    s = LM.sites[i]
    A, B = LM.site_families(s.vertex, s.face)
    mats, _ = restrict(A + B)
    n = LM.base.algebra.dim
    return site_rep_check(LM.base.double, np.array(mats[:n]), np.array(mats[n:]))


def tilde_idempotency(LM):
    A, B = tilde_operators(LM)
    worst = 0.0
    for op in A + B:
        m = op.local_matrix()
        worst = max(worst, float(np.max(np.abs(m @ m - m))))
    return worst


def excitation_space_dim(M, sites, rank_check=True, seed=DEFAULT_SEED):
    """dim L(S): joint fixed space of A_v (v not in S) and B_p (p not in S)."""
    require_disjoint(M.cells, sites)
    A, B, _ = haar_projectors(M)
    vs = {s.vertex for s in sites}
    ps = {s.face for s in sites}
    ops = [a for v, a in enumerate(A) if v not in vs] + [b for p, b in enumerate(B) if p not in ps]
    dim, _ = projector_dim(ops, M.factor_dims, "excitation space", rank_check, seed)
    return dim


def protected_dim_route_a(LM, rank_check=True, seed=DEFAULT_SEED):
    A, B = tilde_operators(LM)
    dim, _ = projector_dim(A + B, LM.factor_dims, "protected space", rank_check, seed)
    return dim


def site_action_operator(M, s, E):
    """rho_s(E) = sum E[a, b] A^{e_a} B^{e^b} as a single local operator."""
    n = M.algebra.dim
    E = np.asarray(E).reshape(n, n)
    vlegs = M.vertex_legs(s)
    plegs = M.plaquette_legs(s)
    tv = M.coproduct_legs(len(vlegs))
    tp = M.dual_coproduct_legs(len(plegs))
    coeff = np.tensordot(np.tensordot(E, tv, axes=(0, 0)), tp, axes=(0, 0))
    return LocalOperator(coeff, vlegs + plegs, M.factor_dims)


def protected_dim_route_b(M, sites, blocks, db=None, seed=DEFAULT_SEED):
    """dim M from the Y_i^* isotypic part of L(S), divided by prod dim Y_i."""
    require_disjoint(M.cells, sites)
    db = db or DoubleBlocks(M.double, seed)
    if len(blocks) != len(sites):
        raise DimensionMismatch("one block index per site is required")
    A, B, _ = haar_projectors(M)
    vs = {s.vertex for s in sites}
    ps = {s.face for s in sites}
    ops = [a for v, a in enumerate(A) if v not in vs] + [b for p, b in enumerate(B) if p not in ps]
    denom = 1
    for s, i in zip(sites, blocks):
        ops.append(site_action_operator(M, s, db.wedderburn.idempotents[db.duals[i]]))
        denom *= db.dims[i]
    raw = projector_trace(ops, M.factor_dims)
    if abs(np.imag(raw)) > TOL_TRACE:
        raise NonIntegerMultiplicity(f"complex isotypic trace {raw!r}")
    val = float(np.real(raw)) / denom
    if abs(val - round(val)) > TOL_TRACE:
        raise NonIntegerMultiplicity(f"isotypic trace {raw!r} is not divisible by {denom}")
    return int(round(val))


@dataclass
class ProtectedSpace:
    labels: tuple
    route_a_dim: int
    route_b_dim: int

    @property
    def dim(self):
        return self.route_a_dim

    @property
    def consistent(self):
        return self.route_a_dim == self.route_b_dim


def protected_space(M, sites, blocks, db=None, seed=DEFAULT_SEED):
    db = db or DoubleBlocks(M.double, seed)
    LM = LabeledModel(M, list(sites), [db.module(i) for i in blocks])
    return ProtectedSpace(tuple(blocks), protected_dim_route_a(LM, seed=seed),
                          protected_dim_route_b(M, sites, blocks, db, seed))


def protected_table(M, sites, db=None, seed=DEFAULT_SEED, block_sets=None):
    """Protected spaces for every block tuple, with the consistency sum against dim L(S)."""
    db = db or DoubleBlocks(M.double, seed)
    tuples = itertools.product(*(block_sets or [range(db.n_blocks)] * len(sites)))
    table = [protected_space(M, sites, t, db, seed) for t in tuples]
    l_dim = excitation_space_dim(M, sites, seed=seed)
    total = sum(int(np.prod([db.dims[i] for i in ps.labels])) * ps.route_b_dim for ps in table)
    return table, l_dim, total


def smearing_map(D, Y, hbar):
    """The map Y (x) R -> Y, y (x) r -> hbar''.y <hbar', r>, as an array [y', y, r]."""
    T = np.tensordot(hbar, D.dual.comul, 1)             # Rbar legs (hbar'', hbar')
    ybar = np.tensordot(D.factor_rbar.T, np.asarray(Y), 1)
    return np.einsum("jr,jab->abr", T, ybar)


def haar_half_braiding_check(D, Y, hbar=None, model=None, label_index=0):
    """Residuals for the hbar-smearing of a D(R)-module Y.

    symmetry:  Delta(hbar) is invariant under swapping its legs;
    trivial:   when Rbar acts on a one-dimensional Y by the counit, the smearing
               is y (x) r -> <hbar, r> y;
    composite: for a labeled model, B~^hbar at the labeled face equals
               sum hbar_(1) acting by the plain B_p on the edges and hbar_(2)
               acting on the label (coproduct of R^*).
    """
    from .hopf import haar_integral
    Hb = D.dual
    n = D.base.dim
    hbar = haar_integral(Hb).element if hbar is None else np.asarray(hbar)
    Y = np.asarray(Y)
    T = np.tensordot(hbar, Hb.comul, 1)
    res = {"symmetry": float(np.max(np.abs(T - T.T)))}
    ybar = np.tensordot(D.factor_rbar.T, Y, 1)
    eps_bar = D.factor_rbar.T @ D.hopf.counit
    if Y.shape[1] == 1 and np.allclose(ybar[:, 0, 0], eps_bar):
        res["trivial"] = float(np.max(np.abs(smearing_map(D, Y, hbar)[0, 0] - hbar)))
    if model is not None:
        LM, i = model, label_index
        s = LM.sites[i]
        M = LM.base
        tm, tsupport = restrict([LM.plaquette_operator(s.face, hbar)])
        plain, support = restrict([M.plaquette_operator(s, np.eye(n)[j]) for j in range(n)])
        if tsupport != (i,) + tuple(LM.n_labels + f for f in support):
            raise DimensionMismatch("unexpected support ordering for the labeled plaquette")
        t_star = np.tensordot(hbar, M.dual_coproduct_legs(2), 1)
        y_i = np.tensordot(D.factor_rbar.T, LM.labels[i], 1)
        comp = sum(t_star[j, c] * np.kron(y_i[c], plain[j]) for j in range(n) for c in range(n))
        res["composite"] = float(np.max(np.abs(tm[0] - comp)))
    return res
