"""Block decomposition of semisimple algebras through central idempotents.

No irreducible matrices are chosen up front: everything is derived from
primitive central idempotents, ranks in the regular representation and,
when a concrete irreducible module is needed, a minimal left ideal.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NotAMorphism, NotSemisimple, RandomizationExhausted
from .hopf import _clean

DEFAULT_SEED = 0xC0FFEE
TOL_IDEM = 1e-9
CLUSTER_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class WedderburnData:
    algebra: object
    idempotents: np.ndarray     # shape (blocks, dim)
    block_dims: tuple
    trivial_index: int

    @property
    def n_blocks(self):
        return len(self.block_dims)

    def residuals(self):
        H, E = self.algebra, self.idempotents
        r = {"orthogonality": 0.0, "centrality": 0.0}
        for i in range(self.n_blocks):
            for j in range(self.n_blocks):
                target = E[i] if i == j else 0
                r["orthogonality"] = max(r["orthogonality"],
                                         float(np.max(np.abs(H.multiply(E[i], E[j]) - target))))
            for k in range(H.dim):
                ek = H.basis(k)
                r["centrality"] = max(r["centrality"], float(np.max(np.abs(
                    H.multiply(E[i], ek) - H.multiply(ek, E[i])))))
        r["completeness"] = float(np.max(np.abs(E.sum(axis=0) - H.unit)))
        return r


def _rank(m, tol=1e-8):
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0] if s.size else 0.0)))


def center_basis(H):
    """Basis of the center as columns: nullspace of z e_k - e_k z over all k."""
    blocks = [H.right_matrix(H.basis(k)) - H.left_matrix(H.basis(k)) for k in range(H.dim)]
    return scipy.linalg.null_space(np.vstack(blocks), rcond=1e-10)


def _cluster(values, tol):
    reps = []
    for v in values:
        if all(abs(v - r) > tol for r in reps):
            reps.append(v)
    return reps


def _eigen_idempotents(H, Z, Lz):
    """Idempotents as normalized eigenvectors of multiplication by z on the center.

    Each eigenvector u spans a block of the center, so u^2 = mu u and e = u / mu.
    This avoids the long products of the Lagrange interpolation formula.
    """
    _, V = np.linalg.eig(Lz)
    out = []
    for k in range(V.shape[1]):
        u = Z @ V[:, k]
        uu = H.multiply(u, u)
        mu = np.vdot(u, uu) / np.vdot(u, u)
        out.append(u / mu)
    return out


def _lagrange_idempotents(H, z, eigs, unit):
    """e_lambda = prod_{mu != lambda} (z - mu) / (lambda - mu), computed in the algebra."""
    out = []
    for a, lam in enumerate(eigs):
        e = unit.astype(complex)
        for b, mu in enumerate(eigs):
            if a == b:
                continue
            e = H.multiply(e, z - mu * unit) / (lam - mu)
        out.append(e)
    return out


def wedderburn(H, seed=DEFAULT_SEED, max_tries=20):
    """Primitive central idempotents and block dimensions of a semisimple algebra."""
    Z = center_basis(H)
    c = Z.shape[1]
    if c == 0:
        raise NotSemisimple(f"{H.name}: empty center")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        z = Z @ rng.standard_normal(c)
        # multiplication by z restricted to the center
        Lz = np.linalg.lstsq(Z, H.left_matrix(z) @ Z, rcond=None)[0]
        eigs = _cluster(np.linalg.eigvals(Lz), CLUSTER_TOL)
        if len(eigs) != c:
            continue
        idem = _eigen_idempotents(H, Z, Lz)
        E = np.array([_clean(e) for e in idem])
        data = _finish(H, E)
        if data is not None:
            return data
    raise RandomizationExhausted(f"{H.name}: no splitting central element in {max_tries} tries")


def _finish(H, E):
    for i, e in enumerate(E):
        if np.max(np.abs(H.multiply(e, e) - e)) > TOL_IDEM:
            return None
    dims = []
    for e in E:
        r = _rank(H.left_matrix(e))
        d = math.isqrt(r)
        if d * d != r:
            raise NotSemisimple(f"{H.name}: block of rank {r} is not a perfect square")
        dims.append(d)
    if sum(d * d for d in dims) != H.dim:
        raise NotSemisimple(f"{H.name}: sum of d_i^2 = {sum(d * d for d in dims)} != {H.dim}")
    # canonical order: by block dimension, then by counit value, then first nonzero coefficient
    eps = np.array([H.epsilon(e) for e in E])
    order = sorted(range(len(E)), key=lambda i: (dims[i], -round(float(np.real(eps[i])), 6),
                                                 tuple(np.round(np.real(E[i]), 6)),
                                                 tuple(np.round(np.imag(E[i]), 6))))
    E = E[order]
    dims = tuple(dims[i] for i in order)
    eps = eps[order]
    trivial = [i for i in range(len(E)) if abs(eps[i] - 1) < TOL_IDEM and dims[i] == 1]
    if len(trivial) != 1:
        raise NotSemisimple(f"{H.name}: could not identify the trivial block")
    data = WedderburnData(H, E, dims, trivial[0])
    if max(data.residuals().values()) > TOL_IDEM:
        return None
    return data


def global_dim_squared(W):
    total = sum(d * d for d in W.block_dims)
    if total != W.algebra.dim:
        raise NotSemisimple(f"sum d_i^2 = {total} but dim = {W.algebra.dim}")
    return total


def check_morphism(H, rep, tol=1e-9):
    """Max residual of rep(e_a) rep(e_b) = rep(e_a e_b) and rep(1) = id."""
    rep = np.asarray(rep)
    if rep.shape[0] != H.dim:
        raise NotAMorphism(f"representation has {rep.shape[0]} matrices, algebra dim {H.dim}")
    prod = np.einsum("aij,bjk->abik", rep, rep)
    img = np.einsum("abc,cik->abik", H.mul, rep)
    res = float(np.max(np.abs(prod - img)))
    res = max(res, float(np.max(np.abs(np.tensordot(H.unit, rep, 1) - np.eye(rep.shape[1])))))
    return res


def isotypic_projector(H, W, i, rep, tol=1e-9):
    """rho(e_i) for a representation ``rep`` given as one matrix per basis element."""
    res = check_morphism(H, rep)
    if res > tol:
        raise NotAMorphism(f"representation fails the morphism test (residual {res:.3e})")
    return np.tensordot(W.idempotents[i], np.asarray(rep), axes=1)


def regular_representation(H):
    """Left regular representation, one matrix per basis element."""
    return np.asarray(H.mul).transpose(0, 2, 1)


def characters(W):
    """chi_i(e_k) = tr(L_{e_k} L_{e_i}) / d_i for every block i and basis element k."""
    H = W.algebra
    reg = regular_representation(H)
    out = []
    for e, d in zip(W.idempotents, W.block_dims):
        Le = np.tensordot(e, reg, 1)
        out.append(np.einsum("kij,ji->k", reg, Le) / d)
    return np.array(out)


def dual_blocks(W):
    """Permutation i -> i^vee from S(e_i) = e_{i^vee}."""
    H = W.algebra
    E = W.idempotents
    perm = []
    for e in E:
        Se = H.S(e)
        dist = [np.max(np.abs(Se - f)) for f in E]
        j = int(np.argmin(dist))
        if dist[j] > 1e-8:
            raise NotSemisimple("antipode does not permute the central idempotents")
        perm.append(j)
    return perm


def block_module(H, W, i, seed=DEFAULT_SEED, max_tries=20):
    """An irreducible module of block i: action on a minimal left ideal H f.

    Returns matrices rho[k] (one per basis element) of size d_i x d_i.
    """
    d = W.block_dims[i]
    e = W.idempotents[i]
    rng = np.random.default_rng([seed, i])
    reg = regular_representation(H)
    for _ in range(max_tries):
        if d == 1:
            f = e
        else:
            z = H.multiply(e, rng.standard_normal(H.dim))
            Lz = np.tensordot(z, reg, 1)
            Le = np.tensordot(e, reg, 1)
            # eigenvalues of z on its block ideal: d distinct values, each with multiplicity d
            basis_block = scipy.linalg.orth(Le, rcond=1e-9)
            vals = np.linalg.eigvals(np.linalg.lstsq(basis_block, Lz @ basis_block, rcond=None)[0])
            eigs = _cluster(vals, 1e-6)
            if len(eigs) != d:
                continue
            f = _lagrange_idempotents(H, z, eigs, e)[0]
        Rf = H.right_matrix(f)
        Q = scipy.linalg.orth(Rf, rcond=1e-9)
        if Q.shape[1] != d:
            continue
        rho = np.einsum("ia,kij,jb->kab", Q.conj(), reg, Q)
        if check_morphism(H, rho) < TOL_IDEM:
            return _clean(rho)
    raise RandomizationExhausted(f"could not split block {i} into an irreducible module")


def dual_module(H, rho):
    """Contragredient module: b acts by the transpose of rho(S(b))."""
    rho = np.asarray(rho)
    return np.einsum("pk,pji->kij", H.antipode, rho)


def module_block(W, rho):
    """Index of the block whose central idempotent acts as the identity on ``rho``."""
    rho = np.asarray(rho)
    n = rho.shape[1]
    for i, e in enumerate(W.idempotents):
        if np.max(np.abs(np.tensordot(e, rho, 1) - np.eye(n))) < 1e-8:
            return i
    raise NotAMorphism("module is not isotypic")
