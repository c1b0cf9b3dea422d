"""Brute-force reference computations.

Nothing here imports the operator engine (``model``, ``tensorops``,
``excited``): the Hamiltonian is rebuilt from structure constants and the raw
dart permutations with explicit Kronecker products.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import TooLarge, UnsupportedFlavor
from .hopf import validate_group

MAX_DENSE_DIM = 2048
MAX_STATE_DIM = 600_000
MAX_GROUP_ORDER = 24
KERNEL_TOL = 1e-8


@dataclass
class OracleReport:
    name: str
    computed: object
    engine: object
    tol: float = 0.0

    @property
    def match(self):
        a, b = np.asarray(self.computed, dtype=complex), np.asarray(self.engine, dtype=complex)
        if a.shape != b.shape:
            return False
        return bool(np.all(np.abs(a - b) <= self.tol))

    def to_dict(self):
        conv = lambda x: np.asarray(x).tolist() if isinstance(x, np.ndarray) else x
        return {"name": self.name, "computed": conv(self.computed), "engine": conv(self.engine),
                "tol": self.tol, "match": self.match}


def commuting_pairs_mod_conj(cayley_table):
    """Orbits of commuting pairs (a, b) under simultaneous conjugation."""
    t = validate_group(cayley_table)
    n = t.shape[0]
    if n > MAX_GROUP_ORDER:
        raise TooLarge(f"group of order {n} exceeds the oracle cap {MAX_GROUP_ORDER}")
    e = next(g for g in range(n) if all(t[g, x] == x for x in range(n)))
    inv = [int(np.flatnonzero(t[g] == e)[0]) for g in range(n)]
    conj = lambda g, x: t[t[g, x], inv[g]]
    pairs = {(a, b) for a in range(n) for b in range(n) if t[a, b] == t[b, a]}
    orbits = 0
    while pairs:
        a, b = pairs.pop()
        orbits += 1
        for g in range(n):
            pairs.discard((conj(g, a), conj(g, b)))
    return orbits


def haar_formula_oracle(flavor, cayley_table):
    """Closed-form Haar integral for C[G], F(G) or the dual of C[G], in the delta/group basis."""
    t = validate_group(cayley_table)
    n = t.shape[0]
    if flavor == "group":
        return np.full(n, 1.0 / n)
    identity = next(g for g in range(n) if all(t[g, x] == x for x in range(n)))
    if flavor == "function":
        out = np.zeros(n)
        out[identity] = 1.0
        return out
    if flavor == "dual-of-group":
        # <hbar, g> = tr(left multiplication by g) / |G| = #{x : g x = x} / |G|
        return np.array([sum(int(t[g, x] == x) for x in range(n)) / n for g in range(n)])
    raise UnsupportedFlavor(f"no closed form for flavor {flavor!r}")


# ---------------------------------------------------------------------------
# ground space by dense kernel


def _haar(mul, counit):
    """Two-sided integral with counit 1, by a least-squares nullspace."""
    n = mul.shape[0]
    rows = []
    for i in range(n):
        # e_i h - eps(e_i) h and h e_i - eps(e_i) h, as linear maps of h
        rows.append(mul[i].T - counit[i] * np.eye(n))
        rows.append(mul[:, i, :].T - counit[i] * np.eye(n))
    _, s, vh = np.linalg.svd(np.vstack(rows))
    h = vh[-1].conj()
    return h / (counit @ h)


def _word_pairing(alpha, mul, k):
    """c[i_1..i_k] = <alpha, e_{i_1} ... e_{i_k}>."""
    c = np.asarray(alpha, dtype=complex)
    for _ in range(k - 1):
        # <alpha, x e_j> as a functional of x, for every j
        c = np.einsum("...k,ijk->...ij", c, mul)
    return c


def _coproduct_power(x, comul, k):
    """Coefficients of the k-fold coproduct of x."""
    c = np.asarray(x, dtype=complex)
    for _ in range(k - 1):
        c = np.einsum("...i,ijk->...jk", c, comul)
    return c


def _tail_orbits(vertex_rot):
    n = len(vertex_rot)
    seen, out = set(), []
    for d in range(n):
        if d in seen:
            continue
        orb = [d]
        seen.add(d)
        x = vertex_rot[d]
        while x != d:
            orb.append(x)
            seen.add(x)
            x = vertex_rot[x]
        out.append(orb)
    return out


def brute_ground_dim(model_or_algebra, cells=None, tol=KERNEL_TOL):
    """Kernel dimension of H = sum (1 - A_v) + sum (1 - B_p), built densely.

    Accepts a lattice model (anything with ``algebra`` and ``cells``) or an
    algebra together with a cell decomposition.
    """
    if cells is None:
        H, C = model_or_algebra.algebra, model_or_algebra.cells
    else:
        H, C = model_or_algebra, cells
    mul = np.asarray(H.mul, dtype=complex)
    comul = np.asarray(H.comul, dtype=complex)
    S = np.asarray(H.antipode, dtype=complex)
    counit = np.asarray(H.counit, dtype=complex)
    n = mul.shape[0]
    alpha, sigma = list(C.edge_pair), list(C.vertex_rot)
    n_darts = len(alpha)
    edges = sorted({(min(d, alpha[d]), max(d, alpha[d])) for d in range(n_darts)})
    edge_of = {}
    for i, (a, b) in enumerate(edges):
        edge_of[a] = edge_of[b] = i
    positive = set(C.positive_dart)
    E = len(edges)
    total = n ** E
    if total > MAX_STATE_DIM:
        raise TooLarge(f"state space of dimension {total} exceeds the oracle cap {MAX_STATE_DIM}")

    # single-edge actions of basis elements
    left = [mul[c].T for c in range(n)]                                     # y -> e_c y
    right = [sum(S[p, c] * mul[:, p, :].T for p in range(n)) for c in range(n)]   # y -> y S(e_c)
    # alpha.x = <alpha, S(x')> x'' and x.S(alpha) = x' <alpha, x''>
    left_dual = [np.einsum("iab,a->bi", comul, S[c, :]) for c in range(n)]
    right_dual = [comul[:, :, c].T for c in range(n)]

    h = _haar(mul, counit)
    # Haar integral of the dual: <hbar, x> = tr(left multiplication by x) / n
    hbar = np.array([np.trace(mul[i].T) for i in range(n)]) / n

    def term_operator(legs):
        """legs: list of (edge, matrix); matrices on one edge compose in order."""
        per_edge = [None] * E
        for e, m in legs:
            per_edge[e] = m if per_edge[e] is None else per_edge[e] @ m
        out = sp.identity(1, dtype=complex, format="csr")
        for e in range(E):
            m = per_edge[e]
            out = sp.kron(out, sp.identity(n) if m is None else sp.csr_matrix(m), format="csr")
        return out

    def smeared(coeff, darts, fams):
        acc = sp.csr_matrix((total, total), dtype=complex)
        for idx in zip(*np.nonzero(np.abs(coeff) > 1e-14)):
            legs = [(edge_of[d], fam[i]) for d, fam, i in zip(darts, fams, idx)]
            acc = acc + coeff[idx] * term_operator(legs)
        return acc

    terms = []
    for orb in _tail_orbits(sigma):
        darts = orb[1:] + orb[:1]
        fams = [left if d in positive else right for d in darts]
        terms.append(smeared(_coproduct_power(h, comul, len(darts)), darts, fams))
    # faces: orbits of sigma^-1 o alpha
    sigma_inv = [0] * n_darts
    for i, j in enumerate(sigma):
        sigma_inv[j] = i
    phi = [sigma_inv[alpha[d]] for d in range(n_darts)]
    for orb in _tail_orbits(phi):
        fams = [right_dual if d in positive else left_dual for d in orb]
        terms.append(smeared(_word_pairing(hbar, mul, len(orb)), orb, fams))
    Ham = len(terms) * sp.identity(total, dtype=complex, format="csr") - sum(terms)
    return _kernel_dim(Ham.tocsr(), tol)


def _kernel_dim(Ham, tol):
    """Number of zero eigenvalues (Hermitian) or zero singular values."""
    total = Ham.shape[0]
    hermitian = abs(Ham - Ham.getH()).max() < 1e-12 if Ham.nnz else True
    if total <= MAX_DENSE_DIM:
        dense = Ham.toarray()
        if hermitian:
            return int(np.sum(np.abs(np.linalg.eigvalsh(dense)) < tol))
        s = np.linalg.svd(dense, compute_uv=False)
        return int(np.sum(s < tol * max(1.0, s[0])))
    if not hermitian:
        raise TooLarge(f"non-Hermitian Hamiltonian of dimension {total} exceeds the dense cap")
    # block eigensolver for the low end of the spectrum (a block method resolves
    # degenerate kernels, where single-vector Lanczos can miss copies);
    # widen the block until a nonzero eigenvalue shows
    k = 8
    rng = np.random.default_rng(0)
    while True:
        k = min(k, total // 4)
        X = rng.standard_normal((total, k))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            vals, _ = spla.lobpcg(Ham, X, largest=False, tol=1e-6, maxiter=1000)
        zero = int(np.sum(np.abs(vals) < tol))
        if zero < k or k == total // 4:
            return zero
        k *= 2
