"""The Drinfeld double D(R) on R (x) Rbar, its Haar integral and R-matrix.

Basis ordering is row-major: index ``a * n + b`` is e_a (x) e^b, with e_a
from R and e^b from the dual basis of Rbar.

The twisted product uses a single double coproduct of y:

    (x (x) alpha)(y (x) beta) = x y2 (x) alpha^{y1, y3} beta,
    <alpha^{y1, y3}, z> = <alpha, y3 z S(y1)>

where Delta^2(y) = y1 (x) y2 (x) y3.  The inverse antipode in this formula
is replaced by S itself, which is exact because S^2 = id for semisimple R.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstructionFailure, DimensionMismatch, Mismatch, QuasitriangularityFailure
from .hopf import HopfAlgebra, TOL_AXIOM, _clean, dual_hopf, haar_integral, verify_hopf_axioms
from .hopf import coproduct_tensors, regular_actions
from .tensorops import LocalOperator, restrict

TOL_DOUBLE = 1e-10


@dataclass(frozen=True, eq=False)
class DoubleAlgebra:
    hopf: HopfAlgebra
    factor_r: np.ndarray      # (n^2, n): x -> x (x) 1
    factor_rbar: np.ndarray   # (n^2, n): alpha -> 1 (x) alpha
    base: HopfAlgebra
    dual: HopfAlgebra

    @property
    def dim(self):
        return self.hopf.dim

    def element(self, x, alpha):
        """x (x) alpha as a coefficient vector of D(R)."""
        return np.kron(x, alpha)


def drinfeld_double(H, check=True):
    n = H.dim
    Hb = dual_hopf(H)
    mul, S = H.mul, H.antipode
    d2 = coproduct_tensors(H, 3)                                  # [c, p, q, r]
    # conj[r, m, p, b] = coefficient of e_b in e_r e_m S(e_p)
    conj = np.einsum("rmt,tsb,sp->rmpb", mul, mul, S, optimize=True)
    mulD = np.einsum("cpqr,aqk,rmpb,mdl->abcdkl", d2, mul, conj, Hb.mul, optimize=True)
    mulD = mulD.reshape(n * n, n * n, n * n)

    unit = np.kron(H.unit, Hb.unit)
    counit = np.kron(H.counit, Hb.counit)
    # Delta(x (x) alpha) = (x1 (x) alpha_1) (x) (x2 (x) alpha_2), with Rbar's own coproduct
    comulD = np.einsum("ajk,blm->abjlkm", H.comul, Hb.comul).reshape(n * n, n * n, n * n)

    factor_r = np.kron(np.eye(n), Hb.unit[:, None])
    factor_rbar = np.kron(H.unit[:, None], np.eye(n))
    # S(x (x) alpha) = (1 (x) S(alpha)) (S(x) (x) 1)
    left = factor_rbar @ Hb.antipode                  # column b: 1 (x) S(e^b)
    right = factor_r @ S                              # column a: S(e_a) (x) 1
    anti = np.einsum("ub,va,uvw->wab", left, right, mulD).reshape(n * n, n * n)

    labels = tuple(f"{x}|{a}" for x in H.basis_labels for a in Hb.basis_labels)
    D = HopfAlgebra(mulD, unit, comulD, counit, anti, labels, f"D({H.name})")
    if check:
        report = verify_hopf_axioms(D)
        bad = report.failing(TOL_AXIOM)
        if bad:
            axiom = max(bad, key=bad.get)
            raise ConstructionFailure(axiom, bad[axiom])
    return DoubleAlgebra(D, _clean(factor_r), _clean(factor_rbar), H, Hb)


def double_haar(D, h=None, hbar=None, tol=1e-10):
    """h (x) hbar, checked against the independently solved Haar integral of D(R).

    Returns (element, residuals).  Only the agreement is enforced; the
    commutator residuals of h_D, h (x) 1 and 1 (x) hbar with the basis of D(R)
    are reported.  h (x) 1 is not central once R is non-commutative.
    """
    h = haar_integral(D.base).element if h is None else np.asarray(getattr(h, "element", h))
    hbar = haar_integral(D.dual).element if hbar is None else np.asarray(getattr(hbar, "element", hbar))
    product = np.kron(h, hbar)
    direct = haar_integral(D.hopf).element
    agreement = float(np.max(np.abs(product - direct)))
    if agreement > tol:
        raise Mismatch(f"h (x) hbar differs from the Haar integral of D(R) by {agreement:.3e}")
    HD = D.hopf
    res = {"agreement": agreement, "counit": float(abs(HD.epsilon(product) - 1))}
    for key, z in (("central_hD", product), ("central_h", D.factor_r @ h),
                   ("central_hbar", D.factor_rbar @ hbar)):
        res[key] = max(float(np.max(np.abs(HD.multiply(z, HD.basis(k)) - HD.multiply(HD.basis(k), z))))
                       for k in range(HD.dim))
    return product, res


def r_matrix(D):
    """sum_a (e_a (x) 1) (x) (1 (x) e^a) as a dim(D) x dim(D) coefficient matrix."""
    return D.factor_r @ D.factor_rbar.T


def _tensor_square_product(HD, X, Y):
    """Product in D (x) D of coefficient matrices X, Y."""
    return np.einsum("uv,pq,upk,vql->kl", X, Y, HD.mul, HD.mul, optimize=True)


def quasitriangularity_residual(D, raise_on_failure=False, tol=TOL_DOUBLE):
    """max over basis b of |R Delta(b) - Delta^op(b) R|."""
    HD = D.hopf
    R = r_matrix(D)
    worst = 0.0
    for k in range(HD.dim):
        delta = HD.comul[k]
        lhs = _tensor_square_product(HD, R, delta)
        rhs = _tensor_square_product(HD, delta.T, R)
        res = float(np.max(np.abs(lhs - rhs)))
        if raise_on_failure and res > tol:
            raise QuasitriangularityFailure(k, res)
        worst = max(worst, res)
    return worst


def r_matrix_counit_residual(D):
    """(eps (x) id)(R) = 1 and (id (x) eps)(R) = 1."""
    HD = D.hopf
    R = r_matrix(D)
    return max(float(np.max(np.abs(HD.counit @ R - HD.unit))),
               float(np.max(np.abs(R @ HD.counit - HD.unit))))


def half_braiding_residual(D, rho_v, rho_y):
    """Check that v (x) y -> sum_a e^a y (x) e_a v intertwines the D-actions.

    ``rho_v`` and ``rho_y`` are D(R)-modules (one matrix per basis element).
    """
    HD = D.hopf
    rho_v, rho_y = np.asarray(rho_v), np.asarray(rho_y)
    dv, dy = rho_v.shape[1], rho_y.shape[1]
    n = D.base.dim
    xs = np.tensordot(D.factor_r.T, rho_v, 1)        # e_a acting on V
    xis = np.tensordot(D.factor_rbar.T, rho_y, 1)    # e^a acting on Y
    # c: V (x) Y -> Y (x) V, index c[(y', v'), (v, y)]
    c = sum(np.einsum("ij,kl->ikjl", xis[a], xs[a]).reshape(dy * dv, dy, dv)
            .transpose(0, 2, 1).reshape(dy * dv, dv * dy) for a in range(n))
    worst = 0.0
    for k in range(HD.dim):
        delta = HD.comul[k]
        act_vy = np.einsum("uw,uij,wkl->ikjl", delta, rho_v, rho_y).reshape(dv * dy, dv * dy)
        act_yv = np.einsum("uw,uij,wkl->ikjl", delta, rho_y, rho_v).reshape(dy * dv, dy * dv)
        worst = max(worst, float(np.max(np.abs(c @ act_vy - act_yv @ c))))
    return worst


PAIR_CHECK_LIMIT = 256


def site_rep_check(D, p_ops, q_ops, mode="auto"):
    """max |rho(u) rho(v) - rho(uv)| for rho(e_a (x) e^b) = p_a q_b.

    ``mode="pairs"`` runs over all basis pairs of D(R).  ``mode="generators"``
    checks the equivalent presentation: p and q are representations of R and
    Rbar, and q_b p_a = rho((1 (x) e^b)(e_a (x) 1)).  ``auto`` uses pairs for
    operator spaces of dimension up to PAIR_CHECK_LIMIT.
    """
    p_ops, q_ops = np.asarray(p_ops), np.asarray(q_ops)
    n = D.base.dim
    if p_ops.shape[0] != n or q_ops.shape[0] != n or p_ops.shape[1:] != q_ops.shape[1:]:
        raise DimensionMismatch("p and q families must be indexed by the basis and share a space")
    m = p_ops.shape[1]
    if mode == "auto":
        mode = "pairs" if m <= PAIR_CHECK_LIMIT else "generators"
    HD = D.hopf
    eye = np.eye(m)
    if mode == "pairs":
        rho = np.matmul(p_ops[:, None], q_ops[None, :]).reshape((n * n, m, m))
        worst = float(np.max(np.abs(np.tensordot(HD.unit, rho, 1) - eye)))
        for u in range(n * n):
            prods = np.matmul(rho[u], rho)
            images = np.tensordot(HD.mul[u], rho, 1)
            worst = max(worst, float(np.max(np.abs(prods - images))))
        return worst
    if mode != "generators":
        raise ValueError(f"unknown mode {mode!r}")
    base, dual = D.base, D.dual
    worst = max(float(np.max(np.abs(np.tensordot(base.unit, p_ops, 1) - eye))),
                float(np.max(np.abs(np.tensordot(dual.unit, q_ops, 1) - eye))))
    # (1 (x) e^b)(e_a (x) 1) as coefficients c[b, a, x, y] of e_x (x) e^y
    cross = np.einsum("ub,va,uvw->baw", D.factor_rbar, D.factor_r, HD.mul).reshape(n, n, n, n)
    for a in range(n):
        worst = max(worst, float(np.max(np.abs(np.matmul(p_ops[a], p_ops)
                                               - np.tensordot(base.mul[a], p_ops, 1)))))
        worst = max(worst, float(np.max(np.abs(np.matmul(q_ops[a], q_ops)
                                               - np.tensordot(dual.mul[a], q_ops, 1)))))
    for b in range(n):
        for a in range(n):
            lhs = q_ops[b] @ p_ops[a]
            c = cross[b, a]
            rhs = sum(c[x, y] * (p_ops[x] @ q_ops[y]) for x, y in zip(*np.nonzero(np.abs(c) > 1e-15)))
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def comlemma_operators(H):
    """p_a(u (x) v) = a'u (x) v S(a'') and q_alpha(u (x) v) = alpha''.u (x) alpha'.v on R (x) R."""
    n = H.dim
    Hb = dual_hopf(H)
    acts = regular_actions(H)
    d_r = coproduct_tensors(H, 2)
    d_rb = coproduct_tensors(Hb, 2)   # Rbar's own coproduct: first leg is alpha''
    dims = (n, n)
    p = [LocalOperator(d_r[a], [(0, acts.left), (1, acts.right)], dims) for a in range(n)]
    q = [LocalOperator(d_rb[b], [(0, acts.left_dual), (1, acts.left_dual)], dims) for b in range(n)]
    pm, _ = restrict(p, (0, 1))
    qm, _ = restrict(q, (0, 1))
    return np.array(pm), np.array(qm)


def comlemma2_operators(H, X, Y):
    """Operators on R (x) X (x) Y (x) R for an R-module X and an Rbar-module Y.

    p_a = a'u (x) a''x (x) y (x) v S(a'''),
    q_alpha = alpha'''.u (x) x (x) alpha''.y (x) alpha'.v  (primes: R^* coproduct).
    """
    n = H.dim
    Hb = dual_hopf(H)
    acts = regular_actions(H)
    X, Y = np.asarray(X), np.asarray(Y)
    dims = (n, X.shape[1], Y.shape[1], n)
    d_r = coproduct_tensors(H, 3)
    d_rb = coproduct_tensors(Hb, 3)   # Rbar legs in order: alpha''', alpha'', alpha'
    p = [LocalOperator(d_r[a], [(0, acts.left), (1, X), (3, acts.right)], dims) for a in range(n)]
    q = [LocalOperator(d_rb[b], [(0, acts.left_dual), (2, Y), (3, acts.left_dual)], dims)
         for b in range(n)]
    pm, _ = restrict(p, (0, 1, 2, 3))
    qm, _ = restrict(q, (0, 1, 2, 3))
    return np.array(pm), np.array(qm)
