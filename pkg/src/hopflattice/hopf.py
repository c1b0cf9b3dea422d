"""Finite-dimensional Hopf algebras given by structure constants.

Conventions (fixed throughout the package)::

    mul[i, j, k]     coefficient of e_k in e_i e_j
    comul[i, j, k]   coefficient of e_j (x) e_k in Delta(e_i)
    antipode[i, j]   coefficient of e_i in S(e_j)   (S acts on column vectors)
    unit[k]          coefficient of e_k in 1
    counit[i]        epsilon(e_i)

Elements are plain coefficient vectors.  Elements of the dual algebra are
coefficient vectors in the dual basis, and the pairing <alpha, x> is the
coordinate sum ``alpha @ x`` (no conjugation).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import permutations
from pathlib import Path

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, NoSolution, NormalizationFailure, NotAGroup

TOL_AXIOM = 1e-12


def _clean(a):
    """Drop an identically-zero imaginary part so real algebras stay real."""
    a = np.asarray(a)
    if np.iscomplexobj(a) and not np.any(a.imag):
        a = a.real
    if not np.iscomplexobj(a):
        a = a.astype(float)
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class HopfAlgebra:
    mul: np.ndarray
    unit: np.ndarray
    comul: np.ndarray
    counit: np.ndarray
    antipode: np.ndarray
    basis_labels: tuple = ()
    name: str = ""

    def __post_init__(self):
        for attr in ("mul", "unit", "comul", "counit", "antipode"):
            object.__setattr__(self, attr, _clean(getattr(self, attr)))
        n = self.unit.shape[0]
        shapes = {
            "mul": (n, n, n), "comul": (n, n, n), "unit": (n,),
            "counit": (n,), "antipode": (n, n),
        }
        for attr, shape in shapes.items():
            if getattr(self, attr).shape != shape:
                raise DimensionMismatch(
                    f"{attr} has shape {getattr(self, attr).shape}, expected {shape}")
        if not self.basis_labels:
            object.__setattr__(self, "basis_labels", tuple(f"e{i}" for i in range(n)))
        elif len(self.basis_labels) != n:
            raise DimensionMismatch("basis_labels length does not match dim")
        else:
            object.__setattr__(self, "basis_labels", tuple(self.basis_labels))

    def __repr__(self):
        return f"HopfAlgebra({self.name or '?'}, dim={self.dim})"

    @property
    def dim(self):
        return self.unit.shape[0]

    @property
    def dtype(self):
        return np.result_type(self.mul, self.comul, self.antipode, self.unit, self.counit)

    def basis(self, i):
        v = np.zeros(self.dim, dtype=self.dtype)
        v[i] = 1
        return v

    def multiply(self, x, y):
        return np.einsum("i,j,ijk->k", x, y, self.mul)

    def coproduct(self, x):
        """Delta(x) as a dim x dim coefficient matrix."""
        return np.einsum("i,ijk->jk", x, self.comul)

    def S(self, x):
        return self.antipode @ x

    def epsilon(self, x):
        return self.counit @ x

    def left_matrix(self, x):
        """Matrix of y -> x y."""
        return np.einsum("i,ijk->kj", x, self.mul)

    def right_matrix(self, x):
        """Matrix of y -> y x."""
        return np.einsum("j,ijk->ki", x, self.mul)

    def is_real(self):
        return not np.iscomplexobj(self.mul)


# ---------------------------------------------------------------------------
# axiom checking


@dataclass
class AxiomReport:
    residuals: dict = field(default_factory=dict)

    @property
    def max_residual(self):
        return max(self.residuals.values())

    def ok(self, tol=TOL_AXIOM):
        return self.max_residual < tol

    def failing(self, tol=TOL_AXIOM):
        return {k: v for k, v in self.residuals.items() if not v < tol}


def _res(a, b):
    d = np.asarray(a) - np.asarray(b)
    return float(np.max(np.abs(d))) if d.size else 0.0


def verify_hopf_axioms(H):
    """Max-abs residual of every Hopf algebra axiom, plus S^2 - id."""
    n = H.dim
    mul, comul, S = H.mul, H.comul, H.antipode
    eye = np.eye(n)
    r = {}
    r["associativity"] = _res(np.einsum("ijm,mkl->ijkl", mul, mul),
                              np.einsum("jkm,iml->ijkl", mul, mul))
    r["coassociativity"] = _res(np.einsum("imc,mab->iabc", comul, comul),
                                np.einsum("iam,mbc->iabc", comul, comul))
    r["unit"] = max(_res(np.einsum("i,ijk->kj", H.unit, mul), eye),
                    _res(np.einsum("j,ijk->ki", H.unit, mul), eye))
    r["counit"] = max(_res(np.einsum("a,iab->bi", H.counit, comul), eye),
                      _res(np.einsum("b,iab->ai", H.counit, comul), eye))
    eta_eps = np.outer(H.counit, H.unit)
    r["antipode"] = max(
        _res(np.einsum("iab,pa,pbk->ik", comul, S, mul, optimize=True), eta_eps),
        _res(np.einsum("iab,pb,apk->ik", comul, S, mul, optimize=True), eta_eps))
    lhs = np.einsum("ijm,mab->ijab", mul, comul)
    rhs = np.einsum("ipq,jrs,pra,qsb->ijab", comul, comul, mul, mul, optimize=True)
    r["bialgebra"] = max(
        _res(lhs, rhs),
        _res(np.einsum("i,iab->ab", H.unit, comul), np.outer(H.unit, H.unit)),
        _res(np.einsum("ijk,k->ij", mul, H.counit), np.outer(H.counit, H.counit)),
        abs(H.counit @ H.unit - 1))
    r["antipode_squared"] = _res(S @ S, eye)
    return AxiomReport(r)


# ---------------------------------------------------------------------------
# groups


def validate_group(table):
    """Check that ``table`` is a Cayley table with identity 0; return it as an int array."""
    t = np.asarray(table)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise NotAGroup("Cayley table must be a non-empty square array")
    n = t.shape[0]
    if not np.issubdtype(t.dtype, np.integer):
        if not np.all(t == np.round(t)):
            raise NotAGroup("Cayley table entries must be integers")
        t = t.astype(int)
    if t.min() < 0 or t.max() >= n:
        raise NotAGroup("Cayley table entries out of range")
    if not (np.all(t[0] == np.arange(n)) and np.all(t[:, 0] == np.arange(n))):
        raise NotAGroup("index 0 is not the identity")
    # associativity: (ab)c == a(bc)
    left = t[t[:, :, None], np.arange(n)[None, None, :]]
    right = t[np.arange(n)[:, None, None], t[None, :, :]]
    if not np.array_equal(left, right):
        raise NotAGroup("multiplication is not associative")
    for row in t:
        if sorted(row) != list(range(n)):
            raise NotAGroup("some element has no inverse (row is not a permutation)")
    return t


def group_inverses(table):
    t = np.asarray(table)
    return np.argmax(t == 0, axis=1)


def cyclic_table(n):
    a = np.arange(n)
    return (a[:, None] + a[None, :]) % n


def _perm_group_table(perms):
    index = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    t = np.empty((n, n), dtype=int)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            # (p q)(x) = p(q(x))
            t[i, j] = index[tuple(p[q[x]] for x in range(len(q)))]
    return t


def symmetric_group(k):
    perms = sorted(permutations(range(k)))  # identity sorts first
    labels = ["(" + "".join(str(v) for v in p) + ")" for p in perms]
    return _perm_group_table(perms), labels


def dihedral_group(m):
    """Symmetries of the regular m-gon as permutations of its vertices."""
    rots = [tuple((i + r) % m for i in range(m)) for r in range(m)]
    refl = [tuple((r - i) % m for i in range(m)) for r in range(m)]
    perms = rots + refl
    labels = [f"r{r}" for r in range(m)] + [f"s{r}" for r in range(m)]
    return _perm_group_table(perms), labels


def named_group(name):
    """Cayley table and labels for ``Z<n>``, ``S<k>`` (k <= 4) or ``D<m>``."""
    key = name.strip()
    if key[:1] in "ZC" and key[1:].isdigit():
        n = int(key[1:])
        if n < 1:
            raise NotAGroup(f"bad cyclic order in {name!r}")
        return cyclic_table(n), [f"g{i}" for i in range(n)]
    if key[:1] == "S" and key[1:].isdigit() and 1 <= int(key[1:]) <= 4:
        return symmetric_group(int(key[1:]))
    if key[:1] == "D" and key[1:].isdigit() and int(key[1:]) >= 3:
        return dihedral_group(int(key[1:]))
    raise NotAGroup(f"unknown group name {name!r}")


def read_cayley_table(path):
    """Read the whitespace format: order n, then n rows of n 0-based indices."""
    tokens = Path(path).read_text().split()
    if not tokens:
        raise NotAGroup(f"{path}: empty Cayley table file")
    try:
        vals = [int(tok) for tok in tokens]
    except ValueError as exc:
        raise NotAGroup(f"{path}: non-integer entry") from exc
    n = vals[0]
    if len(vals) != 1 + n * n:
        raise NotAGroup(f"{path}: expected {n * n} entries, found {len(vals) - 1}")
    return validate_group(np.array(vals[1:]).reshape(n, n))


def group_algebra(cayley_table, labels=None, name=""):
    """The group algebra C[G] with grouplike basis."""
    t = validate_group(cayley_table)
    n = t.shape[0]
    inv = group_inverses(t)
    mul = np.zeros((n, n, n))
    comul = np.zeros((n, n, n))
    antipode = np.zeros((n, n))
    for g in range(n):
        mul[g, np.arange(n), t[g]] = 1
        comul[g, g, g] = 1
        antipode[inv[g], g] = 1
    unit = np.zeros(n)
    unit[0] = 1
    return HopfAlgebra(mul, unit, comul, np.ones(n), antipode,
                       tuple(labels) if labels else tuple(f"g{i}" for i in range(n)),
                       name or f"C[G{n}]")


def function_algebra(cayley_table, labels=None, name=""):
    """The algebra F(G) of functions on G, basis of delta functions."""
    t = validate_group(cayley_table)
    n = t.shape[0]
    inv = group_inverses(t)
    mul = np.zeros((n, n, n))
    comul = np.zeros((n, n, n))
    antipode = np.zeros((n, n))
    for g in range(n):
        mul[g, g, g] = 1
        antipode[inv[g], g] = 1
    for a in range(n):
        comul[t[a, :], a, np.arange(n)] = 1
    counit = np.zeros(n)
    counit[0] = 1
    base = labels if labels else [f"g{i}" for i in range(n)]
    return HopfAlgebra(mul, np.ones(n), comul, counit, antipode,
                       tuple(f"d[{b}]" for b in base), name or f"F(G{n})")


# ---------------------------------------------------------------------------
# duals and structure-constant files


def dual_hopf(H):
    """The dual Hopf algebra (R^op)^* in the dual basis.

    Multiplication is dual to Delta (same as R^*), comultiplication is dual to
    the opposite multiplication, so <Delta(alpha), x (x) y> = <alpha, y x>.
    """
    mul = H.comul.transpose(1, 2, 0)
    comul = H.mul.transpose(2, 1, 0)
    return HopfAlgebra(mul, H.counit, comul, H.unit, H.antipode.T,
                       tuple(f"{b}*" for b in H.basis_labels),
                       f"dual({H.name})")


def opposite_coopposite(H):
    """R with both multiplication and comultiplication reversed."""
    return HopfAlgebra(H.mul.transpose(1, 0, 2), H.unit, H.comul.transpose(0, 2, 1),
                       H.counit, H.antipode, H.basis_labels, f"opcop({H.name})")


def hopf_from_dict(data, name=""):
    """Build from the JSON structure-constant schema (complex entries as [re, im])."""
    def arr(key):
        a = np.asarray(data[key])
        if a.dtype == object:
            raise DimensionMismatch(f"{key}: ragged array")
        if a.ndim >= 1 and a.shape[-1] == 2 and data.get("complex", False):
            a = a[..., 0] + 1j * a[..., 1]
        return a
    missing = [k for k in ("dim", "mul", "comul", "unit", "counit", "antipode") if k not in data]
    if missing:
        raise DimensionMismatch(f"structure-constant data missing fields {missing}")
    H = HopfAlgebra(arr("mul"), arr("unit"), arr("comul"), arr("counit"), arr("antipode"),
                    tuple(data.get("basis_labels", ())), name or data.get("name", "raw"))
    if H.dim != int(data["dim"]):
        raise DimensionMismatch(f"dim field {data['dim']} disagrees with arrays ({H.dim})")
    return H


def hopf_to_dict(H):
    cplx = np.iscomplexobj(H.mul) or np.iscomplexobj(H.comul) or np.iscomplexobj(H.antipode)

    def enc(a):
        a = np.asarray(a)
        if cplx:
            return np.stack([a.real, a.imag], axis=-1).tolist()
        return a.tolist()
    return {"dim": H.dim, "complex": bool(cplx), "name": H.name,
            "basis_labels": list(H.basis_labels),
            "mul": enc(H.mul), "comul": enc(H.comul), "unit": enc(H.unit),
            "counit": enc(H.counit), "antipode": enc(H.antipode)}


def read_structure_constants(path):
    with open(path) as fh:
        return hopf_from_dict(json.load(fh), name=Path(path).stem)


# ---------------------------------------------------------------------------
# Haar integral


@dataclass(frozen=True, eq=False)
class HaarIntegral:
    element: np.ndarray
    algebra: HopfAlgebra

    def residuals(self):
        H, h = self.algebra, self.element
        n = H.dim
        r = {}
        r["left_invariance"] = max(
            _res(H.multiply(h, H.basis(k)), H.counit[k] * h) for k in range(n))
        r["right_invariance"] = max(
            _res(H.multiply(H.basis(k), h), H.counit[k] * h) for k in range(n))
        r["idempotent"] = _res(H.multiply(h, h), h)
        r["antipode_fixed"] = _res(H.S(h), h)
        for m in (2, 3):
            t = iterated_coproduct(H, h, m)
            r[f"cyclic_{m}"] = _res(t, np.moveaxis(t, 0, -1))
        return r


def haar_integral(H, tol=1e-9):
    """Solve hx = xh = eps(x)h for the one-dimensional solution space; normalize h^2 = h."""
    n = H.dim
    blocks = []
    for k in range(n):
        ek = H.basis(k)
        blocks.append(H.right_matrix(ek) - H.counit[k] * np.eye(n))  # h e_k
        blocks.append(H.left_matrix(ek) - H.counit[k] * np.eye(n))   # e_k h
    system = np.vstack(blocks)
    null = scipy.linalg.null_space(system, rcond=tol)
    if null.shape[1] != 1:
        raise NoSolution(f"Haar system has {null.shape[1]}-dimensional solution space "
                         f"for {H.name}; algebra is not semisimple")
    h = null[:, 0]
    eps = H.epsilon(h)
    if abs(eps) < tol:
        raise NormalizationFailure(f"epsilon(h) = {eps:.3e} for {H.name}")
    h = h / eps
    h = _clean(np.where(np.abs(h) < 1e-15, 0, h))
    return HaarIntegral(h, H)


def iterated_coproduct(H, x, n):
    """Delta^(n-1)(x) as an order-n coefficient tensor (n = 1 returns x)."""
    if n < 1:
        raise DimensionMismatch("iterated_coproduct needs n >= 1")
    x = np.asarray(x)
    if x.shape != (H.dim,):
        raise DimensionMismatch(f"element has shape {x.shape}, algebra dim {H.dim}")
    t = x
    for _ in range(n - 1):
        t = np.tensordot(t, H.comul, axes=([-1], [0]))
    return t


def coproduct_tensors(H, n):
    """Delta^(n-1)(e_c) for every basis element c, shape (dim,) + (dim,)*n."""
    t = np.eye(H.dim, dtype=H.dtype)
    for _ in range(n - 1):
        t = np.tensordot(t, H.comul, axes=([-1], [0]))
    return t


# ---------------------------------------------------------------------------
# regular actions


@dataclass(frozen=True, eq=False)
class RegularActions:
    """Matrix families indexed by basis: family[c] is the operator for e_c (or e^c).

    left:       y -> e_c y
    right:      y -> y S(e_c)
    left_dual:  x -> <e^c, S(x')> x''
    right_dual: x -> x' <e^c, x''>
    """
    left: np.ndarray
    right: np.ndarray
    left_dual: np.ndarray
    right_dual: np.ndarray

    @staticmethod
    def apply(family, coeffs):
        return np.tensordot(coeffs, family, axes=1)


def regular_actions(H):
    L = H.mul.transpose(0, 2, 1)                           # L[c][k, j] = mul[c, j, k]
    right_plain = H.mul.transpose(1, 2, 0)                 # y -> y e_c
    R = np.einsum("pc,pkj->ckj", H.antipode, right_plain)
    Ld = np.einsum("iam,ca->cmi", H.comul, H.antipode)
    Rd = H.comul.transpose(2, 1, 0)                        # Rd[c][m, i] = comul[i, m, c]
    return RegularActions(_clean(L), _clean(R), _clean(Ld), _clean(Rd))


def trace_functional(H):
    """x -> tr(L_x) / dim, as a dual-basis vector."""
    return np.einsum("ijj->i", H.mul) / H.dim
