"""Lazy local operators on tensor-product spaces and projector-product traces.

A :class:`LocalOperator` is the sum

    sum_{c_1..c_k} coeff[c_1, ..., c_k]  prod_j  mats_j[c_j]  (acting on factor f_j)

where legs sharing a factor compose in leg order (leg j1 < j2 gives
``mats_j1 @ mats_j2``).  Vertex and plaquette operators have exactly this
shape: ``coeff`` is an iterated coproduct and each leg is a regular action on
one edge.  Products of local operators concatenate legs, and the trace of a
product is a closed tensor network that can be contracted without ever
forming a vector of the full space.
"""
from __future__ import annotations

from itertools import count

import numpy as np
import opt_einsum

MAX_DENSE_DIM = 1 << 14


class LocalOperator:
    def __init__(self, coeff, legs, factor_dims):
        coeff = np.asarray(coeff)
        if coeff.ndim != len(legs):
            raise ValueError(f"{coeff.ndim}-leg coefficient tensor but {len(legs)} legs")
        self.coeff = coeff
        self.legs = [(int(f), np.asarray(m)) for f, m in legs]
        self.factor_dims = tuple(int(d) for d in factor_dims)
        for j, (f, m) in enumerate(self.legs):
            d = self.factor_dims[f]
            if m.shape != (coeff.shape[j], d, d):
                raise ValueError(f"leg {j} on factor {f}: matrices {m.shape}, "
                                 f"expected {(coeff.shape[j], d, d)}")
        self._local = None

    @property
    def support(self):
        seen = []
        for f, _ in self.legs:
            if f not in seen:
                seen.append(f)
        return tuple(sorted(seen))

    @property
    def dtype(self):
        return np.result_type(self.coeff, *(m for _, m in self.legs))

    def __matmul__(self, other):
        if self.factor_dims != other.factor_dims:
            raise ValueError("operators act on different spaces")
        coeff = np.multiply.outer(self.coeff, other.coeff)
        return LocalOperator(coeff, self.legs + other.legs, self.factor_dims)

    def scaled(self, s):
        return LocalOperator(self.coeff * s, self.legs, self.factor_dims)

    def local_tensor(self):
        """Dense operator on the support, axes (out_1..out_m, in_1..in_m)."""
        if self._local is not None:
            return self._local
        support = self.support
        labels = count()
        leg_labels = [next(labels) for _ in self.legs]
        operands = [self.coeff, leg_labels]
        out_labels, in_labels = [], []
        for f in support:
            current = next(labels)
            out_labels.append(current)
            for j, (g, m) in enumerate(self.legs):
                if g != f:
                    continue
                nxt = next(labels)
                operands += [m, [leg_labels[j], current, nxt]]
                current = nxt
            in_labels.append(current)
        if not support:
            t = np.asarray(self.coeff.sum())
        else:
            t = opt_einsum.contract(*operands, out_labels + in_labels, optimize="greedy")
        self._local = t
        return t

    def local_matrix(self):
        t = self.local_tensor()
        d = int(np.prod([self.factor_dims[f] for f in self.support]))
        return t.reshape(d, d)

    def apply(self, state):
        """Apply to ``state`` of shape ``factor_dims`` or ``factor_dims + (batch,)``."""
        support = self.support
        if not support:
            return self.local_tensor() * state
        t = self.local_tensor()
        m = len(support)
        res = np.tensordot(t, state, axes=(list(range(m, 2 * m)), list(support)))
        return np.moveaxis(res, list(range(m)), list(support))

    def dense(self):
        """Full matrix on the whole space (small spaces only)."""
        total = int(np.prod(self.factor_dims))
        if total > MAX_DENSE_DIM:
            raise MemoryError(f"refusing to materialize a {total}x{total} operator")
        eye = np.eye(total, dtype=self.dtype).reshape(self.factor_dims + (total,))
        return self.apply(eye).reshape(total, total)


def restrict(ops, support=None):
    """Dense matrices of ``ops`` on the union of their supports (or ``support``)."""
    factor_dims = ops[0].factor_dims
    if support is None:
        support = sorted(set().union(*(op.support for op in ops)))
    support = tuple(support)
    dims = tuple(factor_dims[f] for f in support)
    total = int(np.prod(dims)) if dims else 1
    pos = {f: i for i, f in enumerate(support)}
    mats = []
    for op in ops:
        shifted = LocalOperator(op.coeff, [(pos[f], m) for f, m in op.legs], dims)
        if total <= 1:
            mats.append(np.asarray(shifted.local_tensor()).reshape(1, 1))
            continue
        eye = np.eye(total, dtype=shifted.dtype).reshape(dims + (total,))
        mats.append(shifted.apply(eye).reshape(total, total))
    return mats, support


def trace_by_basis(ops, factor_dims, batch=512):
    """tr(O_1 O_2 ... O_k) as the sum of <e, P e> over computational basis states."""
    factor_dims = tuple(factor_dims)
    total = int(np.prod(factor_dims))
    dtype = np.result_type(*(op.dtype for op in ops)) if ops else float
    acc = 0.0
    for start in range(0, total, batch):
        stop = min(total, start + batch)
        block = np.zeros((total, stop - start), dtype=dtype)
        block[np.arange(start, stop), np.arange(stop - start)] = 1
        state = block.reshape(factor_dims + (stop - start,))
        for op in reversed(ops):
            state = op.apply(state)
        flat = state.reshape(total, stop - start)
        acc = acc + flat[np.arange(start, stop), np.arange(stop - start)].sum()
    return acc


def trace_by_network(ops, factor_dims, optimize="auto-hq"):
    """tr(O_1 O_2 ... O_k) by contracting the closed tensor network of all legs."""
    factor_dims = tuple(factor_dims)
    labels = count()
    operands = []
    incidences = {f: [] for f in range(len(factor_dims))}
    for op in ops:
        leg_labels = [next(labels) for _ in op.legs]
        operands += [op.coeff, leg_labels]
        for lab, (f, m) in zip(leg_labels, op.legs):
            incidences[f].append((lab, m))
    scalar = 1.0
    for f, inc in incidences.items():
        if not inc:
            scalar *= factor_dims[f]
            continue
        # the trace around one factor, as a tensor in its leg labels
        wire = count()
        first = next(wire)
        sub = []
        current = first
        for k, (lab, m) in enumerate(inc):
            nxt = first if k == len(inc) - 1 else next(wire)
            sub += [m, [k, 1000 + current, 1000 + nxt]]
            current = nxt
        w = opt_einsum.contract(*sub, list(range(len(inc))), optimize="greedy")
        operands += [w, [lab for lab, _ in inc]]
    if not operands:
        return scalar
    value = opt_einsum.contract(*operands, [], optimize=optimize)
    return scalar * complex(value) if np.iscomplexobj(value) else scalar * float(value)


def projector_trace(ops, factor_dims, method="auto", basis_limit=20000):
    total = int(np.prod(factor_dims))
    if method == "auto":
        method = "basis" if total <= basis_limit else "network"
    if method == "basis":
        return trace_by_basis(ops, factor_dims)
    if method == "network":
        return trace_by_network(ops, factor_dims)
    raise ValueError(f"unknown trace method {method!r}")
