import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import functions, group
from hopflattice.errors import DimensionMismatch, NoSolution, NotAGroup
from hopflattice.hopf import (HopfAlgebra, coproduct_tensors, cyclic_table, dual_hopf,
                              group_algebra, haar_integral, hopf_from_dict, hopf_to_dict,
                              iterated_coproduct, named_group, opposite_coopposite,
                              read_cayley_table, read_structure_constants, regular_actions,
                              trace_functional, validate_group, verify_hopf_axioms)

NAMES = ["Z2", "Z3", "S3", "D4"]


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("build", [group, functions])
def test_axioms_group_and_function_algebras(name, build):
    rep = verify_hopf_axioms(build(name))
    assert rep.ok(1e-12), rep.failing(1e-12)


@pytest.mark.parametrize("name", ["Z3", "S3"])
def test_dual_and_opcop_are_hopf(name):
    H = group(name)
    assert verify_hopf_axioms(dual_hopf(H)).ok()
    assert verify_hopf_axioms(opposite_coopposite(H)).ok()


def test_dual_of_group_algebra_is_function_algebra():
    # with the reversed product convention, the dual of C[G] has the
    # multiplication of F(G) and the comultiplication of F(G^op)
    t, _ = named_group("S3")
    D, F = dual_hopf(group_algebra(t)), functions("S3")
    assert np.allclose(D.mul, F.mul)
    assert np.allclose(D.comul, F.comul.transpose(0, 2, 1))
    assert np.allclose(D.unit, F.unit) and np.allclose(D.counit, F.counit)


def test_double_dual_is_opposite_coopposite(cs3):
    # the dual uses the opposite product, so dualizing twice gives R^{op,cop}
    DD, OC = dual_hopf(dual_hopf(cs3)), opposite_coopposite(cs3)
    for a, b in [(DD.mul, OC.mul), (DD.comul, OC.comul), (DD.antipode, OC.antipode)]:
        assert np.allclose(a, b)
    assert not np.allclose(DD.mul, cs3.mul)


def test_broken_associativity_is_detected(cz3):
    mul = cz3.mul.copy()
    mul[1, 1] = mul[1, 2]
    H = HopfAlgebra(mul, cz3.unit, cz3.comul, cz3.counit, cz3.antipode, name="broken")
    assert verify_hopf_axioms(H).residuals["associativity"] > 0.5


def test_non_group_table_rejected():
    with pytest.raises(NotAGroup):
        validate_group([[0, 1], [0, 1]])
    with pytest.raises(NotAGroup):
        named_group("Q7")


def test_cayley_table_file_roundtrip(tmp_path):
    t = cyclic_table(4)
    path = tmp_path / "z4.txt"
    path.write_text("4\n" + "\n".join(" ".join(map(str, row)) for row in t))
    assert np.array_equal(read_cayley_table(path), t)


def test_structure_constants_roundtrip(tmp_path, cs3):
    path = tmp_path / "s3.json"
    path.write_text(json.dumps(hopf_to_dict(cs3)))
    H = read_structure_constants(path)
    assert np.allclose(H.mul, cs3.mul) and np.allclose(H.comul, cs3.comul)
    H2 = hopf_from_dict(json.loads(path.read_text()))
    assert verify_hopf_axioms(H2).ok()


@pytest.mark.parametrize("name", NAMES)
def test_haar_group_algebra(name):
    # h = (1/|G|) sum g
    H = group(name)
    n = H.dim
    assert np.allclose(haar_integral(H).element, np.full(n, 1 / n), atol=1e-12)


@pytest.mark.parametrize("name", NAMES)
def test_haar_function_algebra(name):
    # h = delta_e
    H = functions(name)
    h = haar_integral(H).element
    e = np.zeros(H.dim)
    e[0] = 1
    assert np.allclose(h, e, atol=1e-12)


@pytest.mark.parametrize("build", [group, functions])
def test_haar_residuals(build):
    r = haar_integral(build("S3")).residuals()
    assert max(r.values()) < 1e-12, r


def test_haar_rejects_non_semisimple():
    # Taft-like algebra: the group algebra over Z2 with a broken structure has
    # no normalized integral; a zero comultiplication makes the system degenerate
    H = group("Z2")
    bad = HopfAlgebra(np.zeros_like(H.mul), H.unit, H.comul, H.counit, H.antipode, name="zero")
    with pytest.raises(NoSolution):
        haar_integral(bad)


def test_dual_haar_is_trace(dual_cs3, cs3):
    # <hbar, x> = tr(L_x) / dim R
    hbar = haar_integral(dual_cs3).element
    assert np.allclose(hbar, trace_functional(cs3), atol=1e-12)


def test_iterated_coproduct_shapes(cs3):
    x = np.arange(6.0)
    assert iterated_coproduct(cs3, x, 1).shape == (6,)
    assert iterated_coproduct(cs3, x, 3).shape == (6, 6, 6)
    assert coproduct_tensors(cs3, 2).shape == (6, 6, 6)
    with pytest.raises(DimensionMismatch):
        iterated_coproduct(cs3, x, 0)
    with pytest.raises(DimensionMismatch):
        iterated_coproduct(cs3, np.ones(4), 2)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=6, max_size=6),
       st.lists(st.floats(-3, 3), min_size=6, max_size=6))
def test_coproduct_is_multiplicative(xs, ys):
    H = functions("S3")
    x, y = np.array(xs), np.array(ys)
    lhs = H.coproduct(H.multiply(x, y))
    dx, dy = H.coproduct(x), H.coproduct(y)
    rhs = np.einsum("ab,cd,ack,bdl->kl", dx, dy, H.mul, H.mul)
    assert np.allclose(lhs, rhs, atol=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=6, max_size=6))
def test_antipode_is_anti_multiplicative_and_involutive(xs):
    H = group("S3")
    x = np.array(xs)
    y = np.roll(x, 2)
    assert np.allclose(H.S(H.multiply(x, y)), H.multiply(H.S(y), H.S(x)), atol=1e-9)
    assert np.allclose(H.S(H.S(x)), x, atol=1e-12)


@pytest.mark.parametrize("build", [group, functions])
def test_regular_actions_are_representations(build):
    H = build("S3")
    A = regular_actions(H)
    n = H.dim
    for fam in (A.left, A.right):
        for a in range(n):
            for b in range(n):
                assert np.allclose(fam[a] @ fam[b], np.tensordot(H.mul[a, b], fam, 1))
    Hb = dual_hopf(H)
    for fam in (A.left_dual, A.right_dual):
        for a in range(n):
            for b in range(n):
                assert np.allclose(fam[a] @ fam[b], np.tensordot(Hb.mul[a, b], fam, 1))


def test_small_group_antipodes():
    z2, z3 = group("Z2"), group("Z3")
    assert np.array_equal(z2.antipode, np.eye(2))
    assert np.array_equal(z3.antipode, np.array([[1, 0, 0], [0, 0, 1], [0, 1, 0]]))


def test_function_algebra_coproduct_z2():
    F = functions("Z2")
    assert np.array_equal(F.comul[0], np.eye(2))   # delta_e -> d_e (x) d_e + d_g (x) d_g


def test_dual_of_z2_is_function_algebra_up_to_basis():
    # the character basis change chi_pm = d_e +- d_g turns F(Z2) into C[Z2]
    D = dual_hopf(group("Z2"))
    P = np.array([[1.0, 1.0], [1.0, -1.0]])       # columns: chi_+, chi_- in the delta basis
    Pinv = np.linalg.inv(P)
    mul = np.einsum("ai,bj,abc,kc->ijk", P, P, D.mul, Pinv)
    assert np.allclose(mul, group("Z2").mul)


def test_haar_z2_explicit():
    assert np.allclose(haar_integral(group("Z2")).element, [0.5, 0.5])


def test_grouplike_iterated_coproduct(cs3):
    for g in range(6):
        t = iterated_coproduct(cs3, cs3.basis(g), 3)
        expect = np.zeros((6, 6, 6))
        expect[g, g, g] = 1
        assert np.array_equal(t, expect)
    assert np.array_equal(iterated_coproduct(cs3, cs3.basis(2), 1), cs3.basis(2))


def test_regular_action_identities(cs3):
    A = regular_actions(cs3)
    unit_left = np.tensordot(cs3.unit, A.left, 1)
    assert np.allclose(unit_left, np.eye(6))
    assert np.allclose(np.tensordot(cs3.counit, A.left_dual, 1), np.eye(6))
    assert np.allclose(np.tensordot(cs3.counit, A.right_dual, 1), np.eye(6))
    for x in A.left:
        for y in A.right:
            assert np.allclose(x @ y, y @ x)
