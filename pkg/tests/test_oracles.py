import ast
from pathlib import Path

import numpy as np
import pytest

from conftest import functions, group
from hopflattice import oracles
from hopflattice.double import drinfeld_double
from hopflattice.errors import TooLarge, UnsupportedFlavor
from hopflattice.hopf import dual_hopf, haar_integral, named_group
from hopflattice.model import LatticeModel, ground_space_dim
from hopflattice.rep import wedderburn
from hopflattice.surface import build_standard


def test_oracles_do_not_import_the_engine():
    tree = ast.parse(Path(oracles.__file__).read_text())
    imported = {n.module for n in ast.walk(tree) if isinstance(n, ast.ImportFrom)}
    assert not imported & {"model", "tensorops", "excited", "double", "rep"}


@pytest.mark.parametrize("name,expected", [("Z2", 4), ("Z3", 9), ("S3", 8), ("D4", 22), ("S4", 21)])
def test_commuting_pairs(name, expected):
    assert oracles.commuting_pairs_mod_conj(named_group(name)[0]) == expected


@pytest.mark.parametrize("name", ["Z2", "Z3", "S3", "D4"])
def test_commuting_pairs_match_double_blocks(name):
    t, _ = named_group(name)
    assert wedderburn(drinfeld_double(group(name)).hopf).n_blocks == \
        oracles.commuting_pairs_mod_conj(t)


def test_commuting_pairs_cap():
    with pytest.raises(TooLarge):
        oracles.commuting_pairs_mod_conj(named_group("Z25")[0])


@pytest.mark.parametrize("name", ["Z2", "Z3", "S3", "D4"])
def test_haar_closed_forms(name):
    t, _ = named_group(name)
    cases = [("group", group(name)), ("function", functions(name)),
             ("dual-of-group", dual_hopf(group(name)))]
    for flavor, H in cases:
        rep = oracles.OracleReport(flavor, oracles.haar_formula_oracle(flavor, t),
                                   haar_integral(H).element, 1e-12)
        assert rep.match, rep.to_dict()
    with pytest.raises(UnsupportedFlavor):
        oracles.haar_formula_oracle("quantum", t)


# brute-force kernel dimensions within the state-space cap
BRUTE = [
    ("Z2", "sphere:bigon", 1), ("Z2", "torus:square-1v", 4), ("Z2", "sphere:tetrahedron", 1),
    ("Z2", "torus:grid-2x2", 4), ("Z2", "genus2:octagon-1v", 16),
    ("Z3", "sphere:bigon", 1), ("Z3", "torus:square-1v", 9), ("Z3", "sphere:tetrahedron", 1),
    ("S3", "sphere:bigon", 1), ("S3", "torus:square-1v", 8),
]


@pytest.mark.parametrize("name,surface,expected", BRUTE)
@pytest.mark.parametrize("build", [group, functions])
def test_brute_matches_engine(name, surface, expected, build):
    M = LatticeModel(build(name), build_standard(surface))
    brute = oracles.brute_ground_dim(M)
    assert brute == expected
    assert oracles.OracleReport("ground", brute, ground_space_dim(M)).match


@pytest.mark.parametrize("name,surface,expected", [
    ("Z3", "torus:grid-2x2", 9), ("S3", "sphere:tetrahedron", 1), ("Z2", "torus:grid-3x2", 4)])
def test_brute_sparse_path(name, surface, expected):
    # state spaces above the dense limit go through the block eigensolver
    C = build_standard(surface)
    assert group(name).dim ** C.n_edges > oracles.MAX_DENSE_DIM
    assert oracles.brute_ground_dim(group(name), C) == expected


def test_brute_cap():
    with pytest.raises(TooLarge):
        oracles.brute_ground_dim(group("S3"), build_standard("torus:grid-2x2"))


def test_report_shape_mismatch():
    assert not oracles.OracleReport("x", [1, 2], [1, 2, 3]).match
    d = oracles.OracleReport("x", np.array([1.0]), np.array([1.0])).to_dict()
    assert d["match"] and d["computed"] == [1.0]
