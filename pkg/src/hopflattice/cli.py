"""Command-line entry point ``kitaev``.

Every command prints one JSON report.  Exit status is 0 when all checks pass,
1 when a check fails and 2 for configuration errors (bad specs, bad flags).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import HopfLatticeError, SpecError
from .hopf import (TOL_AXIOM, dual_hopf, function_algebra, group_algebra, haar_integral,
                   named_group, read_cayley_table, read_structure_constants, verify_hopf_axioms)
from .rep import DEFAULT_SEED

SCHEMA = "hopflattice.report/1"
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
SUITES = ("axioms", "haar", "double", "commutation", "duality", "orientation")


@dataclass
class RunConfig:
    command: str
    algebra: str = "group:Z2"
    surface: str = "sphere:tetrahedron"
    sites: str = ""
    labels: str = ""
    seed: int = DEFAULT_SEED
    tol_axiom: float = TOL_AXIOM
    tol_op: float = 1e-10
    out: str | None = None
    suite: str = "axioms"
    extra: dict = field(default_factory=dict)

    def validate(self):
        if not (self.tol_axiom > 0 and self.tol_op > 0):
            raise SpecError("tolerances must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise SpecError("seed must be a 64-bit unsigned integer")


def _group_table(ref):
    if Path(ref).is_file():
        return read_cayley_table(ref), None
    return named_group(ref)


def parse_algebra(spec):
    """``group:<name|file>``, ``function:<name|file>``, ``dual:<spec>``, ``double:<spec>``, ``raw:<file>``."""
    kind, sep, rest = spec.partition(":")
    if not sep or not rest:
        raise SpecError(f"malformed algebra spec {spec!r}")
    if kind == "group":
        table, labels = _group_table(rest)
        return group_algebra(table, labels, name=f"C[{rest}]")
    if kind == "function":
        table, labels = _group_table(rest)
        return function_algebra(table, labels, name=f"F({rest})")
    if kind == "dual":
        return dual_hopf(parse_algebra(rest))
    if kind == "double":
        from .double import drinfeld_double
        return drinfeld_double(parse_algebra(rest)).hopf
    if kind == "raw":
        if not Path(rest).is_file():
            raise SpecError(f"no structure-constant file {rest!r}")
        return read_structure_constants(rest)
    raise SpecError(f"unknown algebra kind {kind!r} in {spec!r}")


def _group_of(spec):
    """The Cayley table behind a ``group:`` or ``function:`` spec, else None."""
    kind, _, rest = spec.partition(":")
    if kind in ("group", "function"):
        return _group_table(rest)[0]
    return None


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    return x


def _max(d):
    return max((float(v) for v in d.values()), default=0.0)


# ---------------------------------------------------------------------------
# commands


def _model(cfg):
    from .model import LatticeModel
    from .surface import parse_surface
    return LatticeModel(parse_algebra(cfg.algebra), parse_surface(cfg.surface))


def cmd_ground_dim(cfg):
    from .model import ground_space_dim
    M = _model(cfg)
    dim, info = ground_space_dim(M, seed=cfg.seed, return_info=True)
    report = {"surface": cfg.surface, "algebra": cfg.algebra, "state_dim": M.state_dim,
              "counts": list(M.cells.counts), "genus": M.cells.genus,
              "ground_dim": dim, "residuals": {"trace_minus_dim": abs(info["trace"] - dim)},
              "rank_check": info["rank"]}
    if cfg.extra.get("brute"):
        from .oracles import brute_ground_dim
        report["brute_ground_dim"] = brute_ground_dim(M)
        return report, report["brute_ground_dim"] == dim
    return report, True


def _suite_axioms(cfg):
    H = parse_algebra(cfg.algebra)
    r = verify_hopf_axioms(H).residuals
    return {"algebra": cfg.algebra, "dim": H.dim, "residuals": r}, _max(r) < cfg.tol_axiom


def _suite_haar(cfg):
    H = parse_algebra(cfg.algebra)
    r = dict(haar_integral(H).residuals())
    table = _group_of(cfg.algebra)
    if table is not None:
        from .oracles import haar_formula_oracle
        flavor = "group" if cfg.algebra.startswith("group:") else "function"
        r["closed_form"] = float(np.max(np.abs(haar_integral(H).element
                                                - haar_formula_oracle(flavor, table))))
    return {"algebra": cfg.algebra, "residuals": r}, _max(r) < cfg.tol_axiom


def _suite_double(cfg):
    from .double import (comlemma_operators, double_haar, drinfeld_double,
                         quasitriangularity_residual, site_rep_check)
    D = drinfeld_double(parse_algebra(cfg.algebra))
    _, haar = double_haar(D)
    p, q = comlemma_operators(D.base)
    r = {"axioms": _max(verify_hopf_axioms(D.hopf).residuals), "haar_agreement": haar["agreement"],
         "quasitriangularity": quasitriangularity_residual(D), "comlemma": site_rep_check(D, p, q)}
    info = {k: haar[k] for k in ("central_hD", "central_h", "central_hbar")}
    return {"algebra": cfg.algebra, "dim": D.dim, "residuals": r, "reported": info}, \
        _max(r) < cfg.tol_op


def _all_sites(M):
    C = M.cells
    return [C.site(C.vertex_of[d], C.face_of[d], d) for d in range(C.n_darts)]


def _suite_commutation(cfg):
    from .model import commutation_checks, projector_checks, site_double_action
    M = _model(cfg)
    r = dict(commutation_checks(M))
    r.update(projector_checks(M))
    r["site_double_action"] = max(site_double_action(M, s) for s in _all_sites(M))
    return {"algebra": cfg.algebra, "surface": cfg.surface, "residuals": r}, _max(r) < cfg.tol_op


def _suite_duality(cfg):
    from .model import duality_check
    M = _model(cfg)
    sample = cfg.extra.get("sample")
    r = {}
    for s in _all_sites(M):
        for k, v in duality_check(M, s, sample=sample, seed=cfg.seed).items():
            r[k] = max(r.get(k, 0.0), v)
    return {"algebra": cfg.algebra, "surface": cfg.surface, "residuals": r}, _max(r) < cfg.tol_op


def _suite_orientation(cfg):
    from .model import orientation_reversal_consistency
    M = _model(cfg)
    r = {"flip": max(orientation_reversal_consistency(M, e) for e in range(M.n_edges))}
    return {"algebra": cfg.algebra, "surface": cfg.surface, "residuals": r}, _max(r) < cfg.tol_op


def cmd_verify(cfg):
    names = SUITES if cfg.suite == "all" else [cfg.suite]
    fn = {"axioms": _suite_axioms, "haar": _suite_haar, "double": _suite_double,
          "commutation": _suite_commutation, "duality": _suite_duality,
          "orientation": _suite_orientation}
    suites, ok = {}, True
    for name in names:
        rep, passed = fn[name](cfg)
        rep["passed"] = passed
        suites[name] = rep
        ok = ok and passed
    return {"suites": suites}, ok


def cmd_protected(cfg):
    from .excited import DoubleBlocks, excitation_space_dim, protected_space
    from .surface import parse_sites
    import itertools
    M = _model(cfg)
    sites = parse_sites(M.cells, cfg.sites)
    db = DoubleBlocks(M.double, cfg.seed)
    lab = cfg.labels.strip()
    if lab in ("", "all"):
        tuples = list(itertools.product(range(db.n_blocks), repeat=len(sites)))
    else:
        try:
            tuples = [tuple(int(x) for x in lab.split(","))]
        except ValueError as exc:
            raise SpecError(f"bad labels {cfg.labels!r}") from exc
        if len(tuples[0]) != len(sites) or any(not 0 <= i < db.n_blocks for i in tuples[0]):
            raise SpecError(f"need {len(sites)} block indices in [0, {db.n_blocks})")
    rows = []
    for t in tuples:
        ps = protected_space(M, sites, t, db, cfg.seed)
        rows.append({"labels": list(t), "dim_M": ps.dim, "route_a": ps.route_a_dim,
                     "route_b": ps.route_b_dim})
    l_dim = excitation_space_dim(M, sites, seed=cfg.seed)
    report = {"surface": cfg.surface, "algebra": cfg.algebra,
              "sites": [[s.vertex, s.face, s.anchor_dart] for s in sites],
              "block_dims": list(db.dims), "dual_blocks": list(db.duals),
              "protected": rows, "L_dim": l_dim}
    ok = all(r["route_a"] == r["route_b"] for r in rows)
    if len(tuples) == db.n_blocks ** len(sites):
        total = sum(int(np.prod([db.dims[i] for i in r["labels"]])) * r["route_b"] for r in rows)
        report["consistency_sum"] = total
        report["consistency_ok"] = total == l_dim
        ok = ok and total == l_dim
    if len(rows) == 1:
        report.update(rows[0])
    return report, ok


def cmd_wedderburn(cfg):
    from .rep import global_dim_squared, wedderburn
    H = parse_algebra(cfg.algebra)
    W = wedderburn(H, seed=cfg.seed)
    r = W.residuals()
    return {"algebra": cfg.algebra, "dim": H.dim, "blocks": [{"dim": d} for d in W.block_dims],
            "total": global_dim_squared(W), "trivial_index": W.trivial_index,
            "residuals": r}, _max(r) < 1e-9 and global_dim_squared(W) == H.dim


def cmd_double(cfg):
    from .rep import wedderburn
    rep, ok = _suite_double(cfg)
    from .double import drinfeld_double
    D = drinfeld_double(parse_algebra(cfg.algebra))
    W = wedderburn(D.hopf, seed=cfg.seed)
    rep["blocks"] = [{"dim": d} for d in W.block_dims]
    rep["haar_consistency_residual"] = rep["residuals"]["haar_agreement"]
    rep["quasitriangularity_residual"] = rep["residuals"]["quasitriangularity"]
    return rep, ok


def cmd_oracle(cfg):
    from . import oracles
    name = cfg.extra["oracle"]
    if name == "commuting-pairs":
        table = _group_of(cfg.algebra)
        if table is None:
            raise SpecError("commuting-pairs needs a group: or function: algebra spec")
        value = oracles.commuting_pairs_mod_conj(table)
        from .double import drinfeld_double
        from .rep import wedderburn
        engine = wedderburn(drinfeld_double(group_algebra(table)).hopf, seed=cfg.seed).n_blocks
        rep = oracles.OracleReport("commuting_pairs_mod_conj", value, engine)
    elif name == "brute-ground-dim":
        from .model import ground_space_dim
        M = _model(cfg)
        rep = oracles.OracleReport("brute_ground_dim", oracles.brute_ground_dim(M),
                                   ground_space_dim(M, seed=cfg.seed))
    elif name == "haar":
        table = _group_of(cfg.algebra)
        kind = cfg.algebra.partition(":")[0]
        if table is None:
            inner = cfg.algebra.partition(":")[2]
            if kind == "dual" and inner.startswith("group:"):
                table = _group_of(inner)
                kind = "dual-of-group"
            else:
                raise SpecError("haar oracle supports group:, function: and dual:group: specs")
        value = oracles.haar_formula_oracle(kind, table)
        rep = oracles.OracleReport("haar_formula_oracle", value,
                                   haar_integral(parse_algebra(cfg.algebra)).element, 1e-12)
    else:
        raise SpecError(f"unknown oracle {name!r}")
    return rep.to_dict(), rep.match


COMMANDS = {"ground-dim": cmd_ground_dim, "verify": cmd_verify, "protected": cmd_protected,
            "wedderburn": cmd_wedderburn, "double": cmd_double, "oracle": cmd_oracle}


def _seed(text):
    return int(text, 0)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", default="group:Z2")
    common.add_argument("--surface", default="sphere:tetrahedron")
    common.add_argument("--sites", default="")
    common.add_argument("--labels", default="")
    common.add_argument("--seed", type=_seed, default=None)
    common.add_argument("--tol-axiom", type=float, default=TOL_AXIOM)
    common.add_argument("--tol-op", type=float, default=1e-10)
    common.add_argument("--out", default=None)
    parser = argparse.ArgumentParser(prog="kitaev", description="Kitaev lattice models for "
                                     "semisimple Hopf algebras")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("ground-dim", parents=[common])
    p.add_argument("--brute", action="store_true", help="also run the dense-kernel oracle")
    p = sub.add_parser("verify", parents=[common])
    p.add_argument("--suite", choices=SUITES + ("all",), default="axioms")
    p.add_argument("--sample", type=int, default=None)
    sub.add_parser("protected", parents=[common])
    sub.add_parser("wedderburn", parents=[common])
    sub.add_parser("double", parents=[common])
    p = sub.add_parser("oracle", parents=[common])
    p.add_argument("oracle", choices=("commuting-pairs", "brute-ground-dim", "haar"))
    return parser


class _ConfigError(Exception):
    pass


def config_from_args(ns):
    seed = ns.seed
    if seed is None:
        env = os.environ.get("HOPFLATTICE_SEED")
        try:
            seed = int(env, 0) if env else DEFAULT_SEED
        except ValueError as exc:
            raise SpecError(f"HOPFLATTICE_SEED={env!r} is not an integer") from exc
    extra = {k: getattr(ns, k) for k in ("brute", "sample", "oracle") if hasattr(ns, k)}
    cfg = RunConfig(ns.command, ns.algebra, ns.surface, ns.sites, ns.labels, seed,
                    ns.tol_axiom, ns.tol_op, ns.out, getattr(ns, "suite", "axioms"), extra)
    cfg.validate()
    return cfg


def run(cfg):
    """Execute a config; returns (exit code, report dict)."""
    start = time.perf_counter()
    report = {"schema": SCHEMA, "command": cfg.command,
              "config": {"algebra": cfg.algebra, "surface": cfg.surface, "sites": cfg.sites,
                         "labels": cfg.labels, "seed": cfg.seed, "tol_axiom": cfg.tol_axiom,
                         "tol_op": cfg.tol_op, "suite": cfg.suite}}
    try:
        body, ok = COMMANDS[cfg.command](cfg)
        report.update(body)
        report["status"] = "ok" if ok else "check_failed"
        code = EXIT_OK if ok else EXIT_FAIL
    except (SpecError, ValueError, FileNotFoundError) as exc:
        report["status"] = "config_error"
        report["error"] = f"{type(exc).__name__}: {exc}"
        code = EXIT_CONFIG
    except HopfLatticeError as exc:
        report["status"] = "check_failed"
        report["error"] = f"{type(exc).__name__}: {exc}"
        code = EXIT_FAIL
    report["exit_code"] = code
    report["elapsed_ms"] = round((time.perf_counter() - start) * 1000, 3)
    return code, _jsonable(report)


def main(argv=None):
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = config_from_args(ns)
    except SpecError as exc:
        report = {"schema": SCHEMA, "command": ns.command, "status": "config_error",
                  "error": str(exc), "exit_code": EXIT_CONFIG}
        print(json.dumps(report, sort_keys=True))
        return EXIT_CONFIG
    code, report = run(cfg)
    text = json.dumps(report, sort_keys=True, indent=2)
    if cfg.out:
        Path(cfg.out).write_text(text + "\n")
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
