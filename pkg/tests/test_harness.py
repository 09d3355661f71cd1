"""Mode runners: builders, artifacts, validation checks, exit codes."""

import json
import os

import numpy as np
import pytest

from kinmix import load_config, parse_config, run_mode
from kinmix.harness import (
    _check,
    _exchange_case_grid,
    _interface_halfwidth,
    _profile,
    build_grid,
    build_initial_state,
    build_model,
    build_partition,
    build_species,
    run_validation_suite,
)

TINY_HOMOGENEOUS = """
mode = kinetic-homogeneous
grid.dim = 2
grid.nodes_per_axis = 8
grid.v_max = 4.0
species.count = 2
species.1.u_x = 0.3
species.2.mass = 2.0
species.2.u_x = -0.3
time.n_steps = 4
"""

TINY_1D = """
mode = kinetic-1d
grid.dim = 2
grid.nodes_per_axis = 8
grid.v_max = 4.0
space.x_cells = 6
init.style = segregated
species.count = 2
species.2.mass = 2.0
time.n_steps = 3
volumes.count = 3
"""


def _cfg(text, tmp_path, extra=""):
    cfg = parse_config(text + extra)
    return cfg.with_value("output_dir", str(tmp_path))


def test_builders_respect_config(tmp_path):
    cfg = _cfg(TINY_1D, tmp_path)
    grid = build_grid(cfg)
    species = build_species(cfg)
    model = build_model(cfg, grid.dim)
    assert grid.nodes_per_axis == 8
    assert [s.mass for s in species] == [1.0, 2.0]
    assert model.kernel(0, 1).gamma == 0.0
    state = build_initial_state(cfg, grid, species)
    assert state.x_cells == 6
    # segregated: species 1 mass sits entirely in the left half
    left = state.f[0][:3].sum()
    right = state.f[0][3:].sum()
    assert right == 0.0 and left > 0.0


def test_partition_splits_evenly():
    cfg = parse_config(TINY_1D)
    part = build_partition(cfg, 6)
    assert part.edges == (0, 2, 4, 6)
    with pytest.raises(ValueError):
        build_partition(cfg, 2)


def test_profile_shapes():
    r = _profile([1.0, 2.0], 8, 1.0, "riemann", 0.0, False)
    assert (r[:4] == 1.0).all() and (r[4:] == 2.0).all()
    s_add = _profile([0.5], 8, 1.0, "sine", 0.1, True)
    s_mul = _profile([0.5], 8, 1.0, "sine", 0.1, False)
    assert s_add.max() <= 0.6 and s_mul.max() <= 0.55
    u = _profile([0.7], 4, 1.0, "uniform", 0.3, True)
    assert (u == 0.7).all()


def test_interface_halfwidth_conventions():
    dx = 0.1
    sharp = np.array([1.0, 1.0, 1.0, 0.0, 0.0, 0.0])
    assert _interface_halfwidth(sharp, dx) == pytest.approx(0.5 * dx)
    # 4 interior cells spread across 2 interfaces (one at index 3, one at the
    # periodic wrap) -> 2 cells each, half-width = 1 cell
    diffuse = np.array([1.0, 0.8, 0.6, 0.0, 0.0, 0.0, 0.4, 0.2])
    w = _interface_halfwidth(diffuse, dx)
    assert w == pytest.approx(4 * dx / (2 * 2))


def test_kinetic_homogeneous_mode_artifacts(tmp_path):
    cfg = _cfg(TINY_HOMOGENEOUS, tmp_path)
    code, root = run_mode(cfg)
    assert code == 0
    names = sorted(os.listdir(root))
    assert names == [
        "diagnostics.csv", "f_final_s1.bin", "f_final_s2.bin",
        "manifest.json", "moments.csv", "summary.json", "volumes.csv",
    ]
    manifest = json.load(open(os.path.join(root, "manifest.json")))
    assert manifest["mode"] == "kinetic-homogeneous"
    listed = {e["path"] for e in manifest["artifacts"]}
    assert listed == set(names) - {"manifest.json"}


def test_kinetic_mode_rerun_is_byte_identical(tmp_path):
    cfg = _cfg(TINY_1D, tmp_path / "a")
    _, root_a = run_mode(cfg)
    cfg_b = cfg.with_value("output_dir", str(tmp_path / "b"))
    _, root_b = run_mode(cfg_b)
    for name in sorted(os.listdir(root_a)):
        a = open(os.path.join(root_a, name), "rb").read()
        b = open(os.path.join(root_b, name), "rb").read()
        assert a == b, name


def test_moments_csv_is_per_cell_for_1d(tmp_path):
    cfg = _cfg(TINY_1D, tmp_path)
    _, root = run_mode(cfg)
    lines = open(os.path.join(root, "moments.csv")).read().splitlines()
    assert lines[0].split(",")[:3] == ["t", "x", "species"]
    # 6 cells x 2 species per snapshot, snapshots at steps 0..3
    assert len(lines) - 1 == 12 * 4


def test_twophase_mode_artifacts(tmp_path):
    cfg = load_config("configs/rdt_riemann.cfg").with_value("output_dir", str(tmp_path))
    cfg = cfg.with_value("macro.t_final", 0.02)
    code, root = run_mode(cfg)
    assert code == 0
    traj = open(os.path.join(root, "trajectory.csv")).read().splitlines()
    assert traj[0] == "t,x,alpha1,rho1,rho2,u1,u2,P1,P2,u_mix"
    summary = json.load(open(os.path.join(root, "summary.json")))
    assert summary["tau"] > 0.0


def test_euler_mix_mode_runs(tmp_path):
    cfg = load_config("configs/euler_mix_acoustic.cfg").with_value("output_dir", str(tmp_path))
    cfg = cfg.with_value("macro.t_final", 0.02)
    code, root = run_mode(cfg)
    assert code == 0
    header = open(os.path.join(root, "trajectory.csv")).readline().strip()
    assert header.startswith("t,x,rho_s1")


def test_check_semantics():
    assert _check("x", 0.5, 1.0)["status"] == "pass"
    assert _check("x", 2.0, 1.0)["status"] == "fail"
    assert _check("x", 5.0, 3.0, lower_bound=True)["status"] == "pass"
    assert _check("x", 2.0, 3.0, lower_bound=True)["status"] == "fail"


def test_exchange_case_grid_has_27_points():
    cases = _exchange_case_grid()
    assert len(cases) == 27
    assert len({c[0] for c in cases}) == 27


def test_validation_prefix_filters_checks(tmp_path):
    cfg = parse_config(
        "mode = validate-collision\nvalidate.prefix = macro.eos\n"
        "output_dir = " + str(tmp_path) + "\n"
    )
    report = run_validation_suite(cfg)
    ids = [c["check_id"] for c in report["checks"]]
    assert ids == ["macro.eos_identity"]
    assert report["passed"] is True


def test_validation_failure_gives_exit_one(tmp_path):
    # tolerance_scale tightens below what numerics can reach
    cfg = parse_config(
        "mode = validate-collision\nvalidate.prefix = macro.eos\n"
        "validate.tolerance_scale = 1e-12\n"
        "output_dir = " + str(tmp_path) + "\n"
    )
    code, root = run_mode(cfg)
    assert code == 1
    report = json.load(open(os.path.join(root, "validation.json")))
    assert report["passed"] is False
