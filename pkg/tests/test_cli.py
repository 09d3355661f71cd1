"""Exit-code contract and argument plumbing of the command line."""

import os

import pytest

from kinmix.cli import main

TINY = """
mode = kinetic-homogeneous
grid.dim = 2
grid.nodes_per_axis = 8
grid.v_max = 4.0
species.count = 2
species.1.u_x = 0.2
species.2.mass = 2.0
species.2.u_x = -0.2
time.n_steps = 2
"""


def _write(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_success_prints_artifact_root(tmp_path, capsys):
    cfg = _write(tmp_path, TINY)
    code = main(["kinetic-homogeneous", "--config", cfg,
                 "--output-dir", str(tmp_path / "out")])
    out = capsys.readouterr().out.strip()
    assert code == 0
    assert os.path.isdir(out)
    assert os.path.isfile(os.path.join(out, "manifest.json"))


def test_missing_config_is_exit_2(tmp_path, capsys):
    code = main(["kinetic-homogeneous", "--config", str(tmp_path / "nope.cfg")])
    assert code == 2
    assert "config error" in capsys.readouterr().err


def test_mode_mismatch_is_exit_2(tmp_path, capsys):
    cfg = _write(tmp_path, TINY)
    code = main(["kinetic-1d", "--config", cfg])
    assert code == 2
    assert "declares mode" in capsys.readouterr().err


def test_bad_eps_is_exit_2(tmp_path, capsys):
    cfg = _write(tmp_path, TINY)
    assert main(["kinetic-homogeneous", "--config", cfg, "--eps", "-1.0"]) == 2
    capsys.readouterr()


def test_bad_workers_is_exit_2(tmp_path, capsys):
    cfg = _write(tmp_path, TINY)
    assert main(["kinetic-homogeneous", "--config", cfg, "--workers", "0"]) == 2
    capsys.readouterr()


def test_unknown_mode_rejected_by_argparse(tmp_path):
    with pytest.raises(SystemExit):
        main(["kinetic-5d", "--config", "x"])


def test_numerical_failure_is_exit_3(tmp_path, capsys):
    # an explicit dt far beyond the stability bound trips the step guard
    cfg = _write(tmp_path, TINY + "time.dt = 50.0\n")
    code = main(["kinetic-homogeneous", "--config", cfg,
                 "--output-dir", str(tmp_path / "out")])
    assert code == 3
    assert "numerical failure" in capsys.readouterr().err


def test_eps_override_lands_in_new_artifact_dir(tmp_path):
    cfg = _write(tmp_path, TINY)
    out = str(tmp_path / "out")
    main(["kinetic-homogeneous", "--config", cfg, "--output-dir", out])
    main(["kinetic-homogeneous", "--config", cfg, "--output-dir", out, "--eps", "0.5"])
    # different eps -> different config hash -> sibling directories
    assert len(os.listdir(out)) == 2
