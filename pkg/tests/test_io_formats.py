"""Serialization round-trips and byte-level determinism."""

import numpy as np
import pytest

from kinmix import SpeciesSpec, VelocityGrid, maxwellian
from kinmix.io_formats import (
    ArtifactWriter,
    fmt_float,
    read_distribution_snapshot,
    write_csv,
    write_distribution_snapshot,
    write_json,
)


def test_fmt_float_roundtrips_exactly():
    for x in (0.1, 1.0 / 3.0, 2.0, -1.4142135623730951, 1e-300):
        assert float(fmt_float(x)) == x


def test_csv_header_and_digits(tmp_path):
    p = tmp_path / "t.csv"
    write_csv(str(p), ["a", "b"], [[1.0 / 3.0, 2], [0.5, "x"]])
    lines = p.read_text().splitlines()
    assert lines[0] == "a,b"
    assert lines[1].startswith("0.33333333333333331")
    assert lines[2] == "0.5,x"


def test_snapshot_roundtrip_bitwise(tmp_path):
    grid = VelocityGrid(dim=2, nodes_per_axis=8, v_max=4.0)
    f = np.stack([
        maxwellian(grid, 1.0, np.array([0.3, 0.0]), 1.0, SpeciesSpec("a", 1.0)),
        maxwellian(grid, 0.5, np.array([-0.3, 0.0]), 1.2, SpeciesSpec("a", 1.0)),
    ])
    p = tmp_path / "f.bin"
    write_distribution_snapshot(str(p), f, grid)
    back, dim, nodes, nx, v_max = read_distribution_snapshot(str(p))
    assert (dim, nodes, nx, v_max) == (2, 8, 2, 4.0)
    assert np.array_equal(back, f)


def test_snapshot_accepts_bare_velocity_array(tmp_path):
    grid = VelocityGrid(dim=2, nodes_per_axis=8, v_max=4.0)
    f = maxwellian(grid, 1.0, np.zeros(2), 1.0, SpeciesSpec("a", 1.0))
    p = tmp_path / "f.bin"
    write_distribution_snapshot(str(p), f, grid)
    back, _, _, nx, _ = read_distribution_snapshot(str(p))
    assert nx == 1
    assert np.array_equal(back[0], f)


def test_snapshot_rejects_wrong_shape(tmp_path):
    grid = VelocityGrid(dim=2, nodes_per_axis=8, v_max=4.0)
    with pytest.raises(ValueError):
        write_distribution_snapshot(str(tmp_path / "f.bin"), np.zeros((3, 5)), grid)


def test_truncated_snapshot_detected(tmp_path):
    grid = VelocityGrid(dim=2, nodes_per_axis=8, v_max=4.0)
    f = maxwellian(grid, 1.0, np.zeros(2), 1.0, SpeciesSpec("a", 1.0))
    p = tmp_path / "f.bin"
    write_distribution_snapshot(str(p), f, grid)
    data = p.read_bytes()
    p.write_bytes(data[:-16])
    with pytest.raises(ValueError):
        read_distribution_snapshot(str(p))


def test_json_is_byte_stable_under_key_order(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    write_json(str(a), {"x": 1, "y": [1.5, {"k": 2}]})
    write_json(str(b), {"y": [1.5, {"k": 2}], "x": 1})
    assert a.read_bytes() == b.read_bytes()


def test_json_converts_numpy_scalars(tmp_path):
    p = tmp_path / "n.json"
    write_json(str(p), {"v": np.float64(0.5), "n": np.int64(3), "arr": np.arange(2.0)})
    text = p.read_text()
    assert '"v": 0.5' in text
    assert '"n": 3' in text


def test_artifact_writer_manifest_lists_everything(tmp_path):
    w = ArtifactWriter(str(tmp_path), "abc123def456", "kinetic-homogeneous")
    w.add_csv("m.csv", ["a"], [[1.0]])
    w.add_json("s.json", {"ok": True})
    manifest = w.finalize({"mode": "kinetic-homogeneous"})
    import json

    payload = json.loads(open(manifest).read())
    assert payload["config_hash"] == "abc123def456"
    assert [e["path"] for e in payload["artifacts"]] == ["m.csv", "s.json"]
    assert all(e["bytes"] > 0 for e in payload["artifacts"])
    assert (tmp_path / "abc123def456" / "m.csv").exists()
