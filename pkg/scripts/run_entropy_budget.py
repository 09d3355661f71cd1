#!/usr/bin/env python3
# Entropy budget over the three reference homogeneous configurations at two
# resolutions. A step counts as a violation when H increases by more than
# the discreteness allowance 1e-6 (1 + |H|) dt; refining the grid must cut
# the largest violation at least in half (or keep it at zero).
import pathlib

import numpy as np

from kinmix import load_config
from kinmix.harness import build_grid, build_initial_state, build_model, build_species
from kinmix.kinetic_solver import run_kinetic, cfl_dt

HERE = pathlib.Path(__file__).resolve().parent.parent
CONFIGS = ["h_relaxation_a.cfg", "h_relaxation_b.cfg", "h_relaxation_c.cfg"]


def violations(cfg, nodes):
    cfg = cfg.with_value("grid.nodes_per_axis", nodes)
    grid = build_grid(cfg)
    species = build_species(cfg)
    model = build_model(cfg, grid.dim)
    state = build_initial_state(cfg, grid, species)
    dt = 0.5 * cfl_dt(state, model)
    n = int(np.ceil(cfg.get("time.t_final") / dt))
    snaps, _, _ = run_kinetic(state, model, dt, n, snapshot_every=1)
    worst = 0.0
    count = 0
    for a, b in zip(snaps, snaps[1:]):
        excess = (b.h_total - a.h_total) - 1e-6 * (1.0 + abs(a.h_total)) * dt
        if excess > 0.0:
            count += 1
            worst = max(worst, excess)
    return count, worst, snaps[-1].h_total - snaps[0].h_total


for name in CONFIGS:
    cfg = load_config(str(HERE / "configs" / name))
    print(name)
    for nodes in (16, 24):
        count, worst, decay = violations(cfg, nodes)
        print(f"  {nodes}^2 nodes: {count} violations, worst excess {worst:.3e}, total dH {decay:+.4f}")
