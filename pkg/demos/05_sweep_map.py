# Where in the (v0, v) plane does the pair become maximally entangled?
#
# A coarse version of the full map; run `lzsim sweep-map` for the 40 x 40 grid.

import numpy as np

from rydlz import model
from rydlz.app.scenarios import ScenarioConfig, run_sweep_map

grid = {"v0": [0.1, 0.5, 1.0, 2.0], "v": list(np.geomspace(0.5, 20, 7))}
cfg = ScenarioConfig("sweep-map", model.SweepSchedule(v=1.0), output_stride=20, grid=grid)
res = run_sweep_map(cfg)

print("S_A max" + "".join(f"{v:8.2f}" for v in res.v))
for v0, row in zip(res.v0, res.s_max):
    print(f"v0={v0:<4g}" + "".join(f"{x:8.3f}" for x in row))
