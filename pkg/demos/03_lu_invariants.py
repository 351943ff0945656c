# Are the maximally entangled states of the pair equivalent to Bell states?
#
# Two two-qubit states are related by local unitaries exactly when their 13
# polynomial invariants agree. For the snapshots taken at the entropy maxima
# only the four correlation-matrix invariants are appreciably non-zero and they
# match the Bell values 3/16, 3/256, 3/4096 and -1/64.

import numpy as np

from rydlz import measures
from rydlz.app.scenarios import reference_state, run_invariants_check

rep = run_invariants_check()
print(rep.table())
print()

for name in ("psi_t1", "psi_t2", "psi_t3"):
    inv = measures.lu_invariants(measures.as_density_matrix(reference_state(name)))
    print(f"{name}: largest of the nine local-vector invariants = {np.abs(inv.as_array()[:9]).max():.2e}")

# the pair is mapped onto phi+ by local rotations; a product state is not
gg = measures.as_density_matrix(np.array([1.0, 0, 0, 0]))
phi = measures.as_density_matrix(measures.bell_states()["phi+"])
ok, res = measures.lu_equivalent(gg, phi)
print("|gg> equivalent to phi+?", ok, " largest residual", round(float(res.max()), 4))
