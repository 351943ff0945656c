# A single atom swept through resonance.
#
# Slow sweeps transfer the atom adiabatically from |g> to |r>; fast sweeps
# leave most of the population behind. The final excited population is compared
# with the Landau-Zener law 1 - exp(-pi omega^2 / 2v).

import numpy as np

from rydlz import dynamics, model

for v in (0.5, 1.0, 2.0, 5.0):
    sch = model.SweepSchedule(v=v)  # delta from -100 to +100, omega = 1
    tr = dynamics.propagate_schrodinger(model.basis_state("g"), sch, mode="single", stride=100)
    p_e = tr.populations["r"][-1]
    lz = 1 - dynamics.lz_probability(sch.omega, v)
    print(f"v = {v:4.1f}   P_e(final) = {p_e:.4f}   LZ law = {lz:.4f}")

# Bloch vector of the slow sweep: it starts at the north pole (|g>) and ends
# in the southern hemisphere.
tr = dynamics.propagate_schrodinger(model.basis_state("g"), model.SweepSchedule(v=0.5),
                                    mode="single", stride=2000)
a, b = tr.states[:, 0], tr.states[:, 1]
z = np.abs(a) ** 2 - np.abs(b) ** 2
for t, zz in zip(tr.times[::10], z[::10]):
    print(f"t = {t:7.1f}   z = {zz:+.3f}")
