# coding: utf-8

# # Qubit unitaries and waveplates
#
# Every single-qubit gate here is written as U = cos(a) I + i sin(a) n.sigma,
# with the axis n given by two spherical angles. In the optics lab the same
# gate is a quarter-wave, half-wave, quarter-wave plate stack.

import numpy as np

from sgqpt import (
    SU2Params,
    bloch_rotation,
    decompose_to_waveplates,
    haar_random_su2,
    phase_distance,
    process_fidelity,
    so3_to_su2,
    su2_from_params,
    waveplate_compose,
)

rng = np.random.default_rng(7)

# A pi/2 rotation about z in the (alpha, theta, phi) chart.

u = su2_from_params(SU2Params(np.pi / 4, 0.0, 0.0))
print(np.round(u, 6))
print("det =", np.round(np.linalg.det(u), 12))

# Fidelity is |tr(V^dag U)|^2 / 4, so a global sign costs nothing.

print(process_fidelity(u, -u), process_fidelity(u, su2_from_params(SU2Params(np.pi / 4 + 0.05, 0.0, 0.0))))

# ## Waveplate angles
#
# Decomposition solves for the three plate angles (degrees) numerically and
# checks the residual.

v = haar_random_su2(rng)
plates = decompose_to_waveplates(v)
print(plates)
print("residual up to phase:", phase_distance(waveplate_compose(plates), v))

# ## The Bloch picture
#
# The same gate acts on Bloch vectors as a 3x3 rotation; lifting it back only
# loses the sign that SU(2) carries and SO(3) does not.

r = bloch_rotation(v)
print(np.round(r @ r.T, 12))
print("lift fidelity:", process_fidelity(so3_to_su2(r), v))
