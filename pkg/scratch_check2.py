"""Confirm the Lambda_uu deviation at the acceptance working point is real."""
import warnings
import numpy as np

from spibench.params import MagneticSample
from spibench.amplitudes import ExponentialWavepacket, lambda_overlap, cz_lambda_batch

om = 1e-4
s = MagneticSample.from_angles(om, om, np.pi / 2, 0.0)
T = np.pi / (2 * om)

for G in (0.01, 0.1, 0.5, 1.0, 2.0):
    wp = ExponentialWavepacket(G)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        closed = lambda_overlap(0, 0, T, s, wp, method="closed")
        quad = lambda_overlap(0, 0, T, s, wp, method="quad", abs_tol=1e-9)
    ideal = (-1 + G**2) / (np.sqrt(2) * (1 + G) ** 2)
    print(
        f"Gamma={G:5}: closed={closed:.10f} quad={quad:.10f} "
        f"|closed-quad|={abs(closed-quad):.2e} |closed-ideal|={abs(closed-ideal):.3e}"
    )

# Also try a much smaller omega to confirm convergence to the formula
print("\nomega scan at Gamma=0.01:")
for om in (1e-4, 1e-5, 1e-6, 1e-7):
    s = MagneticSample.from_angles(om, om, np.pi / 2, 0.0)
    T = np.pi / (2 * om)
    lam = cz_lambda_batch([s.omega_g], [s.n], s.omega_e, 0.01, T)[0, 0, 0]
    ideal = (-1 + 0.01**2) / (np.sqrt(2) * (1.01) ** 2)
    print(f"  omega={om:.0e}: Lambda={lam:.10f}  |diff|={abs(lam-ideal):.3e}  diff/omega={abs(lam-ideal)/om:.3f}")
