"""Walk through the pencil machinery on a 3x3 family with known branches.

H(z) = A + z*B has eigenvalue curves +/- sqrt(1 + z^2) and an identically
zero branch; its nonzero branches never vanish on the real line, so the
crossing set is empty and the positive part varies analytically.  A second,
random pencil shows detected crossings and the logarithmic modulus of
continuity of the positive-part map across them.
"""

import numpy as np

from frenkel import eigencurves, find_crossings, kato_continuity_check, parts
from frenkel.pencil import write_eigencurves_csv

A = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=complex)
B = np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]], dtype=complex)

grid = np.linspace(-2.0, 2.0, 401)
curves = eigencurves(A, -B, grid)  # A - gamma(-B) = A + gamma B
closed_form = np.sqrt(1 + grid**2)
print("closed-form pencil:")
print(f"  max |lambda_1 - sqrt(1+z^2)| = {np.abs(curves[0] - closed_form).max():.2e}")
print(f"  max |lambda_2|               = {np.abs(curves[1]).max():.2e}")
print(f"  max |lambda_3 + sqrt(1+z^2)| = {np.abs(curves[2] + closed_form).max():.2e}")
cr = find_crossings(A, -B, (-10.0, 10.0))
print(f"  real crossings in [-10, 10]: {list(cr.crossings)} (method: {cr.method})")

write_eigencurves_csv("pencil_curves.csv", grid, curves)
print("  curves written to pencil_curves.csv")

rng = np.random.default_rng(3)
G = rng.standard_normal((4, 4))
A2 = (G + G.T) / 2 + 0j
H = rng.standard_normal((4, 4))
B2 = H @ H.T / 4 + 0.05 * np.eye(4) + 0j

cr2 = find_crossings(A2, B2, (-3.0, 3.0))
print(f"\nrandom pencil: {cr2.crossings.size} crossings via {cr2.method}")
for g in cr2.crossings:
    T1 = A2 - (g - 1e-6) * B2
    T2 = A2 - (g + 1e-6) * B2
    lhs, rhs = kato_continuity_check(T1, T2)
    rank_lo = int((np.linalg.eigvalsh(parts(T1).positive_part) > 1e-8).sum())
    rank_hi = int((np.linalg.eigvalsh(parts(T2).positive_part) > 1e-8).sum())
    print(f"  crossing {g:+.6f}: clip rank {rank_lo} -> {rank_hi}, "
          f"positive-part jump {lhs:.3e} <= log-modulus bound {rhs:.3e}")
