"""Refinement study of the vacuum plane wave and the 2D sigma = 1 flatness relaxation."""
import numpy as np

from multisym import fieldsim as fs

errs = []
for n in (16, 32, 64):
    g = fs.Grid.cube(n)
    traj = fs.trajectory(fs.plane_wave(g), int(round(0.5 / g.dt)))
    errs.append(fs.l2_error_plane_wave(traj[-1]))
    print(f"n={n:3d} L2 error {errs[-1]:.3e} energy {fs.energy(traj[-1]):.12f} "
          f"constraint {fs.constraint_residual(traj[-4:]):.3e}")
print("ratios", [round(errs[i] / errs[i + 1], 3) for i in range(2)])

n = 128
x = np.arange(n) / n
X, Y = np.meshgrid(x, x, indexing="ij")
rep = fs.ld2_flatness(np.sin(2 * np.pi * Y), np.cos(2 * np.pi * X) * np.sin(2 * np.pi * Y), flux=0.5)
print("flatness history", ["%.2e" % h for h in rep.history], "mean F12", rep.mean_F12)
