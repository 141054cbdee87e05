# %% [markdown]
# Expected number of zeros in the disk |z| < r: the i.i.d. value
# r^2 / (1 - r^2) plus a correction that is never positive.

# %%
from gafzeros import correction_contour_quad, expected_zeros, ornstein_uhlenbeck, two_dependent
from gafzeros.kernel import oracle_correction

cov = two_dependent(0.2, 0.05)
for r in (0.3, 0.6, 0.9, 0.99):
    row = [expected_zeros(cov, r, m) for m in ("residue", "contour", "area")]
    print(f"r={r:<5} baseline={row[0].baseline:10.6f}  " +
          "  ".join(f"{res.method.value}={res.correction:+.12f}" for res in row))

# %%
# the three routes are independent: residues of the inside roots, a
# trapezoid on the circle, and an area integral of |G'|^2 / G_2^2
model = ornstein_uhlenbeck(0.5)
for r in (0.5, 0.9, 0.95):
    print(r, correction_contour_quad(model, r), oracle_correction(model, r))
