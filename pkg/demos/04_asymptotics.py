# %% [markdown]
# Second-order asymptotics of the correction as r -> 1, predicted and fitted.

# %%
import math

from gafzeros import binomial_covariance, empirical_asymptotics, general_exponent, two_dependent

s = [1e-3, 1e-4, 1e-5, 1e-6]
cases = {
    "interior (0.2, 0.05)": two_dependent(0.2, 0.05),
    "ellipse b=0.3": two_dependent(2 * math.sqrt(0.3 * 0.4), 0.3),
    "line (0.3, -0.2)": two_dependent(0.3, -0.2),
    "corner (2/3, 1/6)": two_dependent(2 / 3, 1 / 6),
    "binomial n=3": binomial_covariance(3),
}
for name, cov in cases.items():
    pred = general_exponent(cov)
    emp = empirical_asymptotics(cov, s, pred)
    print(f"{name:22s} case={pred.case_label:12s} alpha={pred.alpha:.4f} fit={emp.exponent:.4f} "
          f"C={pred.constant:.6f} fit={emp.constant:.6f}")
