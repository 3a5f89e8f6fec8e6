"""Recurrence coefficients of exp(-x^4) against the discrete string equation."""

import math

from moprl import build_sequence, freud_b

seq = build_sequence(freud_b([[0.0]]), n_max=8)
beta = [b[0, 0].real for b in seq.beta]

print(f"beta_1 = {beta[1]:.15f}, Gamma(3/4)/Gamma(1/4) = {math.gamma(0.75) / math.gamma(0.25):.15f}")
print(" n   beta_n            n - 4 beta_n (beta_{n+1} + beta_n + beta_{n-1})")
for n in range(1, 8):
    res = n - 4 * beta[n] * (beta[n + 1] + beta[n] + beta[n - 1])
    print(f"{n:2d}   {beta[n]:.12f}   {res: .2e}")
