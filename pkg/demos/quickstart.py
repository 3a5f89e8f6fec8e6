"""Build the ledger for a 2x2 Hermite-type weight and check a few identities."""

import numpy as np

from moprl import build_sequence, hermite_a, ladder_coeffs, run_checks

A = np.array([[0.0, 1.0], [0.0, 0.0]])
seq = build_sequence(hermite_a(A), n_max=6)

np.set_printoptions(precision=6, suppress=True)
print("gamma_0 =\n", seq.gamma[0].real)
print("alpha_0 =\n", seq.alpha[0].real)
print("beta_1 =\n", seq.beta[1].real)

c = ladder_coeffs(seq, 3)
print("A_3(x) coefficients:\n", c.A_poly.coeffs.real)
print("B_3(x) coefficients:\n", c.B_poly.coeffs.real)

report = run_checks(seq)
for check in report.checks:
    res = "skip" if check.residual is None else f"{check.residual:.2e}"
    print(f"{check.name:<32} {res:>10}  tol {check.tol:.0e}  {'ok' if check.passed else 'FAIL'}")
