"""
Deciding local activity of a linear port system
================================================

A port system x' = A x + P u is locally active when some continuous input u
extracts energy: W = int_0^T <x, P u> dt < 0 for the trajectory started at 0.
With every state a port (P = I) this is decided exactly by the sign of the
largest eigenvalue of the symmetric part of A.
"""

import numpy as np

from locact import classify_activity, make_system, max_sym_eigenvalue

# The counter-intuitive star of the show: A is Hurwitz (eigenvalues -1, -2),
# so the unforced system is asymptotically stable. Yet its symmetric part is
# indefinite, and a suitable input pumps energy out of the system.
A = np.array([[-1.0, 10.0],
              [0.0, -2.0]])
sys = make_system(A, np.eye(2))

print("eigenvalues of A:", np.linalg.eigvals(A))
print("max eigenvalue of (A + A^T)/2:", max_sym_eigenvalue(A))

verdict = classify_activity(sys)
print("\nverdict:", verdict.status)
print("witness horizon T =", verdict.witness.T)
print("witness energy  W =", verdict.witness.W,
      "+/-", verdict.witness.quadrature_error_estimate)
print("route:", verdict.notes)

# A dissipative matrix is locally passive, certificate included.
calm = make_system(np.array([[-1.0, 1.0], [-1.0, -1.0]]), np.eye(2))
verdict = classify_activity(calm)
print("\nskew + damping ->", verdict.status,
      "| certificate:", verdict.certificate.kind,
      "max_eig =", verdict.certificate.max_eig)

# With a genuine projection the full characterization is open; the library
# answers Passive (certificate), Active (verified witness), or Inconclusive.
projected = make_system(-np.eye(2), np.diag([1.0, 0.0]))
print("\nprojected damping ->", classify_activity(projected).status)
