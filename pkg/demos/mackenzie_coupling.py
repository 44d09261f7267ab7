"""
A non-flat coupling of a bundle of Lie algebras
===============================================

Over R^2 take the trivial bundle with fibre so(3), the connection
``d + ad(x1 dx2 e1)`` and the primitive ``dx1 ^ dx2 e1``. With K = 0 the
adjustment conditions reduce to the classical coupling equations, and the
extension is a transitive algebroid whose horizontal lift has curvature.
"""

# %%
from agd import (build_extension, check_mym, classify, curvature, mackenzie_extension, nabla_zeta,
                 strict_bla_bracket)
from agd.fixtures import mackenzie

d, report = classify(mackenzie())
print(report.format())

# %%
# The connection is not flat: its curvature is ad(e1) on the frame.
d1, d2 = d.F_alg.bundle.frame_sections()
for nu in d.E_alg.bundle.frame_sections():
    print(f"R(d_x1, d_x2) {nu} =", curvature(d.nabla, d1, d2, nu))

# %%
# Multiplicative Yang-Mills form of the same data.
print(check_mym(nabla_zeta(d), strict_bla_bracket(d), d.zeta, d.F_alg).format())

# %%
# The extension. The lift chi of d_x1, d_x2 fails to be bracket preserving
# by exactly iota(zeta).
res = build_extension(d)
chi = res.chi
R = res.A.bracket(chi(d1), chi(d2)) - chi(d.F_alg.bracket(d1, d2))
print("R_chi(d_x1, d_x2) =", R)
print("iota(zeta)       =", res.iota(d.zeta(d1, d2)))

# %%
# The K = 0 formula gives the same structure functions.
direct = mackenzie_extension(d.F_alg, d.E_alg.fibrewise(), d.nabla, d.zeta)
print("same structure:", direct.A.same_structure(res.A))

# %%
# Flip the sign of the primitive and the covariant check reports where
# the curvature equation breaks.
bad, report = classify(mackenzie(zeta_coeff="-1"))
print(report.format())
