"""
Rotations of R^3 as an adjustment
=================================

so(3) acts on R^3 by rotation fields. The action algebroid E = R^3 x so(3),
with K its anchor into F = TR^3, a flat connection and a zero primitive,
is the simplest strict adjustment. This walk-through builds it, reads the
Lie algebra bracket back out of it, and constructs the rank-6 extension.
"""

# %%
# The fixture builder returns unclassified data; ``classify`` runs the
# Cartan, covariant and strict checks in order and records a flag for each.
from agd import build_extension, classify, strict_bla_bracket, verify_algebroid
from agd.fixtures import so3_action

d, report = classify(so3_action())
print(report.format())
print("flags:", {k: v.value for k, v in d.flags.items()})

# %%
# The rotation fields. ``rho(e1) = x3 d_x2 - x2 d_x3`` and cyclically.
for e, field in zip(d.E_alg.bundle.frame, d.E_alg.anchor):
    print(f"rho({e}) =", field)

# %%
# The bracket extracted from the adjustment is constant along M: it is the
# so(3) bracket, even though the algebroid bracket on E also differentiates.
H = strict_bla_bracket(d)
e1, e2, e3 = d.E_alg.bundle.frame_sections()
print("H(e1, e2) =", H(e1, e2))
x2 = d.E_alg.patch.coord("x2")
print("[e1, x2 e2]_E =", d.E_alg.bracket(e1, x2 * e2))
print("H(e1, x2 e2)  =", H(e1, x2 * e2))

# %%
# Extension A = TM + E. Its frame puts the coordinate fields first.
res = build_extension(d)
A = res.A
print(A.bundle.frame, "rank", A.rank)
print(verify_algebroid(A).format())

# %%
# The sandglass checks relate A to F and E through the maps D, iota, chi.
print(res.report.format())
