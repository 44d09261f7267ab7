"""
Pulling back along a projection, and exporting
==============================================

Adjustments pull back along ``M x R^k -> M``. On R^2 the strictness
condition is empty; after pulling the coupling back to R^3 it becomes a real
check. The second half drives the same steps through a model file, the way
the ``agd`` command does.
"""

# %%
from agd import AdjustmentData, Submersion, build_extension, classify, pullback_adjustment
from agd.fixtures import fixture_path, mackenzie

d, _ = classify(mackenzie())
phi = Submersion.extend(d.F_alg.patch, ["x3"])
d1, pb = pullback_adjustment(d, phi)
print("pulled F frame:", pb.algebroid.bundle.frame)

# Reclassify from scratch to see the strictness check run on one triple.
_, report = classify(AdjustmentData(d1.E_alg, d1.F_alg, d1.K, d1.nabla, d1.zeta))
strict = report["strict.dzeta_zeta"]
print(f"strict: {strict.status.value}, {strict.evaluated} triple(s) evaluated")

# %%
res = build_extension(d1)
jac = res.construction["A.jacobi"]
print(res.A.bundle.frame, f"jacobi: {jac.status.value} on {jac.evaluated} triples")

# %%
# Model files. ``run`` executes the declared tasks; ``export_extension``
# writes a built extension back as a model file that reloads exactly.
import tempfile
from pathlib import Path

from agd import export_extension, load_model, run

model = load_model(fixture_path("mackenzie.agd"))
print(run(model).format())

with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "A.agd"
    export_extension(model, "A", out)
    print(out.read_text())
    back = load_model(out)
    built = run(model, "A")["A"].artifact.A
    print("reloaded equals built:", back.algebroids["A"].same_structure(built))
