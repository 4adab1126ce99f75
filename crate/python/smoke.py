"""Smoke test for the frobzeta_py extension module."""

import json

import frobzeta_py as fz

CUBIC = """
base_char = 2
ambient = "projective 2"
equations = ["x1^2*x2 + x1*x2^2 = x0^3"]
"""

cubic = fz.Scheme(CUBIC)
assert cubic.counts(4) == [3, 9, 9, 9]
assert cubic.zeta() == ([1, 0, 2], [1, -3, 2])

line = fz.Scheme('base_char = 3\nambient = "projective 1"\nequations = []\n')
assert line.counts(3) == [4, 10, 28]

m = fz.PhiModule(5, [[2]])
assert m.rank == 1 and m.det() == 2
assert m.induced(2).rank == 2

obj = fz.SiteObject.points(2, [(1, m)])
report = fz.verify_zeta_value(obj, 2)
assert report.verdict == "PASS", str(report)
assert json.loads(report.json())["check"] == "zeta-value"

assert json.loads(obj.zeta_element(5, 1, 3))["coeffs"] == [1, 0, 0]
a = json.loads(obj.acyclicity(5, 1, 3))
assert a["coeffs"] == [2, 4, 3], a
assert fz.SiteObject.points(2, [(1, fz.PhiModule(5, [[1]]))]).acyclicity(5, 2) is None

norm = fz.verify_norm_system(obj, [1, 2, 6, 12], 2)
assert norm.verdict == "PASS", str(norm)

for name in ["A1/F2", "P1/F3", "Gm/F4", "E/F2"]:
    assert fz.validate_catalog(name).verdict == "PASS", name

try:
    fz.Scheme('base_char = 3\nambient = "affine 2"\nequations = ["x0 + x9"]\n')
except ValueError as e:
    assert str(e).startswith("3:"), e
else:
    raise AssertionError("bad scheme accepted")

print("smoke ok:", fz.CONVENTION)
