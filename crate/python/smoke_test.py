"""Smoke test for the pypalnil extension module."""

import pypalnil as pn

g = pn.NilpotentGroup(2, 2)
assert g.basis() == ["x1", "x2", "[x2,x1]"]
x = g.parse("x2 x1")
assert str(x) == "x1 * x2 * [x2,x1]"
assert x.exponents() == [1, 1, 1]
c = g.parse("[x2,x1]")
assert c.bar() == c.inv() and c.weight() == 2
assert g.generator(2).commutator(g.generator(1)) == c

mu = pn.Endo.parse(g, "x1 -> x2 x1 x2\n")
assert mu == pn.Endo.from_symbols(g, "mu(1,2)")
assert mu.matrix() == [[1, 2], [0, 1]]
assert mu.compose(mu.inverse()).is_identity()
flags = mu.classify()
assert flags["elementary_palindromic"] and not flags["ia"]
assert g.parse("x2 x1 x2").solve_conjugator(1) == g.generator(2)
assert g.parse("x1 [x2,x1]").solve_conjugator(1) is None

try:
    pn.Endo.parse(g, "x1 -> x1^2").inverse()
    raise SystemExit("expected ArithmeticError")
except ArithmeticError:
    pass

g3 = pn.NilpotentGroup(3, 3)
e = pn.Endo.from_symbols(g3, "phi2(1,2;3)^2 phi3(3,1,2;2)^-1")
d = e.decompose_central()
assert d["ok"] and pn.Endo.from_symbols(g3, " ".join(d["factors"])) == e
assert e.decompose_bglm()["ok"]
assert not pn.Endo.from_symbols(g3, "phi2(1,2;1)").tame_check()["holds"]
assert pn.fox_derivative("[x1,x2,x3]", 3, 1) == "X2*X3"

r = pn.run_suite("foxtable", rank=3)
assert r["passed"], r
print("smoke test passed")
