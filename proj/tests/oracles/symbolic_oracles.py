"""Independent reference values for the C++ test suite.

Run with `python3 symbolic_oracles.py`. The printed numbers are frozen into
the Catch2 tests; nothing in the C++ build depends on this script.
"""
import math

import numpy as np
import sympy as sp
from scipy import integrate

s, v, w, t = sp.symbols("s v w t", real=True)
coords = [s, v, w]


def curl(a, xs=coords):
    x0, x1, x2 = xs
    return [sp.diff(a[2], x1) - sp.diff(a[1], x2),
            sp.diff(a[0], x2) - sp.diff(a[2], x0),
            sp.diff(a[1], x0) - sp.diff(a[0], x1)]


def dot(a, b):
    return sp.simplify(sum(x * y for x, y in zip(a, b)))


def bracket(Y, Z, xs=coords):
    return [sp.simplify(sum(Y[j] * sp.diff(Z[i], xs[j]) - Z[j] * sp.diff(Y[i], xs[j]) for j in range(3)))
            for i in range(3)]


def section(title):
    print(f"\n== {title}")


section("parser")
f = sp.exp(sp.Rational(1, 2) * v**2) * sp.cos(w)
pt = {s: 0.1, v: 0.3, w: 0.2}
print("exp(0.5*v^2)*cos(w) at (0.1,0.3,0.2): value", sp.N(f.subs(pt), 17),
      "grad", [sp.N(sp.diff(f, x).subs(pt), 17) for x in coords])

section("exterior derivative")
print("d(dw + v ds) axial", curl([v, 0, 1]))
print("d(w ds) axial", curl([w, 0, 0]), "-> on (dw, ds) slot:",
      "w0 dv^dw + w1 dw^ds + w2 ds^dv; dw^ds(∂w,∂s) = 1 times w1")
ap_flow = [1, -sp.tan(w), 0]
print("ds - tan w dv contact coefficient", sp.simplify(dot(ap_flow, curl(ap_flow))),
      "at w=0.3:", sp.N(1 / sp.cos(0.3)**2, 17))

section("lie bracket")
print("[d/dw, w d/ds]", bracket([0, 0, 1], [w, 0, 0]))

section("Lambda chart frame")
E = sp.exp(v**2 / 2)
am = [v, 0, 1]
ap = [E * sp.cos(w), -E * sp.sin(w), 0]
bp = [-E * sp.sin(w), -E * sp.cos(w), 0]
V = [0, 0, 1]
H = [sp.exp(-v**2 / 2) * c for c in [sp.cos(w), -sp.sin(w), -v * sp.cos(w)]]
X = [sp.exp(-v**2 / 2) * c for c in [-sp.sin(w), -sp.cos(w), v * sp.sin(w)]]
for name, a in [("alpha_-", am), ("alpha_+", ap), ("beta_+", bp)]:
    print(name, "contact coefficient", dot(a, curl(a)))
print("[V,X]", bracket(V, X), " H =", H)
print("[H,X]", bracket(H, X))
print("[H,V]", bracket(H, V), " X =", X)
divX = sp.simplify(sum(sp.diff(X[i], coords[i]) for i in range(3)))
print("coordinate div X", divX)
print("div X against exp(v^2) dV", sp.simplify(divX + dot(X, [sp.diff(sp.log(sp.exp(v**2)), x) for x in coords])))
J = sp.Matrix(3, 3, lambda i, j: sp.diff(X[i], coords[j])).subs({v: 0, w: sp.pi / 2})
print("Jacobian of X on v=0,w=pi/2", J.tolist(), "period 2pi; monodromy eigenvalues",
      [sp.N(sp.exp(2 * sp.pi)), 1, sp.N(sp.exp(-2 * sp.pi))])

section("transversality margin (dw + v ds, ds - tan w dv), |v|,|w| <= 0.5")
vv, ww = np.meshgrid(np.linspace(-0.5, 0.5, 401), np.linspace(-0.5, 0.5, 401))
a = np.stack([vv, 0 * vv, 1 + 0 * vv])
c = np.stack([1 + 0 * vv, -np.tan(ww), 0 * vv])
m = np.linalg.norm(np.cross(a, c, axis=0), axis=0) / (np.linalg.norm(a, axis=0) * np.linalg.norm(c, axis=0))
print("min margin", m.min())

section("admissible delta")
print("q=1 eps=0.5 L=2:", 1 / (2 * 2 * math.pi * 2))
print("q=3 eps=0.1 L=10:", 1 / (10 * 2 * math.pi * 4))

section("shear profile")
q_, d_ = sp.symbols("q delta", positive=True)
u = (v + d_) / (2 * d_)
S = 6 * u**5 - 15 * u**4 + 10 * u**3
fshear = -2 * sp.pi * q_ * S
fp = sp.diff(fshear, v)
print("max |f'| at v=0:", sp.simplify(fp.subs(v, 0)))
I = sp.integrate((v * fp).subs(v, sp.Symbol("x")), (sp.Symbol("x"), -d_, v))
print("I(delta)", sp.simplify(I.subs(v, d_)))
Inum = sp.lambdify(v, I.subs({q_: 1, d_: 1}))
grid = np.linspace(-1, 1, 20001)
print("max|I|/(q delta)", np.max(np.abs(Inum(grid))))
print("I(0.3) for q=2, delta=0.5:", sp.N(I.subs({q_: 2, d_: sp.Rational(1, 2), v: sp.Rational(3, 10)}), 17))

section("characteristic slope, b = tan w, flow-spanned top face")
def slope(eps, delta=0.3):
    top = lambda x: math.asin(math.sin(eps) * math.exp(-x * x / 2))
    val, _ = integrate.quad(lambda x: math.tan(top(x)), -delta, delta, epsabs=1e-13, epsrel=1e-13)
    return val / (2 * math.pi)
for e in [0.5, 1.0, 1.2, 1.4, 1.5, 1.55]:
    print(f"k(eps={e}) = {slope(e):.12f}")

section("negative twist predictor, q=-1, delta=0.3")
Mf = 15 / 8 * math.pi / 0.3
print("M_f", Mf, "eps* = atan(M_f)", math.atan(Mf), "c*M_f at eps=1.54", Mf / math.tan(1.54),
      "at eps=0.3", Mf / math.tan(0.3))

section("transversality margin on the 32^3 sample grid")
g = np.linspace(-0.5, 0.5, 32)
vv, ww = np.meshgrid(g, g)
a = np.stack([vv, 0 * vv, 1 + 0 * vv])
c = np.stack([1 + 0 * vv, -np.tan(ww), 0 * vv])
m = np.linalg.norm(np.cross(a, c, axis=0), axis=0) / (np.linalg.norm(a, axis=0) * np.linalg.norm(c, axis=0))
print("min margin (32 grid)", repr(m.min()))
