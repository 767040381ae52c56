"""Derives the forcing of the bundled manufactured solution (configs/mms.ini).

The exact fields are written as functions of (x, y, t); the [initial] keys of
the config hold them verbatim, so the MMS study evaluates the same strings at
t = T_end to get the reference solution. Fluid occupies |y| < 1/2 and the
solid 1/2 < |y| < 1 (L = 1). The solid velocity is Phi = w_t, and w vanishes
on |y| = 1.

Usage: python3 tools/mms_derive.py > configs/mms.ini
"""

import sympy as sp

x, y, t = sp.symbols("x y t", real=True)
eps, mu, k1, k2 = sp.Rational(1, 2), sp.Integer(1), sp.Rational(1, 2), sp.Integer(1)

s = sp.exp(-t)
# Stream-like profile: u = (Y' sin x, -Y cos x) s is divergence-free.
Y = sp.cos(sp.pi * y) * (1 + y**2)
# Chosen so that w_t matches u on the interface and the tangential stress
# balance eps du1/dn - mu dw1/dn = 0 holds there.
Z = sp.Rational(5, 4) * sp.pi * sp.sin(sp.pi * y) + (eps / mu) * sp.sin(2 * sp.pi * y)

u1 = s * sp.sin(x) * sp.diff(Y, y)
u2 = -s * sp.cos(x) * Y
# Normal stress balance: -p + eps du2/dy - 1/2 u2^2 = mu dw2/dy on the interface.
p = sp.Rational(5, 2) * sp.pi * eps * y * s * sp.cos(x)
rho = s * sp.cos(x) * (1 + (k2 / k1) * sp.cos(sp.pi * y))
w1 = s * sp.sin(x) * Z
w2 = sp.Integer(0)
theta = s * sp.cos(x) * (1 + sp.cos(sp.pi * y))


def lap(f):
    return sp.diff(f, x, 2) + sp.diff(f, y, 2)


def adv(f):
    return u1 * sp.diff(f, x) + u2 * sp.diff(f, y)


# Buoyancy direction e = (0, 1).
f1x = sp.diff(u1, t) + adv(u1) + sp.diff(p, x) - eps * lap(u1)
f1y = sp.diff(u2, t) + adv(u2) + sp.diff(p, y) - eps * lap(u2) - rho
f2 = sp.diff(rho, t) + adv(rho) - k1 * lap(rho)
f3x = sp.diff(w1, t, 2) - mu * lap(w1)
f3y = sp.Integer(0)
f4 = sp.diff(theta, t) - k2 * lap(theta)


def expr(e):
    return '"' + str(sp.simplify(e)).replace("**", "^") + '"'


print("# Manufactured solution; generated by tools/mms_derive.py.")
print("# The [initial] expressions are the exact fields at time t.")
print("[domain]\nL = 1\nNx = 8\nNy_f = 16\nNy_s = 8\n")
print("[params]\nepsilon = 0.5\nmu = 1\nk1 = 0.5\nk2 = 1\ne_dir = 0, 1\n")
print("[scheme]\ndt = 0.005\nT_end = 0.5\nadv_scheme = AB2\ndiffusion_theta = 0.5\n")
print("[initial]")
for name, e in [("u0_x", u1), ("u0_y", u2), ("rho0", rho), ("w0_x", w1), ("w0_y", w2),
                ("w1_x", sp.diff(w1, t)), ("w1_y", sp.diff(w2, t)), ("theta0", theta)]:
    print(f"{name} = {expr(e)}")
print("\n[forcing]")
for name, e in [("f1_x", f1x), ("f1_y", f1y), ("f2", f2), ("f3_x", f3x), ("f3_y", f3y), ("f4", f4)]:
    print(f"{name} = {expr(e)}")
print("\n[output]\ndirectory = mms_out\nsnapshot_every = 0\nseries_every = 10\nseed = 0")
