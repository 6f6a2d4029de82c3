"""Independent oracle computations used to freeze expected values in the C++ tests.

Run with: python3 tests/oracles/oracles.py
"""
import numpy as np
from scipy import integrate, optimize

# --- gamma law p = kappa rho^gamma, kappa=1, gamma=1.4 -----------------------
K, G = 1.0, 1.4
p = lambda r: K * r**G
dp = lambda r: K * G * r**(G - 1)
c = lambda r: np.sqrt(dp(r))


def rare_int(a, b):
    return integrate.quad(lambda s: c(s) / s, a, b, epsabs=1e-14, epsrel=1e-14)[0]


def f(r, rl):
    return r / rl * (r - rl) * (p(r) - p(rl))


def Ll(r, rl, ql):
    if r <= rl:
        return r * (ql / rl + rare_int(r, rl))
    return r * ql / rl - np.sqrt(f(r, rl))


def Lr(r, rr, qr):
    if r <= rr:
        return r * (qr / rr - rare_int(r, rr))
    return r * qr / rr + np.sqrt(f(r, rr))


def fd(fun, x, h=1e-6):
    return (fun(x + h) - fun(x - h)) / (2 * h)


Ul, Ur = (4.0, 1.0), (3.0, -1.0)
# On the rarefaction branch L_l' = u + int - c and L_r' = u - int + c, with the
# integral done by quadrature (not the closed form used in the library).
dLl = lambda r, rl, ql: ql / rl + rare_int(r, rl) - c(r)
dLr = lambda r, rr, qr: qr / rr - rare_int(r, rr) + c(r)
rmin1 = optimize.brentq(lambda r: dLl(r, *Ul), 0.5, 3.9, xtol=1e-15)
rmin2 = optimize.brentq(lambda r: dLr(r, *Ur), 0.5, 2.9, xtol=1e-15)
phi = lambda r: Ll(r, *Ul) - Lr(r, *Ur)
print("rho_min_in  =", repr(rmin1))
print("rho_min_out =", repr(rmin2))
print("eps_ss =", repr(phi(4.0)), " eps_rs =", repr(phi(3.0)), " eps_max =", repr(phi(max(rmin1, rmin2))))
print("f_shock(5,4) =", repr(1.25 * (5**1.4 - 4**1.4)))
print("lax_left(5;(4,1)) =", repr(1.25 - np.sqrt(1.25 * (5**1.4 - 4**1.4))))
rstar0 = optimize.brentq(phi, max(rmin1, rmin2) + 1e-9, 50, xtol=1e-14)
print("interface rho* (eps=0) =", repr(rstar0))
for eps in (0.25, 1.75, 3.25):
    rs = optimize.brentq(lambda r: phi(r) - eps, max(rmin1, rmin2) + 1e-12, 50, xtol=1e-14)
    print(f"eps={eps}: rho*={rs!r} q_l={Ll(rs,*Ul)!r} q_r={Lr(rs,*Ur)!r}")

# --- interface where the 2-wave crosses x = 0 -----------------------------------
# Dense scan: argmax of L_l - L_r on a grid, then the sign change to its right.
Ucl, Ucr = (0.687404, -0.204468), (3.065206, -2.713164)
phic = lambda r: Ll(r, *Ucl) - Lr(r, *Ucr)
grid = np.geomspace(1e-4, 50, 40001)
vals = np.array([phic(r) for r in grid])
k = int(np.argmax(vals))
j = k + int(np.argmax(vals[k:] < 0))
rc = optimize.brentq(phic, grid[j - 1], grid[j], xtol=1e-15)
rminc = optimize.brentq(lambda r: dLr(r, *Ucr), 1e-3, Ucr[0], xtol=1e-15)
print("crossing interface rho* =", repr(rc), " q =", repr(Ll(rc, *Ucl)), " rho_min_out =", repr(rminc))

# --- isothermal c=1, U=(1,0): rho_max of the incoming side ----------------------
rho = np.exp(np.linspace(np.log(1e-9), np.log(1e6), 2_000_001))
lam2 = np.where(rho <= 1.0, 0.0 + np.log(1.0 / rho) + 1.0, -(rho - 1.0) / np.sqrt(rho) + 1.0)
idx = np.argmax(lam2 < 0)
print("isothermal (1,0) rho_max scan =", rho[idx], " closed form =", (3 + 5**0.5) / 2)
# rho_min for isothermal U=(1,0): L' = ln(1/rho) - 1 = 0 -> rho = e^-1
print("isothermal (1,0) rho_min =", np.exp(-1.0))
# max extraction for U_l=U_r=(1,0) isothermal: 2 * L_l(e^-1) = 2 e^-1 (ln e)=2/e
print("isothermal eps_max (1,0)|(1,0) =", 2 * np.exp(-1.0) * 1.0)

# --- Colebrook -----------------------------------------------------------------
d, k, Re = 0.6, 5e-5, 1e6
x = 1 / np.sqrt(0.02)
for _ in range(200):
    x = -2 * np.log10(2.51 * x / Re + k / (3.71 * d))
print("colebrook lambda(Re=1e6, d=0.6, k=5e-5) =", repr(1 / x**2))
lam_b = optimize.brentq(lambda lam: 1/np.sqrt(lam) + 2*np.log10(2.51/(Re*np.sqrt(lam)) + k/(3.71*d)), 1e-4, 1)
print("colebrook (brentq) =", repr(lam_b))

# --- outflow conversion, m3/s to kg/(m2 s) -----------------------------------
A = np.pi * 0.6**2 / 4
print("A_e =", repr(A), " q_out =", repr(100 * 0.785 / A), " rho(60 bar) =", repr(60e5 / 340**2))

# --- case9 power flow via fsolve on the full polar equations -------------------
G = np.zeros((9, 9)); B = np.zeros((9, 9))
diag = [(0, -17.3611), (0, -16.0), (0, -17.0648), (3.3074, -39.3089), (3.2242, -15.8409),
        (2.4371, -32.1539), (2.7722, -23.3032), (2.8047, -35.4456), (2.5528, -17.3382)]
for i, (g, b) in enumerate(diag):
    G[i, i], B[i, i] = g, b
lines = [(1, 4, 0, 17.3611), (4, 5, -1.9422, 10.5107), (5, 6, -1.2820, 5.5882), (3, 6, 0, 17.0648),
         (6, 7, -1.1551, 9.7843), (7, 8, -1.6171, 13.6980), (8, 2, 0, 16.0), (8, 9, -1.1876, 5.9751),
         (9, 4, -1.3652, 11.6041)]
for a, b_, g, bb in lines:
    G[a-1, b_-1] = G[b_-1, a-1] = g
    B[a-1, b_-1] = B[b_-1, a-1] = bb


def pq(V, th):
    P = np.zeros(9); Q = np.zeros(9)
    for k_ in range(9):
        for j in range(9):
            d_ = th[k_] - th[j]
            P[k_] += V[k_]*V[j]*(G[k_, j]*np.cos(d_) + B[k_, j]*np.sin(d_))
            Q[k_] += V[k_]*V[j]*(G[k_, j]*np.sin(d_) - B[k_, j]*np.cos(d_))
    return P, Q


def solve(p5, q5):
    Pspec = np.array([0, 1.63, 0.85, 0, p5, 0, -1.0, 0, -1.25])
    Qspec = np.array([0, 0, 0, 0, q5, 0, -0.35, 0, -0.5])
    pq_buses = [3, 4, 5, 6, 7, 8]

    def res(x):
        th = np.concatenate([[0], x[:8]])
        V = np.ones(9); V[pq_buses] = x[8:]
        P, Q = pq(V, th)
        return np.concatenate([P[1:] - Pspec[1:], Q[pq_buses] - Qspec[pq_buses]])
    sol = optimize.fsolve(res, np.concatenate([np.zeros(8), np.ones(6)]), xtol=1e-14)
    th = np.concatenate([[0], sol[:8]]); V = np.ones(9); V[pq_buses] = sol[8:]
    P, Q = pq(V, th)
    return P, Q, V, th, np.max(np.abs(res(sol)))

P, Q, V, th, r = solve(-0.9, -0.3)
print("case9 slack P,Q =", repr(P[0]), repr(Q[0]), " resid", r)
print("case9 |V| =", V)
print("case9 theta(deg) =", np.degrees(th))
P2, Q2, *_ = solve(-1.8, -0.6)
print("case9 slack P at N5=-1.8 =", repr(P2[0]))
for Pv in (P[0], P2[0]):
    print("heat rate eps =", 2 + 5*Pv + 10*Pv**2)
