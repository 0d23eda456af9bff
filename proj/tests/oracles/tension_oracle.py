"""Tension derivatives by direct inversion of (beta, tau) -> (e, v) and numerical differentiation.

Independent of the cumulant formulas: only Gibbs averages are used.
"""
import mpmath as mp

mp.mp.dps = 30


def ev(beta, tau, gamma):
    w = lambda u: mp.exp(-beta * (u**2 / 2 + gamma * u**4 / 4) - beta * tau * u)
    pts = [-mp.inf, -3, 0, 3, mp.inf]
    z = mp.quad(w, pts)
    e = mp.quad(lambda u: (u**2 / 2 + gamma * u**4 / 4) * w(u), pts) / z
    v = mp.quad(lambda u: u * w(u), pts) / z
    return e, v


def tau_of(e, v, gamma, guess):
    f = lambda b, t: [ev(b, t, gamma)[0] - e, ev(b, t, gamma)[1] - v]
    sol = mp.findroot(f, guess)
    return sol[1]


def derivatives(beta, gamma, h=mp.mpf("1e-4")):
    e0, v0 = ev(beta, 0, gamma)
    T = lambda e, v: tau_of(e, v, gamma, (beta, 0))
    t_v = (T(e0, v0 + h) - T(e0, v0 - h)) / (2 * h)
    t_e = (T(e0 + h, v0) - T(e0 - h, v0)) / (2 * h)
    t_vv = (T(e0, v0 + h) - 2 * T(e0, v0) + T(e0, v0 - h)) / h**2
    t_ee = (T(e0 + h, v0) - 2 * T(e0, v0) + T(e0 - h, v0)) / h**2
    t_ev = (T(e0 + h, v0 + h) - T(e0 + h, v0 - h) - T(e0 - h, v0 + h) + T(e0 - h, v0 - h)) / (4 * h * h)
    return t_v, t_e, t_vv, t_ev, t_ee


if __name__ == "__main__":
    for b, g in [("1", "0.1"), ("1.5", "0.05")]:
        r = derivatives(mp.mpf(b), mp.mpf(g))
        print(f"beta={b} gamma={g}", " ".join(mp.nstr(x, 12) for x in r))
