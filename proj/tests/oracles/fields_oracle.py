"""Constants for tests/test_fields.cpp: bump integrals and single-site variances (mpmath)."""
import mpmath as mp

from gibbs_oracle import moments

mp.mp.dps = 40

if __name__ == "__main__":
    b = lambda s: mp.exp(-1 / (1 - s**2))
    mass = mp.quad(b, [-1, 0, 1])
    l2 = mp.quad(lambda s: b(s) ** 2, [-1, 0, 1])
    print("bump mass", mp.nstr(mass, 20))
    # unit-mass bump of width w: L2 norm squared = l2 / (w mass^2)
    print("unit-mass width 0.25 L2 norm", mp.nstr(mp.sqrt(l2 / (mp.mpf("0.25") * mass**2)), 20))
    for gs in ["0", "0.1"]:
        g = mp.mpf(gs)
        m = moments(g, kmax=12)
        kap = m[4] / m[2]
        var_e = (m[4] / 4 + g * m[6] / 4 + g**2 * m[8] / 16) - (m[2] / 2 + g * m[4] / 4) ** 2
        print(f"gamma={gs} chi={mp.nstr(m[2], 20)} var_e={mp.nstr(var_e, 20)} m6={mp.nstr(m[6], 20)}"
              f" var_h3={mp.nstr(m[6] - 2 * kap * m[4] + kap**2 * m[2], 20)} var_w4={mp.nstr(m[8] - m[4]**2, 20)}")
