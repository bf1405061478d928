"""Independent multiprecision re-implementation of the zero-free constants and the bound.

Written from the formulas directly (no package code imported) so the tests
compare two separate implementations.
"""

import mpmath as mp

mp.mp.dps = 50

Z1, Z2, Z3 = mp.mpf("4.862"), mp.mpf("19.62"), mp.mpf("51.34")
HR = mp.mpf(3000175332800)
BELL = [("80", "90", "370655.73", "5.216"), ("90", "100", "425721.47", "4.831"),
        ("100", "110", "488901.14", "4.513"), ("110", "120", "545744.21", "4.264"),
        ("120", "130", "629490.27", "4.032"), ("130", "140", "694045.43", "3.855"),
        ("140", "150", "771373.78", "3.696"), ("150", "160", "825913.07", "3.572"),
        ("160", "170.2", "909966.07", "3.448"), ("170.2", "500", "1.12e6", "3.337"),
        ("500", "1000", "6.23e6", "2.152"), ("1000", "1500", "2.12e7", "1.820"),
        ("1500", "2000", "6.47e7", "1.684"), ("2000", "2500", "1.73e8", "1.610"),
        ("2500", "3000", "2.56e8", "1.577"), ("3000", "481958", "5.76e8", "1.551"),
        ("481958", "6.7e12", "1.62e11", "1.448")]


def J(L):
    L = mp.mpf(L)
    return min(L / 4 + mp.mpf("1.8521"), L / 6 + mp.log(L) + mp.log(3))


def fordZ(L):
    L = mp.mpf(L)
    j = J(L)
    return (j + mp.mpf("0.685") + mp.mpf("0.155") * mp.log(L)) / (
        (mp.mpf("0.04962") - mp.mpf("0.0196") / (j + mp.mpf("1.15"))) * L)


def zhat(L):
    L = mp.mpf(L)
    ll = mp.log(L)
    return min(Z2, min(Z1, fordZ(L)) * ll, Z3 * ll ** (mp.mpf(4) / 3) / L ** (mp.mpf(1) / 3))


def bound(lx, k, c, mode, z=None):
    """Six terms of the bound; mode 'A' (KLN), 'B' (piecewise table) or 'Z' (fixed z)."""
    lx, c = mp.mpf(lx), mp.mpf(c)
    a = c / k
    L = a * lx
    x_pow = lambda e: mp.exp(e * lx)  # noqa: E731
    if mode == "B":
        s1 = mp.mpf("0.985")
        row = next(r for r in reversed(BELL) if mp.mpf(r[0]) <= L)
        b1, b2, b3, b4 = mp.mpf(row[2]), 0, 0, 0
        log_f = mp.mpf(row[3]) * L
    else:
        s1 = mp.mpf("0.675")
        b1, b2, b3, b4 = mp.mpf("17.253"), 3, mp.mpf("5.663"), 2
        log_f = mp.mpf(8) / 3 * L + 2 * mp.log(L)
    if k >= 86 and a < mp.mpf(1) / 85:
        pc, le = mp.mpf("12.782"), mp.mpf("0.1")
    else:
        pc, le = mp.mpf("2.52"), mp.mpf("0.8")
    Z = zhat(L) if z is None else mp.mpf(z)
    nu = mp.log(L) / (Z * L)
    t1 = a * x_pow(s1 + a - 1) * lx / mp.pi
    t2 = 2 * b3 * L ** b4 * (mp.exp(-nu * lx) - x_pow(s1 - 1))
    x_over_f = lx - log_f
    t3 = (2 * b1 * L ** b2 * lx / x_over_f
          * (mp.exp(-nu * x_over_f) - mp.exp((s1 - 1) * x_over_f)))
    u = k * x_pow(-mp.mpf(1) / k)
    t4 = pc / (k * x_pow(a - mp.mpf(1) / k)) * ((1 + u) * (lx + u) ** le + lx ** le)
    t5 = ((1 + mp.mpf("1.93378e-8")) * mp.sqrt(1 + u) - mp.mpf("0.999")) * x_pow(
        mp.mpf(1) / k - mp.mpf(1) / 2) / k
    t6 = ((1 + mp.mpf("1.936e-8")) * mp.cbrt(1 + u) - mp.mpf("0.885")) * x_pow(
        mp.mpf(1) / k - mp.mpf(2) / 3) / k
    return [t1, t2, t3, t4, t5, t6]
