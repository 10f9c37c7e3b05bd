"""Extended-precision reference values for the dispersion tests.

Re-implements the dipole-exchange dispersion relation with mpmath at 50
significant digits and solves for wavenumbers with mpmath's own root finder.
The printed numbers are frozen into `tests/dispersion_oracle.rs`.
Run: python3 dispersion_oracle.py
"""
import itertools
import mpmath as mp

mp.mp.dps = 50

MU0 = 4 * mp.pi * mp.mpf("1e-7")
MS = mp.mpf("1.36e6")
AEX = mp.mpf("18.6e-12")
GAMMA = mp.mpf("1.76e11")
D = mp.mpf("9e-9")
W = mp.mpf("200e-9")
N = 1


def lam_ex():
    return 2 * AEX / (MU0 * MS**2)


def omega_m():
    return GAMMA * MU0 * MS


def k_tot(k, w=W):
    return k**2 + (N * mp.pi / w) ** 2


def g_factor(kt, d=D):
    x = d * mp.sqrt(kt)
    return 1 - (1 - mp.exp(-x)) / x


def f_factor(kt, g, wh, wm, theta):
    return 1 - g * mp.cos(theta) ** 2 + wm * g * (1 - g) * mp.sin(theta) ** 2 / (wh + wm * lam_ex() * kt)


def radicand(k, b, w=W):
    kt = k_tot(k, w)
    wh = GAMMA * b
    wm = omega_m()
    g = g_factor(kt)
    a = wh + wm * lam_ex() * kt
    return a * (a + wm * f_factor(kt, g, wh, wm, 0))


def freq(k, b, w=W):
    return mp.sqrt(radicand(k, b, w)) / (2 * mp.pi)


def k_of_f(f, b, w=W):
    target = (2 * mp.pi * f) ** 2
    return mp.findroot(lambda k: radicand(k, b, w) - target, (mp.mpf("1e7"), mp.mpf("1e9")), solver="anderson")


def phase_deg(db, length, f, base=0):
    k0 = k_of_f(f, base)
    k1 = k_of_f(f, base + db)
    return (k0 - k1) * length * 180 / mp.pi


def calibrate(target, length, f):
    return mp.findroot(lambda b: phase_deg(b, length, f) - target, (mp.mpf("0.001"), mp.mpf("0.05")), solver="anderson")


def show(label, v):
    print(f"{label} = {mp.nstr(v, 20)}")


if __name__ == "__main__":
    kt = k_tot(mp.mpf("5e7"))
    show("g(k=5e7)", g_factor(kt))
    wh = GAMMA * mp.mpf("0.01")
    g = g_factor(kt)
    show("F(pi/4, k=5e7, B=0.01)", f_factor(kt, g, wh, omega_m(), mp.pi / 4))
    for k, b in itertools.product(["1e7", "5e7", "1.8e8", "5e8"], ["-0.01", "0", "0.0147", "0.1"]):
        show(f"f_hz(k={k}, B={b})", freq(mp.mpf(k), mp.mpf(b)))
    for f in ["30e9", "35e9", "40e9"]:
        show(f"k(f={f}, B=0)", k_of_f(mp.mpf(f), 0))
    show("phase(+0.0147T, 100nm, 35GHz)", phase_deg(mp.mpf("0.0147"), mp.mpf("100e-9"), mp.mpf("35e9")))
    show("phase(-0.0147T, 100nm, 35GHz)", phase_deg(mp.mpf("-0.0147"), mp.mpf("100e-9"), mp.mpf("35e9")))
    unit = calibrate(10, mp.mpf("100e-9"), mp.mpf("35e9"))
    show("calibrate(10deg, 100nm, 35GHz)", unit)
    f35 = mp.mpf("35e9")
    L = mp.mpf("100e-9")
    p1 = phase_deg(unit, L, f35)
    m1 = phase_deg(-unit, L, f35)
    m2 = phase_deg(-2 * unit, L, f35)
    for a, b, c in itertools.product([0, 1], repeat=3):
        s = a + b + c
        cout = 1 if s >= 2 else 0
        show(f"cout_phase({a}{b}{c})", s * p1 + m2)
        show(f"sum_phase({a}{b}{c})", s * p1 + cout * m2 + m1)
