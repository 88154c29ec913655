# Independent high-precision values for the oscillator pair with the default
# cutoff (start 0.05, end 0.5, width 0.15). Frozen into coeff_test.cc.
import mpmath as mp
import numpy as np

mp.mp.dps = 30
pi = mp.pi
a, b, d = mp.mpf("0.05"), mp.mpf("0.5"), mp.mpf("0.15")


def f(t):
    return mp.e ** (-1 / t) if t > 0 else mp.mpf(0)


def step(t):
    if t <= 0:
        return mp.mpf(0)
    if t >= 1:
        return mp.mpf(1)
    return f(t) / (f(t) + f(1 - t))


def chi(x):
    return step((x - a) / d) * step((b - x) / d)


def eta_prime(x):
    return 2 * chi(x) * mp.cos(2 * pi * x) ** 2


breaks = [0, a, a + d, b - d, b, 1]
eta1 = mp.quad(eta_prime, breaks)
print("c", eta1)


def eta(x):
    n = mp.floor(x)
    s = x - n
    return n * eta1 + mp.quad(eta_prime, [0] + [p for p in breaks[1:-1] if p < s] + [s])


def w(y, eps):
    return mp.cos(2 * pi * y) * mp.e ** (-eps * eta(abs(y)))


for eps in ["0.04", "0.02", "0.01"]:
    e = mp.mpf(eps)
    print(eps, "gamma", mp.quad(lambda y: w(y, e), breaks) / e)

# alpha = -w'' / w by numerical differentiation, independent of any formula.
for y in ["0.1", "0.3", "0.37", "1.3", "2.45"]:
    e = mp.mpf("0.02")
    print(y, "alpha", -mp.diff(lambda t: w(t, e), mp.mpf(y), 2) / w(mp.mpf(y), e))

# sup |alpha - 4 pi^2| / eps from w'' expanded by hand in double precision.
x = np.linspace(0, 1, 400001)


def step_np(t):
    t = np.clip(t, 0, 1)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        g0 = np.where(t > 0, np.exp(-1 / np.where(t > 0, t, 1)), 0.0)
        g1 = np.where(t < 1, np.exp(-1 / np.where(t < 1, 1 - t, 1)), 0.0)
    return g0 / (g0 + g1)


A, B, D = 0.05, 0.5, 0.15
chi_np = step_np((x - A) / D) * step_np((B - x) / D)
dchi_np = np.gradient(chi_np, x)
for eps in [0.04, 0.02, 0.01]:
    c2 = np.cos(2 * np.pi * x) ** 2
    ep = 2 * chi_np * c2  # eta'
    epp = 2 * dchi_np * c2 - 4 * np.pi * chi_np * np.sin(4 * np.pi * x)  # eta''
    # w = cos(2 pi x) e^{-eps eta}:  w''/w = -4 pi^2 + 4 pi eps eta' tan + eps^2 eta'^2 - eps eta''
    # written without tan: alpha - 4 pi^2 = -(w''/w + 4 pi^2) with the tan term as
    # 4 pi eps eta' sin / cos = 8 pi eps chi sin cos.
    dev = 8 * np.pi * eps * chi_np * np.sin(2 * np.pi * x) * np.cos(2 * np.pi * x) + eps**2 * ep**2 - eps * epp
    print(eps, "M", np.max(np.abs(dev)) / eps)
