"""Independent reference values for the unit tests.

Densities are built from mpmath's own Laguerre / Gegenbauer functions and
normalized numerically, so nothing here shares code or closed forms with the
library.  Run with `python3 generate.py`; values are pasted into the tests.
"""
import mpmath as mp

mp.mp.dps = 30


def hyd_radial(D, n, l, Z=1):
    """Unnormalized hydrogenic position radial density R^2(r)."""
    eta = n + mp.mpf(D - 3) / 2
    L = l + mp.mpf(D - 3) / 2
    a = 2 * L + 1
    k = n - l - 1
    return lambda r: (2 * Z * r / eta) ** (2 * l) * mp.exp(-2 * Z * r / eta) * mp.laguerre(k, a, 2 * Z * r / eta) ** 2


def hyd_momentum_radial(D, n, l, Z=1):
    eta = n + mp.mpf(D - 3) / 2
    L = l + mp.mpf(D - 3) / 2
    k = n - l - 1
    nu = L + 1

    def f(p):
        y = (eta**2 * p**2 - Z**2) / (eta**2 * p**2 + Z**2)
        return (eta * p) ** (2 * l) / (1 + (eta * p / Z) ** 2) ** (2 * L + 4) * mp.gegenbauer(k, nu, y) ** 2

    return f


def osc_radial(D, n, l, lam=1):
    b = l + mp.mpf(D) / 2 - 1
    return lambda r: r ** (2 * l) * mp.exp(-lam * r * r) * mp.laguerre(n, b, lam * r * r) ** 2


def normalized(f, D, zeros=()):
    pts = [0] + list(zeros) + [mp.inf]
    c = mp.quad(lambda r: f(r) * r ** (D - 1), pts)
    return lambda r: f(r) / c


def log_omega(D):
    return mp.log(2) + mp.mpf(D) / 2 * mp.log(mp.pi) - mp.loggamma(mp.mpf(D) / 2)


def radial_shannon(R2, D, pts):
    # Angular part uniform (l = 0 or handled separately): rho = R^2 / Omega.
    return -mp.quad(lambda r: R2(r) * mp.log(R2(r)) * r ** (D - 1) if R2(r) > 0 else 0, pts) + log_omega(D)


def radial_renyi(R2, D, q, pts):
    w = mp.quad(lambda r: R2(r) ** q * r ** (D - 1), pts)
    return (mp.log(w) + (1 - q) * log_omega(D)) / (1 - q)


def moment(R2, D, a, pts):
    return mp.quad(lambda r: R2(r) * r ** (D - 1 + a), pts)


def lag_zeros(k, a):
    """Zeros of L_k^a, from the roots of its coefficient list."""
    coeffs = [mp.binomial(k + a, k - j) * (-1) ** j / mp.factorial(j) for j in range(k, -1, -1)]
    return sorted(mp.re(z) for z in mp.polyroots(coeffs, maxsteps=200, extraprec=200))


def breakpoints(zeros, tail):
    return [0] + list(zeros) + list(tail) + [mp.inf]


def show(name, v):
    print(f"{name} = {mp.nstr(v, 17)}")


if __name__ == "__main__":
    # Special functions.
    show("log_gamma(501.5)", mp.loggamma(mp.mpf("501.5")))
    show("log_gamma(1e-3)", mp.loggamma(mp.mpf("0.001")))
    show("digamma(1000.3)", mp.digamma(mp.mpf("1000.3")))
    show("digamma(0.25)", mp.digamma(mp.mpf("0.25")))
    # Orthonormal Laguerre: L_k^a(x) / sqrt(Gamma(k+a+1)/k!)
    a, k, x = mp.mpf("2.5"), 5, mp.mpf("1.7")
    show("lag_on(5,2.5,1.7)", mp.laguerre(k, a, x) / mp.sqrt(mp.gamma(k + a + 1) / mp.factorial(k)))
    a, k, x = mp.mpf(2000), 8, mp.mpf(2000)
    v = mp.laguerre(k, a, x) / mp.sqrt(mp.gamma(k + a + 1) / mp.factorial(k))
    show("log|lag_on(8,2000,2000)|", mp.log(abs(v)))
    show("sign", mp.sign(v))
    # Orthonormal Gegenbauer, weight (1-x^2)^{g-1/2}:
    # h_k = pi 2^{1-2g} Gamma(k+2g) / (k! (k+g) Gamma(g)^2)
    g, k, x = mp.mpf("3.5"), 4, mp.mpf("0.3")
    h = mp.pi * 2 ** (1 - 2 * g) * mp.gamma(k + 2 * g) / (mp.factorial(k) * (k + g) * mp.gamma(g) ** 2)
    show("geg_on(4,3.5,0.3)", mp.gegenbauer(k, g, x) / mp.sqrt(h))

    # Hydrogenic D = 3 2p (l = 1, m = 0): rho = R^2 |Y_10|^2, |Y_10|^2 = 3 cos^2/(4 pi).
    D = 3
    R2 = normalized(hyd_radial(3, 2, 1), 3)
    ang = lambda t: 3 * mp.cos(t) ** 2 / (4 * mp.pi)
    S_ang = -2 * mp.pi * mp.quad(lambda t: ang(t) * mp.log(ang(t)) * mp.sin(t), [0, mp.pi / 2, mp.pi])
    S_rad = -mp.quad(lambda r: R2(r) * mp.log(R2(r)) * r**2, [0, mp.inf])
    show("S[H 2p0, D=3, position]", S_rad + S_ang)
    w_ang = 2 * mp.pi * mp.quad(lambda t: ang(t) ** 2 * mp.sin(t), [0, mp.pi])
    w_rad = mp.quad(lambda r: R2(r) ** 2 * r**2, [0, mp.inf])
    show("R2[H 2p0, D=3, position]", -mp.log(w_rad * w_ang))
    # 2p, m = 1: |Y_11|^2 = 3 sin^2/(8 pi)
    ang1 = lambda t: 3 * mp.sin(t) ** 2 / (8 * mp.pi)
    S_ang1 = -2 * mp.pi * mp.quad(lambda t: ang1(t) * mp.log(ang1(t)) * mp.sin(t), [0, mp.pi])
    show("S[H 2p1, D=3, position]", S_rad + S_ang1)

    # Hydrogenic D = 3 ground momentum and 2s momentum (l = 0).
    G = normalized(hyd_momentum_radial(3, 1, 0), 3)
    show("S[H 1s, D=3, momentum]", radial_shannon(G, 3, [0, 1, mp.inf]))
    G = normalized(hyd_momentum_radial(3, 2, 0), 3)
    show("S[H 2s, D=3, momentum]", radial_shannon(G, 3, [0, 0.5, mp.inf]))
    show("R_3[H 2s, D=3, momentum]", radial_renyi(G, 3, 3, [0, 0.5, mp.inf]))

    # Hydrogenic D = 5, n = 3, l = 0: eta = 4, radial variable t = r/2,
    # zeros of L_2^3.
    zr = [2 * z for z in lag_zeros(2, 3)]
    pts = breakpoints(zr, [30, 60, 120])
    R2 = normalized(hyd_radial(5, 3, 0), 5, zeros=zr + [30, 60, 120])
    show("S[H D=5 n=3 l=0, position]", radial_shannon(R2, 5, pts))
    show("R_2[H D=5 n=3 l=0, position]", radial_renyi(R2, 5, 2, pts))
    show("R_0.5[H D=5 n=3 l=0, position]", radial_renyi(R2, 5, mp.mpf("0.5"), pts))
    show("<r^-1>[H D=5 n=3 l=0]", moment(R2, 5, -1, pts))
    show("<r^3.5>[H D=5 n=3 l=0]", moment(R2, 5, mp.mpf("3.5"), pts))
    # Momentum zeros: C_2^2(y) = 0 at y = +-1/sqrt(6), p = sqrt((1+y)/(1-y)) / eta.
    y0 = 1 / mp.sqrt(6)
    zp = sorted(mp.sqrt((1 + y) / (1 - y)) / 4 for y in (-y0, y0))
    pts = breakpoints(zp, [1, 10])
    G = normalized(hyd_momentum_radial(5, 3, 0), 5, zeros=zp + [1, 10])
    show("<p^1.5>[H D=5 n=3 l=0]", moment(G, 5, mp.mpf("1.5"), pts))
    show("S[H D=5 n=3 l=0, momentum]", radial_shannon(G, 5, pts))

    # Oscillator D = 4, n = 2, l = 0: zeros of L_2^1 in x = r^2.
    zo = [mp.sqrt(z) for z in lag_zeros(2, 1)]
    pts = breakpoints(zo, [4, 8])
    O = normalized(osc_radial(4, 2, 0), 4, zeros=zo + [4, 8])
    show("S[O D=4 n=2 l=0]", radial_shannon(O, 4, pts))
    show("R_3[O D=4 n=2 l=0]", radial_renyi(O, 4, 3, pts))
    show("R_0.5[O D=4 n=2 l=0]", radial_renyi(O, 4, mp.mpf("0.5"), pts))
    show("<r^-1>[O D=4 n=2 l=0]", moment(O, 4, -1, pts))

    # Tsallis T_2 of the D = 3 hydrogenic ground state: 1 - int rho^2 = 1 - 1/(8 pi).
    show("T_2[H 1s]", 1 - 1 / (8 * mp.pi))
    # Oscillator ground, D = 3, lambda = 1: T_2 = 1 - (2 pi)^{-3/2}.
    show("T_2[O ground D=3]", 1 - (2 * mp.pi) ** mp.mpf(-1.5))
