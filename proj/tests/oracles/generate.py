"""Independent high-precision oracles for values frozen into the unit tests.

Each value is computed without the library: by direct quadrature over the domain,
by the power series of the kernel, or by closed forms derived by hand. Run with
`python3 tests/oracles/generate.py`; the printed numbers appear verbatim in the tests.
"""
import mpmath as mp

mp.mp.dps = 30


def monomial_moment_quadrature(m, n, alpha):
    # (2 pi)^2 int int r1^(2m+1) r2^(2n+1) over r1^(2/alpha) + r2^2 < 1
    def inner(r2):
        r1max = (1 - r2**2) ** (alpha / 2)
        return r2 ** (2 * n + 1) * r1max ** (2 * m + 2) / (2 * m + 2)
    return (2 * mp.pi) ** 2 * mp.quad(inner, [0, 1])


def monomial_moment_closed(m, n, alpha):
    return mp.pi**2 / (m + 1) * mp.beta(n + 1, alpha * (m + 1) + 1)


def kernel_series(z, w, alpha, M):
    x = z[0] * mp.conj(w[0])
    y = z[1] * mp.conj(w[1])
    return mp.fsum(x**m * y**n / monomial_moment_quadrature_cached(m, n, alpha)
                   for m in range(M + 1) for n in range(M + 1))


_cache = {}


def monomial_moment_quadrature_cached(m, n, alpha):
    key = (m, n, alpha)
    if key not in _cache:
        _cache[key] = monomial_moment_closed(m, n, alpha)
    return _cache[key]


def kernel_closed(z, w, alpha):
    q = 1 - z[1] * mp.conj(w[1])
    x = z[0] * mp.conj(w[0])
    qa = q ** alpha
    return ((alpha + 1) * qa + (alpha - 1) * x) / (mp.pi**2 * q ** (2 - alpha) * (qa - x) ** 3)


def disc_a(eps, delta, r):
    lam = 2 - eps - delta
    f = lambda rho, th: rho * (1 - rho**2) ** (-eps) * abs(1 - r * rho * mp.expj(th)) ** (-lam)
    return mp.quad(f, [0, 0.5, 0.9, 1], [0, 0.1, mp.pi, 2 * mp.pi - 0.1, 2 * mp.pi]) / mp.pi


def forelli_rudin(z1, z2, alpha, e1, e2, e3, d1, d2, terms=400):
    # Expand Theta(x, lam) = 2 pi sum_k ((lam/2)_k / k!)^2 x^(2k); every radial
    # integral then reduces to a Beta function, giving a double series in |z2|^2 and f^2.
    alpha, e1, e2, e3, d1, d2 = (mp.mpf(v) for v in (alpha, e1, e2, e3, d1, d2))
    f = abs(z1) / (1 - abs(z2) ** 2) ** (alpha / 2)
    X = 1 - f**2
    l1 = 3 - e1 + e3 - d1
    l2 = 2 + alpha - e2 - d2
    coef = lambda lam, k: (mp.rf(lam / 2, k) / mp.factorial(k)) ** 2
    total = mp.mpf(0)
    kmax = terms if f != 0 else 1
    for k in range(kmax):
        dk = 2 * mp.pi * coef(l1, k) * f ** (2 * k) * mp.beta(k + 1, 1 - e1) / 2
        inner = mp.fsum(2 * mp.pi * coef(l2, j) * abs(z2) ** (2 * j) * mp.beta(j + 1, alpha - e2 + alpha * k + 1) / 2
                        for j in range(terms))
        total += dk * inner
    return X**e3 * total


if __name__ == "__main__":
    print("c10 alpha=2 quad      ", mp.nstr(monomial_moment_quadrature(1, 0, 2), 20))
    print("c10 alpha=2 closed    ", mp.nstr(monomial_moment_closed(1, 0, 2), 20))
    print("c23 alpha=0.5 quad    ", mp.nstr(monomial_moment_quadrature(2, 3, mp.mpf(0.5)), 20))
    print("c23 alpha=0.5 closed  ", mp.nstr(monomial_moment_closed(2, 3, mp.mpf(0.5)), 20))
    print("c00 alpha=3 quad      ", mp.nstr(monomial_moment_quadrature(0, 0, 3), 20))
    z = (mp.mpf(0), mp.mpf(0.5))
    print("K((0,.5)) series M=60 ", mp.nstr(kernel_series(z, z, 2, 60), 20))
    print("K((0,.5)) closed      ", mp.nstr(kernel_closed(z, z, 2), 20))
    z = (mp.mpf(0.3), mp.mpc(0, 0.4))
    print("||K_z|| a=.5 series    ", mp.nstr(mp.sqrt(mp.re(kernel_series(z, z, mp.mpf(0.5), 60))), 20))
    z = (mp.mpc(0.2, 0.1), mp.mpc(-0.1, 0.3)); w = (mp.mpc(0.05, -0.2), mp.mpc(0.4, 0.1))
    print("K(z,w) a=3 series     ", mp.nstr(kernel_series(z, w, 3, 60), 20))
    print("K(z,w) a=3 closed     ", mp.nstr(kernel_closed(z, w, 3), 20))
    # skwarczynski s((0,0),(0,t)) = sqrt(K(0)/K((0,t))) = (1 - t^2)^(1 + alpha/2)
    print("s(0,(0,.5)) a=2       ", mp.nstr(mp.sqrt(kernel_closed((0, 0), (0, 0), 2) / kernel_closed((0, mp.mpf(.5)), (0, mp.mpf(.5)), 2)), 20))
    # T_{|z2|^2} applied to k_z at z=(0, t), M=10, alpha=2
    t = mp.mpf(0.5); M = 10; a = 2
    c0 = [monomial_moment_closed(0, n, a) for n in range(M + 1)]
    dn = [monomial_moment_closed(0, n + 1, a) / c0[n] for n in range(M + 1)]
    num = mp.fsum(dn[n] ** 2 * t ** (2 * n) / c0[n] for n in range(M + 1))
    den = mp.fsum(t ** (2 * n) / c0[n] for n in range(M + 1))
    print("||T k_z|| |z2|^2 t=.5 ", mp.nstr(mp.sqrt(num / den), 20))
    print("a_{0,.5}(0.9)         ", mp.nstr(disc_a(0, mp.mpf(0.5), mp.mpf(0.9)), 20))
    print("a_{.3,-.5}(0.8)       ", mp.nstr(disc_a(mp.mpf(0.3), mp.mpf(-0.5), mp.mpf(0.8)), 20))
    print("FR z=(0,.5) a=2       ", mp.nstr(forelli_rudin(0, mp.mpf(0.5), 2, .5, .5, .1, .5, .5), 20))
    print("FR z=(.3,.4) a=2      ", mp.nstr(forelli_rudin(mp.mpf(0.3), mp.mpf(0.4), 2, .5, .5, .1, .5, .5), 15))
