"""High-precision reference values, independent of the package's quadrature.

The sphere average of |1 - <z, zeta>|^{-c} is 2F1(c/2, c/2; n; |z|^2), so

    I_{c,t}(z) = int_0^1 n x^{n-1} (1 - x)^t 2F1(c/2, c/2; n; |z|^2 x) dx.

Run this file to print the constants frozen into the tests.
"""

import mpmath as mp

mp.mp.dps = 30


def I_oracle(r2, c, t, n=1):
    r2 = mp.mpf(r2)
    f = lambda x: n * x ** (n - 1) * (1 - x) ** t * mp.hyp2f1(mp.mpf(c) / 2, mp.mpf(c) / 2, n, r2 * x)
    d = 1 - r2
    pts = [0] + [1 - k * d for k in (1000, 100, 10, 3, 1, 0.3) if 0 < 1 - k * d < 1] + [1]
    return mp.quad(f, sorted(set(pts)))


def c_theta(theta, n=1):
    return mp.gamma(n + theta + 1) / (mp.factorial(n) * mp.gamma(theta + 1))


if __name__ == "__main__":
    for args in [(1 - mp.mpf(2) ** -10, 3, 0), (0.9, 2.5, 1), (1 - mp.mpf(2) ** -6, 4, -0.5), (0.75, 1, 0),
                 (0.36, 2.7, 0.5), (0.36, 2.5, 0.5)]:
        print("I", [float(a) for a in args], mp.nstr(I_oracle(*args), 20))
    print("I n=2", mp.nstr(I_oracle(0.5, 3, 0, 2), 20), mp.nstr(I_oracle(0.81, 2.5, 0.5, 2), 20))
    # Stein Schur ratio on the shell |z| = |w| = 1/2
    R1 = I_oracle(0.25, 2, -0.5) * mp.sqrt(0.75)
    print("stein shell ratio r=0.5", mp.nstr(R1 ** 2, 20))
    # necessity ratio for c1 = 5/2 at 1 - |xi|^2 = 1/8
    print("necessity ratio d=1/8", mp.nstr(mp.sqrt(I_oracle(mp.mpf(7) / 8, 5, 0) / I_oracle(mp.mpf(7) / 8, 4, 0)), 20))
