#!/usr/bin/env python3
"""Emit Taylor coefficients (in z = p - 1/2) of the Riemann-Siegel correction
terms C_0..C_4 as a C++ header. Usage: gen_rs_coeffs.py > rs_coeffs.hpp"""
import sys
import mpmath as mp

mp.mp.dps = 200
DEG = 120


def series_mul(a, b):
    out = [mp.mpf(0)] * DEG
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j in range(DEG - i):
            out[i + j] += x * b[j]
    return out


def series_div(a, b):
    out = [mp.mpf(0)] * DEG
    for n in range(DEG):
        s = a[n] - sum(out[i] * b[n - i] for i in range(n))
        out[n] = s / b[0]
    return out


def psi_series():
    # Psi(1/2 + z) = cos(2 pi z^2 - 5 pi / 8) / (-cos(2 pi z))
    a = 5 * mp.pi / 8
    num = [mp.mpf(0)] * DEG
    den = [mp.mpf(0)] * DEG
    for n in range(DEG // 2):
        c = (-1) ** n * (2 * mp.pi) ** (2 * n) / mp.factorial(2 * n)
        if 2 * n < DEG:
            den[2 * n] = -c
        if 4 * n < DEG:
            num[4 * n] += mp.cos(a) * c
        s = (-1) ** n * (2 * mp.pi) ** (2 * n + 1) / mp.factorial(2 * n + 1)
        if 4 * n + 2 < DEG:
            num[4 * n + 2] += mp.sin(a) * s
    return series_div(num, den)


def deriv(a, m):
    return [a[n + m] * mp.factorial(n + m) / mp.factorial(n) for n in range(DEG - m)] + [mp.mpf(0)] * m


def combo(terms):
    out = [mp.mpf(0)] * DEG
    for coef, ser in terms:
        for n in range(DEG):
            out[n] += coef * ser[n]
    return out


def main():
    psi = psi_series()
    d = {m: deriv(psi, m) for m in range(13)}
    pi = mp.pi
    C = [
        psi,
        combo([(-1 / (96 * pi**2), d[3])]),
        combo([(1 / (64 * pi**2), d[2]), (1 / (18432 * pi**4), d[6])]),
        combo([(-1 / (64 * pi**2), d[1]), (-1 / (3840 * pi**4), d[5]), (-1 / (5308416 * pi**6), d[9])]),
        combo([(1 / (128 * pi**2), d[0]), (19 / (24576 * pi**4), d[4]), (11 / (5898240 * pi**6), d[8]),
               (1 / (2038431744 * pi**8), d[12])]),
    ]
    out = sys.stdout
    out.write("#pragma once\n\n// Generated by tools/gen_rs_coeffs.py. Taylor coefficients in z = p - 1/2.\n\n")
    out.write("#include <array>\n#include <cstddef>\n\nnamespace lmlab::detail {\n\n")
    # The fast path is used for t >= 1e4, where (t/2pi)^{-k/2} <= 40^{-k};
    # terms below 1e-18 after that scaling are dropped.
    for k, ser in enumerate(C):
        n = DEG - 14
        tol = mp.mpf(10) ** -18 * mp.mpf(40) ** k
        while n > 0 and abs(ser[n - 1]) * mp.mpf(0.5) ** (n - 1) < tol:
            n -= 1
        out.write(f"inline constexpr std::array<double, {n}> rs_c{k} = {{\n")
        for i in range(n):
            out.write(f"    {mp.nstr(ser[i], 20, min_fixed=1, max_fixed=0)},\n")
        out.write("};\n\n")
    out.write("} // namespace lmlab::detail\n")


if __name__ == "__main__":
    main()
