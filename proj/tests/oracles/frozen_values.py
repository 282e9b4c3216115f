"""Independent oracle computations for values frozen into the C++ tests.

Run with: python3 tests/oracles/frozen_values.py
Uses mpmath / numpy / scipy only; shares no code with the library.
"""
import itertools
import math

import mpmath as mp
import numpy as np
from scipy import special, stats

mp.mp.dps = 40

print("eta(0.58)        =", mp.nstr((1 + mp.mpf("0.58")) * mp.e ** (-mp.mpf("0.58")), 15))
print("hoeffding(1e-10, 9e4) =", mp.nstr(mp.sqrt(mp.log(mp.mpf(10) ** 10) / (2 * 90000)), 15))
print("p_h example      =", mp.nstr(1 - (1 - mp.mpf("1.3e-6")) * mp.e ** (-mp.mpf("0.58") * mp.mpf("0.5") * mp.mpf("0.106")), 15))
print("2/pi             =", mp.nstr(2 / mp.pi, 15))
print("-cos(pi/28)      =", mp.nstr(-mp.cos(mp.pi / 28), 15))
print("pguess_pure(0.4,0.5) =", mp.nstr(1 - mp.mpf("0.4") * (1 - mp.sqrt(mp.mpf("0.75"))), 15))


# Toeplitz hand example by brute-force matrix construction.
def toeplitz_brute(seed, x, m):
    n = len(x)
    out = []
    for i in range(m):
        acc = 0
        for j in range(n):
            acc ^= seed[i + (n - 1) - j] & x[j]
        out.append(acc)
    return out


print("toeplitz(101101, 1011, m=3) =", toeplitz_brute([1, 0, 1, 1, 0, 1], [1, 0, 1, 1], 3))

# Two-universality: exact collision probability of the Toeplitz family for n=16, m=8
# is 2^-8 for any x != y (the family is exactly universal).  Enumerate a small case.
n, m = 6, 3
x = [1, 0, 0, 1, 1, 0]
y = [0, 1, 0, 1, 0, 1]
coll = 0
for seed in itertools.product([0, 1], repeat=n + m - 1):
    coll += toeplitz_brute(seed, x, m) == toeplitz_brute(seed, y, m)
print("toeplitz n=6 m=3 collision fraction =", coll / 2 ** (n + m - 1), "vs 2^-3 =", 2 ** -3)


# NIST SP800-22 reference implementations (independent, written from the published formulas).
def monobit(b):
    s = sum(2 * v - 1 for v in b)
    return special.erfc(abs(s) / math.sqrt(2 * len(b)))


def block_frequency(b, M):
    N = len(b) // M
    chi = 4 * M * sum((sum(b[i * M:(i + 1) * M]) / M - 0.5) ** 2 for i in range(N))
    return special.gammaincc(N / 2, chi / 2)


def runs(b):
    n = len(b)
    pi = sum(b) / n
    v = 1 + sum(b[k] != b[k + 1] for k in range(n - 1))
    return special.erfc(abs(v - 2 * n * pi * (1 - pi)) / (2 * math.sqrt(2 * n) * pi * (1 - pi)))


def cusum_forward(b):
    n = len(b)
    s = 0
    z = 0
    for v in b:
        s += 2 * v - 1
        z = max(z, abs(s))
    phi = stats.norm.cdf
    sqn = math.sqrt(n)
    t1 = sum(phi((4 * k + 1) * z / sqn) - phi((4 * k - 1) * z / sqn)
             for k in range(int(math.floor((-n / z + 1) / 4)), int(math.floor((n / z - 1) / 4)) + 1))
    t2 = sum(phi((4 * k + 3) * z / sqn) - phi((4 * k + 1) * z / sqn)
             for k in range(int(math.floor((-n / z - 3) / 4)), int(math.floor((n / z - 1) / 4)) + 1))
    return 1 - t1 + t2


# Reference sequence: binary expansion of pi (leading "11" included), as in the NIST worked examples.
mp.mp.dps = 400
pi_bits = bin(int(mp.floor(mp.pi * mp.mpf(2) ** 1198)))[2:]
ref100 = [int(c) for c in pi_bits[:100]]
print("pi bits[:100]    =", "".join(map(str, ref100)))
print("monobit(pi100)   = %.12f" % monobit(ref100))
print("runs(pi100)      = %.12f" % runs(ref100))
print("cusum(pi100)     = %.12f" % cusum_forward(ref100))
print("blockfreq(pi100, M=20) = %.12f" % block_frequency(ref100, 20))
ref1000 = [int(c) for c in pi_bits[:1000]]
print("monobit(pi1000)  = %.12f" % monobit(ref1000))
print("runs(pi1000)     = %.12f" % runs(ref1000))
print("cusum(pi1000)    = %.12f" % cusum_forward(ref1000))
print("blockfreq(pi1000, M=32) = %.12f" % block_frequency(ref1000, 32))
alt = [i % 2 for i in range(100)]
print("cusum(alternating 0101.., n=100) = %.12f" % cusum_forward([1 - v for v in alt]))
print("cusum(alternating 1010.., n=100) = %.12f" % cusum_forward(alt))
