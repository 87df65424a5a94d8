"""Brute-force references kept apart from the library code paths."""

from fractions import Fraction
from functools import reduce
from math import gcd


def lcm_fold(n):
    return reduce(lambda acc, k: acc * k // gcd(acc, k), range(1, n + 1), 1)


def brute_norm(x):
    """Scan 1, 2, 3, ... for the first non-divisor."""
    if x == 0:
        return Fraction(0)
    n = 1
    while x % (n + 1) == 0:
        n += 1
    return Fraction(1, n)


def first_primes(count):
    found, p = [], 2
    while len(found) < count:
        if all(p % q for q in found):
            found.append(p)
        p += 1
    return found


def open_ball_modulus(r):
    """Modulus of {z : ||z|| < r}: lcm(1..s) for the least s with 1/s < r."""
    s = 1
    while Fraction(1, s) >= r:
        s += 1
    return lcm_fold(s)


def reference_xn(n, halting_step):
    """Explicit (residue, modulus) list for X_n when M_n halts after ``halting_step`` steps.

    Built straight from the construction with brute-force norms; returns
    the list of balls and the excluded point y.
    """
    ps = first_primes(n + 1)
    t = 1
    for p in ps[:n]:
        t *= p
    m = lcm_fold(t * ps[n])
    balls = []
    for k in range(1, halting_step + 1):
        for sign in (1, -1):
            centre = t + sign * k * m
            mod = open_ball_modulus(brute_norm(k * m) / 2)
            balls.append((centre % mod, mod))
    if halting_step:
        r = min(brute_norm(k * m) for k in range(1, halting_step + 1)) / 2
    else:
        r = Fraction(1, t * ps[n])
    # ||y - t|| < r exactly on one residue class mod open_ball_modulus(r)
    step = open_ball_modulus(r)
    y = t % step
    if y == t:
        y += step
    assert brute_norm(y - t) < r
    mod = open_ball_modulus(brute_norm(y - t))
    balls.append((t % mod, mod))
    return balls, y
