"""Exit criteria, one test per criterion; a PASS/FAIL line each is printed in the summary."""

import io
import random
from contextlib import contextmanager
from fractions import Fraction

import numpy as np

from conftest import ACCEPTANCE_RESULTS, make_set
from oracles import brute_norm, lcm_fold, reference_xn
from profinite_lab.cli import run_cli
from profinite_lab.depth import default_schedule, depth_table, quotient_kill_shifts
from profinite_lab.halting_set import Exact
from profinite_lab.lamplighter import Amalgam, defining_relators, identification_word, inverse_word
from profinite_lab.machines import Halted, halts_within, run_bounded
from profinite_lab.profinite import (
    BUDGET_EXHAUSTED,
    Progression,
    closed_ball,
    dist,
    open_ball,
    progression_contains,
    progression_covered_by,
    theta,
)


@contextmanager
def criterion(number, title):
    try:
        yield
    except BaseException:
        ACCEPTANCE_RESULTS.append((number, title, False))
        print(f"[FAIL] criterion {number}: {title}")
        raise
    ACCEPTANCE_RESULTS.append((number, title, True))
    print(f"[PASS] criterion {number}: {title}")


def cli(*argv):
    out = io.StringIO()
    code = run_cli(list(argv), stdout=out, stderr=io.StringIO())
    return code, out.getvalue()


def test_1_metric_suite():
    with criterion(1, "ultrametric + identity on 1e5 triples; theta vs lcm fold, n <= 50"):
        rng = random.Random(20201)
        for _ in range(10**5):
            x, y, z = (rng.randint(-10**6, 10**6) for _ in range(3))
            assert dist(x, z) <= max(dist(x, y), dist(y, z))
            assert (dist(x, y) == 0) == (x == y)
            assert dist(x, x) == 0
        for n in range(1, 51):
            assert theta(n) == lcm_fold(n)


def test_2_balls_match_brute_force():
    with criterion(2, "closed/open balls agree with divisor-scan distance, n <= 8, |x| <= 1e3"):
        mismatches = 0
        for n in range(1, 9):
            width = 4 * lcm_fold(n)
            offsets = np.arange(-width // 2, width // 2, dtype=np.int64)
            norms = [brute_norm(int(d)) for d in offsets]
            want_closed = np.array([v <= Fraction(1, n) for v in norms])
            want_open = np.array([v < Fraction(1, n) for v in norms])
            for x in range(-1000, 1001):
                ys = x + offsets
                for ball, want in ((closed_ball(x, n), want_closed), (open_ball(x, Fraction(1, n)), want_open)):
                    got = (ys - ball.residue) % ball.modulus == 0
                    mismatches += int(np.count_nonzero(got != want))
                if x % 97 == 0:
                    ball = closed_ball(x, n)
                    for i in range(0, len(offsets), 13):
                        mismatches += progression_contains(ball, int(ys[i])) != bool(want_closed[i])
        assert mismatches == 0


def test_3_exact_xn_halt1():
    with criterion(3, "HALT1: X_1 balls, y = 360362, r' = 1/15; member_B vs brute force on |x| <= 1e5"):
        hs = make_set("halt1")
        d = hs.describe_xn(1, 10**4)
        assert isinstance(d, Exact)
        expected = {Progression(2, 720720), Progression(62, 360360), Progression(-58, 360360)}
        assert set(d.balls) == expected
        assert (d.y, d.r_prime) == (360362, Fraction(1, 15))
        reference, y = reference_xn(1, 1)
        assert {Progression(*b) for b in reference} == expected and y == 360362
        for x in range(-10**5, 10**5 + 1):
            brute = any((x - c) % m == 0 for c, m in reference)
            assert hs.member_b(x).verdict == brute, x
        assert not hs.member_b(d.y).verdict
        assert progression_covered_by(open_ball(2, Fraction(1, 15)), d.balls) is True
        rhos = [Fraction(1, 15) + Fraction(1, 10**k) for k in (3, 6, 9)]
        rhos += [Fraction(1, s) for s in range(1, 15)] + [Fraction(2, 29), Fraction(3, 5), 2, 10]
        for rho in rhos:
            assert rho > Fraction(1, 15)
            assert progression_covered_by(open_ball(2, rho), d.balls) is False


def test_4_divisibility_disjointness():
    with criterion(4, "1e4 sampled members of X_1 across fixtures: 2 | x, 3 does not"):
        rng = random.Random(4)
        count = 0
        for name in ("loop", "loop_declared", "halt1", "halt14"):
            hs = make_set(name)
            balls = hs.describe_xn(1, 200).balls
            for _ in range(2500):
                ball = rng.choice(balls)
                x = ball.residue + ball.modulus * rng.randint(-10**6, 10**6)
                assert hs.member_b(x).verdict
                assert x % 2 == 0 and x % 3 != 0
                count += 1
        assert count == 10**4


def test_5_word_problem():
    with criterion(5, "relators trivial; u_j u^_j^-1 trivial iff j in A; w w^-1; strategies agree"):
        for name in ("loop", "halt1", "halt14"):
            hs = make_set(name)
            group = Amalgam(hs.member_a)
            for label, w in defining_relators(hs.member_a, 30):
                assert group.is_trivial(w), label
            for j in range(-30, 31):
                assert group.is_trivial(identification_word(j)) == hs.member_a(j), j
        hs = make_set("loop")
        group = Amalgam(hs.member_a)
        rng = random.Random(5)
        for _ in range(10**4):
            w = tuple(rng.choice("aAebBf") for _ in range(rng.randint(0, 12)))
            assert group.is_trivial(w + inverse_word(w))
        for _ in range(10**4):
            w = tuple(rng.choice("aAebBf") for _ in range(rng.randint(0, 12)))
            assert group.is_trivial(w, "leftmost") == group.is_trivial(w, "rightmost")


def test_6_non_effectiveness_demo():
    with criterion(6, "LOOP undeclared: witness for 2 unknown (exit 2) at all budgets; 62 verified"):
        for budget in (0, 1, 10, 100, 1000, 10**4, 10**5):
            code, out = cli("set", "witness", "2", "--registry", "loop.tm", "--budget", str(budget))
            assert code == 2 and out.splitlines()[0] == "unknown"
            code, out = cli("set", "member", "2", "--registry", "loop.tm", "--budget", str(budget))
            assert code == 0 and out.splitlines()[0] == "true"
        code, out = cli("set", "witness", "62", "--registry", "loop.tm")
        assert code == 0 and out.splitlines()[0] == "360360" and "verified=true" in out


def test_7_halting_bound_contract():
    with criterion(7, "HALT14: bound from any verified ball around t_1 is >= 14 and confirmed"):
        hs = make_set("halt14")
        machine = hs.registry[1]
        balls = hs.describe_xn(1, 100).balls
        radii = {Fraction(1, s) for s in range(1, 41)} | {hs.describe_xn(1, 100).r_prime}
        radii |= {Fraction(1, 18) - Fraction(1, 1000), Fraction(1, 40) / 7}
        verified = [r for r in sorted(radii) if progression_covered_by(open_ball(2, r), balls) is True]
        assert verified
        for r in verified:
            bound = hs.halting_bound_from_certificate(1, r)
            assert bound >= 14
            assert halts_within(machine, bound)
            status = run_bounded(machine, bound - 1)
            assert isinstance(status, Halted) and status.steps < bound


def test_8_depth_growth():
    with criterion(8, "witness moduli for x = 2: LOOP-declared 60 < HALT1 720720 < HALT14 232792560"):
        moduli = []
        for name in ("loop_declared", "halt1", "halt14"):
            hs = make_set(name)
            row = depth_table(hs, [2], default_schedule(20))[0]
            known = hs.exact_balls(1, 10**4)
            assert progression_covered_by(Progression(2, row.witness_modulus), known) is True
            moduli.append(row.witness_modulus)
        assert moduli == [60, 720720, 232792560]
        assert moduli[0] < moduli[1] < moduli[2]


def test_9_quotient_consistency():
    with criterion(9, "quotient_kill_shifts agrees with direct shift search on 1e3 pairs"):
        hs = make_set("loop_declared")
        rng = random.Random(9)
        for _ in range(10**3):
            x = rng.choice([2 + 60 * rng.randint(-100, 100), rng.randint(-10**4, 10**4)])
            modulus = rng.choice([rng.randint(1, 1000), 60 * rng.randint(1, 16)])
            verdict = quotient_kill_shifts(hs, x, modulus, 1000)
            assert verdict is not BUDGET_EXHAUSTED
            found = next((k for k in range(-1000, 1001) if hs.member_a(x + k * modulus)), None)
            if found is not None:
                assert verdict.identity_in_quotient
            if verdict.identity_in_quotient:
                assert hs.member_a(x + verdict.shift * modulus)
