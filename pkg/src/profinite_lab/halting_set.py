"""A recursive open subset of Z that is not effectively open.

Each registry machine M_n owns a neighbourhood X_n of t_n = p_1 * ... * p_n
inside the closed ball t_n + m*Z, m = theta(t_{n+1}).  After every step k
of M_n the points t_n +- k*m join X_n together with open balls of half
their distance to t_n.  If M_n halts after K steps, one last ball around
t_n is added whose radius stops short of the first natural number y that
the construction left out.  B is the union of the X_n and A its complement.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .machines import Halted, Registry, RunningAfter, RunStatus, Simulation
from .profinite import (
    BUDGET_EXHAUSTED,
    Progression,
    as_radius,
    dist,
    norm,
    open_ball,
    primes,
    progression_covered_by,
    theta,
)

# classes examined when re-verifying witnesses
COVER_BUDGET = 10**6


def nth_prime(n: int) -> int:
    if n < 1:
        raise ValueError(f"prime index must be >= 1, got {n}")
    return next(itertools.islice(primes(), n - 1, None))


def t_seq(n: int) -> int:
    """Product of the first n primes."""
    if n < 1:
        raise ValueError(f"t_seq needs n >= 1, got {n}")
    return math.prod(itertools.islice(primes(), n))


@dataclass(frozen=True)
class XnParams:
    n: int
    t: int
    modulus: int
    radius: Fraction

    @property
    def closed_ball(self) -> Progression:
        return Progression(self.t, self.modulus)

    def point(self, k: int) -> int:
        return self.t + k * self.modulus


def step_ball(params: XnParams, k: int) -> Progression:
    """Open ball added around t_n + k*m, of half its distance to t_n."""
    return open_ball(params.point(k), norm(k * params.modulus) / 2)


def earliest_step(params: XnParams, k: int) -> int:
    """Signed index j of smallest |j| whose step ball contains t_n + k*m.

    A step ball around t_n + j*m contains the point exactly when
    ||j*m|| == ||k*m|| and j == k modulo ``period``, so |j| <= |k| and the
    point is in X_n as soon as M_n has run |j| steps.
    """
    radius = norm(k * params.modulus) / 2
    ball_modulus = open_ball(0, radius).modulus
    period = ball_modulus // math.gcd(ball_modulus, params.modulus)
    r = k % period
    if r == 0:
        return period
    return r if r <= period - r else r - period


# -- X_n descriptions ---------------------------------------------------------


@dataclass(frozen=True)
class NonHaltingSoFar:
    n: int
    steps: int
    step_balls: tuple[tuple[int, Progression], ...]

    @property
    def balls(self) -> list[Progression]:
        return [b for _, b in self.step_balls]


@dataclass(frozen=True)
class Exact:
    n: int
    step_balls: tuple[tuple[int, Progression], ...]
    halting_step: int
    y: int
    r_prime: Fraction
    final_ball: Progression

    @property
    def balls(self) -> list[Progression]:
        return [b for _, b in self.step_balls] + [self.final_ball]


XnDescription = Union[NonHaltingSoFar, Exact]


def finalize(params: XnParams, halting_step: int, step_balls) -> Exact:
    """Close off X_n for a machine that halted after ``halting_step`` steps."""
    if halting_step == 0:
        r = params.radius
    else:
        r = min(norm(k * params.modulus) for k in range(1, halting_step + 1)) / 2
    inner = open_ball(params.t, r)
    # smallest natural number != t_n within distance r of t_n
    y = inner.residue if inner.residue != params.t else params.t + inner.modulus
    r_prime = dist(params.t, y)
    return Exact(
        n=params.n,
        step_balls=tuple(step_balls),
        halting_step=halting_step,
        y=y,
        r_prime=r_prime,
        final_ball=open_ball(params.t, r_prime),
    )


# -- membership certificates ----------------------------------------------------


@dataclass(frozen=True)
class NoCandidateIndex:
    pass


@dataclass(frozen=True)
class OutsideClosedBall:
    n: int


@dataclass(frozen=True)
class CenterPoint:
    n: int


@dataclass(frozen=True)
class AddedAtStep:
    n: int
    k: int
    ball: Progression


@dataclass(frozen=True)
class InsideFinalBall:
    n: int
    ball: Progression


@dataclass(frozen=True)
class ExcludedByExactXn:
    n: int


Certificate = Union[
    NoCandidateIndex, OutsideClosedBall, CenterPoint, AddedAtStep, InsideFinalBall, ExcludedByExactXn
]


@dataclass(frozen=True)
class MembershipAnswer:
    verdict: bool
    certificate: Certificate

    def __bool__(self) -> bool:
        return self.verdict


@dataclass(frozen=True)
class Witness:
    modulus: int
    verified: bool


@dataclass(frozen=True)
class UnknownWithinBudget:
    budget: int


WitnessResult = Union[Witness, UnknownWithinBudget]


class HaltingSet:
    """The set B (and its complement A) built from a machine registry.

    Simulations are shared across queries and only ever extended, so
    repeated membership queries cost one simulation per machine overall.
    """

    def __init__(self, registry: Registry):
        self.registry = registry
        self._primes = list(itertools.islice(primes(), len(registry) + 1))
        self._params = {}
        self._runs = {}
        self._exact = {}
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        names = ", ".join(m.name for m in self.registry)
        return f"HaltingSet([{names}])"

    def xn_params(self, n: int) -> XnParams:
        if not 1 <= n <= len(self.registry):
            raise IndexError(f"index {n} outside registry of size {len(self.registry)}")
        params = self._params.get(n)
        if params is None:
            t_next = t_seq(n + 1)
            params = XnParams(n=n, t=t_seq(n), modulus=theta(t_next), radius=Fraction(1, t_next))
            self._params[n] = params
        return params

    def run(self, n: int, steps: int) -> RunStatus:
        """Status of M_n after ``steps`` steps (cached, thread-safe)."""
        with self._lock:
            sim = self._runs.get(n)
            if sim is None:
                sim = self._runs[n] = Simulation(self.registry[n])
            return sim.advance_to(steps)

    def candidate_index(self, x: int) -> int | None:
        """The only n for which x could lie in X_n: p_1..p_n divide x, p_{n+1} does not."""
        count = 0
        for p in self._primes:
            if x % p:
                break
            count += 1
        if count == 0 or count > len(self.registry):
            return None
        return count

    def describe_xn(self, n: int, budget: int) -> XnDescription:
        params = self.xn_params(n)
        status = self.run(n, budget)
        if isinstance(status, Halted) and n in self._exact:
            return self._exact[n]
        last = status.steps if isinstance(status, Halted) else budget
        balls = []
        for k in range(1, last + 1):
            balls.append((k, step_ball(params, k)))
            balls.append((-k, step_ball(params, -k)))
        if isinstance(status, Halted):
            exact = self._exact[n] = finalize(params, status.steps, balls)
            return exact
        return NonHaltingSoFar(n=n, steps=budget, step_balls=tuple(balls))

    def member_b(self, x: int) -> MembershipAnswer:
        n = self.candidate_index(x)
        if n is None:
            return MembershipAnswer(False, NoCandidateIndex())
        params = self.xn_params(n)
        if x not in params.closed_ball:
            return MembershipAnswer(False, OutsideClosedBall(n))
        k = (x - params.t) // params.modulus
        if k == 0:
            return MembershipAnswer(True, CenterPoint(n))
        j = earliest_step(params, k)
        status = self.run(n, abs(j))
        if isinstance(status, RunningAfter) or status.steps == abs(j):
            return MembershipAnswer(True, AddedAtStep(n, j, step_ball(params, j)))
        exact = self.describe_xn(n, status.steps)
        if x in exact.final_ball:
            return MembershipAnswer(True, InsideFinalBall(n, exact.final_ball))
        return MembershipAnswer(False, ExcludedByExactXn(n))

    def member_a(self, x: int) -> bool:
        return not self.member_b(x).verdict

    def exact_balls(self, n: int, budget: int) -> list[Progression] | None:
        """X_n as a finite union of progressions, if that is known.

        Known means: M_n halts within ``budget`` steps, or the machine carries
        a declared status (trusted, not simulated beyond ``budget``).
        """
        status = self.run(n, budget)
        if isinstance(status, Halted):
            return self.describe_xn(n, budget).balls
        declared = self.registry[n].declared
        params = self.xn_params(n)
        if declared.kind == "loops":
            return [params.closed_ball]
        if declared.kind == "halts":
            balls = []
            for k in range(1, declared.steps + 1):
                balls += [(k, step_ball(params, k)), (-k, step_ball(params, -k))]
            return finalize(params, declared.steps, balls).balls
        return None

    def known_balls(self, n: int, budget: int) -> list[Progression]:
        """Progressions certainly inside X_n given ``budget`` simulated steps."""
        exact = self.exact_balls(n, budget)
        if exact is not None:
            return exact
        return self.describe_xn(n, budget).balls

    def openness_witness(self, x: int, budget: int) -> WitnessResult:
        answer = self.member_b(x)
        if not answer.verdict:
            raise ValueError(f"{x} is not in B ({type(answer.certificate).__name__})")
        cert = answer.certificate
        n = cert.n
        if isinstance(cert, (AddedAtStep, InsideFinalBall)):
            modulus = cert.ball.modulus
            known = self.known_balls(n, max(budget, abs(getattr(cert, "k", 0))))
        else:
            status = self.run(n, budget)
            if isinstance(status, Halted):
                exact = self.describe_xn(n, budget)
                modulus, known = exact.final_ball.modulus, exact.balls
            elif self.registry[n].declared.kind == "loops":
                params = self.xn_params(n)
                modulus, known = params.modulus, [params.closed_ball]
            else:
                return UnknownWithinBudget(budget)
        verified = progression_covered_by(Progression(x, modulus), known, COVER_BUDGET)
        return Witness(modulus, verified is True)

    def halting_bound_from_certificate(self, n: int, r) -> int:
        """Smallest k >= 1 with t_n + k*m inside B(t_n, r).

        If B(t_n, r) lies in B, M_n either never halts or halts in fewer
        than this many steps.
        """
        params = self.xn_params(n)
        ball = open_ball(params.t, as_radius(r))
        return ball.modulus // math.gcd(ball.modulus, params.modulus)


def coarse_halting_bound(r) -> int:
    """theta(ceil(1/r) + 1): a cruder k with t_n + k*m inside B(t_n, r)."""
    r = as_radius(r)
    return theta(math.ceil(1 / r) + 1)


def known_b_balls(hs: HaltingSet, p: Progression, budget: int) -> tuple[list[Progression], bool]:
    """Progressions known to lie in B that may meet ``p``.

    The flag says whether they are all of B near ``p`` (every relevant X_n
    exactly known) or only a lower approximation.
    """
    known, complete = [], True
    for n in range(1, len(hs.registry) + 1):
        if not hs.xn_params(n).closed_ball.intersects(p):
            continue
        exact = hs.exact_balls(n, budget)
        if exact is None:
            complete = False
            known += hs.describe_xn(n, budget).balls
        else:
            known += exact
    return known, complete


def covered_by_b(hs: HaltingSet, p: Progression, budget: int) -> bool | None:
    """Whether ``p`` lies in B, judged from what ``budget`` steps reveal.

    ``None`` when the answer is not settled: some relevant X_n is only
    partially known, or the covering check ran out of classes.
    """
    known, complete = known_b_balls(hs, p, budget)
    result = progression_covered_by(p, known, COVER_BUDGET)
    if result is True:
        return True
    if result is BUDGET_EXHAUSTED or not complete:
        return None
    return False
