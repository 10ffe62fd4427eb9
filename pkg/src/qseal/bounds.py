"""Security-bound calculator: leak bounds, thresholds and parameter search.

Scalar bounds for the sealing scheme, parametrized by the pass probability
floor epsilon_p, the information tolerance epsilon_i, the number of decoys t
and the codeword length n:

* location-leak bound: an adversary whose strategies keep all t exposed
  decoy qubits clean with total weight a learns at most
  -a log2 a - (1-a) log2[(1-a)/(2^t - 1)] bits about the decoy positions
  (strictly below the looser H(a) + t(1-a));
* pass threshold: the analysis needs epsilon_p > 1/(1 + 2^t), in which case
  the leak is below i_bound(epsilon_p) = H(epsilon_p) + (1-epsilon_p) t;
* covering radius of any [[n,1,d]] code, viewed as a classical length-n code
  over GF(4) with 2^(n+1) codewords, is at most floor((n-1)/2)
  (redundancy bound), which caps how few correct positions suffice to read
  the message;
* message-information bound: combining the ball-picking probability with the
  radius cap gives i_psi <= [(n-t)/(n - i_bound)]^ceil((n+1)/2).

`parameter_search` finds the smallest n (with d = ceil(2*rate*n) and
t = floor((d-1)/2)) satisfying the threshold and driving i_psi below
epsilon_i.  The closed-form length estimate `min_codeword_length` uses the
asymptotic ratio alpha(epsilon_p) = (1-rate)/(1 + (1-epsilon_p) rate) --
anchored to alpha(0) < 0.896 at rate 0.055 -- but is looser than the direct
search; reports carry both numbers and a self-consistency flag.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

# Withheld fraction t/n achievable with distance-rate-0.11 codes:
# 0.5 * binary_entropy_inverse(1/2) ~= 0.055.
DEFAULT_WITHHELD_RATE = 0.055

PARAMETER_SEARCH_CAP = 200_000


class InfeasibleParameters(Exception):
    """No codeword length within the search cap meets the targets."""


def binary_entropy(a: float) -> float:
    """H(a) in bits, with H(0) = H(1) = 0 by continuity."""
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"entropy argument {a} outside [0, 1]")
    if a == 0.0 or a == 1.0:
        return 0.0
    return float(-a * math.log2(a) - (1 - a) * math.log2(1 - a))


def binary_entropy_inverse(y: float, tol: float = 1e-12) -> float:
    """The a in [0, 1/2] with H(a) = y, by bisection to ``tol``."""
    if not 0.0 <= y <= 1.0:
        raise ValueError(f"entropy value {y} outside [0, 1]")
    lo, hi = 0.0, 0.5
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if binary_entropy(mid) < y:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


@dataclass(frozen=True)
class LeakBound:
    tight: float
    loose: float


def holevo_bound_ie(a: float, t: int) -> LeakBound:
    """Location-information cap for pass weight a and t decoys (tight, loose)."""
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"pass weight {a} outside [0, 1]")
    if t < 1:
        if a == 1.0:
            return LeakBound(0.0, 0.0)
        raise ValueError("t = 0 with a < 1 is degenerate (no decoy states to spread over)")
    if a == 1.0:
        tight = 0.0
    elif a == 0.0:
        tight = float(math.log2(2 ** t - 1)) if t > 1 else 0.0
    else:
        tight = float(-a * math.log2(a) - (1 - a) * math.log2((1 - a) / (2 ** t - 1)))
    loose = binary_entropy(a) + t * (1 - a)
    return LeakBound(tight, loose)


def epsilon_condition(epsilon_p: float, t: int) -> bool:
    """Strict pass-probability threshold epsilon_p > 1/(1 + 2^t)."""
    if not 0.0 <= epsilon_p <= 1.0:
        raise ValueError(f"epsilon_p {epsilon_p} outside [0, 1]")
    if t < 0:
        raise ValueError("t must be nonnegative")
    return epsilon_p > 1.0 / (1.0 + 2 ** t)


def i_bound(epsilon_p: float, t: int) -> float:
    """Leak cap H(epsilon_p) + (1 - epsilon_p) t for passing strategies."""
    if not epsilon_condition(epsilon_p, t):
        warnings.warn("pass threshold violated: the location-leak cap is not meaningful",
                      stacklevel=2)
    return binary_entropy(epsilon_p) + (1 - epsilon_p) * t


def redundancy_bound(n: int) -> int:
    """Covering-radius cap floor((n-1)/2) for an [[n,1,d]] code over GF(4)."""
    if n < 1:
        raise ValueError("n must be positive")
    return (n - 1) // 2


def _base_ratio(n: int, t: int, epsilon_p: float) -> float:
    ib = i_bound(epsilon_p, t) if t >= 1 else binary_entropy(epsilon_p)
    if ib >= n:
        raise ValueError(f"information bound {ib:.3f} reaches the block length {n}")
    return (n - t) / (n - ib)


def pick_probability_bound(n: int, t: int, epsilon_p: float,
                           rho: int | None = None) -> float:
    """Cap on guessing (n - rho) true message positions among the survivors."""
    if rho is None:
        rho = redundancy_bound(n)
    return _base_ratio(n, t, epsilon_p) ** (n - rho)


def psi_info_bound(n: int, t: int, epsilon_p: float) -> float:
    """Message-information cap [(n-t)/(n-i_bound)]^ceil((n+1)/2)."""
    exponent = (n + 1 + 1) // 2  # ceil((n+1)/2)
    return _base_ratio(n, t, epsilon_p) ** exponent


def alpha_of(epsilon_p: float, rate: float = DEFAULT_WITHHELD_RATE) -> float:
    """Asymptotic base ratio (1-rate)/(1 + (1-epsilon_p) rate), < 1 for any rate > 0."""
    if not 0.0 < rate < 0.5:
        raise ValueError(f"withheld rate {rate} outside (0, 0.5)")
    if not 0.0 <= epsilon_p <= 1.0:
        raise ValueError(f"epsilon_p {epsilon_p} outside [0, 1]")
    return (1.0 - rate) / (1.0 + (1.0 - epsilon_p) * rate)


def t_for_length(n: int, rate: float = DEFAULT_WITHHELD_RATE) -> int:
    """Decoy count for block length n at the given distance rate: d = ceil(2*rate*n)."""
    d = math.ceil(2 * rate * n)
    return max(0, (d - 1) // 2)


def min_codeword_length(epsilon_p: float, epsilon_i: float,
                        rate: float = DEFAULT_WITHHELD_RATE) -> int:
    """Closed-form length estimate ceil(2 log(1/epsilon_i) / log(1/alpha)).

    Also enforces the pass threshold through the implied t.  epsilon_i = 1
    returns 0 (any length suffices formally).  Note this estimate is looser
    than `parameter_search`: the asymptotic alpha understates the finite-n
    base ratio, so the returned length need not drive psi_info_bound below
    epsilon_i.
    """
    if not 0.0 < epsilon_i <= 1.0:
        raise ValueError(f"epsilon_i {epsilon_i} outside (0, 1]")
    if epsilon_i == 1.0:
        return 0
    alpha = alpha_of(epsilon_p, rate)
    if alpha >= 1.0:
        raise InfeasibleParameters(f"alpha = {alpha} admits no finite length")
    n_alpha = math.ceil(2 * math.log(1 / epsilon_i) / math.log(1 / alpha))
    n = max(2, n_alpha)
    while not epsilon_condition(epsilon_p, max(1, t_for_length(n, rate))) or t_for_length(n, rate) < 1:
        n += 1
        if n > PARAMETER_SEARCH_CAP:
            raise InfeasibleParameters("pass threshold unreachable within the search cap")
    return n


@dataclass(frozen=True)
class SecurityParameters:
    """(epsilon_p, epsilon_i): pass-probability floor and information tolerance."""

    epsilon_p: float
    epsilon_i: float

    def __post_init__(self):
        if not 0.0 < self.epsilon_p <= 1.0:
            raise ValueError(f"epsilon_p {self.epsilon_p} outside (0, 1]")
        if not 0.0 < self.epsilon_i < 1.0:
            raise ValueError(f"epsilon_i {self.epsilon_i} outside (0, 1)")


@dataclass(frozen=True)
class BoundReport:
    """Every scalar the bound calculator produces for one parameter point."""

    epsilon_p: float
    epsilon_i: float
    rate: float
    feasible: bool
    n_min: int | None = None
    d: int | None = None
    t: int | None = None
    a: float | None = None                    # worst-case pass weight (= epsilon_p)
    i_e_bound: float | None = None            # tight location-leak cap at a
    i_e_bound_loose: float | None = None
    threshold_ok: bool | None = None
    i_bound: float | None = None
    rho_bound: int | None = None
    p_bound: float | None = None
    i_psi_bound: float | None = None
    alpha: float | None = None
    alpha_length_bound: int | None = None     # closed-form estimate, see min_codeword_length
    self_consistent: bool | None = None
    reason: str | None = None

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def parameter_search(sec: SecurityParameters, rate: float = DEFAULT_WITHHELD_RATE,
                     max_n: int = PARAMETER_SEARCH_CAP) -> BoundReport:
    """Smallest n (with d = ceil(2*rate*n), t = floor((d-1)/2)) meeting both
    the pass threshold and psi_info_bound < epsilon_i; infeasible searches
    return a report with ``feasible`` False rather than raising."""
    for n in range(2, max_n + 1):
        t = t_for_length(n, rate)
        if t < 1:
            continue
        if not epsilon_condition(sec.epsilon_p, t):
            continue
        ib = binary_entropy(sec.epsilon_p) + (1 - sec.epsilon_p) * t
        if ib >= n:
            continue
        psi = psi_info_bound(n, t, sec.epsilon_p)
        if psi < sec.epsilon_i:
            d = math.ceil(2 * rate * n)
            leak = holevo_bound_ie(sec.epsilon_p, t)
            return BoundReport(
                epsilon_p=sec.epsilon_p, epsilon_i=sec.epsilon_i, rate=rate,
                feasible=True, n_min=n, d=d, t=t, a=sec.epsilon_p,
                i_e_bound=leak.tight, i_e_bound_loose=leak.loose,
                threshold_ok=True, i_bound=ib,
                rho_bound=redundancy_bound(n),
                p_bound=pick_probability_bound(n, t, sec.epsilon_p),
                i_psi_bound=psi,
                alpha=alpha_of(sec.epsilon_p, rate),
                alpha_length_bound=min_codeword_length(sec.epsilon_p, sec.epsilon_i, rate),
                self_consistent=psi < sec.epsilon_i)
    return BoundReport(epsilon_p=sec.epsilon_p, epsilon_i=sec.epsilon_i, rate=rate,
                       feasible=False,
                       reason=f"no n <= {max_n} meets the targets")


# ----------------------------------------------------------------------
# sweep emitters (rows for CSV/plots)


def psi_bound_sweep(epsilon_p: float, rate: float = DEFAULT_WITHHELD_RATE,
                    n_max: int = 2000, n_min: int = 2, step: int = 1) -> list[dict]:
    """(n, t, i_bound, base ratio, psi bound) rows over a length range."""
    rows = []
    for n in range(n_min, n_max + 1, step):
        t = t_for_length(n, rate)
        if t < 1 or not epsilon_condition(epsilon_p, t):
            continue
        ib = binary_entropy(epsilon_p) + (1 - epsilon_p) * t
        if ib >= n:
            continue
        base = (n - t) / (n - ib)
        rows.append({"n": n, "t": t, "i_bound": ib, "base_ratio": base,
                     "psi_info_bound": base ** ((n + 2) // 2)})
    return rows


def leak_bound_sweep(t: int, points: int = 201) -> list[dict]:
    """(a, tight, loose) rows of the location-leak bound over a in [0, 1]."""
    rows = []
    for k in range(points):
        a = k / (points - 1)
        b = holevo_bound_ie(a, t)
        rows.append({"a": a, "tight": b.tight, "loose": b.loose})
    return rows
