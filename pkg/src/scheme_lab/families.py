"""The 21 classical families of symmetric designs and their LSSD integrality verdicts.

Each family maps integer arguments to a triple (v, k, lambda). ``family_verdict``
sweeps a finite argument range and tests, for every triple, the integrality
conditions that any linked system with three or more fibers must meet. Claims
that a family "always" or "never" passes are verified on the range only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .constructions import prime_power
from .errors import DomainViolation, NotASymmetricDesign
from .feasibility import lssd_feasibility
from .verdict import Verdict, check

DEFAULT_VMAX = 10**6

Triple = tuple[int, int, int]

# conditions in the order they are reported
CONDITIONS = (
    "order s integral",
    "v composite",
    "gcd(v, k) > 1",
    "gcd(v, s) > 1",
    "exactly one linking value integral",
)
NEEDS_S = {"gcd(v, s) > 1", "exactly one linking value integral"}


def _geo(q: int, m: int) -> int:
    """1 + q + ... + q^m (0 when m < 0)."""
    return (q ** (m + 1) - 1) // (q - 1) if m >= 0 else 0


def _int(x: Fraction | int, what: str) -> int:
    if type(x) is int:
        return x
    if x.denominator != 1:
        raise DomainViolation(f"{what} is not an integer")
    return int(x)


_SIEVE_LIMIT = 1 << 22
_spf: np.ndarray | None = None


def _smallest_factor(n: int) -> int:
    """Smallest prime factor, from a lazily built sieve when n is small enough."""
    global _spf
    if n >= _SIEVE_LIMIT:
        pp = prime_power(n)
        if pp is not None:
            return pp[0]
        return next(f for f in range(2, isqrt(n) + 1) if n % f == 0)
    if _spf is None:
        spf = np.zeros(_SIEVE_LIMIT, dtype=np.int32)
        for p in range(2, isqrt(_SIEVE_LIMIT) + 1):
            if spf[p] == 0:
                block = spf[p * p::p]
                block[block == 0] = p
        _spf = spf
    f = int(_spf[n])
    return f if f else n


def _prime_power(q: int) -> tuple[int, int] | None:
    if q < 2:
        return None
    p = _smallest_factor(q)
    e = 0
    while q % p == 0:
        q //= p
        e += 1
    return (p, e) if q == 1 else None


def _is_prime(n: int) -> bool:
    return n >= 2 and _smallest_factor(n) == n


def _is_pp(q: int) -> bool:
    return _prime_power(q) is not None


def _need_pp(q: int, what: str = "q") -> tuple[int, int]:
    pp = _prime_power(q)
    if pp is None:
        raise DomainViolation(f"{what} = {q} is not a prime power")
    return pp


def _need_prime(p: int, what: str) -> None:
    if not _is_prime(p):
        raise DomainViolation(f"{what} = {p} is not prime")


# ---------------------------------------------------------------- formulas and domains
# A formula maps arguments to (v, k, lambda) as Fractions with no checks; a
# domain predicate raises DomainViolation for inadmissible arguments.

F = Fraction


def _none(*_: int) -> None:
    return None


def _d1(q: int, m: int) -> None:
    _need_pp(q)


def _x1(q: int, m: int):
    return F(_geo(q, m)), F(_geo(q, m - 1)), F(_geo(q, m - 2))


def _x2(n: int):
    return F(4 * n - 1), F(2 * n - 1), F(n - 1)


def _d3(t: int) -> None:
    if t % 2 == 0:
        raise DomainViolation("t must be odd")
    _need_prime(4 * t * t + 1, "v")


def _x3(t: int):
    return F(4 * t * t + 1), F(t * t), F(t * t - 1, 4)


def _d4(variant: int, n: int) -> None:
    if variant not in (1, 2, 3):
        raise DomainViolation("variant must be 1, 2 or 3")
    if variant == 1 and n % 2 == 0:
        raise DomainViolation("t must be odd")
    if variant > 1 and _isqrt_exact(8 * n * n + (1 if variant == 2 else 49)) is None:
        raise DomainViolation("8u^2 + 1 (or + 49) must be a square")
    _need_prime(int(_x4(variant, n)[0]), "v")


def _x4(variant: int, n: int):
    # n is t in variant 1 and u in variants 2 and 3
    if variant == 1:
        return F(4 * n * n + 9), F(n * n + 3), F(n * n + 3, 4)
    if variant == 2:
        t2 = 8 * n * n + 1
        return F(8 * t2 + 1), F(t2), F(n * n)
    t2 = 8 * n * n + 49
    return F(8 * t2 + 49), F(t2 + 7), F(n * n + 7)


def _d5(p: int) -> None:
    _need_prime(p, "p")
    _need_prime(3 * p + 2, "q")


def _x5(p: int):
    v = p * (3 * p + 2)
    return F(v), F(v - 1, 4), F(v - 5, 16)


def _x6(t: int):
    return F(4 * t * t), F(2 * t * t - t), F(t * t - t)


def _d7(q: int, m: int) -> None:
    _need_pp(q)


def _x7(q: int, m: int):
    return F(q ** (m + 1) * (_geo(q, m) + 1)), F(q**m * _geo(q, m)), F(q**m * _geo(q, m - 1))


def _d8(m: int) -> None:
    _need_pp(m, "m")


def _x8(m: int):
    return F(m**3 + m + 1), F(m * m + 1), F(m)


def _x9(m: int):
    return F(3**m * (3**m - 1), 2), F(3 ** (m - 1) * (3**m + 1), 2), F(3 ** (m - 1) * (3 ** (m - 1) + 1), 2)


def _d10(q: int, d: int, m: int) -> None:
    _need_pp(q)
    _need_pp(_geo(q, d - 1), "r")


def _x10(q: int, d: int, m: int):
    r = _geo(q, d - 1)
    return F(1 + q * r * _geo(r, m - 1)), F(r**m), F(r ** (m - 1) * (r - 1), q)


def _d11(q: int, m: int) -> None:
    if q % 2 == 0:
        raise DomainViolation("q must be odd")
    _need_pp(q)


def _x11(q: int, m: int):
    return F(2 * (_geo(q, m) - 1) + 1), F(q**m), F(q ** (m - 1) * (q - 1), 2)


def _d12(q: int, d: int, m: int) -> None:
    _need_pp(q)


def _x12(q: int, d: int, m: int):
    r = _geo(q, d)
    return F(q ** (d + 1) * _geo(r, 2 * m - 1)), F(r ** (2 * m - 1) * q**d), F((r - 1) * r ** (2 * m - 2) * q**d, q)


def _x13(d: int):
    return (
        F(2 ** (2 * d + 4) * (2 ** (2 * d + 2) - 1), 3),
        F(2 ** (2 * d + 1) * (2 ** (2 * d + 3) + 1), 3),
        F(2 ** (2 * d + 1) * (2 ** (2 * d + 1) + 1), 3),
    )


def _d14(q: int, d: int) -> None:
    _need_pp(q)


def _x14(q: int, d: int):
    e = q ** (2 * d)
    return (
        F(4 * e * (e - 1), q * q - 1),
        q ** (2 * d - 1) * (1 + F(2 * (e - 1), q + 1)),
        F(q ** (2 * d - 1) * (q - 1) * (q ** (2 * d - 1) + 1), q + 1),
    )


def _d15(q: int, d: int, m: int) -> None:
    _need_pp(q)
    _need_pp(q ** (d + 1) + q - 1, "r")


def _x15(q: int, d: int, m: int):
    r = q ** (d + 1) + q - 1
    qd = q**d
    return F(qd * (r ** (2 * m) - 1), (q - 1) * (qd + 1)), F(qd * r ** (2 * m - 1)), F(qd * (qd + 1) * (q - 1) * r ** (2 * m - 2))


def _d16(d: int, m: int) -> None:
    _need_pp((3 ** (d + 1) + 1) // 2)


def _x16(d: int, m: int):
    q, t = (3 ** (d + 1) + 1) // 2, 3**d
    return F(2 * t * (q ** (2 * m) - 1), t + 1), F(t * q ** (2 * m - 1)), F(t * (t + 1) * q ** (2 * m - 2), 2)


def _d17(d: int, m: int) -> None:
    _need_pp(3 ** (d + 1) - 2)


def _x17(d: int, m: int):
    q, t = 3 ** (d + 1) - 2, 3**d
    return F(t * (q ** (2 * m) - 1), 2 * (t - 1)), F(t * q ** (2 * m - 1)), F(2 * t * (t - 1) * q ** (2 * m - 2))


def _d18(d: int, m: int) -> None:
    _need_pp((2 ** (2 * d + 3) + 1) // 3)


def _x18(d: int, m: int):
    q = (2 ** (2 * d + 3) + 1) // 3
    return (
        F(2 ** (2 * d + 3) * (q ** (2 * m) - 1), q + 1),
        F(2 ** (2 * d + 1) * q ** (2 * m - 1)),
        F(2) ** (2 * d - 1) * (q + 1) * q ** (2 * m - 2),
    )


def _d19(d: int, m: int) -> None:
    _need_pp(2 ** (2 * d + 3) - 3)


def _x19(d: int, m: int):
    q = 2 ** (2 * d + 3) - 3
    return (
        F(2 ** (2 * d + 3) * (q ** (2 * m) - 1), 3 * q - 3),
        F(2 ** (2 * d + 1) * q ** (2 * m - 1)),
        3 * F(2) ** (2 * d - 1) * (q - 1) * q ** (2 * m - 2),
    )


def _d20(q: int, m: int) -> None:
    # q = 2^d is the field order; the realization needs 2^d - 1 to be a Mersenne prime
    pp = _prime_power(q)
    if pp is None or pp[0] != 2 or not _is_prime(q - 1):
        raise DomainViolation(f"q = {q} is not 2^d with 2^d - 1 prime")


def _x20(q: int, m: int):
    d = q.bit_length() - 1
    return (
        1 + F(2 ** (d + 1) * (2 ** (2 * d * m) - 1), 2**d + 1),
        F(2 ** (2 * d * m)),
        F(2) ** (2 * d * m - d - 1) * (2**d + 1),
    )


def _d21(t: int, m: int) -> None:
    _need_pp(2 * t - 1, "2t - 1")


def _x21(t: int, m: int):
    q = (2 * t - 1) ** 2
    return F(4 * t * t * _geo(q, m)), F((2 * t * t - t) * q**m), F((t * t - t) * q**m)


def _isqrt_exact(n: int) -> int | None:
    r = isqrt(n)
    return r if r * r == n else None


# ---------------------------------------------------------------- registry


@dataclass(frozen=True)
class FamilySpec:
    id: int
    name: str
    params: tuple[str, ...]
    starts: tuple[int, ...]
    formula: Callable[..., tuple[Fraction, Fraction, Fraction]]
    domain_check: Callable[..., None]
    expectation: str  # "all-pass", "pass iff m=1" or "all-fail"
    failing_condition: str | None
    domain: str
    fixed: Mapping[str, Sequence[int]] = field(default_factory=dict)
    # cheap per-argument prefilters used while sweeping
    filters: Mapping[str, Callable[[int], bool]] = field(default_factory=dict)

    def __call__(self, **args: int) -> Triple:
        return family_params(self.id, args)


FAMILIES: dict[int, FamilySpec] = {
    f.id: f
    for f in (
        FamilySpec(1, "Point-hyperplane designs", ("q", "m"), (2, 2), _x1, _d1, "all-fail", "gcd(v, s) > 1",
                   "q prime power, m >= 2",
                   filters={"q": _is_pp}),
        FamilySpec(2, "Hadamard matrix designs", ("n",), (2,), _x2, _none, "all-fail", "gcd(v, s) > 1", "n >= 2"),
        FamilySpec(3, "Chowla", ("t",), (3,), _x3, _d3, "all-fail", "v composite", "t odd, 4t^2 + 1 prime"),
        FamilySpec(4, "Lehmer", ("variant", "n"), (1, 0), _x4, _d4, "all-fail", "v composite",
                   "variant 1: n = t odd; variants 2, 3: n = u with 8u^2 + 1 (resp. + 49) square; v prime",
                   {"variant": (1, 2, 3)}),
        FamilySpec(5, "Whiteman", ("p",), (3,), _x5, _d5, "all-fail", "gcd(v, s) > 1",
                   "p and 3p + 2 prime, parameters integral"),
        FamilySpec(6, "Menon", ("t",), (2,), _x6, _none, "all-pass", None, "t >= 2"),
        FamilySpec(7, "Wallis; McFarland", ("q", "m"), (2, 1), _x7, _d7, "all-pass", None, "q prime power, m >= 1",
                   filters={"q": _is_pp}),
        FamilySpec(8, "Wilson; Shrikhande and Singhi", ("m",), (2,), _x8, _d8, "all-fail", "gcd(v, k) > 1",
                   "m prime power",
                   filters={"m": _is_pp}),
        FamilySpec(9, "Spence", ("m",), (2,), _x9, _none, "all-pass", None, "m >= 2"),
        FamilySpec(10, "Rajkundlia and Mitchell; Ionin", ("q", "d", "m"), (2, 2, 1), _x10, _d10, "all-fail",
                   "gcd(v, k) > 1", "q and r = (q^d - 1)/(q - 1) prime powers, m >= 1",
                   filters={"q": _is_pp}),
        FamilySpec(11, "Wilson; Brouwer", ("q", "m"), (3, 1), _x11, _d11, "all-fail", "gcd(v, k) > 1",
                   "q odd prime power, m >= 1",
                   filters={"q": lambda q: q % 2 == 1 and _is_pp(q)}),
        FamilySpec(12, "Spence, Jungnickel and Pott, Ionin", ("q", "d", "m"), (2, 1, 1), _x12, _d12, "pass iff m=1",
                   "exactly one linking value integral", "q prime power, d >= 1, m >= 1",
                   filters={"q": _is_pp}),
        FamilySpec(13, "Davis and Jedwab", ("d",), (0,), _x13, _none, "all-pass", None, "d >= 0"),
        FamilySpec(14, "Chen", ("q", "d"), (2, 1), _x14, _d14, "all-pass", None, "q prime power, d >= 1",
                   filters={"q": _is_pp}),
        FamilySpec(15, "Ionin", ("q", "d", "m"), (2, 1, 1), _x15, _d15, "pass iff m=1",
                   "exactly one linking value integral", "q and q^(d+1) + q - 1 prime powers",
                   filters={"q": _is_pp}),
        FamilySpec(16, "Ionin", ("d", "m"), (1, 1), _x16, _d16, "pass iff m=1", "exactly one linking value integral",
                   "(3^(d+1) + 1)/2 prime power"),
        FamilySpec(17, "Ionin", ("d", "m"), (1, 1), _x17, _d17, "pass iff m=1", "exactly one linking value integral",
                   "3^(d+1) - 2 prime power"),
        FamilySpec(18, "Ionin", ("d", "m"), (0, 1), _x18, _d18, "pass iff m=1", "exactly one linking value integral",
                   "(2^(2d+3) + 1)/3 prime power"),
        FamilySpec(19, "Ionin", ("d", "m"), (0, 1), _x19, _d19, "pass iff m=1", "exactly one linking value integral",
                   "2^(2d+3) - 3 prime power"),
        FamilySpec(20, "Ionin", ("q", "m"), (4, 1), _x20, _d20, "all-fail", "order s integral",
                   "q = 2^d with 2^d - 1 a Mersenne prime, m >= 1",
                   filters={"q": lambda q: q & (q - 1) == 0}),
        FamilySpec(21, "Kharaghani and Ionin", ("t", "m"), (2, 1), _x21, _d21, "all-fail",
                   "exactly one linking value integral", "2t - 1 prime power, m >= 1",
                   filters={"t": lambda t: _is_pp(2 * t - 1)}),
    )
}


def _spec(fid: int) -> FamilySpec:
    try:
        return FAMILIES[fid]
    except KeyError:
        raise DomainViolation(f"no family with id {fid}") from None


def family_params(fid: int, args: Mapping[str, int]) -> Triple:
    """Exact (v, k, lambda) for the family member; raises DomainViolation off-domain."""
    spec = _spec(fid)
    missing = set(spec.params) - set(args)
    if missing:
        raise DomainViolation(f"family {fid} needs arguments {sorted(missing)}")
    vals = [int(args[p]) for p in spec.params]
    for p, x, lo in zip(spec.params, vals, spec.starts):
        if p in spec.fixed:
            if x not in spec.fixed[p]:
                raise DomainViolation(f"{p} must be one of {list(spec.fixed[p])}")
        elif x < lo:
            raise DomainViolation(f"{p} must be at least {lo}")
    spec.domain_check(*vals)
    try:
        v, k, lam = (_int(x, name) for x, name in zip(spec.formula(*vals), ("v", "k", "lambda")))
    except ZeroDivisionError:
        raise DomainViolation(f"family {fid} is undefined at {dict(args)}") from None
    if k * (k - 1) != lam * (v - 1):
        raise NotASymmetricDesign(f"family {fid} {dict(args)} gave ({v}, {k}, {lam})")
    return v, k, lam


def complement_design(v: int, k: int, lam: int) -> Triple:
    return v, v - k, v - 2 * k + lam


# ---------------------------------------------------------------- sweeping


def _lower_bound_v(spec: FamilySpec, vals: Sequence[int]) -> Fraction | float:
    """v from the bare formula; monotone in each argument, so it bounds the sweep."""
    try:
        return spec.formula(*vals)[0]
    except ZeroDivisionError:
        return float("inf")


def enumerate_args(fid: int, ranges: Mapping[str, Iterable[int]] | None = None,
                   vmax: int = DEFAULT_VMAX) -> Iterator[dict[str, int]]:
    for args, _ in _enumerate(fid, ranges, vmax):
        yield args


def _enumerate(fid: int, ranges: Mapping[str, Iterable[int]] | None,
               vmax: int) -> Iterator[tuple[dict[str, int], Triple]]:
    """Admissible argument dicts with v <= vmax, in lexicographic order.

    Parameters without an explicit range run upward from their start until the
    smallest completion exceeds ``vmax``.
    """
    spec = _spec(fid)
    ranges = dict(ranges or {})
    unknown = set(ranges) - set(spec.params)
    if unknown:
        raise DomainViolation(f"family {fid} has no arguments {sorted(unknown)}; it takes {list(spec.params)}")
    for p, vals in spec.fixed.items():
        ranges.setdefault(p, vals)
    names = spec.params

    def rec(prefix: list[int]) -> Iterator[tuple[dict[str, int], Triple]]:
        depth = len(prefix)
        if depth == len(names):
            args = dict(zip(names, prefix))
            try:
                triple = family_params(fid, args)
            except DomainViolation:
                return
            if triple[0] <= vmax:
                yield args, triple
            return
        name = names[depth]
        explicit = name in ranges
        values: Iterable[int] = ranges[name] if explicit else _count(spec.starts[depth])
        for x in values:
            trial = prefix + [x] + [_first(ranges, names[j], spec.starts[j]) for j in range(depth + 1, len(names))]
            if name in spec.filters and not spec.filters[name](x):
                continue
            if not explicit and _lower_bound_v(spec, trial) > vmax:
                break
            yield from rec(prefix + [x])

    yield from rec([])


def _count(start: int) -> Iterator[int]:
    x = start
    while True:
        yield x
        x += 1


def _first(ranges: Mapping[str, Iterable[int]], name: str, start: int) -> int:
    if name in ranges:
        vals = list(ranges[name])
        return min(vals) if vals else start
    return start


@dataclass(frozen=True)
class FamilyInstance:
    args: dict[str, int]
    triple: Triple
    feasible: bool
    failing: tuple[str, ...]
    heaviness: str | None
    verdicts: tuple[Verdict, ...]

    def fails(self, condition: str) -> bool:
        return condition in self.failing

    def to_json(self) -> dict:
        return {
            "args": self.args,
            "design": list(self.triple),
            "feasible": self.feasible,
            "failing": list(self.failing),
            "heaviness": self.heaviness,
        }


def evaluate_triple(v: int, k: int, lam: int) -> tuple[bool, tuple[str, ...], str | None, list[Verdict]]:
    """Integrality verdicts for a linked system of at least three designs.

    Conditions that do not involve s are evaluated even when s is irrational;
    the full LSSD battery is consulted only once s is an integer.
    """
    s = isqrt(k - lam)
    cite = "divisibility"
    out = [check("order s integral", s * s == k - lam, k - lam, "mu and nu are integers"),
           check("v composite", not _is_prime(v), v, cite),
           check("gcd(v, k) > 1", gcd(v, k) > 1, gcd(v, k), cite)]
    heaviness = None
    if s * s == k - lam:
        verdicts, info = lssd_feasibility(v, k, lam, 3)
        by_id = {x.test_id: x for x in verdicts}
        out += [by_id["gcd(v, s) > 1"], by_id["exactly one linking value integral"]]
        heaviness = info.heaviness
    failing = tuple(x.test_id for x in out if x.status == "fail")
    return not failing, failing, heaviness, out


@dataclass
class FamilyReport:
    family: FamilySpec
    instances: list[FamilyInstance]
    vmax: int
    summary: Verdict

    @property
    def feasible_count(self) -> int:
        return sum(i.feasible for i in self.instances)

    def to_json(self) -> dict:
        return {
            "format": 1,
            "family": self.family.id,
            "name": self.family.name,
            "vmax": self.vmax,
            "expectation": self.family.expectation,
            "failing_condition": self.family.failing_condition,
            "instances": [i.to_json() for i in self.instances],
            "summary": self.summary.to_json(),
        }


def _instance_agrees(spec: FamilySpec, inst: FamilyInstance) -> bool:
    should_pass = {
        "all-pass": True,
        "all-fail": False,
        "pass iff m=1": inst.args.get("m") == 1,
    }[spec.expectation]
    if should_pass:
        return inst.feasible
    if inst.feasible:
        return False
    cond = spec.failing_condition
    # a condition phrased in terms of s is vacuously failed when s is irrational
    return inst.fails(cond) or (cond in NEEDS_S and inst.fails("order s integral"))


def family_verdict(fid: int, ranges: Mapping[str, Iterable[int]] | None = None,
                   vmax: int = DEFAULT_VMAX) -> FamilyReport:
    """Evaluate every admissible, non-degenerate member with v <= vmax."""
    spec = _spec(fid)
    instances = []
    for args, (v, k, lam) in _enumerate(fid, ranges, vmax):
        if not 1 < k < v - 1:
            continue
        feasible, failing, heavy, verdicts = evaluate_triple(v, k, lam)
        instances.append(FamilyInstance(args, (v, k, lam), feasible, failing, heavy, tuple(verdicts)))
    if ranges is not None and not instances:
        raise DomainViolation(f"no admissible non-degenerate member of family {fid} in the given range")
    disagreements = [i.args for i in instances if not _instance_agrees(spec, i)]
    note = f"verified on range v <= {vmax}" if ranges is None else "verified on the given range"
    summary = check(
        f"family {fid} summary: {spec.expectation}",
        bool(instances) and not disagreements,
        {"instances": len(instances), "feasible": sum(i.feasible for i in instances), "disagreements": disagreements[:10]},
        "design family integrality sweep",
        note,
    )
    return FamilyReport(spec, instances, vmax, summary)
