"""Self-predictability analysis.

For each point v the scaled noise operator is a polynomial in rho:

    2^n * q^n * T_rho f(v) = sum_k C[v,k] p^k q^(n-k),   rho = p/q,

so with q_v(rho) := f(v) * sum_k C[v,k] rho^k the function is rho-SP at v
exactly when q_v(rho) >= 0 (ties count as agreement) and rho-SP overall when
all q_v are nonnegative.  Since q_v(1) = 2^n > 0, the SP region is a finite
union of closed intervals of [0,1] whose endpoints are roots of the q_v;
everything below is decided with integer Sturm-chain arithmetic, floats
never touch a sign.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial, log, sqrt

import numpy as np

from . import roots as rt
from .errors import InvalidArgument, PreconditionError
from .functions import (
    LtfSpec,
    construct_ltf,
    dominating_boundary_points,
    popcounts,
    properties,
)
from .noise import check_rho, scaled_t_values, stability_report
from .spectrum import (
    chow_distance,
    influences,
    level_values,
    point_matrix,
    spectral_summary,
    wht,
)

DEFAULT_EPSILON = Fraction(1, 10**9)


def sp_polynomial(f, v):
    """Coefficients (c_0..c_n) of 2^n T_rho f(v) as a polynomial in rho."""
    return tuple(int(c) for c in point_matrix(f)[v])


@dataclass(frozen=True)
class PointDecision:
    sp: bool
    tie: bool


def is_sp_at(f, rho, v):
    rho = check_rho(rho)
    p, q = rho.numerator, rho.denominator
    row = sp_polynomial(f, v)
    val = sum(c * p**k * q ** (f.n - k) for k, c in enumerate(row))
    if val == 0:
        return PointDecision(True, True)
    return PointDecision((val > 0) == (f.value_at(v) > 0), False)


@dataclass(frozen=True)
class SpDecision:
    sp: bool
    witness: int  # least failing input index, or None


def is_sp(f, rho, fast_path=False):
    """Is f rho-SP (ties count as agreement)?  witness = least failing index.

    fast_path restricts the check to the dominating boundary points, which
    is equivalent for monotone f (and rejects non-monotone input).
    """
    rho = check_rho(rho)
    if fast_path:
        for v in dominating_boundary_points(f):
            if not is_sp_at(f, rho, v).sp:
                return SpDecision(False, v)
        return SpDecision(True, None)
    scaled = scaled_t_values(f, rho)
    vals = f.values
    if isinstance(scaled, np.ndarray):
        bad = (scaled != 0) & ((scaled > 0) != (vals > 0))
        idx = np.flatnonzero(bad)
        if len(idx):
            return SpDecision(False, int(idx[0]))
        return SpDecision(True, None)
    for v, s in enumerate(scaled):
        if s != 0 and (s > 0) != (vals[v] > 0):
            return SpDecision(False, v)
    return SpDecision(True, None)


def _signed_rows(f):
    """Rows f(v) * C[v,:], one per point, as an int64 matrix."""
    return point_matrix(f) * f.values.astype(np.int64)[:, None]


def _distinct_point_polys(f):
    """Deduplicated signed point polynomials with a representative point each."""
    rows = _signed_rows(f)
    uniq, reps = np.unique(rows, axis=0, return_index=True)
    out = []
    for row, rep in zip(uniq.tolist(), reps.tolist()):
        out.append((rt.trim(tuple(int(c) for c in row)), int(rep)))
    return out


def _nonneg_on_01(q):
    """Exact check that the integer polynomial q is >= 0 on all of [0,1].

    Caller guarantees q(1) > 0.  Nonnegativity then reduces to q(0) >= 0 and
    the absence of odd-multiplicity roots inside (0,1); cheap screens first.
    """
    if q[0] < 0:
        return False
    if all(c >= 0 for c in q):
        return True
    if rt.coeff_sign_variations(q) == 0:
        return True  # no roots in (0, inf) at all, and q(1) > 0
    j = next(i for i, c in enumerate(q) if c)
    core = q[j:]  # strip the root at 0; sign on (0,1] unchanged
    for factor, mult in rt.yun_factorization(core):
        if mult % 2 == 0 or rt.degree(factor) < 1:
            continue
        if rt.count_roots(rt.sturm_chain(factor), Fraction(0), Fraction(1)) > 0:
            return False
    return True


# ---------------------------------------------------------------------------
# SP region


@dataclass(frozen=True)
class Endpoint:
    """Region endpoint: an exact rational or a width-<=epsilon enclosure."""

    kind: str  # "exact" | "enclosure"
    value: Fraction = None
    lo: Fraction = None
    hi: Fraction = None

    def approx(self):
        if self.kind == "exact":
            return float(self.value)
        return float((self.lo + self.hi) / 2)


@dataclass(frozen=True)
class SpInterval:
    lo: Endpoint
    hi: Endpoint
    lo_closed: bool
    hi_closed: bool


@dataclass(frozen=True)
class SpRegion:
    n: int
    epsilon: Fraction
    intervals: tuple


class _Event:
    """One distinct root of some point polynomials in (0,1)."""

    __slots__ = ("members", "kind", "value", "lo", "hi", "refpoly")

    def __init__(self, members, kind, value=None, lo=None, hi=None, refpoly=None):
        self.members = set(members)
        self.kind = kind
        self.value = value
        self.lo = lo
        self.hi = hi
        self.refpoly = refpoly

    def left(self):
        return self.value if self.kind == "exact" else self.lo

    def right(self):
        return self.value if self.kind == "exact" else self.hi

    def halve(self):
        """One refinement step (interval events only); may become exact."""
        refined = rt.refine_root(
            self.refpoly, ("interval", self.lo, self.hi), (self.hi - self.lo) / 2
        )
        if refined[0] == "exact":
            self.kind, self.value = "exact", refined[1]
            self.lo = self.hi = self.refpoly = None
        else:
            _, self.lo, self.hi = refined


def _strictly_overlaps(e1, e2):
    if e1.kind == "exact" and e2.kind == "exact":
        return e1.value == e2.value
    if e1.kind == "exact":
        return e2.lo < e1.value < e2.hi
    if e2.kind == "exact":
        return e1.lo < e2.value < e1.hi
    return max(e1.lo, e2.lo) < min(e1.hi, e2.hi)


def _resolve_pair(e1, e2):
    """Merge the two events if they hold the same root, else shrink them.

    Returns the merged event, or None if both remain (now or eventually
    disjoint; caller re-scans).
    """
    if e1.kind == "exact" and e2.kind == "exact":
        if e1.value == e2.value:
            e1.members |= e2.members
            return e1
        return None
    if e1.kind == "exact" or e2.kind == "exact":
        ex, iv = (e1, e2) if e1.kind == "exact" else (e2, e1)
        if rt.sign_at(iv.refpoly, ex.value) == 0:
            ex.members |= iv.members
            return ex
        while iv.kind == "interval" and iv.lo < ex.value < iv.hi:
            iv.halve()
        return None
    g = rt.poly_gcd(e1.refpoly, e2.refpoly)
    lo, hi = max(e1.lo, e2.lo), min(e1.hi, e2.hi)
    if rt.degree(g) >= 1 and rt.count_roots(rt.sturm_chain(g), lo, hi) >= 1:
        merged = _Event(e1.members | e2.members, "interval", lo=lo, hi=hi, refpoly=g)
        return merged
    e1.halve()
    e2.halve()
    return None


def _merge_events(events):
    while True:
        events.sort(key=lambda e: e.left())
        for i in range(len(events) - 1):
            a, b = events[i], events[i + 1]
            if _strictly_overlaps(a, b):
                merged = _resolve_pair(a, b)
                if merged is not None:
                    events[i : i + 2] = [merged]
                break
        else:
            return events


def _event_endpoint(event, epsilon):
    if event.kind == "exact":
        return Endpoint("exact", value=event.value)
    refined = rt.refine_root(
        event.refpoly, ("interval", event.lo, event.hi), epsilon
    )
    if refined[0] == "exact":
        return Endpoint("exact", value=refined[1])
    return Endpoint("enclosure", lo=refined[1], hi=refined[2])


def sp_region(f, epsilon=DEFAULT_EPSILON):
    """Exact SP region {rho in [0,1]: f is rho-SP} as closed intervals.

    Interval endpoints are exact rationals where a root lands on one, else
    enclosures of width <= epsilon.  Degenerate single-point components
    (e.g. {0} for every balanced function) are reported as [x, x].
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise InvalidArgument("epsilon must be positive")
    polys = _distinct_point_polys(f)
    size_val = 1 << f.n
    events = []
    for pi, (q, _) in enumerate(polys):
        if rt.evaluate(q, Fraction(1)) != size_val:
            raise AssertionError("point polynomial must equal 2^n at rho=1")
        j = next(i for i, c in enumerate(q) if c)
        sf = rt.square_free_part(q[j:])
        for root in rt.isolate_roots(sf, Fraction(0), Fraction(1)):
            if root[0] == "exact":
                events.append(_Event({pi}, "exact", value=root[1]))
                continue
            ev = _Event({pi}, "interval", lo=root[1], hi=root[2], refpoly=sf)
            while ev.kind == "interval" and (ev.lo == 0 or ev.hi == 1):
                ev.halve()
            events.append(ev)
    events = _merge_events(events)

    # gap sample points strictly between consecutive events (and 0 / 1)
    samples = []
    prev = Fraction(0)
    for ev in events:
        left = ev.left()
        samples.append((prev + left) / 2 if prev < left else prev)
        prev = ev.right()
    samples.append((prev + 1) / 2)

    signs = []
    for x in samples:
        col = [rt.sign_at(q, x) for q, _ in polys]
        if any(s == 0 for s in col):
            raise AssertionError("gap sample hit a root")
        signs.append(col)

    gap_sp = [all(s > 0 for s in col) for col in signs]
    event_sp = [
        all(s > 0 for pi, s in enumerate(signs[gi]) if pi not in ev.members)
        for gi, ev in enumerate(events)
    ]
    p0_sp = all(q[0] >= 0 for q, _ in polys)

    # item sequence: point 0, gap 0, event 0, gap 1, ..., gap E, point 1
    items = [("zero", p0_sp)]
    for gi, ev in enumerate(events):
        items.append(("gap", gap_sp[gi]))
        items.append(("event", event_sp[gi], ev))
    items.append(("gap", gap_sp[len(events)]))
    items.append(("one", True))

    intervals = []
    run = []
    for item in items + [("stop", False)]:
        if item[1]:
            run.append(item)
            continue
        if run:
            first, last = run[0], run[-1]
            if first[0] == "gap" or last[0] == "gap":
                raise AssertionError("SP region component with open boundary")
            lo = (
                Endpoint("exact", value=Fraction(0))
                if first[0] == "zero"
                else _event_endpoint(first[2], epsilon)
            )
            hi = (
                Endpoint("exact", value=Fraction(1))
                if last[0] == "one"
                else (lo if last is first else _event_endpoint(last[2], epsilon))
            )
            intervals.append(SpInterval(lo, hi, True, True))
            run = []
    return SpRegion(f.n, epsilon, tuple(intervals))


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class SpClassification:
    usp: bool
    lcsp: bool
    wst: bool
    sst: bool
    monotonically_sp: bool
    rho0: Endpoint  # threshold when monotonically_sp, else None
    lev: int  # lowest nonzero Fourier level (k >= 0)
    lev_zero_count: int  # inputs where the level-lev part vanishes
    region: SpRegion
    witnesses: dict = field(default_factory=dict)


def _lcsp_check(f):
    """Lowest-order criterion: the first nonzero q_v coefficient is positive."""
    rows = _signed_rows(f)
    nz = rows != 0
    first_idx = np.argmax(nz, axis=1)
    first = rows[np.arange(len(rows)), first_idx]
    bad = np.flatnonzero(first < 0)
    return (len(bad) == 0), (int(bad[0]) if len(bad) else None)


def _wst_sst_check(f, lev):
    signed = level_values(f, lev) * f.values.astype(np.int64)
    neg = np.flatnonzero(signed < 0)
    zero = np.flatnonzero(signed == 0)
    wst = len(neg) == 0
    return (
        wst,
        wst and len(zero) == 0,
        int(neg[0]) if len(neg) else None,
        int(zero[0]) if len(zero) else None,
        len(zero),
    )


def classify(f, epsilon=DEFAULT_EPSILON):
    """Full SP taxonomy of f.

    usp is decided per point polynomial (no region construction); the region
    is computed independently and also returned.  monotonically_sp means the
    region, ignoring the degenerate {0} component every balanced function
    has, is a single interval reaching 1; rho0 is then its left endpoint.
    """
    witnesses = {}
    usp = True
    for q, rep in _distinct_point_polys(f):
        if not _nonneg_on_01(q):
            usp = False
            witnesses["usp"] = rep
            break
    lcsp, lcsp_witness = _lcsp_check(f)
    if lcsp_witness is not None:
        witnesses["lcsp"] = lcsp_witness
    lev = spectral_summary(f).level
    wst, sst, wst_witness, zero_witness, zero_count = _wst_sst_check(f, lev)
    if wst_witness is not None:
        witnesses["wst"] = wst_witness
    if zero_witness is not None:
        witnesses["lev_zero"] = zero_witness
    region = sp_region(f, epsilon)
    solid = [
        iv
        for iv in region.intervals
        if not (iv.hi.kind == "exact" and iv.hi.value == 0)
    ]
    monotone_sp = len(solid) == 1 and (
        solid[0].hi.kind == "exact" and solid[0].hi.value == 1
    )
    rho0 = solid[0].lo if monotone_sp else None
    return SpClassification(
        usp, lcsp, wst, sst, monotone_sp, rho0, lev, zero_count, region, witnesses
    )


# ---------------------------------------------------------------------------
# sufficient thresholds


@dataclass(frozen=True)
class SufficientThresholds:
    no_flip: Endpoint  # universal: SP for rho above 2^((n-1)/n) - 1
    degree_bound: Fraction  # SP for rho above 1 - 1/(Deg*min(Deg, spectral norm))
    sparsity_bound: Endpoint  # SP for rho above the root of sum rho^|S| = s-1


def _isolated_single_root(poly, epsilon):
    roots = rt.isolate_roots(poly, Fraction(0), Fraction(1))
    if not roots:
        return Endpoint("exact", value=Fraction(0))
    if len(roots) != 1:
        raise AssertionError("threshold polynomial must have a single root")
    refined = rt.refine_root(rt.square_free_part(poly), roots[0], epsilon)
    if refined[0] == "exact":
        return Endpoint("exact", value=refined[1])
    return Endpoint("enclosure", lo=refined[1], hi=refined[2])


def sufficient_thresholds(f, epsilon=DEFAULT_EPSILON):
    n = f.n
    noflip_poly = rt.trim(
        tuple((comb(n, k) if k else 1 - (1 << (n - 1))) for k in range(n + 1))
    )
    no_flip = (
        Endpoint("exact", value=Fraction(0))
        if n == 1
        else _isolated_single_root(noflip_poly, epsilon)
    )

    summary = spectral_summary(f)
    if summary.degree == 0:
        degree_bound = Fraction(0)
    else:
        d = summary.degree
        degree_bound = 1 - 1 / (d * min(Fraction(d), summary.spectral_norm))

    coeffs = wht(f).coeffs
    pc = popcounts(n)
    support_counts = [int(np.count_nonzero(coeffs[pc == k])) for k in range(n + 1)]
    s = sum(support_counts)
    sparsity_poly = list(support_counts)
    sparsity_poly[0] -= s - 1
    sparsity_poly = rt.trim(tuple(sparsity_poly))
    if not sparsity_poly or sparsity_poly[0] >= 0:
        sparsity_bound = Endpoint("exact", value=Fraction(0))
    else:
        sparsity_bound = _isolated_single_root(sparsity_poly, epsilon)
    return SufficientThresholds(no_flip, degree_bound, sparsity_bound)


# ---------------------------------------------------------------------------
# necessary conditions


def _exp_minus2_enclosure():
    """Rational lo < e^-2 < hi with width far below 1e-30."""
    terms = 41
    partial = sum(Fraction(1 << j, factorial(j)) for j in range(terms))
    # tail of e^2 is below first_term / (1 - 2/(terms+1))
    tail = Fraction(1 << terms, factorial(terms)) * Fraction(terms + 1, terms - 1)
    return 1 / (partial + tail), 1 / partial


@dataclass(frozen=True)
class NecessaryChecks:
    rho: Fraction
    basic_ok: bool  # Stab_rho >= max_S rho^|S| |fhat_S|
    hyper_ok: bool  # Stab_rho^2 >= e^(-2 Deg) Stab_(rho^2); None = indeterminate
    stab: Fraction
    max_term: Fraction
    hyper_rhs_lo: Fraction
    hyper_rhs_hi: Fraction


def necessary_checks(f, rho):
    rho = check_rho(rho)
    stab = stability_report(f, rho).stab
    coeffs = wht(f).coeffs
    pc = popcounts(f.n)
    max_term = Fraction(0)
    for k in range(f.n + 1):
        level = coeffs[pc == k]
        peak = int(np.abs(level).max(initial=0))
        if peak:
            max_term = max(max_term, rho**k * Fraction(peak, 1 << f.n))
    basic_ok = stab >= max_term

    d = spectral_summary(f).degree
    stab2 = stability_report(f, rho * rho).stab
    if d == 0:
        lo = hi = Fraction(1)
    else:
        e_lo, e_hi = _exp_minus2_enclosure()
        lo, hi = e_lo**d, e_hi**d
    lhs = stab * stab
    if lhs >= hi * stab2:
        hyper_ok = True
    elif lhs < lo * stab2:
        hyper_ok = False
    else:
        hyper_ok = None
    return NecessaryChecks(rho, basic_ok, hyper_ok, stab, max_term, lo * stab2, hi * stab2)


# ---------------------------------------------------------------------------
# LTF approximation and ratio/chow-gap bounds


@dataclass(frozen=True)
class LtfApproximation:
    g: LtfSpec
    distance: Fraction  # Dist(f, sgn of perturbed level-1 form)
    sperner_cap: Fraction  # C(m, m//2) / 2^m over the m active coordinates
    bound: Fraction  # certified rational lower bound of sqrt(2/(pi*m))
    zero_set_size: int


_PI_LO = Fraction(3141592653589793, 10**15)
_PI_HI = Fraction(3141592653589794, 10**15)


def _sqrt_lower(x):
    """Rational r >= 0 with r^2 <= x, within ~1e-12 of sqrt(x)."""
    r = Fraction(int(sqrt(float(x)) * 10**12), 10**12)
    while r * r > x:
        r -= Fraction(1, 10**12)
    return max(r, Fraction(0))


def ltf_approximation(f):
    """Best-effort LTF from the level-1 coefficients, with exact distance.

    The base weights are the scaled level-1 Fourier coefficients; on the
    zero set of the level-1 form the sign is decided by a small integer
    perturbation fitted to f there (falling back to a plain offset when the
    fit cannot match).  Distance bounds target functions whose sign agrees
    with the level-1 form off its zero set.
    """
    coeffs = wht(f).coeffs
    w = [int(coeffs[1 << i]) for i in range(f.n)]
    m = sum(1 for c in w if c)
    if m == 0:
        raise InvalidArgument("level-1 spectrum vanishes; no LTF direction")
    lev1 = point_matrix(f)[:, 1]
    zero_set = np.flatnonzero(lev1 == 0)
    # perturbation: restricted Chow fit on the zero set, plus an offset shift
    d = [0] * f.n
    d0 = 0
    for v in zero_set.tolist():
        fv = f.value_at(v)
        d0 += fv
        for j in range(f.n):
            d[j] += -fv if (v >> j) & 1 else fv
    for shift in _offset_candidates():
        if all(
            _dot_point(d, v) + d0 + shift != 0 for v in zero_set.tolist()
        ):
            d0 += shift
            break
    k_scale = sum(abs(c) for c in d) + abs(d0) + 1
    spec = LtfSpec(d0, tuple(k_scale * wi + di for wi, di in zip(w, d)))
    g = construct_ltf(spec)
    distance = Fraction(int(np.count_nonzero(g.values != f.values)), 1 << f.n)
    cap = Fraction(comb(m, m // 2), 1 << m)
    bound = _sqrt_lower(2 / (_PI_HI * m))
    return LtfApproximation(spec, distance, cap, bound, len(zero_set))


def _offset_candidates():
    yield 0
    step = 1
    while True:
        yield step
        yield -step
        step += 1


def _dot_point(d, v):
    return sum(-dj if (v >> j) & 1 else dj for j, dj in enumerate(d))


@dataclass(frozen=True)
class LtfRatioCheck:
    ratio: float  # largest |a_i| over second largest
    bound: float  # sqrt(2 n ln(2n)) + 1
    violates: bool  # ratio >= bound (then the LTF cannot be LCSP)


def ltf_ratio_check(spec, cap=None):
    n = len(spec.a)
    if n < 2:
        raise PreconditionError("ratio needs at least two coefficients")
    if any(c == 0 for c in spec.a):
        raise PreconditionError("LTF must depend on all variables: zero coefficient")
    g = construct_ltf(spec, cap=cap)
    infl = influences(g)
    dead = [i + 1 for i, x in enumerate(infl) if x == 0]
    if dead:
        raise PreconditionError(f"LTF does not depend on coordinates {dead}")
    mags = sorted((abs(c) for c in spec.a), reverse=True)
    ratio = mags[0] / mags[1]
    bound = sqrt(2 * n * log(2 * n)) + 1
    return LtfRatioCheck(float(ratio), bound, float(ratio) >= bound)


@dataclass(frozen=True)
class ChowGapBound:
    distance: Fraction  # Dist(f, g)
    chow_sq: Fraction  # squared level-<=1 coefficient distance
    gap: Fraction  # Gap of f
    bound: Fraction  # chow_sq / (2 gap)
    ok: bool  # distance <= bound (exact)


def chow_gap_bound(f, g):
    """Distance bound Dist(f,g) <= d_chow^2 / (2 Gap[f]).

    Preconditions (all reported together on failure): f and g balanced, f
    SST, g LCSP, both fully dependent, Gap[f] > 0.
    """
    failures = []
    sf, sg = spectral_summary(f), spectral_summary(g)
    if not properties(f).balanced:
        failures.append("f is not balanced")
    if not properties(g).balanced:
        failures.append("g is not balanced")
    wst, sst, *_ = _wst_sst_check(f, sf.level)
    if not (wst and sst):
        failures.append("f is not SST")
    if not _lcsp_check(g)[0]:
        failures.append("g is not LCSP")
    if any(x == 0 for x in influences(f)):
        failures.append("f does not depend on all variables")
    if any(x == 0 for x in influences(g)):
        failures.append("g does not depend on all variables")
    if sf.gap == 0:
        failures.append("Gap[f] is zero")
    if failures:
        raise PreconditionError("; ".join(failures))
    d2 = chow_distance(f, g)
    distance = Fraction(int(np.count_nonzero(f.values != g.values)), 1 << f.n)
    bound = d2 / (2 * sf.gap)
    return ChowGapBound(distance, d2, sf.gap, bound, distance <= bound)
