"""Boolean functions on the hypercube {-1,+1}^n as dense truth tables.

Conventions used everywhere in this package:

* Inputs are indexed by u in [0, 2^n): bit j of u set means coordinate
  x_{j+1} = -1, clear means +1.  Index 0 is the all-(+1) point.
* Function values are +1/-1.  Internally a table is a 2^n-bit integer
  (bit u set <=> f(u) = +1) plus a derived numpy int8 value array.
* "or" is the Boolean OR under the same 1 <-> -1 encoding on inputs and
  output, hence +1 only at the all-(+1) point (index 0).
* The partial order on points is coordinatewise with -1 < +1, so index v
  is below index u exactly when v's bit set contains u's.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .config import check_cap
from .errors import InvalidArgument, PreconditionError, TieError

_SIGN_FORM_BOUND = 1 << 62


def point_of_index(u, n):
    """Decode table index u into the point (x_1, ..., x_n)."""
    return tuple(-1 if (u >> j) & 1 else 1 for j in range(n))


def index_of_point(point):
    """Inverse of point_of_index."""
    u = 0
    for j, x in enumerate(point):
        if x == -1:
            u |= 1 << j
        elif x != 1:
            raise InvalidArgument(f"point coordinates must be +-1, got {x}")
    return u


def popcounts(n):
    """Hamming weights of 0..2^n-1 as a small-int numpy array."""
    return np.bitwise_count(np.arange(1 << n, dtype=np.uint32)).astype(np.int64)


class BooleanFunction:
    """Immutable +-1 valued function given by its dense truth table."""

    __slots__ = ("n", "bits", "_values")

    def __init__(self, n, bits, cap=None):
        check_cap(n, cap)
        size = 1 << n
        if not 0 <= bits < (1 << size):
            raise InvalidArgument(f"table does not fit 2^{n} bits")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "bits", bits)
        nbytes = max(1, size // 8)
        raw = np.frombuffer(bits.to_bytes(nbytes, "little"), dtype=np.uint8)
        values = (np.unpackbits(raw, bitorder="little")[:size].astype(np.int8) * 2) - 1
        values.flags.writeable = False
        object.__setattr__(self, "_values", values)

    @property
    def values(self):
        return self._values

    @classmethod
    def from_values(cls, values, cap=None):
        values = np.asarray(values)
        size = len(values)
        n = size.bit_length() - 1
        if 1 << n != size or n < 1:
            raise InvalidArgument(f"table length {size} is not a power of two >= 2")
        if not np.all(np.abs(values) == 1):
            raise InvalidArgument("table values must be +-1")
        packed = np.packbits((values > 0).astype(np.uint8), bitorder="little")
        return cls(n, int.from_bytes(packed.tobytes(), "little"), cap=cap)

    def value_at(self, u):
        return int(self._values[u])

    def __call__(self, point):
        return self.value_at(index_of_point(point))

    def __eq__(self, other):
        return (
            isinstance(other, BooleanFunction)
            and self.n == other.n
            and self.bits == other.bits
        )

    def __hash__(self):
        return hash((self.n, self.bits))

    def __setattr__(self, *_):
        raise AttributeError("BooleanFunction is immutable")

    def __repr__(self):
        return f"BooleanFunction(n={self.n}, bits={self.bits:#x})"


@dataclass(frozen=True)
class LtfSpec:
    """Integer linear threshold form a0 + sum a_i x_i (must never vanish)."""

    a0: int
    a: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(c) for c in self.a))
        object.__setattr__(self, "a0", int(self.a0))
        if not self.a:
            raise InvalidArgument("LTF needs at least one coefficient")


@dataclass(frozen=True)
class PtfSpec:
    """Integer polynomial threshold form: terms are (subset mask, coefficient).

    Mask bit i-1 stands for coordinate x_i; mask 0 is the constant term.
    """

    n: int
    terms: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "terms", tuple((int(m), int(c)) for m, c in self.terms)
        )
        seen = set()
        for mask, _ in self.terms:
            if not 0 <= mask < (1 << self.n):
                raise InvalidArgument(f"term mask {mask} out of range for n={self.n}")
            if mask in seen:
                raise InvalidArgument(f"duplicate term mask {mask}")
            seen.add(mask)


def _sign_table_to_function(vals, n, cap, what):
    """Turn an integer sign-form table into a BooleanFunction, rejecting zeros."""
    zeros = np.flatnonzero(vals == 0)
    if len(zeros):
        u = int(zeros[0])
        raise TieError(
            f"{what} vanishes at input index {u} = {point_of_index(u, n)}; "
            "ties are not representable",
            u,
            point_of_index(u, n),
        )
    return BooleanFunction.from_values(np.sign(vals).astype(np.int8), cap=cap)


def construct_ltf(spec, cap=None):
    """Boolean function sgn(a0 + sum a_i x_i); raises TieError on any zero."""
    n = len(spec.a)
    check_cap(n, cap)
    if abs(spec.a0) + sum(abs(c) for c in spec.a) >= _SIGN_FORM_BOUND:
        raise InvalidArgument("LTF coefficients too large for exact evaluation")
    vals = np.array([spec.a0], dtype=np.int64)
    for c in spec.a:
        vals = np.concatenate([vals + c, vals - c])
    return _sign_table_to_function(vals, n, cap, "LTF form")


def construct_ptf(spec, cap=None):
    """Boolean function sgn(sum_T c_T x^T); raises TieError on any zero."""
    check_cap(spec.n, cap)
    if sum(abs(c) for _, c in spec.terms) >= _SIGN_FORM_BOUND:
        raise InvalidArgument("PTF coefficients too large for exact evaluation")
    size = 1 << spec.n
    vals = np.zeros(size, dtype=np.int64)
    for mask, coeff in spec.terms:
        chi = np.array([coeff], dtype=np.int64)
        for j in range(spec.n):
            sign = -1 if (mask >> j) & 1 else 1
            chi = np.concatenate([chi, chi * sign])
        vals += chi
    return _sign_table_to_function(vals, spec.n, cap, "PTF form")


def construct_named(name, n, coords=None, cap=None):
    """Build one of the stock functions: character, majority, or, edic.

    ``coords`` (1-based coordinate list) is required for "character" and
    selects the monomial; the empty list gives the constant +1.
    """
    check_cap(n, cap)
    u = np.arange(1 << n, dtype=np.uint32)
    if name == "character":
        if coords is None:
            raise InvalidArgument("character needs coords")
        mask = 0
        for i in coords:
            if not 1 <= i <= n:
                raise InvalidArgument(f"coordinate {i} out of range 1..{n}")
            mask |= 1 << (i - 1)
        parity = np.bitwise_count(u & np.uint32(mask)) & 1
        return BooleanFunction.from_values(1 - 2 * parity.astype(np.int8), cap=cap)
    if name == "majority":
        if n % 2 == 0:
            raise InvalidArgument("majority needs odd n")
        values = np.where(np.bitwise_count(u) * 2 < n, 1, -1).astype(np.int8)
        return BooleanFunction.from_values(values, cap=cap)
    if name == "or":
        values = np.full(1 << n, -1, dtype=np.int8)
        values[0] = 1
        return BooleanFunction.from_values(values, cap=cap)
    if name == "edic":
        if n < 3:
            raise InvalidArgument("edic needs n >= 3")
        return construct_ltf(LtfSpec(0, (n - 2,) + (1,) * (n - 1)), cap=cap)
    raise InvalidArgument(f"unknown named function {name!r}")


@dataclass(frozen=True)
class PropertyRecord:
    balanced: bool
    monotone: bool
    odd: bool
    even: bool
    symmetric: bool


def properties(f):
    """Structural predicates of f, each decided over the full table."""
    vals = f.values
    balanced = int(vals.sum()) == 0
    monotone = True
    for j in range(f.n):
        arr = vals.reshape(-1, 2, 1 << j)
        # bit j set (x_{j+1} = -1) must not exceed bit j clear (x_{j+1} = +1)
        if np.any(arr[:, 1, :] > arr[:, 0, :]):
            monotone = False
            break
    odd = bool(np.all(vals == -vals[::-1]))
    even = bool(np.all(vals == vals[::-1]))
    pc = popcounts(f.n)
    symmetric = all(
        bool(np.all(vals[pc == k] == vals[pc == k][0])) for k in range(f.n + 1)
    )
    return PropertyRecord(balanced, monotone, odd, even, symmetric)


def _or_reduce_superset(arr, n):
    """arr[u] |= arr[v] over all supersets v of u (in-place zeta transform)."""
    for j in range(n):
        view = arr.reshape(-1, 2, 1 << j)
        view[:, 0, :] |= view[:, 1, :]
    return arr


def _or_reduce_subset(arr, n):
    for j in range(n):
        view = arr.reshape(-1, 2, 1 << j)
        view[:, 1, :] |= view[:, 0, :]
    return arr


def dominating_boundary_points(f):
    """Indices of the monotone frontier: minimal +1 points and maximal -1 points.

    Minimal/maximal is in the coordinatewise order (-1 below +1); for a
    monotone function these are exactly the points where the sign is decided
    with no slack.  Precondition: f monotone.
    """
    if not properties(f).monotone:
        raise PreconditionError("dominating boundary is defined for monotone f only")
    size = 1 << f.n
    plus = (f.values > 0).astype(np.uint8)
    sup = _or_reduce_superset(plus.copy(), f.n)
    strict_sup = np.zeros(size, dtype=np.uint8)
    u = np.arange(size)
    for j in range(f.n):
        clear = (u >> j) & 1 == 0
        strict_sup[clear] |= sup[u[clear] | (1 << j)]
    minimal_plus = (plus == 1) & (strict_sup == 0)

    minus = (f.values < 0).astype(np.uint8)
    sub = _or_reduce_subset(minus.copy(), f.n)
    strict_sub = np.zeros(size, dtype=np.uint8)
    for j in range(f.n):
        bit_set = (u >> j) & 1 == 1
        strict_sub[bit_set] |= sub[u[bit_set] ^ (1 << j)]
    maximal_minus = (minus == 1) & (strict_sub == 0)

    return sorted(np.flatnonzero(minimal_plus | maximal_minus).tolist())


def friendly_neighborhood(f, d):
    """Bool array: entry u is True iff some y != u within distance d agrees with f(u)."""
    if d < 1:
        raise InvalidArgument("neighborhood radius must be >= 1")
    size = 1 << f.n
    u = np.arange(size)
    agree = np.zeros(size, dtype=bool)
    vals = f.values
    for r in range(1, min(d, f.n) + 1):
        for flip in combinations(range(f.n), r):
            m = 0
            for j in flip:
                m |= 1 << j
            agree |= vals[u ^ m] == vals
            if agree.all():
                return agree
    return agree
