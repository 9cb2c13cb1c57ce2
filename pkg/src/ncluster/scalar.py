"""Exact arithmetic tower: rationals, rational quaternions, square matrices
over a scalar, and dual-number extensions with eps^2 = 0.

Every value is immutable.  Mixing two scalars from different tower levels
raises TowerMismatch; plain ints and Fractions are central and lift into any
level.  Dual numbers give exact directional derivatives of rational
expressions: f(a + eps*b) = f(a) + eps * (D_b f)(a).
"""

from __future__ import annotations

import json
import random
from fractions import Fraction

from .errors import NotInvertible, TowerMismatch

RAT = ("rat",)
QUAT = ("quat",)


def mat_level(n, entry=RAT):
    return ("mat", n, entry)


def dual_level(base):
    return ("dual", base)


class Scalar:
    """Common operator plumbing for the tower."""

    __slots__ = ()

    def level(self):
        raise NotImplementedError

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.level() != self.level():
                raise TowerMismatch(f"{other.level()} vs {self.level()}")
            return other
        if isinstance(other, (int, Fraction)):
            return lift(Fraction(other), self.level())
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._add(other)

    def __radd__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other._add(self)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._add(other._neg())

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other._add(self._neg())

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._mul(other)

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other._mul(self)

    def __neg__(self):
        return self._neg()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return invert(self) ** (-n)
        out = one(self.level())
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inv(self):
        raise NotImplementedError

    def is_zero(self):
        raise NotImplementedError

    def __bool__(self):
        return not self.is_zero()


class Rational(Scalar):
    __slots__ = ("value",)

    def __init__(self, value):
        object.__setattr__(self, "value", Fraction(value))

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def level(self):
        return RAT

    def _add(self, other):
        return Rational(self.value + other.value)

    def _mul(self, other):
        return Rational(self.value * other.value)

    def _neg(self):
        return Rational(-self.value)

    def inv(self):
        if self.value == 0:
            raise NotInvertible("zero rational")
        return Rational(1 / self.value)

    def is_zero(self):
        return self.value == 0

    def __eq__(self, other):
        if isinstance(other, Rational):
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(("rat", self.value))

    def __repr__(self):
        return f"Rational({self.value})"


class Quaternion(Scalar):
    """Quaternion w + x*i + y*j + z*k over the rationals."""

    __slots__ = ("w", "x", "y", "z")

    def __init__(self, w, x, y, z):
        object.__setattr__(self, "w", Fraction(w))
        object.__setattr__(self, "x", Fraction(x))
        object.__setattr__(self, "y", Fraction(y))
        object.__setattr__(self, "z", Fraction(z))

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def level(self):
        return QUAT

    def _add(self, o):
        return Quaternion(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)

    def _mul(self, o):
        return Quaternion(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )

    def _neg(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def conjugate(self):
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self):
        return self.w ** 2 + self.x ** 2 + self.y ** 2 + self.z ** 2

    def inv(self):
        n = self.norm()
        if n == 0:
            raise NotInvertible("zero quaternion")
        return Quaternion(self.w / n, -self.x / n, -self.y / n, -self.z / n)

    def is_zero(self):
        return self.w == 0 and self.x == 0 and self.y == 0 and self.z == 0

    def __eq__(self, other):
        if isinstance(other, Quaternion):
            return (self.w, self.x, self.y, self.z) == (other.w, other.x, other.y, other.z)
        if isinstance(other, (int, Fraction)):
            return self.x == 0 and self.y == 0 and self.z == 0 and self.w == other
        return NotImplemented

    def __hash__(self):
        return hash(("quat", self.w, self.x, self.y, self.z))

    def __repr__(self):
        return f"Quaternion({self.w},{self.x},{self.y},{self.z})"


QI = Quaternion(0, 1, 0, 0)
QJ = Quaternion(0, 0, 1, 0)
QK = Quaternion(0, 0, 0, 1)


class Matrix(Scalar):
    """Square matrix whose entries all share one tower level."""

    __slots__ = ("rows", "entry_level")

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square and non-empty")
        lv = rows[0][0].level()
        for r in rows:
            for e in r:
                if e.level() != lv:
                    raise TowerMismatch("matrix entries at mixed levels")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "entry_level", lv)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    @property
    def n(self):
        return len(self.rows)

    def level(self):
        return ("mat", self.n, self.entry_level)

    def _add(self, o):
        return Matrix(tuple(tuple(a._add(b) for a, b in zip(ra, rb))
                            for ra, rb in zip(self.rows, o.rows)))

    def _mul(self, o):
        n = self.n
        zero_e = zero(self.entry_level)
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero_e
                for k in range(n):
                    acc = acc._add(self.rows[i][k]._mul(o.rows[k][j]))
                row.append(acc)
            out.append(tuple(row))
        return Matrix(tuple(out))

    def _neg(self):
        return Matrix(tuple(tuple(e._neg() for e in r) for r in self.rows))

    def trace(self):
        acc = zero(self.entry_level)
        for i in range(self.n):
            acc = acc._add(self.rows[i][i])
        return acc

    def inv(self):
        # Entries that are themselves matrices are inverted by flattening to
        # the base level, otherwise Gauss-Jordan over the (division ring)
        # entry level.
        if self.entry_level[0] == "mat":
            return _inv_by_flatten(self)
        n = self.n
        aug = [list(self.rows[i]) + [one(self.entry_level) if j == i else zero(self.entry_level)
                                     for j in range(n)] for i in range(n)]
        for col in range(n):
            piv = None
            for r in range(col, n):
                e = aug[r][col]
                if not e.is_zero():
                    try:
                        e.inv()
                        piv = r
                        break
                    except NotInvertible:
                        continue
            if piv is None:
                raise NotInvertible("singular matrix")
            aug[col], aug[piv] = aug[piv], aug[col]
            pinv = aug[col][col].inv()
            aug[col] = [pinv._mul(e) for e in aug[col]]
            for r in range(n):
                if r != col and not aug[r][col].is_zero():
                    f = aug[r][col]
                    aug[r] = [er._add(f._mul(ec)._neg()) for er, ec in zip(aug[r], aug[col])]
        return Matrix(tuple(tuple(row[n:]) for row in aug))

    def is_zero(self):
        return all(e.is_zero() for r in self.rows for e in r)

    def __eq__(self, other):
        if isinstance(other, Matrix):
            return self.rows == other.rows
        if isinstance(other, (int, Fraction)):
            return self == lift(Fraction(other), self.level())
        return NotImplemented

    def __hash__(self):
        return hash(("mat", self.rows))

    def __repr__(self):
        return f"Matrix({[list(r) for r in self.rows]!r})"


def _inv_by_flatten(m):
    blk = m.entry_level[1]
    n = m.n
    big = []
    for i in range(n):
        for bi in range(blk):
            row = []
            for j in range(n):
                row.extend(m.rows[i][j].rows[bi])
            big.append(tuple(row))
    try:
        binv = Matrix(tuple(big)).inv()
    except NotInvertible:
        raise NotInvertible("singular matrix (flattened)")
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            row.append(Matrix(tuple(tuple(binv.rows[i * blk + bi][j * blk + bj]
                                          for bj in range(blk)) for bi in range(blk))))
        out.append(tuple(row))
    return Matrix(tuple(out))


class Dual(Scalar):
    """a + eps*b with eps^2 = 0; base and infinitesimal share a level."""

    __slots__ = ("base", "inf")

    def __init__(self, base, inf):
        if base.level() != inf.level():
            raise TowerMismatch("dual parts at different levels")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "inf", inf)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def level(self):
        return ("dual", self.base.level())

    def _add(self, o):
        return Dual(self.base._add(o.base), self.inf._add(o.inf))

    def _mul(self, o):
        return Dual(self.base._mul(o.base),
                    self.base._mul(o.inf)._add(self.inf._mul(o.base)))

    def _neg(self):
        return Dual(self.base._neg(), self.inf._neg())

    def inv(self):
        binv = self.base.inv()
        return Dual(binv, binv._mul(self.inf)._mul(binv)._neg())

    def is_zero(self):
        return self.base.is_zero() and self.inf.is_zero()

    def __eq__(self, other):
        if isinstance(other, Dual):
            return self.base == other.base and self.inf == other.inf
        if isinstance(other, (int, Fraction, Scalar)):
            coerced = self._coerce(other) if not isinstance(other, Scalar) else None
            if coerced is not None:
                return self == coerced
            return NotImplemented
        return NotImplemented

    def __hash__(self):
        return hash(("dual", self.base, self.inf))

    def __repr__(self):
        return f"Dual({self.base!r}, {self.inf!r})"


# ------------------------------------------------------------------
# level utilities

def zero(level):
    if level == RAT:
        return Rational(0)
    if level == QUAT:
        return Quaternion(0, 0, 0, 0)
    if level[0] == "mat":
        n, sub = level[1], level[2]
        z = zero(sub)
        return Matrix(tuple(tuple(z for _ in range(n)) for _ in range(n)))
    if level[0] == "dual":
        z = zero(level[1])
        return Dual(z, z)
    raise ValueError(f"unknown level {level}")


def one(level):
    if level == RAT:
        return Rational(1)
    if level == QUAT:
        return Quaternion(1, 0, 0, 0)
    if level[0] == "mat":
        n, sub = level[1], level[2]
        o, z = one(sub), zero(sub)
        return Matrix(tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))
    if level[0] == "dual":
        return Dual(one(level[1]), zero(level[1]))
    raise ValueError(f"unknown level {level}")


def lift(q, level):
    """Lift a central rational into the given tower level."""
    q = Fraction(q)
    if level == RAT:
        return Rational(q)
    if level == QUAT:
        return Quaternion(q, 0, 0, 0)
    if level[0] == "mat":
        n, sub = level[1], level[2]
        d, z = lift(q, sub), zero(sub)
        return Matrix(tuple(tuple(d if i == j else z for j in range(n)) for i in range(n)))
    if level[0] == "dual":
        return Dual(lift(q, level[1]), zero(level[1]))
    raise ValueError(f"unknown level {level}")


def mul(x, y):
    return x * y


def add(x, y):
    return x + y


def invert(x):
    return x.inv()


def trace_rational(x):
    """Normalized trace down to a Fraction: (1/n) tr for matrices, identity
    on rationals.  Used by the 2-form and trace-homomorphism evaluations."""
    if isinstance(x, Rational):
        return x.value
    if isinstance(x, Matrix):
        t = x.trace()
        return trace_rational(t) / x.n
    if isinstance(x, Quaternion):
        # reduced trace / 2 keeps multiplicativity on centrals
        return x.w
    raise TypeError(f"no rational trace for {x!r}")


# ------------------------------------------------------------------
# rational coordinates: every level is a finite-dimensional Q-algebra

def q_basis(level):
    """Basis of the level as a Q-vector space."""
    if level == RAT:
        return [Rational(1)]
    if level == QUAT:
        return [Quaternion(1, 0, 0, 0), QI, QJ, QK]
    if level[0] == "mat":
        n, sub = level[1], level[2]
        base = q_basis(sub)
        z = zero(sub)
        out = []
        for i in range(n):
            for j in range(n):
                for e in base:
                    out.append(Matrix(tuple(tuple(e if (r, c) == (i, j) else z
                                                  for c in range(n)) for r in range(n))))
        return out
    if level[0] == "dual":
        base = q_basis(level[1])
        z = zero(level[1])
        return [Dual(e, z) for e in base] + [Dual(z, e) for e in base]
    raise ValueError(f"unknown level {level}")


def q_coords(x):
    """Coordinates of a scalar in the q_basis order, as Fractions."""
    if isinstance(x, Rational):
        return [x.value]
    if isinstance(x, Quaternion):
        return [x.w, x.x, x.y, x.z]
    if isinstance(x, Matrix):
        out = []
        for r in x.rows:
            for e in r:
                out.extend(q_coords(e))
        return out
    if isinstance(x, Dual):
        return q_coords(x.base) + q_coords(x.inf)
    raise TypeError(f"not a scalar: {x!r}")


def from_q_coords(coords, level):
    out = zero(level)
    for c, e in zip(coords, q_basis(level)):
        if c:
            out = out + lift(c, level) * e
    return out


def rational_nullspace(rows):
    """Nullspace basis of a rational matrix given as lists of Fractions:
    vectors x with sum_j x_j rows[j] = 0 ... i.e. left-nullspace of rows."""
    rows = [list(r) for r in rows]
    n = len(rows)
    if n == 0:
        return []
    width = len(rows[0])
    aug = [rows[i] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    pivots = []
    r = 0
    for col in range(width):
        piv = None
        for i in range(r, n):
            if aug[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        f = aug[r][col]
        aug[r] = [v / f for v in aug[r]]
        for i in range(n):
            if i != r and aug[i][col] != 0:
                g = aug[i][col]
                aug[i] = [a - g * b for a, b in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
        if r == n:
            break
    out = []
    for i in range(r, n):
        if all(aug[i][c] == 0 for c in range(width)):
            out.append(aug[i][width:])
    return out


def solve_intertwiner(pairs, level):
    """Invertible g with h1 g = g h2 for every (h1, h2) pair, or None."""
    basis = q_basis(level)
    rows = []
    for e in basis:
        row = []
        for h1, h2 in pairs:
            row.extend(q_coords(h1 * e - e * h2))
        rows.append(row)
    null = rational_nullspace(rows)
    if not null:
        return None
    # scan small combinations for an invertible solution
    import itertools
    cands = []
    for x in null:
        cands.append(x)
    for x, y in itertools.combinations(null, 2):
        cands.append([a + b for a, b in zip(x, y)])
        cands.append([a - b for a, b in zip(x, y)])
    for k in range(2, 5):
        for x in null:
            cands.append([a * k for a in x])
    for x in cands:
        g = from_q_coords(x, level)
        try:
            g.inv()
            return g
        except NotInvertible:
            continue
    return None


# ------------------------------------------------------------------
# seeded randomness

def parse_kind(kind):
    """Kind strings: 'rat', 'quat', 'mat:N', 'mat:N:quat', 'dual:<kind>'."""
    if isinstance(kind, tuple):
        return kind
    parts = kind.split(":")
    if parts[0] == "rat":
        return RAT
    if parts[0] == "quat":
        return QUAT
    if parts[0] == "mat":
        n = int(parts[1])
        sub = parse_kind(":".join(parts[2:])) if len(parts) > 2 else RAT
        return ("mat", n, sub)
    if parts[0] == "dual":
        return ("dual", parse_kind(":".join(parts[1:])))
    raise ValueError(f"unknown scalar kind {kind!r}")


def _draw(rng, level, bound):
    if level == RAT:
        return Rational(Fraction(rng.randint(-bound, bound), rng.randint(1, bound)))
    if level == QUAT:
        return Quaternion(*(Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
                            for _ in range(4)))
    if level[0] == "mat":
        n, sub = level[1], level[2]
        return Matrix(tuple(tuple(_draw(rng, sub, bound) for _ in range(n)) for _ in range(n)))
    if level[0] == "dual":
        return Dual(_draw(rng, level[1], bound), _draw(rng, level[1], bound))
    raise ValueError(f"unknown level {level}")


def random_scalar(kind, seed=None, bound=10, rng=None):
    """Deterministic pseudorandom scalar; same seed, same value."""
    if rng is None:
        rng = random.Random(seed)
    return _draw(rng, parse_kind(kind), bound)


def random_invertible(kind, seed=None, bound=10, rng=None):
    """Rejection-resample until the draw inverts."""
    if rng is None:
        rng = random.Random(seed)
    level = parse_kind(kind)
    while True:
        x = _draw(rng, level, bound)
        try:
            x.inv()
            return x
        except NotInvertible:
            continue


# ------------------------------------------------------------------
# JSON literals

def _frac_str(q):
    return str(q)


def to_json(x):
    if isinstance(x, Rational):
        return {"rat": _frac_str(x.value)}
    if isinstance(x, Quaternion):
        return {"quat": [_frac_str(x.w), _frac_str(x.x), _frac_str(x.y), _frac_str(x.z)]}
    if isinstance(x, Matrix):
        if x.entry_level == RAT:
            return {"mat": [[_frac_str(e.value) for e in r] for r in x.rows]}
        return {"mat": [[to_json(e) for e in r] for r in x.rows]}
    if isinstance(x, Dual):
        return {"dual": {"base": to_json(x.base), "inf": to_json(x.inf)}}
    raise TypeError(f"not a scalar: {x!r}")


def from_json(obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    if "rat" in obj:
        return Rational(Fraction(obj["rat"].replace("−", "-")))
    if "quat" in obj:
        return Quaternion(*(Fraction(s.replace("−", "-")) for s in obj["quat"]))
    if "mat" in obj:
        rows = []
        for r in obj["mat"]:
            row = []
            for e in r:
                if isinstance(e, str):
                    row.append(Rational(Fraction(e.replace("−", "-"))))
                else:
                    row.append(from_json(e))
            rows.append(tuple(row))
        return Matrix(tuple(rows))
    if "dual" in obj:
        return Dual(from_json(obj["dual"]["base"]), from_json(obj["dual"]["inf"]))
    raise ValueError(f"not a scalar literal: {obj!r}")
