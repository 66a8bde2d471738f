"""Exact polynomial arithmetic and exterior algebra over ordered coordinate charts.

Coefficients are Fractions everywhere; nothing in this module touches floats.
Wedge monomials are stored as strictly increasing tuples of chart positions with
the permutation sign folded into the coefficient.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

Number = Union[int, Fraction]
Mono = Tuple[Tuple[str, int], ...]

# -- variable ordering ------------------------------------------------------

_RANK: Dict[str, int] = {}


def register_names(names: Iterable[str]) -> None:
    """Append names to the global variable order (first registration wins)."""
    changed = False
    for n in names:
        if n not in _RANK:
            _RANK[n] = len(_RANK)
            changed = True
    if changed:
        var_key.cache_clear()
        _mono_mul.cache_clear()


def _natural(name: str):
    return tuple((0, int(p), "") if p.isdigit() else (1, 0, p) for p in re.split(r"(\d+)", name) if p)


@lru_cache(maxsize=None)
def var_key(name: str):
    r = _RANK.get(name)
    if r is not None:
        return (0, r, ())
    return (1, 0, _natural(name))


def _canon_mono(pairs: Iterable[Tuple[str, int]]) -> Mono:
    d: Dict[str, int] = {}
    for v, e in pairs:
        if e:
            d[v] = d.get(v, 0) + e
    return tuple(sorted(((v, e) for v, e in d.items() if e), key=lambda p: var_key(p[0])))


@lru_cache(maxsize=1 << 16)
def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items(), key=lambda p: var_key(p[0])))


def _mono_sort_key(m: Mono):
    # constants last, otherwise by leading variables and descending powers
    return (len(m) == 0, tuple((var_key(v), -e) for v, e in m))


class UnassignedError(KeyError):
    pass


# -- polynomials ------------------------------------------------------------

class Poly:
    """Sparse multivariate polynomial with Fraction coefficients (immutable)."""

    __slots__ = ("_t", "_h")

    def __init__(self, terms: Optional[Mapping[Mono, Number]] = None, _trusted: bool = False):
        if _trusted:
            self._t = terms  # type: ignore[assignment]
        else:
            t: Dict[Mono, Fraction] = {}
            for m, c in (terms or {}).items():
                m = _canon_mono(m)
                c = t.get(m, 0) + Fraction(c)
                if c:
                    t[m] = c
                else:
                    t.pop(m, None)
            self._t = t
        self._h = None

    # constructors
    @staticmethod
    def const(c: Number) -> "Poly":
        c = Fraction(c)
        return Poly({(): c} if c else {}, _trusted=True)

    @staticmethod
    def var(name: str, power: int = 1) -> "Poly":
        return Poly({((name, power),): Fraction(1)}, _trusted=True)

    @staticmethod
    def coerce(x) -> "Poly":
        if isinstance(x, Poly):
            return x
        if isinstance(x, (int, Fraction)):
            return Poly.const(x)
        if isinstance(x, str):
            return Poly.var(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Poly")

    @property
    def terms(self) -> Dict[Mono, Fraction]:
        return dict(self._t)

    def items(self):
        return self._t.items()

    def is_zero(self) -> bool:
        return not self._t

    def is_const(self) -> bool:
        return not self._t or (len(self._t) == 1 and () in self._t)

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise ValueError("polynomial is not constant")
        return self._t.get((), Fraction(0))

    def variables(self) -> Tuple[str, ...]:
        vs = {v for m in self._t for v, _ in m}
        return tuple(sorted(vs, key=var_key))

    def degree(self, name: Optional[str] = None) -> int:
        if not self._t:
            return -1
        if name is None:
            return max(sum(e for _, e in m) for m in self._t)
        return max(dict(m).get(name, 0) for m in self._t)

    # arithmetic
    def __add__(self, other) -> "Poly":
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        if not other._t:
            return self
        if not self._t:
            return other
        t = dict(self._t)
        for m, c in other._t.items():
            s = t.get(m, 0) + c
            if s:
                t[m] = s
            else:
                t.pop(m, None)
        return Poly(t, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self._t.items()}, _trusted=True)

    def __sub__(self, other) -> "Poly":
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return Poly.coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly.const(0)
            return Poly({m: c * other for m, c in self._t.items()}, _trusted=True)
        if not isinstance(other, Poly):
            return NotImplemented
        t: Dict[Mono, Fraction] = {}
        for m1, c1 in self._t.items():
            for m2, c2 in other._t.items():
                m = _mono_mul(m1, m2)
                s = t.get(m, 0) + c1 * c2
                if s:
                    t[m] = s
                else:
                    t.pop(m, None)
        return Poly(t, _trusted=True)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        out = Poly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        if self._h is None:
            self._h = hash(frozenset(self._t.items()))
        return self._h

    def __bool__(self):
        return bool(self._t)

    # calculus and substitution
    def diff(self, name: str) -> "Poly":
        t: Dict[Mono, Fraction] = {}
        for m, c in self._t.items():
            for i, (v, e) in enumerate(m):
                if v == name:
                    nm = m[:i] + (((v, e - 1),) if e > 1 else ()) + m[i + 1:]
                    t[nm] = t.get(nm, 0) + c * e
                    break
        return Poly({m: c for m, c in t.items() if c}, _trusted=True)

    def subs(self, mapping: Mapping[str, object]) -> "Poly":
        if not mapping:
            return self
        vals = {k: Poly.coerce(v) for k, v in mapping.items()}
        if not any(v in vals for m in self._t for v, _ in m):
            return self
        out = Poly.const(0)
        powcache: Dict[Tuple[str, int], Poly] = {}
        for m, c in self._t.items():
            keep = []
            term = Poly.const(c)
            for v, e in m:
                if v in vals:
                    key = (v, e)
                    if key not in powcache:
                        powcache[key] = vals[v] ** e
                    term = term * powcache[key]
                else:
                    keep.append((v, e))
            if keep:
                term = term * Poly({tuple(keep): 1})
            out = out + term
        return out

    def evaluate(self, point: Mapping[str, Number]) -> Fraction:
        total = Fraction(0)
        for m, c in self._t.items():
            for v, e in m:
                if v not in point:
                    raise UnassignedError(v)
                c = c * Fraction(point[v]) ** e
            total += c
        return total

    def collect(self, names: Iterable[str]) -> Dict[Mono, "Poly"]:
        """Group terms by their monomial in `names`; values are the cofactors."""
        names = set(names)
        out: Dict[Mono, Dict[Mono, Fraction]] = {}
        for m, c in self._t.items():
            a = tuple(p for p in m if p[0] in names)
            b = tuple(p for p in m if p[0] not in names)
            out.setdefault(a, {})[b] = c
        return {k: Poly(v, _trusted=True) for k, v in out.items()}

    def coeff(self, mono: Iterable[Tuple[str, int]]) -> Fraction:
        return self._t.get(_canon_mono(mono), Fraction(0))

    def leading(self) -> Tuple[Mono, Fraction]:
        m = min(self._t, key=_mono_sort_key)
        return m, self._t[m]

    def monic(self) -> "Poly":
        if not self._t:
            return self
        return self * (1 / self.leading()[1])

    def div_exact(self, other: "Poly") -> "Poly":
        """Exact multivariate division; raises ValueError when not divisible."""
        other = Poly.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        vs = sorted(set(self.variables()) | set(other.variables()), key=var_key)

        def lex(m: Mono):
            d = dict(m)
            return tuple(d.get(v, 0) for v in vs)

        lm_d = max(other._t, key=lex)
        lc_d = other._t[lm_d]
        dd = dict(lm_d)
        q = Poly.const(0)
        r = self
        while not r.is_zero():
            lm_r = max(r._t, key=lex)
            dr = dict(lm_r)
            if any(dr.get(v, 0) < e for v, e in dd.items()):
                raise ValueError("not exactly divisible")
            mq = _canon_mono((v, dr.get(v, 0) - dd.get(v, 0)) for v in set(dr) | set(dd))
            t = Poly({mq: r._t[lm_r] / lc_d}, _trusted=True)
            q = q + t
            r = r - t * other
        return q

    # output
    def __str__(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for m in sorted(self._t, key=_mono_sort_key):
            c = self._t[m]
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sg, body in parts[1:]:
            s += f" {sg} {body}"
        return s

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"

    def to_json(self) -> dict:
        terms = []
        for m in sorted(self._t, key=_mono_sort_key):
            c = self._t[m]
            terms.append({"exps": [[v, e] for v, e in m], "num": c.numerator, "den": c.denominator})
        return {"terms": terms}

    @staticmethod
    def from_json(d: Mapping) -> "Poly":
        t = {}
        for term in d["terms"]:
            m = tuple((str(v), int(e)) for v, e in term["exps"])
            t[m] = Fraction(int(term["num"]), int(term["den"]))
        return Poly(t)


P = Poly.coerce
ZERO = Poly.const(0)
ONE = Poly.const(1)


# -- relations --------------------------------------------------------------

@dataclass(frozen=True)
class Relation:
    lhs: Poly
    rhs: Poly
    provenance: str = ""

    @property
    def residual(self) -> Poly:
        return self.lhs - self.rhs

    def holds(self) -> bool:
        return self.residual.is_zero()

    def normalized(self) -> Poly:
        """Residual scaled so its leading coefficient is 1."""
        return self.residual.monic()

    def equivalent(self, other: "Relation") -> bool:
        return self.normalized() == other.normalized()

    def subs(self, mapping) -> "Relation":
        return Relation(self.lhs.subs(mapping), self.rhs.subs(mapping), self.provenance)

    def __str__(self) -> str:
        return f"{self.lhs} = {self.rhs}"

    def to_json(self) -> dict:
        d = {"lhs": self.lhs.to_json(), "rhs": self.rhs.to_json()}
        if self.provenance:
            d["provenance"] = self.provenance
        return d


# -- charts -----------------------------------------------------------------

ROLES = ("base", "field", "energy", "momentum", "ld-extra", "jet")


@dataclass(frozen=True)
class Coordinate:
    name: str
    role: str
    indices: Tuple[int, ...] = ()
    rank: int = 0

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role}")


@dataclass(frozen=True)
class Metric:
    n: int
    signature: Tuple[int, ...]

    def __post_init__(self):
        if len(self.signature) != self.n or any(s not in (1, -1) for s in self.signature):
            raise ValueError("signature entries must be +1 or -1, one per dimension")


MINKOWSKI4 = Metric(4, (1, -1, -1, -1))


class Chart:
    """Ordered coordinate system; positions index differentials and tangent directions."""

    def __init__(self, coords: Sequence[Coordinate]):
        coords = tuple(coords)
        if any(c.role == "jet" for c in coords):
            raise ValueError("jet symbols never carry differentials")
        names = [c.name for c in coords]
        if len(set(names)) != len(names):
            raise ValueError("duplicate coordinate names")
        ranks = [c.rank for c in coords]
        if ranks != sorted(ranks) or len(set(ranks)) != len(ranks):
            raise ValueError("chart ranks must be strictly increasing")
        self.coords = coords
        self.names = tuple(names)
        self._pos = {n: i for i, n in enumerate(names)}

    def __len__(self):
        return len(self.coords)

    def __contains__(self, name: str) -> bool:
        return name in self._pos

    def index(self, name: str) -> int:
        try:
            return self._pos[name]
        except KeyError:
            raise KeyError(f"{name} is not a coordinate of this chart") from None

    def positions(self, role: str) -> Tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coords) if c.role == role)

    @property
    def base_positions(self) -> Tuple[int, ...]:
        return self.positions("base")

    def same(self, other: "Chart") -> bool:
        return self is other or self.coords == other.coords

    def __repr__(self):
        return f"Chart({len(self)} coords)"


# -- graded objects ---------------------------------------------------------

Key = Tuple[int, ...]


def _sort_sign(key: Sequence[int]) -> Tuple[int, Key]:
    """Sign of the sorting permutation and the sorted key; sign 0 on repeats."""
    k = list(key)
    if len(set(k)) != len(k):
        return 0, ()
    sign = 1
    for i in range(len(k)):
        for j in range(i + 1, len(k)):
            if k[i] > k[j]:
                sign = -sign
    return sign, tuple(sorted(k))


def _merge_sign(a: Key, b: Key) -> int:
    inv = 0
    for i in a:
        for j in b:
            if i > j:
                inv += 1
    return -1 if inv & 1 else 1


class _Graded:
    __slots__ = ("chart", "degree", "_t")

    def __init__(self, chart: Chart, degree: int, terms: Optional[Mapping[Sequence[int], object]] = None,
                 _trusted: bool = False):
        self.chart = chart
        self.degree = degree
        if _trusted:
            self._t = terms
            return
        t: Dict[Key, Poly] = {}
        n = len(chart)
        for k, c in (terms or {}).items():
            k = tuple(k)
            if len(k) != degree:
                raise ValueError(f"monomial {k} has wrong degree for {degree}")
            if any(not 0 <= i < n for i in k):
                raise ValueError("factor outside chart")
            sign, sk = _sort_sign(k)
            if not sign:
                continue
            c = Poly.coerce(c)
            s = t.get(sk, ZERO) + (c if sign > 0 else -c)
            if s.is_zero():
                t.pop(sk, None)
            else:
                t[sk] = s
        self._t = t

    @classmethod
    def _new(cls, chart, degree, terms):
        obj = cls.__new__(cls)
        obj.chart = chart
        obj.degree = degree
        obj._t = terms
        return obj

    @classmethod
    def zero(cls, chart: Chart, degree: int):
        return cls._new(chart, degree, {})

    @classmethod
    def scalar(cls, chart: Chart, c):
        c = Poly.coerce(c)
        return cls._new(chart, 0, {} if c.is_zero() else {(): c})

    @classmethod
    def basis(cls, chart: Chart, *names: str):
        """Wedge of basis elements for the named coordinates, in the given order."""
        return cls(chart, len(names), {tuple(chart.index(n) for n in names): ONE})

    @property
    def terms(self) -> Dict[Key, Poly]:
        return dict(self._t)

    def items(self):
        return self._t.items()

    def is_zero(self) -> bool:
        return not self._t

    def coeff(self, *names: str) -> Poly:
        sign, k = _sort_sign([self.chart.index(n) for n in names])
        c = self._t.get(k, ZERO)
        return c if sign > 0 else -c if sign else ZERO

    def scalar_part(self) -> Poly:
        if self.degree != 0:
            raise ValueError("not a 0-form")
        return self._t.get((), ZERO)

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if not self.chart.same(other.chart):
            raise ValueError("mismatched charts")
        if other.degree != self.degree:
            raise ValueError("degree mismatch")

    def __add__(self, other):
        self._check(other)
        t = dict(self._t)
        for k, c in other._t.items():
            s = t.get(k, ZERO) + c
            if s.is_zero():
                t.pop(k, None)
            else:
                t[k] = s
        return self._new(self.chart, self.degree, t)

    def __neg__(self):
        return self._new(self.chart, self.degree, {k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, (int, Fraction, Poly)):
            c = Poly.coerce(c)
            t = {}
            for k, v in self._t.items():
                w = v * c
                if not w.is_zero():
                    t[k] = w
            return self._new(self.chart, self.degree, t)
        return NotImplemented

    __rmul__ = __mul__

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.chart.same(other.chart) and self.degree == other.degree and self._t == other._t

    def __hash__(self):
        return hash((self.degree, frozenset(self._t.items())))

    def map_coeffs(self, fn):
        t = {}
        for k, c in self._t.items():
            w = fn(c)
            if not w.is_zero():
                t[k] = w
        return self._new(self.chart, self.degree, t)

    def subs(self, mapping):
        return self.map_coeffs(lambda c: c.subs(mapping))

    def sorted_items(self):
        return sorted(self._t.items())

    _symbol = "d"

    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for k, c in self.sorted_items():
            basis = "^".join(f"{self._symbol}({self.chart.names[i]})" for i in k)
            cs = str(c)
            if not basis:
                parts.append(f"({cs})")
            else:
                parts.append(basis if cs == "1" else "-" + basis if cs == "-1" else f"({cs})*{basis}")
        out = parts[0]
        for q in parts[1:]:
            out += f" - {q[1:]}" if q.startswith("-") else f" + {q}"
        return out

    def __repr__(self):
        return f"{type(self).__name__}[{self.degree}]({self})"

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "monomials": [
                {"factors": [self.chart.names[i] for i in k], "coeff": c.to_json()}
                for k, c in self.sorted_items()
            ],
        }

    @classmethod
    def from_json(cls, d: Mapping, chart: Chart):
        terms = {}
        for m in d["monomials"]:
            k = tuple(chart.index(n) for n in m["factors"])
            terms[k] = Poly.from_json(m["coeff"])
        return cls(chart, int(d["degree"]), terms)


class Form(_Graded):
    """Differential form: sum of coefficient * dq_i1 ^ ... ^ dq_ik."""
    __slots__ = ()
    _symbol = "d"


class Multivector(_Graded):
    """Multivector field: sum of coefficient * D(q_i1) ^ ... ^ D(q_ik)."""
    __slots__ = ()
    _symbol = "D"

    @classmethod
    def from_components(cls, chart: Chart, comps: Mapping[str, object]):
        return cls(chart, 1, {(chart.index(n),): c for n, c in comps.items()})

    def components(self) -> Dict[str, Poly]:
        if self.degree != 1:
            raise ValueError("components() needs a vector field")
        return {self.chart.names[k[0]]: c for k, c in self._t.items()}


# -- exterior algebra -------------------------------------------------------

def wedge(a: _Graded, b: _Graded) -> _Graded:
    if type(a) is not type(b):
        raise TypeError("wedge needs two forms or two multivectors")
    if not a.chart.same(b.chart):
        raise ValueError("mismatched charts")
    t: Dict[Key, Poly] = {}
    for ka, ca in a._t.items():
        sa = set(ka)
        for kb, cb in b._t.items():
            if sa.intersection(kb):
                continue
            k = tuple(sorted(ka + kb))
            c = ca * cb
            if _merge_sign(ka, kb) < 0:
                c = -c
            s = t.get(k, ZERO) + c
            if s.is_zero():
                t.pop(k, None)
            else:
                t[k] = s
    return type(a)._new(a.chart, a.degree + b.degree, t)


def wedge_all(items: Sequence[_Graded]) -> _Graded:
    out = items[0]
    for x in items[1:]:
        out = wedge(out, x)
    return out


def dext(f: Form) -> Form:
    chart = f.chart
    t: Dict[Key, Poly] = {}
    for k, c in f._t.items():
        for v in c.variables():
            if v not in chart:
                continue
            q = chart.index(v)
            if q in k:
                continue
            dc = c.diff(v)
            pos = sum(1 for i in k if i < q)
            nk = tuple(sorted(k + (q,)))
            if pos & 1:
                dc = -dc
            s = t.get(nk, ZERO) + dc
            if s.is_zero():
                t.pop(nk, None)
            else:
                t[nk] = s
    return Form._new(chart, f.degree + 1, t)


def _iota_key(q: int, k: Key) -> Tuple[int, Key]:
    p = k.index(q)
    return (-1 if p & 1 else 1), k[:p] + k[p + 1:]


def contract(X: Multivector, f: Form) -> Form:
    """X1^...^Xk contracted into f, with X1 inserted first: f(X1, ..., Xk, .)."""
    if not isinstance(X, Multivector) or not isinstance(f, Form):
        raise TypeError("contract(Multivector, Form)")
    if not X.chart.same(f.chart):
        raise ValueError("mismatched charts")
    if X.degree > f.degree:
        raise ValueError("multivector degree exceeds form degree")
    t: Dict[Key, Poly] = {}
    for kx, cx in X._t.items():
        sx = set(kx)
        for kf, cf in f._t.items():
            if not sx.issubset(kf):
                continue
            sign, rest = 1, kf
            for q in kx:
                s, rest = _iota_key(q, rest)
                sign *= s
            c = cx * cf
            if sign < 0:
                c = -c
            s = t.get(rest, ZERO) + c
            if s.is_zero():
                t.pop(rest, None)
            else:
                t[rest] = s
    return Form._new(f.chart, f.degree - X.degree, t)


def interior(v: Multivector, f: Form) -> Form:
    if v.degree != 1:
        raise ValueError("interior() needs a vector field")
    return contract(v, f)


def contract_seq(vectors: Sequence[Multivector], f: Form) -> Form:
    """Insert vectors one at a time; equals contract(wedge of vectors, f)."""
    for v in vectors:
        f = interior(v, f)
    return f


# -- numeric evaluation -----------------------------------------------------

def _det(m):
    n = len(m)
    if n == 0:
        return Fraction(1)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        sign, _ = _sort_sign(perm)
        prod = Fraction(sign)
        for i, j in enumerate(perm):
            prod *= m[i][j]
            if not prod:
                break
        total += prod
    return total


def _as_tangent(chart: Chart, v) -> Dict[int, Fraction]:
    if isinstance(v, Multivector):
        return {k[0]: c.const_value() for k, c in v._t.items()}
    if isinstance(v, Mapping):
        return {chart.index(n): Fraction(x) for n, x in v.items()}
    v = list(v)
    if len(v) != len(chart):
        raise ValueError("tangent vector length does not match chart")
    return {i: Fraction(x) for i, x in enumerate(v) if x}


def eval_numeric(f: Form, point: Mapping[str, Number], args: Sequence) -> Fraction:
    """f at `point` on the tangent vectors `args`, by determinant expansion."""
    if len(args) != f.degree:
        raise ValueError("need exactly deg f tangent vectors")
    vecs = [_as_tangent(f.chart, a) for a in args]
    total = Fraction(0)
    for k, c in f._t.items():
        m = [[vecs[b].get(q, Fraction(0)) for b in range(len(vecs))] for q in k]
        d = _det(m)
        if d:
            total += c.evaluate(point) * d
    return total


# -- Levi-Civita and Hodge star ---------------------------------------------

def levi_civita(idx: Sequence[int]) -> int:
    """Permutation symbol with eps(0,1,...,n-1) = +1."""
    sign, k = _sort_sign(idx)
    if not sign or k != tuple(range(len(idx))):
        return 0
    return sign


def eps_upper(idx: Sequence[int], metric: Metric) -> int:
    return levi_civita(idx)


def eps_lower(idx: Sequence[int], metric: Metric) -> int:
    s = levi_civita(idx)
    for i in idx:
        s *= metric.signature[i]
    return s


def kron(a: int, b: int) -> int:
    return 1 if a == b else 0


def hodge2(F: Form, metric: Metric = MINKOWSKI4) -> Form:
    """Hodge dual of a base 2-form: (*F)_rs = 1/2 eps^{mn}_{rs} F_mn."""
    chart = F.chart
    base = chart.base_positions
    if len(base) != 4 or metric.n != 4:
        raise ValueError("hodge2 needs a chart with exactly 4 base coordinates")
    if F.degree != 2:
        raise ValueError("hodge2 needs a 2-form")
    pos = {q: i for i, q in enumerate(base)}
    comp: Dict[Tuple[int, int], Poly] = {}
    for k, c in F._t.items():
        if any(q not in pos for q in k):
            raise ValueError("hodge2: non-base differential present")
        a, b = pos[k[0]], pos[k[1]]
        comp[(a, b)] = c
        comp[(b, a)] = -c
    sig = metric.signature
    t: Dict[Key, Poly] = {}
    for r, s in itertools.combinations(range(4), 2):
        acc = ZERO
        for (m, n), c in comp.items():
            e = levi_civita((m, n, r, s)) * sig[r] * sig[s]
            if e:
                acc = acc + c * Fraction(e, 2)
        if not acc.is_zero():
            t[(base[r], base[s])] = acc
    return Form._new(chart, 2, t)


# -- pullbacks --------------------------------------------------------------

def pullback(f: Form, values: Optional[Mapping[str, object]] = None,
             differentials: Optional[Mapping[str, Form]] = None) -> Form:
    """Pull back along the substitution q -> values[q].

    Coefficients get q replaced by values[q]; dq becomes differentials[q] when
    given, else dext(values[q]) when q is substituted, else stays dq.
    """
    chart = f.chart
    values = {k: Poly.coerce(v) for k, v in (values or {}).items()}
    differentials = dict(differentials or {})
    one_forms: Dict[int, Form] = {}

    def one(q: int) -> Form:
        if q not in one_forms:
            name = chart.names[q]
            if name in differentials:
                one_forms[q] = differentials[name]
            elif name in values:
                one_forms[q] = dext(Form.scalar(chart, values[name]))
            else:
                one_forms[q] = Form(chart, 1, {(q,): ONE})
        return one_forms[q]

    out = Form.zero(chart, f.degree)
    for k, c in f._t.items():
        c = c.subs(values)
        if c.is_zero():
            continue
        piece = Form.scalar(chart, c)
        for q in k:
            piece = wedge(piece, one(q))
            if piece.is_zero():
                break
        out = out + piece
    return out


def graph_pullback(f: Form, jets: Mapping[str, Mapping[str, object]],
                   values: Optional[Mapping[str, object]] = None) -> Form:
    """Replace each non-base dq by sum_nu jets[q][x_nu] dx^nu.

    `jets[q]` maps base coordinate names to the jet expression for d_nu q.
    `values` optionally substitutes coordinates in the coefficients.
    """
    chart = f.chart
    base = set(chart.base_positions)
    diffs: Dict[str, Form] = {}
    for k in f._t:
        for q in k:
            if q in base:
                continue
            name = chart.names[q]
            if name in diffs:
                continue
            if name not in jets:
                raise KeyError(f"missing jet entry for d({name})")
            diffs[name] = Form(chart, 1, {(chart.index(b),): Poly.coerce(v) for b, v in jets[name].items()})
    return pullback(f, values, diffs)
