"""Exact multivariate integer polynomials with formal square roots.

Variables are identified by :class:`VarId`.  Besides the spectral variable
``t``, the action parameters ``x1, x2, ...`` and the square roots
``s1_2 = sqrt(x1*x2)``, three auxiliary kinds are available: Gram entries
``g1_2 = (v1, v2)``, site coordinates ``v1_2`` (second coordinate of the first
site) and free symbols with an arbitrary identifier.

A :class:`Polynomial` is immutable.  Arithmetic happens in the free ring;
:func:`reduce_sqrt` rewrites square roots canonically, reading ``s_ij`` as
the positive root of ``x_i*x_j``: ``s_ij**2 = x_i*x_j`` and
``s_ij*s_ik = x_i*s_jk``.  The text
form printed by ``str`` is canonical (graded lexicographic order, variables
ordered t < x1 < x2 < ... < s-pairs < g-pairs < v-pairs < symbols) and
:meth:`Polynomial.parse` inverts it exactly.

The determinant, resultant, discriminant and Bezoutiante routines are exact.
The discriminant follows the textbook sign, ``(-1)**(n(n-1)/2) Res(p, p')`` for
monic ``p``, so that it equals the determinant of the Bezoutiante matrix with
constant 1.
"""

import re
from functools import lru_cache
from typing import NamedTuple

from . import univariate as up
from .errors import (DegreeTooLarge, DegreeZero, InconsistentBinding,
                     NotMonic, ParseError, VariableCollision)

SPECTRAL, XI, SQRT, GRAM, COORD, SYMBOL = range(6)


class VarId(NamedTuple):
    kind: int
    i: int = 0
    j: int = 0
    name: str = ""

    def __str__(self):
        if self.kind == SPECTRAL:
            return "t"
        if self.kind == XI:
            return f"x{self.i}"
        if self.kind == SQRT:
            return f"s{self.i}_{self.j}"
        if self.kind == GRAM:
            return f"g{self.i}_{self.j}"
        if self.kind == COORD:
            return f"v{self.i}_{self.j}"
        return self.name


T = VarId(SPECTRAL)


def Xi(i):
    if i < 1:
        raise ValueError("Xi indices start at 1")
    return VarId(XI, i)


def Sqrt(i, j):
    if i == j or min(i, j) < 1:
        raise ValueError("Sqrt needs two distinct positive indices")
    return VarId(SQRT, min(i, j), max(i, j))


def Gram(i, j):
    return VarId(GRAM, min(i, j), max(i, j))


def Coord(i, c):
    return VarId(COORD, i, c)


_RESERVED = re.compile(r"^(t|x\d+|[sgv]\d+_\d+)$")
_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def Symbol(name):
    if not _IDENT.match(name) or _RESERVED.match(name):
        raise ValueError(f"invalid or reserved symbol name {name!r}")
    return VarId(SYMBOL, name=name)


def _parse_var(token):
    if token == "t":
        return T
    m = re.fullmatch(r"x(\d+)", token)
    if m:
        return Xi(int(m.group(1)))
    m = re.fullmatch(r"([sgv])(\d+)_(\d+)", token)
    if m:
        kind, i, j = m.group(1), int(m.group(2)), int(m.group(3))
        if kind == "s":
            if i >= j:
                raise ParseError(f"square root {token} must list i < j")
            return Sqrt(i, j)
        if kind == "g":
            if i > j:
                raise ParseError(f"Gram entry {token} must list i <= j")
            return Gram(i, j)
        return Coord(i, j)
    return Symbol(token)


# --- monomials ------------------------------------------------------------------
# A monomial is a tuple of (VarId, exponent) pairs sorted by VarId, exponents > 0.

@lru_cache(maxsize=1 << 16)
def _mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _sqrt_canonical(m):
    sq = [(v, e) for v, e in m if v.kind == SQRT]
    if not sq:
        return True
    if any(e > 1 for _, e in sq):
        return False
    idx = [k for v, _ in sq for k in (v.i, v.j)]
    return len(set(idx)) == len(idx) and idx == sorted(idx)


@lru_cache(maxsize=1 << 16)
def _mono_reduce(m):
    """Rewrite a product of square roots as an x-monomial times s-factors
    pairing the indices of odd multiplicity consecutively, e.g.
    s1_2*s1_3 -> x1*s2_3 and s1_3*s2_4 -> s1_2*s3_4."""
    if _sqrt_canonical(m):
        return m
    count = {}
    kept = []
    for v, e in m:
        if v.kind == SQRT:
            count[v.i] = count.get(v.i, 0) + e
            count[v.j] = count.get(v.j, 0) + e
        else:
            kept.append((v, e))
    extra = {Xi(i): c // 2 for i, c in count.items() if c >= 2}
    odd = sorted(i for i, c in count.items() if c % 2)
    extra.update({Sqrt(a, b): 1 for a, b in zip(odd[::2], odd[1::2])})
    return _mono_mul(tuple(kept), tuple(sorted(extra.items())))


def _mono_degree(m):
    return sum(e for _, e in m)


def _order_key(m):
    return (-_mono_degree(m), tuple((v, -e) for v, e in m))


def _mono_str(m):
    return "*".join(str(v) if e == 1 else f"{v}^{e}" for v, e in m)


class Polynomial:
    """Immutable sparse polynomial with integer coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        for mono, c in (terms or {}).items():
            merged = {}
            for v, e in mono:
                if e < 0:
                    raise ValueError("negative exponent")
                if e:
                    merged[v] = merged.get(v, 0) + e
            key = tuple(sorted(merged.items()))
            clean[key] = clean.get(key, 0) + int(c)
        self._terms = {m: c for m, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c):
        return cls._raw({(): int(c)} if c else {})

    @classmethod
    def var(cls, v):
        return cls._raw({((v, 1),): 1})

    @classmethod
    def coerce(cls, x):
        if isinstance(x, Polynomial):
            return x
        if isinstance(x, VarId):
            return cls.var(x)
        if isinstance(x, int):
            return cls.const(x)
        raise TypeError(f"cannot convert {type(x).__name__} to Polynomial")

    # -- basic protocol --

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return Polynomial._raw({})
            return Polynomial._raw({m: c * other for m, c in self._terms.items()})
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        out = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a non-negative integer")
        result, base = Polynomial.const(1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- structure --

    def variables(self):
        return sorted({v for m in self._terms for v, _ in m})

    def is_constant(self):
        return all(not m for m in self._terms)

    def constant_term(self):
        return self._terms.get((), 0)

    def total_degree(self):
        return max((_mono_degree(m) for m in self._terms), default=-1)

    def degree(self, var):
        if not self._terms:
            return -1
        return max(dict(m).get(var, 0) for m in self._terms)

    def coefficients(self, var):
        """Map exponent of var -> coefficient polynomial."""
        out = {}
        for m, c in self._terms.items():
            e = 0
            rest = []
            for v, k in m:
                if v == var:
                    e = k
                else:
                    rest.append((v, k))
            out.setdefault(e, {})[tuple(rest)] = c
        return {e: Polynomial._raw(t) for e, t in out.items()}

    def coefficient(self, var, e):
        return self.coefficients(var).get(e, Polynomial.const(0))

    def leading_coefficient(self, var):
        return self.coefficient(var, self.degree(var))

    def derivative(self, var):
        out = {}
        for m, c in self._terms.items():
            d = dict(m)
            e = d.get(var, 0)
            if e:
                d[var] = e - 1
                key = tuple(sorted((v, k) for v, k in d.items() if k))
                out[key] = out.get(key, 0) + c * e
        return Polynomial._raw({m: c for m, c in out.items() if c})

    @property
    def canonical(self):
        return all(_sqrt_canonical(m) for m in self._terms)

    def is_homogeneous(self, variables=None):
        """True if every term has the same degree in the given variables."""
        degs = {sum(e for v, e in m if variables is None or v in variables)
                for m in self._terms}
        return len(degs) <= 1

    def map_coefficients(self, f):
        out = {}
        for m, c in self._terms.items():
            c2 = f(c)
            if c2:
                out[m] = c2
        return Polynomial._raw(out)

    def rename(self, mapping):
        """Substitute variables for variables (a relabeling)."""
        out = {}
        for m, c in self._terms.items():
            key = tuple(sorted((mapping.get(v, v), e) for v, e in m))
            merged = {}
            for v, e in key:
                merged[v] = merged.get(v, 0) + e
            key = tuple(sorted(merged.items()))
            out[key] = out.get(key, 0) + c
        return Polynomial._raw({m: c for m, c in out.items() if c})

    def evaluate(self, values):
        """Evaluate with numbers for every variable (ints, Fractions, ...)."""
        total = 0
        for m, c in self._terms.items():
            term = c
            for v, e in m:
                term = term * values[v] ** e
            total = total + term
        return total

    def univariate(self, var):
        """Dense integer coefficient list (low degree first) in var."""
        coeffs = [0] * (max(self.degree(var), 0) + 1)
        for m, c in self._terms.items():
            if any(v != var for v, _ in m):
                raise ValueError(f"{self} is not univariate in {var}")
            coeffs[m[0][1] if m else 0] += c
        return up.strip(coeffs)

    @classmethod
    def from_univariate(cls, coeffs, var):
        return cls._raw({(((var, k),) if k else ()): int(c)
                         for k, c in enumerate(coeffs) if c})

    # -- text form --

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda mc: _order_key(mc[0]))

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for k, (m, c) in enumerate(self.sorted_terms()):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not m:
                body = str(a)
            elif a == 1:
                body = _mono_str(m)
            else:
                body = f"{a}*{_mono_str(m)}"
            if k == 0:
                parts.append(body if sign == "+" else "-" + body)
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def __repr__(self):
        return f"Polynomial('{self}')"

    @classmethod
    def parse(cls, text):
        return _parse(text)


def _coerce_or_none(x):
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, int):
        return Polynomial.const(x)
    if isinstance(x, VarId):
        return Polynomial.var(x)
    return None


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text):
    pos = 0
    tokens = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot tokenize {text!r} at {pos}")
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif name is not None:
            tokens.append(("name", name))
        elif op in "+-*^()":
            tokens.append(("op", op))
        else:
            raise ParseError(f"unexpected character {op!r} in {text!r}")
        pos = m.end()
    return tokens


def _parse(text):
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial text")
    if ("op", "(") in tokens or ("op", ")") in tokens:
        return _parse_nested(tokens, text)
    pos = 0
    result = {}

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    sign = 1
    if peek() == ("op", "-"):
        sign = -1
        pos += 1
    while True:
        coef = 1
        mono = {}
        expect_factor = True
        while expect_factor:
            kind, val = peek()
            if kind == "num":
                coef *= val
                pos += 1
            elif kind == "name":
                try:
                    v = _parse_var(val)
                except ValueError as exc:
                    raise ParseError(str(exc)) from exc
                pos += 1
                e = 1
                if peek() == ("op", "^"):
                    pos += 1
                    kind2, val2 = peek()
                    if kind2 != "num":
                        raise ParseError("exponent must be an integer")
                    e = val2
                    pos += 1
                mono[v] = mono.get(v, 0) + e
            else:
                raise ParseError(f"expected a factor in {text!r}")
            expect_factor = peek() == ("op", "*")
            if expect_factor:
                pos += 1
        key = tuple(sorted((v, e) for v, e in mono.items() if e))
        result[key] = result.get(key, 0) + sign * coef
        kind, val = peek()
        if kind is None:
            break
        if kind == "op" and val in "+-":
            sign = 1 if val == "+" else -1
            pos += 1
        else:
            raise ParseError(f"unexpected token {val!r} in {text!r}")
    return Polynomial._raw({m: c for m, c in result.items() if c})


def _parse_nested(tokens, text):
    """Recursive descent for input with parentheses; slower than the flat path."""
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    def expr():
        nonlocal pos
        sign = 1
        if peek() == ("op", "-"):
            sign, pos = -1, pos + 1
        acc = term() * sign
        while peek() in (("op", "+"), ("op", "-")):
            op = peek()[1]
            pos += 1
            acc = acc + term() if op == "+" else acc - term()
        return acc

    def term():
        nonlocal pos
        acc = power()
        while peek() == ("op", "*"):
            pos += 1
            acc = acc * power()
        return acc

    def power():
        nonlocal pos
        base = atom()
        if peek() == ("op", "^"):
            pos += 1
            kind, val = peek()
            if kind != "num":
                raise ParseError("exponent must be an integer")
            pos += 1
            base = base ** val
        return base

    def atom():
        nonlocal pos
        kind, val = peek()
        pos += 1
        if kind == "num":
            return Polynomial.const(val)
        if kind == "name":
            try:
                return Polynomial.var(_parse_var(val))
            except ValueError as exc:
                raise ParseError(str(exc)) from exc
        if (kind, val) == ("op", "("):
            inner = expr()
            if peek() != ("op", ")"):
                raise ParseError(f"unbalanced parentheses in {text!r}")
            pos += 1
            return inner
        raise ParseError(f"expected a factor in {text!r}")

    out = expr()
    if pos != len(tokens):
        raise ParseError(f"unexpected token {peek()[1]!r} in {text!r}")
    return out


# --- convenience constructors ---------------------------------------------------

def t():
    return Polynomial.var(T)


def xi(i):
    return Polynomial.var(Xi(i))


def sq(i, j):
    return Polynomial.var(Sqrt(i, j))


def const(c):
    return Polynomial.const(c)


def linear_form(coeffs, var=Xi):
    """sum_k coeffs[k] * var(k + 1) for an integer vector."""
    return Polynomial._raw({((var(k + 1), 1),): int(c) for k, c in enumerate(coeffs) if c})


# --- square roots ------------------------------------------------------------------

def reduce_sqrt(p):
    """Canonical representative with every product of roots rewritten."""
    p = Polynomial.coerce(p)
    if p.canonical:
        return p
    out = {}
    for m, c in p.items():
        r = _mono_reduce(m)
        out[r] = out.get(r, 0) + c
    return Polynomial._raw({m: c for m, c in out.items() if c})


def mul_reduced(a, b):
    return reduce_sqrt(a * b)


def specialize(p, bindings):
    """Substitute polynomials for variables and reduce square roots.

    Binding x_i to zero also sends every unbound s_ij to zero.  A binding for
    s_ij is checked against s_ij**2 = x_i*x_j under the other bindings.
    """
    p = reduce_sqrt(Polynomial.coerce(p))
    if not bindings:
        return p
    bindings = {v: Polynomial.coerce(q) for v, q in bindings.items()}
    xi_bindings = {v: q for v, q in bindings.items() if v.kind == XI}
    for v, q in bindings.items():
        if v.kind == SQRT:
            lhs = reduce_sqrt(q * q)
            rhs = _substitute(Polynomial.var(Xi(v.i)) * Polynomial.var(Xi(v.j)), xi_bindings)
            if lhs != reduce_sqrt(rhs):
                raise InconsistentBinding(f"{v} -> {q} contradicts {v}^2 = x{v.i}*x{v.j}")
    zero_xi = {v.i for v, q in xi_bindings.items() if not q}
    if zero_xi:
        bindings = dict(bindings)
        for v in p.variables():
            if v.kind == SQRT and v not in bindings and (v.i in zero_xi or v.j in zero_xi):
                bindings[v] = Polynomial.const(0)
    return reduce_sqrt(_substitute(p, bindings))


def _substitute(p, bindings):
    powers = {}

    def power(v, e):
        key = (v, e)
        if key not in powers:
            powers[key] = bindings[v] ** e
        return powers[key]

    total = Polynomial.const(0)
    acc = {}
    for m, c in p.items():
        free = []
        term = None
        for v, e in m:
            if v in bindings:
                f = power(v, e)
                term = f if term is None else term * f
            else:
                free.append((v, e))
        if term is None:
            key = tuple(free)
            acc[key] = acc.get(key, 0) + c
            continue
        term = term * Polynomial._raw({tuple(free): c})
        total = total + term
    return total + Polynomial._raw({m: c for m, c in acc.items() if c})


# --- matrices ---------------------------------------------------------------------

class PolyMatrix:
    """Square matrix of canonical polynomials."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = [[reduce_sqrt(Polynomial.coerce(e)) for e in row] for row in rows]
        if not rows or any(len(r) != len(rows) for r in rows):
            raise ValueError("PolyMatrix must be square and non-empty")
        self.rows = tuple(tuple(r) for r in rows)

    @property
    def dim(self):
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __add__(self, other):
        return PolyMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return PolyMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, c):
        c = Polynomial.coerce(c)
        return PolyMatrix([[c * a for a in r] for r in self.rows])

    def shift(self, c):
        """self + c * I."""
        c = Polynomial.coerce(c)
        return PolyMatrix([[a + c if i == j else a for j, a in enumerate(r)]
                           for i, r in enumerate(self.rows)])

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def transpose(self):
        return PolyMatrix([list(col) for col in zip(*self.rows)])

    def is_symmetric(self):
        return self == self.transpose()

    def variables(self):
        return sorted({v for r in self.rows for e in r for v in e.variables()})

    def specialize(self, bindings):
        return PolyMatrix([[specialize(e, bindings) for e in r] for r in self.rows])

    def diagonal(self):
        return [self.rows[i][i] for i in range(self.dim)]

    def to_json(self):
        return [[str(e) for e in r] for r in self.rows]

    @classmethod
    def from_json(cls, data):
        return cls([[Polynomial.parse(e) for e in r] for r in data])

    def __repr__(self):
        return f"PolyMatrix({self.to_json()})"


def determinant(rows, one=1, mul=None):
    """Division-free determinant by Laplace expansion over column subsets.

    Works over any commutative ring whose elements support + and *; zero
    entries are skipped, which keeps sparse symbolic matrices cheap.
    """
    n = len(rows)
    if mul is None:
        def mul(a, b):
            return a * b
    layer = {0: one}
    for k in range(n):
        nxt = {}
        row = rows[k]
        for mask, val in layer.items():
            for j in range(n):
                if mask >> j & 1 or not row[j]:
                    continue
                inversions = bin(mask >> (j + 1)).count("1")
                term = mul(val, row[j])
                if inversions & 1:
                    term = -term
                key = mask | (1 << j)
                nxt[key] = nxt[key] + term if key in nxt else term
        layer = nxt
    return layer.get((1 << n) - 1, one - one)


def det_bareiss(rows):
    """Fraction-free Gaussian elimination for integer matrices."""
    a = [list(r) for r in rows]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def char_poly(M, var=T):
    """det(var*I - M), fully reduced."""
    if not isinstance(M, PolyMatrix):
        M = PolyMatrix(M)
    if var in M.variables():
        raise VariableCollision(f"{var} occurs in the matrix entries")
    tv = Polynomial.var(var)
    rows = [[(tv - e if i == j else -e) for j, e in enumerate(r)] for i, r in enumerate(M.rows)]
    return determinant(rows, one=Polynomial.const(1), mul=mul_reduced)


def matrix_det(M):
    if not isinstance(M, PolyMatrix):
        M = PolyMatrix(M)
    return determinant(M.rows, one=Polynomial.const(1), mul=mul_reduced)


# --- resultants ----------------------------------------------------------------------

def sylvester_matrix(p, q, var):
    p, q = Polynomial.coerce(p), Polynomial.coerce(q)
    m, n = p.degree(var), q.degree(var)
    if m < 1 or n < 1:
        raise DegreeZero("both inputs need positive degree in the variable")
    pc, qc = p.coefficients(var), q.coefficients(var)
    zero = Polynomial.const(0)
    size = m + n
    rows = []
    for i in range(n):
        rows.append([pc.get(m - (j - i), zero) if 0 <= j - i <= m else zero for j in range(size)])
    for i in range(m):
        rows.append([qc.get(n - (j - i), zero) if 0 <= j - i <= n else zero for j in range(size)])
    return rows


def resultant(p, q, var=T):
    """Determinant of the Sylvester matrix, rows of p first."""
    for f in (p, q):
        if any(v.kind == SQRT for v in Polynomial.coerce(f).variables()):
            raise ValueError("eliminate square roots before taking resultants")
    rows = sylvester_matrix(p, q, var)
    return determinant(rows, one=Polynomial.const(1))


def discriminant(p, var=T):
    """(-1)**(n(n-1)/2) * Res(p, p') for monic p of degree n >= 2."""
    p = Polynomial.coerce(p)
    n = p.degree(var)
    if n < 1:
        raise DegreeZero("discriminant needs positive degree")
    if p.leading_coefficient(var) != 1:
        raise NotMonic(f"{p} is not monic in {var}")
    if n == 1:
        return Polynomial.const(1)
    r = resultant(p, p.derivative(var), var)
    return -r if (n * (n - 1) // 2) % 2 else r


def power_sums(p, var, count):
    """Newton power sums psi_0 .. psi_{count-1} of the roots of monic p."""
    p = Polynomial.coerce(p)
    n = p.degree(var)
    if n < 1 or p.leading_coefficient(var) != 1:
        raise NotMonic(f"{p} is not monic of positive degree in {var}")
    coeffs = p.coefficients(var)
    zero = Polynomial.const(0)
    c = [Polynomial.const(1)] + [coeffs.get(n - k, zero) for k in range(1, n + 1)]
    psi = [Polynomial.const(n)]
    for k in range(1, count):
        acc = zero
        for i in range(1, min(k - 1, n) + 1):
            acc = acc + c[i] * psi[k - i]
        if k <= n:
            acc = acc + c[k] * k
        psi.append(-acc)
    return psi[:count]


def bezoutiante(p, var=T):
    """Hankel matrix of Newton power sums, entry (i, j) = psi_{i+j}."""
    p = Polynomial.coerce(p)
    n = p.degree(var)
    psi = power_sums(p, var, 2 * n - 1)
    return PolyMatrix([[psi[i + j] for j in range(n)] for i in range(n)])


# --- univariate factorization --------------------------------------------------------------

def factor_univariate(p):
    """Factor a univariate integer polynomial into irreducibles.

    Returns a list of (factor, multiplicity).  A non-unit integer content is
    reported first as a constant factor; the product of all factors raised to
    their multiplicities equals p.
    """
    p = Polynomial.coerce(p)
    if not p:
        raise ValueError("cannot factor the zero polynomial")
    vs = p.variables()
    if len(vs) > 1:
        raise ValueError(f"{p} is not univariate")
    if not vs:
        return [(p, 1)]
    var = vs[0]
    dense = p.univariate(var)
    if up.degree(dense) > up.MAX_FACTOR_DEGREE:
        raise DegreeTooLarge(f"degree {up.degree(dense)} exceeds {up.MAX_FACTOR_DEGREE}")
    content, factors = up.factor_int_poly(dense)
    out = [(Polynomial.const(content), 1)] if content != 1 else []
    out.extend((Polynomial.from_univariate(f, var), e) for f, e in factors)
    return out


def expand_factors(factors):
    result = Polynomial.const(1)
    for f, e in factors:
        result = result * f ** e
    return result
