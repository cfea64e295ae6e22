"""Exact multihomogeneous polynomials and rational self-maps of products of
projective spaces.

Coordinates of the i-th factor P^{k_i} are named with the i-th letter of
``x, y, z, w, v, u, t, s`` followed by an index 0..k_i, so a map on
P^1 x P^1 is written in ``x0, x1, y0, y1``.

Term order is graded lexicographic within each block, blocks in factor order.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Sequence

from . import _mpoly as mp
from .errors import (DimensionMismatch, HomogeneityError, ParseError, SpaceMismatch,
                     UnknownVariable, ValidationError, ZeroMap)

BLOCK_LETTERS = "xyzwvuts"


@dataclass(frozen=True)
class AmbientSpace:
    """The product P^{k_1} x ... x P^{k_r}."""

    factors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(int(k) for k in self.factors))
        if not self.factors:
            raise ValidationError("need at least one factor")
        if any(k < 1 for k in self.factors):
            raise ValidationError("every factor dimension must be >= 1")
        if len(self.factors) > len(BLOCK_LETTERS):
            raise ValidationError(f"at most {len(BLOCK_LETTERS)} factors supported")

    @classmethod
    def projective(cls, k: int) -> "AmbientSpace":
        return cls((k,))

    @classmethod
    def product(cls, *ks: int) -> "AmbientSpace":
        return cls(tuple(ks))

    @property
    def total_dim(self) -> int:
        return sum(self.factors)

    @property
    def nblocks(self) -> int:
        return len(self.factors)

    @property
    def nvars(self) -> int:
        return sum(k + 1 for k in self.factors)

    @property
    def hyperplane_classes(self) -> tuple[str, ...]:
        return tuple(f"h{i + 1}" for i in range(self.nblocks))

    @cached_property
    def blocks(self) -> tuple[range, ...]:
        out, start = [], 0
        for k in self.factors:
            out.append(range(start, start + k + 1))
            start += k + 1
        return tuple(out)

    @cached_property
    def variable_names(self) -> tuple[str, ...]:
        return tuple(f"{BLOCK_LETTERS[b]}{i}"
                     for b, k in enumerate(self.factors) for i in range(k + 1))

    @cached_property
    def _var_index(self) -> dict:
        return {name: i for i, name in enumerate(self.variable_names)}

    def block_of(self, var: int) -> int:
        for b, rng in enumerate(self.blocks):
            if var in rng:
                return b
        raise IndexError(var)

    def multidegree(self, exponent: tuple) -> tuple[int, ...]:
        return tuple(sum(exponent[i] for i in rng) for rng in self.blocks)

    def __str__(self):
        return " x ".join(f"P^{k}" for k in self.factors)


def _term_key(space: AmbientSpace):
    blocks = space.blocks

    def key(exp):
        out = []
        for rng in blocks:
            part = [exp[i] for i in rng]
            out.append(sum(part))
            out.extend(part)
        return tuple(out)
    return key


class Polynomial:
    """Multihomogeneous polynomial with integer coefficients.

    Arithmetic is exact ring arithmetic over Z. The zero polynomial has an
    empty term map and multidegree all zeros; it is absorbing for ``*`` and
    neutral for ``+`` regardless of the other operand's multidegree.
    """

    __slots__ = ("space", "terms", "multidegree", "_hash")

    def __init__(self, space: AmbientSpace, terms: dict):
        self.space = space
        self.terms = {tuple(e): int(c) for e, c in terms.items() if c}
        n = space.nvars
        md = None
        for e in self.terms:
            if len(e) != n or min(e) < 0:
                raise ValidationError(f"bad exponent vector {e} for {space}")
            d = space.multidegree(e)
            if md is None:
                md = d
            elif d != md:
                raise HomogeneityError(
                    f"terms of multidegree {md} and {d} in one polynomial")
        self.multidegree = md if md is not None else (0,) * space.nblocks
        self._hash = None

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, space):
        return cls(space, {})

    @classmethod
    def constant(cls, space, c=1):
        return cls(space, {(0,) * space.nvars: c})

    @classmethod
    def variable(cls, space, name_or_index):
        i = (space._var_index[name_or_index]
             if isinstance(name_or_index, str) else name_or_index)
        e = [0] * space.nvars
        e[i] = 1
        return cls(space, {tuple(e): 1})

    @classmethod
    def monomial(cls, space, exponent, coeff=1):
        return cls(space, {tuple(exponent): coeff})

    def _new(self, terms):
        return Polynomial(self.space, terms)

    # -- basic queries ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return mp.is_constant(self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    @property
    def nterms(self) -> int:
        return len(self.terms)

    def content(self) -> int:
        return mp.icontent(self.terms)

    def primitive(self) -> "Polynomial":
        """Divide by the (positive) integer content; sign is kept."""
        c = self.content()
        if c in (0, 1):
            return self
        return self._new({e: v // c for e, v in self.terms.items()})

    def normalized(self) -> "Polynomial":
        """Primitive part with positive leading coefficient."""
        return self._new(mp.normalize(self.terms))

    def max_coeff_bits(self) -> int:
        return max((abs(c).bit_length() for c in self.terms.values()), default=0)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _term_key(self.space)(t[0]),
                      reverse=True)

    def leading_coefficient(self) -> int:
        if not self.terms:
            return 0
        return self.terms[max(self.terms)]

    # -- arithmetic --------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.space, other)
        if other.space != self.space:
            raise SpaceMismatch(f"{self.space} vs {other.space}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return self._new(mp.add(self.terms, other.terms))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return self._new(mp.sub(self.terms, other.terms))

    def __rsub__(self, other):
        return self._check(other) - self

    def __neg__(self):
        return self._new(mp.neg(self.terms))

    def __mul__(self, other):
        if isinstance(other, int):
            return self._new(mp.scale(self.terms, other))
        other = self._check(other)
        return self._new(mp.mul(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return self._new(mp.power(self.terms, n, self.space.nvars))

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        other = self._check(other)
        return self._new(mp.divexact(self.terms, other.terms))

    def divides(self, other: "Polynomial") -> bool:
        other = self._check(other)
        return mp.divides(self.terms, other.terms)

    def derivative(self, var) -> "Polynomial":
        i = self.space._var_index[var] if isinstance(var, str) else var
        return self._new(mp.derivative(self.terms, i))

    def evaluate(self, point: Sequence):
        return mp.evaluate(self.terms, point)

    # -- identity ----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            if isinstance(other, int):
                return self == Polynomial.constant(self.space, other)
            return NotImplemented
        return self.space == other.space and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.space, frozenset(self.terms.items())))
        return self._hash

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({self!s})"


# -- printing ---------------------------------------------------------------

def format_polynomial(p: Polynomial) -> str:
    if p.is_zero():
        return "0"
    names = p.space.variable_names
    pieces = []
    for i, (e, c) in enumerate(p.sorted_terms()):
        factors = []
        for name, k in zip(names, e):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append(f"{name}^{k}")
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if i == 0:
            pieces.append(("-" if c < 0 else "") + body)
        else:
            pieces.append((" - " if c < 0 else " + ") + body)
    return "".join(pieces)


# -- parsing ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^|\*\*|[-+*/()]))")


def _tokenize(text):
    pos = 0
    toks = []
    while True:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:]
            if rest.strip() == "":
                break
            skip = len(rest) - len(rest.lstrip())
            raise ParseError(f"unexpected character {rest.lstrip()[0]!r}", text, pos + skip)
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("INT", int(m.group(1)), start))
        elif m.group(2):
            toks.append(("VAR", m.group(2), start))
        else:
            op = m.group(3)
            toks.append(("OP", "^" if op == "**" else op, start))
        pos = m.end()
    toks.append(("END", None, len(text)))
    return toks


class _Parser:
    """Recursive descent over Q-coefficient sparse dicts.

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := power (('*'|'/') power)*
    power  := atom ('^' UINT)*
    atom   := INT | VAR | '(' expr ')'

    Division is only by nonzero constants (rational input).
    """

    def __init__(self, text, space):
        self.text = text
        self.space = space
        self.toks = _tokenize(text)
        self.i = 0
        self.nv = space.nvars

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind, value=None):
        t = self.take()
        if t[0] != kind or (value is not None and t[1] != value):
            want = value if value is not None else kind
            got = "end of input" if t[0] == "END" else repr(t[1])
            raise ParseError(f"expected {want!r}, got {got}", self.text, t[2])
        return t

    def parse(self):
        p = self.expr()
        t = self.peek()
        if t[0] != "END":
            raise ParseError(f"unexpected token {t[1]!r}", self.text, t[2])
        return p

    def expr(self):
        sign = 1
        t = self.peek()
        if t[0] == "OP" and t[1] in "+-":
            self.take()
            sign = -1 if t[1] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = mp.neg(acc)
        while True:
            t = self.peek()
            if t[0] == "OP" and t[1] in ("+", "-"):
                self.take()
                rhs = self.term()
                acc = mp.add(acc, rhs) if t[1] == "+" else mp.sub(acc, rhs)
            else:
                return acc

    def term(self):
        acc = self.power()
        while True:
            t = self.peek()
            if t[0] == "OP" and t[1] == "*":
                self.take()
                acc = mp.mul(acc, self.power())
            elif t[0] == "OP" and t[1] == "/":
                self.take()
                pos = self.peek()[2]
                d = self.power()
                if not mp.is_constant(d) or not d:
                    raise ParseError("division only by nonzero constants", self.text, pos)
                (c,) = d.values()
                acc = {e: Fraction(v) / c for e, v in acc.items()}
            else:
                return acc

    def power(self):
        acc = self.atom()
        while True:
            t = self.peek()
            if t[0] == "OP" and t[1] == "^":
                self.take()
                n = self.expect("INT")[1]
                acc = mp.power(acc, n, self.nv)
            else:
                return acc

    def atom(self):
        t = self.take()
        if t[0] == "INT":
            return mp.one(self.nv) if t[1] == 1 else ({(0,) * self.nv: t[1]} if t[1] else {})
        if t[0] == "VAR":
            idx = self.space._var_index.get(t[1])
            if idx is None:
                raise UnknownVariable(
                    f"unknown variable {t[1]!r} for {self.space} "
                    f"(expected one of {', '.join(self.space.variable_names)})",
                    self.text, t[2])
            e = [0] * self.nv
            e[idx] = 1
            return {tuple(e): 1}
        if t[0] == "OP" and t[1] == "(":
            p = self.expr()
            self.expect("OP", ")")
            return p
        got = "end of input" if t[0] == "END" else repr(t[1])
        raise ParseError(f"unexpected {got}", self.text, t[2])


def _parse_rational_dict(text, space):
    return _Parser(text, space).parse()


def _clear_denominators(dicts):
    den = 1
    for d in dicts:
        for c in d.values():
            if isinstance(c, Fraction):
                den = lcm(den, c.denominator)
    out = []
    for d in dicts:
        out.append({e: int(Fraction(c) * den) for e, c in d.items() if c})
    return out


def parse_polynomial(text: str, space: AmbientSpace) -> Polynomial:
    """Parse an expression into its primitive polynomial (sign kept)."""
    (terms,) = _clear_denominators([_parse_rational_dict(text, space)])
    return Polynomial(space, terms).primitive()


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    """Primitive part of the product (the product of primitives is primitive)."""
    if a.space != b.space:
        raise SpaceMismatch(f"{a.space} vs {b.space}")
    return (a * b).primitive()


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Primitive gcd, normalized to a positive leading coefficient."""
    if a.space != b.space:
        raise SpaceMismatch(f"{a.space} vs {b.space}")
    return Polynomial(a.space, mp.gcd(a.terms, b.terms))


def poly_gcd_many(polys: Sequence[Polynomial]) -> Polynomial:
    space = polys[0].space
    return Polynomial(space, mp.gcd_many([p.terms for p in polys]))


# -- rational maps ----------------------------------------------------------------

class RationalMap:
    """A rational map between products of projective spaces.

    ``components[i]`` is the tuple of k_i + 1 polynomials (in source
    coordinates) for the i-th target factor. Polynomials within a tuple share
    a multidegree; zero entries are allowed but not a whole zero tuple.
    """

    __slots__ = ("source", "target", "components", "reduced")

    def __init__(self, source: AmbientSpace, target: AmbientSpace,
                 components, reduced: bool = False):
        comps = tuple(tuple(t) for t in components)
        if len(comps) != target.nblocks:
            raise DimensionMismatch(f"expected {target.nblocks} component tuples, got {len(comps)}")
        for i, (tup, k) in enumerate(zip(comps, target.factors)):
            if len(tup) != k + 1:
                raise DimensionMismatch(f"tuple {i} needs {k + 1} components, got {len(tup)}")
            degs = {p.multidegree for p in tup if not p.is_zero()}
            if any(p.space != source for p in tup):
                raise SpaceMismatch("component polynomial not in source space")
            if not degs:
                raise ZeroMap(f"component tuple {i} is identically zero")
            if len(degs) > 1:
                raise HomogeneityError(f"tuple {i} mixes multidegrees {sorted(degs)}")
        self.source = source
        self.target = target
        self.components = comps
        self.reduced = bool(reduced)

    @classmethod
    def self_map(cls, space, components, reduced=False):
        return cls(space, space, components, reduced)

    @classmethod
    def identity(cls, space: AmbientSpace) -> "RationalMap":
        comps = [tuple(Polynomial.variable(space, i) for i in rng) for rng in space.blocks]
        return cls(space, space, comps, reduced=True)

    @classmethod
    def linear(cls, space: AmbientSpace, matrices) -> "RationalMap":
        """Block-diagonal linear map x -> L x (integer matrices, one per factor)."""
        comps = []
        for rng, L in zip(space.blocks, matrices):
            tup = []
            for row in L:
                terms = {}
                for j, c in zip(rng, row):
                    if c:
                        e = [0] * space.nvars
                        e[j] = 1
                        terms[tuple(e)] = int(c)
                tup.append(Polynomial(space, terms))
            comps.append(tuple(tup))
        return cls(space, space, comps)

    def tuple_multidegree(self, i: int) -> tuple[int, ...]:
        for p in self.components[i]:
            if not p.is_zero():
                return p.multidegree
        raise ZeroMap(i)

    @property
    def multidegree_matrix(self) -> tuple[tuple[int, ...], ...]:
        """Rows: target factors; columns: source blocks."""
        return tuple(self.tuple_multidegree(i) for i in range(self.target.nblocks))

    @property
    def degree(self) -> int:
        """Scalar degree for self-maps of a single P^k."""
        if self.source.nblocks != 1 or self.target.nblocks != 1:
            raise ValidationError("scalar degree only defined on a single P^k")
        return self.multidegree_matrix[0][0]

    def polynomials(self):
        for tup in self.components:
            yield from tup

    @property
    def nterms(self) -> int:
        return sum(p.nterms for p in self.polynomials())

    def max_coeff_bits(self) -> int:
        return max(p.max_coeff_bits() for p in self.polynomials())

    def __eq__(self, other):
        if not isinstance(other, RationalMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.components == other.components)

    def __hash__(self):
        return hash((self.source, self.target, self.components))

    def __str__(self):
        return format_map(self)

    def __repr__(self):
        return f"RationalMap({self!s})"


def format_map(f: RationalMap) -> str:
    return " ; ".join("[" + " : ".join(str(p) for p in tup) + "]"
                      for tup in f.components)


def parse_map(text, space: AmbientSpace, target: AmbientSpace | None = None) -> RationalMap:
    """Parse ``"[p0 : p1 : ...] ; [q0 : ...]"`` (one bracket per target factor).

    A list of lists of expression strings is accepted as well. Each tuple is
    cleared of denominators and divided by its common integer content
    together, so the projective point it defines is unchanged.
    """
    target = target or space
    if isinstance(text, str):
        tuples = _split_map_text(text)
    else:
        tuples = [[(s, None) for s in t] for t in text]
    comps = []
    for tup in tuples:
        dicts = _clear_denominators([_parse_located(s, off, text, space) for s, off in tup])
        polys = [Polynomial(space, d) for d in dicts]
        c = mp.icontent({i: v for i, p in enumerate(polys) for v in p.terms.values()})
        if c > 1:
            polys = [Polynomial(space, {e: v // c for e, v in p.terms.items()}) for p in polys]
        comps.append(tuple(polys))
    return RationalMap(space, target, comps)


def _split_map_text(text):
    if not re.search(r"\[([^\]]*)\]", text):
        raise ParseError("expected bracketed component tuples like [x0 : x1]", text, 0)
    leftover = re.sub(r"\[[^\]]*\]", "", text)
    if leftover.replace(";", "").replace(",", "").strip():
        raise ParseError("text outside component brackets", text, 0)
    out = []
    for m in re.finditer(r"\[([^\]]*)\]", text):
        tup, pos = [], m.start(1)
        for seg in m.group(1).split(":"):
            tup.append((seg, pos))
            pos += len(seg) + 1
        out.append(tup)
    return out


def _parse_located(segment, offset, whole, space):
    """Parse one component; errors report positions within the whole map text."""
    try:
        return _parse_rational_dict(segment, space)
    except ParseError as exc:
        if offset is None or exc.pos is None:
            raise
        raise type(exc)(exc.detail, whole, offset + exc.pos) from None


def compose(f: RationalMap, g: RationalMap) -> RationalMap:
    """Formal composition f o g (no reduction)."""
    if g.target != f.source:
        raise SpaceMismatch(f"cannot compose: g lands in {g.target}, f starts on {f.source}")
    images = [p.terms for p in g.polynomials()]
    nv = g.source.nvars
    comps = []
    for tup in f.components:
        comps.append(tuple(Polynomial(g.source, mp.substitute(p.terms, images, nv))
                           for p in tup))
    return RationalMap(g.source, f.target, comps)


def reduce_map_with_factors(f: RationalMap):
    """Reduced representative plus the common factor removed from each tuple."""
    comps = []
    factors = []
    for i, tup in enumerate(f.components):
        nonzero = [p.terms for p in tup if not p.is_zero()]
        if not nonzero:
            raise ZeroMap(f"component tuple {i} vanishes")
        g = mp.gcd_many(nonzero)
        if not mp.is_constant(g):
            tup = tuple(Polynomial(f.source, mp.divexact(p.terms, g)) if not p.is_zero() else p
                        for p in tup)
        c = mp.icontent({(j, e): v for j, p in enumerate(tup) for e, v in p.terms.items()})
        first = next(p for p in tup if not p.is_zero())
        if first.leading_coefficient() < 0:
            c = -c
        if c != 1:
            tup = tuple(Polynomial(f.source, {e: v // c for e, v in p.terms.items()})
                        for p in tup)
        comps.append(tup)
        factors.append(Polynomial(f.source, g))
    return RationalMap(f.source, f.target, comps, reduced=True), tuple(factors)


def reduce_map(f: RationalMap) -> RationalMap:
    """Divide each component tuple by its polynomial gcd and integer content."""
    return reduce_map_with_factors(f)[0]


# -- dominance -------------------------------------------------------------------

def _jacobian_rows(f: RationalMap):
    """Numerator polynomials of the Jacobian of the dehomogenised map.

    The chart sets the last coordinate of every source block to 1; the target
    chart divides each tuple by its last component Q. Entry (i, v) is
    dP_i/dv * Q - P_i * dQ/dv; the row scale Q^2 does not affect rank.
    """
    src = f.source
    free_vars = [i for rng in src.blocks for i in list(rng)[:-1]]
    rows = []
    for tup in f.components:
        Q = tup[-1]
        dQ = [Q.derivative(v) for v in free_vars]
        for P in tup[:-1]:
            rows.append([P.derivative(v) * Q - P * dq for v, dq in zip(free_vars, dQ)])
    return rows, free_vars


def _det_fraction(m):
    m = [list(map(Fraction, row)) for row in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            if m[r][c]:
                t = m[r][c] / m[c][c]
                for j in range(c, n):
                    m[r][j] -= t * m[c][j]
    return det


def _det_poly(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = None
    for j in range(n):
        if rows[0][j].is_zero():
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _det_poly(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else Polynomial.zero(rows[0][0].space)


def is_dominant(f: RationalMap, trials: int = 3, rng: random.Random | None = None,
                height: int = 10 ** 4) -> bool:
    """Probabilistic dominance test via the Jacobian of a dehomogenised chart.

    A nonzero determinant at any sampled point proves dominance. ``False``
    needs at least three vanishing samples and, for total dimension <= 3, a
    full symbolic expansion confirming the determinant is identically zero.
    """
    if f.source.total_dim != f.target.total_dim:
        raise SpaceMismatch("dominance test needs equal dimensions")
    for tup in f.components:
        if tup[-1].is_zero() or any(p.is_zero() for p in tup):
            # image inside a coordinate hyperplane
            return False
    rng = rng or random.Random(0)
    rows, free_vars = _jacobian_rows(f)
    src = f.source
    last_vars = {list(r)[-1] for r in src.blocks}
    denominators = [tup[-1] for tup in f.components]
    zero_hits = 0
    attempts = 0
    while zero_hits < max(trials, 3) and attempts < 50 * max(trials, 3):
        attempts += 1
        point = [1 if i in last_vars else rng.randint(-height, height) for i in range(src.nvars)]
        if any(Q.evaluate(point) == 0 for Q in denominators):
            continue
        m = [[entry.evaluate(point) for entry in row] for row in rows]
        if _det_fraction(m) != 0:
            return True
        zero_hits += 1
    if f.source.total_dim <= 3:
        return not _det_poly(rows).is_zero()
    return False
