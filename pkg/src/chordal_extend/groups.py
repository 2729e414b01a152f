"""Exact arithmetic for the concrete discrete groups used by the package.

Four families are supported:

* ``int_lattice``      -- Z^d, elements are integer tuples, generators ``±e_i``.
* ``heisenberg``       -- upper unitriangular 3x3 integer matrices, encoded
                          as ``(m, n, p)`` for ``[[1, m, p], [0, 1, n], [0, 0, 1]]``.
* ``infinite_dihedral``-- Z_2 * Z_2 on the involutions ``a`` and ``b``;
                          elements are alternating words.
* ``free_group``       -- free group of finite rank; elements are reduced words
                          over lowercase letters, uppercase letters are inverses.
                          Only used as a non-amenable control.

Every element has a single canonical encoding, so equality of encodings is
equality in the group.
"""
from __future__ import annotations

import functools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Union

import numpy as np

Element = Union[tuple, str]

INT_LATTICE = "int_lattice"
HEISENBERG = "heisenberg"
INFINITE_DIHEDRAL = "infinite_dihedral"
FREE_GROUP = "free_group"
KINDS = (INT_LATTICE, HEISENBERG, INFINITE_DIHEDRAL, FREE_GROUP)

FREE_LETTERS = "xyzwuvstrq"
DEFAULT_RADIUS_CAP = 64


class MalformedElement(ValueError):
    pass


class IncompatibleKind(ValueError):
    pass


class RadiusCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class GroupSpec:
    kind: str
    d: int = 0
    rank: int = 0
    generators: tuple = field(default=(), compare=True)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown group kind {self.kind!r}")
        if self.kind == INT_LATTICE and self.d < 1:
            raise ValueError("int_lattice needs d >= 1")
        if self.kind == FREE_GROUP and not 1 <= self.rank <= len(FREE_LETTERS):
            raise ValueError(f"free_group rank must be in 1..{len(FREE_LETTERS)}")
        gens = self.generators or _standard_generators(self)
        gens = tuple(check_element(self, g) for g in gens)
        e = identity(self)
        if e in gens:
            raise ValueError("identity may not be a generator")
        closed = set(gens)
        for g in gens:
            closed.add(inverse(self, g))
        gens = tuple(sorted(closed, key=lambda x: sort_key(self, x)))
        object.__setattr__(self, "generators", gens)

    @property
    def amenable(self) -> bool:
        return self.kind != FREE_GROUP or self.rank == 1

    @property
    def has_standard_generators(self) -> bool:
        return set(self.generators) == set(_standard_generators(self))

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == INT_LATTICE:
            out["d"] = self.d
        if self.kind == FREE_GROUP:
            out["rank"] = self.rank
        if not self.has_standard_generators:
            out["generators"] = [element_to_json(self, g) for g in self.generators]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "GroupSpec":
        kind = obj["kind"]
        base = cls(kind=kind, d=int(obj.get("d", 0)), rank=int(obj.get("rank", 0)))
        if "generators" in obj:
            gens = tuple(element_from_json(base, g) for g in obj["generators"])
            return cls(kind=kind, d=base.d, rank=base.rank, generators=gens)
        return base


def int_lattice(d: int) -> GroupSpec:
    return GroupSpec(INT_LATTICE, d=d)


def heisenberg() -> GroupSpec:
    return GroupSpec(HEISENBERG)


def infinite_dihedral() -> GroupSpec:
    return GroupSpec(INFINITE_DIHEDRAL)


def free_group(rank: int) -> GroupSpec:
    return GroupSpec(FREE_GROUP, rank=rank)


def _standard_generators(spec: GroupSpec) -> tuple:
    if spec.kind == INT_LATTICE:
        gens = []
        for i in range(spec.d):
            for s in (1, -1):
                v = [0] * spec.d
                v[i] = s
                gens.append(tuple(v))
        return tuple(gens)
    if spec.kind == HEISENBERG:
        return ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0))
    if spec.kind == INFINITE_DIHEDRAL:
        return ("a", "b")
    letters = FREE_LETTERS[: spec.rank]
    return tuple(letters) + tuple(letters.upper())


def sort_key(spec: GroupSpec, x: Element):
    if isinstance(x, str):
        return (len(x), x)
    return tuple(x)


# -- validation and encodings ------------------------------------------------

def check_element(spec: GroupSpec, x) -> Element:
    """Return the canonical encoding of ``x`` or raise MalformedElement."""
    if spec.kind in (INT_LATTICE, HEISENBERG):
        if isinstance(x, str):
            raise MalformedElement(f"expected integer vector, got {x!r}")
        try:
            t = tuple(x)
        except TypeError:
            raise MalformedElement(f"expected integer vector, got {x!r}") from None
        size = spec.d if spec.kind == INT_LATTICE else 3
        if len(t) != size:
            raise MalformedElement(f"expected length {size}, got {len(t)}")
        out = []
        for v in t:
            if isinstance(v, (bool, np.bool_)) or not isinstance(v, (int, np.integer)):
                if isinstance(v, float) and v.is_integer():
                    v = int(v)
                else:
                    raise MalformedElement(f"non-integer coordinate {v!r}")
            out.append(int(v))
        return tuple(out)
    if not isinstance(x, str):
        raise MalformedElement(f"expected a word, got {x!r}")
    if spec.kind == INFINITE_DIHEDRAL:
        if any(c not in "ab" for c in x):
            raise MalformedElement(f"bad dihedral word {x!r}")
        if any(x[i] == x[i + 1] for i in range(len(x) - 1)):
            raise MalformedElement(f"dihedral word {x!r} is not reduced")
        return x
    letters = FREE_LETTERS[: spec.rank]
    alphabet = letters + letters.upper()
    if any(c not in alphabet for c in x):
        raise MalformedElement(f"bad free-group word {x!r}")
    if any(x[i] == x[i + 1].swapcase() for i in range(len(x) - 1)):
        raise MalformedElement(f"free-group word {x!r} is not reduced")
    return x


def element_to_json(spec: GroupSpec, x: Element):
    return x if isinstance(x, str) else list(x)


def element_from_json(spec: GroupSpec, obj) -> Element:
    return check_element(spec, obj)


def element_key(x: Element) -> str:
    """String key used for JSON maps (``"1,0"`` or the word itself)."""
    if isinstance(x, str):
        return x
    return ",".join(str(v) for v in x)


def element_from_key(spec: GroupSpec, key: str) -> Element:
    if spec.kind in (INT_LATTICE, HEISENBERG):
        key = key.strip().strip("[]()")
        parts = [p for p in key.split(",") if p.strip()]
        try:
            return check_element(spec, [int(p) for p in parts])
        except ValueError:
            raise MalformedElement(f"bad element key {key!r}") from None
    return check_element(spec, key)


# -- arithmetic ---------------------------------------------------------------

def identity(spec: GroupSpec) -> Element:
    if spec.kind == INT_LATTICE:
        return (0,) * spec.d
    if spec.kind == HEISENBERG:
        return (0, 0, 0)
    return ""


def _reduce_word(spec: GroupSpec, word: str) -> str:
    stack: list[str] = []
    dihedral = spec.kind == INFINITE_DIHEDRAL
    for c in word:
        if stack and (stack[-1] == c if dihedral else stack[-1] == c.swapcase()):
            stack.pop()
        else:
            stack.append(c)
    return "".join(stack)


def multiply(spec: GroupSpec, x: Element, y: Element) -> Element:
    if spec.kind == INT_LATTICE:
        if len(x) != spec.d or len(y) != spec.d:
            raise MalformedElement("dimension mismatch")
        return tuple(a + b for a, b in zip(x, y))
    if spec.kind == HEISENBERG:
        m, n, p = x
        m2, n2, p2 = y
        return (m + m2, n + n2, p + p2 + m * n2)
    if not isinstance(x, str) or not isinstance(y, str):
        raise MalformedElement("word groups need string elements")
    return _reduce_word(spec, x + y)


def inverse(spec: GroupSpec, x: Element) -> Element:
    if spec.kind == INT_LATTICE:
        return tuple(-a for a in x)
    if spec.kind == HEISENBERG:
        m, n, p = x
        return (-m, -n, m * n - p)
    if spec.kind == INFINITE_DIHEDRAL:
        return x[::-1]
    return x[::-1].swapcase()


def product(spec: GroupSpec, xs: Iterable[Element]) -> Element:
    out = identity(spec)
    for x in xs:
        out = multiply(spec, out, x)
    return out


def quotient(spec: GroupSpec, x: Element, y: Element) -> Element:
    """``x^{-1} y``, the label of the Cayley-graph edge from x to y."""
    return multiply(spec, inverse(spec, x), y)


def heisenberg_matrix(x: Element) -> np.ndarray:
    m, n, p = x
    return np.array([[1, m, p], [0, 1, n], [0, 0, 1]], dtype=object)


# -- word length ----------------------------------------------------------------

def word_length(spec: GroupSpec, x: Element, cap: int = DEFAULT_RADIUS_CAP) -> int:
    """Distance from the identity to ``x`` in the Cayley graph on the generators.

    Uses closed forms for the standard generators of Z^d (l1 norm) and of the
    word groups (reduced length, the Cayley graphs are trees); otherwise a
    breadth-first search that raises RadiusCapExceeded past ``cap``.
    """
    x = check_element(spec, x)
    if spec.has_standard_generators:
        if spec.kind == INT_LATTICE:
            length = sum(abs(v) for v in x)
        elif spec.kind in (INFINITE_DIHEDRAL, FREE_GROUP):
            length = len(x)
        else:
            length = None
        if length is not None:
            if length > cap:
                raise RadiusCapExceeded(f"word length {length} exceeds cap {cap}")
            return length
    e = identity(spec)
    if x == e:
        return 0
    seen = {e}
    frontier = [e]
    for r in range(1, cap + 1):
        nxt = []
        for g in frontier:
            for a in spec.generators:
                h = multiply(spec, g, a)
                if h in seen:
                    continue
                if h == x:
                    return r
                seen.add(h)
                nxt.append(h)
        frontier = nxt
    raise RadiusCapExceeded(f"{x!r} not reached within radius {cap}")


@functools.lru_cache(maxsize=64)
def ball_layers(spec: GroupSpec, radius: int) -> tuple:
    """Spheres S_0..S_radius, each sorted canonically."""
    e = identity(spec)
    layers = [(e,)]
    seen = {e}
    frontier = [e]
    for _ in range(radius):
        nxt = set()
        for g in frontier:
            for a in spec.generators:
                h = multiply(spec, g, a)
                if h not in seen:
                    nxt.add(h)
        seen |= nxt
        frontier = sorted(nxt, key=lambda z: sort_key(spec, z))
        layers.append(tuple(frontier))
    return tuple(layers)


@functools.lru_cache(maxsize=64)
def ball_set(spec: GroupSpec, radius: int) -> frozenset:
    return frozenset(g for layer in ball_layers(spec, radius) for g in layer)


# -- morphisms to the reals ---------------------------------------------------------

@dataclass(frozen=True)
class Morphism:
    """Group morphism into (R, +).

    For Z^d the coefficients are ``(a_1, ..., a_d)`` and ``g(x) = sum a_i x_i``;
    for the Heisenberg group they are ``(alpha, beta)`` and
    ``g(X_{m,n,p}) = alpha*m + beta*n``.
    """

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    def check(self, spec: GroupSpec) -> None:
        if spec.kind == INT_LATTICE and len(self.coeffs) == spec.d:
            return
        if spec.kind == HEISENBERG and len(self.coeffs) == 2:
            return
        raise IncompatibleKind(f"morphism with {len(self.coeffs)} coefficients "
                               f"does not apply to {spec.kind}")

    def exact(self, spec: GroupSpec, x: Element):
        """Value of g(x) in the coefficients' own arithmetic (exact for ints)."""
        self.check(spec)
        if spec.kind == INT_LATTICE:
            return sum(a * v for a, v in zip(self.coeffs, x))
        alpha, beta = self.coeffs
        return alpha * x[0] + beta * x[1]

    def to_json(self):
        return list(self.coeffs)


def morphism_eval(m: Morphism, spec: GroupSpec, x: Element) -> float:
    return float(m.exact(spec, check_element(spec, x)))


# -- symmetric sets ---------------------------------------------------------------

class SymmetricSet:
    """Base class for rule-defined symmetric sets (``e in S`` and ``S = S^-1``)."""

    rule = ""

    def contains(self, spec: GroupSpec, x: Element) -> bool:
        raise NotImplementedError

    def check(self, spec: GroupSpec) -> None:
        """Raise IncompatibleKind if the rule cannot be used with ``spec``."""

    def contains_array(self, spec: GroupSpec, xs: np.ndarray):
        """Vectorised membership for integer-encoded groups, or None if unsupported."""
        return None

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class WholeGroup(SymmetricSet):
    rule = "all"

    def contains(self, spec, x):
        return True

    def contains_array(self, spec, xs):
        return np.ones(len(xs), dtype=bool)

    def to_json(self):
        return {"rule": self.rule}


@dataclass(frozen=True)
class Explicit(SymmetricSet):
    elements: frozenset

    rule = "explicit"

    def __init__(self, elements):
        object.__setattr__(self, "elements", frozenset(elements))

    def check(self, spec):
        elems = {check_element(spec, x) for x in self.elements}
        if elems != set(self.elements):
            raise MalformedElement("explicit set elements are not canonical")
        if identity(spec) not in elems:
            raise ValueError("symmetric set must contain the identity")
        for x in elems:
            if inverse(spec, x) not in elems:
                raise ValueError(f"set is not symmetric: inverse of {x!r} missing")

    def contains(self, spec, x):
        return x in self.elements

    def to_json(self):
        spec_free = sorted(self.elements, key=lambda z: (len(z), z) if isinstance(z, str) else z)
        return {"rule": self.rule,
                "elements": [z if isinstance(z, str) else list(z) for z in spec_free]}


@dataclass(frozen=True)
class Strip(SymmetricSet):
    """``{x : |g(x)| < bound}`` for a morphism g into R."""

    morphism: Morphism
    bound: float

    rule = "strip"

    def check(self, spec):
        self.morphism.check(spec)
        if not self.bound > 0:
            raise ValueError("strip bound must be positive")

    def contains(self, spec, x):
        return abs(self.morphism.exact(spec, x)) < self.bound

    def contains_array(self, spec, xs):
        c = np.asarray(self.morphism.coeffs)
        vals = xs[:, : len(c)] @ c if spec.kind == INT_LATTICE else xs[:, :2] @ c
        return np.abs(vals) < self.bound

    def to_json(self):
        return {"rule": self.rule, "morphism": self.morphism.to_json(), "bound": self.bound}


@dataclass(frozen=True)
class ExcludedPairs(SymmetricSet):
    """``base`` with the pairs ``{x, x^-1}`` for each excluded x removed."""

    base: SymmetricSet
    excluded: frozenset

    rule = "excluded_pairs"

    def __init__(self, base, excluded):
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "excluded", frozenset(excluded))

    def check(self, spec):
        self.base.check(spec)
        for x in self.excluded:
            check_element(spec, x)
        if identity(spec) in self.excluded:
            raise ValueError("the identity cannot be excluded")

    def contains(self, spec, x):
        if x in self.excluded or inverse(spec, x) in self.excluded:
            return False
        return self.base.contains(spec, x)

    def contains_array(self, spec, xs):
        base = self.base.contains_array(spec, xs)
        if base is None:
            return None
        out = base.copy()
        for x in self.excluded:
            for z in (x, inverse(spec, x)):
                out &= ~np.all(xs == np.asarray(z), axis=1)
        return out

    def to_json(self):
        ex = sorted(self.excluded, key=lambda z: (len(z), z) if isinstance(z, str) else z)
        return {"rule": self.rule, "base": self.base.to_json(),
                "excluded": [z if isinstance(z, str) else list(z) for z in ex]}


@dataclass(frozen=True)
class Cross(SymmetricSet):
    """Points (k, 0) with |k| <= m and (0, l) with |l| <= n in Z^2."""

    m: int
    n: int

    rule = "cross"

    def check(self, spec):
        if spec.kind != INT_LATTICE or spec.d != 2:
            raise IncompatibleKind("cross sets live in Z^2")

    def contains(self, spec, x):
        k, l = x
        return (l == 0 and abs(k) <= self.m) or (k == 0 and abs(l) <= self.n)

    def contains_array(self, spec, xs):
        k, l = xs[:, 0], xs[:, 1]
        return ((l == 0) & (np.abs(k) <= self.m)) | ((k == 0) & (np.abs(l) <= self.n))

    def points(self) -> list:
        pts = [(k, 0) for k in range(-self.m, self.m + 1)]
        pts += [(0, l) for l in range(-self.n, self.n + 1) if l != 0]
        return pts

    def to_json(self):
        return {"rule": self.rule, "m": self.m, "n": self.n}


@dataclass(frozen=True)
class LengthBall(SymmetricSet):
    """Elements of word length at most n."""

    n: int

    rule = "length_ball"

    def contains(self, spec, x):
        if spec.has_standard_generators and spec.kind != HEISENBERG:
            return word_length(spec, x, cap=max(DEFAULT_RADIUS_CAP, self.n + 1)) <= self.n
        return x in ball_set(spec, self.n)

    def contains_array(self, spec, xs):
        if spec.kind == INT_LATTICE and spec.has_standard_generators:
            return np.abs(xs).sum(axis=1) <= self.n
        return None

    def to_json(self):
        return {"rule": self.rule, "n": self.n}


def set_contains(S: SymmetricSet, spec: GroupSpec, x) -> bool:
    S.check(spec)
    return bool(S.contains(spec, check_element(spec, x)))


def set_from_json(spec: GroupSpec, obj: dict) -> SymmetricSet:
    rule = obj["rule"]
    if rule == "all":
        S = WholeGroup()
    elif rule == "explicit":
        S = Explicit(element_from_json(spec, z) for z in obj["elements"])
    elif rule == "strip":
        S = Strip(Morphism(tuple(obj["morphism"])), obj["bound"])
    elif rule == "excluded_pairs":
        S = ExcludedPairs(set_from_json(spec, obj["base"]),
                          [element_from_json(spec, z) for z in obj["excluded"]])
    elif rule == "cross":
        S = Cross(int(obj["m"]), int(obj["n"]))
    elif rule == "length_ball":
        S = LengthBall(int(obj["n"]))
    else:
        raise ValueError(f"unknown set rule {rule!r}")
    S.check(spec)
    return S


def elements_to_array(spec: GroupSpec, elems: Sequence[Element]) -> np.ndarray:
    """Stack integer-encoded elements into an (n, k) int64 array."""
    if spec.kind not in (INT_LATTICE, HEISENBERG):
        raise IncompatibleKind("only integer-encoded groups have array form")
    width = spec.d if spec.kind == INT_LATTICE else 3
    return np.asarray(elems, dtype=np.int64).reshape(len(elems), width)


def quotients_array(spec: GroupSpec, x: Element, ys: np.ndarray) -> np.ndarray:
    """Rows ``x^{-1} y`` for each row y of ``ys`` (integer groups only)."""
    if spec.kind == INT_LATTICE:
        return ys - np.asarray(x, dtype=np.int64)
    m, n, p = x
    out = np.empty_like(ys)
    out[:, 0] = ys[:, 0] - m
    out[:, 1] = ys[:, 1] - n
    # (-m, -n, mn - p) * (m2, n2, p2) = (m2 - m, n2 - n, mn - p + p2 - m*n2)
    out[:, 2] = m * n - p + ys[:, 2] - m * ys[:, 1]
    return out

