"""Orbit-equivalence maps between crossed products of finite measured actions.

A :class:`FiniteAction` is a finite group given by the permutations it
induces on a weighted point set.  For an orbit equivalence Psi: X -> Y the
sets

    M(d, g) = {y : t2(d) y = Psi t1(g) Psi^-1 y}

cut Y into pieces on which g "looks like" d, and

    kappa(g) = sum_d d . 1_{M(d, g)}

is a unitary of the second crossed product.  ``kappa_map`` extends this to
sum a_g g -> sum (a_g o Psi^-1) kappa(g); ``lambda_map`` is the same
construction in the other direction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import exact_rank
from .scalar import ONE, ZERO, Cyclo

__all__ = [
    "FiniteAction",
    "FiniteCrossedElement",
    "odometer_action",
    "flip_action",
    "orbits",
    "is_free",
    "check_orbit_equivalence",
    "fm_partition",
    "kappa_generator",
    "kappa_map",
    "lambda_map",
    "verify_orbit_equivalence_maps",
    "FMReport",
]


class FiniteAction:
    """A finite group acting by weight-preserving permutations.

    ``elements`` maps a name to a permutation (tuple of point indices);
    its order is the enumeration order used for tie-breaking.
    """

    def __init__(self, points, elements: dict, weights=None):
        self.points = tuple(points)
        size = len(self.points)
        if weights is None:
            weights = [Fraction(1, size)] * size
        self.weights = tuple(Fraction(w) for w in weights)
        self.names = list(elements)
        self.perms = [tuple(elements[name]) for name in self.names]
        self._index = {p: i for i, p in enumerate(self.perms)}
        self._validate()
        ident = tuple(range(size))
        self.identity = self._index[ident]
        self._inv = [self._index[_invert(p)] for p in self.perms]

    def _validate(self):
        size = len(self.points)
        if len(self.weights) != size or sum(self.weights) != 1 or any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive and sum to 1")
        if len(self._index) != len(self.perms):
            raise ValueError("group elements must act by distinct permutations")
        for name, p in zip(self.names, self.perms):
            if sorted(p) != list(range(size)):
                raise ValueError(f"element {name!r} is not a permutation of the points")
            if any(self.weights[p[x]] != self.weights[x] for x in range(size)):
                raise ValueError(f"element {name!r} does not preserve the weights")
        if tuple(range(size)) not in self._index:
            raise ValueError("the identity permutation is missing")
        for p in self.perms:
            for q in self.perms:
                if _compose(p, q) not in self._index:
                    raise ValueError("elements are not closed under composition")

    @classmethod
    def from_generators(cls, points, generators: dict, weights=None) -> "FiniteAction":
        """Close the generating permutations under composition (BFS by word length)."""
        size = len(points)
        ident = tuple(range(size))
        elements = {"e": ident}
        seen = {ident}
        frontier = [("e", ident)]
        gens = [(g, tuple(p)) for g, p in generators.items()]
        while frontier:
            nxt = []
            for name, p in frontier:
                for g, q in gens:
                    r = _compose(q, p)
                    if r not in seen:
                        seen.add(r)
                        rname = g if name == "e" else f"{g}*{name}"
                        elements[rname] = r
                        nxt.append((rname, r))
            frontier = nxt
        return cls(points, elements, weights)

    @classmethod
    def from_json(cls, data) -> "FiniteAction":
        """``{"points": [...], "weights": [...]?, "generators": {name: perm}}``.

        Permutations list images either as point indices or as point labels.
        """
        if isinstance(data, str):
            data = json.loads(data)
        points = list(data["points"])
        label = {p: i for i, p in enumerate(points)}

        def perm(images):
            if all(isinstance(v, int) and not isinstance(v, bool) for v in images) and not all(
                v in label for v in images
            ):
                return [int(v) for v in images]
            return [label[v] for v in images]

        weights = data.get("weights")
        if weights is not None:
            weights = [Fraction(w) for w in weights]
        if "elements" in data:
            return cls(points, {k: perm(v) for k, v in data["elements"].items()}, weights)
        return cls.from_generators(points, {k: perm(v) for k, v in data["generators"].items()}, weights)

    def to_json(self) -> dict:
        return {
            "points": list(self.points),
            "weights": [str(w) for w in self.weights],
            "elements": {n: list(p) for n, p in zip(self.names, self.perms)},
        }

    # -- group structure ---------------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.perms)

    @property
    def size(self) -> int:
        return len(self.points)

    def act(self, g: int, x: int) -> int:
        return self.perms[g][x]

    def mul(self, g: int, h: int) -> int:
        """Index of g h (apply h first)."""
        return self._index[_compose(self.perms[g], self.perms[h])]

    def inv(self, g: int) -> int:
        return self._inv[g]

    def element(self, name: str) -> int:
        return self.names.index(name)

    def __repr__(self):
        return f"FiniteAction(points={self.size}, order={self.order})"


def _compose(p, q):
    """p o q as permutations (q first)."""
    return tuple(p[i] for i in q)


def _invert(p):
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def odometer_action(m: int) -> FiniteAction:
    """Z/2^m adding 1 with carry on binary words of length m (x as an integer)."""
    size = 1 << m
    return FiniteAction(range(size), {f"+{j}": tuple((x + j) % size for x in range(size)) for j in range(size)})


def flip_action(m: int) -> FiniteAction:
    """(Z/2)^m flipping coordinates: mask c acts by x -> x xor c."""
    size = 1 << m
    return FiniteAction(
        range(size),
        {f"flip{c:0{max(m, 1)}b}": tuple(x ^ c for x in range(size)) for c in range(size)},
    )


def orbits(action: FiniteAction) -> list[frozenset]:
    parent = list(range(action.size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in action.perms:
        for x, y in enumerate(p):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
    groups: dict = {}
    for x in range(action.size):
        groups.setdefault(find(x), set()).add(x)
    return sorted((frozenset(s) for s in groups.values()), key=min)


def is_free(action: FiniteAction) -> bool:
    """Only the identity fixes a point.  Without this, trace preservation can fail."""
    return all(
        action.perms[g][x] != x for g in range(action.order) if g != action.identity for x in range(action.size)
    )


def _check_psi(a1, a2, psi):
    psi = tuple(psi)
    if sorted(psi) != list(range(a2.size)) or len(psi) != a1.size:
        raise ValueError("Psi must be a bijection between the point sets")
    return psi


def check_orbit_equivalence(a1: FiniteAction, a2: FiniteAction, psi) -> bool:
    """Psi is weight-preserving and carries orbits of a1 exactly onto orbits of a2."""
    try:
        psi = _check_psi(a1, a2, psi)
    except ValueError:
        return False
    if any(a1.weights[x] != a2.weights[psi[x]] for x in range(a1.size)):
        return False
    images2 = [{a2.act(d, y) for d in range(a2.order)} for y in range(a2.size)]
    for x in range(a1.size):
        if any(psi[a1.act(g, x)] not in images2[psi[x]] for g in range(a1.order)):
            return False
    inv = _invert(psi)
    images1 = [{a1.act(g, x) for g in range(a1.order)} for x in range(a1.size)]
    for y in range(a2.size):
        if any(inv[a2.act(d, y)] not in images1[inv[y]] for d in range(a2.order)):
            return False
    return True


def fm_partition(a1: FiniteAction, a2: FiniteAction, psi, g: int) -> dict:
    """{d: M(d, g)} over a2's elements; each y goes to the first matching d."""
    psi = _check_psi(a1, a2, psi)
    inv = _invert(psi)
    out = {d: set() for d in range(a2.order)}
    for y in range(a2.size):
        target = psi[a1.act(g, inv[y])]
        for d in range(a2.order):
            if a2.act(d, y) == target:
                out[d].add(y)
                break
        else:
            raise ValueError(f"no element of the second group matches at point {y}")
    return {d: frozenset(s) for d, s in out.items()}


class FiniteCrossedElement:
    """Finite sum  sum_g a_g . g  with a_g: X -> Cyclo."""

    __slots__ = ("action", "terms")

    def __init__(self, action: FiniteAction, terms=None):
        self.action = action
        clean = {}
        for g, vec in (terms or {}).items():
            vec = tuple(Cyclo(v) for v in vec)
            if len(vec) != action.size:
                raise ValueError("coefficient vector has the wrong length")
            if any(not v.is_zero for v in vec):
                clean[g] = vec
        self.terms = clean

    @classmethod
    def _wrap(cls, action, terms):
        obj = object.__new__(cls)
        obj.action = action
        obj.terms = terms
        return obj

    @classmethod
    def basis(cls, action, x: int, g: int) -> "FiniteCrossedElement":
        """1_{x} . g"""
        vec = [ZERO] * action.size
        vec[x] = ONE
        return cls._wrap(action, {g: tuple(vec)})

    @classmethod
    def function(cls, action, values) -> "FiniteCrossedElement":
        return cls(action, {action.identity: values})

    @classmethod
    def group(cls, action, g: int) -> "FiniteCrossedElement":
        return cls._wrap(action, {g: (ONE,) * action.size})

    @classmethod
    def one(cls, action):
        return cls.group(action, action.identity)

    def _same(self, other):
        if not isinstance(other, FiniteCrossedElement) or other.action is not self.action:
            raise TypeError("elements of different crossed products")

    def __add__(self, other):
        self._same(other)
        out = dict(self.terms)
        for g, v in other.terms.items():
            prev = out.get(g)
            out[g] = v if prev is None else tuple(a + b for a, b in zip(prev, v))
        return FiniteCrossedElement._wrap(
            self.action, {g: v for g, v in out.items() if any(not c.is_zero for c in v)}
        )

    def __neg__(self):
        return FiniteCrossedElement._wrap(self.action, {g: tuple(-c for c in v) for g, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "FiniteCrossedElement":
        c = Cyclo(c)
        if c.is_zero:
            return FiniteCrossedElement._wrap(self.action, {})
        return FiniteCrossedElement._wrap(self.action, {g: tuple(c * a for a in v) for g, v in self.terms.items()})

    def _shift(self, g, vec):
        """g^(f)(x) = f(t(g^-1) x)."""
        back = self.action.perms[self.action.inv(g)]
        return [vec[back[x]] for x in range(self.action.size)]

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Cyclo)):
            return self.scale(other)
        self._same(other)
        act = self.action
        out: dict = {}
        for g, a in self.terms.items():
            for h, b in other.terms.items():
                moved = self._shift(g, b)
                prod = [x * y for x, y in zip(a, moved)]
                gh = act.mul(g, h)
                prev = out.get(gh)
                out[gh] = prod if prev is None else [x + y for x, y in zip(prev, prod)]
        return FiniteCrossedElement._wrap(
            act, {g: tuple(v) for g, v in out.items() if any(not c.is_zero for c in v)}
        )

    __rmul__ = scale

    def star(self) -> "FiniteCrossedElement":
        """(a g)* = g^-1 conj(a) = (g^-1)^(conj a) . g^-1"""
        out = {}
        for g, a in self.terms.items():
            gi = self.action.inv(g)
            out[gi] = tuple(self._shift(gi, [c.conj() for c in a]))
        return FiniteCrossedElement._wrap(self.action, out)

    def trace(self) -> Cyclo:
        a = self.terms.get(self.action.identity)
        if a is None:
            return ZERO
        total = ZERO
        for w, c in zip(self.action.weights, a):
            total = total + c * w
        return total

    def __eq__(self, other):
        if not isinstance(other, FiniteCrossedElement):
            return NotImplemented
        return self.action is other.action and self.terms == other.terms

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        names = self.action.names
        return "FiniteCrossedElement(" + ", ".join(
            f"{names[g]}: [{', '.join(map(str, v))}]" for g, v in sorted(self.terms.items())
        ) + ")"

    # -- left-regular matrix representation -------------------------------------
    def matrix_entries(self) -> list:
        """Sparse entries of L(self) on basis e_{d, x}, index d * |X| + x.

        L(a g) e_{d, x} = a(t(g) x) e_{g d, t(g) x}.
        """
        act = self.action
        size = act.size
        out: dict = {}
        for g, a in self.terms.items():
            p = act.perms[g]
            for d in range(act.order):
                gd = act.mul(g, d)
                for x in range(size):
                    y = p[x]
                    c = a[y]
                    if not c.is_zero:
                        key = (gd * size + y, d * size + x)
                        prev = out.get(key)
                        out[key] = c if prev is None else prev + c
        return [(i, j, v) for (i, j), v in sorted(out.items()) if not v.is_zero]

    def rank(self) -> Fraction:
        dim = self.action.size * self.action.order
        return Fraction(exact_rank(self.matrix_entries(), dim, dim), dim)


def kappa_generator(a1, a2, psi, g: int) -> FiniteCrossedElement:
    """kappa(g) = sum_d d . 1_{M(d, g)} = sum_d d^(1_M(d, g)) . d"""
    parts = fm_partition(a1, a2, psi, g)
    terms = {}
    for d, M in parts.items():
        if M:
            moved = {a2.act(d, y) for y in M}
            terms[d] = tuple(ONE if y in moved else ZERO for y in range(a2.size))
    return FiniteCrossedElement._wrap(a2, terms)


def kappa_map(a1, a2, psi, elem: FiniteCrossedElement) -> FiniteCrossedElement:
    """sum a_g g -> sum (a_g o Psi^-1) kappa(g)."""
    psi = _check_psi(a1, a2, psi)
    inv = _invert(psi)
    out = FiniteCrossedElement._wrap(a2, {})
    cache: dict = {}
    for g, a in elem.terms.items():
        if g not in cache:
            cache[g] = kappa_generator(a1, a2, psi, g)
        f = FiniteCrossedElement.function(a2, [a[inv[y]] for y in range(a2.size)])
        out = out + f * cache[g]
    return out


def lambda_map(a1, a2, psi, elem: FiniteCrossedElement) -> FiniteCrossedElement:
    """The same construction from a2 back to a1 through Psi^-1."""
    return kappa_map(a2, a1, _invert(_check_psi(a1, a2, psi)), elem)


@dataclass
class FMReport:
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, name: str, passed: bool, detail=None):
        self.checks[name] = self.checks.get(name, 0) + 1
        if not passed:
            self.failures.append({"check": name, "detail": detail})

    def to_json(self) -> dict:
        return {"checks": dict(sorted(self.checks.items())), "failures": self.failures, "ok": self.ok}


def _basis(action):
    return [FiniteCrossedElement.basis(action, x, g) for g in range(action.order) for x in range(action.size)]


def _coefficient_matrix(images, action):
    entries = []
    for col, e in enumerate(images):
        for g, vec in e.terms.items():
            for x, c in enumerate(vec):
                if not c.is_zero:
                    entries.append((g * action.size + x, col, c))
    return entries


def verify_orbit_equivalence_maps(a1: FiniteAction, a2: FiniteAction, psi, rank_samples: int = 8) -> FMReport:
    """Exhaustive exact checks of kappa' and lambda' on the full bases."""
    report = FMReport()
    psi = tuple(psi)
    report.record("orbit_equivalence", check_orbit_equivalence(a1, a2, psi))
    if not report.ok:
        return report
    def forward(e):
        return kappa_map(a1, a2, psi, e)

    def backward(e):
        return lambda_map(a1, a2, psi, e)

    for src, dst, f, b, label in ((a1, a2, forward, backward, "kappa"), (a2, a1, backward, forward, "lambda")):
        basis = _basis(src)
        images = [f(e) for e in basis]
        for g in range(src.order):
            u = f(FiniteCrossedElement.group(src, g))
            report.record(f"{label}_unitary", u.star() * u == FiniteCrossedElement.one(dst), src.names[g])
        report.record(f"{label}_unit", f(FiniteCrossedElement.one(src)) == FiniteCrossedElement.one(dst))
        for i, e in enumerate(basis):
            report.record(f"{label}_trace", images[i].trace() == e.trace(), i)
            report.record(f"{label}_star", f(e.star()) == images[i].star(), i)
            report.record(f"{label}_inverse", b(images[i]) == e, i)
            for j, e2 in enumerate(basis):
                report.record(f"{label}_multiplicative", f(e * e2) == images[i] * images[j], (i, j))
        dim = len(basis)
        inj = exact_rank(_coefficient_matrix(images, dst), dst.size * dst.order, dim)
        report.record(f"{label}_injective", inj == dim, inj)
        step = max(1, dim // max(1, rank_samples))
        for i in range(0, dim, step):
            e = basis[i] + basis[(i * 7 + 3) % dim]
            report.record(f"{label}_rank", f(e).rank() == e.rank(), i)
    return report
