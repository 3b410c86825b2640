"""p-local spaces: spheres, sphere bundles, products and named atoms.

Only the shape that matters for exponent bounds is modelled. Expressions use
a small ASCII grammar::

    space := term (("x" | "*") term)*
    term  := "S^" ODD | "SU(" N ")" | "Sp(" N ")" | "Spin(" N ")"
           | "G2" | "F4" | "E6" | "E7" | "E8"
           | "B(" ODD ("," ODD)+ ")" | "B2(3,11)" | "K3" | "K5" | "W"

Whitespace is ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .arith import OddPrime

CLASSICAL = ("SU", "Sp", "Spin")
EXCEPTIONAL = ("G2", "F4", "E6", "E7", "E8")
EXOTIC = ("K3", "K5", "W")

# Exotic atoms are p-local spaces for one specific prime.
EXOTIC_PRIME = {"K3": 3, "K5": 5, "W": 5}


class SpaceError(ValueError):
    """Malformed space or space/prime mismatch."""


class ParseError(SpaceError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class PrimeMismatch(SpaceError):
    pass


def _check_odd_dim(d: int) -> None:
    if isinstance(d, bool) or not isinstance(d, int):
        raise SpaceError(f"sphere dimension must be an int, got {d!r}")
    if d < 3 or d % 2 == 0:
        raise SpaceError(f"sphere dimension must be odd and >= 3, got {d}")


@dataclass(frozen=True)
class Sphere:
    dim: int

    def __post_init__(self):
        _check_odd_dim(self.dim)

    def __str__(self):
        return render_space(self)


@dataclass(frozen=True)
class Bundle:
    """Iterated sphere bundle B(d1, ..., dk) with attaching map alpha_i."""

    dims: tuple[int, ...]
    attaching: int = 1

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(self.dims))
        if len(self.dims) < 2:
            raise SpaceError("a bundle needs at least two sphere dimensions")
        for d in self.dims:
            _check_odd_dim(d)
        for a, b in zip(self.dims, self.dims[1:]):
            if b <= a:
                raise SpaceError(f"bundle dimensions must increase strictly: {self.dims}")
        if self.attaching < 1:
            raise SpaceError(f"attaching index must be positive, got {self.attaching}")

    @property
    def top(self) -> int:
        return self.dims[-1]

    def __str__(self):
        return render_space(self)


@dataclass(frozen=True)
class Product:
    factors: tuple["Space", ...]

    def __post_init__(self):
        flat: list[Space] = []
        for f in self.factors:
            if isinstance(f, Product):
                flat.extend(f.factors)
            else:
                flat.append(f)
        if len(flat) < 2:
            raise SpaceError("a product needs at least two factors; use product() to collapse")
        object.__setattr__(self, "factors", tuple(flat))

    def __str__(self):
        return render_space(self)


@dataclass(frozen=True)
class GroupAtom:
    series: str
    n: int | None = None

    def __post_init__(self):
        if self.series in CLASSICAL:
            least = 3 if self.series == "Spin" else 1
            if not isinstance(self.n, int) or self.n < least:
                raise SpaceError(f"{self.series}(n) requires n >= {least}, got {self.n}")
        elif self.series in EXCEPTIONAL:
            if self.n is not None:
                raise SpaceError(f"{self.series} takes no rank argument")
        else:
            raise SpaceError(f"unknown group series {self.series!r}")

    def __str__(self):
        return render_space(self)


@dataclass(frozen=True)
class ExoticAtom:
    name: str

    def __post_init__(self):
        if self.name not in EXOTIC:
            raise SpaceError(f"unknown exotic space {self.name!r}")

    def __str__(self):
        return render_space(self)


Space = Union[Sphere, Bundle, Product, GroupAtom, ExoticAtom]


def product(*factors: Space) -> Space:
    """Product of the factors, collapsing the one-factor case."""
    flat: list[Space] = []
    for f in factors:
        flat.extend(f.factors if isinstance(f, Product) else [f])
    if not flat:
        raise SpaceError("empty product")
    return flat[0] if len(flat) == 1 else Product(tuple(flat))


def render_space(s: Space) -> str:
    if isinstance(s, Sphere):
        return f"S^{s.dim}"
    if isinstance(s, Bundle):
        head = "B" if s.attaching == 1 else f"B{s.attaching}"
        return f"{head}({','.join(map(str, s.dims))})"
    if isinstance(s, Product):
        return " x ".join(render_space(f) for f in s.factors)
    if isinstance(s, GroupAtom):
        return s.series if s.n is None else f"{s.series}({s.n})"
    if isinstance(s, ExoticAtom):
        return s.name
    raise TypeError(f"not a space: {s!r}")


class _Parser:
    def __init__(self, text: str):
        # keep original offsets so errors point into the user's string
        self.chars = [(c, i) for i, c in enumerate(text) if not c.isspace()]
        self.src = "".join(c for c, _ in self.chars)
        self.i = 0
        self.end = len(text)

    def pos(self, i: int | None = None) -> int:
        i = self.i if i is None else i
        return self.chars[i][1] if i < len(self.chars) else self.end

    def fail(self, msg: str, i: int | None = None):
        raise ParseError(msg, self.pos(i))

    def peek(self, lit: str) -> bool:
        return self.src.startswith(lit, self.i)

    def take(self, lit: str) -> bool:
        if self.peek(lit):
            self.i += len(lit)
            return True
        return False

    def expect(self, lit: str) -> None:
        if not self.take(lit):
            self.fail(f"expected {lit!r}")

    def number(self) -> int:
        start = self.i
        while self.i < len(self.src) and self.src[self.i].isdigit():
            self.i += 1
        if start == self.i:
            self.fail("expected a number")
        return int(self.src[start:self.i])

    def odd(self) -> int:
        start = self.i
        d = self.number()
        if d < 3 or d % 2 == 0:
            self.fail(f"sphere dimension must be odd and >= 3, got {d}", start)
        return d

    def space(self) -> Space:
        if not self.src:
            self.fail("empty expression")
        terms = [self.term()]
        while self.take("x") or self.take("*"):
            terms.append(self.term())
        if self.i != len(self.src):
            self.fail(f"unexpected {self.src[self.i]!r}")
        return product(*terms)

    def term(self) -> Space:
        start = self.i
        if self.take("S^"):
            return Sphere(self.odd())
        for series in ("SU", "Spin", "Sp"):
            if self.take(series + "("):
                n = self.number()
                self.expect(")")
                try:
                    return GroupAtom(series, n)
                except SpaceError as e:
                    self.fail(str(e), start)
        for name in EXCEPTIONAL:
            if self.take(name):
                return GroupAtom(name)
        if self.take("B2("):
            dims = self.dim_list(start)
            if dims != (3, 11):
                self.fail("only B2(3,11) is modelled for attaching map alpha_2", start)
            return Bundle(dims, attaching=2)
        if self.take("B("):
            return Bundle(self.dim_list(start))
        for name in EXOTIC:
            if self.take(name):
                return ExoticAtom(name)
        self.fail("expected a space term")

    def dim_list(self, start: int) -> tuple[int, ...]:
        dims = [self.odd()]
        while self.take(","):
            dims.append(self.odd())
        self.expect(")")
        if len(dims) < 2:
            self.fail("a bundle needs at least two sphere dimensions", start)
        if any(b <= a for a, b in zip(dims, dims[1:])):
            self.fail(f"bundle dimensions must increase strictly: {tuple(dims)}", start)
        return tuple(dims)


def parse_space(text: str) -> Space:
    return _Parser(text).space()


def validate_for_prime(s: Space, p: OddPrime | int) -> Space:
    """Check that ``s`` makes sense as a ``p``-local space; returns ``s``.

    Bundle gaps must be positive multiples of q = 2p - 2, and the alpha_2
    bundle needs its single gap to equal 2q. Exotic atoms only exist at their
    own prime.
    """
    p = OddPrime.of(p)
    if isinstance(s, Product):
        for f in s.factors:
            validate_for_prime(f, p)
    elif isinstance(s, Bundle):
        for a, b in zip(s.dims, s.dims[1:]):
            if (b - a) % p.q:
                raise PrimeMismatch(
                    f"{render_space(s)}: gap {b - a} is not a multiple of q={p.q} at p={p}")
        if s.attaching > 1 and any(b - a != s.attaching * p.q for a, b in zip(s.dims, s.dims[1:])):
            raise PrimeMismatch(
                f"{render_space(s)}: alpha_{s.attaching} needs gap {s.attaching * p.q} at p={p}")
    elif isinstance(s, ExoticAtom):
        if EXOTIC_PRIME[s.name] != p.p:
            raise PrimeMismatch(f"{s.name} is a {EXOTIC_PRIME[s.name]}-local space, not {p}-local")
    return s


def sphere_dims(s: Space) -> list[int]:
    """Sphere dimensions of a sphere/bundle/product of those, in order."""
    if isinstance(s, Sphere):
        return [s.dim]
    if isinstance(s, Bundle):
        return list(s.dims)
    if isinstance(s, Product):
        return [d for f in s.factors for d in sphere_dims(f)]
    raise SpaceError(f"{render_space(s)} is not built from spheres")
