"""p-local product decompositions of SU(n), Sp(n) and Spin(n)."""

from __future__ import annotations

from .arith import OddPrime
from .spaces import Bundle, GroupAtom, Space, SpaceError, Sphere, product


def mnt_classes(p: OddPrime | int, n: int) -> list[list[int]]:
    """Indices 2..n grouped by residue mod p-1, ordered by smallest index."""
    p = OddPrime.of(p)
    classes: dict[int, list[int]] = {}
    for m in range(2, n + 1):
        classes.setdefault(m % (p.p - 1), []).append(m)
    return sorted(classes.values(), key=lambda c: c[0])


def _class_space(ms: list[int]) -> Space:
    dims = tuple(2 * m - 1 for m in ms)
    return Sphere(dims[0]) if len(dims) == 1 else Bundle(dims)


def mnt_su_factors(p: OddPrime | int, n: int) -> list[Space]:
    """Factors of SU(n) localized at p, one per residue class of sphere dimensions."""
    if n < 1:
        raise ValueError(f"SU(n) needs n >= 1, got {n}")
    return [_class_space(ms) for ms in mnt_classes(p, n)]


def su_prime_factor(p: OddPrime | int, n: int) -> Space:
    """The factor of SU(n) that contains the top sphere S^(2n-1)."""
    if n < 2:
        raise ValueError(f"SU'(n) needs n >= 2, got {n}")
    p = OddPrime.of(p)
    ms = [m for m in range(2, n + 1) if (n - m) % (p.p - 1) == 0]
    return _class_space(ms)


def su_prime_index(p: OddPrime | int, dims: tuple[int, ...]) -> int | None:
    """If ``dims`` is exactly the sphere set of some SU'(n), return n."""
    p = OddPrime.of(p)
    if any(d % 2 == 0 for d in dims):
        return None
    first = (dims[0] + 1) // 2
    if not 2 <= first <= p.p:
        return None
    if any(b - a != p.q for a, b in zip(dims, dims[1:])):
        return None
    return (dims[-1] + 1) // 2


def decompose(s: Space, p: OddPrime | int) -> Space:
    """Split SU and Spin atoms into p-local products; other spaces pass through.

    Sp(n) has no splitting of its own and is returned unchanged.
    """
    p = OddPrime.of(p)
    if not isinstance(s, GroupAtom):
        return s
    if s.series == "SU":
        if s.n == 1:
            return s
        return product(*mnt_su_factors(p, s.n))
    if s.series == "Spin":
        if s.n < 3:
            raise SpaceError(f"Spin({s.n}) is not handled; need n >= 3")
        if s.n % 2 == 1:
            return GroupAtom("Sp", (s.n - 1) // 2)
        k = (s.n - 2) // 2
        return product(GroupAtom("Sp", k), Sphere(2 * k + 1))
    return s
