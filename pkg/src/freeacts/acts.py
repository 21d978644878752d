"""Free left S-acts F_n, their homomorphisms and semi-linear bijections.

An element of F_n is a pair (copy, elem) with copy in 1..n. Internally it
is packed to the integer ``(copy - 1) * |S| + elem``; ``s . (i, t) = (i, st)``.
A homomorphism is fixed by the images of the basis points (i, identity), and
hom-sets are listed in lexicographic order of those images, so the index of a
hom is its packed basis images read as digits in base ``m * |S|``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from typing import Sequence

from .errors import RankMismatch, TooLarge
from .monoid import FiniteMonoid, MonoidAutomorphism, units

DEFAULT_MAX_HOMSET = 50_000


@dataclass(frozen=True, order=True)
class ActElement:
    copy: int
    elem: int

    def to_dict(self) -> dict:
        return {"copy": self.copy, "elem": self.elem}

    @classmethod
    def from_dict(cls, data: dict) -> "ActElement":
        return cls(int(data["copy"]), int(data["elem"]))


def pack(x: ActElement, order: int) -> int:
    return (x.copy - 1) * order + x.elem


def unpack(p: int, order: int) -> ActElement:
    return ActElement(p // order + 1, p % order)


@dataclass(frozen=True)
class FreeAct:
    monoid: FiniteMonoid
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be >= 1")

    @property
    def size(self) -> int:
        return self.rank * self.monoid.order

    def elements(self) -> list:
        return [unpack(p, self.monoid.order) for p in range(self.size)]

    def basis(self) -> list:
        return [ActElement(i, 0) for i in range(1, self.rank + 1)]

    def act(self, s: int, x: ActElement) -> ActElement:
        return ActElement(x.copy, self.monoid.mul(s, x.elem))

    def contains(self, x: ActElement) -> bool:
        return 1 <= x.copy <= self.rank and 0 <= x.elem < self.monoid.order


@dataclass(frozen=True)
class ActHom:
    monoid: FiniteMonoid
    source_rank: int
    target_rank: int
    basis_images: tuple

    def __post_init__(self):
        if len(self.basis_images) != self.source_rank:
            raise RankMismatch(
                f"{len(self.basis_images)} basis images for source rank {self.source_rank}"
            )
        for b in self.basis_images:
            if not (1 <= b.copy <= self.target_rank and 0 <= b.elem < self.monoid.order):
                raise RankMismatch(f"basis image {b} is not in F_{self.target_rank}")

    def __call__(self, x: ActElement) -> ActElement:
        return apply_hom(self, x)

    def total_map(self) -> tuple:
        """Packed image of every packed element of the source."""
        order = self.monoid.order
        return tuple(pack(apply_hom(self, x), order) for x in FreeAct(self.monoid, self.source_rank).elements())

    def index(self) -> int:
        base = self.target_rank * self.monoid.order
        idx = 0
        for b in self.basis_images:
            idx = idx * base + pack(b, self.monoid.order)
        return idx

    def is_bijective(self) -> bool:
        if self.source_rank != self.target_rank:
            return False
        return len(set(self.total_map())) == self.source_rank * self.monoid.order

    def to_dict(self) -> dict:
        return {
            "source_rank": self.source_rank,
            "target_rank": self.target_rank,
            "basis_images": [b.to_dict() for b in self.basis_images],
        }

    @classmethod
    def from_dict(cls, data: dict, monoid: FiniteMonoid) -> "ActHom":
        return cls(
            monoid,
            int(data["source_rank"]),
            int(data["target_rank"]),
            tuple(ActElement.from_dict(b) for b in data["basis_images"]),
        )


def hom_from_index(monoid: FiniteMonoid, n: int, m: int, idx: int) -> ActHom:
    base = m * monoid.order
    digits = []
    for _ in range(n):
        idx, d = divmod(idx, base)
        digits.append(d)
    return ActHom(monoid, n, m, tuple(unpack(d, monoid.order) for d in reversed(digits)))


def apply_hom(f: ActHom, x: ActElement) -> ActElement:
    if not 1 <= x.copy <= f.source_rank or not 0 <= x.elem < f.monoid.order:
        raise RankMismatch(f"{x} is not an element of F_{f.source_rank}")
    b = f.basis_images[x.copy - 1]
    return ActElement(b.copy, f.monoid.mul(x.elem, b.elem))


def compose_homs(g: ActHom, f: ActHom) -> ActHom:
    """``g o f``: apply f first, then g."""
    if f.target_rank != g.source_rank:
        raise RankMismatch(f"cannot compose F_{f.source_rank}->F_{f.target_rank} with F_{g.source_rank}->F_{g.target_rank}")
    return ActHom(f.monoid, f.source_rank, g.target_rank, tuple(apply_hom(g, b) for b in f.basis_images))


def identity_hom(monoid: FiniteMonoid, n: int) -> ActHom:
    return ActHom(monoid, n, n, tuple(ActElement(i, 0) for i in range(1, n + 1)))


def right_translation(monoid: FiniteMonoid, s: int) -> ActHom:
    """The endomorphism t -> t s of F_1."""
    return ActHom(monoid, 1, 1, (ActElement(1, s),))


def homset_size(monoid: FiniteMonoid, n: int, m: int) -> int:
    return (m * monoid.order) ** n


def enumerate_homs(monoid: FiniteMonoid, n: int, m: int, max_homset: int = DEFAULT_MAX_HOMSET) -> list:
    size = homset_size(monoid, n, m)
    if size > max_homset:
        raise TooLarge(f"|Hom(F_{n}, F_{m})| = {size} exceeds budget {max_homset}")
    target = FreeAct(monoid, m).elements()
    return [ActHom(monoid, n, m, imgs) for imgs in product(target, repeat=n)]


def structural_morphisms(monoid: FiniteMonoid, n: int) -> tuple:
    """Canonical injections mu_1..mu_n : F_1 -> F_n and the codiagonal F_n -> F_1."""
    injections = [ActHom(monoid, 1, n, (ActElement(i, 0),)) for i in range(1, n + 1)]
    codiagonal = ActHom(monoid, n, 1, tuple(ActElement(1, 0) for _ in range(n)))
    return injections, codiagonal


def copairing(homs: Sequence[ActHom]) -> ActHom:
    """[h_1, ..., h_n] : F_n -> F_m from homs h_i : F_1 -> F_m."""
    m = homs[0].target_rank
    if any(h.source_rank != 1 or h.target_rank != m for h in homs):
        raise RankMismatch("copairing needs homs F_1 -> F_m with a common m")
    return ActHom(homs[0].monoid, len(homs), m, tuple(h.basis_images[0] for h in homs))


def enumerate_act_automorphisms(monoid: FiniteMonoid, n: int, max_homset: int = DEFAULT_MAX_HOMSET) -> list:
    """Bijective homs F_n -> F_n: basis sent to distinct copies, with unit coefficients."""
    if homset_size(monoid, n, n) > max_homset:
        raise TooLarge(f"|Hom(F_{n}, F_{n})| exceeds budget {max_homset}")
    us = sorted(units(monoid))
    out = []
    for copies in permutations(range(1, n + 1)):
        for coeffs in product(us, repeat=n):
            out.append(ActHom(monoid, n, n, tuple(ActElement(c, u) for c, u in zip(copies, coeffs))))
    out.sort(key=ActHom.index)
    return out


@dataclass(frozen=True)
class SemilinearMap:
    """A bijection s of F_n with s(t.x) = sigma(t).s(x), stored as a packed permutation."""

    sigma: MonoidAutomorphism
    rank: int
    mapping: tuple

    def __post_init__(self):
        size = self.rank * self.sigma.subject.order
        if sorted(self.mapping) != list(range(size)):
            raise ValueError("mapping is not a bijection of F_n")

    @property
    def monoid(self) -> FiniteMonoid:
        return self.sigma.subject

    def __call__(self, x: ActElement) -> ActElement:
        order = self.monoid.order
        return unpack(self.mapping[pack(x, order)], order)

    def is_semilinear(self) -> bool:
        M = self.monoid
        act = FreeAct(M, self.rank)
        return all(
            self(act.act(t, x)) == act.act(self.sigma(t), self(x)) for t in M.elements() for x in act.elements()
        )

    def compose(self, other: "SemilinearMap") -> "SemilinearMap":
        """``self o other``; semi-linear for ``self.sigma o other.sigma``."""
        if self.rank != other.rank:
            raise RankMismatch("ranks differ")
        return SemilinearMap(self.sigma.compose(other.sigma), self.rank, tuple(self.mapping[p] for p in other.mapping))

    def inverse(self) -> "SemilinearMap":
        inv = [0] * len(self.mapping)
        for p, q in enumerate(self.mapping):
            inv[q] = p
        return SemilinearMap(self.sigma.inverse(), self.rank, tuple(inv))

    def basis_images(self) -> tuple:
        return tuple(self(b) for b in FreeAct(self.monoid, self.rank).basis())

    def to_dict(self) -> dict:
        return {
            "sigma": self.sigma.to_dict(),
            "rank": self.rank,
            "mapping": list(self.mapping),
            "basis_uses_nonunits": semilinear_basis_uses_nonunits(self),
        }

    @classmethod
    def from_dict(cls, data: dict, monoid: FiniteMonoid) -> "SemilinearMap":
        return cls(MonoidAutomorphism.from_dict(data["sigma"], monoid), int(data["rank"]), tuple(data["mapping"]))


def coordinatewise(sigma: MonoidAutomorphism, n: int) -> SemilinearMap:
    """sigma_n : (i, t) -> (i, sigma(t))."""
    order = sigma.subject.order
    return SemilinearMap(sigma, n, tuple(c * order + sigma(t) for c in range(n) for t in range(order)))


def semilinear_from_hom(sigma: MonoidAutomorphism, h: ActHom) -> SemilinearMap:
    """The map h o sigma_n, which is sigma-semi-linear when h is an act automorphism."""
    total = h.total_map()
    return SemilinearMap(sigma, h.source_rank, tuple(total[p] for p in coordinatewise(sigma, h.source_rank).mapping))


def enumerate_semilinear_bijections(
    monoid: FiniteMonoid, n: int, sigma: MonoidAutomorphism, max_homset: int = DEFAULT_MAX_HOMSET
) -> list:
    """All sigma-semi-linear bijections of F_n, searched over basis images."""
    if homset_size(monoid, n, n) > max_homset:
        raise TooLarge(f"semi-linear search over {homset_size(monoid, n, n)} basis choices exceeds budget")
    order = monoid.order
    size = n * order
    t = monoid.table
    sig = sigma.image
    out = []
    for imgs in product(range(size), repeat=n):
        mapping = []
        for i, b in enumerate(imgs):
            c, e = divmod(b, order)
            mapping.extend(c * order + t[sig[x]][e] for x in range(order))
        if len(set(mapping)) == size:
            out.append(SemilinearMap(sigma, n, tuple(mapping)))
    return out


def semilinear_basis_uses_nonunits(s: SemilinearMap) -> bool:
    us = units(s.monoid)
    return any(b.elem not in us for b in s.basis_images())
