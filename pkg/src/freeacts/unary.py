"""Free unary algebras as free acts over length-truncated free monoids.

A signature has k operation symbols f_1..f_k (letters 0..k-1 internally) and
a truncation length L. An element of the free algebra of rank n is w . x_i
for a word w of length <= L; applying f_j prepends the letter j.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from math import factorial
from typing import Optional, Sequence

from .errors import TooLarge
from .monoid import UNDEFINED, FiniteMonoid, TruncatedFreeMonoid, outer_group, truncated_free_monoid

DEFAULT_ELEMENT_BUDGET = 20_000
RIGIDITY_MAX_WORDS = 200


@dataclass(frozen=True)
class UnarySignature:
    k: int
    L: int

    def __post_init__(self):
        if self.k < 1 or self.L < 1:
            raise ValueError("need k >= 1 and L >= 1")

    def to_dict(self) -> dict:
        return {"k": self.k, "L": self.L}

    @classmethod
    def from_dict(cls, data: dict) -> "UnarySignature":
        return cls(int(data["k"]), int(data["L"]))


def default_truncation(k: int) -> int:
    return 3 if k <= 2 else 2


@dataclass(frozen=True, order=True)
class FreeUnaryAlgebraElement:
    word: tuple
    var: int

    def format(self) -> str:
        return "".join(f"f{c + 1}" for c in self.word) + f"x{self.var}"


@dataclass(frozen=True)
class FreeUnaryAlgebra:
    signature: UnarySignature
    rank: int
    words: TruncatedFreeMonoid

    @property
    def size(self) -> int:
        return self.rank * self.words.order

    def elements(self) -> list:
        return [FreeUnaryAlgebraElement(w, v) for v in range(1, self.rank + 1) for w in self.words.words]

    def act(self, word: Sequence[int], a: FreeUnaryAlgebraElement) -> Optional[FreeUnaryAlgebraElement]:
        w = tuple(word) + a.word
        if len(w) > self.signature.L:
            return UNDEFINED
        return FreeUnaryAlgebraElement(w, a.var)

    def apply_op(self, i: int, a: FreeUnaryAlgebraElement) -> Optional[FreeUnaryAlgebraElement]:
        """f_{i+1}(a), or UNDEFINED past the truncation."""
        return self.act((i,), a)


def build_free_unary_algebra(sig: UnarySignature, n: int, budget: int = DEFAULT_ELEMENT_BUDGET) -> FreeUnaryAlgebra:
    words = truncated_free_monoid(sig.k, sig.L, budget)
    if n * words.order > budget:
        raise TooLarge(f"{n * words.order} elements exceeds budget {budget}")
    return FreeUnaryAlgebra(sig, n, words)


@dataclass(frozen=True)
class UnaryHom:
    """Homomorphism F_n -> F_m fixed by basis images; partial past the truncation."""

    source_rank: int
    target_rank: int
    basis_images: tuple
    L: int

    def __call__(self, a: FreeUnaryAlgebraElement) -> Optional[FreeUnaryAlgebraElement]:
        b = self.basis_images[a.var - 1]
        w = a.word + b.word
        if len(w) > self.L:
            return UNDEFINED
        return FreeUnaryAlgebraElement(w, b.var)


def enumerate_unary_homs(sig: UnarySignature, n: int, m: int) -> list:
    target = build_free_unary_algebra(sig, m).elements()
    return [UnaryHom(n, m, imgs, sig.L) for imgs in product(target, repeat=n)]


def _permute_word(pi: Sequence[int], word: Sequence[int]) -> tuple:
    return tuple(pi[c] for c in word)


@dataclass
class TwistFamily:
    """s_{F_n}(w . x_i) = pi(w) . x_i for every rank n up to ``max_rank``."""

    signature: UnarySignature
    pi: tuple
    max_rank: int
    checked_elements: int = 0
    checked_homs: int = 0
    equation_holds: bool = True
    homs_hold: bool = True

    def __call__(self, a: FreeUnaryAlgebraElement) -> FreeUnaryAlgebraElement:
        return FreeUnaryAlgebraElement(_permute_word(self.pi, a.word), a.var)

    def inverse_pi(self) -> tuple:
        inv = [0] * len(self.pi)
        for i, p in enumerate(self.pi):
            inv[p] = i
        return tuple(inv)

    def twist_hom(self, f: UnaryHom) -> UnaryHom:
        """s o f o s^-1, which sends basis images b to pi(b)."""
        return UnaryHom(f.source_rank, f.target_rank, tuple(self(b) for b in f.basis_images), f.L)

    def to_dict(self) -> dict:
        return {
            "pi": list(self.pi),
            "checked_elements": self.checked_elements,
            "equation_holds": self.equation_holds,
            "checked_homs": self.checked_homs,
            "homs_hold": self.homs_hold,
        }


def permutation_twist(pi: Sequence[int], sig: UnarySignature, max_rank: int = 2, check_homs: bool = True) -> TwistFamily:
    """Letterwise relabeling by ``pi`` (0-based), with the semi-linearity law checked exhaustively.

    Checks s(u . a) = pi(u) . s(a) for every word u and element a with u . a
    defined, and s(f(a)) = twist(f)(s(a)) for every hom f between ranks
    <= max_rank wherever f(a) is defined.
    """
    pi = tuple(pi)
    if sorted(pi) != list(range(sig.k)):
        raise ValueError(f"{pi} is not a permutation of {sig.k} letters")
    fam = TwistFamily(sig, pi, max_rank)
    words = truncated_free_monoid(sig.k, sig.L).words
    for n in range(1, max_rank + 1):
        alg = build_free_unary_algebra(sig, n)
        elems = alg.elements()
        if len({fam(a) for a in elems}) != len(elems):
            fam.equation_holds = False
        for a in elems:
            fam.checked_elements += 1
            for u in words:
                ua = alg.act(u, a)
                if ua is UNDEFINED:
                    continue
                if fam(ua) != alg.act(_permute_word(pi, u), fam(a)):
                    fam.equation_holds = False
    if check_homs:
        for n in range(1, max_rank + 1):
            src = build_free_unary_algebra(sig, n).elements()
            for m in range(1, max_rank + 1):
                for f in enumerate_unary_homs(sig, n, m):
                    fam.checked_homs += 1
                    g = fam.twist_hom(f)
                    for a in src:
                        fa = f(a)
                        if fa is not UNDEFINED and fam(fa) != g(fam(a)):
                            fam.homs_hold = False
    return fam


def compose_twists(a: TwistFamily, b: TwistFamily) -> tuple:
    """Letter permutation of ``a o b``."""
    return tuple(a.pi[b.pi[i]] for i in range(len(b.pi)))


@dataclass
class RigidityReport:
    signature: UnarySignature
    maps: list  # image tuples over word indices
    induced_by: list  # letter permutation inducing each map, or None
    exotic: list

    @property
    def count(self) -> int:
        return len(self.maps)

    @property
    def expected(self) -> int:
        return factorial(self.signature.k)

    @property
    def all_letter_induced(self) -> bool:
        return not self.exotic

    def to_dict(self) -> dict:
        return {
            "signature": self.signature.to_dict(),
            "count": self.count,
            "expected": self.expected,
            "all_letter_induced": self.all_letter_induced,
            "letter_permutations": [list(p) for p in self.induced_by if p is not None],
            "exotic": [list(m) for m in self.exotic],
        }


def truncated_automorphisms(tfm: TruncatedFreeMonoid) -> list:
    """Bijections fixing the empty word and preserving every defined product.

    Where ``uv`` is defined, ``phi(u) phi(v)`` must be defined and equal to
    ``phi(uv)``; undefined products impose nothing. Words are assigned in
    length order, so longer words are forced by their first letter and suffix.
    """
    n = tfm.order
    img = [-1] * n
    img[0] = 0
    used = {0}
    found = []
    prod = [[tfm.product(u, v) for v in range(n)] for u in range(n)]
    factorizations = [[] for _ in range(n)]
    for u in range(n):
        for v in range(n):
            if prod[u][v] is not UNDEFINED:
                factorizations[prod[u][v]].append((u, v))

    def consistent(x):
        for a, b in factorizations[x]:
            if img[a] != -1 and img[b] != -1 and prod[img[a]][img[b]] != img[x]:
                return False
        for y in range(n):
            if img[y] == -1:
                continue
            for a, b in ((x, y), (y, x)):
                ab = prod[a][b]
                if ab is UNDEFINED:
                    continue
                target = prod[img[a]][img[b]]
                if target is UNDEFINED:
                    return False
                if img[ab] != -1 and img[ab] != target:
                    return False
        return True

    def go(x):
        if x == n:
            found.append(tuple(img))
            return
        for y in range(1, n):
            if y in used:
                continue
            img[x] = y
            used.add(y)
            if consistent(x):
                go(x + 1)
            used.discard(y)
            img[x] = -1

    go(1)
    return found


def verify_letter_permutation_rigidity(sig: UnarySignature) -> RigidityReport:
    tfm = truncated_free_monoid(sig.k, sig.L)
    if tfm.order > RIGIDITY_MAX_WORDS:
        raise TooLarge(f"{tfm.order} words exceeds rigidity budget {RIGIDITY_MAX_WORDS}")
    letter_maps = {}
    for pi in permutations(range(sig.k)):
        letter_maps[tuple(tfm.index[_permute_word(pi, w)] for w in tfm.words)] = pi
    maps = truncated_automorphisms(tfm)
    induced = [letter_maps.get(m) for m in maps]
    exotic = [m for m, p in zip(maps, induced) if p is None]
    return RigidityReport(sig, maps, induced, exotic)


@dataclass
class PerfectnessResult:
    perfect: bool
    aut_order: int
    explanation: str
    witnesses: list
    out_order: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "perfect": self.perfect,
            "aut_order": self.aut_order,
            "explanation": self.explanation,
            "witnesses": self.witnesses,
            "out_order": self.out_order,
        }


def perfectness_check(subject) -> PerfectnessResult:
    """A variety of S-acts is perfect exactly when Aut(S) is trivial.

    ``subject`` is a FiniteMonoid or a UnarySignature; for a signature the
    automorphisms are the letter permutations found by the rigidity search.
    """
    if isinstance(subject, UnarySignature):
        report = verify_letter_permutation_rigidity(subject)
        perms = [p for p in report.induced_by if p is not None]
        nontrivial = [list(p) for p in perms if list(p) != list(range(subject.k))]
        nontrivial += [list(m) for m in report.exotic]
        perfect = report.count == 1
        if perfect:
            text = f"k={subject.k}: the only automorphism of the free monoid is the identity; mono-unary, perfect"
        else:
            text = f"k={subject.k}: {report.count} automorphisms of the free monoid, e.g. letter permutation {nontrivial[0]}; not perfect"
        # the free monoid has no units besides the empty word, so Out = Aut
        return PerfectnessResult(perfect, report.count, text, nontrivial, report.count)
    if isinstance(subject, FiniteMonoid):
        out = outer_group(subject)
        auts = out.automorphisms
        nontrivial = [list(a.image) for a in auts if not a.is_identity()]
        perfect = len(auts) == 1
        if perfect:
            text = "Aut(S) is trivial; perfect"
        else:
            text = f"|Aut(S)| = {len(auts)}, nontrivial automorphism {nontrivial[0]}; not perfect"
            if out.order == 1:
                text += " by the Aut(S) criterion, although every automorphism of S is inner (Out(S) trivial)"
        return PerfectnessResult(perfect, len(auts), text, nontrivial, out.order)
    raise TypeError(f"cannot check perfectness of {type(subject).__name__}")
