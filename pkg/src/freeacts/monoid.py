"""Finite monoids given by multiplication tables.

Elements are the integers ``0 .. n-1`` and the identity is always element 0.
``table[a][b]`` is the product ``a * b`` (row = left factor).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Optional, Sequence

from .errors import BadIdentity, IndexOutOfRange, NotAssociative, TooLarge

# permutation search is used below this order, generator search at or above it
PERMUTATION_SEARCH_BELOW = 6
DEFAULT_MAX_ORDER = 10
DEFAULT_WORD_BUDGET = 100_000


@dataclass(frozen=True)
class FiniteMonoid:
    table: tuple
    name: str = field(default="", compare=False)

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def identity(self) -> int:
        return 0

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def elements(self) -> range:
        return range(self.order)

    def is_commutative(self) -> bool:
        n = self.order
        return all(self.table[a][b] == self.table[b][a] for a in range(n) for b in range(a + 1, n))

    def relabel(self, perm: Sequence[int]) -> "FiniteMonoid":
        """Return the isomorphic copy in which element ``x`` is renamed ``perm[x]``."""
        n = self.order
        inv = [0] * n
        for x, y in enumerate(perm):
            inv[y] = x
        table = tuple(
            tuple(perm[self.table[inv[a]][inv[b]]] for b in range(n)) for a in range(n)
        )
        return FiniteMonoid(table, self.name)

    def to_dict(self) -> dict:
        return {"order": self.order, "identity": 0, "table": [list(r) for r in self.table]}

    @classmethod
    def from_dict(cls, data: dict) -> "FiniteMonoid":
        m = validate_monoid(data["table"], data.get("identity", 0))
        if "name" in data:
            m = FiniteMonoid(m.table, data["name"])
        return m

    def __repr__(self):
        label = self.name or f"order {self.order}"
        return f"FiniteMonoid({label})"


def validate_monoid(table, identity: int = 0, name: str = "") -> FiniteMonoid:
    """Check the monoid axioms and return the monoid with ``identity`` moved to index 0.

    Raises IndexOutOfRange, BadIdentity or NotAssociative naming the
    offending elements.
    """
    rows = [list(r) for r in table]
    n = len(rows)
    if n == 0:
        raise ValueError("a monoid needs at least one element")
    for a, row in enumerate(rows):
        if len(row) != n:
            raise ValueError(f"row {a} has length {len(row)}, expected {n}")
        for b, v in enumerate(row):
            if not isinstance(v, int) or not 0 <= v < n:
                raise IndexOutOfRange(a, b, v, n)
    if not 0 <= identity < n:
        raise BadIdentity(identity)
    for x in range(n):
        if rows[identity][x] != x or rows[x][identity] != x:
            raise BadIdentity(x)
    for a in range(n):
        ra = rows[a]
        for b in range(n):
            ab = ra[b]
            rb = rows[b]
            for c in range(n):
                if rows[ab][c] != ra[rb[c]]:
                    raise NotAssociative(a, b, c)
    m = FiniteMonoid(tuple(tuple(r) for r in rows), name)
    if identity != 0:
        perm = list(range(n))
        perm[0], perm[identity] = identity, 0
        m = m.relabel(perm)
    return m


# Standard examples


def trivial_monoid() -> FiniteMonoid:
    return FiniteMonoid(((0,),), "trivial")


def cyclic_group(n: int) -> FiniteMonoid:
    return FiniteMonoid(tuple(tuple((i + j) % n for j in range(n)) for i in range(n)), f"C{n}")


def zero_monoid() -> FiniteMonoid:
    """The two-element monoid {1, 0} with 0 absorbing."""
    return FiniteMonoid(((0, 1), (1, 1)), "{1,0}")


def symmetric_group(k: int) -> FiniteMonoid:
    """Sym(k) with product ``a*b = a o b`` (apply b first)."""
    perms = list(permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    table = tuple(
        tuple(index[tuple(a[b[x]] for x in range(k))] for b in perms) for a in perms
    )
    return FiniteMonoid(table, f"S{k}")


@dataclass(frozen=True)
class MonoidAutomorphism:
    subject: FiniteMonoid
    image: tuple

    def __post_init__(self):
        n = self.subject.order
        img = self.image
        if sorted(img) != list(range(n)):
            raise ValueError(f"{img} is not a permutation of range({n})")
        if img[0] != 0:
            raise ValueError("automorphism must fix the identity")
        t = self.subject.table
        for a in range(n):
            for b in range(n):
                if img[t[a][b]] != t[img[a]][img[b]]:
                    raise ValueError(f"not multiplicative at ({a}, {b})")

    def __call__(self, x: int) -> int:
        return self.image[x]

    def compose(self, other: "MonoidAutomorphism") -> "MonoidAutomorphism":
        """``self o other`` (apply ``other`` first)."""
        return MonoidAutomorphism(self.subject, tuple(self.image[x] for x in other.image))

    def inverse(self) -> "MonoidAutomorphism":
        inv = [0] * len(self.image)
        for x, y in enumerate(self.image):
            inv[y] = x
        return MonoidAutomorphism(self.subject, tuple(inv))

    def is_identity(self) -> bool:
        return all(x == y for x, y in enumerate(self.image))

    def to_dict(self) -> dict:
        return {"image": list(self.image)}

    @classmethod
    def from_dict(cls, data: dict, subject: FiniteMonoid) -> "MonoidAutomorphism":
        return cls(subject, tuple(data["image"]))

    def __repr__(self):
        return f"MonoidAutomorphism({list(self.image)})"


def identity_automorphism(m: FiniteMonoid) -> MonoidAutomorphism:
    return MonoidAutomorphism(m, tuple(range(m.order)))


def units(m: FiniteMonoid) -> frozenset:
    t = m.table
    return frozenset(
        u for u in m.elements() if any(t[u][v] == 0 and t[v][u] == 0 for v in m.elements())
    )


def unit_inverse(m: FiniteMonoid, u: int) -> int:
    for v in m.elements():
        if m.table[u][v] == 0 and m.table[v][u] == 0:
            return v
    raise ValueError(f"{u} is not a unit")


def closure(m: FiniteMonoid, gens: Sequence[int]) -> set:
    """Submonoid generated by ``gens``."""
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                ag = m.table[a][g]
                if ag not in seen:
                    seen.add(ag)
                    nxt.append(ag)
        frontier = nxt
    return seen


def generating_set(m: FiniteMonoid) -> list:
    """A small generating set: irreducible elements first, then greedy completion."""
    t = m.table
    nonid = range(1, m.order)
    products = {t[a][b] for a in nonid for b in nonid}
    gens = [x for x in nonid if x not in products]
    span = closure(m, gens)
    for x in nonid:
        if x not in span:
            gens.append(x)
            span = closure(m, gens)
    return gens


def _spanning_tree(m: FiniteMonoid, gens: Sequence[int]) -> list:
    """BFS order of ``(element, parent, generator position)`` with element = parent * gen."""
    seen = {0}
    order = []
    frontier = [0]
    while frontier:
        nxt = []
        for a in frontier:
            for gi, g in enumerate(gens):
                ag = m.table[a][g]
                if ag not in seen:
                    seen.add(ag)
                    order.append((ag, a, gi))
                    nxt.append(ag)
        frontier = nxt
    return order


def _is_hom(src: FiniteMonoid, dst: FiniteMonoid, img: Sequence[int]) -> bool:
    s, d = src.table, dst.table
    n = src.order
    return all(img[s[a][b]] == d[img[a]][img[b]] for a in range(n) for b in range(n))


def _iso_search(src: FiniteMonoid, dst: FiniteMonoid, first_only: bool) -> list:
    """All identity-preserving multiplicative bijections src -> dst."""
    n = src.order
    if n != dst.order:
        return []
    found = []
    if n < PERMUTATION_SEARCH_BELOW:
        for rest in permutations(range(1, n)):
            img = (0,) + rest
            if _is_hom(src, dst, img):
                found.append(img)
                if first_only:
                    break
        return found
    gens = generating_set(src)
    tree = _spanning_tree(src, gens)
    dt = dst.table
    for choice in product(range(1, n), repeat=len(gens)):
        if len(set(choice)) < len(choice):
            continue
        img = [None] * n
        img[0] = 0
        for elem, parent, gi in tree:
            img[elem] = dt[img[parent]][choice[gi]]
        if len(set(img)) != n:
            continue
        if _is_hom(src, dst, img):
            found.append(tuple(img))
            if first_only:
                break
    return sorted(found)


def enumerate_automorphisms(m: FiniteMonoid, max_order: int = DEFAULT_MAX_ORDER) -> list:
    """Aut(S) as a sorted list; the identity automorphism comes first."""
    if m.order > max_order:
        raise TooLarge(f"automorphism search limited to order {max_order}, got {m.order}")
    return [MonoidAutomorphism(m, img) for img in sorted(_iso_search(m, m, first_only=False))]


def conjugation(m: FiniteMonoid, u: int) -> MonoidAutomorphism:
    """x -> u x u^-1 for a unit u."""
    v = unit_inverse(m, u)
    t = m.table
    return MonoidAutomorphism(m, tuple(t[t[u][x]][v] for x in m.elements()))


def inner_automorphisms(m: FiniteMonoid) -> list:
    seen = {}
    for u in sorted(units(m)):
        c = conjugation(m, u)
        seen.setdefault(c.image, c)
    return [seen[k] for k in sorted(seen)]


@dataclass
class OuterGroup:
    """Aut(S)/Int(S) as cosets of the inner automorphisms."""

    automorphisms: list
    inner: list
    cosets: list  # list of lists of automorphisms; cosets[0] is Int(S)
    table: list  # table[i][j] = index of coset(rep_i o rep_j)

    @property
    def order(self) -> int:
        return len(self.cosets)

    @property
    def representatives(self) -> list:
        return [c[0] for c in self.cosets]

    def coset_of(self, sigma: MonoidAutomorphism) -> int:
        for i, c in enumerate(self.cosets):
            if any(sigma.image == s.image for s in c):
                return i
        raise ValueError(f"{sigma} is not an automorphism of the subject monoid")

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "aut_order": len(self.automorphisms),
            "int_order": len(self.inner),
            "representatives": [r.to_dict() for r in self.representatives],
            "table": self.table,
        }


def outer_group(m: FiniteMonoid, max_order: int = DEFAULT_MAX_ORDER) -> OuterGroup:
    auts = enumerate_automorphisms(m, max_order)
    inner = inner_automorphisms(m)
    cosets = []
    placed = set()
    for sigma in auts:
        if sigma.image in placed:
            continue
        coset = sorted((sigma.compose(i) for i in inner), key=lambda a: a.image)
        coset_images = {c.image for c in coset}
        # keep the chosen representative first
        coset = [sigma] + [c for c in coset if c.image != sigma.image]
        placed |= coset_images
        cosets.append(coset)
    index = {}
    for i, c in enumerate(cosets):
        for s in c:
            index[s.image] = i
    reps = [c[0] for c in cosets]
    table = [[index[a.compose(b).image] for b in reps] for a in reps]
    return OuterGroup(auts, inner, cosets, table)


def canonical_form(m: FiniteMonoid) -> tuple:
    """Lexicographically least flattened table over relabelings fixing 0, with its relabeling."""
    n = m.order
    best = None
    best_perm = None
    for rest in permutations(range(1, n)):
        perm = (0,) + rest
        flat = tuple(x for row in m.relabel(perm).table for x in row)
        if best is None or flat < best:
            best, best_perm = flat, perm
    return best, best_perm


def are_isomorphic(m1: FiniteMonoid, m2: FiniteMonoid) -> Optional[tuple]:
    """Return an isomorphism image tuple ``m1 -> m2`` or None."""
    if m1.order != m2.order:
        return None
    if len(units(m1)) != len(units(m2)) or m1.is_commutative() != m2.is_commutative():
        return None
    if m1.order >= 5:
        if m1.order > DEFAULT_MAX_ORDER:
            raise TooLarge(f"isomorphism test limited to order {DEFAULT_MAX_ORDER}")
        f1, p1 = canonical_form(m1)
        f2, p2 = canonical_form(m2)
        if f1 != f2:
            return None
        # m1 --p1--> canon --p2^-1--> m2
        inv2 = [0] * m2.order
        for x, y in enumerate(p2):
            inv2[y] = x
        return tuple(inv2[p1[x]] for x in range(m1.order))
    found = _iso_search(m1, m2, first_only=True)
    return found[0] if found else None


# Truncated free monoids

UNDEFINED = None


def _word_count(k: int, length: int) -> int:
    if k == 1:
        return length + 1
    return (k ** (length + 1) - 1) // (k - 1)


@dataclass(frozen=True)
class TruncatedFreeMonoid:
    """Words of length <= L over letters ``0 .. k-1`` under partial concatenation.

    ``product`` returns UNDEFINED when the concatenation is longer than L.
    Element 0 is the empty word.
    """

    k: int
    L: int
    words: tuple = field(repr=False)
    index: dict = field(repr=False, compare=False)

    @property
    def order(self) -> int:
        return len(self.words)

    def product(self, u: int, v: int):
        w = self.words[u] + self.words[v]
        if len(w) > self.L:
            return UNDEFINED
        return self.index[w]

    def length(self, u: int) -> int:
        return len(self.words[u])

    def letter(self, i: int) -> int:
        return self.index[(i,)]

    def format(self, u: int) -> str:
        w = self.words[u]
        return "".join(f"f{c + 1}" for c in w) if w else "e"


def truncated_free_monoid(k: int, L: int, budget: int = DEFAULT_WORD_BUDGET) -> TruncatedFreeMonoid:
    if k < 1 or L < 1:
        raise ValueError("need k >= 1 and L >= 1")
    if _word_count(k, L) > budget:
        raise TooLarge(f"{_word_count(k, L)} words exceeds budget {budget}")
    words = [()]
    for n in range(1, L + 1):
        words.extend(product(range(k), repeat=n))
    words = tuple(words)
    return TruncatedFreeMonoid(k, L, words, {w: i for i, w in enumerate(words)})
