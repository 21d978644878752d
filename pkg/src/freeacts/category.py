"""The truncated skeleton category of free S-acts F_1 .. F_N and its automorphisms.

Morphisms are referred to by their index in the canonical hom-set listing
(see :mod:`freeacts.acts`). A functor is a permutation of objects together
with, for every hom-set, an index array sending ``f`` in Hom(F_n, F_m) to its
image in Hom(F_pi(n), F_pi(m)). Composition is always "apply right argument
first".
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from .acts import (
    DEFAULT_MAX_HOMSET,
    ActElement,
    ActHom,
    SemilinearMap,
    coordinatewise,
    enumerate_act_automorphisms,
    enumerate_semilinear_bijections,
    hom_from_index,
    homset_size,
    semilinear_from_hom,
)
from .errors import NotFunctorial, NotTranslationClosed, RankMismatch, Timeout, TooLarge
from .monoid import (
    FiniteMonoid,
    MonoidAutomorphism,
    OuterGroup,
    enumerate_automorphisms,
    generating_set,
    outer_group,
)

DEFAULT_MAX_MONOID_ORDER = 3
DEFAULT_TIMEOUT_SECS = 600.0


class TruncatedSkeleton:
    """Full subcategory on F_1 .. F_N with every hom-set and composite precomputed."""

    def __init__(self, monoid: FiniteMonoid, max_rank: int, max_homset: int = DEFAULT_MAX_HOMSET):
        if max_rank < 1:
            raise ValueError("max_rank must be >= 1")
        self.monoid = monoid
        self.max_rank = max_rank
        self.ranks = tuple(range(1, max_rank + 1))
        q = monoid.order
        self.keys = [(n, m) for n in self.ranks for m in self.ranks]
        self.sizes = {}
        for n, m in self.keys:
            size = homset_size(monoid, n, m)
            if size > max_homset:
                raise TooLarge(f"|Hom(F_{n}, F_{m})| = {size} exceeds budget {max_homset}")
            self.sizes[(n, m)] = size
        mul = np.array(monoid.table, dtype=np.int64)
        self.basis = {}
        self.totals = {}
        self.weights = {}
        for n, m in self.keys:
            base = m * q
            idx = np.arange(self.sizes[(n, m)], dtype=np.int64)
            digits = []
            for _ in range(n):
                idx, d = np.divmod(idx, base)
                digits.append(d)
            B = np.stack(digits[::-1], axis=1)
            self.basis[(n, m)] = B
            self.weights[(n, m)] = base ** np.arange(n - 1, -1, -1, dtype=np.int64)
            copies, elems = np.divmod(B, q)
            # total[h, i*q + t] = packed image of (copy i, elem t) = (copy of b_i, t * elem of b_i)
            vals = copies[:, :, None] * q + mul[:, elems].transpose(1, 2, 0)
            self.totals[(n, m)] = vals.reshape(len(B), n * q)
        self.comp = {}
        for n in self.ranks:
            for m in self.ranks:
                for k in self.ranks:
                    basis = self.totals[(m, k)][:, self.basis[(n, m)]]
                    self.comp[(n, m, k)] = basis @ self.weights[(n, k)]

    def hom(self, n: int, m: int, idx: int) -> ActHom:
        return hom_from_index(self.monoid, n, m, int(idx))

    def index_of(self, f: ActHom) -> int:
        return f.index()

    def identity_index(self, n: int) -> int:
        return int(self.basis_to_index(n, n, np.arange(n) * self.monoid.order))

    def injection_index(self, i: int, n: int) -> int:
        return (i - 1) * self.monoid.order

    def codiagonal_index(self, n: int) -> int:
        return 0

    def basis_to_index(self, n: int, m: int, packed) -> int:
        return int(np.asarray(packed, dtype=np.int64) @ self.weights[(n, m)])

    def compose_index(self, n: int, m: int, k: int, g: int, f: int) -> int:
        return int(self.comp[(n, m, k)][g, f])

    def morphism_count(self) -> int:
        return sum(self.sizes.values())

    def __repr__(self):
        return f"TruncatedSkeleton({self.monoid!r}, N={self.max_rank})"


def build_truncated_skeleton(monoid: FiniteMonoid, max_rank: int, max_homset: int = DEFAULT_MAX_HOMSET) -> TruncatedSkeleton:
    return TruncatedSkeleton(monoid, max_rank, max_homset)


@dataclass(eq=False)
class TruncatedFunctor:
    skeleton: TruncatedSkeleton
    object_map: tuple
    hom_maps: dict

    def target_key(self, n: int, m: int) -> tuple:
        return self.object_map[n - 1], self.object_map[m - 1]

    def image(self, n: int, m: int, idx: int) -> int:
        return int(self.hom_maps[(n, m)][idx])

    def apply(self, f: ActHom) -> ActHom:
        n, m = f.source_rank, f.target_rank
        return self.skeleton.hom(*self.target_key(n, m), self.image(n, m, f.index()))

    def is_stable(self) -> bool:
        return all(self.object_map[n - 1] == n for n in self.skeleton.ranks)

    def key(self) -> tuple:
        return tuple(self.object_map) + tuple(
            x for k in self.skeleton.keys for x in self.hom_maps[k].tolist()
        )

    def __eq__(self, other):
        if not isinstance(other, TruncatedFunctor):
            return NotImplemented
        return self.skeleton is other.skeleton and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def compose(self, other: "TruncatedFunctor") -> "TruncatedFunctor":
        """``self o other`` (apply ``other`` first)."""
        maps = {}
        for n, m in self.skeleton.keys:
            inner = other.hom_maps[(n, m)]
            maps[(n, m)] = self.hom_maps[other.target_key(n, m)][inner]
        obj = tuple(self.object_map[o - 1] for o in other.object_map)
        return TruncatedFunctor(self.skeleton, obj, maps)

    def inverse(self) -> "TruncatedFunctor":
        maps = {}
        for n, m in self.skeleton.keys:
            fwd = self.hom_maps[(n, m)]
            inv = np.empty_like(fwd)
            inv[fwd] = np.arange(len(fwd))
            maps[self.target_key(n, m)] = inv
        obj = [0] * len(self.object_map)
        for n, o in enumerate(self.object_map, start=1):
            obj[o - 1] = n
        return TruncatedFunctor(self.skeleton, tuple(obj), maps)

    def to_dict(self) -> dict:
        return {
            "monoid": self.skeleton.monoid.to_dict(),
            "max_rank": self.skeleton.max_rank,
            "object_map": list(self.object_map),
            "hom_maps": {f"{n},{m}": self.hom_maps[(n, m)].tolist() for n, m in self.skeleton.keys},
        }

    @classmethod
    def from_dict(cls, data: dict, skeleton: TruncatedSkeleton) -> "TruncatedFunctor":
        if int(data["max_rank"]) != skeleton.max_rank:
            raise RankMismatch("functor and skeleton truncations differ")
        maps = {}
        for key, vals in data["hom_maps"].items():
            n, m = (int(x) for x in key.split(","))
            maps[(n, m)] = np.array(vals, dtype=np.int64)
        return cls(skeleton, tuple(data["object_map"]), maps)

    def __repr__(self):
        return f"TruncatedFunctor(N={self.skeleton.max_rank}, object_map={list(self.object_map)})"


def identity_functor(sk: TruncatedSkeleton) -> TruncatedFunctor:
    return TruncatedFunctor(sk, sk.ranks, {k: np.arange(sk.sizes[k], dtype=np.int64) for k in sk.keys})


def _inverse_perm(p: np.ndarray) -> np.ndarray:
    inv = np.empty_like(p)
    inv[p] = np.arange(len(p))
    return inv


def conjugation_functor(sk: TruncatedSkeleton, components: Sequence) -> TruncatedFunctor:
    """f -> s_m o f o s_n^-1 for packed bijections ``components[n-1]`` of F_n.

    Raises NotFunctorial if some conjugate is not a homomorphism.
    """
    comps = [np.asarray(c, dtype=np.int64) for c in components]
    if len(comps) != sk.max_rank:
        raise RankMismatch(f"need {sk.max_rank} components, got {len(comps)}")
    q = sk.monoid.order
    maps = {}
    for n, m in sk.keys:
        T = sk.totals[(n, m)]
        conj = comps[m - 1][T[:, _inverse_perm(comps[n - 1])]]
        idx = conj[:, np.arange(n) * q] @ sk.weights[(n, m)]
        if not np.array_equal(T[idx], conj):
            raise NotFunctorial(f"conjugate of some hom F_{n} -> F_{m} is not equivariant")
        maps[(n, m)] = idx
    return TruncatedFunctor(sk, sk.ranks, maps)


def twisted_functor(sigma: MonoidAutomorphism, sk: TruncatedSkeleton) -> TruncatedFunctor:
    """phi^sigma(f) = sigma_m o f o sigma_n^-1 with sigma acting coordinatewise."""
    if sigma.subject != sk.monoid:
        raise ValueError("sigma is not an automorphism of the skeleton's monoid")
    return conjugation_functor(sk, [coordinatewise(sigma, n).mapping for n in sk.ranks])


def inner_functor(sk: TruncatedSkeleton, etas: Sequence[ActHom]) -> TruncatedFunctor:
    """Conjugation by a family of act automorphisms eta_n of F_n."""
    return conjugation_functor(sk, [e.total_map() for e in etas])


class Violation(NamedTuple):
    kind: str  # "identity", "composition" or "bijection"
    n: int
    m: int
    k: int
    f: int
    g: int


def check_functoriality(phi: TruncatedFunctor, limit: Optional[int] = None) -> list:
    """Functor-law violations of ``phi``; an empty list means ``phi`` is a functor automorphism.

    A composition violation ``(n, m, k, f, g)`` says phi(g o f) != phi(g) o phi(f)
    for f in Hom(F_n, F_m), g in Hom(F_m, F_k).
    """
    sk = phi.skeleton
    out = []
    if sorted(phi.object_map) != list(sk.ranks):
        return [Violation("bijection", 0, 0, 0, -1, -1)]
    for n, m in sk.keys:
        hm = phi.hom_maps[(n, m)]
        tk = phi.target_key(n, m)
        if hm.shape != (sk.sizes[(n, m)],) or sk.sizes[tk] != len(hm) or len(np.unique(hm)) != len(hm):
            out.append(Violation("bijection", n, m, 0, -1, -1))
    if out:
        return out
    for n in sk.ranks:
        o = phi.object_map[n - 1]
        if phi.image(n, n, sk.identity_index(n)) != sk.identity_index(o):
            out.append(Violation("identity", n, n, n, sk.identity_index(n), -1))
    for n in sk.ranks:
        for m in sk.ranks:
            for k in sk.ranks:
                pn, pm, pk = (phi.object_map[x - 1] for x in (n, m, k))
                lhs = phi.hom_maps[(n, k)][sk.comp[(n, m, k)]]
                rhs = sk.comp[(pn, pm, pk)][phi.hom_maps[(m, k)][:, None], phi.hom_maps[(n, m)][None, :]]
                bad = np.argwhere(lhs != rhs)
                for g, f in bad:
                    out.append(Violation("composition", n, m, k, int(f), int(g)))
                    if limit is not None and len(out) >= limit:
                        return out
    return out


# Exhaustive automorphism enumeration


class _Search:
    """Backtracking assignment of hom images closed under composition."""

    def __init__(self, sk: TruncatedSkeleton, object_map: tuple, deadline: Optional[float] = None):
        self.sk = sk
        self.pi = object_map
        self.deadline = deadline
        self.comp = {k: v.tolist() for k, v in sk.comp.items()}
        self.img = {k: [-1] * sk.sizes[k] for k in sk.keys}
        self.used = {k: set() for k in sk.keys}
        self.assigned = {k: [] for k in sk.keys}
        self.trail = []
        self.nodes = 0

    def tkey(self, n, m):
        return self.pi[n - 1], self.pi[m - 1]

    def assign(self, key, x, y) -> bool:
        """Set phi(x) = y and propagate through all composites with assigned morphisms."""
        stack = []
        if not self._set(key, x, y, stack):
            return False
        ranks = self.sk.ranks
        comp = self.comp
        pi = self.pi
        img = self.img
        while stack:
            (a, b), x = stack.pop()
            y = img[(a, b)][x]
            pa, pb = pi[a - 1], pi[b - 1]
            for c in ranks:
                pc = pi[c - 1]
                # z o x with z : F_b -> F_c
                src = comp[(a, b, c)]
                dst = comp[(pa, pb, pc)]
                zi = img[(b, c)]
                for z in self.assigned[(b, c)]:
                    if not self._set((a, c), src[z][x], dst[zi[z]][y], stack):
                        return False
                # x o z with z : F_c -> F_a
                src = comp[(c, a, b)][x]
                dst = comp[(pc, pa, pb)][y]
                zi = img[(c, a)]
                for z in self.assigned[(c, a)]:
                    if not self._set((c, b), src[z], dst[zi[z]], stack):
                        return False
        return True

    def _set(self, key, x, y, stack) -> bool:
        cur = self.img[key][x]
        if cur != -1:
            return cur == y
        used = self.used[self.tkey(*key)]
        if y in used:
            return False
        self.img[key][x] = y
        used.add(y)
        self.assigned[key].append(x)
        self.trail.append((key, x, y))
        stack.append((key, x))
        return True

    def undo(self, mark: int):
        while len(self.trail) > mark:
            key, x, y = self.trail.pop()
            self.img[key][x] = -1
            self.used[self.tkey(*key)].discard(y)
            self.assigned[key].pop()

    def complete(self) -> bool:
        return all(len(self.assigned[k]) == self.sk.sizes[k] for k in self.sk.keys)


def category_generators(sk: TruncatedSkeleton) -> list:
    """Morphisms generating the skeleton under composition, End(F_1) first, then injections and codiagonals."""
    M = sk.monoid
    priority = [((1, 1), s) for s in generating_set(M)]
    priority += [((1, 1), s) for s in range(1, M.order)]
    for n in sk.ranks[1:]:
        priority += [((1, n), sk.injection_index(i, n)) for i in range(1, n + 1)]
        priority.append(((n, 1), sk.codiagonal_index(n)))
    for key in sorted(sk.keys, key=lambda k: (sk.sizes[k], k)):
        priority += [(key, x) for x in range(sk.sizes[key])]
    # closure under composition is the identity-functor propagation
    span = _Search(sk, sk.ranks)
    for n in sk.ranks:
        span.assign((n, n), sk.identity_index(n), sk.identity_index(n))
    gens = []
    for key, x in priority:
        if span.img[key][x] == -1:
            gens.append((key, x))
            span.assign(key, x, x)
    return gens


@dataclass
class EnumerationStats:
    object_maps_tried: int = 0
    object_maps_rejected_by_cardinality: int = 0
    nodes: int = 0
    generators: int = 0
    seconds: float = 0.0


def enumerate_category_automorphisms(
    sk: TruncatedSkeleton,
    pin_objects: bool = False,
    timeout: Optional[float] = DEFAULT_TIMEOUT_SECS,
    max_monoid_order: int = DEFAULT_MAX_MONOID_ORDER,
    stats: Optional[EnumerationStats] = None,
) -> list:
    """Every automorphism of the truncated skeleton.

    All object permutations are searched unless ``pin_objects``. For each,
    images of a generating set are chosen by backtracking, and every choice is
    propagated through all composites so that conflicts and non-injectivity
    prune early. Survivors are re-checked with :func:`check_functoriality`.
    """
    if sk.monoid.order > max_monoid_order:
        raise TooLarge(f"category automorphism search limited to |S| <= {max_monoid_order}")
    start = time.monotonic()
    deadline = None if timeout is None else start + timeout
    stats = stats if stats is not None else EnumerationStats()
    gens = category_generators(sk)
    stats.generators = len(gens)
    found = []
    object_maps = [sk.ranks] if pin_objects else list(permutations(sk.ranks))
    for pi in object_maps:
        stats.object_maps_tried += 1
        if any(sk.sizes[(n, m)] != sk.sizes[(pi[n - 1], pi[m - 1])] for n, m in sk.keys):
            stats.object_maps_rejected_by_cardinality += 1
            continue
        search = _Search(sk, pi, deadline)
        ok = all(
            search.assign((n, n), sk.identity_index(n), sk.identity_index(pi[n - 1])) for n in sk.ranks
        )
        if ok:
            _backtrack(search, gens, 0, found, stats, partial=found)
    stats.seconds = time.monotonic() - start
    found.sort(key=TruncatedFunctor.key)
    return found


def _backtrack(search: _Search, gens, depth, found, stats, partial):
    stats.nodes += 1
    if search.deadline is not None and stats.nodes % 64 == 0 and time.monotonic() > search.deadline:
        raise Timeout("category automorphism enumeration timed out", partial=list(partial))
    sk = search.sk
    if depth == len(gens):
        if not search.complete():
            raise AssertionError("generators did not span the skeleton")
        phi = TruncatedFunctor(
            sk, tuple(search.pi), {k: np.array(search.img[k], dtype=np.int64) for k in sk.keys}
        )
        if not check_functoriality(phi, limit=1):
            found.append(phi)
        return
    key, x = gens[depth]
    if search.img[key][x] != -1:
        _backtrack(search, gens, depth + 1, found, stats, partial)
        return
    tkey = search.tkey(*key)
    for y in range(sk.sizes[tkey]):
        if y in search.used[tkey]:
            continue
        mark = len(search.trail)
        if search.assign(key, x, y):
            _backtrack(search, gens, depth + 1, found, stats, partial)
        search.undo(mark)


# Sigma extraction, normalization, certificates


def extract_sigma(phi: TruncatedFunctor) -> MonoidAutomorphism:
    """The automorphism of S = End(F_1) induced by phi.

    End(F_1) consists of the right translations f_s : t -> ts, and f_s has
    index s. With apply-right-first composition f_t o f_s = f_{st}, so
    phi(f_s) = f_{sigma(s)} defines a multiplicative sigma (no order reversal).
    """
    sk = phi.skeleton
    if phi.object_map[0] != 1:
        raise NotTranslationClosed("phi moves F_1, so End(F_1) is not mapped to right translations of F_1")
    img = tuple(phi.image(1, 1, s) for s in range(sk.monoid.order))
    try:
        return MonoidAutomorphism(sk.monoid, img)
    except ValueError as exc:
        raise NotFunctorial(f"phi restricted to End(F_1) is not a monoid automorphism: {exc}") from exc


def is_injection_constant(phi: TruncatedFunctor) -> bool:
    sk = phi.skeleton
    return phi.is_stable() and all(
        phi.image(1, n, sk.injection_index(i, n)) == sk.injection_index(i, n)
        for n in sk.ranks
        for i in range(1, n + 1)
    )


class Normalization(NamedTuple):
    phi0: TruncatedFunctor
    witness: list  # act automorphisms alpha_n with alpha_n o mu_i = phi(mu_i)


def naturality_failures(source: TruncatedFunctor, target: TruncatedFunctor, components: Sequence[ActHom]) -> int:
    """Number of homs f for which target(f) o c_n != c_m o source(f)."""
    sk = source.skeleton
    comps = [np.asarray(c.total_map(), dtype=np.int64) for c in components]
    failures = 0
    for n, m in sk.keys:
        T = sk.totals[(n, m)]
        lhs = T[target.hom_maps[(n, m)]][:, comps[n - 1]]
        rhs = comps[m - 1][T[source.hom_maps[(n, m)]]]
        failures += int(np.any(lhs != rhs, axis=1).sum())
    return failures


def normalize_injection_constant(phi: TruncatedFunctor) -> Normalization:
    """Conjugate phi into an automorphism fixing every canonical injection.

    With alpha_n = [phi(mu_1), ..., phi(mu_n)], the result is
    phi0(f) = alpha_m^-1 o phi(f) o alpha_n and the alpha_n form a natural
    isomorphism phi0 -> phi.
    """
    sk = phi.skeleton
    if not phi.is_stable():
        raise NotFunctorial("normalization needs an object-stable functor")
    if check_functoriality(phi, limit=1):
        raise NotFunctorial("input is not a functor automorphism")
    q = sk.monoid.order
    witness = []
    for n in sk.ranks:
        imgs = [phi.image(1, n, sk.injection_index(i, n)) for i in range(1, n + 1)]
        alpha = ActHom(sk.monoid, n, n, tuple(ActElement(p // q + 1, p % q) for p in imgs))
        if not alpha.is_bijective():
            raise NotFunctorial(f"images of the injections into F_{n} are not a coproduct cocone")
        witness.append(alpha)
    inv = [_inverse_perm(np.asarray(a.total_map(), dtype=np.int64)) for a in witness]
    phi0 = conjugation_functor(sk, inv).compose(phi)
    if naturality_failures(phi0, phi, witness):
        raise NotFunctorial("normalization witness is not natural")
    return Normalization(phi0, witness)


@dataclass
class SemiInnerCertificate:
    sigma: MonoidAutomorphism
    components: list  # SemilinearMap per rank 1..N
    method: str = field(default="recipe", compare=False)

    def to_dict(self) -> dict:
        return {"sigma": self.sigma.to_dict(), "components": [c.to_dict() for c in self.components]}

    @classmethod
    def from_dict(cls, data: dict, monoid: FiniteMonoid) -> "SemiInnerCertificate":
        return cls(
            MonoidAutomorphism.from_dict(data["sigma"], monoid),
            [SemilinearMap.from_dict(c, monoid) for c in data["components"]],
            data.get("method", "recipe"),
        )


def _square_holds(phi: TruncatedFunctor, comps: dict, n: int, m: int) -> bool:
    # phi(f) o s_n == s_m o f for every f : F_n -> F_m
    T = phi.skeleton.totals[(n, m)]
    lhs = T[phi.hom_maps[(n, m)]][:, comps[n]]
    rhs = comps[m][T]
    return bool(np.array_equal(lhs, rhs))


def _search_components(phi: TruncatedFunctor, candidates: Callable[[int], list]) -> Optional[list]:
    """Rank-by-rank backtracking for bijections s_n with phi(f) o s_n = s_m o f.

    ``candidates(n)`` lists packed bijections of F_n; returns their positions.
    """
    sk = phi.skeleton
    pools = {n: [np.asarray(c, dtype=np.int64) for c in candidates(n)] for n in sk.ranks}
    chosen = {}
    picks = {}

    def go(r):
        if r > sk.max_rank:
            return True
        for i, c in enumerate(pools[r]):
            chosen[r] = c
            pairs = [(a, r) for a in range(1, r + 1)] + [(r, b) for b in range(1, r)]
            if all(_square_holds(phi, chosen, a, b) for a, b in pairs):
                picks[r] = i
                if go(r + 1):
                    return True
            del chosen[r]
        return False

    return [picks[n] for n in sk.ranks] if go(1) else None


def certificate_holds(phi: TruncatedFunctor, cert: SemiInnerCertificate) -> bool:
    comps = {n: np.asarray(c.mapping, dtype=np.int64) for n, c in zip(phi.skeleton.ranks, cert.components)}
    return all(_square_holds(phi, comps, n, m) for n, m in phi.skeleton.keys)


def _recipe_certificate(phi: TruncatedFunctor) -> Optional[SemiInnerCertificate]:
    try:
        norm = normalize_injection_constant(phi)
        sigma = extract_sigma(norm.phi0)
    except (NotFunctorial, NotTranslationClosed):
        return None
    cert = SemiInnerCertificate(sigma, [semilinear_from_hom(sigma, a) for a in norm.witness], "recipe")
    return cert if certificate_holds(phi, cert) else None


def semi_inner_certificate(phi: TruncatedFunctor, use_recipe: bool = True) -> Optional[SemiInnerCertificate]:
    """Find sigma and sigma-semi-linear bijections s_n with phi(f) o s_n = s_m o f for all f.

    First tries s_n = alpha_n o sigma_n from the injection normalization; if that
    fails, searches every sigma in Aut(S) and all semi-linear bijections rank by rank.
    Returns None if no certificate exists within the truncation.
    """
    sk = phi.skeleton
    if not phi.is_stable():
        return None
    if use_recipe:
        cert = _recipe_certificate(phi)
        if cert is not None:
            return cert
    for sigma in enumerate_automorphisms(sk.monoid):
        pools = {n: enumerate_semilinear_bijections(sk.monoid, n, sigma) for n in sk.ranks}
        picks = _search_components(phi, lambda n: [s.mapping for s in pools[n]])
        if picks is not None:
            cert = SemiInnerCertificate(sigma, [pools[n][i] for n, i in zip(sk.ranks, picks)], "search")
            if certificate_holds(phi, cert):
                return cert
    return None


def is_inner(phi: TruncatedFunctor) -> Optional[list]:
    """Act automorphisms eta_n with phi(f) o eta_n = eta_m o f for all f, or None.

    Exhaustive over all families in Aut(F_1) x ... x Aut(F_N).
    """
    sk = phi.skeleton
    if not phi.is_stable():
        return None
    pools = {n: enumerate_act_automorphisms(sk.monoid, n) for n in sk.ranks}
    picks = _search_components(phi, lambda n: [h.total_map() for h in pools[n]])
    if picks is None:
        return None
    return [pools[n][i] for n, i in zip(sk.ranks, picks)]


# Outer automorphism group of the category


@dataclass
class CategoryOuterGroup:
    automorphisms: list
    classes: list  # lists of positions into automorphisms; classes[0] holds the identity functor
    table: list
    monoid_outer: OuterGroup
    witness: list  # class index -> coset index in monoid_outer
    problems: list

    @property
    def order(self) -> int:
        return len(self.classes)

    @property
    def is_isomorphism(self) -> bool:
        return not self.problems

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "monoid_outer_order": self.monoid_outer.order,
            "class_sizes": [len(c) for c in self.classes],
            "table": self.table,
            "witness": self.witness,
            "witness_sigmas": [self.monoid_outer.representatives[w].to_dict() for w in self.witness],
            "is_isomorphism": self.is_isomorphism,
            "problems": self.problems,
        }


def outer_group_of_category(
    sk: TruncatedSkeleton, automorphisms: Optional[list] = None, **enum_kwargs
) -> CategoryOuterGroup:
    """Aut(skeleton) modulo inner automorphisms, with the map [phi] -> [sigma(phi)] into Out(S) checked."""
    autos = automorphisms if automorphisms is not None else enumerate_category_automorphisms(sk, **enum_kwargs)
    position = {phi.key(): i for i, phi in enumerate(autos)}
    ident = identity_functor(sk).key()
    problems = []
    reps = []
    classes = []
    class_of = [None] * len(autos)
    ordered = sorted(range(len(autos)), key=lambda i: autos[i].key() != ident)
    for i in ordered:
        phi = autos[i]
        for c, r in enumerate(reps):
            if is_inner(phi.compose(autos[r].inverse())) is not None:
                classes[c].append(i)
                class_of[i] = c
                break
        else:
            reps.append(i)
            classes.append([i])
            class_of[i] = len(classes) - 1

    table = []
    for a in reps:
        row = []
        for b in reps:
            j = position.get(autos[a].compose(autos[b]).key())
            if j is None:
                problems.append(f"composite of class representatives {a}, {b} is not in the enumerated list")
                row.append(-1)
            else:
                row.append(class_of[j])
        table.append(row)

    mout = outer_group(sk.monoid)
    witness = []
    for c, members in enumerate(classes):
        cosets = {mout.coset_of(extract_sigma(normalize_injection_constant(autos[i]).phi0)) for i in members}
        if len(cosets) != 1:
            problems.append(f"class {c} maps to several outer classes {sorted(cosets)}")
        witness.append(min(cosets))
    if sorted(witness) != list(range(mout.order)):
        problems.append(f"class map {witness} is not a bijection onto Out(S) of order {mout.order}")
    for a in range(len(reps)):
        for b in range(len(reps)):
            if table[a][b] >= 0 and witness[table[a][b]] != mout.table[witness[a]][witness[b]]:
                problems.append(f"class map is not multiplicative at ({a}, {b})")
    return CategoryOuterGroup(autos, classes, table, mout, witness, problems)


def evaluate_certificate(phi: TruncatedFunctor, cert: SemiInnerCertificate) -> list:
    """Pointwise re-check of a certificate, independent of the search code.

    Returns ``(n, m, f_index, element)`` for every failing point, after
    confirming each component is a sigma-semi-linear bijection.
    """
    sk = phi.skeleton
    M = sk.monoid
    failures = []
    for n, s in zip(sk.ranks, cert.components):
        if s.rank != n or s.sigma.image != cert.sigma.image or not s.is_semilinear():
            failures.append((n, n, -1, None))
    if failures or len(cert.components) != sk.max_rank:
        return failures or [(0, 0, -1, None)]
    comps = dict(zip(sk.ranks, cert.components))
    for n, m in sk.keys:
        for idx in range(sk.sizes[(n, m)]):
            f = sk.hom(n, m, idx)
            pf = phi.apply(f)
            for copy in range(1, n + 1):
                for t in range(M.order):
                    x = ActElement(copy, t)
                    if pf(comps[n](x)) != comps[m](f(x)):
                        failures.append((n, m, idx, (copy, t)))
    return failures
