"""Small-monoid catalogs, per-monoid classification and end-to-end theorem runs."""
from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .category import (
    DEFAULT_TIMEOUT_SECS,
    EnumerationStats,
    SemiInnerCertificate,
    TruncatedFunctor,
    build_truncated_skeleton,
    enumerate_category_automorphisms,
    evaluate_certificate,
    extract_sigma,
    identity_functor,
    outer_group_of_category,
    semi_inner_certificate,
    twisted_functor,
)
from .errors import FreeActsError, Timeout, TooLarge
from .monoid import (
    FiniteMonoid,
    canonical_form,
    enumerate_automorphisms,
    outer_group,
)

log = logging.getLogger(__name__)

MAX_CATALOG_ORDER = 4


@dataclass
class CatalogEntry:
    id: str
    monoid: FiniteMonoid
    aut_order: int
    int_order: int
    out_order: int

    @property
    def perfect(self) -> bool:
        return self.aut_order == 1

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "monoid": self.monoid.to_dict(),
            "aut": self.aut_order,
            "int": self.int_order,
            "out": self.out_order,
            "perfect": self.perfect,
        }


@dataclass
class MonoidCatalog:
    order: int
    entries: list

    @property
    def representatives(self) -> list:
        return [e.monoid for e in self.entries]

    def __len__(self):
        return len(self.entries)

    def to_dict(self) -> dict:
        return {"order": self.order, "count": len(self.entries), "entries": [e.to_dict() for e in self.entries]}


def associative_tables(order: int):
    """Yield every associative table on 0..order-1 with 0 as two-sided identity."""
    n = order
    t = [[None] * n for _ in range(n)]
    for x in range(n):
        t[0][x] = x
        t[x][0] = x
    cells = [(a, b) for a in range(1, n) for b in range(1, n)]

    def ok():
        for a in range(n):
            for b in range(n):
                ab = t[a][b]
                if ab is None:
                    continue
                for c in range(n):
                    bc = t[b][c]
                    if bc is None:
                        continue
                    left, right = t[ab][c], t[a][bc]
                    if left is not None and right is not None and left != right:
                        return False
        return True

    def go(i):
        if i == len(cells):
            yield tuple(tuple(r) for r in t)
            return
        a, b = cells[i]
        for v in range(n):
            t[a][b] = v
            if ok():
                yield from go(i + 1)
        t[a][b] = None

    yield from go(0)


def generate_monoids(order: int, max_order: int = MAX_CATALOG_ORDER) -> MonoidCatalog:
    """One monoid per isomorphism class: the tables that equal their own canonical form."""
    if order < 1:
        raise ValueError("order must be >= 1")
    if order > max_order:
        raise TooLarge(f"catalog generation capped at order {max_order}")
    reps = []
    for table in associative_tables(order):
        m = FiniteMonoid(table)
        flat = tuple(x for row in table for x in row)
        if canonical_form(m)[0] == flat:
            reps.append(m)
    reps.sort(key=lambda m: m.table)
    entries = []
    for i, m in enumerate(reps, start=1):
        ident = f"M{order}.{i}"
        m = FiniteMonoid(m.table, ident)
        out = outer_group(m)
        entries.append(CatalogEntry(ident, m, len(out.automorphisms), len(out.inner), out.order))
    return MonoidCatalog(order, entries)


def _classify_one(args) -> dict:
    entry, max_rank, timeout = args
    row = entry.to_dict()
    if max_rank is None:
        return row
    try:
        sk = build_truncated_skeleton(entry.monoid, max_rank)
        cog = outer_group_of_category(sk, timeout=timeout)
        every_inner = len(cog.classes) == 1
        row.update(
            {
                "N": max_rank,
                "category_automorphisms": len(cog.automorphisms),
                "category_out": cog.order,
                "out_matches": cog.is_isomorphism and cog.order == entry.out_order,
                "every_automorphism_inner": every_inner,
                "perfect_agrees": every_inner == entry.perfect,
                "out_trivial_agrees": every_inner == (entry.out_order == 1),
            }
        )
    except FreeActsError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def classify_catalog(catalog: MonoidCatalog, max_rank: Optional[int] = None, timeout: float = DEFAULT_TIMEOUT_SECS, workers: int = 1) -> list:
    """Aut/Int/Out orders and perfect flag for each entry.

    With ``max_rank`` the flags are cross-checked against the category's own
    outer automorphism group at that truncation. Errors are recorded per entry.
    """
    jobs = [(e, max_rank, timeout) for e in catalog.entries]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_classify_one, jobs))
    else:
        rows = [_classify_one(j) for j in jobs]
    return sorted(rows, key=lambda r: r["id"])


def all_catalogs(max_order: int = 3) -> list:
    return [e for k in range(1, max_order + 1) for e in generate_monoids(k).entries]


@dataclass
class TheoremReport:
    monoid: FiniteMonoid
    N: int
    complete: bool = True
    results: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)
    certificates: list = field(default_factory=list)  # (functor, certificate or None)
    timing: dict = field(default_factory=dict)
    outer_order: Optional[int] = None
    perfect: Optional[bool] = None
    every_automorphism_inner: Optional[bool] = None
    search: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.complete and all(self.results.values()) and not self.counterexamples

    def summary(self) -> dict:
        r = self.results
        return {
            "monoid": self.monoid.to_dict(),
            "N": self.N,
            "automorphism_count": len(self.certificates),
            "all_semi_inner": r.get("all_semi_inner", False),
            "outer_order": self.outer_order,
            "outer_matches_monoid": r.get("outer_matches_monoid", False),
        }

    def to_dict(self, include_certificates: bool = True) -> dict:
        d = self.summary()
        d.update(
            {
                "monoid_name": self.monoid.name,
                "complete": self.complete,
                "passed": self.passed,
                "perfect": self.perfect,
                "every_automorphism_inner": self.every_automorphism_inner,
                "results": dict(self.results),
                "counterexamples": self.counterexamples,
                "timing": dict(self.timing),
                "search": dict(self.search),
            }
        )
        if include_certificates:
            d["certificates"] = [
                {"functor": phi.to_dict(), "certificate": None if c is None else c.to_dict()}
                for phi, c in self.certificates
            ]
        return d


def run_theorem_suite(
    monoid: FiniteMonoid,
    max_rank: int = 2,
    timeout: float = DEFAULT_TIMEOUT_SECS,
    max_monoid_order: int = 3,
) -> TheoremReport:
    """Stability, enumeration, semi-inner certification, Out comparison and perfectness for one monoid."""
    report = TheoremReport(monoid, max_rank)
    res = report.results
    t0 = time.monotonic()
    sk = build_truncated_skeleton(monoid, max_rank)
    stats = EnumerationStats()
    try:
        autos = enumerate_category_automorphisms(sk, timeout=timeout, max_monoid_order=max_monoid_order, stats=stats)
    except Timeout as exc:
        report.complete = False
        report.timing["enumerate"] = time.monotonic() - t0
        report.counterexamples.append({"kind": "timeout", "partial_automorphisms": len(exc.partial or [])})
        return report
    report.timing["enumerate"] = stats.seconds
    report.search = {
        "object_maps_tried": stats.object_maps_tried,
        "object_maps_rejected_by_cardinality": stats.object_maps_rejected_by_cardinality,
        "search_nodes": stats.nodes,
        "generators": stats.generators,
    }

    unstable = [phi for phi in autos if not phi.is_stable()]
    res["objects_stable"] = not unstable
    for phi in unstable:
        report.counterexamples.append({"kind": "unstable", "functor": phi.to_dict()})

    t1 = time.monotonic()
    all_ok = True
    for phi in autos:
        cert = semi_inner_certificate(phi)
        report.certificates.append((phi, cert))
        if cert is None or evaluate_certificate(phi, cert):
            all_ok = False
            report.counterexamples.append({"kind": "not_semi_inner", "functor": phi.to_dict()})
    res["all_semi_inner"] = all_ok
    report.timing["certify"] = time.monotonic() - t1

    t2 = time.monotonic()
    auts = enumerate_automorphisms(monoid)
    ident = identity_functor(sk)
    twisted = {s.image: twisted_functor(s, sk) for s in auts}
    hom_ok = all(
        twisted[s.compose(t).image] == twisted[s.image].compose(twisted[t.image]) for s in auts for t in auts
    )
    injective = all(s.is_identity() for s in auts if twisted[s.image] == ident)
    round_trip = all(extract_sigma(twisted[s.image]).image == s.image for s in auts)
    res["twisted_is_injective_homomorphism"] = hom_ok and injective
    res["extract_sigma_round_trip"] = round_trip
    report.timing["twisted"] = time.monotonic() - t2

    t3 = time.monotonic()
    cog = outer_group_of_category(sk, autos)
    res["outer_matches_monoid"] = cog.is_isomorphism and cog.order == cog.monoid_outer.order
    report.outer_order = cog.order
    report.timing["outer"] = time.monotonic() - t3
    if cog.problems:
        report.counterexamples.append({"kind": "outer_mismatch", "problems": cog.problems})

    every_inner = len(cog.classes) == 1
    perfect = len(auts) == 1
    res["perfect_agrees"] = every_inner == perfect
    res["out_trivial_agrees"] = every_inner == (cog.monoid_outer.order == 1)
    if not res["perfect_agrees"]:
        report.counterexamples.append(
            {
                "kind": "perfect_flag_disagrees",
                "aut_order": len(auts),
                "int_order": len(cog.monoid_outer.inner),
                "every_automorphism_inner": every_inner,
            }
        )
    report.timing["total"] = time.monotonic() - t0
    report.perfect = perfect
    report.every_automorphism_inner = every_inner
    log.info("suite %s N=%d: %d automorphisms, passed=%s", monoid.name, max_rank, len(autos), report.passed)
    return report


def reverify_report(data: dict) -> list:
    """Re-run the certificate evaluator on a serialized report; returns per-functor pass flags."""
    monoid = FiniteMonoid.from_dict(data["monoid"])
    sk = build_truncated_skeleton(monoid, int(data["N"]))
    flags = []
    for item in data["certificates"]:
        phi = TruncatedFunctor.from_dict(item["functor"], sk)
        if item["certificate"] is None:
            flags.append(False)
            continue
        cert = SemiInnerCertificate.from_dict(item["certificate"], monoid)
        flags.append(not evaluate_certificate(phi, cert))
    return flags
