"""Finite semigroups, monoids and groups given by explicit multiplication tables.

Elements are always referred to by their index in ``labels``; labels are only
used for display and serialization.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np


class AlgebraError(ValueError):
    pass


class QuotientUndefined(AlgebraError):
    pass


class Semigroup:
    kind = "semigroup"

    def __init__(self, labels: Sequence, table: Sequence[Sequence[int]], *, check: bool = True):
        self.labels = tuple(labels)
        self.table = tuple(tuple(int(v) for v in row) for row in table)
        if check:
            self._check_table()

    def _check_table(self):
        n = self.size
        if n == 0:
            raise AlgebraError("empty carrier")
        if len(set(self.labels)) != n:
            raise AlgebraError("duplicate element labels")
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise AlgebraError(f"table must be {n}x{n}")
        if any(not 0 <= v < n for row in self.table for v in row):
            raise AlgebraError("table entry out of range")
        t = self.np_table
        bad = np.argwhere(t[t, :] != t[:, t])
        if len(bad):
            i, j, k = bad[0]
            raise AlgebraError(f"not associative at ({self.labels[i]}, {self.labels[j]}, {self.labels[k]})")

    def __repr__(self):
        return f"{type(self).__name__}(size={self.size})"

    def __eq__(self, other):
        return (
            type(self) is type(other)
            and self.labels == other.labels
            and self.table == other.table
            and getattr(self, "identity", None) == getattr(other, "identity", None)
        )

    def __hash__(self):
        return hash((type(self).__name__, self.labels, self.table))

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def elements(self) -> range:
        return range(self.size)

    @cached_property
    def np_table(self) -> np.ndarray:
        return np.array(self.table, dtype=np.int64).reshape(self.size, self.size)

    def index(self, label) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            pass
        # JSON round trips turn labels into strings
        for i, lab in enumerate(self.labels):
            if str(lab) == str(label):
                return i
        raise KeyError(f"no element labelled {label!r}")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def product(self, items: Iterable[int]) -> int:
        it = iter(items)
        try:
            acc = next(it)
        except StopIteration:
            raise AlgebraError("empty product in a semigroup") from None
        for x in it:
            acc = self.table[acc][x]
        return acc

    def power(self, s: int, k: int) -> int:
        if k < 1:
            raise AlgebraError("semigroup powers start at 1")
        acc = s
        for _ in range(k - 1):
            acc = self.table[acc][s]
        return acc

    def commute(self, a: int, b: int) -> bool:
        return self.table[a][b] == self.table[b][a]

    def is_idempotent(self, s: int) -> bool:
        return self.table[s][s] == s

    def power_cycle(self, s: int) -> tuple[list[int], int]:
        """Return the powers ``[s, s^2, ...]`` up to the first repeat and the
        position where the cycle starts."""
        seq = [s]
        pos = {s: 0}
        x = s
        while True:
            x = self.table[x][s]
            if x in pos:
                return seq, pos[x]
            pos[x] = len(seq)
            seq.append(x)

    @cached_property
    def div_matrix(self) -> tuple[tuple[bool, ...], ...]:
        """``div_matrix[s][t]`` is true iff ``s`` is a product with ``t`` among its factors."""
        n = self.size
        t = self.np_table
        rows = np.zeros((n, n), dtype=bool)
        for b in range(n):
            reach = np.zeros(n, dtype=bool)
            reach[b] = True
            reach[t[b, :]] = True
            left = t[:, b]
            reach[left] = True
            reach[t[left, :].ravel()] = True
            rows[:, b] = reach
        return tuple(tuple(bool(v) for v in row) for row in rows)

    @cached_property
    def sim_class_of(self) -> tuple[int, ...]:
        d = self.div_matrix
        cls = [-1] * self.size
        count = 0
        for s in self.elements:
            if cls[s] >= 0:
                continue
            for t in self.elements:
                if d[s][t] and d[t][s]:
                    cls[t] = count
            count += 1
        return tuple(cls)

    def is_band(self) -> bool:
        return all(self.table[s][s] == s for s in self.elements)

    def is_right_normal_band(self) -> bool:
        if not self.is_band():
            return False
        t = self.np_table
        # r s t == s r t for all r, s, t
        rs_t = t[t, :]
        sr_t = t[t.T, :]
        return bool(np.array_equal(rs_t, sr_t))

    def is_semilattice(self) -> bool:
        return self.is_band() and self.is_abelian()

    def is_abelian(self, members: Iterable[int] | None = None) -> bool:
        ms = list(self.elements if members is None else members)
        tab = self.table
        return all(tab[a][b] == tab[b][a] for i, a in enumerate(ms) for b in ms[i + 1:])


class Monoid(Semigroup):
    kind = "monoid"

    def __init__(self, labels, table, identity: int, *, check: bool = True):
        super().__init__(labels, table, check=check)
        self.identity = int(identity)
        if check:
            e = self.identity
            if not 0 <= e < self.size:
                raise AlgebraError("identity out of range")
            if any(self.table[e][x] != x or self.table[x][e] != x for x in self.elements):
                raise AlgebraError(f"{self.labels[e]!r} is not an identity")

    def product(self, items: Iterable[int]) -> int:
        acc = self.identity
        for x in items:
            acc = self.table[acc][x]
        return acc

    def power(self, s: int, k: int) -> int:
        if k < 0:
            raise AlgebraError("negative power in a monoid")
        acc = self.identity
        for _ in range(k):
            acc = self.table[acc][s]
        return acc


class Group(Monoid):
    kind = "group"

    def __init__(self, labels, table, identity: int, inverse: Sequence[int] | None = None, *, check: bool = True):
        super().__init__(labels, table, identity, check=check)
        if inverse is None:
            inverse = []
            for x in self.elements:
                inv = [y for y in self.elements if self.table[x][y] == self.identity]
                if not inv:
                    raise AlgebraError(f"{self.labels[x]!r} has no inverse")
                inverse.append(inv[0])
        self.inverse = tuple(int(v) for v in inverse)
        if check:
            e = self.identity
            if len(self.inverse) != self.size or any(
                self.table[x][self.inverse[x]] != e or self.table[self.inverse[x]][x] != e for x in self.elements
            ):
                raise AlgebraError("inverse map is wrong")


def as_monoid(S: Semigroup) -> Monoid:
    """Upgrade a semigroup that happens to have an identity."""
    if isinstance(S, Monoid):
        return S
    for e in S.elements:
        if all(S.table[e][x] == x == S.table[x][e] for x in S.elements):
            return Monoid(S.labels, S.table, e, check=False)
    raise AlgebraError("semigroup has no identity")


# --------------------------------------------------------------------------- subalgebras


def closure(parent: Semigroup, gens: Iterable[int], kind: str | None = None) -> frozenset[int]:
    kind = kind or parent.kind
    tab = parent.table
    members = set(gens)
    if kind in ("monoid", "group") and isinstance(parent, Monoid):
        members.add(parent.identity)
    frontier = list(members)
    while frontier:
        new = []
        for a in frontier:
            for b in list(members):
                for c in (tab[a][b], tab[b][a]):
                    if c not in members:
                        members.add(c)
                        new.append(c)
        frontier = new
    return frozenset(members)


class SubAlgebra:
    """A subset of ``parent`` closed under its multiplication.

    ``kind`` is one of ``semigroup``, ``monoid`` (must contain the parent's
    identity) or ``group`` (has a local identity and local inverses, which
    need not be the parent's identity).
    """

    def __init__(self, parent: Semigroup, members: Iterable[int], kind: str | None = None, *, check: bool = True):
        self.parent = parent
        self.members = tuple(sorted(set(int(m) for m in members)))
        self.kind = kind or parent.kind
        self.local_identity = None
        if self.kind not in ("semigroup", "monoid", "group"):
            raise AlgebraError(f"unknown kind {self.kind!r}")
        if not self.members:
            raise AlgebraError("empty subalgebra")
        if check:
            self._check()
        if self.kind == "group" and self.local_identity is None:
            self.local_identity = self._find_local_identity()
        elif self.kind == "monoid":
            self.local_identity = parent.identity

    def _find_local_identity(self):
        tab = self.parent.table
        for e in self.members:
            if all(tab[e][g] == g == tab[g][e] for g in self.members):
                return e
        return None

    def _check(self):
        tab = self.parent.table
        ms = set(self.members)
        if any(not 0 <= m < self.parent.size for m in ms):
            raise AlgebraError("member out of range")
        if any(tab[a][b] not in ms for a in ms for b in ms):
            raise AlgebraError("members not closed under multiplication")
        if self.kind == "monoid":
            if not isinstance(self.parent, Monoid) or self.parent.identity not in ms:
                raise AlgebraError("submonoid must contain the identity")
        if self.kind == "group":
            e = self._find_local_identity()
            if e is None:
                raise AlgebraError("subgroup has no local identity")
            if any(not any(tab[g][h] == e == tab[h][g] for h in ms) for g in ms):
                raise AlgebraError("subgroup element without local inverse")
            self.local_identity = e

    def __contains__(self, x):
        return x in self._member_set

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __repr__(self):
        labs = [self.parent.labels[m] for m in self.members]
        return f"SubAlgebra({self.kind}, {labs})"

    @cached_property
    def _member_set(self):
        return frozenset(self.members)

    @classmethod
    def generated(cls, parent: Semigroup, gens: Iterable[int], kind: str | None = None) -> "SubAlgebra":
        kind = kind or parent.kind
        if kind == "group":
            # inside a finite monoid the closure of a group's elements is the subgroup
            members = closure(parent, gens, "semigroup")
        else:
            members = closure(parent, gens, kind)
        return cls(parent, members, kind)

    @classmethod
    def whole(cls, parent: Semigroup) -> "SubAlgebra":
        return cls(parent, parent.elements, parent.kind, check=False)

    def as_algebra(self) -> tuple[Semigroup, tuple[int, ...]]:
        """Standalone copy, plus the embedding (local index -> parent index)."""
        pos = {m: i for i, m in enumerate(self.members)}
        tab = self.parent.table
        labels = [self.parent.labels[m] for m in self.members]
        table = [[pos[tab[a][b]] for b in self.members] for a in self.members]
        if self.kind == "semigroup":
            alg = Semigroup(labels, table, check=False)
        elif self.kind == "monoid":
            alg = Monoid(labels, table, pos[self.parent.identity], check=False)
        else:
            alg = Group(labels, table, pos[self.local_identity], check=False)
        return alg, tuple(self.members)


# --------------------------------------------------------------------------- homomorphisms


class PartialHom:
    """A homomorphism from a subalgebra ``domain`` of ``source`` into ``target``."""

    def __init__(self, source: Semigroup, target: Semigroup, domain: SubAlgebra, mapping: dict, *, check: bool = True):
        self.source = source
        self.target = target
        self.domain = domain
        self.mapping = {int(k): int(v) for k, v in mapping.items()}
        if check:
            self._check()

    def _check(self):
        if self.domain.parent is not self.source and self.domain.parent != self.source:
            raise AlgebraError("domain is not a subalgebra of the source")
        if set(self.mapping) != set(self.domain.members):
            raise AlgebraError("mapping keys must be exactly the domain")
        if any(not 0 <= v < self.target.size for v in self.mapping.values()):
            raise AlgebraError("image out of range")
        t1, t2, f = self.source.table, self.target.table, self.mapping
        for a in self.domain.members:
            for b in self.domain.members:
                if f[t1[a][b]] != t2[f[a]][f[b]]:
                    raise AlgebraError("map is not multiplicative on its domain")
        if self.domain.kind in ("monoid", "group"):
            if not isinstance(self.target, Monoid):
                raise AlgebraError("monoid homomorphism into a non-monoid")
            if self.domain.kind == "monoid" and f[self.source.identity] != self.target.identity:
                raise AlgebraError("identity not preserved")
            if self.domain.kind == "group" and f[self.domain.local_identity] != self.target.identity:
                raise AlgebraError("identity not preserved")

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def __repr__(self):
        src, dst = self.source.labels, self.target.labels
        pairs = ", ".join(f"{src[k]}->{dst[v]}" for k, v in sorted(self.mapping.items()))
        return f"PartialHom({pairs})"

    def __eq__(self, other):
        return isinstance(other, PartialHom) and self.mapping == other.mapping and self.source == other.source

    def __hash__(self):
        return hash(tuple(sorted(self.mapping.items())))

    @property
    def is_total(self) -> bool:
        return len(self.mapping) == self.source.size

    def key(self) -> tuple[int, ...]:
        return tuple(self.mapping[x] for x in sorted(self.mapping))

    @cached_property
    def image(self) -> SubAlgebra:
        kind = "monoid" if self.domain.kind in ("monoid", "group") else "semigroup"
        return SubAlgebra(self.target, set(self.mapping.values()), kind, check=False)

    def extends(self, other: "PartialHom") -> bool:
        return all(self.mapping.get(k) == v for k, v in other.mapping.items())

    @classmethod
    def total(cls, source: Semigroup, target: Semigroup, images: Sequence[int], *, check: bool = True) -> "PartialHom":
        return cls(source, target, SubAlgebra.whole(source), dict(enumerate(images)), check=check)

    @classmethod
    def identity_on(cls, parent: Semigroup, sub: SubAlgebra | None = None) -> "PartialHom":
        sub = sub or SubAlgebra.whole(parent)
        return cls(parent, parent, sub, {m: m for m in sub.members})

    @classmethod
    def from_generators(cls, source, target, domain: SubAlgebra, gen_images: dict) -> "PartialHom":
        """Extend generator images multiplicatively over ``domain``."""
        img = _extend_images(source, target, domain.kind, gen_images)
        if img is None:
            raise AlgebraError("generator images do not extend to a homomorphism")
        mapping = {m: img[m] for m in domain.members}
        if any(v < 0 for v in mapping.values()):
            raise AlgebraError("generators do not generate the domain")
        return cls(source, target, domain, mapping)


def _extend_images(source, target, kind, gen_images: dict) -> list[int] | None:
    img = [-1] * source.size
    known: list[int] = []
    gens: list[int] = []
    if kind in ("monoid", "group"):
        img[source.identity] = target.identity
        known.append(source.identity)
    for g, h in gen_images.items():
        if not _add_generator(source.table, target.table, img, known, gens, g, h):
            return None
    return img


def _add_generator(t1, t2, img, known, gens, g, h) -> bool:
    """Add generator ``g -> h`` and close under right multiplication by all
    generators, checking consistency on every edge of the right Cayley graph."""
    stack = []
    if img[g] >= 0:
        if img[g] != h:
            return False
    else:
        img[g] = h
        known.append(g)
        stack.extend((g, g2) for g2 in gens)
    gens.append(g)
    stack.extend((x, g) for x in known)
    while stack:
        x, y = stack.pop()
        z = t1[x][y]
        v = t2[img[x]][img[y]]
        if img[z] < 0:
            img[z] = v
            known.append(z)
            stack.extend((z, g2) for g2 in gens)
        elif img[z] != v:
            return False
    return True


def generating_set(parent: Semigroup, start: Iterable[int] = (), kind: str | None = None) -> list[int]:
    """Greedy generating set: repeatedly add the least element outside the closure."""
    kind = kind or parent.kind
    gens: list[int] = []
    have = closure(parent, start, kind) if (start or kind != "semigroup") else frozenset()
    for x in parent.elements:
        if x not in have:
            gens.append(x)
            have = closure(parent, list(start) + gens, kind)
    return gens


HOM_FILTERS = ("all", "abelian_image", "abelian_union_of_groups_image")


def enumerate_extending_homs(source: Semigroup, target: Semigroup, partial: PartialHom | None = None,
                             filter: str = "all") -> Iterator[PartialHom]:
    """Yield every total homomorphism ``source -> target`` that extends ``partial``.

    Homomorphisms are of the kind of ``partial.domain`` (monoid homomorphisms
    preserve the identity). The search assigns images to a generating set and
    propagates along the right Cayley graph, so the cost is governed by
    ``|target| ** len(free generators)``.
    """
    if filter not in HOM_FILTERS:
        raise ValueError(f"unknown filter {filter!r}")
    if partial is None:
        partial = PartialHom(source, target, SubAlgebra(source, [source.identity], "monoid"),
                             {source.identity: target.identity}) if isinstance(source, Monoid) else None
    kind = partial.domain.kind if partial is not None else "semigroup"
    if kind == "group":
        kind = "monoid"
    t1, t2 = source.table, target.table
    img = [-1] * source.size
    known: list[int] = []
    gens: list[int] = []
    if kind == "monoid":
        img[source.identity] = target.identity
        known.append(source.identity)
    dom_members = list(partial.domain.members) if partial is not None else []
    if partial is not None:
        fixed = generating_set_within(source, dom_members, kind)
        for g in fixed:
            if not _add_generator(t1, t2, img, known, gens, g, partial.mapping[g]):
                return
        if any(img[d] != partial.mapping[d] for d in dom_members):
            return
    free = generating_set(source, dom_members, kind)

    def rec(i, img, known, gens):
        if i == len(free):
            mapping = dict(enumerate(img))
            if _passes(target, set(img), filter):
                yield PartialHom(source, target, SubAlgebra.whole(source), mapping, check=False)
            return
        g = free[i]
        for h in target.elements:
            img2, known2, gens2 = img[:], known[:], gens[:]
            if _add_generator(t1, t2, img2, known2, gens2, g, h):
                yield from rec(i + 1, img2, known2, gens2)

    yield from rec(0, img, known, gens)


def generating_set_within(parent: Semigroup, members: Sequence[int], kind: str) -> list[int]:
    gens: list[int] = []
    have = closure(parent, [], kind) if kind != "semigroup" else frozenset()
    for x in sorted(members):
        if x not in have:
            gens.append(x)
            have = closure(parent, gens, kind)
    return gens


def _passes(target, image: set, filter: str) -> bool:
    if filter == "all":
        return True
    if not target.is_abelian(image):
        return False
    if filter == "abelian_image":
        return True
    return all(is_regular(target, s) for s in image)


def homomorphisms(source: Semigroup, target: Semigroup) -> Iterator[PartialHom]:
    """All total homomorphisms of the source's own kind (monoid homs for monoids)."""
    return enumerate_extending_homs(source, target, None)


def find_isomorphism(S1: Semigroup, S2: Semigroup) -> PartialHom | None:
    if S1.size != S2.size:
        return None
    if isinstance(S1, Monoid) and isinstance(S2, Monoid):
        homs = homomorphisms(S1, S2)
    else:
        homs = enumerate_extending_homs(Semigroup(S1.labels, S1.table, check=False),
                                        Semigroup(S2.labels, S2.table, check=False), None)
    for h in homs:
        if len(set(h.mapping.values())) == S1.size:
            return h
    return None


# --------------------------------------------------------------------------- predicates


def _parent_and_members(S) -> tuple[Semigroup, Sequence[int]]:
    if isinstance(S, SubAlgebra):
        return S.parent, S.members
    return S, S.elements


def is_abelian(S) -> bool:
    parent, members = _parent_and_members(S)
    return parent.is_abelian(members)


def is_regular(M: Semigroup, s: int) -> bool:
    _, start = M.power_cycle(s)
    return start == 0


@dataclass(frozen=True)
class RegularityWitnesses:
    k_power: int | None
    commuting_t: int | None
    subgroup: SubAlgebra | None
    square_divisor: tuple[int | None, int | None] | None

    def all_present(self) -> bool:
        return None not in (self.k_power, self.commuting_t, self.subgroup, self.square_divisor)

    def all_absent(self) -> bool:
        return (self.k_power, self.commuting_t, self.subgroup, self.square_divisor) == (None,) * 4


def regularity_witnesses(M: Semigroup, s: int) -> RegularityWitnesses:
    """Search independently for each of the four equivalent forms of regularity."""
    tab = M.table
    n = M.size
    k_power = None
    x = s
    for k in range(2, n + 2):
        x = tab[x][s]
        if x == s:
            k_power = k
            break
    s2 = tab[s][s]
    commuting_t = next((t for t in M.elements if tab[s2][t] == s and tab[s][t] == tab[t][s]), None)
    # any subgroup containing s contains the subsemigroup generated by s
    try:
        subgroup = SubAlgebra(M, closure(M, {s}, "semigroup"), "group")
    except AlgebraError:
        subgroup = None
    opts = [None, *M.elements]
    square_divisor = None
    for p in opts:
        left = s2 if p is None else tab[p][s2]
        for q in opts:
            val = left if q is None else tab[left][q]
            if val == s:
                square_divisor = (p, q)
                break
        if square_divisor is not None:
            break
    return RegularityWitnesses(k_power, commuting_t, subgroup, square_divisor)


def is_union_of_subgroups(M) -> bool:
    parent, members = _parent_and_members(M)
    return all(is_regular(parent, s) for s in members)


def div_preorder(S: Semigroup, s: int, t: int) -> bool:
    """``s`` can be written as a product containing ``t`` as a factor."""
    return S.div_matrix[s][t]


def ab_preorder(M: Semigroup, a: int, b: int) -> bool:
    """Some ``c`` commuting with ``b`` has ``b c = a``."""
    tab = M.table
    return any(tab[b][c] == a and tab[c][b] == a for c in M.elements)


def ab_strictly_below(M: Semigroup, a: int, b: int) -> bool:
    return ab_preorder(M, a, b) and not ab_preorder(M, b, a)


def sim_classes(S: Semigroup) -> list[tuple[int, ...]]:
    cls = S.sim_class_of
    out: dict[int, list[int]] = {}
    for s, c in enumerate(cls):
        out.setdefault(c, []).append(s)
    return [tuple(out[c]) for c in sorted(out)]


def quotient_semilattice(S: Semigroup) -> tuple[Semigroup, tuple[int, ...]]:
    """Quotient by mutual divisibility together with the projection map.

    Raises QuotientUndefined when mutual divisibility is not a congruence.
    """
    proj = S.sim_class_of
    classes = sim_classes(S)
    k = len(classes)
    table = [[-1] * k for _ in range(k)]
    tab = S.table
    for a in S.elements:
        for b in S.elements:
            c = proj[tab[a][b]]
            cur = table[proj[a]][proj[b]]
            if cur < 0:
                table[proj[a]][proj[b]] = c
            elif cur != c:
                raise QuotientUndefined(
                    f"product of classes {proj[a]} and {proj[b]} is not well defined")
    labels = [tuple(S.labels[m] for m in cl) if len(cl) > 1 else S.labels[cl[0]] for cl in classes]
    # labels must be unique; the class tuples always are
    labels = [lab if not isinstance(lab, tuple) else "{" + ",".join(map(str, lab)) + "}" for lab in labels]
    labels = _dedupe_labels(labels)
    Q = Semigroup(labels, table)
    if S.is_right_normal_band() and not Q.is_semilattice():
        raise QuotientUndefined("quotient of a right-normal band is not a semilattice")
    return Q, proj


def _dedupe_labels(labels):
    seen: dict = {}
    out = []
    for lab in labels:
        if lab in seen:
            seen[lab] += 1
            lab = f"{lab}#{seen[lab]}"
        else:
            seen[lab] = 0
        out.append(lab)
    return out
