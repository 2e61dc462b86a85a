"""Congruence-subgroup combinatorics.

Supports Gamma_0(N), Gamma_1(N) and the principal congruence subgroup
Gamma(N).  Cosets of the projective image P Gamma inside PSL_2(Z) are
enumerated once per group by breadth-first search over the generators
S = (0 -1; 1 0) and T = (1 1; 0 1); the same table serves the index, the
cusp count (orbits of the right T-action) and representative extraction.

Matrices are reduced mod N to identify cosets: each of the three kinds
contains Gamma(N), so the right coset of g depends only on g mod N, and
the mod-N image of the subgroup is exactly the set of residues meeting
its defining congruences.  The BFS state space is therefore bounded by
|SL_2(Z/N)| while the stored representatives keep exact integer entries.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .errors import BadGroupError, BadMatrixError

GAMMA0 = "gamma0"
GAMMA1 = "gamma1"
GAMMA = "gamma"

_KINDS = (GAMMA0, GAMMA1, GAMMA)


@dataclass(frozen=True)
class GroupDescriptor:
    """Identity of a congruence subgroup: kind plus level N."""

    kind: str
    level: int

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise BadGroupError(f"unknown group kind {self.kind!r}")
        if not isinstance(self.level, int) or self.level < 1:
            raise BadGroupError(f"level must be a positive integer, got {self.level!r}")

    @classmethod
    def parse(cls, text: str) -> "GroupDescriptor":
        """Parse ``gamma0:N``, ``gamma1:N`` or ``gamma:N``."""
        kind, sep, level = text.strip().partition(":")
        if not sep:
            raise BadGroupError(f"expected kind:level, got {text!r}")
        try:
            n = int(level)
        except ValueError:
            raise BadGroupError(f"bad level in {text!r}") from None
        return cls(kind, n)

    def __str__(self):
        return f"{self.kind}:{self.level}"


@dataclass(frozen=True)
class IntegerMatrix:
    """2x2 integer matrix; group elements have determinant 1."""

    a: int
    b: int
    c: int
    d: int

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def trace(self) -> int:
        return self.a + self.d

    def __mul__(self, other):
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return IntegerMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self):
        return IntegerMatrix(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> "IntegerMatrix":
        if self.det() != 1:
            raise BadMatrixError("inverse requires determinant 1")
        return IntegerMatrix(self.d, -self.b, -self.c, self.a)

    def mod(self, n: int) -> tuple:
        return (self.a % n, self.b % n, self.c % n, self.d % n)

    def entries(self):
        return ((self.a, self.b), (self.c, self.d))


IDENTITY = IntegerMatrix(1, 0, 0, 1)
GEN_S = IntegerMatrix(0, -1, 1, 0)
GEN_T = IntegerMatrix(1, 1, 0, 1)


def _congruences_hold(a, b, c, d, group: GroupDescriptor) -> bool:
    n = group.level
    if c % n != 0:
        return False
    if group.kind == GAMMA0:
        return True
    if a % n != 1 % n or d % n != 1 % n:
        return False
    if group.kind == GAMMA1:
        return True
    return b % n == 0


def is_member(mat: IntegerMatrix, group: GroupDescriptor, projective: bool = False) -> bool:
    """Membership test; with ``projective`` the sign is quotiented out."""
    if mat.det() != 1:
        raise BadMatrixError(f"matrix has determinant {mat.det()}, expected 1")
    if _congruences_hold(mat.a, mat.b, mat.c, mat.d, group):
        return True
    if projective:
        return _congruences_hold(-mat.a, -mat.b, -mat.c, -mat.d, group)
    return False


def contains_minus_identity(group: GroupDescriptor) -> bool:
    if group.kind == GAMMA0:
        return True
    return group.level <= 2


def _prime_divisors(n: int):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


def p_index(group: GroupDescriptor) -> int:
    """Index of the projective image in PSL_2(Z), by closed formula."""
    n = group.level
    primes = _prime_divisors(n)
    if group.kind == GAMMA0:
        idx = n
        for p in primes:
            idx = idx // p * (p + 1)
        return idx
    if group.kind == GAMMA1:
        if n <= 2:
            return 1 if n == 1 else 3
        idx = n * n
        for p in primes:
            idx = idx // (p * p) * (p * p - 1)
        return idx // 2
    if n <= 2:
        return 1 if n == 1 else 6
    idx = n ** 3
    for p in primes:
        idx = idx // (p * p) * (p * p - 1)
    return idx // 2


def _image_mod_level(group: GroupDescriptor):
    """All residues mod N satisfying the defining congruences.

    The reduction SL_2(Z) -> SL_2(Z/N) is surjective and each kind is the
    full preimage of this set, so it is exactly the mod-N image.
    """
    n = group.level
    if n == 1:
        return [(0, 0, 0, 0)]
    if group.kind == GAMMA:
        return [(1 % n, 0, 0, 1 % n)]
    if group.kind == GAMMA1:
        return [(1 % n, b, 0, 1 % n) for b in range(n)]
    out = []
    for a in range(n):
        try:
            d = pow(a, -1, n)
        except ValueError:
            continue
        for b in range(n):
            out.append((a, b, 0, d))
    return out


def _mul_mod(x, y, n):
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % n, (a * f + b * h) % n, (c * e + d * g) % n, (c * f + d * h) % n)


class CosetTable:
    """Right-coset data for P Gamma \\ PSL_2(Z), built by BFS over S, T."""

    def __init__(self, group: GroupDescriptor):
        self.group = group
        self.reps: list[IntegerMatrix] = []
        self._coset_of: dict[tuple, int] = {}
        self._build()

    def _build(self):
        n = self.group.level
        image = _image_mod_level(self.group)
        queue = [IDENTITY]
        head = 0
        coset_of = self._coset_of
        while head < len(queue):
            g = queue[head]
            head += 1
            key = g.mod(n)
            if key in coset_of:
                continue
            idx = len(self.reps)
            self.reps.append(g)
            # mark every residue of the coset, projectively: +/- (image * g)
            for im in image:
                r = _mul_mod(im, key, n)
                coset_of[r] = idx
                coset_of[tuple(-x % n for x in r)] = idx
            queue.append(g * GEN_S)
            queue.append(g * GEN_T)

    def __len__(self):
        return len(self.reps)

    def coset_index(self, mat: IntegerMatrix) -> int:
        return self._coset_of[mat.mod(self.group.level)]

    def t_action(self):
        """Permutation induced on cosets by right multiplication by T."""
        return [self.coset_index(rep * GEN_T) for rep in self.reps]


_TABLE_CACHE: dict[GroupDescriptor, CosetTable] = {}
_TABLE_LOCK = threading.Lock()


def coset_table(group: GroupDescriptor) -> CosetTable:
    with _TABLE_LOCK:
        table = _TABLE_CACHE.get(group)
        if table is None:
            table = CosetTable(group)
            _TABLE_CACHE[group] = table
    return table


def coset_reps(group: GroupDescriptor):
    """A complete, duplicate-free list of coset representatives."""
    return list(coset_table(group).reps)


def cusp_count(group: GroupDescriptor) -> int:
    """Number of cusps: orbits of the right T-action on the coset space."""
    perm = coset_table(group).t_action()
    seen = [False] * len(perm)
    orbits = 0
    for start in range(len(perm)):
        if seen[start]:
            continue
        orbits += 1
        i = start
        while not seen[i]:
            seen[i] = True
            i = perm[i]
    return orbits


def kappa(group: GroupDescriptor) -> int:
    """floor(index/6) + 1 - #cusps; the number of leading coefficients of
    the unitary part that pin down a canonical decomposition.  May be
    negative for some genus-zero groups; consumers clamp as needed."""
    return p_index(group) // 6 + 1 - cusp_count(group)


@dataclass(frozen=True)
class SubgroupInvariants:
    p_index: int
    cusp_count: int
    kappa: int
    contains_minus_identity: bool


def invariants(group: GroupDescriptor) -> SubgroupInvariants:
    idx = p_index(group)
    cusps = cusp_count(group)
    return SubgroupInvariants(
        p_index=idx,
        cusp_count=cusps,
        kappa=idx // 6 + 1 - cusps,
        contains_minus_identity=contains_minus_identity(group),
    )


def is_parabolic_trace2(mat: IntegerMatrix) -> bool:
    """Parabolic of trace exactly 2 (the identity excluded)."""
    if mat.det() != 1:
        raise BadMatrixError(f"matrix has determinant {mat.det()}, expected 1")
    return mat.trace() == 2 and mat != IDENTITY


def j_twist(mat: IntegerMatrix) -> IntegerMatrix:
    """Conjugation by diag(-1, 1): negates the off-diagonal entries."""
    return IntegerMatrix(mat.a, -mat.b, -mat.c, mat.d)


def j_normalizes(group: GroupDescriptor) -> bool:
    """Whether conjugation by diag(-1, 1) maps the group onto itself.

    Checked directly: the group is the preimage of its mod-N image, and
    the twist acts entrywise, so it suffices that every image residue
    still satisfies the congruences after the off-diagonal sign flip.
    """
    for (a, b, c, d) in _image_mod_level(group):
        if not _congruences_hold(a, -b, -c, d, group):
            return False
    return True
