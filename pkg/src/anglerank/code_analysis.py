"""The binary code of the Galois group, its level-set partition, and the
permutation-group properties the slope theorems consume.

Groups are explicit element lists (tuples); orders stay small at desk scale,
so nothing here needs generator-based machinery.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .galois_engine import (
    SignedPermGroup,
    compose,
    full_map,
    tau_sign_vector,
    tau_underlying_perm,
)


@dataclass(frozen=True)
class Code:
    """Subgroup of F_2^g: the sign vectors of group elements fixing all
    indices."""

    g: int
    words: frozenset  # of 0/1 tuples
    dim: int


@dataclass(frozen=True)
class LevelPartition:
    parts: tuple  # tuple of frozensets, sorted by min element; 0-based indices
    m: int
    g_prime: int


@dataclass(frozen=True)
class PropertyReport:
    transitive: bool
    primitive: bool
    two_transitive: bool
    block_witness: tuple | None  # a nontrivial block, when imprimitive
    affine_embedding: bool | None  # Gbar inside Z/n x| (Z/n)^*; None if untested


@dataclass(frozen=True)
class ReducedData:
    """The stabiliser image H on T_1 with its sign kernel and splitting data."""

    t1: tuple
    h_taus: tuple  # signed permutations of T_1 (local indexing)
    hbar: tuple  # underlying permutations, deduplicated
    c_h_order: int
    split_witness: tuple | None  # (+-1 vector spanning the stable line) or None


def code_of(G: SignedPermGroup) -> Code:
    words = set()
    for tau in G.taus:
        if tau_underlying_perm(tau, G.g) == tuple(range(G.g)):
            words.add(tau_sign_vector(tau, G.g))
    dim = _f2_span_dim(words, G.g)
    assert len(words) == 2**dim, "code must be closed under addition"
    assert tuple([1] * G.g) in words, "complex conjugation must be present"
    for a in words:
        for b in words:
            assert tuple(x ^ y for x, y in zip(a, b)) in words
    return Code(g=G.g, words=frozenset(words), dim=dim)


def _f2_span_dim(words, g: int) -> int:
    basis = []
    for w in words:
        v = sum(bit << i for i, bit in enumerate(w))
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


def level_partition(C: Code) -> LevelPartition:
    """Classes of `i ~ j iff every codeword agrees at i and j`."""
    g = C.g
    key = {}
    for i in range(g):
        key[i] = tuple(w[i] for w in sorted(C.words))
    groups = {}
    for i in range(g):
        groups.setdefault(key[i], []).append(i)
    parts = tuple(
        sorted((frozenset(v) for v in groups.values()), key=min)
    )
    m = len(parts)
    assert sum(len(p) for p in parts) == g
    g_prime = g // m if g % m == 0 else 0
    return LevelPartition(parts=parts, m=m, g_prime=g_prime)


# ---------------------------------------------------------------------------
# permutation group properties (plain permutations as tuples)


def orbit_of(perms, x: int) -> frozenset:
    seen = {x}
    frontier = [x]
    while frontier:
        nxt = []
        for y in frontier:
            for p in perms:
                z = p[y]
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
        frontier = nxt
    return frozenset(seen)


def is_transitive(perms, n: int) -> bool:
    return len(orbit_of(perms, 0)) == n


def minimal_block_containing(perms, n: int, seed: set) -> frozenset:
    """Smallest block containing the seed, by the classic refinement: union
    translates that overlap until stable."""
    block = frozenset(seed)
    changed = True
    while changed:
        changed = False
        for p in perms:
            image = frozenset(p[x] for x in block)
            if image != block and image & block:
                block = block | image
                changed = True
    return block


def find_nontrivial_block(perms, n: int) -> frozenset | None:
    """A block B with 1 < |B| < n, or None (primitive action)."""
    for x in range(1, n):
        block = minimal_block_containing(perms, n, {0, x})
        if len(block) < n:
            return block
    return None


def is_two_transitive(perms, n: int) -> bool:
    if n < 2:
        return False
    seen = {(0, 1)}
    frontier = [(0, 1)]
    while frontier:
        nxt = []
        for pair in frontier:
            for p in perms:
                im = (p[pair[0]], p[pair[1]])
                if im not in seen:
                    seen.add(im)
                    nxt.append(im)
        frontier = nxt
    return len(seen) == n * (n - 1)


def affine_containment(perms, n: int) -> bool | None:
    """Whether the group embeds in Z/n x| (Z/n)^* under some relabelling
    {0..n-1} -> Z/n.  Brute force; None above the size cap."""
    if n > 8:
        return None
    if n == 1:
        return True
    units = [u for u in range(1, n) if _gcd(u, n) == 1]
    affine = {
        tuple((a * x + b) % n for x in range(n)) for a in units for b in range(n)
    }
    for relabel in itertools.permutations(range(n)):
        inv = [0] * n
        for i, r in enumerate(relabel):
            inv[r] = i
        ok = True
        for p in perms:
            conj = tuple(relabel[p[inv[x]]] for x in range(n))
            if conj not in affine:
                ok = False
                break
        if ok:
            return True
    return False


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def group_properties(perms, n: int, test_affine: bool = False) -> PropertyReport:
    perms = sorted(set(tuple(p) for p in perms))
    if not perms:
        raise ValueError("empty group")
    transitive = is_transitive(perms, n)
    block = find_nontrivial_block(perms, n) if transitive and n > 1 else None
    primitive = transitive and n > 1 and block is None
    two_t = is_two_transitive(perms, n)
    affine = affine_containment(perms, n) if test_affine else None
    if two_t:
        assert primitive, "2-transitive must imply primitive"
    if primitive:
        assert transitive
    return PropertyReport(
        transitive=transitive,
        primitive=primitive,
        two_transitive=two_t,
        block_witness=tuple(sorted(block)) if block else None,
        affine_embedding=affine,
    )


# ---------------------------------------------------------------------------
# the reduced sequence on T_1


def stabilizer_image_on_part(G: SignedPermGroup, t1) -> list[tuple]:
    """Signed permutations of T_1 induced by elements stabilising T_1 setwise.

    Local indexing: position k in the sorted T_1 list.  Values k or k + |T_1|
    encode image with sign +1 / -1.
    """
    t1_sorted = sorted(t1)
    pos = {v: k for k, v in enumerate(t1_sorted)}
    size = len(t1_sorted)
    out = set()
    for tau in G.taus:
        fm = full_map(tau, G.g)
        images = [fm[j] for j in t1_sorted]
        base = [im % G.g for im in images]
        if set(base) != set(t1_sorted):
            continue
        local = tuple(
            pos[b] + (size if im >= G.g else 0) for b, im in zip(base, images)
        )
        out.add(local)
    return sorted(out)


def reduced_sequence(
    G: SignedPermGroup, t1, stable_line=None
) -> ReducedData:
    """H, Hbar, C_H and, when a 1-dimensional H-stable subspace is supplied,
    the exact splitting witness: a +-1 vector spanning it."""
    h_taus = stabilizer_image_on_part(G, t1)
    size = len(sorted(t1))
    hbar = sorted({tau_underlying_perm(t, size) for t in h_taus})
    c_h = [t for t in h_taus if tau_underlying_perm(t, size) == tuple(range(size))]
    c_h_order = len(c_h)
    if c_h_order != 2:
        raise ValueError(
            f"sign kernel C_H has order {c_h_order}, expected 2 (upstream bug)"
        )
    witness = None
    if stable_line is not None:
        witness = _split_witness(h_taus, size, stable_line)
    return ReducedData(
        t1=tuple(sorted(t1)),
        h_taus=tuple(h_taus),
        hbar=tuple(hbar),
        c_h_order=c_h_order,
        split_witness=witness,
    )


def apply_signed(tau, vec, size):
    """Image of a rational vector under a local signed permutation."""
    out = [Fraction(0)] * size
    for j in range(size):
        t = tau[j]
        if t < size:
            out[t] += Fraction(vec[j])
        else:
            out[t - size] -= Fraction(vec[j])
    return out


def _split_witness(h_taus, size, stable_line) -> tuple | None:
    """Scale the stable line to a +-1 vector and verify H maps it to +-itself.

    Returns the vector, or None if the line is not H-stable with +-1 entries
    (which would contradict the one-dimensional-subspace lemma).
    """
    vec = [Fraction(x) for x in stable_line]
    nonzero = [abs(x) for x in vec if x]
    if not nonzero or any(abs(x) != nonzero[0] for x in vec if x) or len(nonzero) != size:
        return None
    scaled = tuple(1 if x > 0 else -1 for x in vec)
    for tau in h_taus:
        img = apply_signed(tau, scaled, size)
        if tuple(img) != scaled and tuple(-x for x in img) != scaled:
            return None
    return scaled
