"""ij-compression of sets and set systems.

The ij-compression of a single set replaces element j by element i when
j is present and i is absent, and otherwise leaves the set alone.  On a
whole system the compressed image of a member is kept only if it is new;
members whose image already belongs to the system stay as they are, so
the system size never changes.  Compressing with i < j never decreases
the number of maximal chains, which makes "left-compressed" (fixed by
every C_ij with i < j) a safe normal form for extremal searches.

Termination of the left-compression sweep loop: every application that
changes the system moves at least one set's element j to a smaller i, so
the total element sum over all member sets strictly decreases.  That sum
(``compression_weight``) is a nonnegative integer, bounding the number
of changing applications.
"""

from __future__ import annotations

from .lattice import SetSystem


def _check_pair(i: int, j: int, n: int) -> None:
    if i == j:
        raise ValueError("compression needs two distinct elements")
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"elements {i}, {j} out of range 1..{n}")


def compress_set(mask: int, i: int, j: int) -> int:
    """Replace j by i in the set when i is absent and j is present."""
    if i == j or i < 1 or j < 1:
        raise ValueError("compression needs two distinct 1-based elements")
    bi = 1 << (i - 1)
    bj = 1 << (j - 1)
    if not (mask & bi) and (mask & bj):
        return (mask ^ bj) | bi
    return mask


def compress_system(family: SetSystem, i: int, j: int) -> SetSystem:
    """Apply the ij-compression to every member set.

    A member whose compressed image already belongs to the family is kept
    unchanged (the image is kept too, by its own membership), so the
    result always has the same size as the input.
    """
    _check_pair(i, j, family.n)
    out = []
    for mask in family.masks():
        image = compress_set(mask, i, j)
        if image == mask or image in family:
            out.append(mask)
        else:
            out.append(image)
    return SetSystem(family.n, out)


def is_left_compressed(family: SetSystem) -> bool:
    """True when every C_ij with i < j fixes the family."""
    n = family.n
    for mask in family.masks():
        for partner in compression_partners(mask, n):
            if partner not in family:
                return False
    return True


def compression_partners(mask: int, n: int) -> tuple[int, ...]:
    """All strict left-compression images of a set: C_ij(mask) over i < j
    where the compression actually moves the set.

    Each partner has the same size and is numerically smaller than mask,
    so in any (size, mask)-ascending enumeration the partners of a set
    come strictly before it.  A family is left-compressed exactly when it
    contains every partner of every member.
    """
    partners = []
    for j in range(2, n + 1):
        bj = 1 << (j - 1)
        if not mask & bj:
            continue
        for i in range(1, j):
            bi = 1 << (i - 1)
            if not mask & bi:
                partners.append((mask ^ bj) | bi)
    return tuple(sorted(set(partners)))


def left_compress(family: SetSystem) -> SetSystem:
    """Apply C_ij for all pairs i < j, sweeping in lexicographic order,
    until no compression changes the family.

    The fixpoint reached may depend on the sweep order; any fixpoint has
    the same size and at least as many maximal chains as the input, which
    is all the normal form is used for.
    """
    n = family.n
    current = family
    changed = True
    while changed:
        changed = False
        for i in range(1, n):
            for j in range(i + 1, n + 1):
                nxt = compress_system(current, i, j)
                if nxt != current:
                    current = nxt
                    changed = True
    return current


def compression_weight(family: SetSystem) -> int:
    """Sum of all elements over all member sets.

    Strictly decreases under every changing left compression; used by the
    tests to certify that left_compress terminates.
    """
    total = 0
    for mask in family.masks():
        rest = mask
        while rest:
            low = rest & -rest
            total += low.bit_length()
            rest ^= low
    return total
