"""Base Dung semantics via subset enumeration over bit vectors.

This module is the trusted oracle for everything downstream, so it favors
directness over speed: sets are integer masks indexed by argument order,
and the maximality-based semantics compare against all candidate sets.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, List, Tuple

from .config import DEFAULT_CAPS, Caps
from .errors import CapExceeded, RafkitError
from .model import AF, Semantics


class AFIndex:
    """Bitmask view of an AF."""

    def __init__(self, af: AF):
        self.af = af
        self.names = list(af.arguments)
        self.index = {a: i for i, a in enumerate(self.names)}
        n = len(self.names)
        self.n = n
        self.full = (1 << n) - 1
        self.att_out = [0] * n
        self.att_in = [0] * n
        for (a, b) in af.attacks:
            self.att_out[self.index[a]] |= 1 << self.index[b]
            self.att_in[self.index[b]] |= 1 << self.index[a]

    def mask_of(self, members: Iterable[str]) -> int:
        m = 0
        for a in members:
            try:
                m |= 1 << self.index[a]
            except KeyError:
                raise RafkitError(f"argument {a!r} not in the framework") from None
        return m

    def set_of(self, mask: int) -> Tuple[str, ...]:
        return tuple(self.names[i] for i in range(self.n) if mask >> i & 1)

    def attacked_by(self, mask: int) -> int:
        out = 0
        m = mask
        while m:
            low = m & -m
            out |= self.att_out[low.bit_length() - 1]
            m ^= low
        return out

    def range_of(self, mask: int) -> int:
        return mask | self.attacked_by(mask)

    def conflict_free(self, mask: int) -> bool:
        return not (self.attacked_by(mask) & mask)

    def defended(self, mask: int) -> int:
        """Mask of arguments all of whose attackers are attacked by mask."""
        countered = self.attacked_by(mask)
        out = 0
        for i in range(self.n):
            if not (self.att_in[i] & ~countered):
                out |= 1 << i
        return out

    def admissible(self, mask: int) -> bool:
        return self.conflict_free(mask) and not (mask & ~self.defended(mask))

    def complete(self, mask: int) -> bool:
        return self.conflict_free(mask) and self.defended(mask) == mask

    def stable(self, mask: int) -> bool:
        return self.conflict_free(mask) and self.range_of(mask) == self.full


@lru_cache(maxsize=256)
def _index(af: AF) -> AFIndex:
    return AFIndex(af)


@lru_cache(maxsize=256)
def _admissible_masks(af: AF) -> Tuple[int, ...]:
    idx = _index(af)
    return tuple(m for m in range(1 << idx.n) if idx.admissible(m))


@lru_cache(maxsize=256)
def _conflict_free_masks(af: AF) -> Tuple[int, ...]:
    idx = _index(af)
    return tuple(m for m in range(1 << idx.n) if idx.conflict_free(m))


def _check_cap(af: AF, caps: Caps) -> None:
    if len(af.arguments) > caps.af_arguments:
        raise CapExceeded("AF subset enumeration", len(af.arguments),
                          caps.af_arguments)


def defended_set(af: AF, members: Iterable[str]) -> Tuple[str, ...]:
    """def_F(S): arguments whose every attacker is attacked by S."""
    idx = _index(af)
    return idx.set_of(idx.defended(idx.mask_of(members)))


def range_of(af: AF, members: Iterable[str]) -> Tuple[str, ...]:
    """S plus everything S attacks."""
    idx = _index(af)
    return idx.set_of(idx.range_of(idx.mask_of(members)))


def _satisfies_mask(af: AF, mask: int, sigma: Semantics, caps: Caps) -> bool:
    idx = _index(af)
    if sigma == Semantics.CONF:
        return idx.conflict_free(mask)
    if sigma == Semantics.ADM:
        return idx.admissible(mask)
    if sigma == Semantics.COMP:
        return idx.complete(mask)
    if sigma == Semantics.STAB:
        return idx.stable(mask)
    _check_cap(af, caps)
    if sigma == Semantics.PREF:
        if not idx.admissible(mask):
            return False
        return all(not idx.admissible(sup)
                   for sup in _strict_supersets(mask, idx.full))
    if sigma in (Semantics.SEMIST, Semantics.STAG):
        if sigma == Semantics.SEMIST:
            if not idx.admissible(mask):
                return False
            pool = _admissible_masks(af)
        else:
            if not idx.conflict_free(mask):
                return False
            pool = _conflict_free_masks(af)
        rng = idx.range_of(mask)
        for m in pool:
            mr = idx.range_of(m)
            if mr & ~rng and not (rng & ~mr):  # rng strictly below mr
                return False
        return True
    raise RafkitError(f"unknown semantics {sigma}")


def _strict_supersets(mask: int, full: int):
    rest = full & ~mask
    sub = rest
    while sub:
        yield mask | sub
        sub = (sub - 1) & rest


def satisfies(af: AF, members: Iterable[str], sigma: Semantics,
              caps: Caps = DEFAULT_CAPS) -> bool:
    """Membership test: is S a sigma-extension of the AF?"""
    idx = _index(af)
    return _satisfies_mask(af, idx.mask_of(members), sigma, caps)


def extension_masks(af: AF, sigma: Semantics, caps: Caps = DEFAULT_CAPS) -> List[int]:
    """All extensions as masks, ascending."""
    _check_cap(af, caps)
    idx = _index(af)
    if sigma == Semantics.CONF:
        return list(_conflict_free_masks(af))
    if sigma == Semantics.ADM:
        return list(_admissible_masks(af))
    if sigma == Semantics.COMP:
        return [m for m in _admissible_masks(af) if idx.defended(m) == m]
    if sigma == Semantics.STAB:
        return [m for m in _conflict_free_masks(af) if idx.range_of(m) == idx.full]
    if sigma == Semantics.PREF:
        adm = set(_admissible_masks(af))
        return [m for m in sorted(adm)
                if not any(s in adm for s in _strict_supersets(m, idx.full))]
    if sigma == Semantics.SEMIST:
        pool = _admissible_masks(af)
    elif sigma == Semantics.STAG:
        pool = _conflict_free_masks(af)
    else:
        raise RafkitError(f"unknown semantics {sigma}")
    ranges = {m: idx.range_of(m) for m in pool}
    out = []
    for m in pool:
        rng = ranges[m]
        if not any(ranges[o] & ~rng and not (rng & ~ranges[o]) for o in pool):
            out.append(m)
    return out


def enumerate_extensions(af: AF, sigma: Semantics,
                         caps: Caps = DEFAULT_CAPS) -> List[Tuple[Tuple[str, ...], Tuple[str, ...]]]:
    """All sigma-extensions with their ranges, sorted by member names."""
    idx = _index(af)
    pairs = [(idx.set_of(m), idx.set_of(idx.range_of(m)))
             for m in extension_masks(af, sigma, caps)]
    return sorted(pairs, key=lambda p: p[0])
