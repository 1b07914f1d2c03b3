#!/usr/bin/env python3
"""Why the symplectic rook monoid is not closed under arbitrary
conjugation by permutations.

The witness sigma is a full-rank orthogonal element, s is a plain
permutation of {1..8}; conjugating sigma by s breaks the mirror-commuting
condition, so the conjugate leaves SR_8 even though sigma lives in the
smaller OR_8.
"""

from rookmonoids import (
    compose,
    conjugation_escape_witness,
    format_element_text,
    in_unit_group,
    invert,
    is_member,
    theta,
)

n = 8
sigma, s = conjugation_escape_witness(n)
conj = compose(compose(invert(s), sigma), s)

print(f"sigma               = {format_element_text(sigma)}")
print(f"s                   = {format_element_text(s)}")
print(f"s^-1 sigma s        = {format_element_text(conj)}")
print(f"sigma in OR_{n}       : {is_member('OR', sigma)}")
print(f"sigma in SR_{n}       : {is_member('SR', sigma)}")
print(f"s mirror-commuting  : {in_unit_group('SR', s)}")
print(f"conjugate in SR_{n}   : {is_member('SR', conj)}")
print()
print("mirror condition point by point (value at the mirror of i vs the")
print("mirror of the value at i):")
for i in range(1, n + 1):
    left = conj.images[theta(n, i) - 1]
    right = theta(n, conj.images[i - 1])
    marker = "" if left == right else "   <- broken"
    print(f"  i={i}: {left:2d} vs {right:2d}{marker}")
