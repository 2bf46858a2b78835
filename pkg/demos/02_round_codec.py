"""
Root and affix: one multiplexing round
======================================

Every unit value of an alphabet with N = N_r * N_b items splits into a
root digit in base N_r and an affix of log2(N_b) raw bits.  Only the roots
need arithmetic; the affixes pass through untouched.
"""

import random

from lingmux import Alphabet, decode_round, echo_sample, encode_round, min_bits_for

a = Alphabet(272)
print("N_r, N_b:", a.N_r, a.N_b)

cw = encode_round([17, 1], a)
print("root", cw.root, "affix", cw.affix, "affix bits", cw.affix_bits)
print("decoded", decode_round(cw, a))

# the plain base-N weighting of the same units
print("echo", echo_sample([17, 1], a))

# ten units of 272 items need 41 root bits plus 40 affix bits
print("root bits for 10 units:", min_bits_for(a.N_r, 10))

rng = random.Random(0)
units = [rng.randrange(a.N) for _ in range(10)]
cw = encode_round(units, a)
assert decode_round(cw, a) == units
print("random round:", units, "->", hex(cw.root), hex(cw.affix))
