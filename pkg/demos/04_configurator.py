"""
General configurator: partial rounds and gathering
==================================================

When the target scope does not split evenly, one partial round covers the
rest.  Gathering collates g units into a span whose head alone carries root
information.
"""

from lingmux import plan

# rounds of 11 units over a 257-unit stream: 23 full rounds and one of 4
kr = plan.configure(2080, 272, 1, 1, 11, 257)
print(kr.describe())

# the largest scope that fits t = 8 n_e + 1, for a few moduli
for N in (257, 258, 260, 264, 268, 272):
    print(N, plan.max_ne(N, 1))

# gathered configurations
print(plan.configure(3211, 272, 8, 1, 56, 400).describe())
print(plan.configure(3250, 272, 2, 1, 14, 402).describe())

# one unit too many per round and capacity runs out
try:
    plan.configure(2080, 272, 1, 1, 12, 257)
except plan.CapacityError as exc:
    print("rejected:", exc)

# free samples left over in one round, and raw redundancy of a frame
eb = plan.echo_budget(9, 5, 16, 25)
print("free samples:", eb.rest >> 25, "x 2^25")
print(f"redundancy 2080/256: {float(plan.redundancy(2080, 256)):.2%}")
