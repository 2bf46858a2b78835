"""
Spare-bit search over a 1000BASE-T1 microframe
===============================================

A microframe carries 450 octet-time units in 3645 payload bits, 45 bits more
than plain octets need.  We look for round scopes n_e and moduli N that
leave spare bits after multiplexing the duty.
"""

from lingmux import plan

v, n_p = 3645, 450

# the largest modulus the whole frame could ever carry
print("N upper bound:", plan.n_upper(v, n_p))

# one row per (n_e, N); rows that do not fit are kept and flagged
rows = plan.search(v, n_p, moduli=[257, 258, 260, 264, 272, 274])
print(len(rows), "rows,", sum(r.feasible for r in rows), "feasible")

# the row with the most spare bits in every round scope
for row in plan.best_per_scope(rows, "s"):
    print(f"n_e={row.n_e:3d} N={row.N} t={row.t}={row.b}+{row.r} {row.alu:>6} k={row.k} s={row.s}")

# a few rows in the CSV layout, with labels taken over the whole grid
labels = plan.status_labels(rows)
excerpt = [r for r in rows if r.n_e in (15, 18)]
print(plan.rows_to_csv(excerpt, v, labels))

# how fine an event can be placed with s spare bits in a 3600 ns frame
for s in (15, 20):
    period, freq = plan.resolution(2**s, 3600.0)
    print(f"s={s}: {period:.2f} ps, {freq:.2f} GHz")
