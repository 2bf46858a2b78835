"""
Microframe codecs with event embedding
======================================

Three built-in plans put an event position into the spare capacity of a
frame: a stamp in the spare bits, an inserted event unit with a save box,
and an inserted event unit in one extra stream slot.
"""

import numpy as np

from lingmux import EventStamp, TransferUnit, codec

rng = np.random.default_rng(3)

for name in codec.PLAN_NAMES:
    plan = codec.get_plan(name)
    c = plan.config
    print(f"\n{name}: {plan.mode.value}, N={c.N}, n_e={c.n_e}, k={c.k}, s={c.s}")

    duty = [TransferUnit.data(int(x)) for x in rng.integers(0, 256, plan.n_p)]
    duty[5] = TransferUnit.ctrl(0)
    if plan.mode is codec.Mode.SPARE_STAMP:
        event = EventStamp(123456)
    else:
        event = plan.unit_event(7, 3)  # octet slot 7, sub-position 3

    bits = codec.encode_frame(plan, duty, event)
    print("payload bits:", bits.size, "ones:", int(bits.sum()))

    back, got, spare = codec.decode_frame(plan, bits)
    assert back == duty and got == event
    print("event back:", got.position, "spare field:", bin(spare))

# the wire form is little-endian hex
plan = codec.get_plan("t-10g")
text = codec.payload_to_hex(codec.encode_payload(plan, [0] * 400, plan.unit_event(0, 0)), plan.v)
print("\nt-10g hex head:", text[:24], "...", len(text), "digits")
