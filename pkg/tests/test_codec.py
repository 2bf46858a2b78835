import random

import numpy as np
import pytest

from lingmux.codec import (
    NO_EVENT,
    CodecError,
    EventStamp,
    Mode,
    NonNativeRootError,
    SaveBox,
    bits_to_payload,
    build_plan,
    decode_frame,
    decode_payload,
    encode_frame,
    encode_payload,
    extract_event_integral,
    extract_event_savebox,
    get_plan,
    hex_to_payload,
    insert_event_integral,
    insert_event_savebox,
    pack_stamp,
    payload_to_bits,
    payload_to_hex,
    unpack_stamp,
)
from lingmux.model import BUILTIN_PROFILES, Alphabet, TransferUnit
from lingmux.plan import configure

A272 = Alphabet(272, n_event=8)


def _random_duty(rng, n, n_ctrl=8):
    return [256 + rng.randrange(n_ctrl) if rng.random() < 0.05 else rng.randrange(256) for _ in range(n)]


def test_builtin_geometry():
    p = get_plan("t1-1000")
    c = p.config
    assert (p.mode, c.N, c.n_e, c.k, c.t, c.s) == (Mode.SPARE_STAMP, 264, 18, 25, 145, 20)
    assert [r[2] for r in p.rounds] == [145 * i for i in range(25)]
    assert p.spare_offset == 3625
    p = get_plan("t-10g")
    c = p.config
    assert (p.mode, c.N, c.n_e, c.k, c.s) == (Mode.SAVE_BOX, 272, 10, 40, 10)
    assert 40 * c.t + c.s == 3250
    p = get_plan("kr-10g")
    c = p.config
    assert (p.mode, c.N, c.n_e, c.k, c.n_e_partial, c.s) == (Mode.INTEGRAL_UNIT, 272, 11, 23, 4, 0)
    assert 23 * c.t + c.t_partial + c.s == 2080 and c.t_partial == 33


def test_layout_bijection(plan):
    seen = []
    w = plan.alphabet.affix_width
    for idx, (_, count, _, r) in enumerate(plan.rounds):
        seen += [plan.root_bit(idx, i) for i in range(r)]
        seen += [plan.affix_bit(idx, i) for i in range(count * w)]
    seen += [plan.spare_bit(i) for i in range(plan.s)]
    assert sorted(seen) == list(range(plan.v))
    with pytest.raises(IndexError):
        plan.root_bit(0, plan.config.r)


def test_build_plan_rejects_mismatch():
    prof = BUILTIN_PROFILES["T_10G"]
    cfg = configure(prof.v, 272, 1, 1, 10, 400)
    with pytest.raises(CodecError):
        build_plan(BUILTIN_PROFILES["KR_10G"], cfg, Mode.SAVE_BOX, A272)
    with pytest.raises(CodecError):
        build_plan(prof, cfg, Mode.INTEGRAL_UNIT, A272)
    with pytest.raises(CodecError):
        build_plan(prof, cfg, Mode.SAVE_BOX, Alphabet(272))
    with pytest.raises(CodecError):
        build_plan(prof, cfg, Mode.SAVE_BOX, Alphabet(264, n_event=4))
    with pytest.raises(KeyError):
        get_plan("nope")


def test_all_zero(plan):
    payload = encode_payload(plan, [0] * plan.n_p)
    assert payload == 0
    bits = encode_frame(plan, [TransferUnit.data(0)] * plan.n_p)
    assert bits.shape == (plan.v,) and not bits.any()
    duty, event, spare = decode_frame(plan, bits)
    assert duty == [TransferUnit.data(0)] * plan.n_p and event == NO_EVENT and spare == 0


def test_t1_all_ctrl_roots():
    p = get_plan("t1-1000")
    payload = encode_payload(p, [256] * 450)
    mask = (1 << p.config.r) - 1
    for _, count, offset, r in p.rounds:
        word = payload >> offset
        assert word & mask == 33**18 - 1
        assert (word >> r) & ((1 << count * 3) - 1) == 0
    assert payload >> p.spare_offset == 0


def test_non_native_root():
    p = get_plan("t-10g")
    assert 17**10 == 2_015_993_900_449 < 2**41 - 1
    with pytest.raises(NonNativeRootError) as info:
        decode_payload(p, 2**41 - 1)
    assert info.value.round_index == 0
    # round 7 gets the bad root
    with pytest.raises(NonNativeRootError) as info:
        decode_payload(p, (2**41 - 1) << (7 * 81))
    assert info.value.round_index == 7


def test_unassigned_value_rejected():
    a = Alphabet(272, n_ctrl=2, n_event=2)
    prof = BUILTIN_PROFILES["T_10G"]
    plan = build_plan(prof, configure(prof.v, 272, 1, 1, 10, 400), Mode.SAVE_BOX, a, "custom")
    # unit 0 = 271 = 16 * 16 + 15
    with pytest.raises(CodecError, match="unassigned"):
        decode_payload(plan, 16 | 15 << 41)
    assert decode_payload(plan, 16 | 1 << 41).values[0] == 257


def test_spare_stamp_roundtrip():
    p = get_plan("t1-1000")
    rng = random.Random(5)
    duty = _random_duty(rng, 450)
    for pos in (0, 1, 12345, 2**19 - 1):
        got = decode_payload(p, encode_payload(p, duty, EventStamp(pos)))
        assert got.values == duty and got.event == EventStamp(pos)
    with pytest.raises(CodecError):
        encode_payload(p, duty, EventStamp(2**19))


def test_pack_stamp():
    assert pack_stamp(20, NO_EVENT) == 0
    assert pack_stamp(20, EventStamp(0)) == 1
    assert pack_stamp(20, EventStamp(2**19 - 1)) == 2**20 - 1
    for bits in (0, 1, 2**20 - 1, 0b1011):
        assert pack_stamp(20, unpack_stamp(20, bits)) == bits
    with pytest.raises(CodecError):
        unpack_stamp(20, 0b10)
    with pytest.raises(CodecError):
        unpack_stamp(20, 2**20)
    with pytest.raises(CodecError):
        pack_stamp(20, EventStamp(-1))


def test_savebox_bits():
    assert SaveBox(0xFF).to_bits() == 0b10_1111_1111
    assert SaveBox(256 + 5).to_bits() == 0b11_0000_0101
    assert SaveBox().to_bits() == 0
    assert SaveBox.from_bits(0b01_1111_1111) == SaveBox()
    for value in list(range(256)) + list(range(256, 264)):
        assert SaveBox.from_bits(SaveBox(value).to_bits()) == SaveBox(value)


def test_insert_savebox_boundaries():
    rng = random.Random(1)
    s = _random_duty(rng, 400)
    out, box = insert_event_savebox(s, 399, 3, A272)
    assert out[:399] == s[:399] and out[399] == A272.event_base + 3 and box.value == s[399]
    out, box = insert_event_savebox(s, 0, 7, A272)
    assert out == [A272.event_base + 7] + s[:399] and box == SaveBox(s[399])
    for m, p in ((400, 0), (-1, 0), (0, 8)):
        with pytest.raises(CodecError):
            insert_event_savebox(s, m, p, A272)


def test_extract_savebox():
    rng = random.Random(2)
    s = _random_duty(rng, 400)
    assert extract_event_savebox(s, SaveBox(), A272) == (s, None)
    for m in range(0, 400, 37):
        for p in range(8):
            out, box = insert_event_savebox(s, m, p, A272)
            back, ev = extract_event_savebox(out, box, A272)
            assert back == s and ev == (m, p)
            assert sorted(back) == sorted(s)
    out, box = insert_event_savebox(s, 4, 1, A272)
    with pytest.raises(CodecError, match="empty"):
        extract_event_savebox(out, SaveBox(), A272)
    with pytest.raises(CodecError, match="occupied"):
        extract_event_savebox(s, SaveBox(3), A272)
    twice = list(out)
    twice[10] = A272.event_base
    with pytest.raises(CodecError, match="multiple"):
        extract_event_savebox(twice, box, A272)


def test_integral_insert_extract():
    rng = random.Random(3)
    duty = _random_duty(rng, 256)
    ext = insert_event_integral(duty, None, A272)
    assert ext == duty + [0] and len(ext) == 257
    assert extract_event_integral(ext, A272) == (duty, None)
    ext = insert_event_integral(duty, (255, 2), A272)
    assert ext[255] == A272.event_base + 2 and ext[256] == duty[255]
    for m in (0, 17, 255):
        for p in range(8):
            assert extract_event_integral(insert_event_integral(duty, (m, p), A272), A272) == (duty, (m, p))
    with pytest.raises(CodecError):
        insert_event_integral(duty, (256, 0), A272)
    with pytest.raises(CodecError, match="spare slot"):
        extract_event_integral(duty + [A272.event_base], A272)
    bad = insert_event_integral(duty, (3, 3), A272)
    bad[9] = A272.event_base
    with pytest.raises(CodecError, match="multiple"):
        extract_event_integral(bad, A272)


def test_unit_event_helpers():
    p = get_plan("kr-10g")
    assert p.unit_event(3, 5) == EventStamp(29)
    assert p.split_event(EventStamp(29)) == (3, 5)
    assert p.event_range == 256 * 8
    with pytest.raises(CodecError):
        p.unit_event(256, 0)
    with pytest.raises(CodecError):
        p.split_event(EventStamp(2048))


def test_duty_checks(plan):
    with pytest.raises(CodecError):
        encode_payload(plan, [0] * (plan.n_p - 1))
    with pytest.raises(CodecError):
        encode_payload(plan, [0] * (plan.n_p - 1) + [plan.alphabet.event_base])
    with pytest.raises(CodecError):
        encode_frame(plan, [TransferUnit.filler()] + [TransferUnit.data(0)] * (plan.n_p - 1))


def test_wire_format():
    assert payload_to_hex(0b1_0000_0001, 12) == "0101"
    assert hex_to_payload("0101", 12) == 0b1_0000_0001
    assert payload_to_hex(0, 3645) == "00" * 456
    with pytest.raises(CodecError):
        hex_to_payload("00", 12)
    with pytest.raises(CodecError):
        hex_to_payload("zz00", 12)
    with pytest.raises(CodecError, match="padding"):
        hex_to_payload("0010", 12)
    bits = payload_to_bits(0b110, 10)
    assert bits.tolist() == [0, 1, 1, 0, 0, 0, 0, 0, 0, 0]
    assert bits_to_payload(bits) == 0b110
    with pytest.raises(CodecError):
        bits_to_payload(np.array([0, 2]))


def test_frame_roundtrip_with_events(plan):
    rng = random.Random(11)
    n_ctrl = plan.alphabet.n_ctrl
    for _ in range(30):
        duty = [TransferUnit.ctrl(rng.randrange(n_ctrl)) if rng.random() < 0.1 else TransferUnit.data(rng.randrange(256))
                for _ in range(plan.n_p)]
        event = EventStamp(rng.randrange(plan.event_range))
        bits = encode_frame(plan, duty, event)
        got_duty, got_event, _ = decode_frame(plan, bits)
        assert got_duty == duty and got_event == event
    with pytest.raises(CodecError):
        decode_frame(plan, bits[:-1])
