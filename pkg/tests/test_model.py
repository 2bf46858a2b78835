import pytest
from hypothesis import given, strategies as st

from lingmux.model import (
    BUILTIN_PROFILES,
    Alphabet,
    AlphabetError,
    Kind,
    Profile,
    TransferUnit,
    UnassignedValueError,
    decompose,
    load_profiles,
    parse_profiles,
    unit_value,
    value_unit,
)


@pytest.mark.parametrize("N, expected", [(272, (17, 16)), (257, (257, 1)), (256, (1, 256)), (264, (33, 8))])
def test_decompose_examples(N, expected):
    assert decompose(N) == expected


def test_decompose_exhaustive():
    for N in range(1, 4097):
        N_r, N_b = decompose(N)
        assert N_r % 2 == 1
        assert N_b & (N_b - 1) == 0
        assert N_r * N_b == N


def test_decompose_rejects_zero():
    with pytest.raises(ValueError):
        decompose(0)


def test_alphabet_fields():
    a = Alphabet(272, n_ctrl=8, n_event=8)
    assert (a.N_r, a.N_b, a.affix_width) == (17, 16, 4)
    assert (a.ctrl_base, a.event_base, a.n_assigned) == (256, 264, 272)
    assert Alphabet(264).n_ctrl == 8
    assert Alphabet(256).n_ctrl == 0


@pytest.mark.parametrize("kw", [dict(N=255), dict(N=260, n_ctrl=3, n_event=2), dict(N=260, n_ctrl=0, n_event=4)])
def test_alphabet_rejects(kw):
    with pytest.raises(AlphabetError):
        Alphabet(**kw)


def test_unit_value_examples():
    assert unit_value(TransferUnit.data(0xAB), Alphabet(264)) == 171
    assert unit_value(TransferUnit.ctrl(0), Alphabet(257)) == 256
    assert unit_value(TransferUnit.event(5), Alphabet(272, n_ctrl=8, n_event=8)) == 269
    # 269 = 1 0000 1101: occupancy-style top bit, then the event sub-position 101
    assert format(269, "09b") == "100001101"


def test_value_unit_examples():
    a = Alphabet(272, n_ctrl=8, n_event=8)
    assert value_unit(0, a) == TransferUnit.data(0)
    assert value_unit(263, a) == TransferUnit.ctrl(7)
    assert value_unit(271, a) == TransferUnit.event(7)


def test_unit_value_rejects():
    a = Alphabet(272, n_ctrl=8, n_event=8)
    for u in (TransferUnit.filler(), TransferUnit.data(256), TransferUnit.ctrl(8),
              TransferUnit.event(8), TransferUnit.data(-1)):
        with pytest.raises(AlphabetError):
            unit_value(u, a)


def test_value_unit_unassigned_names_value():
    a = Alphabet(272, n_ctrl=8, n_event=2)
    with pytest.raises(UnassignedValueError) as info:
        value_unit(270, a)
    assert info.value.value == 270
    assert "270" in str(info.value)
    with pytest.raises(AlphabetError):
        value_unit(272, a)


def test_roundtrip_exhaustive():
    for N in range(256, 289):
        extra = N - 256
        for n_event in sorted({0, extra // 2, max(extra - 1, 0)}):
            if extra and extra - n_event < 1:
                continue
            a = Alphabet(N, n_event=n_event)
            for x in range(a.n_assigned):
                u = value_unit(x, a)
                assert u.kind is not Kind.FILLER
                assert unit_value(u, a) == x


@given(st.integers(257, 288), st.data())
def test_roundtrip_units(N, data):
    n_event = data.draw(st.integers(0, N - 257))
    a = Alphabet(N, n_event=n_event)
    kind = data.draw(st.sampled_from([k for k, n in ((Kind.DATA, 256), (Kind.CTRL, a.n_ctrl), (Kind.EVENT, n_event)) if n]))
    limit = {Kind.DATA: 256, Kind.CTRL: a.n_ctrl, Kind.EVENT: n_event}[kind]
    u = TransferUnit(kind, data.draw(st.integers(0, limit - 1)))
    assert value_unit(unit_value(u, a), a) == u


def test_transfer_unit_json():
    for u in (TransferUnit.data(7), TransferUnit.ctrl(1), TransferUnit.event(3), TransferUnit.filler()):
        assert TransferUnit.from_json(u.to_json()) == u
    with pytest.raises(AlphabetError):
        TransferUnit.from_json({"kind": "bogus", "value": 1})
    with pytest.raises(AlphabetError):
        TransferUnit.from_json({"kind": "data"})


def test_builtin_catalog():
    rows = {p.name: (p.n_p, p.v, p.frame_time, p.octet_time) for p in BUILTIN_PROFILES.values()}
    assert rows == {
        "T1_1000": (450, 3645, 3600.0, 8000),
        "T_10G": (400, 3250, 320.0, 800),
        "KR_10G": (256, 2080, 204.8, 800),
    }
    for p in BUILTIN_PROFILES.values():
        assert abs(p.n_p * p.octet_time - p.frame_time * 1000) < 1
        assert p.v - 8 * p.n_p > 0


def test_profile_timing_mismatch():
    with pytest.raises(ValueError):
        Profile("bad", 400, 3250, 300.0, 800)


def test_parse_profiles():
    text = ["# name n_p v ft ot", "", "X 200 1625 160 800  # trailing", "T_10G 400 3250 320 800"]
    cat = parse_profiles(text)
    assert cat["X"] == Profile("X", 200, 1625, 160.0, 800)
    assert cat["T_10G"].v == 3250


def test_parse_profiles_errors():
    with pytest.raises(ValueError):
        parse_profiles(["X 200 1625"])
    with pytest.raises(ValueError):
        parse_profiles(["X 200 1625 160 eight"])


def test_load_profiles_override(tmp_path):
    path = tmp_path / "profiles.txt"
    path.write_text("X 200 1625 160 800\n")
    cat = load_profiles(path)
    assert "X" in cat and "T1_1000" in cat
    assert load_profiles() == BUILTIN_PROFILES
