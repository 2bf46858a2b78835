"""Linguistic multiplexing of data and event units over PHY microframe payloads."""

from .codec import (
    NO_EVENT,
    CodecError,
    EventStamp,
    FramePlan,
    Mode,
    NonNativeRootError,
    SaveBox,
    build_plan,
    decode_frame,
    decode_payload,
    encode_frame,
    encode_payload,
    get_plan,
)
from .engine import RoundCodeword, decode_round, echo_sample, encode_round, min_bits_for
from .model import (
    BUILTIN_PROFILES,
    Alphabet,
    AlphabetError,
    Kind,
    LingmuxError,
    Profile,
    TransferUnit,
    decompose,
    load_profiles,
    unit_value,
    value_unit,
)
from .plan import (
    CapacityError,
    ConfigError,
    GatheringError,
    MuxConfig,
    NegativeSpareError,
    SearchRow,
    alu_class,
    configure,
    divisors,
    echo_budget,
    max_ne,
    n_upper,
    rank,
    redundancy,
    resolution,
    search,
)

__version__ = "0.1.0"
