"""Bit packing, canonical signal bytes, round trips, and strict decoding."""
import numpy as np
import pytest

from qe.errors import (
    ConsistencyError,
    RangeError,
    SignalFormatError,
    TruncationError,
)
from qe.models import MODEL_ORDER, ModelId
from qe.signaling import (
    SIGNAL_MAGIC,
    SIGNAL_VERSION,
    BitReader,
    BitWriter,
    DecodedSelection,
    decode_signals,
    encode_signals,
    read_signal_file,
    signal_bits,
    write_signal_file,
)

from helpers import pack_bits_ref, signal_bits_ref


def _random_selection(rng, count):
    f1 = int(rng.integers(2))
    models = None
    if f1:
        models = tuple(MODEL_ORDER[int(rng.integers(4))] for _ in range(count))
    return DecodedSelection(f1, models)


def test_bit_writer_packs_msb_first():
    w = BitWriter()
    for bit in (1, 0, 1, 1, 0, 0, 1, 0, 1):
        w.write_bit(bit)
    assert w.bit_length == 9
    assert w.getvalue() == bytes([0b10110010, 0b10000000])
    with pytest.raises(RangeError):
        w.write_bit(2)


def test_bit_reader_round_trip_and_exhaustion():
    rng = np.random.default_rng(50)
    bits = [int(b) for b in rng.integers(0, 2, size=37)]
    w = BitWriter()
    for b in bits:
        w.write_bit(b)
    r = BitReader(w.getvalue())
    assert [r.read_bit() for _ in range(37)] == bits
    assert r.bits_read == 37
    assert r.bits_left == 3
    for _ in range(3):
        r.read_bit()
    with pytest.raises(TruncationError):
        r.read_bit()


def test_canonical_flag_off_byte():
    payload = encode_signals([DecodedSelection(0, None)], [1])
    assert payload == b"\x00"
    assert signal_bits([DecodedSelection(0, None)], [1]) == 1


def test_canonical_single_ctb_inter_cqp():
    # bits: f1=1, mode=1 (inter), input=1 (cqp) -> 111 padded to 0xE0
    sel = DecodedSelection(1, (ModelId.INTER_CQP,))
    payload = encode_signals([sel], [1])
    assert payload == b"\xe0"
    assert signal_bits([sel], [1]) == 3


def test_model_bit_table():
    assert ModelId.INTRA_CQ.bits == (0, 0)
    assert ModelId.INTRA_CQP.bits == (0, 1)
    assert ModelId.INTER_CQ.bits == (1, 0)
    assert ModelId.INTER_CQP.bits == (1, 1)
    for mid in MODEL_ORDER:
        assert ModelId.from_bits(*mid.bits) is mid


def test_encode_matches_string_reference():
    rng = np.random.default_rng(51)
    for _ in range(50):
        count = int(rng.integers(1, 9))
        frames = int(rng.integers(1, 7))
        sels = [_random_selection(rng, count) for _ in range(frames)]
        payload = encode_signals(sels, count)
        bits = signal_bits_ref([(s.f1, s.models) for s in sels], count)
        assert payload == pack_bits_ref(bits)
        assert signal_bits(sels, count) == len(bits)


def test_round_trip_uniform_and_varied_counts():
    rng = np.random.default_rng(52)
    for _ in range(60):
        frames = int(rng.integers(1, 9))
        counts = [int(rng.integers(1, 12)) for _ in range(frames)]
        sels = [_random_selection(rng, c) for c in counts]
        payload = encode_signals(sels, counts)
        back = decode_signals(payload, counts)
        assert back == sels
        assert len(payload) == (signal_bits(sels, counts) + 7) // 8


def test_decode_scalar_count_needs_frame_count():
    payload = encode_signals([DecodedSelection(0, None)] * 3, 4)
    assert decode_signals(payload, 4, num_frames=3) == [DecodedSelection(0, None)] * 3
    with pytest.raises(ConsistencyError):
        decode_signals(payload, 4)


def test_encode_rejects_bad_inputs():
    with pytest.raises(RangeError):
        encode_signals([DecodedSelection(2, None)], [1])
    with pytest.raises(ConsistencyError):
        encode_signals([DecodedSelection(1, (ModelId.INTRA_CQ,))], [2])
    with pytest.raises(ConsistencyError):
        encode_signals([DecodedSelection(0, None)], [1, 1])
    with pytest.raises(RangeError):
        encode_signals([DecodedSelection(0, None)], [0])


def test_decode_rejects_trailing_byte():
    with pytest.raises(SignalFormatError, match="trailing"):
        decode_signals(b"\x00\x00", [1])


def test_decode_rejects_nonzero_padding():
    # f1=0 then junk in the same byte
    with pytest.raises(SignalFormatError, match="padding"):
        decode_signals(bytes([0b01100000]), [1])


def test_decode_rejects_truncated_payload():
    # f1=1 with 4 CTBs needs 9 bits, only 8 present
    with pytest.raises(TruncationError):
        decode_signals(bytes([0b10000000]), [4])
    with pytest.raises(TruncationError):
        decode_signals(b"", [1])


def test_decode_fuzz_only_typed_errors():
    rng = np.random.default_rng(53)
    outcomes = {"ok": 0, "err": 0}
    for _ in range(300):
        payload = bytes(rng.integers(0, 256, size=int(rng.integers(0, 8))).astype(np.uint8))
        counts = [int(rng.integers(1, 6)) for _ in range(int(rng.integers(1, 5)))]
        try:
            decode_signals(payload, counts)
            outcomes["ok"] += 1
        except (SignalFormatError, TruncationError):
            outcomes["err"] += 1
    assert outcomes["ok"] > 0 and outcomes["err"] > 0


def test_signal_file_round_trip(tmp_path):
    rng = np.random.default_rng(54)
    counts = [3, 3, 3, 3]
    sels = [_random_selection(rng, c) for c in counts]
    path = str(tmp_path / "sel.qes")
    write_signal_file(path, sels, counts)
    raw = open(path, "rb").read()
    assert raw.startswith(SIGNAL_MAGIC)
    assert raw[8:12] == SIGNAL_VERSION.to_bytes(4, "little")
    assert read_signal_file(path, counts) == sels


def test_signal_file_header_errors(tmp_path):
    short = tmp_path / "short.qes"
    short.write_bytes(b"QESIG")
    with pytest.raises(TruncationError):
        read_signal_file(str(short), [1])
    bad_magic = tmp_path / "magic.qes"
    bad_magic.write_bytes(b"NOTMAGIC" + SIGNAL_VERSION.to_bytes(4, "little") + b"\x00")
    with pytest.raises(SignalFormatError, match="magic"):
        read_signal_file(str(bad_magic), [1])
    bad_version = tmp_path / "ver.qes"
    bad_version.write_bytes(SIGNAL_MAGIC + (99).to_bytes(4, "little") + b"\x00")
    with pytest.raises(SignalFormatError, match="version"):
        read_signal_file(str(bad_version), [1])
