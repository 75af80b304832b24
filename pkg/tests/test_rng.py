import hashlib

import numpy as np

from geomgraph.rng import derive_seed, make_stream


def test_stream_is_deterministic():
    a = make_stream(42).random(5)
    b = make_stream(42).random(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, make_stream(43).random(5))


def test_derive_seed_byte_layout():
    payload = b"geomgraph/v1|i7|svrg|i100|f1.2|N|i3"
    expected = int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")
    assert derive_seed(7, "vrg", 100, 1.2, None, 3) == expected


def test_derive_seed_distinguishes_int_and_float():
    assert derive_seed(0, 1) != derive_seed(0, 1.0)
    assert 0 <= derive_seed(2**64 - 1, "x") < 2**64
