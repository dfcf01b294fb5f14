import numpy as np
import pytest

import dopo_shor as ds


def test_number_theory():
    assert ds.gcd(48, 15) == 3
    g, s, t = ds.ext_gcd(16, 15)
    assert (g, 16 * s + 15 * t) == (1, 1)
    ctx = ds.mont_setup(21)
    assert (ctx["r"], ctx["r_inv"], ctx["n_prime"]) == (32, 2, 3)
    assert ds.mont_mul(7, 7, 15) == 4
    assert ds.mod_exp(7, 4, 15) == 1
    assert ds.multiplicative_order(2, 21) == 6
    with pytest.raises(ds.NotCoprimeError):
        ds.mod_exp(6, 2, 15)
    with pytest.raises(ValueError):
        ds.mont_mul(15, 1, 15)


def test_register():
    state = ds.register_state(15, 7, bits=2)
    assert state["terms"] == [[0, 0], [1, 6], [2, 3], [3, 12]]
    assert ds.schmidt_number(15, 7, bits=4) == 4.0
    assert ds.survivors(15, 7, bits=4) == [0, 4, 8, 12]


def test_network():
    net = ds.prepared_network(4, 15, 7, sigma=0.1, seed=3)
    alive = ["".join("1" if p["alive"] else "0" for p in net["pulses"][4 * g: 4 * g + 4])
             for g in range(16)]
    assert [g for g, m in enumerate(alive) if m == "1111"] == [0, 4, 8, 12]
    assert alive[1] == "1001"


def test_render_and_classify(tmp_path):
    frame = ds.render_frame("0100", width=64, height=64)
    assert frame.shape == (64, 64)
    assert abs(frame.mean() - 4.0) < 0.04
    flipped = ds.render_frame("1011", width=64, height=64)
    assert np.allclose(frame, flipped)
    result = ds.classify_frame(frame)
    assert (result["phases"], result["mask"]) == ("0100", "1111")
    with pytest.raises(ds.UnclassifiableFrameError):
        ds.classify_frame(ds.render_frame("0000", "0010", width=64, height=64))
    scale = ds.write_pgm16(tmp_path / "f.pgm", frame)
    data = (tmp_path / "f.pgm").read_bytes()
    assert data.startswith(b"P5\n64 64\n65535\n")
    assert scale == pytest.approx(65535 / frame.max())


def test_factor_exact_and_sim(tmp_path):
    report = ds.factor(15, a=7, bits=4)
    assert report["status"] == "success"
    assert report["factors"] == [3, 5]
    assert report["survivors"] == [0, 4, 8, 12]

    sim = ds.factor(15, a=7, bits=4, mode="sim", frames=True, out_dir=str(tmp_path), grid=64)
    assert sim["survivors"] == report["survivors"]
    assert len(list(tmp_path.glob("frame_*.pgm"))) == 16

    bad = ds.factor(16)
    assert ds.EXIT_CODES[bad["status"]] == 2
