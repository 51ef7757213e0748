import numpy as np
import pytest
from PIL import Image

from uscut.image import (GrayImage, load_gray_image, load_mask, mean_gray_disk,
                         sample_bilinear, save_gray_image, save_mask)

from oracles import mean_disk_naive


def test_pgm_roundtrip_example(tmp_path):
    p = tmp_path / "t.pgm"
    p.write_bytes(b"P5\n2 2\n255\n" + bytes([0, 85, 170, 255]))
    img = load_gray_image(p)
    assert img.width == 2 and img.height == 2
    assert img.data.tolist() == [0, 85, 170, 255]


def test_png_matches_pgm(tmp_path):
    arr = np.array([[0, 85], [170, 255]], np.uint8)
    Image.fromarray(arr, "L").save(tmp_path / "t.png")
    img = load_gray_image(tmp_path / "t.png")
    assert img.data.tolist() == [0, 85, 170, 255]


@pytest.mark.parametrize("suffix", [".pgm", ".png"])
def test_save_load_roundtrip_random(tmp_path, suffix):
    rng = np.random.default_rng(7)
    for k in range(100):
        arr = rng.integers(0, 256, (64, 64), dtype=np.uint8)
        path = tmp_path / f"r{k}{suffix}"
        save_gray_image(GrayImage(arr), path)
        assert np.array_equal(load_gray_image(path).pixels, arr)


def test_pgm_header_comments(tmp_path):
    p = tmp_path / "c.pgm"
    p.write_bytes(b"P5\n# a comment\n2 # inline\n1\n255\n" + bytes([7, 9]))
    img = load_gray_image(p)
    assert img.width == 2 and img.height == 1
    assert img.data.tolist() == [7, 9]


def test_pgm_16bit_rejected(tmp_path):
    p = tmp_path / "d.pgm"
    p.write_bytes(b"P5\n1 1\n65535\n\x01\x02")
    with pytest.raises(ValueError, match="8 bit"):
        load_gray_image(p)


def test_png_16bit_rejected(tmp_path):
    im = Image.new("I;16", (2, 2))
    im.putdata([0, 1000, 2000, 3000])
    im.save(tmp_path / "d.png")
    with pytest.raises(ValueError, match="bit depth"):
        load_gray_image(tmp_path / "d.png")


def test_color_png_luma(tmp_path):
    # equal channels: luma conversion must return the channel value exactly
    arr = np.stack([np.full((2, 2), 10, np.uint8)] * 3, axis=-1)
    arr[1, :, :] = 200
    Image.fromarray(arr, "RGB").save(tmp_path / "c.png")
    img = load_gray_image(tmp_path / "c.png")
    assert img.pixels[0].tolist() == [10, 10] and img.pixels[1].tolist() == [200, 200]


def test_unreadable_and_unsupported(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_gray_image(tmp_path / "missing.pgm")
    junk = tmp_path / "junk.img"
    junk.write_bytes(b"not an image at all")
    with pytest.raises(ValueError, match="unsupported"):
        load_gray_image(junk)


def test_sidecar_spacing(tmp_path):
    arr = np.zeros((4, 4), np.uint8)
    save_gray_image(GrayImage(arr), tmp_path / "s.pgm")
    assert load_gray_image(tmp_path / "s.pgm").spacing_mm is None
    (tmp_path / "s.pgm.json").write_text('{"spacing_mm": 0.2}')
    assert load_gray_image(tmp_path / "s.pgm").spacing_mm == 0.2
    assert load_gray_image(tmp_path / "s.pgm", spacing_mm=0.5).spacing_mm == 0.5


def test_mask_roundtrip(tmp_path):
    mask = np.zeros((5, 7), bool)
    mask[1:3, 2:5] = True
    save_mask(mask, tmp_path / "m.png")
    assert np.array_equal(load_mask(tmp_path / "m.png"), mask)


def test_gray_image_invariants():
    img = GrayImage(np.zeros((3, 4), np.uint8))
    assert img.width == 4 and img.height == 3 and len(img.data) == 12
    with pytest.raises(ValueError):
        GrayImage(np.zeros((0, 4), np.uint8))
    with pytest.raises(ValueError):
        GrayImage(np.zeros((3, 4), np.float64))
    with pytest.raises(ValueError):
        GrayImage(np.zeros((3, 4), np.uint8), spacing_mm=0.0)
    with pytest.raises(ValueError):
        img.pixels[0, 0] = 1  # read-only


def test_bilinear_integer_identity():
    rng = np.random.default_rng(3)
    arr = rng.integers(0, 256, (8, 9), dtype=np.uint8)
    img = GrayImage(arr)
    for y in range(8):
        for x in range(9):
            assert sample_bilinear(img, x, y) == arr[y, x]


def test_bilinear_midpoint():
    img = GrayImage(np.array([[0, 100]], np.uint8))
    assert sample_bilinear(img, 0.5, 0.0) == 50.0


def test_bilinear_clamps():
    arr = np.arange(9, dtype=np.uint8).reshape(3, 3)
    img = GrayImage(arr)
    assert sample_bilinear(img, -5.0, -5.0) == arr[0, 0]
    assert sample_bilinear(img, 99.0, 99.0) == arr[2, 2]


def test_bilinear_bounded_by_neighbors():
    rng = np.random.default_rng(11)
    arr = rng.integers(0, 256, (16, 16), dtype=np.uint8)
    img = GrayImage(arr)
    for _ in range(500):
        x = rng.uniform(0, 15)
        y = rng.uniform(0, 15)
        x0, y0 = int(x), int(y)
        quad = arr[y0:y0 + 2, x0:x0 + 2]
        v = sample_bilinear(img, x, y)
        assert quad.min() - 1e-9 <= v <= quad.max() + 1e-9


def test_bilinear_continuity():
    rng = np.random.default_rng(12)
    arr = rng.integers(0, 256, (16, 16), dtype=np.uint8)
    img = GrayImage(arr)
    for _ in range(200):
        x = rng.uniform(0.5, 14.5)
        y = rng.uniform(0.5, 14.5)
        v0 = sample_bilinear(img, x, y)
        v1 = sample_bilinear(img, x + 1e-7, y + 1e-7)
        assert abs(v1 - v0) < 1e-4


def test_mean_disk_uniform():
    img = GrayImage(np.full((20, 20), 100, np.uint8))
    assert mean_gray_disk(img, (10, 10), 5) == 100.0
    assert mean_gray_disk(img, (3.7, 16.2), 2.5) == 100.0


def test_mean_disk_single_pixel():
    arr = np.arange(25, dtype=np.uint8).reshape(5, 5)
    img = GrayImage(arr)
    assert mean_gray_disk(img, (2, 3), 0.5) == arr[3, 2]


def test_mean_disk_half_split():
    arr = np.zeros((21, 40), np.uint8)
    arr[:, 20:] = 200
    img = GrayImage(arr)
    # disk centered on the boundary between columns 19 and 20 sees both
    # halves symmetrically
    assert mean_gray_disk(img, (19.5, 10), 6.0) == 100.0


def test_mean_disk_matches_enumeration():
    rng = np.random.default_rng(5)
    arr = rng.integers(0, 256, (16, 16), dtype=np.uint8)
    img = GrayImage(arr)
    for _ in range(30):
        cx = rng.uniform(0, 15)
        cy = rng.uniform(0, 15)
        rad = rng.uniform(0.6, 6)
        assert mean_gray_disk(img, (cx, cy), rad) == pytest.approx(
            mean_disk_naive(arr, cx, cy, rad), abs=0)


def test_mean_disk_translation_invariance():
    rng = np.random.default_rng(6)
    tile = rng.integers(0, 256, (10, 10), dtype=np.uint8)
    big = np.tile(tile, (3, 3))
    img = GrayImage(big)
    a = mean_gray_disk(img, (12.3, 13.1), 3.0)
    b = mean_gray_disk(img, (22.3, 23.1), 3.0)
    assert a == b


def test_mean_disk_errors():
    img = GrayImage(np.zeros((4, 4), np.uint8))
    with pytest.raises(ValueError):
        mean_gray_disk(img, (2, 2), 0)
    with pytest.raises(ValueError):
        mean_gray_disk(img, (100, 100), 1.0)
