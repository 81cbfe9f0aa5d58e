#!/usr/bin/env python3
"""Builds the 28x28 handwritten-digit IDX fixture (classes 1 and 2).

Source: scikit-learn's bundled 8x8 digits dataset, upscaled to 28x28 and
augmented with one-pixel shifts until each split holds 200 samples per
class. Deterministic; the IDX files are committed, rerun only to refresh.
"""
import struct

import numpy as np
from sklearn.datasets import load_digits

RNG = np.random.default_rng(20240824)
PER_CLASS = 200
CLASSES = (1, 2)


def upscale(img8):
    # 8x8 -> 28x28: bilinear via outer interpolation grid, then 0..255
    src = np.asarray(img8, dtype=np.float64).reshape(8, 8) / 16.0
    grid = np.linspace(0, 7, 28)
    i0 = np.floor(grid).astype(int)
    i1 = np.minimum(i0 + 1, 7)
    frac = grid - i0
    rows = src[i0] * (1 - frac)[:, None] + src[i1] * frac[:, None]
    out = rows[:, i0] * (1 - frac)[None, :] + rows[:, i1] * frac[None, :]
    return np.clip(out * 255.0, 0, 255).astype(np.uint8)


def shift(img, dr, dc):
    out = np.zeros_like(img)
    rs, re = max(dr, 0), 28 + min(dr, 0)
    cs, ce = max(dc, 0), 28 + min(dc, 0)
    out[rs:re, cs:ce] = img[rs - dr:re - dr, cs - dc:ce - dc]
    return out


def augment(images, target):
    shifts = [(0, 1), (0, -1), (1, 0), (-1, 0), (1, 1), (-1, -1), (1, -1), (-1, 1)]
    out = list(images)
    k = 0
    while len(out) < target:
        base = images[k % len(images)]
        out.append(shift(base, *shifts[(k // len(images)) % len(shifts)]))
        k += 1
    return out[:target]


def write_idx_images(path, images):
    with open(path, "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, len(images), 28, 28))
        for img in images:
            f.write(img.tobytes())


def write_idx_labels(path, labels):
    with open(path, "wb") as f:
        f.write(struct.pack(">II", 0x00000801, len(labels)))
        f.write(bytes(int(v) for v in labels))


def main():
    ds = load_digits()
    train_imgs, train_labels, test_imgs, test_labels = [], [], [], []
    for cls in CLASSES:
        idx = np.where(ds.target == cls)[0]
        RNG.shuffle(idx)
        half = len(idx) // 2
        ups = [upscale(ds.images[i]) for i in idx]
        tr = augment(ups[:half], PER_CLASS)
        te = augment(ups[half:], PER_CLASS)
        train_imgs += tr
        train_labels += [cls] * PER_CLASS
        test_imgs += te
        test_labels += [cls] * PER_CLASS

    order = RNG.permutation(len(train_imgs))
    write_idx_images("digits_train_images.idx", [train_imgs[i] for i in order])
    write_idx_labels("digits_train_labels.idx", [train_labels[i] for i in order])
    order = RNG.permutation(len(test_imgs))
    write_idx_images("digits_test_images.idx", [test_imgs[i] for i in order])
    write_idx_labels("digits_test_labels.idx", [test_labels[i] for i in order])
    print("wrote", len(train_imgs), "train and", len(test_imgs), "test samples")


if __name__ == "__main__":
    main()
