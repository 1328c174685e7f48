#!/usr/bin/env python3
"""Stage MNIST, CIFAR-10 and a natural-photo patch corpus in the on-disk
formats the workbench reads (IDX, CIFAR-10 binary, netpbm).

Sources are fetched from the npm registry (`mnist-data`, `tfjs-cifar10`);
photo patches are cut from the sample photographs shipped with
scikit-image, scikit-learn and matplotlib.

Usage: python3 scripts/prepare_data.py [OUT_DIR]   (default: ./data)
"""
import json
import os
import shutil
import subprocess
import sys
import tarfile
import tempfile

import numpy as np
from PIL import Image


def npm_fetch(pkg, workdir):
    out = subprocess.run(["npm", "pack", pkg], cwd=workdir, check=True,
                         capture_output=True, text=True).stdout.strip().splitlines()[-1]
    dest = os.path.join(workdir, pkg + "_pkg")
    with tarfile.open(os.path.join(workdir, out)) as tf:
        tf.extractall(dest)
    return os.path.join(dest, "package")


def stage_mnist(out, workdir):
    dst = os.path.join(out, "mnist")
    os.makedirs(dst, exist_ok=True)
    src = os.path.join(npm_fetch("mnist-data@1.2.6", workdir), "data")
    for name in ["train-images-idx3-ubyte", "train-labels-idx1-ubyte",
                 "t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"]:
        shutil.copyfile(os.path.join(src, name), os.path.join(dst, name))


def stage_cifar(out, workdir):
    dst = os.path.join(out, "cifar10")
    os.makedirs(dst, exist_ok=True)
    src = npm_fetch("tfjs-cifar10@1.1.1", workdir)
    train = json.load(open(os.path.join(src, "train_lables.json")))
    test = json.load(open(os.path.join(src, "test_lables.json")))

    # each sprite row is one image, 32x32 RGB interleaved
    def convert(png, labels, path):
        pix = np.array(Image.open(png).convert("RGB")).reshape(-1, 32, 32, 3)
        assert pix.shape[0] == len(labels)
        rec = np.zeros((pix.shape[0], 3073), np.uint8)
        rec[:, 0] = labels
        rec[:, 1:] = pix.transpose(0, 3, 1, 2).reshape(-1, 3072)
        rec.tofile(path)

    for i in range(5):
        convert(os.path.join(src, f"data_batch_{i + 1}.png"),
                train[i * 10000:(i + 1) * 10000],
                os.path.join(dst, f"data_batch_{i + 1}.bin"))
    convert(os.path.join(src, "test_batch.png"), test,
            os.path.join(dst, "test_batch.bin"))


PHOTOS = {
    "skimage": ["astronaut.png", "brick.png", "camera.png", "chelsea.png",
                "coffee.png", "coins.png", "grass.png", "gravel.png",
                "hubble_deep_field.jpg", "moon.png", "motorcycle_left.png",
                "motorcycle_right.png", "retina.jpg", "rocket.jpg",
                "immunohistochemistry.png", "ihc.png"],
    "sklearn": ["china.jpg", "flower.jpg"],
    "matplotlib": ["grace_hopper.jpg"],
}


def photo_paths():
    import matplotlib
    import skimage
    import sklearn
    roots = {
        "skimage": os.path.join(os.path.dirname(skimage.__file__), "data"),
        "sklearn": os.path.join(os.path.dirname(sklearn.__file__), "datasets", "images"),
        "matplotlib": os.path.join(os.path.dirname(matplotlib.__file__), "mpl-data", "sample_data"),
    }
    for lib, names in PHOTOS.items():
        for n in names:
            p = os.path.join(roots[lib], n)
            if os.path.exists(p):
                yield p


def stage_photos(out, count=10000, seed=2017):
    dst = os.path.join(out, "photos")
    os.makedirs(dst, exist_ok=True)
    rng = np.random.default_rng(seed)
    images = [Image.open(p).convert("RGB") for p in photo_paths()]
    for i in range(count):
        im = images[rng.integers(len(images))]
        w, h = im.size
        side = int(rng.integers(32, max(33, min(w, h) // 3)))
        x = int(rng.integers(0, w - side + 1))
        y = int(rng.integers(0, h - side + 1))
        patch = im.crop((x, y, x + side, y + side)).resize((32, 32), Image.BILINEAR)
        if rng.random() < 0.5:
            patch = patch.transpose(Image.FLIP_LEFT_RIGHT)
        patch.save(os.path.join(dst, f"photo_{i:05d}.ppm"))


def main():
    out = os.path.abspath(sys.argv[1] if len(sys.argv) > 1 else "data")
    os.makedirs(out, exist_ok=True)
    with tempfile.TemporaryDirectory() as work:
        stage_mnist(out, work)
        stage_cifar(out, work)
    stage_photos(out)
    print(f"staged datasets under {out}")


if __name__ == "__main__":
    main()
