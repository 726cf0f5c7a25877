#!/usr/bin/env python3
"""Writes the SCNW and RAD1 fixtures used by the CNN tests.

Run from this directory: python3 make_fixtures.py
"""
import math
import struct

import numpy as np

KIND_CONV_RELU, KIND_CONV_BN_RELU, KIND_CONV = 0, 1, 2


def scnw(layers, trained_sigma=0.0, bias_term=0.0, version=1, norm=None, magic=b"SCNW"):
    out = bytearray(magic)
    out += struct.pack("<Iff I", version, trained_sigma, bias_term, len(layers))
    for layer in layers:
        kind, k, b = layer["kind"], layer["kernel"], layer["bias"]
        n_out, n_in = k.shape[:2]
        out += struct.pack("<BII", kind, n_in, n_out)
        out += k.astype("<f4").tobytes()
        out += b.astype("<f4").tobytes()
        if kind == KIND_CONV_BN_RELU:
            for key in ("gamma", "beta", "mean", "var"):
                out += layer[key].astype("<f4").tobytes()
    if norm is not None:
        out += b"NRM1" + struct.pack("<ff", *norm)
    return bytes(out)


def rad1(img, domain=2):
    h, w = img.shape
    return b"RAD1" + struct.pack("<IIB3x", w, h, domain) + img.astype("<f4").tobytes()


def conv_layer(kind, n_in, n_out, rng=None, scale=0.0):
    if rng is None:
        k = np.zeros((n_out, n_in, 3, 3), np.float32)
        b = np.zeros(n_out, np.float32)
    else:
        k = (rng.standard_normal((n_out, n_in, 3, 3)) * scale).astype(np.float32)
        b = (rng.standard_normal(n_out) * 0.05).astype(np.float32)
    layer = {"kind": kind, "kernel": k, "bias": b}
    if kind == KIND_CONV_BN_RELU:
        layer["gamma"] = rng.uniform(0.5, 1.5, n_out).astype(np.float32)
        layer["beta"] = (rng.standard_normal(n_out) * 0.1).astype(np.float32)
        layer["mean"] = (rng.standard_normal(n_out) * 0.1).astype(np.float32)
        layer["var"] = rng.uniform(0.5, 2.0, n_out).astype(np.float32)
    return layer


def conv3x3(x, k, b):
    c_out = k.shape[0]
    h, w = x.shape[1:]
    p = np.pad(x, ((0, 0), (1, 1), (1, 1)))
    y = np.zeros((c_out, h, w), np.float64)
    for dy in range(3):
        for dx in range(3):
            win = p[:, dy:dy + h, dx:dx + w]
            y += np.einsum("oi,ihw->ohw", k[:, :, dy, dx].astype(np.float64), win)
    return y + b.astype(np.float64)[:, None, None]


def forward(layers, img):
    x = img[None].astype(np.float64)
    for layer in layers:
        k, b = layer["kernel"].astype(np.float64), layer["bias"].astype(np.float64)
        x = conv3x3(x, k, b)
        if layer["kind"] == KIND_CONV_BN_RELU:
            g, beta = layer["gamma"].astype(np.float64), layer["beta"].astype(np.float64)
            m, v = layer["mean"].astype(np.float64), layer["var"].astype(np.float64)
            x = (x - m[:, None, None]) / np.sqrt(v[:, None, None] + 1e-5) * g[:, None, None] + beta[:, None, None]
        if layer["kind"] != KIND_CONV:
            x = np.maximum(x, 0.0)
    return x[0]


def main():
    euler = 0.5772156649015329
    zero = [conv_layer(KIND_CONV_RELU, 1, 4), conv_layer(KIND_CONV_RELU, 4, 4), conv_layer(KIND_CONV, 4, 1)]
    write("zero.scnw", scnw(zero, trained_sigma=30 / 255))

    ident = [conv_layer(KIND_CONV_RELU, 1, 1), conv_layer(KIND_CONV_RELU, 1, 1), conv_layer(KIND_CONV, 1, 1)]
    for layer in ident:
        layer["kernel"][0, 0, 1, 1] = 1.0
    write("identity3.scnw", scnw(ident, trained_sigma=30 / 255))

    rng = np.random.default_rng(20240607)
    toy = [conv_layer(KIND_CONV_RELU, 1, 64, rng, 0.3)]
    toy += [conv_layer(KIND_CONV_BN_RELU, 64, 64, rng, 1.0 / math.sqrt(64 * 9)) for _ in range(3)]
    toy += [conv_layer(KIND_CONV, 64, 1, rng, 1.0 / math.sqrt(64 * 9))]
    write("toy5.scnw", scnw(toy, trained_sigma=0.0, bias_term=-euler, norm=(-3.0, 0.1)))
    x = rng.standard_normal((40, 40)).astype(np.float32)
    write("toy5_input.rad", rad1(x))
    write("toy5_residual.rad", rad1(forward(toy, x)))

    write("bad_magic.scnw", scnw(ident, magic=b"SCNX"))
    write("bad_version.scnw", scnw(ident, version=2))
    write("truncated.scnw", scnw(ident)[:-6])
    write("trailing.scnw", scnw(ident) + b"\x00")
    unknown = [dict(layer) for layer in ident]
    unknown[1]["kind"] = 7
    write("unknown_kind.scnw", scnw(unknown))
    chain = [conv_layer(KIND_CONV_RELU, 1, 4), conv_layer(KIND_CONV_RELU, 4, 3),
             conv_layer(KIND_CONV_RELU, 4, 4), conv_layer(KIND_CONV, 4, 1)]
    write("chain_mismatch.scnw", scnw(chain))


def write(name, data):
    with open(name, "wb") as f:
        f.write(data)


if __name__ == "__main__":
    main()
