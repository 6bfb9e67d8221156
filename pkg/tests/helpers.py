"""Shared test support: independent oracles and tiny input builders.

Oracles here deliberately avoid the library's own compute paths: the
convolution references use six nested Python loops or scipy's
correlate2d, distortion oracles use scalar loops, and the BD-rate
oracle integrates the fitted curve densely instead of analytically.
"""
from __future__ import annotations

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.signal import correlate2d

from qe.frame import CodingMode
from qe.layout import CuRect
from qe.models import MODEL_ORDER, save_weights
from qe.nn import BatchNormLayer, ConvLayer, QeNetwork, ResidualBlock, random_network

# ------------------------------------------------------------- nn oracles


def conv2d_loops(x, weight, bias, relu):
    """Reference 3x3 convolution: six nested loops, zero padding 1."""
    cout, cin, kh, kw = weight.shape
    h, w = x.shape[1], x.shape[2]
    out = np.zeros((cout, h, w), dtype=np.float64)
    for o in range(cout):
        for y in range(h):
            for xx in range(w):
                acc = float(bias[o])
                for c in range(cin):
                    for dy in range(kh):
                        for dx in range(kw):
                            yy = y + dy - 1
                            xk = xx + dx - 1
                            if 0 <= yy < h and 0 <= xk < w:
                                acc += float(weight[o, c, dy, dx]) * float(x[c, yy, xk])
                out[o, y, xx] = max(acc, 0.0) if relu else acc
    return out


def conv2d_ref(x, layer):
    """Faster independent convolution via scipy.signal.correlate2d."""
    x = np.asarray(x, dtype=np.float64)
    weight = layer.weight.astype(np.float64)
    bias = layer.bias.astype(np.float64)
    cout, cin = weight.shape[0], weight.shape[1]
    out = np.empty((cout, x.shape[1], x.shape[2]), dtype=np.float64)
    for o in range(cout):
        acc = np.full(x.shape[1:], bias[o], dtype=np.float64)
        for c in range(cin):
            acc = acc + correlate2d(x[c], weight[o, c], mode="same", boundary="fill")
        out[o] = np.maximum(acc, 0.0) if layer.relu else acc
    return out


def batch_norm_ref(x, layer):
    """Per-channel scalar application of the normalization formula."""
    out = np.empty_like(x, dtype=np.float64)
    for c in range(x.shape[0]):
        g = float(layer.gamma[c])
        b = float(layer.beta[c])
        m = float(layer.mean[c])
        v = float(layer.var[c])
        out[c] = g * (x[c] - m) / np.sqrt(v + layer.epsilon) + b
    return out


def forward_ref(net, stack):
    """Layer-by-layer interpreter of the network over conv2d_ref.

    Returns the normalized (H, W) output before quantization.
    """
    head = conv2d_ref(stack, net.head)
    t = head
    for blk in net.blocks:
        t = t + conv2d_ref(conv2d_ref(t, blk.conv_a), blk.conv_b)
    t = conv2d_ref(t, net.body_conv)
    t = batch_norm_ref(t, net.body_norm)
    t = t + head
    t = conv2d_ref(t, net.tail_a)
    t = conv2d_ref(t, net.tail_b)
    return conv2d_ref(t, net.out)[0]


def quantize_ref(values):
    h, w = values.shape
    out = np.zeros((h, w), dtype=np.uint16)
    for y in range(h):
        for x in range(w):
            v = int(np.floor(values[y, x] * 1023.0 + 0.5))
            out[y, x] = min(max(v, 0), 1023)
    return out


# -------------------------------------------------------- network builders


def tap_conv(cin, cout, relu, taps=()):
    """Zero conv except unit center taps at the given (out, in) pairs."""
    w = np.zeros((cout, cin, 3, 3), dtype=np.float32)
    for o, c in taps:
        w[o, c, 1, 1] = 1.0
    return ConvLayer(w, np.zeros(cout), relu)


def identity_bn(width, epsilon=0.0):
    return BatchNormLayer(
        gamma=np.ones(width),
        beta=np.zeros(width),
        mean=np.zeros(width),
        var=np.ones(width),
        epsilon=epsilon,
    )


def identity_network(input_channels=2, width=4, blocks=1):
    """Network whose output equals input channel 0 (the reconstruction).

    Channel 0 rides through the head, a zeroed trunk (residual blocks
    and body conv contribute nothing, the long skip restores the head),
    both tails, and the output conv.
    """
    return QeNetwork(
        head=tap_conv(input_channels, width, True, taps=[(0, 0)]),
        blocks=tuple(
            ResidualBlock(tap_conv(width, width, True), tap_conv(width, width, False))
            for _ in range(blocks)
        ),
        body_conv=tap_conv(width, width, False),
        body_norm=identity_bn(width),
        tail_a=tap_conv(width, width, True, taps=[(0, 0)]),
        tail_b=tap_conv(width, width, True, taps=[(0, 0)]),
        out=tap_conv(width, 1, True, taps=[(0, 0)]),
    )


def zero_network(input_channels=2, width=4, blocks=1):
    """All-zero weights everywhere: output is ReLU(0) = 0."""
    return QeNetwork(
        head=tap_conv(input_channels, width, True),
        blocks=tuple(
            ResidualBlock(tap_conv(width, width, True), tap_conv(width, width, False))
            for _ in range(blocks)
        ),
        body_conv=tap_conv(width, width, False),
        body_norm=identity_bn(width),
        tail_a=tap_conv(width, width, True),
        tail_b=tap_conv(width, width, True),
        out=tap_conv(width, 1, True),
    )


def small_random_network(input_channels, rng, width=4, blocks=1):
    return random_network(input_channels, num_res_blocks=blocks, width=width, rng=rng)


def build_registry_dir(dirpath, rng, width=4, blocks=1):
    """Write four distinct random weight files into a directory."""
    paths = {}
    for mid in MODEL_ORDER:
        net = small_random_network(mid.input_set.channels, rng, width, blocks)
        path = str(dirpath / f"{mid.value}.qew")
        save_weights(net, path)
        paths[mid] = path
    return paths


# ------------------------------------------------------------ file builders


def write_sequence(path, lumas, rng=None):
    """Write a raw 4:2:0 10-bit file; chroma is random when rng is given."""
    data = bytearray()
    for luma in lumas:
        luma = np.asarray(luma)
        h, w = luma.shape
        data += luma.astype("<u2").tobytes()
        n = ((w + 1) // 2) * ((h + 1) // 2)
        if rng is None:
            chroma = np.full(2 * n, 512, dtype="<u2")
        else:
            chroma = rng.integers(0, 1024, size=2 * n).astype("<u2")
        data += chroma.tobytes()
    with open(path, "wb") as fh:
        fh.write(bytes(data))


def random_planes(rng, n, height, width):
    return [rng.integers(0, 1024, size=(height, width)) for _ in range(n)]


def write_layout_file(path, cus):
    """``cus`` holds CuRect objects or (x, y, w, h, qp, 'I'|'P') tuples."""
    lines = []
    for cu in cus:
        if isinstance(cu, CuRect):
            mode = "I" if cu.mode is CodingMode.INTRA else "P"
            lines.append(f"{cu.x} {cu.y} {cu.w} {cu.h} {cu.qp} {mode}")
        else:
            lines.append(" ".join(str(v) for v in cu))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def random_layout(rng, width, height, splits=4, min_size=2):
    """Random exact tiling of width x height via recursive splits."""
    rects = [(0, 0, width, height)]
    for _ in range(splits):
        i = int(rng.integers(len(rects)))
        x, y, w, h = rects[i]
        vertical = bool(rng.integers(2)) if w >= 2 * min_size and h >= 2 * min_size else w >= 2 * min_size
        if vertical and w >= 2 * min_size:
            cut = int(rng.integers(min_size, w - min_size + 1))
            new = [(x, y, cut, h), (x + cut, y, w - cut, h)]
        elif h >= 2 * min_size:
            cut = int(rng.integers(min_size, h - min_size + 1))
            new = [(x, y, w, cut), (x, y + cut, w, h - cut)]
        else:
            continue
        rects[i : i + 1] = new
    out = []
    for x, y, w, h in rects:
        qp = int(rng.integers(0, 64))
        mode = CodingMode.INTRA if rng.integers(2) == 0 else CodingMode.INTER
        out.append(CuRect(x, y, w, h, qp, mode))
    return out


# ---------------------------------------------------------- metric oracles


def mse_loops(a, b):
    total = 0.0
    h, w = a.shape
    for y in range(h):
        for x in range(w):
            d = float(a[y, x]) - float(b[y, x])
            total += d * d
    return total / (h * w)


def sse_int(a, b):
    total = 0
    h, w = a.shape
    for y in range(h):
        for x in range(w):
            d = int(a[y, x]) - int(b[y, x])
            total += d * d
    return total


def bd_rate_dense(anchor, test, samples=200001):
    """Dense trapezoid integration of the same monotone cubic fit."""
    ra = np.array([p.rate for p in sorted(anchor, key=lambda p: p.rate)])
    qa = np.array([p.psnr for p in sorted(anchor, key=lambda p: p.rate)])
    rt = np.array([p.rate for p in sorted(test, key=lambda p: p.rate)])
    qt = np.array([p.psnr for p in sorted(test, key=lambda p: p.rate)])
    lo = max(qa[0], qt[0])
    hi = min(qa[-1], qt[-1])
    xs = np.linspace(lo, hi, samples)
    fa = PchipInterpolator(qa, np.log10(ra))(xs)
    ft = PchipInterpolator(qt, np.log10(rt))(xs)
    avg = (np.trapezoid(ft, xs) - np.trapezoid(fa, xs)) / (hi - lo)
    return 100.0 * (10.0 ** avg - 1.0)


# --------------------------------------------------------- selection oracle


def ctb_argmin_oracle(original, enhanced_by_model, ctb):
    """Exhaustive 4-way argmin with first-in-order tie-break."""
    best = None
    for mid in MODEL_ORDER:
        plane = enhanced_by_model[mid]
        err = sse_int(
            plane.samples[ctb.y : ctb.y + ctb.h, ctb.x : ctb.x + ctb.w],
            original[ctb.y : ctb.y + ctb.h, ctb.x : ctb.x + ctb.w],
        )
        if best is None or err < best[1]:
            best = (mid, err)
    return best


def frame_decision_oracle(original, enhanced_by_model, grid, default_mid, lam, r_def=0):
    """Enumerate both flag branches of the frame-level decision."""
    d1 = 0
    d0 = 0
    for ctb in grid:
        d1 += ctb_argmin_oracle(original, enhanced_by_model, ctb)[1]
        plane = enhanced_by_model[default_mid]
        d0 += sse_int(
            plane.samples[ctb.y : ctb.y + ctb.h, ctb.x : ctb.x + ctb.w],
            original[ctb.y : ctb.y + ctb.h, ctb.x : ctb.x + ctb.w],
        )
    r0 = r_def + 1
    r1 = r_def + 1 + 2 * grid.count
    j0 = d0 + lam * r0
    j1 = d1 + lam * r1
    return {
        "f1": 1 if j1 < j0 else 0,
        "d0": d0,
        "d1": d1,
        "r0": r0,
        "r1": r1,
        "j0": j0,
        "j1": j1,
    }


# --------------------------------------------------------- signaling oracle


def pack_bits_ref(bits):
    """MSB-first packing of a '0'/'1' string, zero-padded to a byte."""
    if not bits:
        return b""
    padded = bits + "0" * (-len(bits) % 8)
    return int(padded, 2).to_bytes(len(padded) // 8, "big")


def signal_bits_ref(selections, ctb_count):
    """Reference bit string for a list of (f1, [ModelId...]) decisions."""
    bits = ""
    for f1, models in selections:
        bits += str(f1)
        if f1:
            assert len(models) == ctb_count
            for mid in models:
                mode_bit, input_bit = mid.bits
                bits += str(mode_bit) + str(input_bit)
    return bits
