#!/usr/bin/env python3
"""Print the codec-comparison rate table from first principles.

Every row is pure arithmetic over (sample rate, stride, codebooks, bits):
frames/sec, tokens/sec and kbps as the published comparisons display them.
"""

from lfsc import FsqSpec, bitrate, fps_display, frame_rate, kbps_display, token_rate, tokens_display
from lfsc.fsq import LEVELS_1000, LEVELS_4032

ROWS = [
    # name, sample_rate, stride, codebooks, levels (None = assume 10-bit RVQ rows)
    ("encodec-24k-6kbps", 24000, 320, 8, None),
    ("dac-44k-7.75kbps", 44100, 512, 9, None),
    ("dac-24k-6kbps", 24000, 320, 8, None),
    ("spectral-22k", 22050, 256, 8, None),
    ("this-codec", 22050, 1024, 8, FsqSpec().levels),
    ("this-codec-1000", 22050, 1024, 8, LEVELS_1000),
    ("this-codec-4032", 22050, 1024, 8, LEVELS_4032),
]


def main():
    print(f"{'codec':22s} {'fps':>8s} {'fps~':>6s} {'tok/s':>9s} {'tok~':>5s} {'kbps':>8s}")
    for name, rate, stride, codebooks, levels in ROWS:
        fps = frame_rate(rate, stride)
        tokens = codebooks * fps
        line = (
            f"{name:22s} {fps:8.3f} {fps_display(rate, stride):6.1f} "
            f"{tokens:9.3f} {tokens_display(codebooks, rate, stride):5d}"
        )
        if levels is not None:
            spec = FsqSpec(num_codebooks=codebooks, levels=levels)
            line += f" {kbps_display(spec, rate, stride):8.2f}"
        print(line)


if __name__ == "__main__":
    main()
