#!/usr/bin/env python3
"""Train the adaptive model on the stripes problem and export its
interpretability artifacts: per-neuron bumps, the global response, the
decision map, activation curves, and the redundancy report.
"""

import sys
from pathlib import Path

from dctnet.cli import main

OUT = Path("out/stripes_figures")

if __name__ == "__main__":
    extra = sys.argv[1:]
    code = main(
        ["train", "--problem", "p7", "--model", "enn", "--epochs", "8", "--out", str(OUT)] + extra
    )
    if code != 0:
        sys.exit(code)
    model = OUT / "model.json"
    for what in ("bumps", "map", "response", "activations", "redundancy"):
        code = main(["export", str(model), "--what", what, "--out", str(OUT / what)])
        if code != 0:
            sys.exit(code)
    print(f"artifacts under {OUT}")
    sys.exit(0)
