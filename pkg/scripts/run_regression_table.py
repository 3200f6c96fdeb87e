#!/usr/bin/env python3
"""Reproduce the regression MSE table (3 targets x 4 models).

Desk scale by default; pass --scale full for the large-dataset sizes.
Results land in <out>/table.csv.
"""

import sys

from dctnet.cli import main

if __name__ == "__main__":
    argv = ["table", "--task", "regression", "--epochs", "8", "--out", "out/regression"]
    sys.exit(main(argv + sys.argv[1:]))
