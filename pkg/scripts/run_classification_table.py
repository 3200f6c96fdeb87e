#!/usr/bin/env python3
"""Reproduce the binary-classification accuracy table (8 problems x 4 models).

Desk scale by default; pass --scale full for the large-dataset sizes.
Results land in <out>/table.csv.
"""

import sys

from dctnet.cli import main

if __name__ == "__main__":
    argv = ["table", "--task", "classification", "--epochs", "8", "--out", "out/classification"]
    sys.exit(main(argv + sys.argv[1:]))
