#!/usr/bin/env python3
"""Run the acceptance gate and forward its verdict lines.

Thin wrapper over pytest so the release check is one command; exits
nonzero when any criterion fails.
"""

import os
import subprocess
import sys


def main():
    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    cmd = [sys.executable, "-m", "pytest",
           os.path.join(root, "tests", "test_acceptance.py"), "-q"]
    proc = subprocess.run(cmd, cwd=root)
    sys.exit(proc.returncode)


if __name__ == "__main__":
    main()
