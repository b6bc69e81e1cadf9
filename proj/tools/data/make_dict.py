#!/usr/bin/env python3
"""Rewrite a cmudict.dict file (lowercase, `#` comments) in cmudict-0.7b layout.

Usage: make_dict.py SRC_DICT LICENSE OUT
"""
import sys


def main(src, license_path, out):
    with open(license_path, encoding="utf-8") as f:
        license_lines = f.read().splitlines()
    with open(src, encoding="latin-1") as f, open(out, "w", encoding="ascii", newline="\n") as o:
        for line in license_lines:
            o.write((";;; " + line).rstrip() + "\n")
        for line in f:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            word, *phones = line.split()
            o.write(word.upper() + "  " + " ".join(phones) + "\n")


if __name__ == "__main__":
    main(*sys.argv[1:4])
