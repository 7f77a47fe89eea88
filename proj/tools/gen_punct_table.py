#!/usr/bin/env python3
"""Regenerates src/punct_table.inc.

The set is every code point whose Unicode general category starts with 'P',
plus the non-letter, non-number code points of CJK Symbols and Punctuation
(U+3000..U+303F) and the punctuation/symbol runs of the fullwidth ASCII
range (U+FF01..U+FF65).
"""
import sys
import unicodedata


def wanted(cp: int) -> bool:
    cat = unicodedata.category(chr(cp))
    if cat.startswith("P"):
        return True
    if 0x3000 <= cp <= 0x303F:
        return not cat.startswith(("L", "N"))
    if 0xFF01 <= cp <= 0xFF65:
        return not cat.startswith(("L", "N"))
    return False


def ranges():
    out, start, prev = [], None, None
    for cp in range(0x110000):
        if wanted(cp):
            if start is None:
                start = cp
            elif cp != prev + 1:
                out.append((start, prev))
                start = cp
            prev = cp
    if start is not None:
        out.append((start, prev))
    return out


def main() -> None:
    path = sys.argv[1] if len(sys.argv) > 1 else "src/punct_table.inc"
    rs = ranges()
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"// Generated by tools/gen_punct_table.py (Unicode {unicodedata.unidata_version}). Do not edit.\n")
        f.write(f"// {len(rs)} ranges.\n")
        for lo, hi in rs:
            f.write(f"{{0x{lo:05X}, 0x{hi:05X}}},\n")


if __name__ == "__main__":
    main()
