#!/usr/bin/env python3
"""Generate src/unicode_table.cpp: code point ranges that are not printable.

Non-printable means general category Cc (except TAB, LF, CR), Cs or Cn,
using the Unicode database bundled with the running Python.
"""
import sys
import unicodedata

EXCLUDED = {"Cc", "Cs", "Cn"}
ALLOWED_CONTROLS = {0x09, 0x0A, 0x0D}


def ranges():
    out = []
    start = None
    for cp in range(0x110000):
        bad = unicodedata.category(chr(cp)) in EXCLUDED and cp not in ALLOWED_CONTROLS
        if bad and start is None:
            start = cp
        elif not bad and start is not None:
            out.append((start, cp - 1))
            start = None
    if start is not None:
        out.append((start, 0x10FFFF))
    return out


def main(path):
    rs = ranges()
    with open(path, "w") as f:
        f.write("// Generated by tools/gen_unicode_table.py from Unicode %s. Do not edit.\n\n"
                % unicodedata.unidata_version)
        f.write('#include "chainscan/unicode.hpp"\n\n')
        f.write("namespace chainscan::unicode {\n\n")
        f.write('const char* const kUnicodeVersion = "%s";\n\n' % unicodedata.unidata_version)
        f.write("const CodePointRange kNonPrintableRanges[] = {\n")
        for a, b in rs:
            f.write("    {0x%05X, 0x%05X},\n" % (a, b))
        f.write("};\n\n")
        f.write("const std::size_t kNonPrintableRangeCount = %d;\n\n" % len(rs))
        f.write("} // namespace chainscan::unicode\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/unicode_table.cpp")
