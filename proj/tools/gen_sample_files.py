#!/usr/bin/env python3
"""Generate src/sample_files.cpp: minimal well-formed files used as corpus
plants and validator fixtures.

Images come from Pillow, archives from zipfile/tarfile, audio from wave; the
remaining containers are assembled by hand from their published layouts.
"""
import io
import struct
import sys
import tarfile
import wave
import zipfile
import zlib

from PIL import Image


def pil(fmt, **kw):
    buf = io.BytesIO()
    Image.new("RGB", (1, 1), (200, 30, 60)).save(buf, fmt, **kw)
    return buf.getvalue()


def png():
    return pil("PNG")


def jpeg():
    return pil("JPEG", quality=50)


def gif():
    return pil("GIF")


def webp():
    return pil("WEBP", lossless=True)


def pdf():
    objs = [
        b"<</Type/Catalog/Pages 2 0 R>>",
        b"<</Type/Pages/Kids[3 0 R]/Count 1>>",
        b"<</Type/Page/MediaBox[0 0 3 3]/Parent 2 0 R>>",
    ]
    out = bytearray(b"%PDF-1.4\n")
    offsets = []
    for i, body in enumerate(objs, 1):
        offsets.append(len(out))
        out += b"%d 0 obj" % i + body + b"endobj\n"
    xref = len(out)
    out += b"xref\n0 %d\n0000000000 65535 f \n" % (len(objs) + 1)
    for off in offsets:
        out += b"%010d 00000 n \n" % off
    out += b"trailer<</Size %d/Root 1 0 R>>\nstartxref\n%d\n%%%%EOF\n" % (len(objs) + 1, xref)
    return bytes(out)


def zip_of(members):
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w", zipfile.ZIP_STORED) as zf:
        for name, data in members:
            info = zipfile.ZipInfo(name, date_time=(2020, 1, 1, 0, 0, 0))
            zf.writestr(info, data)
    return buf.getvalue()


def zip_plain():
    return zip_of([("a.txt", b"hello\n")])


def docx():
    return zip_of([
        ("[Content_Types].xml", b'<Types xmlns="http://schemas.openxmlformats.org/package/2006/content-types"/>'),
        ("word/document.xml", b"<w:document/>"),
    ])


def sevenzip():
    next_header = b"\x01\x00"
    tail = struct.pack("<QQI", 0, len(next_header), zlib.crc32(next_header))
    return b"7z\xbc\xaf\x27\x1c\x00\x04" + struct.pack("<I", zlib.crc32(tail)) + tail + next_header


def ole_doc():
    sector = 512
    header = bytearray(sector)
    header[0:8] = bytes.fromhex("d0cf11e0a1b11ae1")
    struct.pack_into("<HHHHH", header, 24, 0x003E, 3, 0xFFFE, 9, 6)
    struct.pack_into("<IIIIIIIII", header, 40, 0, 1, 1, 0, 0x1000, 0xFFFFFFFE, 0, 0xFFFFFFFE, 0)
    difat = [0] + [0xFFFFFFFF] * 108
    struct.pack_into("<109I", header, 76, *difat)
    fat = [0xFFFFFFFD, 0xFFFFFFFE] + [0xFFFFFFFF] * 126
    fat_sector = struct.pack("<128I", *fat)

    def entry(name, kind, start, size, child=0xFFFFFFFF):
        e = bytearray(128)
        raw = name.encode("utf-16-le") + b"\x00\x00"
        e[0:len(raw)] = raw
        struct.pack_into("<HBB", e, 64, len(raw), kind, 1)
        struct.pack_into("<III", e, 68, 0xFFFFFFFF, 0xFFFFFFFF, child)
        struct.pack_into("<II", e, 116, start, size)
        return bytes(e)

    directory = entry("Root Entry", 5, 0xFFFFFFFE, 0, child=1) + entry("WordDocument", 2, 0xFFFFFFFE, 0)
    directory += b"\x00" * (sector - len(directory))
    return bytes(header) + fat_sector + directory


def mp3():
    tag = b"ID3\x03\x00\x00" + bytes([0, 0, 0, 0])
    frame_len = 144 * 128000 // 44100
    frame = b"\xff\xfb\x90\xc0" + b"\x00" * (frame_len - 4)
    return tag + frame


def box(kind, payload):
    return struct.pack(">I", 8 + len(payload)) + kind + payload


def mvhd():
    body = struct.pack(">IIIII", 0, 0, 0, 1000, 0)
    body += struct.pack(">IH", 0x00010000, 0x0100) + b"\x00" * 10
    body += struct.pack(">9I", 0x00010000, 0, 0, 0, 0x00010000, 0, 0, 0, 0x40000000)
    body += b"\x00" * 24 + struct.pack(">I", 1)
    return box(b"mvhd", body)


def mp4():
    ftyp = box(b"ftyp", b"isom" + struct.pack(">I", 512) + b"isomiso2mp41")
    return ftyp + box(b"moov", mvhd()) + box(b"mdat", b"")


def mov():
    ftyp = box(b"ftyp", b"qt  " + struct.pack(">I", 0x200) + b"qt  ")
    return ftyp + box(b"moov", mvhd()) + box(b"mdat", b"")


def wav():
    buf = io.BytesIO()
    with wave.open(buf, "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(8000)
        w.writeframes(b"\x00\x00" * 4)
    return buf.getvalue()


def riff_chunk(kind, payload):
    pad = b"\x00" if len(payload) % 2 else b""
    return kind + struct.pack("<I", len(payload)) + payload + pad


def avi():
    avih = struct.pack("<14I", 40000, 0, 0, 0x10, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0)
    hdrl = b"hdrl" + riff_chunk(b"avih", avih)
    movi = b"movi"
    body = b"AVI " + riff_chunk(b"LIST", hdrl) + riff_chunk(b"LIST", movi)
    return b"RIFF" + struct.pack("<I", len(body)) + body


def vint(n):
    out = bytearray()
    while True:
        b = n & 0x7F
        n >>= 7
        if n:
            out.append(b | 0x80)
        else:
            out.append(b)
            return bytes(out)


def rar5_header(fields):
    size = vint(len(fields))
    return struct.pack("<I", zlib.crc32(size + fields)) + size + fields


def rar():
    data = b"hello\n"
    name = b"a.txt"
    main = rar5_header(vint(1) + vint(0) + vint(0))
    file_fields = (vint(2) + vint(0x02) + vint(len(data)) + vint(0x04) + vint(len(data))
                   + vint(0x20) + struct.pack("<I", zlib.crc32(data)) + vint(0) + vint(0)
                   + vint(len(name)) + name)
    end = rar5_header(vint(5) + vint(0) + vint(0))
    return b"Rar!\x1a\x07\x01\x00" + main + rar5_header(file_fields) + data + end


def tar():
    buf = io.BytesIO()
    with tarfile.open(fileobj=buf, mode="w", format=tarfile.USTAR_FORMAT) as tf:
        data = b"hello\n"
        info = tarfile.TarInfo("a.txt")
        info.size = len(data)
        info.mtime = 1577836800
        tf.addfile(info, io.BytesIO(data))
    raw = buf.getvalue()
    return raw[:512 * 4]


SAMPLES = [
    ("Png", png), ("Jpeg", jpeg), ("Gif", gif), ("Pdf", pdf), ("Zip", zip_plain),
    ("SevenZip", sevenzip), ("Webp", webp), ("Doc", ole_doc), ("Mp3", mp3), ("Mp4", mp4),
    ("Mov", mov), ("Wav", wav), ("Avi", avi), ("Rar", rar), ("Tar", tar), ("Docx", docx),
]


def main(path):
    with open(path, "w") as f:
        f.write("// Generated by tools/gen_sample_files.py. Do not edit.\n\n")
        f.write('#include "chainscan/sample_files.hpp"\n\n')
        f.write("namespace chainscan::samples {\n\nnamespace {\n\n")
        for name, fn in SAMPLES:
            data = fn()
            f.write("constexpr std::uint8_t k%s[] = {" % name)
            for i, b in enumerate(data):
                if i % 16 == 0:
                    f.write("\n    ")
                f.write("0x%02x," % b)
            f.write("\n};\n\n")
        f.write("} // namespace\n\n")
        f.write("std::span<const std::uint8_t> sample(Sample which) {\n    switch (which) {\n")
        for name, _ in SAMPLES:
            f.write("    case Sample::%s: return k%s;\n" % (name, name))
        f.write("    }\n    return {};\n}\n\n} // namespace chainscan::samples\n")
    for name, fn in SAMPLES:
        print(name, len(fn()), file=sys.stderr)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/sample_files.cpp")
