#!/usr/bin/env python3
"""pypdf side of the interop checks.

  pypdf_interop.py dump PATH PASSWORD     decrypt with pypdf, print one line per
                                          stream ("stream HEX", object order)
                                          and Info string ("info KEY HEX")
  pypdf_interop.py encrypt IN OUT USER OWNER
                                          AES-128 (V=4 R=4) encrypt with pypdf
"""

import sys

from pypdf import PdfReader, PdfWriter
from pypdf.generic import ByteStringObject, IndirectObject, StreamObject, TextStringObject


def _string_bytes(v):
    if isinstance(v, TextStringObject):
        return v.original_bytes
    if isinstance(v, ByteStringObject):
        return bytes(v)
    return None


def dump(path, password):
    reader = PdfReader(path)
    if reader.is_encrypted and not reader.decrypt(password):
        raise SystemExit("wrong password")
    for num in range(1, int(reader.trailer["/Size"])):
        try:
            obj = reader.get_object(IndirectObject(num, 0, reader))
        except Exception:
            continue
        if isinstance(obj, StreamObject):
            print("stream", obj._data.hex())
    if "/Info" in reader.trailer:
        for k, v in reader.trailer["/Info"].get_object().items():
            b = _string_bytes(v)
            if b is not None:
                print("info", k[1:], b.hex())


def encrypt(src, dst, user, owner):
    writer = PdfWriter(clone_from=PdfReader(src))
    writer.encrypt(user_password=user, owner_password=owner, algorithm="AES-128")
    with open(dst, "wb") as f:
        writer.write(f)


if __name__ == "__main__":
    cmd, args = sys.argv[1], sys.argv[2:]
    if cmd == "dump":
        dump(*args)
    elif cmd == "encrypt":
        encrypt(*args)
    else:
        raise SystemExit(f"unknown command {cmd}")
