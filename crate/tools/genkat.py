#!/usr/bin/env python3
"""Standalone ASCON-128 and Xoodyak reference models that write NIST LWC
style KAT files (LWC_AEAD_KAT_128_128.txt layout).

Usage: genkat.py OUTDIR
"""

import sys

M64 = (1 << 64) - 1
M32 = (1 << 32) - 1


# ---------------------------------------------------------------- ASCON-128

def _rotr64(x, n):
    return ((x >> n) | (x << (64 - n))) & M64


def ascon_p(s, rounds):
    for r in range(12 - rounds, 12):
        s[2] ^= 0xF0 - r * 0x10 + r
        s[0] ^= s[4]
        s[4] ^= s[3]
        s[2] ^= s[1]
        t = [(~s[i] & M64) & s[(i + 1) % 5] for i in range(5)]
        for i in range(5):
            s[i] ^= t[(i + 1) % 5]
        s[1] ^= s[0]
        s[0] ^= s[4]
        s[3] ^= s[2]
        s[2] = ~s[2] & M64
        s[0] ^= _rotr64(s[0], 19) ^ _rotr64(s[0], 28)
        s[1] ^= _rotr64(s[1], 61) ^ _rotr64(s[1], 39)
        s[2] ^= _rotr64(s[2], 1) ^ _rotr64(s[2], 6)
        s[3] ^= _rotr64(s[3], 10) ^ _rotr64(s[3], 17)
        s[4] ^= _rotr64(s[4], 7) ^ _rotr64(s[4], 41)


def _be(b):
    return int.from_bytes(b, "big")


def _pad8(b):
    b = b + b"\x80"
    return b + b"\x00" * (-len(b) % 8)


def ascon128_encrypt(key, nonce, ad, pt):
    k0, k1 = _be(key[:8]), _be(key[8:])
    s = [0x80400C0600000000, k0, k1, _be(nonce[:8]), _be(nonce[8:])]
    ascon_p(s, 12)
    s[3] ^= k0
    s[4] ^= k1
    if ad:
        a = _pad8(ad)
        for i in range(0, len(a), 8):
            s[0] ^= _be(a[i:i + 8])
            ascon_p(s, 6)
    s[4] ^= 1
    p = _pad8(pt)
    ct = b""
    blocks = len(p) // 8
    for i in range(blocks):
        s[0] ^= _be(p[i * 8:i * 8 + 8])
        out = s[0].to_bytes(8, "big")
        if i < blocks - 1:
            ct += out
            ascon_p(s, 6)
        else:
            ct += out[: len(pt) % 8]
    s[1] ^= k0
    s[2] ^= k1
    ascon_p(s, 12)
    s[3] ^= k0
    s[4] ^= k1
    return ct + s[3].to_bytes(8, "big") + s[4].to_bytes(8, "big")


# ------------------------------------------------------------------ Xoodyak

XOODOO_RC = [0x058, 0x038, 0x3C0, 0x0D0, 0x120, 0x014, 0x060, 0x02C, 0x380, 0x0F0, 0x1A0, 0x012]


def _rotl32(x, n):
    n %= 32
    return ((x << n) | (x >> (32 - n))) & M32


def xoodoo(state):
    a = [int.from_bytes(state[4 * i:4 * i + 4], "little") for i in range(12)]
    lane = lambda y, x: 4 * y + (x % 4)
    for rc in XOODOO_RC:
        p = [a[lane(0, x)] ^ a[lane(1, x)] ^ a[lane(2, x)] for x in range(4)]
        e = [_rotl32(p[(x - 1) % 4], 5) ^ _rotl32(p[(x - 1) % 4], 14) for x in range(4)]
        for y in range(3):
            for x in range(4):
                a[lane(y, x)] ^= e[x]
        a1 = [a[lane(1, x - 1)] for x in range(4)]
        a2 = [_rotl32(a[lane(2, x)], 11) for x in range(4)]
        a0 = [a[lane(0, x)] for x in range(4)]
        a0[0] ^= rc
        b0 = [(~a1[x] & M32) & a2[x] for x in range(4)]
        b1 = [(~a2[x] & M32) & a0[x] for x in range(4)]
        b2 = [(~a0[x] & M32) & a1[x] for x in range(4)]
        a0 = [a0[x] ^ b0[x] for x in range(4)]
        a1 = [a1[x] ^ b1[x] for x in range(4)]
        a2 = [a2[x] ^ b2[x] for x in range(4)]
        a1 = [_rotl32(a1[x], 1) for x in range(4)]
        a2 = [_rotl32(a2[(x - 2) % 4], 8) for x in range(4)]
        a = a0 + a1 + a2
    return bytearray(b"".join(v.to_bytes(4, "little") for v in a))


class Cyclist:
    def __init__(self, key=None, kid=b""):
        self.s = bytearray(48)
        self.up_phase = True
        self.keyed = False
        self.r_absorb = 16
        self.r_squeeze = 16
        if key is not None:
            self.keyed = True
            self.r_absorb = 44
            self.r_squeeze = 24
            self._absorb_any(bytes(key) + bytes(kid) + bytes([len(kid)]), self.r_absorb, 0x02)

    def _up(self, n, cu):
        if self.keyed:
            self.s[47] ^= cu
        self.s = xoodoo(self.s)
        self.up_phase = True
        return bytes(self.s[:n])

    def _down(self, block, cd):
        for i, b in enumerate(block):
            self.s[i] ^= b
        self.s[len(block)] ^= 0x01
        self.s[47] ^= cd if self.keyed else (cd & 0x01)
        self.up_phase = False

    def _absorb_any(self, data, rate, cd):
        first = True
        while first or data:
            if not self.up_phase:
                self._up(0, 0x00)
            self._down(data[:rate], cd if first else 0x00)
            data = data[rate:]
            first = False

    def absorb(self, data):
        self._absorb_any(bytes(data), self.r_absorb, 0x03)

    def _crypt(self, data, decrypt):
        cu = 0x80
        out = b""
        first = True
        while first or data:
            block = data[:24]
            data = data[24:]
            ks = self._up(len(block), cu)
            cu = 0x00
            o = bytes(x ^ y for x, y in zip(block, ks))
            self._down(o if decrypt else block, 0x00)
            out += o
            first = False
        return out

    def encrypt(self, pt):
        return self._crypt(bytes(pt), False)

    def decrypt(self, ct):
        return self._crypt(bytes(ct), True)

    def squeeze(self, n):
        out = self._up(min(n, self.r_squeeze), 0x40)
        while len(out) < n:
            self._down(b"", 0x00)
            out += self._up(min(n - len(out), self.r_squeeze), 0x00)
        return out


def xoodyak_encrypt(key, nonce, ad, pt):
    c = Cyclist(key, nonce)
    c.absorb(ad)
    ct = c.encrypt(pt)
    return ct + c.squeeze(16)


def xoodyak_hash(msg, n=32):
    c = Cyclist()
    c.absorb(msg)
    return c.squeeze(n)


# ------------------------------------------------------------- self checks

def _check():
    key = nonce = bytes(range(16))
    assert ascon128_encrypt(key, nonce, b"", b"").hex().upper() == "E355159F292911F794CB1432A0103A8A"
    assert ascon128_encrypt(key, nonce, b"\x00", b"").hex().upper() == "944DF887CD4901614C5DEDBC42FC0DA0"
    assert ascon128_encrypt(key, nonce, b"", b"\x00").hex().upper() == "BC18C3F4E39ECA7222490D967C79BFFC92"

    assert xoodyak_hash(b"").hex().upper() == "EA152F2B47BCE24EFB66C479D4ADF17BD324D806E85FF75EE369EE50DC8F8BD1"
    assert xoodyak_hash(b"\x00").hex().upper() == "27921F8DDF392894460B70B3ED6C091E6421B7D2147DCD6031D7EFEBAD3030CC"
    got = xoodyak_encrypt(
        bytes.fromhex("5a4b3c2d1e0f00f1e2d3c4b5a6978879"),
        bytes.fromhex("6b4c2d0eefd0b19272533415f6d7b899"),
        bytes.fromhex("32f3b47535f6"),
        bytes.fromhex("e465e566e667e7"),
    )
    assert got.hex() == "6e68081c7eacbf72e2a677a60e442748d7a86e788eb9d4", got.hex()
    # Earlier layout: nonce absorbed after keying with an empty id.
    c = Cyclist(key)
    c.absorb(nonce)
    c.absorb(b"")
    old = c.encrypt(b"") + c.squeeze(16)
    assert old.hex().upper() == "4BF0E393144CB58069FC1FEBCAFCFB3C", old.hex()


def write_kat(path, encrypt):
    key = nonce = bytes(range(16))
    count = 1
    with open(path, "w", newline="\n") as f:
        for mlen in range(33):
            for adlen in range(33):
                pt = bytes(range(mlen))
                ad = bytes(range(adlen))
                ct = encrypt(key, nonce, ad, pt)
                f.write(f"Count = {count}\n")
                f.write(f"Key = {key.hex().upper()}\n")
                f.write(f"Nonce = {nonce.hex().upper()}\n")
                f.write(f"PT = {pt.hex().upper()}\n")
                f.write(f"AD = {ad.hex().upper()}\n")
                f.write(f"CT = {ct.hex().upper()}\n\n")
                count += 1


if __name__ == "__main__":
    _check()
    out = sys.argv[1] if len(sys.argv) > 1 else "."
    write_kat(f"{out}/ascon128_LWC_AEAD_KAT_128_128.txt", ascon128_encrypt)
    write_kat(f"{out}/xoodyak_LWC_AEAD_KAT_128_128.txt", xoodyak_encrypt)
