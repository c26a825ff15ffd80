//! Xoodyak keyed mode: the Cyclist duplex over Xoodoo.

use super::xoodoo::{XoodooState, STATE_BYTES};
use super::{ct_eq, CipherError};

pub const KEY_LEN: usize = 16;
pub const NONCE_LEN: usize = 16;
pub const TAG_LEN: usize = 16;

const RATE_KEYED_IN: usize = 44;
const RATE_KEYED_OUT: usize = 24;
const RATE_HASH: usize = 16;

const FLAG_ZERO: u8 = 0x00;
const FLAG_ABSORB_KEY: u8 = 0x02;
const FLAG_ABSORB: u8 = 0x03;
const FLAG_SQUEEZE: u8 = 0x40;
const FLAG_CRYPT: u8 = 0x80;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Phase {
    Up,
    Down,
}

/// A Cyclist instance. Only the operations the AEAD needs are exposed, plus
/// hash-mode absorb/squeeze for permutation cross-checks.
#[derive(Clone, Debug)]
pub struct Cyclist {
    state: XoodooState,
    phase: Phase,
    keyed: bool,
    absorb_rate: usize,
    squeeze_rate: usize,
}

impl Cyclist {
    pub fn hash() -> Self {
        Self {
            state: XoodooState::default(),
            phase: Phase::Up,
            keyed: false,
            absorb_rate: RATE_HASH,
            squeeze_rate: RATE_HASH,
        }
    }

    /// Keyed instance with key identifier `id` (may be empty).
    ///
    /// # Panics
    /// If `key.len() + id.len() + 1 > 44`.
    pub fn keyed(key: &[u8], id: &[u8]) -> Self {
        assert!(key.len() + id.len() < RATE_KEYED_IN, "key and id too long");
        let mut c = Self {
            state: XoodooState::default(),
            phase: Phase::Up,
            keyed: true,
            absorb_rate: RATE_KEYED_IN,
            squeeze_rate: RATE_KEYED_OUT,
        };
        let mut block = [0u8; RATE_KEYED_IN];
        block[..key.len()].copy_from_slice(key);
        block[key.len()..key.len() + id.len()].copy_from_slice(id);
        block[key.len() + id.len()] = id.len() as u8;
        c.absorb_any(&block[..key.len() + id.len() + 1], RATE_KEYED_IN, FLAG_ABSORB_KEY);
        c
    }

    #[inline(always)]
    fn xor_byte(&mut self, i: usize, b: u8) {
        self.state.lanes[i / 4] ^= (b as u32) << (8 * (i % 4));
    }

    #[inline(always)]
    fn byte(&self, i: usize) -> u8 {
        (self.state.lanes[i / 4] >> (8 * (i % 4))) as u8
    }

    fn up(&mut self, out: &mut [u8], flag: u8) {
        if self.keyed {
            self.xor_byte(STATE_BYTES - 1, flag);
        }
        self.state.permute();
        self.phase = Phase::Up;
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.byte(i);
        }
    }

    fn down(&mut self, block: &[u8], flag: u8) {
        for (i, b) in block.iter().enumerate() {
            self.xor_byte(i, *b);
        }
        self.xor_byte(block.len(), 0x01);
        self.xor_byte(STATE_BYTES - 1, if self.keyed { flag } else { flag & 0x01 });
        self.phase = Phase::Down;
    }

    fn absorb_any(&mut self, data: &[u8], rate: usize, mut flag: u8) {
        let mut offset = 0;
        loop {
            let end = (offset + rate).min(data.len());
            if self.phase != Phase::Up {
                self.up(&mut [], FLAG_ZERO);
            }
            self.down(&data[offset..end], flag);
            flag = FLAG_ZERO;
            offset = end;
            if offset >= data.len() {
                break;
            }
        }
    }

    pub fn absorb(&mut self, data: &[u8]) {
        self.absorb_any(data, self.absorb_rate, FLAG_ABSORB);
    }

    fn crypt(&mut self, input: &[u8], decrypt: bool) -> Vec<u8> {
        debug_assert!(self.keyed);
        let mut out = Vec::with_capacity(input.len());
        let mut flag = FLAG_CRYPT;
        let mut offset = 0;
        let mut keystream = [0u8; RATE_KEYED_OUT];
        loop {
            let end = (offset + RATE_KEYED_OUT).min(input.len());
            let block = &input[offset..end];
            self.up(&mut keystream[..block.len()], flag);
            flag = FLAG_ZERO;
            let start = out.len();
            out.extend(block.iter().zip(&keystream).map(|(a, b)| a ^ b));
            if decrypt {
                let pt = out[start..].to_vec();
                self.down(&pt, FLAG_ZERO);
            } else {
                self.down(block, FLAG_ZERO);
            }
            offset = end;
            if offset >= input.len() {
                break;
            }
        }
        out
    }

    pub fn encrypt(&mut self, pt: &[u8]) -> Vec<u8> {
        self.crypt(pt, false)
    }

    pub fn decrypt(&mut self, ct: &[u8]) -> Vec<u8> {
        self.crypt(ct, true)
    }

    pub fn squeeze(&mut self, out: &mut [u8]) {
        let rate = self.squeeze_rate;
        let mut chunks = out.chunks_mut(rate);
        let first = chunks.next().unwrap_or(&mut []);
        self.up(first, FLAG_SQUEEZE);
        for chunk in chunks {
            self.down(&[], FLAG_ZERO);
            self.up(chunk, FLAG_ZERO);
        }
    }
}

/// Keyed instance for one AEAD message: the nonce is carried as the key
/// identifier, then the associated data is absorbed.
fn start(key: &[u8; KEY_LEN], nonce: &[u8; NONCE_LEN], ad: &[u8]) -> Cyclist {
    let mut c = Cyclist::keyed(key, nonce);
    c.absorb(ad);
    c
}

/// Encrypts `pt`, returning `(ct, tag)` with `ct.len() == pt.len()`.
pub fn xoodyak_aead_encrypt(
    key: &[u8; KEY_LEN],
    nonce: &[u8; NONCE_LEN],
    ad: &[u8],
    pt: &[u8],
) -> (Vec<u8>, [u8; TAG_LEN]) {
    let mut c = start(key, nonce, ad);
    let ct = c.encrypt(pt);
    let mut tag = [0u8; TAG_LEN];
    c.squeeze(&mut tag);
    (ct, tag)
}

/// Decrypts `ct`; the tag is only compared when `verify_tag` is set.
pub fn xoodyak_aead_decrypt(
    key: &[u8; KEY_LEN],
    nonce: &[u8; NONCE_LEN],
    ad: &[u8],
    ct: &[u8],
    tag: &[u8; TAG_LEN],
    verify_tag: bool,
) -> Result<Vec<u8>, CipherError> {
    let mut c = start(key, nonce, ad);
    let pt = c.decrypt(ct);
    let mut expected = [0u8; TAG_LEN];
    c.squeeze(&mut expected);
    if verify_tag && !ct_eq(&expected, tag) {
        return Err(CipherError::TagMismatch);
    }
    Ok(pt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn h(s: &str) -> Vec<u8> {
        hex::decode(s).unwrap()
    }

    // Xoodyak hash-mode digests published alongside the reference code; they
    // exercise the permutation and the unkeyed Cyclist path.
    #[test]
    fn hash_mode_reference_digests() {
        let cases = [
            ("", "EA152F2B47BCE24EFB66C479D4ADF17BD324D806E85FF75EE369EE50DC8F8BD1"),
            ("00", "27921F8DDF392894460B70B3ED6C091E6421B7D2147DCD6031D7EFEBAD3030CC"),
            (
                "000102030405060708090A0B0C0D0E0F101112131415161718191A1B1C1D1E1F202122232425262728",
                "079BFF70855D0767CC3349752F3DEFF2B01D44A15EF68B98C9BCDF20BD1970D8",
            ),
            ("119713CC83EEEF", "999d5865b0dd9fa30973365fecf041778d0449a1b0c55b743660831a7d5025ee"),
        ];
        for (msg, md) in cases {
            let mut c = Cyclist::hash();
            c.absorb(&h(msg));
            let mut out = [0u8; 32];
            c.squeeze(&mut out);
            assert_eq!(out.to_vec(), h(md), "message {msg}");
        }
    }

    // SUPERCOP self-test vector for the final-round AEAD (nonce as key id).
    #[test]
    fn supercop_aead_vector() {
        let key: [u8; 16] = h("5a4b3c2d1e0f00f1e2d3c4b5a6978879").try_into().unwrap();
        let nonce: [u8; 16] = h("6b4c2d0eefd0b19272533415f6d7b899").try_into().unwrap();
        let ad = h("32f3b47535f6");
        let pt = h("e465e566e667e7");
        let (ct, tag) = xoodyak_aead_encrypt(&key, &nonce, &ad, &pt);
        let mut joined = ct.clone();
        joined.extend_from_slice(&tag);
        assert_eq!(hex::encode(joined), "6e68081c7eacbf72e2a677a60e442748d7a86e788eb9d4");
        assert_eq!(xoodyak_aead_decrypt(&key, &nonce, &ad, &ct, &tag, true).unwrap(), pt);
    }

    // Earlier-round layout that absorbed the nonce as ordinary data. Kept as a
    // check on the keyed Cyclist primitives themselves.
    #[test]
    fn nonce_absorbed_layout_vectors() {
        let cases = [
            ("", "", "4BF0E393144CB58069FC1FEBCAFCFB3C"),
            (
                "000102030405060708090A0B0C",
                "000102030405060708090A0B0C0D0E0F101112131415",
                "CFA1C6EFB6E4795450ABF50494C96372BF566DEC846DBAE29C36F4A9CF",
            ),
        ];
        let key = h("000102030405060708090A0B0C0D0E0F");
        let nonce = key.clone();
        for (pt, ad, expected) in cases {
            let mut c = Cyclist::keyed(&key, &[]);
            c.absorb(&nonce);
            c.absorb(&h(ad));
            let mut out = c.encrypt(&h(pt));
            let mut tag = [0u8; 16];
            c.squeeze(&mut tag);
            out.extend_from_slice(&tag);
            assert_eq!(out, h(expected));
        }
    }

    #[test]
    fn empty_message_length_contract() {
        let (ct, tag) = xoodyak_aead_encrypt(&[0; 16], &[0; 16], b"", b"");
        assert!(ct.is_empty());
        assert_eq!(tag.len(), 16);
    }

    #[test]
    fn round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..1000 {
            let key: [u8; 16] = rng.gen();
            let nonce: [u8; 16] = rng.gen();
            let ad: Vec<u8> = (0..rng.gen_range(0..100)).map(|_| rng.gen()).collect();
            let pt: Vec<u8> = (0..rng.gen_range(0..100)).map(|_| rng.gen()).collect();
            let (ct, tag) = xoodyak_aead_encrypt(&key, &nonce, &ad, &pt);
            assert_eq!(ct.len(), pt.len());
            assert_eq!(xoodyak_aead_decrypt(&key, &nonce, &ad, &ct, &tag, true).unwrap(), pt);
        }
    }

    #[test]
    fn unverified_decrypt_returns_garbled_plaintext() {
        let (mut ct, tag) = xoodyak_aead_encrypt(&[3; 16], &[4; 16], b"", b"some stream bytes");
        ct[0] ^= 1;
        assert!(matches!(
            xoodyak_aead_decrypt(&[3; 16], &[4; 16], b"", &ct, &tag, true),
            Err(CipherError::TagMismatch)
        ));
        let pt = xoodyak_aead_decrypt(&[3; 16], &[4; 16], b"", &ct, &tag, false).unwrap();
        assert_eq!(pt[0], b's' ^ 1);
    }
}
