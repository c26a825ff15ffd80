//! ASCON-128 (v1.2): 320-bit sponge state, rate 64 bits, 12 initialization and
//! finalization rounds, 6 rounds per data block.

use super::{ct_eq, CipherError};

pub const KEY_LEN: usize = 16;
pub const NONCE_LEN: usize = 16;
pub const TAG_LEN: usize = 16;
/// Rate in bytes.
pub const RATE: usize = 8;
pub const ROUNDS_A: usize = 12;
pub const ROUNDS_B: usize = 6;

const IV: u64 = 0x8040_0c06_0000_0000;

/// Five 64-bit words, big-endian when loaded from or stored to bytes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct AsconState {
    pub x: [u64; 5],
}

impl AsconState {
    pub fn new(x: [u64; 5]) -> Self {
        Self { x }
    }

    pub fn from_bytes(bytes: &[u8; 40]) -> Self {
        let mut x = [0u64; 5];
        for (w, chunk) in x.iter_mut().zip(bytes.chunks_exact(8)) {
            *w = u64::from_be_bytes(chunk.try_into().expect("8 bytes"));
        }
        Self { x }
    }

    pub fn to_bytes(&self) -> [u8; 40] {
        let mut out = [0u8; 40];
        for (chunk, w) in out.chunks_exact_mut(8).zip(&self.x) {
            chunk.copy_from_slice(&w.to_be_bytes());
        }
        out
    }

    /// Applies the last `rounds` rounds of the 12-round schedule, so 12 gives
    /// p^a and 6 gives p^b.
    ///
    /// # Panics
    /// If `rounds > 12`.
    pub fn permute(&mut self, rounds: usize) {
        assert!(rounds <= ROUNDS_A, "ascon permutation takes at most 12 rounds");
        for r in (ROUNDS_A - rounds)..ROUNDS_A {
            self.round(round_constant(r));
        }
    }

    #[inline(always)]
    fn round(&mut self, c: u64) {
        let [mut x0, mut x1, mut x2, mut x3, mut x4] = self.x;
        x2 ^= c;

        x0 ^= x4;
        x4 ^= x3;
        x2 ^= x1;
        let t0 = !x0 & x1;
        let t1 = !x1 & x2;
        let t2 = !x2 & x3;
        let t3 = !x3 & x4;
        let t4 = !x4 & x0;
        x0 ^= t1;
        x1 ^= t2;
        x2 ^= t3;
        x3 ^= t4;
        x4 ^= t0;
        x1 ^= x0;
        x0 ^= x4;
        x3 ^= x2;
        x2 = !x2;

        x0 ^= x0.rotate_right(19) ^ x0.rotate_right(28);
        x1 ^= x1.rotate_right(61) ^ x1.rotate_right(39);
        x2 ^= x2.rotate_right(1) ^ x2.rotate_right(6);
        x3 ^= x3.rotate_right(10) ^ x3.rotate_right(17);
        x4 ^= x4.rotate_right(7) ^ x4.rotate_right(41);

        self.x = [x0, x1, x2, x3, x4];
    }
}

#[inline(always)]
const fn round_constant(r: usize) -> u64 {
    (((0x0f - r) << 4) | r) as u64
}

/// Free-function form of [`AsconState::permute`].
pub fn ascon_permutation(mut state: AsconState, rounds: usize) -> AsconState {
    state.permute(rounds);
    state
}

#[inline(always)]
fn load_partial(bytes: &[u8]) -> u64 {
    let mut buf = [0u8; 8];
    buf[..bytes.len()].copy_from_slice(bytes);
    u64::from_be_bytes(buf)
}

#[inline(always)]
fn pad(len: usize) -> u64 {
    0x80u64 << (56 - 8 * len)
}

struct Sponge {
    s: AsconState,
    k0: u64,
    k1: u64,
}

impl Sponge {
    fn init(key: &[u8; KEY_LEN], nonce: &[u8; NONCE_LEN], ad: &[u8]) -> Self {
        let k0 = u64::from_be_bytes(key[..8].try_into().expect("8"));
        let k1 = u64::from_be_bytes(key[8..].try_into().expect("8"));
        let n0 = u64::from_be_bytes(nonce[..8].try_into().expect("8"));
        let n1 = u64::from_be_bytes(nonce[8..].try_into().expect("8"));
        let mut s = AsconState::new([IV, k0, k1, n0, n1]);
        s.permute(ROUNDS_A);
        s.x[3] ^= k0;
        s.x[4] ^= k1;

        if !ad.is_empty() {
            let mut blocks = ad.chunks_exact(RATE);
            for block in blocks.by_ref() {
                s.x[0] ^= u64::from_be_bytes(block.try_into().expect("8"));
                s.permute(ROUNDS_B);
            }
            let rem = blocks.remainder();
            s.x[0] ^= load_partial(rem) ^ pad(rem.len());
            s.permute(ROUNDS_B);
        }
        s.x[4] ^= 1;
        Self { s, k0, k1 }
    }

    fn finalize(mut self) -> [u8; TAG_LEN] {
        self.s.x[1] ^= self.k0;
        self.s.x[2] ^= self.k1;
        self.s.permute(ROUNDS_A);
        let mut tag = [0u8; TAG_LEN];
        tag[..8].copy_from_slice(&(self.s.x[3] ^ self.k0).to_be_bytes());
        tag[8..].copy_from_slice(&(self.s.x[4] ^ self.k1).to_be_bytes());
        tag
    }
}

/// Encrypts `pt` and returns `(ct, tag)` with `ct.len() == pt.len()`.
pub fn ascon_aead_encrypt(
    key: &[u8; KEY_LEN],
    nonce: &[u8; NONCE_LEN],
    ad: &[u8],
    pt: &[u8],
) -> (Vec<u8>, [u8; TAG_LEN]) {
    let mut sp = Sponge::init(key, nonce, ad);
    let mut ct = Vec::with_capacity(pt.len());
    let mut blocks = pt.chunks_exact(RATE);
    for block in blocks.by_ref() {
        sp.s.x[0] ^= u64::from_be_bytes(block.try_into().expect("8"));
        ct.extend_from_slice(&sp.s.x[0].to_be_bytes());
        sp.s.permute(ROUNDS_B);
    }
    let rem = blocks.remainder();
    sp.s.x[0] ^= load_partial(rem);
    ct.extend_from_slice(&sp.s.x[0].to_be_bytes()[..rem.len()]);
    sp.s.x[0] ^= pad(rem.len());
    let tag = sp.finalize();
    (ct, tag)
}

/// Decrypts `ct`. With `verify_tag == false` the recomputed tag is not
/// compared and the (possibly unauthenticated) plaintext is returned as is.
pub fn ascon_aead_decrypt(
    key: &[u8; KEY_LEN],
    nonce: &[u8; NONCE_LEN],
    ad: &[u8],
    ct: &[u8],
    tag: &[u8; TAG_LEN],
    verify_tag: bool,
) -> Result<Vec<u8>, CipherError> {
    let mut sp = Sponge::init(key, nonce, ad);
    let mut pt = Vec::with_capacity(ct.len());
    let mut blocks = ct.chunks_exact(RATE);
    for block in blocks.by_ref() {
        let c = u64::from_be_bytes(block.try_into().expect("8"));
        pt.extend_from_slice(&(sp.s.x[0] ^ c).to_be_bytes());
        sp.s.x[0] = c;
        sp.s.permute(ROUNDS_B);
    }
    let rem = blocks.remainder();
    let c = load_partial(rem);
    let p = (sp.s.x[0] ^ c).to_be_bytes();
    pt.extend_from_slice(&p[..rem.len()]);
    let keep = if rem.is_empty() { u64::MAX } else { u64::MAX >> (8 * rem.len()) };
    sp.s.x[0] = (sp.s.x[0] & keep) ^ c ^ pad(rem.len());
    let expected = sp.finalize();
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
    use std::collections::HashSet;

    fn sample_state() -> AsconState {
        AsconState::new([
            0x0123456789abcdef,
            0xef0123456789abcd,
            0xcdef0123456789ab,
            0xabcdef0123456789,
            0x89abcdef01234567,
        ])
    }

    // Published vectors from the RustCrypto `ascon` permutation crate.
    #[test]
    fn permutation_12_rounds_reference_vector() {
        let out = ascon_permutation(sample_state(), 12);
        assert_eq!(
            out.x,
            [
                0x206416dfc624bb14,
                0x1b0c47a601058aab,
                0x8934cfc93814cddd,
                0xa9738d287a748e4b,
                0xddd934f058afc7e1
            ]
        );
    }

    #[test]
    fn permutation_6_rounds_reference_vector() {
        let out = ascon_permutation(sample_state(), 6);
        assert_eq!(
            out.x,
            [
                0xc27b505c635eb07f,
                0xd388f5d2a72046fa,
                0x9e415c204d7b15e7,
                0xce0d71450fe44581,
                0xdd7c5fef57befe48
            ]
        );
    }

    #[test]
    fn round_constants_match_schedule() {
        let expected = [0xf0, 0xe1, 0xd2, 0xc3, 0xb4, 0xa5, 0x96, 0x87, 0x78, 0x69, 0x5a, 0x4b];
        for (r, c) in expected.iter().enumerate() {
            assert_eq!(round_constant(r), *c);
        }
    }

    #[test]
    fn twelve_rounds_differ_from_six_twice() {
        let a = ascon_permutation(sample_state(), 12);
        let b = ascon_permutation(ascon_permutation(sample_state(), 6), 6);
        assert_ne!(a, b);
    }

    #[test]
    fn permutation_is_collision_free_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut seen = HashSet::new();
        for _ in 0..10_000 {
            let s = AsconState::new(rng.gen());
            assert!(seen.insert(ascon_permutation(s, 12).to_bytes()));
        }
    }

    #[test]
    fn byte_round_trip() {
        let s = sample_state();
        assert_eq!(AsconState::from_bytes(&s.to_bytes()), s);
        assert_eq!(s.to_bytes()[..8], 0x0123456789abcdefu64.to_be_bytes());
    }

    #[test]
    fn empty_message_gives_empty_ct_and_tag() {
        let (ct, tag) = ascon_aead_encrypt(&[0; 16], &[0; 16], b"", b"");
        assert!(ct.is_empty());
        assert_eq!(tag.len(), 16);
        assert_eq!(
            ascon_aead_decrypt(&[0; 16], &[0; 16], b"", &ct, &tag, true).unwrap(),
            Vec::<u8>::new()
        );
    }

    #[test]
    fn nonce_separation() {
        let key = [7u8; 16];
        let pt = b"partial encryption";
        let (a, _) = ascon_aead_encrypt(&key, &[1; 16], b"", pt);
        let (b, _) = ascon_aead_encrypt(&key, &[2; 16], b"", pt);
        assert_ne!(a, b);
    }

    #[test]
    fn round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let key: [u8; 16] = rng.gen();
            let nonce: [u8; 16] = rng.gen();
            let ad: Vec<u8> = (0..rng.gen_range(0..40)).map(|_| rng.gen()).collect();
            let pt: Vec<u8> = (0..rng.gen_range(0..100)).map(|_| rng.gen()).collect();
            let (ct, tag) = ascon_aead_encrypt(&key, &nonce, &ad, &pt);
            assert_eq!(ct.len(), pt.len());
            assert_eq!(ascon_aead_decrypt(&key, &nonce, &ad, &ct, &tag, true).unwrap(), pt);
        }
    }

    #[test]
    fn flipped_bit_rejected_only_when_verifying() {
        let key = [1u8; 16];
        let nonce = [2u8; 16];
        let pt = b"0123456789abcdef012";
        let (mut ct, tag) = ascon_aead_encrypt(&key, &nonce, b"", pt);
        ct[3] ^= 0x10;
        assert!(matches!(
            ascon_aead_decrypt(&key, &nonce, b"", &ct, &tag, true),
            Err(CipherError::TagMismatch)
        ));
        let garbled = ascon_aead_decrypt(&key, &nonce, b"", &ct, &tag, false).unwrap();
        assert_eq!(garbled.len(), pt.len());
        assert_ne!(garbled.as_slice(), pt.as_slice());
        assert_eq!(garbled[3], pt[3] ^ 0x10);
    }
}
