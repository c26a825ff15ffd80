//! Standard security handler, revision 4: password padding, the O and U
//! entries, the file encryption key and per-object keys.

mod rc4;

use md5::{Digest, Md5};

use crate::ciphers::{ct_eq, CipherSuite};

pub const PASSWORD_PAD: [u8; 32] = [
    0x28, 0xBF, 0x4E, 0x5E, 0x4E, 0x75, 0x8A, 0x41, 0x64, 0x00, 0x4E, 0x56, 0xFF, 0xFA, 0x01, 0x08, 0x2E, 0x2E, 0x00,
    0xB6, 0xD0, 0x68, 0x3E, 0x80, 0x2F, 0x0C, 0xA9, 0xFE, 0x64, 0x53, 0x69, 0x7A,
];

/// Appended to the object-key input for AES only.
pub const AES_SALT: [u8; 4] = [0x73, 0x41, 0x6C, 0x54];

/// Every permission bit granted; bits 1-2 clear, reserved bits set.
pub const DEFAULT_PERMISSIONS: i32 = -4;

pub const REVISION: i64 = 4;
pub const VERSION: i64 = 4;
pub const DEFAULT_LENGTH_BITS: u32 = 128;

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum SecurityError {
    #[error("unsupported security handler revision {0}")]
    UnsupportedRevision(i64),
    #[error("key length {0} bits is not a multiple of 8 in 40..=128")]
    BadKeyLength(u32),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Credentials {
    pub owner_password: Vec<u8>,
    pub user_password: Vec<u8>,
}

impl Credentials {
    pub fn new(owner: impl Into<Vec<u8>>, user: impl Into<Vec<u8>>) -> Self {
        Self { owner_password: owner.into(), user_password: user.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecurityParams {
    pub r: i64,
    pub v: i64,
    pub length_bits: u32,
    pub o: [u8; 32],
    pub u: [u8; 32],
    pub p: i32,
    pub file_id_0: Vec<u8>,
    pub file_encryption_key: Vec<u8>,
    pub encrypt_metadata: bool,
}

impl SecurityParams {
    /// Runs O, file key and U generation in that order.
    pub fn derive(creds: &Credentials, p: i32, file_id_0: &[u8], length_bits: u32) -> Result<Self, SecurityError> {
        let o = compute_o_value(creds, REVISION, length_bits)?;
        let key = compute_encryption_key(&creds.user_password, &o, p, file_id_0, REVISION, length_bits)?;
        let u = compute_u_value(&key, file_id_0, REVISION)?;
        Ok(Self {
            r: REVISION,
            v: VERSION,
            length_bits,
            o,
            u,
            p,
            file_id_0: file_id_0.to_vec(),
            file_encryption_key: key,
            encrypt_metadata: true,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AuthResult {
    UserPassword(Vec<u8>),
    OwnerPassword(Vec<u8>),
    Rejected,
}

impl AuthResult {
    pub fn key(&self) -> Option<&[u8]> {
        match self {
            AuthResult::UserPassword(k) | AuthResult::OwnerPassword(k) => Some(k),
            AuthResult::Rejected => None,
        }
    }
}

fn check(r: i64, length_bits: u32) -> Result<usize, SecurityError> {
    if r != REVISION {
        return Err(SecurityError::UnsupportedRevision(r));
    }
    if !length_bits.is_multiple_of(8) || !(40..=128).contains(&length_bits) {
        return Err(SecurityError::BadKeyLength(length_bits));
    }
    Ok(length_bits as usize / 8)
}

pub fn pad_password(pw: &[u8]) -> [u8; 32] {
    let mut out = PASSWORD_PAD;
    let n = pw.len().min(32);
    out[..n].copy_from_slice(&pw[..n]);
    out[n..].copy_from_slice(&PASSWORD_PAD[..32 - n]);
    out
}

/// MD5 followed by 50 re-digests of the first `n` bytes.
fn digest_51(first: impl FnOnce(&mut Md5), n: usize) -> Vec<u8> {
    let mut h = Md5::new();
    first(&mut h);
    let mut d = h.finalize();
    for _ in 0..50 {
        d = Md5::digest(&d[..n]);
    }
    d[..n].to_vec()
}

/// RC4 key for the O entry; an empty owner password falls back to the user's.
fn owner_key(owner_password: &[u8], n: usize) -> Vec<u8> {
    let padded = pad_password(owner_password);
    digest_51(|h| h.update(padded), n)
}

pub fn compute_o_value(creds: &Credentials, r: i64, length_bits: u32) -> Result<[u8; 32], SecurityError> {
    let n = check(r, length_bits)?;
    let owner = if creds.owner_password.is_empty() { &creds.user_password } else { &creds.owner_password };
    let key = owner_key(owner, n);
    let o = rc4::rc4_twenty_passes(&key, &pad_password(&creds.user_password), false);
    Ok(o.try_into().expect("32 bytes in, 32 out"))
}

pub fn compute_encryption_key(
    user_pw: &[u8],
    o: &[u8; 32],
    p: i32,
    file_id_0: &[u8],
    r: i64,
    length_bits: u32,
) -> Result<Vec<u8>, SecurityError> {
    let n = check(r, length_bits)?;
    Ok(file_key(user_pw, o, p, file_id_0, n, true))
}

fn file_key(user_pw: &[u8], o: &[u8], p: i32, file_id_0: &[u8], n: usize, encrypt_metadata: bool) -> Vec<u8> {
    digest_51(
        |h| {
            h.update(pad_password(user_pw));
            h.update(o);
            h.update(p.to_le_bytes());
            h.update(file_id_0);
            if !encrypt_metadata {
                h.update([0xFF; 4]);
            }
        },
        n,
    )
}

/// 16 significant bytes followed by 16 zero bytes.
pub fn compute_u_value(key: &[u8], file_id_0: &[u8], r: i64) -> Result<[u8; 32], SecurityError> {
    if r != REVISION {
        return Err(SecurityError::UnsupportedRevision(r));
    }
    let mut h = Md5::new();
    h.update(PASSWORD_PAD);
    h.update(file_id_0);
    let enc = rc4::rc4_twenty_passes(key, &h.finalize(), false);
    let mut u = [0u8; 32];
    u[..16].copy_from_slice(&enc);
    Ok(u)
}

fn check_user(password: &[u8], params: &SecurityParams, n: usize) -> Option<Vec<u8>> {
    let key = file_key(password, &params.o, params.p, &params.file_id_0, n, params.encrypt_metadata);
    let u = compute_u_value(&key, &params.file_id_0, params.r).ok()?;
    ct_eq(&u[..16], &params.u[..16]).then_some(key)
}

/// Owner path first (recover the user password from O), then user path.
pub fn authenticate(password: &[u8], params: &SecurityParams) -> AuthResult {
    let Ok(n) = check(params.r, params.length_bits) else {
        return AuthResult::Rejected;
    };
    let recovered = rc4::rc4_twenty_passes(&owner_key(password, n), &params.o, true);
    if let Some(key) = check_user(&recovered, params, n) {
        return AuthResult::OwnerPassword(key);
    }
    match check_user(password, params, n) {
        Some(key) => AuthResult::UserPassword(key),
        None => AuthResult::Rejected,
    }
}

/// MD5 of `file_key ‖ obj (3 bytes LE) ‖ gen (2 bytes LE)`, plus the salt for
/// AES, truncated to `min(len + 5, 16)` bytes.
pub fn derive_object_key(file_key: &[u8], obj_num: u32, gen_num: u16, suite: CipherSuite) -> Vec<u8> {
    let mut h = Md5::new();
    h.update(file_key);
    h.update(&obj_num.to_le_bytes()[..3]);
    h.update(gen_num.to_le_bytes());
    if suite == CipherSuite::Aes128 {
        h.update(AES_SALT);
    }
    let d = h.finalize();
    d[..(file_key.len() + 5).min(16)].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    const ID0: [u8; 16] = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15];

    #[test]
    fn padding() {
        assert_eq!(pad_password(b""), PASSWORD_PAD);
        let long = [b'x'; 40];
        assert_eq!(pad_password(&long), [b'x'; 32]);
        let p = pad_password(b"user");
        assert_eq!(&p[..4], b"user");
        assert_eq!(&p[4..], &PASSWORD_PAD[..28]);
    }

    // Values produced by pypdf 6.20 (AlgV4) with P = -4 and ID0 = 00..0f.
    #[test]
    fn matches_independent_library_owner_user() {
        let creds = Credentials::new("owner", "user");
        let p = SecurityParams::derive(&creds, -4, &ID0, 128).unwrap();
        assert_eq!(hex::encode(p.o), "0ba3835f88f90388e74e54584125ce142be0de24c6b0d37746e075b891756671");
        assert_eq!(hex::encode(&p.file_encryption_key), "4c8652a72175cef37e14c485b59602d2");
        assert_eq!(hex::encode(&p.u[..16]), "b5eeee15d9561a1fad6c9d5a195dde33");
        assert_eq!(p.u[16..], [0u8; 16]);
    }

    #[test]
    fn matches_independent_library_empty_passwords() {
        let p = SecurityParams::derive(&Credentials::default(), -4, &ID0, 128).unwrap();
        assert_eq!(hex::encode(p.o), "36451bd39d753b7c1d10922c28e6665aa4f3353fb0348b536893e3b1db5c579b");
        assert_eq!(hex::encode(&p.file_encryption_key), "4ee1acddaa1eccd4435c2b19c5e9dded");
        assert_eq!(hex::encode(&p.u[..16]), "76a978b4851bf34ae4b760cc31213e78");
    }

    #[test]
    fn revision_and_length_are_checked() {
        let c = Credentials::default();
        assert_eq!(compute_o_value(&c, 3, 128), Err(SecurityError::UnsupportedRevision(3)));
        assert_eq!(compute_o_value(&c, 4, 100), Err(SecurityError::BadKeyLength(100)));
        assert_eq!(compute_u_value(&[0; 16], &ID0, 6), Err(SecurityError::UnsupportedRevision(6)));
        let k = compute_encryption_key(b"", &[0; 32], -4, &ID0, 4, 40).unwrap();
        assert_eq!(k.len(), 5);
    }

    #[test]
    fn default_permissions_are_negative_with_reserved_bits() {
        let p = DEFAULT_PERMISSIONS as u32;
        assert!(DEFAULT_PERMISSIONS < 0);
        assert_eq!(p & 0b11, 0);
        assert_eq!(p & 0b1100_0000, 0b1100_0000);
        assert_eq!(p >> 12, 0xFFFFF);
    }

    #[test]
    fn owner_and_user_paths() {
        let p = SecurityParams::derive(&Credentials::new("boss", "reader"), -4, &ID0, 128).unwrap();
        assert_eq!(authenticate(b"reader", &p), AuthResult::UserPassword(p.file_encryption_key.clone()));
        assert_eq!(authenticate(b"boss", &p), AuthResult::OwnerPassword(p.file_encryption_key.clone()));
        assert_eq!(authenticate(b"guess", &p), AuthResult::Rejected);
    }

    #[test]
    fn object_key_suffix_order() {
        // file key empty so the digest input is exactly the suffix.
        let expect = Md5::digest([0x56, 0x34, 0x12, 0x02, 0x01]);
        assert_eq!(derive_object_key(&[], 0x123456, 0x0102, CipherSuite::Ascon128), expect[..5].to_vec());
        assert_eq!(derive_object_key(&[], 0xAB123456, 0x0102, CipherSuite::Ascon128), expect[..5].to_vec());
    }

    // md5(00*16 || 01 00 00 || 00 00 || "sAlT") from Python hashlib.
    #[test]
    fn aes_object_key_oracle() {
        let k = derive_object_key(&[0; 16], 1, 0, CipherSuite::Aes128);
        assert_eq!(hex::encode(k), "1c823297924ab18cf008644f6d510522");
        assert_ne!(derive_object_key(&[0; 16], 1, 0, CipherSuite::Ascon128), derive_object_key(&[0; 16], 1, 0, CipherSuite::Aes128));
        assert_eq!(derive_object_key(&[0; 16], 1, 0, CipherSuite::Ascon128), derive_object_key(&[0; 16], 1, 0, CipherSuite::Xoodyak));
    }

    #[test]
    fn object_keys_do_not_collide() {
        let key = [0x5a; 16];
        let mut seen = HashSet::new();
        for i in 0..10_000u32 {
            let (obj, gen) = (i.wrapping_mul(2654435761) & 0xFF_FFFF, (i % 7) as u16);
            assert!(seen.insert(derive_object_key(&key, obj, gen, CipherSuite::Aes128)), "collision at {i}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn user_password_always_authenticates(
            user in proptest::collection::vec(any::<u8>(), 0..40),
            owner in proptest::collection::vec(any::<u8>(), 0..40),
            id in proptest::array::uniform16(any::<u8>()),
        ) {
            let p = SecurityParams::derive(&Credentials::new(owner.clone(), user.clone()), -4, &id, 128).unwrap();
            let auth = authenticate(&user, &p);
            prop_assert_eq!(auth.key(), Some(&p.file_encryption_key[..]));
            if owner.is_empty() || pad_password(&owner) == pad_password(&user) {
                prop_assert!(matches!(auth, AuthResult::OwnerPassword(_)));
            } else {
                prop_assert!(matches!(auth, AuthResult::UserPassword(_)));
            }
        }

        #[test]
        fn derivations_are_pure_and_short(
            user in proptest::collection::vec(any::<u8>(), 0..40),
            bits in (5u32..=16).prop_map(|b| b * 8),
            obj in any::<u32>(),
            gen in any::<u16>(),
        ) {
            let c = Credentials::new(b"o".to_vec(), user);
            let a = SecurityParams::derive(&c, -4, &ID0, bits).unwrap();
            let b = SecurityParams::derive(&c, -4, &ID0, bits).unwrap();
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(a.file_encryption_key.len() as u32, bits / 8);
            for s in CipherSuite::ALL {
                prop_assert!(derive_object_key(&a.file_encryption_key, obj, gen, s).len() <= 16);
            }
        }
    }
}
