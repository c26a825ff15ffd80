//! Cipher backends: AES-128-CBC, ASCON-128 and Xoodyak, behind the common
//! [`CipherSuite`] contract.

pub mod aes;
pub mod ascon;
pub mod kat;
pub mod xoodoo;
pub mod xoodyak;

use std::fmt;
use std::str::FromStr;

pub use self::aes::{aes128_block_encrypt, aes128_cbc_decrypt, aes128_cbc_encrypt, AesContext};
pub use self::ascon::{ascon_aead_decrypt, ascon_aead_encrypt, ascon_permutation, AsconState};
pub use self::kat::{aes128_self_test, run_kat_file, KatReport};
pub use self::xoodoo::{xoodoo_permutation, XoodooState};
pub use self::xoodyak::{xoodyak_aead_decrypt, xoodyak_aead_encrypt};

#[derive(Debug, thiserror::Error)]
pub enum CipherError {
    #[error("authentication tag mismatch")]
    TagMismatch,
    #[error("invalid padding")]
    BadPadding,
    #[error("ciphertext length {0} is not a positive multiple of 16")]
    BadLength(usize),
    #[error("tag must be {expected} bytes, got {actual}")]
    BadTagLength { expected: usize, actual: usize },
    #[error("malformed KAT file: {0}")]
    MalformedKatFile(String),
}

/// Which cipher encrypts string and stream payloads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CipherSuite {
    Aes128,
    Ascon128,
    Xoodyak,
}

impl CipherSuite {
    pub const ALL: [CipherSuite; 3] = [CipherSuite::Aes128, CipherSuite::Ascon128, CipherSuite::Xoodyak];

    pub fn key_len(self) -> usize {
        16
    }

    /// IV length for AES, nonce length for the AEADs.
    pub fn nonce_len(self) -> usize {
        16
    }

    pub fn tag_len(self) -> usize {
        match self {
            CipherSuite::Aes128 => 0,
            CipherSuite::Ascon128 | CipherSuite::Xoodyak => 16,
        }
    }

    /// Key length in bits, as written to the `Length` entry.
    pub fn key_bits(self) -> u32 {
        (self.key_len() * 8) as u32
    }

    pub fn is_aead(self) -> bool {
        self.tag_len() > 0
    }

    /// Lowercase CLI name.
    pub fn name(self) -> &'static str {
        match self {
            CipherSuite::Aes128 => "aes128",
            CipherSuite::Ascon128 => "ascon128",
            CipherSuite::Xoodyak => "xoodyak",
        }
    }

    /// Crypt filter method name written to the `CFM` entry.
    pub fn cfm_name(self) -> &'static str {
        match self {
            CipherSuite::Aes128 => "AESV2",
            CipherSuite::Ascon128 => "ASCON128",
            CipherSuite::Xoodyak => "XOODYAK",
        }
    }

    pub fn from_cfm_name(name: &[u8]) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.cfm_name().as_bytes() == name)
    }

    /// Encrypts with the suite's native primitive. AES ignores `ad` and
    /// returns an empty tag.
    pub fn encrypt(self, key: &[u8; 16], nonce: &[u8; 16], ad: &[u8], pt: &[u8]) -> (Vec<u8>, Vec<u8>) {
        match self {
            CipherSuite::Aes128 => (aes128_cbc_encrypt(key, nonce, pt), Vec::new()),
            CipherSuite::Ascon128 => {
                let (ct, tag) = ascon_aead_encrypt(key, nonce, ad, pt);
                (ct, tag.to_vec())
            }
            CipherSuite::Xoodyak => {
                let (ct, tag) = xoodyak_aead_encrypt(key, nonce, ad, pt);
                (ct, tag.to_vec())
            }
        }
    }

    pub fn decrypt(
        self,
        key: &[u8; 16],
        nonce: &[u8; 16],
        ad: &[u8],
        ct: &[u8],
        tag: &[u8],
        verify_tag: bool,
    ) -> Result<Vec<u8>, CipherError> {
        if tag.len() != self.tag_len() {
            return Err(CipherError::BadTagLength { expected: self.tag_len(), actual: tag.len() });
        }
        match self {
            CipherSuite::Aes128 => aes128_cbc_decrypt(key, nonce, ct),
            CipherSuite::Ascon128 => {
                ascon_aead_decrypt(key, nonce, ad, ct, tag.try_into().expect("checked"), verify_tag)
            }
            CipherSuite::Xoodyak => {
                xoodyak_aead_decrypt(key, nonce, ad, ct, tag.try_into().expect("checked"), verify_tag)
            }
        }
    }
}

impl fmt::Display for CipherSuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CipherSuite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "aes128" | "aes" | "aes-128" => Ok(CipherSuite::Aes128),
            "ascon128" | "ascon" | "ascon-128" => Ok(CipherSuite::Ascon128),
            "xoodyak" => Ok(CipherSuite::Xoodyak),
            other => Err(format!("unknown cipher '{other}' (expected aes128, ascon128 or xoodyak)")),
        }
    }
}

/// Comparison whose running time does not depend on where the inputs differ.
pub(crate) fn ct_eq(a: &[u8], b: &[u8]) -> bool {
    a.len() == b.len() && a.iter().zip(b).fold(0u8, |acc, (x, y)| acc | (x ^ y)) == 0
}
