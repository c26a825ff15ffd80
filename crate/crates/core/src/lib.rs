pub mod bench;
pub mod cli;
pub mod ciphers;
pub mod crypt;
pub mod fixtures;
pub mod pdf;
pub mod security;
