//! The RC4 keystream, used only inside the O and U computations.

pub(crate) fn rc4(key: &[u8], data: &[u8]) -> Vec<u8> {
    debug_assert!(!key.is_empty() && key.len() <= 256);
    let mut s: [u8; 256] = std::array::from_fn(|i| i as u8);
    let mut j = 0u8;
    for i in 0..256 {
        j = j.wrapping_add(s[i]).wrapping_add(key[i % key.len()]);
        s.swap(i, j as usize);
    }
    let (mut i, mut j) = (0u8, 0u8);
    data.iter()
        .map(|&b| {
            i = i.wrapping_add(1);
            j = j.wrapping_add(s[i as usize]);
            s.swap(i as usize, j as usize);
            b ^ s[s[i as usize].wrapping_add(s[j as usize]) as usize]
        })
        .collect()
}

/// Twenty passes, pass `i` keyed with every key byte XOR `i`.
pub(crate) fn rc4_twenty_passes(key: &[u8], data: &[u8], reverse: bool) -> Vec<u8> {
    let mut out = data.to_vec();
    let mut pass = |i: u8| {
        let k: Vec<u8> = key.iter().map(|b| b ^ i).collect();
        out = rc4(&k, &out);
    };
    if reverse {
        (0..20).rev().for_each(&mut pass);
    } else {
        (0..20).for_each(&mut pass);
    }
    out
}
