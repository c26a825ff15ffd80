//! The 384-bit Xoodoo permutation: three planes of four 32-bit lanes.

pub const STATE_BYTES: usize = 48;
pub const MAX_ROUNDS: usize = 12;

const ROUND_CONSTANTS: [u32; MAX_ROUNDS] = [
    0x0000_0058,
    0x0000_0038,
    0x0000_03c0,
    0x0000_00d0,
    0x0000_0120,
    0x0000_0014,
    0x0000_0060,
    0x0000_002c,
    0x0000_0380,
    0x0000_00f0,
    0x0000_01a0,
    0x0000_0012,
];

/// Lane `(x, y)` lives at index `x + 4 * y`. Lanes are little-endian in the
/// byte view.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct XoodooState {
    pub lanes: [u32; 12],
}

impl XoodooState {
    pub fn from_bytes(bytes: &[u8; STATE_BYTES]) -> Self {
        let mut lanes = [0u32; 12];
        for (l, chunk) in lanes.iter_mut().zip(bytes.chunks_exact(4)) {
            *l = u32::from_le_bytes(chunk.try_into().expect("4 bytes"));
        }
        Self { lanes }
    }

    pub fn to_bytes(&self) -> [u8; STATE_BYTES] {
        let mut out = [0u8; STATE_BYTES];
        for (chunk, l) in out.chunks_exact_mut(4).zip(&self.lanes) {
            chunk.copy_from_slice(&l.to_le_bytes());
        }
        out
    }

    /// Full 12-round Xoodoo.
    pub fn permute(&mut self) {
        for &rc in &ROUND_CONSTANTS {
            self.round(rc);
        }
    }

    #[inline(always)]
    fn round(&mut self, rc: u32) {
        let a = &mut self.lanes;

        // theta
        let mut p = [0u32; 4];
        for x in 0..4 {
            p[x] = a[x] ^ a[x + 4] ^ a[x + 8];
        }
        let mut e = [0u32; 4];
        for x in 0..4 {
            let q = p[(x + 3) % 4];
            e[x] = q.rotate_left(5) ^ q.rotate_left(14);
        }
        for y in 0..3 {
            for x in 0..4 {
                a[x + 4 * y] ^= e[x];
            }
        }

        // rho-west: plane 1 shifted one lane along x, plane 2 rotated 11 bits
        let plane1 = [a[4], a[5], a[6], a[7]];
        for x in 0..4 {
            a[4 + x] = plane1[(x + 3) % 4];
            a[8 + x] = a[8 + x].rotate_left(11);
        }

        // iota
        a[0] ^= rc;

        // chi
        for x in 0..4 {
            let (a0, a1, a2) = (a[x], a[x + 4], a[x + 8]);
            a[x] = a0 ^ (!a1 & a2);
            a[x + 4] = a1 ^ (!a2 & a0);
            a[x + 8] = a2 ^ (!a0 & a1);
        }

        // rho-east: plane 1 rotated 1 bit, plane 2 shifted two lanes and rotated 8 bits
        let plane2 = [a[8], a[9], a[10], a[11]];
        for x in 0..4 {
            a[4 + x] = a[4 + x].rotate_left(1);
            a[8 + x] = plane2[(x + 2) % 4].rotate_left(8);
        }
    }
}

/// Free-function form of [`XoodooState::permute`].
pub fn xoodoo_permutation(mut state: XoodooState) -> XoodooState {
    state.permute();
    state
}
