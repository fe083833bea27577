//! Bit-level kernel for groups with `|F| <= 64`.
//!
//! A configuration is a `u64` mask (bit set = spin down). Translation by `f`
//! is a composition of one block rotation per cyclic factor, so
//! `A(σ)_f = |F| − 2·popcount(x ^ translate(x, f))` costs a handful of shifts.

use crate::error::{Error, Result};
use crate::group::GroupSpec;

/// Largest group order the mask kernel accepts.
pub const MAX_MASK_ORDER: usize = 64;

/// Rotation of every aligned block of `width` bits by `amount` positions.
#[derive(Clone, Copy, Debug)]
struct BlockRotation {
    amount: u32,
    width: u32,
    low: u64,
    high: u64,
}

impl BlockRotation {
    fn new(amount: usize, width: usize, n: usize) -> Self {
        let full = full_mask(n);
        let mut low = 0u64;
        let keep = width - amount;
        for block in (0..n).step_by(width) {
            low |= ((1u64 << keep) - 1) << block;
        }
        BlockRotation {
            amount: amount as u32,
            width: width as u32,
            low,
            high: full & !low,
        }
    }

    #[inline]
    fn apply(&self, x: u64) -> u64 {
        ((x >> self.amount) & self.low) | ((x << (self.width - self.amount)) & self.high)
    }
}

/// An arbitrary bit permutation applied one byte at a time.
#[derive(Clone, Debug)]
pub struct BytePermutation {
    tables: Vec<[u64; 256]>,
}

impl BytePermutation {
    /// Bit `j` of the input moves to bit `dest[j]` of the output.
    pub fn new(dest: &[usize]) -> Self {
        let tables = dest
            .chunks(8)
            .map(|chunk| {
                let mut table = [0u64; 256];
                for (v, slot) in table.iter_mut().enumerate() {
                    for (b, &d) in chunk.iter().enumerate() {
                        if v >> b & 1 == 1 {
                            *slot |= 1 << d;
                        }
                    }
                }
                table
            })
            .collect();
        BytePermutation { tables }
    }

    #[inline]
    pub fn apply(&self, x: u64) -> u64 {
        self.tables
            .iter()
            .enumerate()
            .fold(0, |acc, (i, t)| acc | t[(x >> (8 * i)) as usize & 0xff])
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Exact integer key for a correlation vector.
pub type Fingerprint = u128;

#[derive(Clone, Debug)]
pub struct MaskKernel {
    group: GroupSpec,
    n: usize,
    full: u64,
    translations: Vec<Vec<BlockRotation>>,
    negation: BytePermutation,
    pair_reps: Vec<usize>,
    field_width: u32,
    packed: bool,
}

impl MaskKernel {
    pub fn new(group: &GroupSpec) -> Result<Self> {
        let n = group.order();
        if n > MAX_MASK_ORDER {
            return Err(Error::BoundExceeded {
                order: n,
                bound: MAX_MASK_ORDER,
            });
        }
        let translations = (0..n)
            .map(|f| {
                let e = group.decode(f);
                e.residues()
                    .iter()
                    .zip(group.factors())
                    .zip(group.strides())
                    .filter(|((&r, _), _)| r != 0)
                    .map(|((&r, &m), &s)| BlockRotation::new(r * s, m * s, n))
                    .collect()
            })
            .collect();
        let negation = BytePermutation::new(&group.negation_table());
        let pair_reps: Vec<usize> = (1..n).filter(|&f| f <= group.neg_index(f)).collect();
        // Half the Hamming distance lies in 0..=n/2.
        let field_width = usize::BITS - (n / 2).leading_zeros();
        let packed = pair_reps.len() * field_width as usize <= 128;
        Ok(MaskKernel {
            group: group.clone(),
            n,
            full: full_mask(n),
            translations,
            negation,
            pair_reps,
            field_width,
            packed,
        })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn full(&self) -> u64 {
        self.full
    }

    /// Representatives of `{f, −f}` for `f ≠ 0`.
    pub fn pair_reps(&self) -> &[usize] {
        &self.pair_reps
    }

    /// `y` with `y_ℓ = x_{ℓ+f}`.
    #[inline]
    pub fn translate(&self, x: u64, f: usize) -> u64 {
        self.translations[f].iter().fold(x, |acc, r| r.apply(acc))
    }

    /// `y` with `y_ℓ = x_{−ℓ}`.
    #[inline]
    pub fn negate(&self, x: u64) -> u64 {
        self.negation.apply(x)
    }

    #[inline]
    pub fn flip(&self, x: u64) -> u64 {
        !x & self.full
    }

    /// Number of `ℓ` with `σ_ℓ ≠ σ_{ℓ+f}`.
    #[inline]
    pub fn disagreements(&self, x: u64, f: usize) -> u32 {
        (x ^ self.translate(x, f)).count_ones()
    }

    #[inline]
    pub fn correlation_at(&self, x: u64, f: usize) -> i64 {
        self.n as i64 - 2 * i64::from(self.disagreements(x, f))
    }

    pub fn correlation(&self, x: u64) -> Vec<i64> {
        (0..self.n).map(|f| self.correlation_at(x, f)).collect()
    }

    /// Whether fingerprints are an exact packing (no hashing).
    pub fn exact_fingerprints(&self) -> bool {
        self.packed
    }

    /// Key determining `A(σ)`; exact packing when it fits in 128 bits.
    #[inline]
    pub fn fingerprint(&self, x: u64) -> Fingerprint {
        if self.packed {
            let mut fp = 0u128;
            for (k, &f) in self.pair_reps.iter().enumerate() {
                let half = u128::from(self.disagreements(x, f) / 2);
                fp |= half << (k as u32 * self.field_width);
            }
            fp
        } else {
            let mut lo = 0x9e37_79b9_7f4a_7c15u64;
            let mut hi = 0xc2b2_ae3d_27d4_eb4fu64;
            for &f in &self.pair_reps {
                let v = u64::from(self.disagreements(x, f));
                lo = mix(lo ^ v);
                hi = mix(hi.rotate_left(17) ^ v.wrapping_mul(0xff51_afd7_ed55_8ccd));
            }
            (u128::from(hi) << 64) | u128::from(lo)
        }
    }

    /// Text-order key: smaller key ⇔ lexicographically smaller `+/-` string.
    #[inline]
    pub fn lex_key(&self, x: u64) -> u64 {
        x.reverse_bits() >> (64 - self.n)
    }

    /// All `4|F|` images `Φ_(s,t,r) x`, with repetitions.
    pub fn images(&self, x: u64) -> impl Iterator<Item = u64> + '_ {
        let reflected = self.negate(x);
        (0..self.n).flat_map(move |t| {
            let a = self.translate(x, t);
            let b = self.translate(reflected, t);
            [a, b, self.flip(a), self.flip(b)]
        })
    }

    /// Whether `x` has the least text-order key in its Φ-orbit.
    pub fn is_canonical(&self, x: u64) -> bool {
        let key = self.lex_key(x);
        self.images(x).all(|y| self.lex_key(y) >= key)
    }

    pub fn canonical(&self, x: u64) -> u64 {
        self.images(x)
            .min_by_key(|&y| self.lex_key(y))
            .unwrap_or(x)
    }

    pub fn orbit(&self, x: u64) -> Vec<u64> {
        let mut all: Vec<u64> = self.images(x).collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    pub fn orbit_size(&self, x: u64) -> usize {
        self.orbit(x).len()
    }
}

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
