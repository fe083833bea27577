use std::fmt;

use crate::error::{Error, Result};
use crate::group::GroupSpec;

/// A spin configuration `σ ∈ {−1,1}^F`.
///
/// Bit `i` is set exactly when the spin at element index `i` is `−1`. The text
/// form is a `+`/`-` string with element index 0 leftmost.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpinConfig {
    group: GroupSpec,
    words: Vec<u64>,
}

impl SpinConfig {
    pub fn all_up(group: &GroupSpec) -> Self {
        SpinConfig {
            group: group.clone(),
            words: vec![0; group.order().div_ceil(64)],
        }
    }

    pub fn parse(group: &GroupSpec, text: &str) -> Result<Self> {
        let text = text.trim();
        let len = text.chars().count();
        if len != group.order() {
            return Err(Error::LengthMismatch {
                group: group.to_string(),
                expected: group.order(),
                got: len,
            });
        }
        let mut cfg = Self::all_up(group);
        for (i, c) in text.chars().enumerate() {
            match c {
                '+' => {}
                '-' => cfg.set_down(i, true),
                other => {
                    return Err(Error::MalformedConfig(format!(
                        "unexpected character {other:?} (use '+' and '-')"
                    )))
                }
            }
        }
        Ok(cfg)
    }

    /// From ±1 values.
    pub fn from_spins(group: &GroupSpec, spins: &[i8]) -> Result<Self> {
        if spins.len() != group.order() {
            return Err(Error::LengthMismatch {
                group: group.to_string(),
                expected: group.order(),
                got: spins.len(),
            });
        }
        let mut cfg = Self::all_up(group);
        for (i, &s) in spins.iter().enumerate() {
            match s {
                1 => {}
                -1 => cfg.set_down(i, true),
                other => return Err(Error::MalformedConfig(format!("spin value {other}"))),
            }
        }
        Ok(cfg)
    }

    /// From a bit mask (bit set = spin down). Requires `|F| <= 64`.
    pub fn from_mask(group: &GroupSpec, mask: u64) -> Self {
        let n = group.order();
        assert!(n <= 64, "mask form needs |F| <= 64");
        let clipped = if n == 64 { mask } else { mask & ((1u64 << n) - 1) };
        SpinConfig {
            group: group.clone(),
            words: vec![clipped],
        }
    }

    /// Spin down exactly on the given element indices.
    pub fn from_down_set(group: &GroupSpec, down: impl IntoIterator<Item = usize>) -> Self {
        let mut cfg = Self::all_up(group);
        for i in down {
            cfg.set_down(i % group.order(), true);
        }
        cfg
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.group.order()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn mask(&self) -> Option<u64> {
        (self.len() <= 64).then(|| self.words[0])
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_down(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn spin(&self, i: usize) -> i64 {
        if self.is_down(i) {
            -1
        } else {
            1
        }
    }

    pub fn spins(&self) -> Vec<i8> {
        (0..self.len()).map(|i| self.spin(i) as i8).collect()
    }

    fn set_down(&mut self, i: usize, down: bool) {
        let bit = 1u64 << (i % 64);
        if down {
            self.words[i / 64] |= bit;
        } else {
            self.words[i / 64] &= !bit;
        }
    }

    pub fn down_count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn magnetization(&self) -> i64 {
        self.len() as i64 - 2 * self.down_count() as i64
    }

    pub fn flipped(&self) -> Self {
        let mut out = self.clone();
        let n = self.len();
        for (k, w) in out.words.iter_mut().enumerate() {
            let width = (n - 64 * k).min(64);
            *w = !*w & if width == 64 { u64::MAX } else { (1 << width) - 1 };
        }
        out
    }

    /// `out[i] = self[source(i)]`.
    pub fn pull(&self, source: impl Fn(usize) -> usize) -> Self {
        let mut out = Self::all_up(&self.group);
        for i in 0..self.len() {
            if self.is_down(source(i)) {
                out.set_down(i, true);
            }
        }
        out
    }

    /// Same spins viewed over another group of equal order.
    pub fn relabel_group(&self, group: &GroupSpec) -> Result<Self> {
        if group.order() != self.len() {
            return Err(Error::LengthMismatch {
                group: group.to_string(),
                expected: group.order(),
                got: self.len(),
            });
        }
        Ok(SpinConfig {
            group: group.clone(),
            words: self.words.clone(),
        })
    }

    /// Lexicographic key on the text form (`+` < `-`), index 0 first.
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        for i in 0..self.len().min(other.len()) {
            match (self.is_down(i), other.is_down(i)) {
                (false, true) => return std::cmp::Ordering::Less,
                (true, false) => return std::cmp::Ordering::Greater,
                _ => {}
            }
        }
        self.len().cmp(&other.len())
    }
}

impl fmt::Display for SpinConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: String = (0..self.len())
            .map(|i| if self.is_down(i) { '-' } else { '+' })
            .collect();
        f.write_str(&text)
    }
}
