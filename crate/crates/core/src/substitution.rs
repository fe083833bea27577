//! Words over `{U, V}` whose letters stand for fixed `±1` strings.

use std::fmt;
use std::str::FromStr;

use crate::correlation::{correlate_fast, CorrelationVector};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::spin::SpinConfig;
use crate::symmetry::in_phi_orbit;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    U,
    V,
}

pub fn parse_letters(text: &str) -> Result<Vec<Letter>> {
    text.trim()
        .chars()
        .map(|c| match c {
            'U' | 'u' => Ok(Letter::U),
            'V' | 'v' => Ok(Letter::V),
            other => Err(Error::Substitution(format!("letter {other:?} is not U or V"))),
        })
        .collect()
}

/// Parses a linear `+/-` block.
pub fn parse_block(text: &str) -> Result<Vec<i8>> {
    text.trim()
        .chars()
        .map(|c| match c {
            '+' => Ok(1),
            '-' => Ok(-1),
            other => Err(Error::Substitution(format!("block character {other:?}"))),
        })
        .collect()
}

fn block_text(block: &[i8]) -> String {
    block.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionWord {
    letters: Vec<Letter>,
    u: Vec<i8>,
    v: Vec<i8>,
}

impl SubstitutionWord {
    pub fn new(letters: Vec<Letter>, u: Vec<i8>, v: Vec<i8>) -> Result<Self> {
        if u.iter().chain(&v).any(|&s| s != 1 && s != -1) {
            return Err(Error::Substitution("blocks must hold ±1 entries".into()));
        }
        Ok(SubstitutionWord { letters, u, v })
    }

    pub fn parse(word: &str, u: &str, v: &str) -> Result<Self> {
        Self::new(parse_letters(word)?, parse_block(u)?, parse_block(v)?)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn u(&self) -> &[i8] {
        &self.u
    }

    pub fn v(&self) -> &[i8] {
        &self.v
    }

    fn block(&self, letter: Letter) -> &[i8] {
        match letter {
            Letter::U => &self.u,
            Letter::V => &self.v,
        }
    }

    /// `|W|_U·|U| + |W|_V·|V|`.
    pub fn flat_len(&self) -> usize {
        self.letters.iter().map(|&l| self.block(l).len()).sum()
    }

    /// Concatenation of the blocks in letter order, as a linear string.
    pub fn expand(&self) -> Result<Vec<i8>> {
        for letter in [Letter::U, Letter::V] {
            if self.letters.contains(&letter) && self.block(letter).is_empty() {
                return Err(Error::Substitution(format!("letter {letter} used with an empty block")));
            }
        }
        Ok(self.letters.iter().flat_map(|&l| self.block(l).iter().copied()).collect())
    }

    /// The cyclic configuration on `Z/NZ`; requires `N ≥ 2`.
    pub fn flatten(&self) -> Result<SpinConfig> {
        let spins = self.expand()?;
        if spins.len() < 2 {
            return Err(Error::Substitution(format!("flattened length {} < 2", spins.len())));
        }
        SpinConfig::from_spins(&GroupSpec::cyclic(spins.len())?, &spins)
    }

    /// Letter order reversed, blocks kept intact.
    pub fn reverse_word(&self) -> SubstitutionWord {
        SubstitutionWord {
            letters: self.letters.iter().rev().copied().collect(),
            u: self.u.clone(),
            v: self.v.clone(),
        }
    }

    /// A word over new blocks `U' = expand(u_word)`, `V' = expand(v_word)`.
    pub fn nest(letters: Vec<Letter>, u_word: &SubstitutionWord, v_word: &SubstitutionWord) -> Result<Self> {
        Self::new(letters, u_word.expand()?, v_word.expand()?)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::U => "U",
            Letter::V => "V",
        })
    }
}

impl fmt::Display for SubstitutionWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        write!(f, " [U={}, V={}]", block_text(&self.u), block_text(&self.v))
    }
}

impl FromStr for Letter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match parse_letters(s)?.as_slice() {
            [l] => Ok(*l),
            _ => Err(Error::Substitution(format!("{s:?} is not a single letter"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReversalReport {
    pub sigma: SpinConfig,
    pub tau: SpinConfig,
    pub corr_word: CorrelationVector,
    pub corr_reversed: CorrelationVector,
    pub equal: bool,
    pub same_phi_orbit: bool,
}

/// Compares the correlations of `W̃` and of its letter reversal.
pub fn verify_reversal_identity(word: &SubstitutionWord) -> Result<ReversalReport> {
    let sigma = word.flatten()?;
    let tau = word.reverse_word().flatten()?;
    let corr_word = correlate_fast(&sigma);
    let corr_reversed = correlate_fast(&tau);
    Ok(ReversalReport {
        equal: corr_word == corr_reversed,
        same_phi_orbit: in_phi_orbit(&sigma, &tau),
        sigma,
        tau,
        corr_word,
        corr_reversed,
    })
}
