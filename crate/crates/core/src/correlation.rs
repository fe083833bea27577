use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::group::GroupSpec;
use crate::kernel::MaskKernel;
use crate::spin::SpinConfig;

/// `A(σ)` indexed by element index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCorrelation", into = "RawCorrelation")]
pub struct CorrelationVector {
    group: GroupSpec,
    values: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct RawCorrelation {
    group: GroupSpec,
    values: Vec<i64>,
}

impl TryFrom<RawCorrelation> for CorrelationVector {
    type Error = Error;
    fn try_from(raw: RawCorrelation) -> Result<Self> {
        CorrelationVector::new(&raw.group, raw.values)
    }
}

impl From<CorrelationVector> for RawCorrelation {
    fn from(c: CorrelationVector) -> Self {
        RawCorrelation {
            group: c.group,
            values: c.values,
        }
    }
}

impl CorrelationVector {
    /// Checks the lattice conditions every realisable correlation satisfies.
    pub fn new(group: &GroupSpec, values: Vec<i64>) -> Result<Self> {
        let n = group.order() as i64;
        if values.len() != group.order() {
            return Err(Error::InvalidCorrelation(format!(
                "{} values for a group of order {n}",
                values.len()
            )));
        }
        if values[0] != n {
            return Err(Error::InvalidCorrelation(format!("value at 0 is {}, not {n}", values[0])));
        }
        for (f, &v) in values.iter().enumerate() {
            if v != values[group.neg_index(f)] {
                return Err(Error::InvalidCorrelation(format!("not even at index {f}")));
            }
            if v.abs() > n || (n - v).rem_euclid(4) != 0 {
                return Err(Error::InvalidCorrelation(format!("value {v} at index {f}")));
            }
        }
        Ok(CorrelationVector {
            group: group.clone(),
            values,
        })
    }

    pub(crate) fn from_trusted(group: &GroupSpec, values: Vec<i64>) -> Self {
        CorrelationVector {
            group: group.clone(),
            values,
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn get(&self, f: usize) -> i64 {
        self.values[f]
    }

    pub fn into_values(self) -> Vec<i64> {
        self.values
    }
}

/// Correlation together with the magnetisation `Σ σ_f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ExtendedCorrelation {
    pub corr: CorrelationVector,
    pub magnetization: i64,
}

/// Translation-invariant two-body couplings `j_f`, exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interaction {
    group: GroupSpec,
    values: Vec<Rational>,
}

impl Interaction {
    pub fn new(group: &GroupSpec, values: Vec<Rational>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::LengthMismatch {
                group: group.to_string(),
                expected: group.order(),
                got: values.len(),
            });
        }
        Ok(Interaction {
            group: group.clone(),
            values,
        })
    }

    pub fn from_integers(group: &GroupSpec, values: &[i64]) -> Result<Self> {
        Self::new(group, values.iter().map(|&v| Ratio::from_integer(v)).collect())
    }

    pub fn zero(group: &GroupSpec) -> Self {
        Interaction {
            group: group.clone(),
            values: vec![Rational::zero(); group.order()],
        }
    }

    /// `δ_f`: unit coupling at a single distance.
    pub fn delta(group: &GroupSpec, f: usize) -> Self {
        let mut j = Self::zero(group);
        j.values[f % group.order()] = Ratio::from_integer(1);
        j
    }

    /// Comma-separated list of `p` or `p/q` entries. Decimals are refused.
    pub fn parse(group: &GroupSpec, text: &str) -> Result<Self> {
        let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
        let values = inner
            .split(',')
            .map(exact::parse_fraction)
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, values)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `(j_f + j_{−f}) / 2`.
    pub fn even_projection(&self) -> Interaction {
        let values = (0..self.group.order())
            .map(|f| (self.values[f] + self.values[self.group.neg_index(f)]) / 2)
            .collect();
        Interaction {
            group: self.group.clone(),
            values,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(exact::is_zero)
    }

    /// Integer numerators over a common denominator, so energies compare exactly.
    pub(crate) fn scaled_integers(&self) -> Vec<i128> {
        let den = self
            .values
            .iter()
            .fold(1i128, |acc, v| num_integer::lcm(acc, i128::from(*v.denom())));
        self.values
            .iter()
            .map(|v| i128::from(*v.numer()) * (den / i128::from(*v.denom())))
            .collect()
    }
}

/// Reference implementation: `A_f = Σ_ℓ σ_ℓ σ_{ℓ+f}` by a double loop.
pub fn correlate(sigma: &SpinConfig) -> CorrelationVector {
    let g = sigma.group();
    let spins = sigma.spins();
    let values = (0..g.order())
        .map(|f| {
            (0..g.order())
                .map(|l| i64::from(spins[l]) * i64::from(spins[g.add_index(l, f)]))
                .sum()
        })
        .collect();
    CorrelationVector::from_trusted(g, values)
}

/// `A_f = |F| − 2·popcount(σ XOR translate(σ, f))`.
pub fn correlate_fast(sigma: &SpinConfig) -> CorrelationVector {
    let g = sigma.group();
    let values = match sigma.mask() {
        Some(x) => match MaskKernel::new(g) {
            Ok(k) => k.correlation(x),
            Err(_) => unreachable!("mask form implies |F| <= 64"),
        },
        None => {
            let n = g.order() as i64;
            (0..g.order())
                .map(|f| {
                    let shifted = sigma.pull(|l| g.add_index(l, f));
                    let d: u32 = sigma
                        .words()
                        .iter()
                        .zip(shifted.words())
                        .map(|(a, b)| (a ^ b).count_ones())
                        .sum();
                    n - 2 * i64::from(d)
                })
                .collect()
        }
    };
    CorrelationVector::from_trusted(g, values)
}

pub fn extended_correlate(sigma: &SpinConfig) -> ExtendedCorrelation {
    ExtendedCorrelation {
        corr: correlate_fast(sigma),
        magnetization: sigma.magnetization(),
    }
}

fn same_group(a: &GroupSpec, b: &GroupSpec) -> Result<()> {
    if a != b {
        return Err(Error::GroupMismatch {
            left: a.to_string(),
            right: b.to_string(),
        });
    }
    Ok(())
}

/// `⟨j, A⟩`.
pub fn energy_of(corr: &CorrelationVector, j: &Interaction) -> Result<Rational> {
    same_group(corr.group(), j.group())?;
    Ok(corr
        .values()
        .iter()
        .zip(j.values())
        .fold(Rational::zero(), |acc, (&a, v)| acc + v * a))
}

/// `H(σ, j) = ⟨j, A(σ)⟩`.
pub fn energy(sigma: &SpinConfig, j: &Interaction) -> Result<Rational> {
    same_group(sigma.group(), j.group())?;
    energy_of(&correlate_fast(sigma), j)
}

pub fn even_projection(j: &Interaction) -> Interaction {
    j.even_projection()
}

/// Extremes of the character transform of `A(σ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourierCheck {
    pub min_real: f64,
    pub max_imag_abs: f64,
}

impl FourierCheck {
    pub fn is_nonnegative(&self, tol: f64) -> bool {
        self.min_real >= -tol && self.max_imag_abs <= tol
    }
}

/// Evaluates `Σ_f A_f χ(f)` for every character `χ` of `⊕ Z/n_i`.
pub fn fourier_power_check(sigma: &SpinConfig) -> FourierCheck {
    let corr = correlate_fast(sigma);
    let g = sigma.group();
    if g.factors().iter().all(|&n| n == 2) {
        let spectrum = walsh_hadamard(corr.values());
        return FourierCheck {
            min_real: spectrum.iter().copied().min().unwrap_or(0) as f64,
            max_imag_abs: 0.0,
        };
    }
    let decoded: Vec<Vec<usize>> = (0..g.order()).map(|i| g.decode(i).residues().to_vec()).collect();
    let mut min_real = f64::INFINITY;
    let mut max_imag_abs = 0.0f64;
    for chi in &decoded {
        let mut acc = Complex64::new(0.0, 0.0);
        for (f, res) in decoded.iter().enumerate() {
            let phase: f64 = chi
                .iter()
                .zip(res)
                .zip(g.factors())
                .map(|((&k, &x), &n)| ((k * x) % n) as f64 / n as f64)
                .sum();
            acc += Complex64::from_polar(corr.get(f) as f64, std::f64::consts::TAU * phase);
        }
        min_real = min_real.min(acc.re);
        max_imag_abs = max_imag_abs.max(acc.im.abs());
    }
    FourierCheck {
        min_real,
        max_imag_abs,
    }
}

/// Integer Walsh–Hadamard transform; the characters of `(Z/2)^d`.
pub fn walsh_hadamard(values: &[i64]) -> Vec<i64> {
    let mut out = values.to_vec();
    let mut h = 1;
    while h < out.len() {
        for block in out.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
    out
}

/// Cyclic reversal `σ_{−ℓ}` read as a `+/-` word backwards.
pub fn reverse(sigma: &SpinConfig) -> SpinConfig {
    let n = sigma.len();
    sigma.pull(|l| n - 1 - l)
}
