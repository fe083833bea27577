//! Exhaustive fibers of the correlation map, image sizes and surveys.
//!
//! The configuration space is split into contiguous index ranges, one per
//! partition. Each partition builds its own counts and the merge only adds
//! counts, so every result is independent of the partition count.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::ops::Range;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg32;
use rayon::prelude::*;

use crate::correlation::{CorrelationVector, Interaction};
use crate::error::{Error, Result};
use crate::exact::{render, Rational};
use crate::group::GroupSpec;
use crate::kernel::{Fingerprint, MaskKernel};
use crate::spin::SpinConfig;

pub const DEFAULT_BOUND: usize = 28;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Largest `|F|` enumerated exhaustively.
    pub bound: usize,
    /// Number of contiguous ranges the space is split into.
    pub partitions: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            bound: DEFAULT_BOUND,
            partitions: rayon::current_num_threads().max(1),
        }
    }
}

impl SearchOptions {
    pub fn with_partitions(partitions: usize) -> Self {
        SearchOptions {
            partitions: partitions.max(1),
            ..Self::default()
        }
    }

    pub fn kernel(&self, group: &GroupSpec) -> Result<MaskKernel> {
        if group.order() > self.bound {
            return Err(Error::BoundExceeded {
                order: group.order(),
                bound: self.bound,
            });
        }
        MaskKernel::new(group)
    }

    fn ranges(&self, total: u64) -> Vec<Range<u64>> {
        let parts = (self.partitions.max(1) as u64).min(total.max(1));
        (0..parts)
            .map(|i| {
                let lo = (u128::from(total) * u128::from(i) / u128::from(parts)) as u64;
                let hi = (u128::from(total) * u128::from(i + 1) / u128::from(parts)) as u64;
                lo..hi
            })
            .collect()
    }
}

/// One mask per `{σ, −σ}` pair: those with the top bit clear.
fn half_space(k: &MaskKernel) -> u64 {
    1u64 << (k.order() - 1)
}

fn target_distances(k: &MaskKernel, x: u64) -> Vec<u32> {
    k.pair_reps().iter().map(|&f| k.disagreements(x, f)).collect()
}

#[inline]
fn same_correlation(k: &MaskKernel, x: u64, target: &[u32]) -> bool {
    k.pair_reps()
        .iter()
        .zip(target)
        .all(|(&f, &d)| k.disagreements(x, f) == d)
}

fn mask_of(sigma: &SpinConfig, opts: &SearchOptions) -> Result<(MaskKernel, u64)> {
    let k = opts.kernel(sigma.group())?;
    let x = sigma.mask().expect("bounded groups fit a mask");
    Ok((k, x))
}

/// `A^{-1}(A(σ))`, sorted in text order.
pub fn fiber(sigma: &SpinConfig, opts: &SearchOptions) -> Result<Vec<SpinConfig>> {
    let (k, x) = mask_of(sigma, opts)?;
    let target = target_distances(&k, x);
    let mut masks: Vec<u64> = opts
        .ranges(half_space(&k))
        .into_par_iter()
        .map(|r| r.filter(|&y| same_correlation(&k, y, &target)).collect::<Vec<_>>())
        .flatten()
        .collect();
    let flips: Vec<u64> = masks.iter().map(|&y| k.flip(y)).collect();
    masks.extend(flips);
    masks.sort_by_key(|&y| k.lex_key(y));
    Ok(masks
        .into_iter()
        .map(|y| SpinConfig::from_mask(sigma.group(), y))
        .collect())
}

/// `D_stab(σ) = |A^{-1}(A(σ))|`.
pub fn d_stab(sigma: &SpinConfig, opts: &SearchOptions) -> Result<u64> {
    let (k, x) = mask_of(sigma, opts)?;
    let target = target_distances(&k, x);
    let half: u64 = opts
        .ranges(half_space(&k))
        .into_par_iter()
        .map(|r| r.filter(|&y| same_correlation(&k, y, &target)).count() as u64)
        .sum();
    Ok(2 * half)
}

/// Size of the fiber of `σ ↦ (A(σ), Σσ)`.
pub fn d_stab_extended(sigma: &SpinConfig, opts: &SearchOptions) -> Result<u64> {
    let (k, x) = mask_of(sigma, opts)?;
    let target = target_distances(&k, x);
    let down = x.count_ones();
    Ok(opts
        .ranges(1u64 << k.order())
        .into_par_iter()
        .map(|r| {
            r.filter(|&y| y.count_ones() == down && same_correlation(&k, y, &target))
                .count() as u64
        })
        .sum())
}

/// Fiber sizes keyed by correlation fingerprint.
#[derive(Clone, Debug)]
pub struct ImageTable {
    kernel: MaskKernel,
    counts: HashMap<Fingerprint, u64>,
}

fn merge_counts(mut a: HashMap<Fingerprint, u64>, b: HashMap<Fingerprint, u64>) -> HashMap<Fingerprint, u64> {
    if a.len() < b.len() {
        return merge_counts(b, a);
    }
    for (fp, c) in b {
        *a.entry(fp).or_insert(0) += c;
    }
    a
}

impl ImageTable {
    pub fn build(group: &GroupSpec, opts: &SearchOptions) -> Result<Self> {
        let kernel = opts.kernel(group)?;
        let k = &kernel;
        let counts = opts
            .ranges(half_space(k))
            .into_par_iter()
            .map(|r| {
                let mut local = HashMap::new();
                for x in r {
                    *local.entry(k.fingerprint(x)).or_insert(0u64) += 2;
                }
                local
            })
            .reduce(HashMap::new, merge_counts);
        Ok(ImageTable { kernel, counts })
    }

    pub fn kernel(&self) -> &MaskKernel {
        &self.kernel
    }

    pub fn image_size(&self) -> u64 {
        self.counts.len() as u64
    }

    /// `D_stab` of the configuration with this mask.
    pub fn fiber_size(&self, x: u64) -> u64 {
        self.counts[&self.kernel.fingerprint(x)]
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `Σ_σ D_stab(σ) = Σ_fibers |fiber|²`.
    pub fn sum_of_squares(&self) -> u128 {
        self.counts.values().map(|&c| u128::from(c) * u128::from(c)).sum()
    }
}

pub fn image_size(group: &GroupSpec, opts: &SearchOptions) -> Result<u64> {
    Ok(ImageTable::build(group, opts)?.image_size())
}

/// Stores full correlation vectors to confirm the fingerprint is collision-free.
pub fn verify_fingerprints(group: &GroupSpec, opts: &SearchOptions) -> Result<bool> {
    let k = opts.kernel(group)?;
    let k = &k;
    let tables: Vec<HashMap<Fingerprint, Vec<i64>>> = opts
        .ranges(1u64 << k.order())
        .into_par_iter()
        .map(|r| {
            let mut local: HashMap<Fingerprint, Vec<i64>> = HashMap::new();
            for x in r {
                let corr = k.correlation(x);
                if let Some(prev) = local.get(&k.fingerprint(x)) {
                    if *prev != corr {
                        return None;
                    }
                } else {
                    local.insert(k.fingerprint(x), corr);
                }
            }
            Some(local)
        })
        .collect::<Option<Vec<_>>>()
        .unwrap_or_default();
    if tables.is_empty() {
        return Ok(false);
    }
    let mut merged: HashMap<Fingerprint, Vec<i64>> = HashMap::new();
    let mut distinct = std::collections::HashSet::new();
    for table in tables {
        for (fp, corr) in table {
            if let Some(prev) = merged.get(&fp) {
                if *prev != corr {
                    return Ok(false);
                }
            }
            distinct.insert(corr.clone());
            merged.insert(fp, corr);
        }
    }
    Ok(distinct.len() == merged.len())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MsdRow {
    pub n: usize,
    pub image_size: u64,
    /// `2^N / |image|`.
    pub msd: Ratio<i128>,
    pub avg_dstab: Ratio<i128>,
    pub msd_over_sym: Ratio<i128>,
    pub avg_dstab_over_sym: Ratio<i128>,
}

pub fn msd(group: &GroupSpec, opts: &SearchOptions) -> Result<MsdRow> {
    let table = ImageTable::build(group, opts)?;
    let n = group.order();
    let configs = 1i128 << n;
    let sym = 4 * n as i128;
    let image = table.image_size();
    let msd = Ratio::new(configs, i128::from(image));
    let avg_dstab = Ratio::new(table.sum_of_squares() as i128, configs);
    Ok(MsdRow {
        n,
        image_size: image,
        msd_over_sym: msd / sym,
        avg_dstab_over_sym: avg_dstab / sym,
        msd,
        avg_dstab,
    })
}

pub const MSD_HEADER: &str = "N,image_size,msd,msd_over_sym,avg_dstab_over_sym";

pub fn msd_csv(rows: &[MsdRow]) -> String {
    let mut out = format!("{MSD_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.n,
            r.image_size,
            render(&r.msd),
            render(&r.msd_over_sym),
            render(&r.avg_dstab_over_sym)
        );
    }
    out
}

/// Average orbit size over all configurations, `Σ_orbits |O|² / 2^|F|`.
pub fn average_dsym(group: &GroupSpec, opts: &SearchOptions) -> Result<Ratio<i128>> {
    let k = opts.kernel(group)?;
    let k = &k;
    // Every text-least orbit member starts with '+', i.e. has bit 0 clear.
    let total: u128 = opts
        .ranges(half_space(k))
        .into_par_iter()
        .map(|r| {
            r.map(|y| y << 1)
                .filter(|&x| k.is_canonical(x))
                .map(|x| {
                    let s = k.orbit_size(x) as u128;
                    s * s
                })
                .sum::<u128>()
        })
        .sum();
    Ok(Ratio::new(total as i128, 1i128 << group.order()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyRow {
    pub n: usize,
    pub representative: String,
    pub d_sym: u64,
    pub d_stab: u64,
    pub ratio: Rational,
}

/// One row per Φ-orbit with `D_stab / D_sym ≥ min_ratio`, in text order of representatives.
pub fn survey(group: &GroupSpec, min_ratio: Rational, opts: &SearchOptions) -> Result<Vec<SurveyRow>> {
    let table = ImageTable::build(group, opts)?;
    let k = table.kernel();
    let n = group.order();
    let mut reps: Vec<(u64, u64, u64)> = opts
        .ranges(half_space(k))
        .into_par_iter()
        .map(|r| {
            r.map(|y| y << 1)
                .filter(|&x| k.is_canonical(x))
                .filter_map(|x| {
                    let d_sym = k.orbit_size(x) as u64;
                    let d_stab = table.fiber_size(x);
                    (Ratio::new(d_stab as i64, d_sym as i64) >= min_ratio).then_some((x, d_sym, d_stab))
                })
                .collect::<Vec<_>>()
        })
        .flatten()
        .collect();
    reps.sort_by_key(|&(x, _, _)| k.lex_key(x));
    Ok(reps
        .into_iter()
        .map(|(x, d_sym, d_stab)| SurveyRow {
            n,
            representative: SpinConfig::from_mask(group, x).to_string(),
            d_sym,
            d_stab,
            ratio: Ratio::new(d_stab as i64, d_sym as i64),
        })
        .collect())
}

pub const SURVEY_HEADER: &str = "N,rep,d_sym,d_stab,ratio";

pub fn survey_csv(rows: &[SurveyRow]) -> String {
    let mut out = format!("{SURVEY_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.n,
            r.representative,
            r.d_sym,
            r.d_stab,
            render(&r.ratio)
        );
    }
    out
}

/// Number of `τ` with `H(τ, j) = H(σ, j)`, compared exactly.
pub fn j_degeneracy(sigma: &SpinConfig, j: &Interaction, opts: &SearchOptions) -> Result<u64> {
    if j.group() != sigma.group() {
        return Err(Error::GroupMismatch {
            left: sigma.group().to_string(),
            right: j.group().to_string(),
        });
    }
    let (k, x) = mask_of(sigma, opts)?;
    let g = sigma.group();
    let raw = j.scaled_integers();
    // A is even, so j_f and j_{−f} only enter through their sum.
    let weights: Vec<(usize, i128)> = k
        .pair_reps()
        .iter()
        .map(|&f| {
            let m = g.neg_index(f);
            (f, if m == f { raw[f] } else { raw[f] + raw[m] })
        })
        .collect();
    let n = k.order() as i128;
    let energy = |y: u64| -> i128 {
        weights
            .iter()
            .map(|&(f, w)| w * (n - 2 * i128::from(k.disagreements(y, f))))
            .sum()
    };
    let target = energy(x);
    let half: u64 = opts
        .ranges(half_space(&k))
        .into_par_iter()
        .map(|r| r.filter(|&y| energy(y) == target).count() as u64)
        .sum();
    Ok(2 * half)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    pub trials: u64,
    /// Trials where the j-degeneracy equals `D_stab`.
    pub matches: u64,
    /// `matches / trials`, reported as 1 for an empty probe.
    pub fraction: Rational,
    pub d_stab: u64,
    /// Every trial had j-degeneracy at least `D_stab`.
    pub bounded_below: bool,
}

/// Samples integer `j` uniformly from `[−10⁶, 10⁶]^F` with a seeded PCG32 stream.
pub fn generic_j_probe(sigma: &SpinConfig, trials: u64, seed: u64, opts: &SearchOptions) -> Result<ProbeReport> {
    let stab = d_stab(sigma, opts)?;
    let mut rng = Pcg32::seed_from_u64(seed);
    let mut matches = 0;
    let mut bounded_below = true;
    for _ in 0..trials {
        let values: Vec<i64> = (0..sigma.len())
            .map(|_| rng.gen_range(-1_000_000..=1_000_000))
            .collect();
        let j = Interaction::from_integers(sigma.group(), &values)?;
        let deg = j_degeneracy(sigma, &j, opts)?;
        bounded_below &= deg >= stab;
        if deg == stab {
            matches += 1;
        }
    }
    let fraction = if trials == 0 {
        Ratio::from_integer(1)
    } else {
        Ratio::new(matches as i64, trials as i64)
    };
    Ok(ProbeReport {
        trials,
        matches,
        fraction,
        d_stab: stab,
        bounded_below,
    })
}

/// Distinct correlation vectors together with their fiber sizes, sorted.
pub fn image_with_counts(group: &GroupSpec, opts: &SearchOptions) -> Result<Vec<(CorrelationVector, u64)>> {
    let k = opts.kernel(group)?;
    let k = &k;
    let maps: HashMap<Vec<i64>, u64> = opts
        .ranges(half_space(k))
        .into_par_iter()
        .map(|r| {
            let mut local: HashMap<Vec<i64>, u64> = HashMap::new();
            for x in r {
                *local.entry(k.correlation(x)).or_insert(0) += 2;
            }
            local
        })
        .reduce(HashMap::new, |mut a, b| {
            for (v, c) in b {
                *a.entry(v).or_insert(0) += c;
            }
            a
        });
    let mut out: Vec<(CorrelationVector, u64)> = maps
        .into_iter()
        .map(|(v, c)| (CorrelationVector::from_trusted(group, v), c))
        .collect();
    out.sort_by(|a, b| b.0.values().cmp(a.0.values()));
    Ok(out)
}
