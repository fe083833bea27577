//! Run-length block profiles and the discrete Laplacian of correlations.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::correlation::{correlate_fast, CorrelationVector};
use crate::degeneracy::{ImageTable, SearchOptions};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::spin::SpinConfig;

fn require_cyclic(group: &GroupSpec, what: &'static str) -> Result<()> {
    if group.is_cyclic() {
        Ok(())
    } else {
        Err(Error::RequiresCyclic(what))
    }
}

/// `(Δh)_f = (h_{f−1} − 2h_f + h_{f+1}) / 4`.
pub fn laplacian(h: &CorrelationVector) -> Result<Vec<i64>> {
    require_cyclic(h.group(), "laplacian")?;
    let v = h.values();
    let n = v.len();
    (0..n)
        .map(|f| {
            let raw = v[(f + n - 1) % n] - 2 * v[f] + v[(f + 1) % n];
            if raw % 4 != 0 {
                return Err(Error::InvalidCorrelation(format!("Laplacian not integral at {f}")));
            }
            Ok(raw / 4)
        })
        .collect()
}

/// Cyclic run lengths `(m₁, …, m₂ₖ)`, the first block being a `+` block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BlockProfile {
    n: usize,
    lengths: Vec<usize>,
}

impl BlockProfile {
    pub fn new(lengths: Vec<usize>) -> Result<Self> {
        if lengths.len() % 2 != 0 || lengths.iter().any(|&m| m == 0) {
            return Err(Error::InvalidMultiset(format!(
                "block lengths {lengths:?} need an even count of positive entries"
            )));
        }
        Ok(BlockProfile {
            n: lengths.iter().sum(),
            lengths,
        })
    }

    /// The constant configuration of size `n`: no blocks.
    pub fn constant(n: usize) -> Self {
        BlockProfile { n, lengths: vec![] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of `+` blocks.
    pub fn k(&self) -> usize {
        self.lengths.len() / 2
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    /// Sorted `(length, multiplicity)` pairs.
    pub fn length_multiset(&self) -> Vec<(usize, usize)> {
        let mut sorted = self.lengths.clone();
        sorted.sort_unstable();
        let mut out: Vec<(usize, usize)> = Vec::new();
        for m in sorted {
            match out.last_mut() {
                Some((len, c)) if *len == m => *c += 1,
                _ => out.push((m, 1)),
            }
        }
        out
    }

    /// `+` blocks and `−` blocks alternating from index 0.
    pub fn to_config(&self) -> Result<SpinConfig> {
        let group = GroupSpec::cyclic(self.n)?;
        let mut down = Vec::new();
        let mut pos = 0;
        for (i, &m) in self.lengths.iter().enumerate() {
            if i % 2 == 1 {
                down.extend(pos..pos + m);
            }
            pos += m;
        }
        Ok(SpinConfig::from_down_set(&group, down))
    }

    /// Least sequence among all rotations and reversals.
    pub fn canonical(&self) -> BlockProfile {
        let len = self.lengths.len();
        let mut best = self.lengths.clone();
        let mut reversed = self.lengths.clone();
        reversed.reverse();
        for seq in [&self.lengths, &reversed] {
            for r in 0..len {
                let rotated: Vec<usize> = (0..len).map(|i| seq[(i + r) % len]).collect();
                if rotated < best {
                    best = rotated;
                }
            }
        }
        BlockProfile {
            n: self.n,
            lengths: best,
        }
    }
}

pub fn blocks_of(sigma: &SpinConfig) -> Result<BlockProfile> {
    require_cyclic(sigma.group(), "blocks_of")?;
    let n = sigma.len();
    let Some(start) = (0..n).find(|&i| !sigma.is_down(i) && sigma.is_down((i + n - 1) % n)) else {
        return Ok(BlockProfile::constant(n));
    };
    let mut lengths = Vec::new();
    let mut run = 0;
    for step in 0..n {
        let i = (start + step) % n;
        if step > 0 && sigma.is_down(i) != sigma.is_down((i + n - 1) % n) {
            lengths.push(run);
            run = 0;
        }
        run += 1;
    }
    lengths.push(run);
    BlockProfile::new(lengths)
}

/// Nonzero values of a Laplacian as `(t, c)`, with `t = N` standing for index 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedMultiset {
    n: usize,
    entries: Vec<(usize, i64)>,
}

impl SignedMultiset {
    pub fn from_vector(values: &[i64]) -> Self {
        let n = values.len();
        let entries = (1..=n)
            .map(|t| (t, values[t % n]))
            .filter(|&(_, c)| c != 0)
            .collect();
        SignedMultiset { n, entries }
    }

    pub fn from_entries(n: usize, entries: Vec<(usize, i64)>) -> Result<Self> {
        let mut values = vec![0i64; n];
        let mut last = 0;
        for &(t, c) in &entries {
            if t == 0 || t > n || t <= last || c == 0 {
                return Err(Error::InvalidMultiset(format!("entry ({t}, {c}) for N = {n}")));
            }
            last = t;
            values[t % n] = c;
        }
        if values.iter().sum::<i64>() != 0 {
            return Err(Error::InvalidMultiset("values do not sum to zero".into()));
        }
        Ok(Self::from_vector(&values))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[(usize, i64)] {
        &self.entries
    }

    pub fn to_vector(&self) -> Vec<i64> {
        let mut v = vec![0; self.n];
        for &(t, c) in &self.entries {
            v[t % self.n] = c;
        }
        v
    }

    pub fn value_at_zero(&self) -> i64 {
        self.to_vector().first().copied().unwrap_or(0)
    }

    pub fn l1_norm(&self) -> i64 {
        self.entries.iter().map(|&(_, c)| c.abs()).sum()
    }

    /// Parses `[[t, c], ...]`.
    pub fn from_json(n: usize, text: &str) -> Result<Self> {
        let entries: Vec<(usize, i64)> =
            serde_json::from_str(text).map_err(|e| Error::InvalidMultiset(e.to_string()))?;
        Self::from_entries(n, entries)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.entries).expect("plain pairs serialize")
    }
}

impl Serialize for SignedMultiset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SignedMultiset {
    /// `N` is taken as the largest `t`, which is always the index-0 entry.
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries: Vec<(usize, i64)> = Vec::deserialize(d)?;
        let n = entries.iter().map(|&(t, _)| t).max().unwrap_or(0);
        Self::from_entries(n.max(1), entries).map_err(serde::de::Error::custom)
    }
}

fn interval_terms(lengths: &[usize], n: usize) -> Vec<i64> {
    let mut values = vec![0i64; n];
    let len = lengths.len();
    for start in 0..len {
        let mut sum = 0;
        for count in 1..=len {
            sum += lengths[(start + count - 1) % len];
            values[sum % n] += if count % 2 == 1 { 1 } else { -1 };
        }
    }
    values
}

/// Sum over start blocks of `δ(odd runs of blocks) − δ(even runs of blocks)`.
pub fn delta_from_profile(profile: &BlockProfile) -> SignedMultiset {
    SignedMultiset::from_vector(&interval_terms(profile.lengths(), profile.n()))
}

/// All `2^{2k}` subset sums of the block lengths are distinct.
pub fn subset_sum_injective(profile: &BlockProfile) -> bool {
    let m = profile.lengths();
    let mut sums = BTreeSet::new();
    (0..1u64 << m.len()).all(|mask| {
        let s: usize = m
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .sum();
        sums.insert(s)
    })
}

struct Search<'a> {
    target: &'a [i64],
    n: usize,
    blocks: usize,
    budget: i64,
    smallest: usize,
    pos: Vec<i64>,
    neg: Vec<i64>,
    pos_need: i64,
    neg_need: i64,
    seq: Vec<usize>,
    found: BTreeSet<BlockProfile>,
}

impl Search<'_> {
    fn need_pos(&self, t: usize) -> i64 {
        self.pos[t].max(self.neg[t] + self.target[t])
    }

    fn need_neg(&self, t: usize) -> i64 {
        self.neg[t].max(self.pos[t] - self.target[t])
    }

    fn place(&mut self, t: usize, sign: i64) {
        let (before_p, before_n) = (self.need_pos(t), self.need_neg(t));
        if sign > 0 {
            self.pos[t] += 1;
        } else {
            self.neg[t] += 1;
        }
        self.pos_need += self.need_pos(t) - before_p;
        self.neg_need += self.need_neg(t) - before_n;
    }

    fn unplace(&mut self, t: usize, sign: i64) {
        let (before_p, before_n) = (self.need_pos(t), self.need_neg(t));
        if sign > 0 {
            self.pos[t] -= 1;
        } else {
            self.neg[t] -= 1;
        }
        self.pos_need += self.need_pos(t) - before_p;
        self.neg_need += self.need_neg(t) - before_n;
    }

    /// Terms of the linear intervals ending at the last block.
    fn new_terms(&self) -> Vec<(usize, i64)> {
        let mut sum = 0;
        self.seq
            .iter()
            .rev()
            .enumerate()
            .map(|(i, &m)| {
                sum += m;
                (sum % self.n, if i % 2 == 0 { 1 } else { -1 })
            })
            .collect()
    }

    fn push(&mut self, m: usize) -> bool {
        self.seq.push(m);
        for (t, s) in self.new_terms() {
            self.place(t, s);
        }
        self.pos_need <= self.budget && self.neg_need <= self.budget
    }

    fn pop(&mut self) {
        for (t, s) in self.new_terms() {
            self.unplace(t, s);
        }
        self.seq.pop();
    }

    fn run(&mut self, used: usize) {
        let placed = self.seq.len();
        if placed == self.blocks {
            if used == self.n && interval_terms(&self.seq, self.n) == self.target {
                let profile = BlockProfile::new(self.seq.clone()).expect("positive blocks");
                self.found.insert(profile.canonical());
            }
            return;
        }
        let later = self.blocks - placed - 1;
        let Some(room) = self.n.checked_sub(used + later * self.smallest) else {
            return;
        };
        let candidates: Vec<usize> = if later == 0 {
            if room >= self.smallest {
                vec![room]
            } else {
                vec![]
            }
        } else {
            (self.smallest..=room).collect()
        };
        for m in candidates {
            if self.push(m) {
                self.run(used + m);
            }
            self.pop();
        }
    }
}

/// Every block profile, up to rotation and reversal, whose Laplacian is `delta`.
pub fn reconstruct_from_delta(delta: &SignedMultiset, n: usize) -> Result<Vec<BlockProfile>> {
    if delta.n() != n {
        return Err(Error::InvalidMultiset(format!("multiset for N = {} used with N = {n}", delta.n())));
    }
    let target = delta.to_vector();
    let at_zero = target.first().copied().unwrap_or(0);
    if at_zero > 0 || at_zero % 2 != 0 {
        return Err(Error::InvalidMultiset(format!("value {at_zero} at index 0 is not −2k")));
    }
    let k = (-at_zero / 2) as usize;
    if k == 0 {
        return if target.iter().all(|&v| v == 0) {
            Ok(vec![BlockProfile::constant(n)])
        } else {
            Err(Error::NoProfile)
        };
    }
    // The least block length is the first nonzero position, with positive value.
    let smallest = (1..n).find(|&t| target[t] != 0).ok_or(Error::NoProfile)?;
    if target[smallest] < 0 {
        return Err(Error::NoProfile);
    }
    let budget = 2 * (k * k) as i64;
    let pos_need = target.iter().map(|&d| d.max(0)).sum();
    let neg_need = target.iter().map(|&d| (-d).max(0)).sum();
    if pos_need > budget || neg_need > budget {
        return Err(Error::NoProfile);
    }
    let mut search = Search {
        target: &target,
        n,
        blocks: 2 * k,
        budget,
        smallest,
        pos: vec![0; n],
        neg: vec![0; n],
        pos_need,
        neg_need,
        seq: Vec::with_capacity(2 * k),
        found: BTreeSet::new(),
    };
    if search.push(smallest) {
        search.run(smallest);
    }
    if search.found.is_empty() {
        return Err(Error::NoProfile);
    }
    Ok(search.found.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RigidityReport {
    pub n: usize,
    /// Configurations with at most four blocks.
    pub configurations: u64,
    pub orbits: u64,
    pub violations: Vec<String>,
    pub rigid: bool,
}

/// Checks `D_stab = D_sym` for every configuration on `Z/N` with at most four blocks.
pub fn verify_four_block_rigidity(n: usize, opts: &SearchOptions) -> Result<RigidityReport> {
    let group = GroupSpec::cyclic(n)?;
    let table = ImageTable::build(&group, opts)?;
    let k = table.kernel();
    let mut configurations = 0;
    let mut orbits = 0;
    let mut violations = Vec::new();
    for x in 0..1u64 << n {
        if k.disagreements(x, 1) > 4 {
            continue;
        }
        configurations += 1;
        if !k.is_canonical(x) {
            continue;
        }
        orbits += 1;
        let (stab, sym) = (table.fiber_size(x), k.orbit_size(x) as u64);
        if stab != sym {
            violations.push(format!(
                "{}: d_stab {stab} != d_sym {sym}",
                SpinConfig::from_mask(&group, x)
            ));
        }
    }
    Ok(RigidityReport {
        n,
        configurations,
        orbits,
        rigid: violations.is_empty(),
        violations,
    })
}

/// Laplacian of `A(σ)` as a signed multiset.
pub fn delta_of(sigma: &SpinConfig) -> Result<SignedMultiset> {
    Ok(SignedMultiset::from_vector(&laplacian(&correlate_fast(sigma))?))
}
