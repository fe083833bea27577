use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{det3, is_prime, prime_power, primitive_cubic, Cubic, Field};
use crate::group::{GroupSpec, QuotientMap};
use crate::spin::SpinConfig;

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// `σ_k = (k/p)` for `k ≠ 0`, and `σ_0 = sign`.
pub fn legendre_config(p: u64, sign: i8) -> Result<SpinConfig> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let group = GroupSpec::cyclic(p as usize)?;
    let residue = |k: u64| -> bool {
        let (mut base, mut e, mut acc) = (k % p, (p - 1) / 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc == 1
    };
    let down = (0..p)
        .filter(|&k| if k == 0 { sign < 0 } else { !residue(k) })
        .map(|k| k as usize);
    Ok(SpinConfig::from_down_set(&group, down))
}

/// Sorted subset of `Z/NZ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DifferenceSet {
    pub modulus: usize,
    pub members: Vec<usize>,
}

impl DifferenceSet {
    pub fn new(modulus: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut members: Vec<usize> = members.into_iter().map(|m| m % modulus).collect();
        members.sort_unstable();
        members.dedup();
        DifferenceSet { modulus, members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Every nonzero residue is `d₂ − d₁` for exactly one ordered pair.
    pub fn is_perfect(&self) -> bool {
        let n = self.modulus;
        let mut hits = vec![0usize; n];
        for &a in &self.members {
            for &b in &self.members {
                if a != b {
                    hits[(b + n - a) % n] += 1;
                }
            }
        }
        hits[1..].iter().all(|&h| h == 1)
    }

    pub fn translate(&self, t: usize) -> DifferenceSet {
        DifferenceSet::new(self.modulus, self.members.iter().map(|&m| m + t))
    }

    pub fn scale(&self, a: usize) -> DifferenceSet {
        DifferenceSet::new(self.modulus, self.members.iter().map(|&m| m * a))
    }

    /// The translate containing `0` and `1`, when exactly one pair differs by one.
    pub fn reduced(&self) -> Option<DifferenceSet> {
        let n = self.modulus;
        let starts: Vec<usize> = self
            .members
            .iter()
            .copied()
            .filter(|&a| self.members.contains(&((a + 1) % n)))
            .collect();
        match starts.as_slice() {
            [a] => Some(self.translate(n - a)),
            _ => None,
        }
    }

    /// Spin down exactly on the members.
    pub fn config(&self) -> Result<SpinConfig> {
        config_from_subset(self.modulus, &self.members)
    }
}

pub fn config_from_subset(n: usize, subset: &[usize]) -> Result<SpinConfig> {
    Ok(SpinConfig::from_down_set(&GroupSpec::cyclic(n)?, subset.iter().copied()))
}

/// The line through `A₀ = 1` and `A₁ = λ` read off the Singer orbit.
#[derive(Clone, Debug)]
pub struct SingerConstruction {
    pub q: u64,
    pub cubic: Cubic,
    pub field: Field,
    pub set: DifferenceSet,
}

pub fn singer_difference_set(p: u64, n: u32, cubic: Option<Cubic>) -> Result<SingerConstruction> {
    let field = Field::new(p, n)?;
    let q = field.order();
    let cubic = match cubic {
        Some(c) => {
            if c.c2.max(c.c1).max(c.c0) >= q || !c.is_irreducible(&field) {
                return Err(Error::NotIrreducible(c.describe(&field)));
            }
            c
        }
        None => primitive_cubic(&field)?,
    };
    let points = cubic.point_orbit(&field);
    let expected = q * q + q + 1;
    if points.len() != expected {
        return Err(Error::NotPrimitive {
            poly: cubic.describe(&field),
            order: points.len(),
            expected,
        });
    }
    let members = (0..expected).filter(|&k| det3(&field, points[0], points[1], points[k]) == 0);
    let set = DifferenceSet::new(expected, members);
    Ok(SingerConstruction {
        q: q as u64,
        cubic,
        field,
        set,
    })
}

pub const MAX_REDUCED_Q: u64 = 8;

/// All perfect difference sets mod `q²+q+1` of size `q+1` containing 0 and 1.
///
/// Plain backtracking over increasing members with a used-difference table.
pub fn reduced_difference_sets(q: u64) -> Result<Vec<DifferenceSet>> {
    prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let n = (q * q + q + 1) as usize;
    if q > MAX_REDUCED_Q {
        return Err(Error::BoundExceeded {
            order: n,
            bound: (MAX_REDUCED_Q * MAX_REDUCED_Q + MAX_REDUCED_Q + 1) as usize,
        });
    }
    let size = q as usize + 1;
    if size == 2 {
        return Ok(vec![DifferenceSet::new(n, [0, 1])]);
    }
    let mut out: Vec<DifferenceSet> = (2..n)
        .into_par_iter()
        .map(|third| {
            let mut used = vec![false; n];
            let mut members = vec![0, 1];
            used[1] = true;
            used[n - 1] = true;
            let mut found = Vec::new();
            if try_add(&mut members, &mut used, third, n) {
                extend(&mut members, &mut used, size, n, &mut found);
            }
            found
        })
        .flatten()
        .collect();
    out.sort();
    Ok(out)
}

fn try_add(members: &mut Vec<usize>, used: &mut [bool], x: usize, n: usize) -> bool {
    let mut diffs = Vec::with_capacity(2 * members.len());
    for &m in members.iter() {
        let d = (x + n - m) % n;
        let e = n - d;
        if used[d] || used[e] || d == e || diffs.contains(&d) || diffs.contains(&e) {
            return false;
        }
        diffs.push(d);
        diffs.push(e);
    }
    for d in diffs {
        used[d] = true;
    }
    members.push(x);
    true
}

fn remove_last(members: &mut Vec<usize>, used: &mut [bool], n: usize) {
    let x = members.pop().expect("nonempty");
    for &m in members.iter() {
        let d = (x + n - m) % n;
        used[d] = false;
        used[n - d] = false;
    }
}

fn extend(members: &mut Vec<usize>, used: &mut [bool], size: usize, n: usize, found: &mut Vec<DifferenceSet>) {
    if members.len() == size {
        found.push(DifferenceSet::new(n, members.iter().copied()));
        return;
    }
    let last = *members.last().unwrap();
    let remaining = size - members.len();
    for x in last + 1..=n - remaining {
        if try_add(members, used, x, n) {
            extend(members, used, size, n, found);
            remove_last(members, used, n);
        }
    }
}

/// `φ(N)/(3n)`, the count of reduced sets for `q = p^n`.
pub fn expected_reduced_count(q: u64) -> Result<u64> {
    let (_, n) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    Ok(euler_phi(q * q + q + 1) / (3 * u64::from(n)))
}

/// Lower bound `2Nφ(N)/(3n)` on the stable degeneracy of a Singer configuration.
pub fn singer_stable_bound(q: u64) -> Result<u64> {
    let (_, n) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let big = q * q + q + 1;
    Ok(2 * big * euler_phi(big) / (3 * u64::from(n)))
}

/// `σ_{(f₁,f₂)} = σ¹_{f₁}·σ²_{f₂}` on `F₁ ⊕ F₂`.
pub fn product_config(first: &SpinConfig, second: &SpinConfig) -> SpinConfig {
    let group = first.group().direct_sum(second.group());
    let width = second.len();
    let down = (0..group.order()).filter(|&i| first.is_down(i / width) != second.is_down(i % width));
    SpinConfig::from_down_set(&group, down)
}

/// `σ = π*τ`, i.e. `σ_x = τ_{π(x)}`.
pub fn periodic_lift(tau: &SpinConfig, pi: &QuotientMap) -> Result<SpinConfig> {
    if tau.group() != pi.target() {
        return Err(Error::GroupMismatch {
            left: tau.group().to_string(),
            right: pi.target().to_string(),
        });
    }
    let down = (0..pi.source().order()).filter(|&x| tau.is_down(pi.apply_index(x)));
    Ok(SpinConfig::from_down_set(pi.source(), down))
}
