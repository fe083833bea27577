//! Finite abelian groups written as direct sums of cyclic factors.
//!
//! Elements are enumerated in mixed radix with the first declared factor most
//! significant, so `Z2xZ4` lists `(0,0), (0,1), .., (0,3), (1,0), .., (1,3)`.
//! That linear index is the bit position used by every spin configuration.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    factors: Vec<usize>,
    strides: Vec<usize>,
    order: usize,
    exponent: usize,
}

impl GroupSpec {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::MalformedGroup(String::new()));
        }
        if let Some(&bad) = factors.iter().find(|&&n| n < 2) {
            return Err(Error::FactorTooSmall(bad));
        }
        Ok(Self::from_factors_unchecked(factors))
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    /// The group with one element. Only produced internally (e.g. `F/F`).
    pub fn trivial() -> Self {
        Self::from_factors_unchecked(Vec::new())
    }

    fn from_factors_unchecked(factors: Vec<usize>) -> Self {
        let mut strides = vec![1; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1];
        }
        let order = factors.iter().product();
        let exponent = factors.iter().fold(1, |acc, &n| acc.lcm(&n));
        GroupSpec {
            factors,
            strides,
            order,
            exponent,
        }
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    /// Index stride of each factor in the linear enumeration.
    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    /// `F1 ⊕ F2`, with `F1` the more significant summand.
    pub fn direct_sum(&self, other: &GroupSpec) -> GroupSpec {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Self::from_factors_unchecked(factors)
    }

    pub fn element(&self, residues: &[usize]) -> Result<GroupElement> {
        if residues.len() != self.factors.len()
            || residues.iter().zip(&self.factors).any(|(&r, &n)| r >= n)
        {
            return Err(Error::ElementMismatch {
                element: residues.to_vec(),
                group: self.to_string(),
            });
        }
        Ok(GroupElement {
            residues: residues.to_vec(),
        })
    }

    pub fn decode(&self, index: usize) -> GroupElement {
        debug_assert!(index < self.order);
        let residues = self
            .factors
            .iter()
            .zip(&self.strides)
            .map(|(&n, &s)| (index / s) % n)
            .collect();
        GroupElement { residues }
    }

    pub fn index_of(&self, element: &GroupElement) -> Result<usize> {
        self.check(element)?;
        Ok(element
            .residues
            .iter()
            .zip(&self.strides)
            .map(|(&r, &s)| r * s)
            .sum())
    }

    fn check(&self, element: &GroupElement) -> Result<()> {
        self.element(&element.residues).map(|_| ())
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        let residues = a
            .residues
            .iter()
            .zip(&b.residues)
            .zip(&self.factors)
            .map(|((&x, &y), &n)| (x + y) % n)
            .collect();
        Ok(GroupElement { residues })
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        let residues = a
            .residues
            .iter()
            .zip(&self.factors)
            .map(|(&x, &n)| (n - x) % n)
            .collect();
        Ok(GroupElement { residues })
    }

    pub fn add_index(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for (&n, &s) in self.factors.iter().zip(&self.strides) {
            out += ((a / s % n + b / s % n) % n) * s;
        }
        out
    }

    pub fn neg_index(&self, a: usize) -> usize {
        let mut out = 0;
        for (&n, &s) in self.factors.iter().zip(&self.strides) {
            out += ((n - a / s % n) % n) * s;
        }
        out
    }

    pub fn sub_index(&self, a: usize, b: usize) -> usize {
        self.add_index(a, self.neg_index(b))
    }

    /// `k·a` for an integer multiplier (negative allowed).
    pub fn scale_index(&self, a: usize, k: i64) -> usize {
        let mut out = 0;
        for (&n, &s) in self.factors.iter().zip(&self.strides) {
            let r = (a / s % n) as i64;
            out += (r * k).rem_euclid(n as i64) as usize * s;
        }
        out
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.factors
            .iter()
            .zip(&self.strides)
            .fold(1, |acc, (&n, &s)| acc.lcm(&(n / (a / s % n).gcd(&n))))
    }

    /// Table `t[a] = -a`.
    pub fn negation_table(&self) -> Vec<usize> {
        (0..self.order).map(|a| self.neg_index(a)).collect()
    }

    /// Indices of the subgroup generated by `generators`.
    pub fn subgroup(&self, generators: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut elements = vec![0];
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in generators {
                let y = self.add_index(x, g);
                if !member[y] {
                    member[y] = true;
                    elements.push(y);
                    frontier.push(y);
                }
            }
        }
        elements.sort_unstable();
        elements
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "Z1");
        }
        for (i, n) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "Z{n}")?;
        }
        Ok(())
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let malformed = || Error::MalformedGroup(text.to_string());
        let mut factors = Vec::new();
        for part in text.trim().split('x') {
            let digits = part.strip_prefix('Z').ok_or_else(malformed)?;
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            factors.push(digits.parse::<usize>().map_err(|_| malformed())?);
        }
        GroupSpec::new(factors)
    }
}

impl serde::Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    residues: Vec<usize>,
}

impl GroupElement {
    pub fn residues(&self) -> &[usize] {
        &self.residues
    }
}

/// An automorphism of `F`, acting on element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Automorphism {
    /// Multiplication by a unit of `Z/NZ`.
    Unit { group: GroupSpec, a: usize },
    /// Explicit image table, validated to be a bijective homomorphism.
    Table { group: GroupSpec, images: Vec<usize> },
}

impl Automorphism {
    pub fn unit(group: &GroupSpec, a: usize) -> Result<Self> {
        if !group.is_cyclic() {
            return Err(Error::NotCyclic(group.to_string()));
        }
        let n = group.order();
        let a = a % n.max(1);
        if n > 1 && a.gcd(&n) != 1 {
            return Err(Error::NotAutomorphism {
                group: group.to_string(),
                reason: format!("gcd({a}, {n}) != 1"),
            });
        }
        Ok(Automorphism::Unit {
            group: group.clone(),
            a,
        })
    }

    pub fn from_table(group: &GroupSpec, images: Vec<usize>) -> Result<Self> {
        let n = group.order();
        let fail = |reason: String| Error::NotAutomorphism {
            group: group.to_string(),
            reason,
        };
        if images.len() != n {
            return Err(fail(format!("table has {} entries, expected {n}", images.len())));
        }
        let mut seen = vec![false; n];
        for &y in &images {
            if y >= n || std::mem::replace(&mut seen[y], true) {
                return Err(fail("table is not a bijection".into()));
            }
        }
        for x in 0..n {
            for y in 0..n {
                if images[group.add_index(x, y)] != group.add_index(images[x], images[y]) {
                    return Err(fail(format!("phi({x}+{y}) != phi({x})+phi({y})")));
                }
            }
        }
        Ok(Automorphism::Table {
            group: group.clone(),
            images,
        })
    }

    pub fn identity(group: &GroupSpec) -> Self {
        Automorphism::Table {
            group: group.clone(),
            images: (0..group.order()).collect(),
        }
    }

    pub fn group(&self) -> &GroupSpec {
        match self {
            Automorphism::Unit { group, .. } | Automorphism::Table { group, .. } => group,
        }
    }

    pub fn apply_index(&self, x: usize) -> usize {
        match self {
            Automorphism::Unit { group, a } => (a * x) % group.order(),
            Automorphism::Table { images, .. } => images[x],
        }
    }

    pub fn table(&self) -> Vec<usize> {
        (0..self.group().order()).map(|x| self.apply_index(x)).collect()
    }

    pub fn inverse(&self) -> Automorphism {
        match self {
            Automorphism::Unit { group, a } => {
                let n = group.order() as i64;
                let inv = (*a as i64).extended_gcd(&n).x.rem_euclid(n.max(1));
                Automorphism::Unit {
                    group: group.clone(),
                    a: inv as usize,
                }
            }
            Automorphism::Table { group, images } => {
                let mut inv = vec![0; images.len()];
                for (x, &y) in images.iter().enumerate() {
                    inv[y] = x;
                }
                Automorphism::Table {
                    group: group.clone(),
                    images: inv,
                }
            }
        }
    }
}

/// All automorphisms of a cyclic group, as units in ascending order.
pub fn automorphisms(group: &GroupSpec) -> Result<Vec<Automorphism>> {
    if !group.is_cyclic() {
        return Err(Error::NotCyclic(group.to_string()));
    }
    let n = group.order();
    Ok((1..n.max(2))
        .filter(|a| a.gcd(&n) == 1)
        .map(|a| Automorphism::Unit {
            group: group.clone(),
            a,
        })
        .collect())
}

/// Surjection `π: F → F/U` together with its image table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientMap {
    source: GroupSpec,
    target: GroupSpec,
    images: Vec<usize>,
}

impl QuotientMap {
    pub fn source(&self) -> &GroupSpec {
        &self.source
    }

    pub fn target(&self) -> &GroupSpec {
        &self.target
    }

    pub fn apply_index(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn kernel_order(&self) -> usize {
        self.source.order() / self.target.order()
    }
}

/// The quotient of `group` by the subgroup generated by `generators`.
pub fn quotient_map(group: &GroupSpec, generators: &[GroupElement]) -> Result<QuotientMap> {
    let gens: Vec<usize> = generators
        .iter()
        .map(|g| group.index_of(g))
        .collect::<Result<_>>()?;

    if group.is_cyclic() {
        let n = group.order();
        let d = gens.iter().fold(n, |acc, &g| acc.gcd(&g));
        let target = if d > 1 {
            GroupSpec::from_factors_unchecked(vec![d])
        } else {
            GroupSpec::trivial()
        };
        let images = (0..n).map(|x| x % d).collect();
        return Ok(QuotientMap {
            source: group.clone(),
            target,
            images,
        });
    }

    // Relations of Z^d: n_i e_i for each factor, plus each generator. Column
    // operations bring them to diagonal form; the accumulated column transform
    // gives the coordinates of the quotient.
    let d = group.factors().len();
    let mut rel: Vec<Vec<i128>> = Vec::new();
    for (i, &n) in group.factors().iter().enumerate() {
        let mut row = vec![0; d];
        row[i] = n as i128;
        rel.push(row);
    }
    for g in generators {
        rel.push(g.residues().iter().map(|&r| r as i128).collect());
    }
    let (diag, transform) = diagonalize(rel, d);

    let kept: Vec<usize> = (0..d).filter(|&t| diag[t] > 1).collect();
    let target = GroupSpec::from_factors_unchecked(kept.iter().map(|&t| diag[t] as usize).collect());
    let images = (0..group.order())
        .map(|x| {
            let residues = group.decode(x);
            let mut idx = 0;
            for (k, &t) in kept.iter().enumerate() {
                let coord: i128 = residues
                    .residues()
                    .iter()
                    .enumerate()
                    .map(|(i, &r)| r as i128 * transform[i][t])
                    .sum();
                idx += coord.rem_euclid(diag[t]) as usize * target.strides()[k];
            }
            idx
        })
        .collect();
    Ok(QuotientMap {
        source: group.clone(),
        target,
        images,
    })
}

/// Diagonalise an integer relation matrix with `cols` columns by row and
/// column operations. Returns the diagonal and the column transform `Q`.
fn diagonalize(mut m: Vec<Vec<i128>>, cols: usize) -> (Vec<i128>, Vec<Vec<i128>>) {
    let rows = m.len();
    let mut q: Vec<Vec<i128>> = (0..cols)
        .map(|i| (0..cols).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut diag = vec![0i128; cols];

    for t in 0..cols.min(rows) {
        loop {
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| m[i][j] != 0)
                .min_by_key(|&(i, j)| m[i][j].abs());
            let Some((pi, pj)) = pivot else {
                return (diag, q);
            };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            for row in q.iter_mut() {
                row.swap(t, pj);
            }

            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let k = m[i][t].div_euclid(p);
                if k != 0 {
                    for j in 0..cols {
                        m[i][j] -= k * m[t][j];
                    }
                }
                clean &= m[i][t] == 0;
            }
            for j in t + 1..cols {
                let k = m[t][j].div_euclid(p);
                if k != 0 {
                    for row in m.iter_mut() {
                        row[j] -= k * row[t];
                    }
                    for row in q.iter_mut() {
                        row[j] -= k * row[t];
                    }
                }
                clean &= m[t][j] == 0;
            }
            if clean {
                diag[t] = p.abs();
                break;
            }
        }
    }
    (diag, q)
}
