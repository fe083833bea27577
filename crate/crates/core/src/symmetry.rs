use std::collections::BTreeSet;

use crate::correlation::CorrelationVector;
use crate::error::{Error, Result};
use crate::group::{automorphisms, Automorphism, GroupSpec};
use crate::kernel::MaskKernel;
use crate::spin::SpinConfig;

/// `(s, t, r)` acting by `(Φσ)_f = s·σ_{r·f + t}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymElement {
    /// `s = −1`.
    pub flip: bool,
    /// Element index of `t`.
    pub shift: usize,
    /// `r = −1`.
    pub reflect: bool,
}

impl SymElement {
    pub const IDENTITY: SymElement = SymElement {
        flip: false,
        shift: 0,
        reflect: false,
    };

    pub fn new(s: i8, shift: usize, r: i8) -> Self {
        SymElement {
            flip: s < 0,
            shift,
            reflect: r < 0,
        }
    }

    /// All `4|F|` elements in a fixed order.
    pub fn all(group: &GroupSpec) -> impl Iterator<Item = SymElement> + '_ {
        (0..group.order()).flat_map(|shift| {
            [(false, false), (false, true), (true, false), (true, true)]
                .into_iter()
                .map(move |(flip, reflect)| SymElement {
                    flip,
                    shift,
                    reflect,
                })
        })
    }

    /// The element acting as `self` after `first`.
    pub fn after(self, first: SymElement, group: &GroupSpec) -> SymElement {
        let moved = if first.reflect {
            group.neg_index(self.shift)
        } else {
            self.shift
        };
        SymElement {
            flip: self.flip ^ first.flip,
            shift: group.add_index(moved, first.shift),
            reflect: self.reflect ^ first.reflect,
        }
    }

    fn source(&self, group: &GroupSpec, f: usize) -> usize {
        let rf = if self.reflect { group.neg_index(f) } else { f };
        group.add_index(rf, self.shift)
    }
}

pub fn act_phi(g: SymElement, sigma: &SpinConfig) -> Result<SpinConfig> {
    let group = sigma.group();
    if g.shift >= group.order() {
        return Err(Error::ElementMismatch {
            element: vec![g.shift],
            group: group.to_string(),
        });
    }
    let moved = sigma.pull(|f| g.source(group, f));
    Ok(if g.flip { moved.flipped() } else { moved })
}

/// A Φ-orbit, named by its text-least member.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Orbit {
    pub representative: SpinConfig,
    pub size: usize,
}

impl PartialOrd for Orbit {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Orbit {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.representative
            .lex_cmp(&other.representative)
            .then(self.size.cmp(&other.size))
    }
}

fn all_images(sigma: &SpinConfig) -> Vec<SpinConfig> {
    SymElement::all(sigma.group())
        .map(|g| act_phi(g, sigma).expect("shift in range"))
        .collect()
}

pub fn orbit_members(sigma: &SpinConfig) -> Vec<SpinConfig> {
    if let (Some(x), Ok(k)) = (sigma.mask(), MaskKernel::new(sigma.group())) {
        return k
            .orbit(x)
            .into_iter()
            .map(|y| SpinConfig::from_mask(sigma.group(), y))
            .collect();
    }
    let mut all = all_images(sigma);
    all.sort_by(|a, b| a.lex_cmp(b));
    all.dedup();
    all
}

pub fn orbit(sigma: &SpinConfig) -> Orbit {
    let members = orbit_members(sigma);
    let representative = members
        .iter()
        .min_by(|a, b| a.lex_cmp(b))
        .cloned()
        .unwrap_or_else(|| sigma.clone());
    Orbit {
        representative,
        size: members.len(),
    }
}

pub fn canonical(sigma: &SpinConfig) -> SpinConfig {
    orbit(sigma).representative
}

pub fn stabilizer(sigma: &SpinConfig) -> Vec<SymElement> {
    SymElement::all(sigma.group())
        .filter(|&g| act_phi(g, sigma).map(|y| &y == sigma).unwrap_or(false))
        .collect()
}

/// `D_sym(σ) = 4|F| / |stabilizer|`.
pub fn d_sym(sigma: &SpinConfig) -> usize {
    if let (Some(x), Ok(k)) = (sigma.mask(), MaskKernel::new(sigma.group())) {
        return k.orbit_size(x);
    }
    4 * sigma.len() / stabilizer(sigma).len()
}

pub fn in_phi_orbit(sigma: &SpinConfig, tau: &SpinConfig) -> bool {
    sigma.group() == tau.group() && orbit(sigma).representative == orbit(tau).representative
}

fn check_group(phi: &Automorphism, group: &GroupSpec) -> Result<()> {
    if phi.group() != group {
        return Err(Error::GroupMismatch {
            left: phi.group().to_string(),
            right: group.to_string(),
        });
    }
    Ok(())
}

/// `Ψ_φ(σ)_f = σ_{φ^{-1}(f)}`, i.e. the spin at `x` moves to `φ(x)`.
pub fn act_psi_config(phi: &Automorphism, sigma: &SpinConfig) -> Result<SpinConfig> {
    check_group(phi, sigma.group())?;
    let inverse = phi.inverse();
    Ok(sigma.pull(|f| inverse.apply_index(f)))
}

pub fn act_psi_corr(phi: &Automorphism, corr: &CorrelationVector) -> Result<CorrelationVector> {
    check_group(phi, corr.group())?;
    let inverse = phi.inverse();
    let values = (0..corr.values().len())
        .map(|f| corr.get(inverse.apply_index(f)))
        .collect();
    Ok(CorrelationVector::from_trusted(corr.group(), values))
}

/// Φ-orbits reached from `σ` under all `Ψ_φ`, `φ ∈ Aut(F)`; sorted by representative.
pub fn joint_orbit(sigma: &SpinConfig) -> Result<Vec<Orbit>> {
    let auts = automorphisms(sigma.group()).map_err(|_| Error::RequiresCyclic("joint_orbit"))?;
    let mut seen = BTreeSet::new();
    for phi in &auts {
        seen.insert(orbit(&act_psi_config(phi, sigma)?));
    }
    Ok(seen.into_iter().collect())
}

pub fn in_joint_orbit(sigma: &SpinConfig, tau: &SpinConfig) -> Result<bool> {
    let target = orbit(tau).representative;
    Ok(joint_orbit(sigma)?
        .iter()
        .any(|o| o.representative == target))
}

/// Distinct correlation vectors `Ψ_φ(A)` over `φ ∈ Aut(F)`.
pub fn aut_correlation_images(corr: &CorrelationVector) -> Result<Vec<CorrelationVector>> {
    let auts = automorphisms(corr.group()).map_err(|_| Error::RequiresCyclic("aut_correlation_images"))?;
    let mut out: Vec<CorrelationVector> = Vec::new();
    for phi in &auts {
        let image = act_psi_corr(phi, corr)?;
        if !out.contains(&image) {
            out.push(image);
        }
    }
    out.sort_by(|a, b| a.values().cmp(b.values()));
    Ok(out)
}

/// Smallest non-negative translation `t` with `τ_f = σ_{f+t}`, if any.
pub fn translation_between(sigma: &SpinConfig, tau: &SpinConfig) -> Option<usize> {
    let g = sigma.group();
    (0..g.order()).find(|&t| &sigma.pull(|f| g.add_index(f, t)) == tau)
}
