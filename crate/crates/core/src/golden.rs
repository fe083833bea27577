//! Reference values reproduced from scratch, one named check each.

use std::fmt::Display;

use serde::Serialize;

use crate::blocks::blocks_of;
use crate::constructions::{expected_reduced_count, legendre_config, reduced_difference_sets, singer_difference_set, singer_stable_bound};
use crate::correlation::correlate_fast;
use crate::degeneracy::{d_stab, survey, SearchOptions};
use crate::error::Result;
use crate::exact::{parse_rational, Rational};
use crate::group::{Automorphism, GroupSpec};
use crate::spin::SpinConfig;
use crate::substitution::{verify_reversal_identity, SubstitutionWord};
use crate::symmetry::{act_psi_config, aut_correlation_images, d_sym, in_joint_orbit, in_phi_orbit, translation_between};

pub const N14_SIGMA: &str = "--+++++-++-+-+";
pub const N14_TAU: &str = "--+-++++-+++-+";
pub const N16_SIGMA: &str = "--+-++++-+-+--++";
pub const N13_SINGER: &str = "++-+-----+---";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoldenCheck {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

struct Checks<'a> {
    perturb: Option<&'a str>,
    items: Vec<GoldenCheck>,
}

impl Checks<'_> {
    fn push(&mut self, name: &str, expected: impl Display, actual: impl Display) {
        let mut expected = expected.to_string();
        if self.perturb == Some(name) {
            expected.push_str(" (corrupted)");
        }
        let actual = actual.to_string();
        self.items.push(GoldenCheck {
            name: name.to_string(),
            passed: expected == actual,
            expected,
            actual,
        });
    }
}

fn cyclic(n: usize) -> Result<GroupSpec> {
    GroupSpec::cyclic(n)
}

fn values(sigma: &SpinConfig) -> String {
    format!("{:?}", correlate_fast(sigma).values()).replace(' ', "")
}

fn pattern(n: usize, at_zero: i64, rest: impl Fn(usize) -> i64) -> String {
    let v: Vec<i64> = (0..n).map(|f| if f == 0 { at_zero } else { rest(f) }).collect();
    format!("{v:?}").replace(' ', "")
}

/// Runs every reference check. `perturb` corrupts the expected value of one check by name.
pub fn run_reference_checks(opts: &SearchOptions, perturb: Option<&str>) -> Result<Vec<GoldenCheck>> {
    let mut c = Checks { perturb, items: Vec::new() };

    let z4 = SpinConfig::parse(&cyclic(4)?, "+-+-")?;
    c.push("z4.alternating.correlation", "[4,-4,4,-4]", values(&z4));

    let l5 = legendre_config(5, 1)?;
    c.push("z5.legendre.config", "++--+", &l5);
    c.push("z5.legendre.correlation", "[5,1,-3,-3,1]", values(&l5));

    let l7 = legendre_config(7, 1)?;
    c.push("z7.legendre.correlation", pattern(7, 7, |_| -1), values(&l7));
    c.push("z7.legendre.d_sym", 28, d_sym(&l7));
    c.push("z7.legendre.d_stab", 28, d_stab(&l7, opts)?);

    let none = parse_rational("1.0001")?;
    for n in 2..=11 {
        let rows = survey(&cyclic(n)?, none, opts)?;
        c.push(&format!("z{n}.survey.exceptional_orbits"), 0, rows.len());
    }
    let z12 = survey(&cyclic(12)?, Rational::from_integer(2), opts)?;
    let doubled = z12
        .iter()
        .find(|r| r.d_stab == 2 * r.d_sym)
        .map(|r| format!("{}/{}", r.d_stab, r.d_sym))
        .unwrap_or_else(|| "none".into());
    c.push("z12.survey.doubled_orbit", "96/48", doubled);

    let s13 = SpinConfig::parse(&cyclic(13)?, N13_SINGER)?;
    c.push("z13.singer.correlation", pattern(13, 13, |_| 1), values(&s13));
    c.push("z13.singer.d_sym", 52, d_sym(&s13));
    c.push("z13.singer.d_stab", 104, d_stab(&s13, opts)?);
    c.push("z13.singer.stable_bound", 104, singer_stable_bound(3)?);
    let multiset = blocks_of(&s13)?
        .length_multiset()
        .iter()
        .map(|(m, k)| format!("{m}^{k}"))
        .collect::<Vec<_>>()
        .join(" ");
    c.push("z13.singer.block_multiset", "1^3 2^1 3^1 5^1", multiset);
    let built = singer_difference_set(3, 1, None)?.set.config()?;
    c.push("z13.singer.construction_matches", true, in_phi_orbit(&built, &s13));

    let sigma14 = SpinConfig::parse(&cyclic(14)?, N14_SIGMA)?;
    let tau14 = SpinConfig::parse(&cyclic(14)?, N14_TAU)?;
    c.push("z14.pair.same_correlation", true, correlate_fast(&sigma14) == correlate_fast(&tau14));
    c.push("z14.pair.d_stab", 112, d_stab(&sigma14, opts)?);
    c.push("z14.pair.joint_orbit", false, in_joint_orbit(&sigma14, &tau14)?);

    let sigma16 = SpinConfig::parse(&cyclic(16)?, N16_SIGMA)?;
    c.push("z16.d_stab", 192, d_stab(&sigma16, opts)?);
    c.push("z16.aut_images", 4, aut_correlation_images(&correlate_fast(&sigma16))?.len());

    let word = SubstitutionWord::parse("UVUUVVV", "++-", "-+-")?;
    let report = verify_reversal_identity(&word)?;
    c.push("z21.word.flattened", "++--+-++-++--+--+--+-", &report.sigma);
    c.push(
        "z21.word.correlation",
        pattern(21, 21, |f| if f % 3 == 0 { 13 } else { -7 }),
        values(&report.sigma),
    );
    c.push("z21.reversal.same_correlation", true, report.equal);
    c.push("z21.reversal.phi_orbit", false, report.same_phi_orbit);
    let psi = act_psi_config(&Automorphism::unit(report.sigma.group(), 10)?, &report.sigma)?;
    c.push("z21.reversal.psi10_translate", true, translation_between(&psi, &report.tau).is_some());

    for (q, want) in [(2u64, 2usize), (3, 4), (4, 2)] {
        let got = reduced_difference_sets(q)?.len();
        c.push(&format!("pds.q{q}.reduced_count"), want, got);
        c.push(&format!("pds.q{q}.euler_count"), want, expected_reduced_count(q)?);
    }

    Ok(c.items)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        let checks = run_reference_checks(&SearchOptions::default(), None).unwrap();
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        for prefix in ["z7.", "z12.", "z13.", "z14.", "z16.", "z21."] {
            assert!(checks.iter().any(|c| c.name.starts_with(prefix)), "{prefix}");
        }
    }

    #[test]
    fn perturbation_fails_one_check() {
        let checks = run_reference_checks(&SearchOptions::default(), Some("z16.d_stab")).unwrap();
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        assert_eq!(failed, vec!["z16.d_stab"]);
    }
}
