//! One PASS/FAIL line per acceptance criterion, with its time limit.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg32;

use isingdeg::blocks::{blocks_of, delta_from_profile, laplacian, reconstruct_from_delta, subset_sum_injective, verify_four_block_rigidity, BlockProfile};
use isingdeg::constructions::{
    euler_phi, expected_reduced_count, legendre_config, periodic_lift, product_config, reduced_difference_sets,
    singer_difference_set, singer_stable_bound,
};
use isingdeg::correlation::{correlate, correlate_fast, fourier_power_check};
use isingdeg::degeneracy::{
    average_dsym, d_stab, d_stab_extended, image_with_counts, msd, msd_csv, survey, survey_csv, ImageTable, SearchOptions,
};
use isingdeg::exact::{parse_rational, Rational};
use isingdeg::field::{is_prime, prime_power};
use isingdeg::group::{automorphisms, quotient_map, Automorphism, GroupSpec};
use isingdeg::spin::SpinConfig;
use isingdeg::substitution::{verify_reversal_identity, Letter, SubstitutionWord};
use isingdeg::symmetry::{
    act_phi, act_psi_config, act_psi_corr, aut_correlation_images, d_sym, in_joint_orbit, in_phi_orbit,
    translation_between, SymElement,
};

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn z(n: usize) -> GroupSpec {
    GroupSpec::cyclic(n).unwrap()
}

fn group(spec: &str) -> GroupSpec {
    spec.parse().unwrap()
}

fn opts() -> SearchOptions {
    SearchOptions::default()
}

fn err(e: isingdeg::Error) -> String {
    e.to_string()
}

fn legendre_seven() -> Check {
    let s = legendre_config(7, 1).map_err(err)?;
    let a = correlate_fast(&s);
    ensure!(a.get(0) == 7 && (1..7).all(|f| a.get(f) == -1), "A = {:?}", a.values());
    ensure!(d_sym(&s) == 28, "d_sym = {}", d_sym(&s));
    let stab = d_stab(&s, &opts()).map_err(err)?;
    ensure!(stab == 28, "d_stab = {stab}");
    Ok(())
}

fn singer_thirteen() -> Check {
    let s = SpinConfig::parse(&z(13), "++-+-----+---").map_err(err)?;
    let a = correlate_fast(&s);
    ensure!((1..13).all(|f| a.get(f) == 1), "A = {:?}", a.values());
    ensure!(d_sym(&s) == 52, "d_sym = {}", d_sym(&s));
    let stab = d_stab(&s, &opts()).map_err(err)?;
    ensure!(stab == 104, "d_stab = {stab}");
    let m = blocks_of(&s).map_err(err)?.length_multiset();
    ensure!(m == vec![(1, 3), (2, 1), (3, 1), (5, 1)], "multiset {m:?}");
    let bound = singer_stable_bound(3).map_err(err)?;
    ensure!(bound == 104 && stab == bound, "bound {bound}");
    let built = singer_difference_set(3, 1, None).map_err(err)?.set.config().map_err(err)?;
    ensure!(in_phi_orbit(&built, &s), "constructed set {built} is not in the listed orbit");
    Ok(())
}

fn survey_exceptions() -> Check {
    let above_one = parse_rational("1.0001").map_err(err)?;
    for n in 2..=11 {
        let rows = survey(&z(n), above_one, &opts()).map_err(err)?;
        ensure!(rows.is_empty(), "N={n} has {} exceptional orbits", rows.len());
    }
    let rows = survey(&z(12), Rational::from_integer(2), &opts()).map_err(err)?;
    ensure!(
        rows.iter().any(|r| r.d_sym == 48 && r.d_stab == 96),
        "no doubled orbit at N=12"
    );
    Ok(())
}

fn pair_fourteen() -> Check {
    let sigma = SpinConfig::parse(&z(14), "--+++++-++-+-+").map_err(err)?;
    let tau = SpinConfig::parse(&z(14), "--+-++++-+++-+").map_err(err)?;
    ensure!(correlate_fast(&sigma) == correlate_fast(&tau), "correlations differ");
    for s in [&sigma, &tau] {
        let stab = d_stab(s, &opts()).map_err(err)?;
        ensure!(stab == 112, "d_stab({s}) = {stab}");
    }
    ensure!(!in_joint_orbit(&sigma, &tau).map_err(err)?, "tau lies in the joint orbit");
    Ok(())
}

fn config_sixteen() -> Check {
    let s = SpinConfig::parse(&z(16), "--+-++++-+-+--++").map_err(err)?;
    let stab = d_stab(&s, &opts()).map_err(err)?;
    ensure!(stab == 192, "d_stab = {stab}");
    let images = aut_correlation_images(&correlate_fast(&s)).map_err(err)?;
    ensure!(images.len() == 4, "{} Aut images", images.len());
    Ok(())
}

fn word_reversal() -> Check {
    let w = SubstitutionWord::parse("UVUUVVV", "++-", "-+-").map_err(err)?;
    let r = verify_reversal_identity(&w).map_err(err)?;
    for f in 0..21 {
        let want = if f == 0 { 21 } else if f % 3 == 0 { 13 } else { -7 };
        ensure!(r.corr_word.get(f) == want, "A_{f} = {}", r.corr_word.get(f));
    }
    ensure!(r.equal, "reversal changes A");
    ensure!(!r.same_phi_orbit, "reversal stays in the Φ-orbit");
    let psi = act_psi_config(&Automorphism::unit(r.sigma.group(), 10).map_err(err)?, &r.sigma).map_err(err)?;
    ensure!(translation_between(&psi, &r.tau).is_some(), "tau is not a translate of Ψ_10(σ)");
    Ok(())
}

fn reduced_counts() -> Check {
    for (q, want) in [(2u64, 2usize), (3, 4), (4, 2)] {
        let got = reduced_difference_sets(q).map_err(err)?.len();
        let (_, n) = prime_power(q).unwrap();
        let big = q * q + q + 1;
        let formula = (euler_phi(big) / (3 * u64::from(n))) as usize;
        ensure!(got == want && formula == want, "q={q}: {got} sets, formula {formula}");
        ensure!(expected_reduced_count(q).map_err(err)? as usize == want, "q={q}");
    }
    Ok(())
}

fn four_block_rigidity() -> Check {
    for n in 2..=14 {
        let r = verify_four_block_rigidity(n, &opts()).map_err(err)?;
        ensure!(r.rigid, "N={n}: {:?}", r.violations);
    }
    Ok(())
}

fn small_groups() -> Vec<GroupSpec> {
    let mut out: Vec<GroupSpec> = (2..=12).map(z).collect();
    for spec in ["Z2xZ2", "Z2xZ3", "Z2xZ4", "Z2xZ2xZ2", "Z3xZ3", "Z2xZ5", "Z2xZ6", "Z2xZ2xZ3", "Z3xZ4"] {
        out.push(group(spec));
    }
    out
}

fn invariance_and_equivariance() -> Check {
    for g in small_groups() {
        let auts = if g.is_cyclic() { automorphisms(&g).map_err(err)? } else { vec![] };
        for x in 0..1u64 << g.order() {
            let s = SpinConfig::from_mask(&g, x);
            let a = correlate_fast(&s);
            ensure!(a == correlate(&s), "{g} {s}: fast path disagrees");
            for e in SymElement::all(&g) {
                ensure!(correlate_fast(&act_phi(e, &s).map_err(err)?) == a, "{g} {s} {e:?}");
            }
            for phi in &auts {
                let lhs = correlate_fast(&act_psi_config(phi, &s).map_err(err)?);
                ensure!(lhs == act_psi_corr(phi, &a).map_err(err)?, "{g} {s}: Ψ equivariance");
            }
        }
    }
    Ok(())
}

fn laplacian_properties() -> Check {
    for n in 2..=14 {
        for x in 0..1u64 << n {
            let s = SpinConfig::from_mask(&z(n), x);
            let lap = laplacian(&correlate_fast(&s)).map_err(err)?;
            let b = blocks_of(&s).map_err(err)?;
            let k = b.k() as i64;
            ensure!(delta_from_profile(&b).to_vector() == lap, "N={n} {s}: block formula");
            ensure!(lap[0] == -2 * k, "N={n} {s}: value at 0 is {}", lap[0]);
            let l1: i64 = lap.iter().map(|v| v.abs()).sum();
            ensure!(4 * k <= l1 && l1 <= 4 * k * k && l1 % 4 == 0, "N={n} {s}: ℓ¹ norm {l1}");
            if k > 0 {
                let smallest = *b.lengths().iter().min().unwrap();
                let first = (1..n).find(|&t| lap[t] != 0).unwrap();
                let mult = b.lengths().iter().filter(|&&m| m == smallest).count() as i64;
                ensure!(first == smallest && lap[first] == mult, "N={n} {s}: minimal block");
            }
        }
    }
    for n in 2..=14 {
        let image = image_with_counts(&z(n), &opts()).map_err(err)?;
        let distinct: HashSet<Vec<i64>> = image.iter().map(|(a, _)| laplacian(a).unwrap()).collect();
        ensure!(distinct.len() == image.len(), "N={n}: Laplacian not injective on image");
    }
    Ok(())
}

fn msd_below_average() -> Check {
    let mut groups: Vec<GroupSpec> = (2..=16).map(z).collect();
    for spec in ["Z2xZ2", "Z2xZ4", "Z4xZ4", "Z2xZ2xZ2xZ2", "Z3xZ3", "Z2xZ6"] {
        groups.push(group(spec));
    }
    for g in groups {
        let row = msd(&g, &opts()).map_err(err)?;
        ensure!(row.msd <= row.avg_dstab, "{g}: msd {} > avg {}", row.msd, row.avg_dstab);
    }
    Ok(())
}

fn exterior_field_halving() -> Check {
    for g in small_groups() {
        let table = ImageTable::build(&g, &opts()).map_err(err)?;
        for x in 0..1u64 << g.order() {
            let s = SpinConfig::from_mask(&g, x);
            let ext = d_stab_extended(&s, &opts()).map_err(err)?;
            let stab = table.fiber_size(x);
            let want = if s.magnetization() == 0 { stab } else { stab / 2 };
            ensure!(ext == want, "{g} {s}: {ext} vs {want}");
        }
    }
    Ok(())
}

fn products() -> Check {
    for (n1, n2) in [(2usize, 3usize), (3, 4), (2, 5), (4, 3), (2, 2), (3, 3)] {
        for x1 in 0..1u64 << n1 {
            for x2 in 0..1u64 << n2 {
                let s1 = SpinConfig::from_mask(&z(n1), x1);
                let s2 = SpinConfig::from_mask(&z(n2), x2);
                let p = product_config(&s1, &s2);
                let (a1, a2, a) = (correlate_fast(&s1), correlate_fast(&s2), correlate_fast(&p));
                for i in 0..n1 * n2 {
                    ensure!(a.get(i) == a1.get(i / n2) * a2.get(i % n2), "{s1} ⊗ {s2} at {i}");
                }
                let (d1, d2, d) = (d_sym(&s1), d_sym(&s2), d_sym(&p));
                ensure!(4 * d >= d1 * d2 && d <= d1 * d2, "{s1} ⊗ {s2}: d_sym {d} vs {d1}·{d2}");
            }
        }
    }
    Ok(())
}

fn pullback() -> Check {
    let cases: [(&str, &[usize]); 6] = [
        ("Z12", &[4]),
        ("Z12", &[3]),
        ("Z12", &[6]),
        ("Z2xZ4", &[1, 2]),
        ("Z2xZ6", &[0, 3]),
        ("Z4xZ4", &[2, 2]),
    ];
    for (spec, generator) in cases {
        let g = group(spec);
        let pi = quotient_map(&g, &[g.element(generator).map_err(err)?]).map_err(err)?;
        let u = pi.kernel_order() as i64;
        for y in 0..1u64 << pi.target().order() {
            let tau = SpinConfig::from_mask(pi.target(), y);
            let sigma = periodic_lift(&tau, &pi).map_err(err)?;
            let (a, b) = (correlate_fast(&sigma), correlate_fast(&tau));
            for x in 0..g.order() {
                ensure!(a.get(x) == u * b.get(pi.apply_index(x)), "{spec} {tau} at {x}");
            }
        }
    }
    Ok(())
}

fn fourier_positivity() -> Check {
    for g in small_groups() {
        for x in 0..1u64 << g.order() {
            let s = SpinConfig::from_mask(&g, x);
            let c = fourier_power_check(&s);
            ensure!(c.is_nonnegative(1e-9), "{g} {s}: {c:?}");
        }
    }
    Ok(())
}

fn random_block(rng: &mut Pcg32) -> Vec<i8> {
    let len = rng.gen_range(1..=6);
    (0..len).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect()
}

fn random_words() -> Check {
    let mut checked = 0;
    for seed in 0u64.. {
        if checked == 500 {
            break;
        }
        let mut rng = Pcg32::seed_from_u64(seed);
        let (u, v) = (random_block(&mut rng), random_block(&mut rng));
        let len = rng.gen_range(1..=7);
        let letters = (0..len).map(|_| if rng.gen_bool(0.5) { Letter::U } else { Letter::V }).collect();
        let w = SubstitutionWord::new(letters, u, v).map_err(err)?;
        if w.flat_len() < 2 {
            continue;
        }
        let r = verify_reversal_identity(&w).map_err(err)?;
        ensure!(r.equal && correlate(&r.sigma) == correlate(&r.tau), "seed {seed}: {w}");
        checked += 1;
    }
    Ok(())
}

/// Block lengths with distinct subset sums: rejection sampling first, superincreasing fallback.
fn injective_profile(rng: &mut Pcg32) -> BlockProfile {
    let k = rng.gen_range(1..=4);
    for _ in 0..200 {
        let lengths: Vec<usize> = (0..2 * k).map(|_| rng.gen_range(1..=48)).collect();
        let p = BlockProfile::new(lengths).unwrap();
        if subset_sum_injective(&p) {
            return p;
        }
    }
    let mut lengths = Vec::with_capacity(2 * k);
    let mut total = 0;
    for _ in 0..2 * k {
        let next = total + rng.gen_range(1..=3);
        lengths.push(next);
        total += next;
    }
    lengths.shuffle(rng);
    BlockProfile::new(lengths).unwrap()
}

fn unique_reconstruction() -> Check {
    for seed in 0..200u64 {
        let mut rng = Pcg32::seed_from_u64(seed);
        let p = injective_profile(&mut rng);
        ensure!(subset_sum_injective(&p), "seed {seed}: generator failed");
        let delta = delta_from_profile(&p);
        let k = p.k() as i64;
        ensure!(delta.l1_norm() == 4 * k * k, "seed {seed}: cancellation in {:?}", p.lengths());
        let found = reconstruct_from_delta(&delta, p.n()).map_err(err)?;
        ensure!(found == vec![p.canonical()], "seed {seed}: {:?} gave {found:?}", p.lengths());
    }
    Ok(())
}

fn determinism() -> Check {
    let render = |partitions: usize| -> Result<String, String> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(partitions).build().map_err(|e| e.to_string())?;
        pool.install(|| {
            let o = SearchOptions::with_partitions(partitions);
            let mut text = String::new();
            for n in 2..=16 {
                text += &survey_csv(&survey(&z(n), Rational::from_integer(1), &o).map_err(err)?);
            }
            for spec in ["Z2xZ6", "Z4xZ4"] {
                text += &survey_csv(&survey(&group(spec), Rational::from_integer(1), &o).map_err(err)?);
            }
            let rows = (2..=16).map(|n| msd(&z(n), &o)).collect::<Result<Vec<_>, _>>().map_err(err)?;
            Ok(text + &msd_csv(&rows))
        })
    };
    let one = render(1)?;
    for p in [2, 8] {
        ensure!(render(p)? == one, "output with {p} partitions differs");
    }
    Ok(())
}

/// Average d_sym / 4N rises toward 1 along each parity class; even N dips below N − 1.
fn asymptotic_trends() -> Check {
    let ratios: Vec<(usize, _)> = (9..=19)
        .map(|n| Ok((n, average_dsym(&z(n), &opts()).map_err(err)? / (4 * n as i128))))
        .collect::<Result<_, String>>()?;
    for &(n, r) in &ratios {
        ensure!(r <= 1.into(), "N={n}: ratio {r} above 1");
    }
    for w in ratios.windows(3) {
        let ((n, a), (_, b), (_, c)) = (w[0], w[1], w[2]);
        ensure!(c > a, "ratio not increasing from N={n} to N={}: {a} -> {c}", n + 2);
        ensure!(if n % 2 == 1 { b < a } else { b > a }, "parity pattern broken at N={}", n + 1);
    }
    for q in (2u64..=1000).filter(|&q| is_prime(q)) {
        let n = (q * q + q + 1) as f64;
        let bound = singer_stable_bound(q).map_err(err)? as f64;
        ensure!(bound >= n * n / (3.0 * n.ln().ln()), "q={q}: {bound}");
    }
    Ok(())
}

struct Criterion {
    name: &'static str,
    limit: Duration,
    run: fn() -> Check,
}

const MINUTE: u64 = 60;

fn criteria() -> Vec<Criterion> {
    let c = |name, secs, run| Criterion {
        name,
        limit: Duration::from_secs(secs),
        run,
    };
    vec![
        c("N=7 Legendre correlation, d_sym = d_stab = 28", 1, legendre_seven),
        c("N=13 Singer configuration, d_stab = 104 = bound", 1, singer_thirteen),
        c("Survey: rigid for N <= 11, doubled orbit at N = 12", 30, survey_exceptions),
        c("N=14 pair: equal A, d_stab 112, outside joint orbit", 5, pair_fourteen),
        c("N=16: d_stab 192, four Aut images of A", 60, config_sixteen),
        c("Word UVUUVVV: correlation, reversal, Ψ_10 translate", 5, word_reversal),
        c("Reduced perfect difference set counts 2, 4, 2", 60, reduced_counts),
        c("Four-block rigidity for N <= 14", 10 * MINUTE, four_block_rigidity),
        c("Properties: Φ-invariance and Ψ-equivariance, |F| <= 12", 2 * MINUTE, invariance_and_equivariance),
        c("Properties: Laplacian block formula, ℓ¹ bounds, injectivity", 2 * MINUTE, laplacian_properties),
        c("Properties: MSD <= average d_stab", MINUTE, msd_below_average),
        c("Properties: exterior-field halving, |F| <= 12", MINUTE, exterior_field_halving),
        c("Properties: product multiplicativity and d_sym bounds", MINUTE, products),
        c("Properties: pull-back relation", MINUTE, pullback),
        c("Properties: Fourier positivity within 1e-9", MINUTE, fourier_positivity),
        c("Properties: reversal identity on 500 seeded words", MINUTE, random_words),
        c("Properties: unique reconstruction of 200 injective profiles", 2 * MINUTE, unique_reconstruction),
        c("Determinism across 1, 2 and 8 partitions", 2 * MINUTE, determinism),
        c("Asymptotic statements: monotone trend and per-q inequality", 2 * MINUTE, asymptotic_trends),
    ]
}

fn main() -> ExitCode {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failures = 0;
    let mut total = Duration::ZERO;
    for c in criteria() {
        if !filter.is_empty() && !filter.iter().any(|f| c.name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        total += elapsed;
        let outcome = outcome.and_then(|()| {
            if elapsed <= c.limit {
                Ok(())
            } else {
                Err(format!("took {elapsed:.2?}, limit {:?}", c.limit))
            }
        });
        match outcome {
            Ok(()) => println!("PASS  {}  ({elapsed:.2?})", c.name),
            Err(reason) => {
                failures += 1;
                println!("FAIL  {}  ({elapsed:.2?}): {reason}", c.name);
            }
        }
    }
    println!("{failures} failed, total {total:.2?}");
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
