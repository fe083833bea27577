use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use isingdeg::blocks::{delta_of, verify_four_block_rigidity};
use isingdeg::constructions::singer_stable_bound;
use isingdeg::degeneracy::{generic_j_probe, j_degeneracy, msd_csv, survey_csv, DEFAULT_BOUND};
use isingdeg::exact::{parse_rational, render, Rational};
use isingdeg::field::prime_power;
use isingdeg::golden::run_reference_checks;
use isingdeg::{
    blocks_of, correlate_fast, d_stab, d_sym, fiber, legendre_config, msd, reconstruct_from_delta,
    reduced_difference_sets, singer_difference_set, survey, verify_reversal_identity, Error, GroupSpec,
    Interaction, SearchOptions, SignedMultiset, SpinConfig, SubstitutionWord,
};

#[derive(Parser)]
#[command(name = "isingdeg", version, about = "Stable and symmetry-induced degeneracies of Ising configurations")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Group such as `Z13` or `Z2xZ6`.
    #[arg(long, global = true)]
    group: Option<String>,
    /// Configuration as a `+/-` string.
    #[arg(long, global = true)]
    config: Option<String>,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Smallest D_stab / D_sym ratio reported by `survey`.
    #[arg(long, global = true, default_value = "1")]
    min_ratio: String,
    /// Worker threads and partition count for exhaustive searches.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest group order enumerated exhaustively.
    #[arg(long, global = true, default_value_t = DEFAULT_BOUND)]
    bound: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Correlation vector A(σ) as JSON.
    Correlate,
    /// Size of the symmetry orbit.
    Dsym,
    /// Size of the correlation fiber.
    Dstab,
    /// All configurations sharing A(σ), as JSON.
    Fiber,
    /// Degeneracy under one interaction, or a seeded random probe.
    Jdeg {
        /// Comma separated exact values `j_f`, e.g. `0,1,1/2,1`.
        #[arg(long, allow_hyphen_values = true)]
        j: Option<String>,
        #[arg(long, conflicts_with = "j")]
        trials: Option<u64>,
    },
    /// CSV of Φ-orbits whose ratio reaches `--min-ratio`.
    Survey,
    /// CSV of mean stable degeneracy for cyclic groups.
    Msd {
        #[arg(long, default_value_t = 2)]
        nmin: usize,
        #[arg(long)]
        nmax: usize,
    },
    /// Legendre-symbol configuration for an odd prime.
    Legendre {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        sign: i8,
    },
    /// Singer perfect difference set for a prime power `q`.
    Singer {
        #[arg(long)]
        q: u64,
    },
    /// All reduced perfect difference sets for `q`.
    PdsReduced {
        #[arg(long)]
        q: u64,
    },
    /// Flatten a word over U, V and compare with its reversal.
    Substitute {
        #[arg(long = "U", allow_hyphen_values = true)]
        u: String,
        #[arg(long = "V", allow_hyphen_values = true)]
        v: String,
        #[arg(long)]
        word: String,
    },
    /// Block profile and Laplacian of a cyclic configuration.
    Blocks,
    /// Block profiles with a given Laplacian.
    Reconstruct {
        /// Signed multiset `[[t, c], ...]`; `N` defaults to the largest `t`.
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Brute-force check that configurations with at most four blocks are rigid.
    FourBlockVerify {
        #[arg(long, default_value_t = 2)]
        nmin: usize,
        #[arg(long, default_value_t = 14)]
        nmax: usize,
    },
    /// Reproduce every reference value and report pass/fail.
    VerifyPaper {
        #[arg(long, hide = true)]
        perturb: Option<String>,
    },
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

impl Global {
    fn options(&self) -> SearchOptions {
        let mut opts = SearchOptions::default();
        opts.bound = self.bound;
        if let Some(t) = self.threads {
            opts.partitions = t.max(1);
        }
        opts
    }

    fn group(&self) -> Result<GroupSpec, Failure> {
        let text = self.group.as_deref().ok_or_else(|| Failure::Usage("--group is required".into()))?;
        Ok(text.parse()?)
    }

    fn config(&self) -> Result<SpinConfig, Failure> {
        let text = self.config.as_deref().ok_or_else(|| Failure::Usage("--config is required".into()))?;
        let group = match &self.group {
            Some(_) => self.group()?,
            None => GroupSpec::cyclic(text.trim().chars().count())?,
        };
        Ok(SpinConfig::parse(&group, text)?)
    }

    fn min_ratio(&self) -> Result<Rational, Failure> {
        Ok(parse_rational(&self.min_ratio)?)
    }
}

fn to_json(value: &impl serde::Serialize) -> String {
    serde_json::to_string(value).expect("serializable output")
}

fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    let opts = g.options();
    let out = match &cli.command {
        Command::Correlate => to_json(&correlate_fast(&g.config()?).values()),
        Command::Dsym => d_sym(&g.config()?).to_string(),
        Command::Dstab => d_stab(&g.config()?, &opts)?.to_string(),
        Command::Fiber => {
            let members: Vec<String> = fiber(&g.config()?, &opts)?.iter().map(|s| s.to_string()).collect();
            to_json(&members)
        }
        Command::Jdeg { j, trials } => {
            let sigma = g.config()?;
            match (j, trials) {
                (Some(j), _) => {
                    let j = Interaction::parse(sigma.group(), j)?;
                    j_degeneracy(&sigma, &j, &opts)?.to_string()
                }
                (None, Some(t)) => {
                    let r = generic_j_probe(&sigma, *t, g.seed, &opts)?;
                    to_json(&json!({
                        "trials": r.trials,
                        "matches": r.matches,
                        "fraction": render(&r.fraction),
                        "d_stab": r.d_stab,
                        "bounded_below": r.bounded_below,
                    }))
                }
                (None, None) => return Err(Failure::Usage("jdeg needs --j or --trials".into())),
            }
        }
        Command::Survey => survey_csv(&survey(&g.group()?, g.min_ratio()?, &opts)?),
        Command::Msd { nmin, nmax } => {
            if nmin < &2 || nmin > nmax {
                return Err(Failure::Usage(format!("need 2 <= nmin <= nmax, got {nmin}..{nmax}")));
            }
            let rows = (*nmin..=*nmax)
                .map(|n| msd(&GroupSpec::cyclic(n)?, &opts))
                .collect::<Result<Vec<_>, _>>()?;
            msd_csv(&rows)
        }
        Command::Legendre { p, sign } => {
            if sign.abs() != 1 {
                return Err(Failure::Usage(format!("sign must be 1 or -1, got {sign}")));
            }
            let sigma = legendre_config(*p, *sign)?;
            to_json(&json!({
                "config": sigma.to_string(),
                "correlation": correlate_fast(&sigma).values(),
            }))
        }
        Command::Singer { q } => {
            let (p, n) = prime_power(*q).ok_or(Error::NotPrimePower(*q))?;
            let s = singer_difference_set(p, n, None)?;
            to_json(&json!({
                "q": s.q,
                "N": s.set.modulus,
                "cubic": s.cubic.describe(&s.field),
                "set": s.set.members,
                "config": s.set.config()?.to_string(),
                "stable_bound": singer_stable_bound(*q)?,
            }))
        }
        Command::PdsReduced { q } => {
            let sets: Vec<Vec<usize>> = reduced_difference_sets(*q)?.into_iter().map(|d| d.members).collect();
            to_json(&sets)
        }
        Command::Substitute { u, v, word } => {
            let w = SubstitutionWord::parse(word, u, v)?;
            let r = verify_reversal_identity(&w)?;
            to_json(&json!({
                "sigma": r.sigma.to_string(),
                "tau": r.tau.to_string(),
                "correlation": r.corr_word.values(),
                "correlation_reversed": r.corr_reversed.values(),
                "equal": r.equal,
                "same_phi_orbit": r.same_phi_orbit,
            }))
        }
        Command::Blocks => {
            let sigma = g.config()?;
            let profile = blocks_of(&sigma)?;
            let delta = delta_of(&sigma)?;
            to_json(&json!({
                "blocks": profile.lengths(),
                "k": profile.k(),
                "multiset": profile.length_multiset(),
                "delta": delta,
            }))
        }
        Command::Reconstruct { delta, n } => {
            let delta = match (delta, &g.config) {
                (Some(text), _) => {
                    let parsed: SignedMultiset = serde_json::from_str(text)
                        .map_err(|e| Failure::Usage(format!("bad --delta: {e}")))?;
                    match n {
                        Some(n) => SignedMultiset::from_entries(*n, parsed.entries().to_vec())?,
                        None => parsed,
                    }
                }
                (None, Some(_)) => delta_of(&g.config()?)?,
                (None, None) => return Err(Failure::Usage("reconstruct needs --delta or --config".into())),
            };
            let found = match reconstruct_from_delta(&delta, delta.n()) {
                Err(Error::NoProfile) => Vec::new(),
                other => other?,
            };
            let profiles: Vec<&[usize]> = found.iter().map(|p| p.lengths()).collect();
            to_json(&profiles)
        }
        Command::FourBlockVerify { nmin, nmax } => {
            let mut lines = vec!["N,configurations,orbits,rigid".to_string()];
            let mut violations = Vec::new();
            for n in (*nmin).max(2)..=*nmax {
                let r = verify_four_block_rigidity(n, &opts)?;
                lines.push(format!("{},{},{},{}", r.n, r.configurations, r.orbits, r.rigid));
                violations.extend(r.violations);
            }
            let text = lines.join("\n") + "\n";
            if !violations.is_empty() {
                return Err(Failure::Verification(text + &violations.join("\n")));
            }
            text
        }
        Command::VerifyPaper { perturb } => {
            let checks = run_reference_checks(&opts, perturb.as_deref())?;
            let text: String = checks
                .iter()
                .map(|c| {
                    let status = if c.passed { "PASS" } else { "FAIL" };
                    format!("{status} {} expected={} actual={}\n", c.name, c.expected, c.actual)
                })
                .collect();
            if checks.iter().any(|c| !c.passed) {
                return Err(Failure::Verification(text));
            }
            text
        }
    };
    Ok(if out.ends_with('\n') { out } else { out + "\n" })
}

fn emit(global: &Global, text: &str) -> Result<(), String> {
    match &global.out {
        Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(text) => match emit(&cli.global, &text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(report)) => {
            let _ = emit(&cli.global, &report);
            eprintln!("verification failed");
            ExitCode::from(1)
        }
    }
}
