//! Command-line front end: build a sentence universe, iterate the
//! grounding operator to its least fixed point, classify sentences,
//! trace operator rounds, run the conformance verifier, and
//! re-serialize artifacts. All outputs are plain sorted text so runs
//! diff cleanly; identical inputs give byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use grounded_core::base_lang::BaseConfig;
use grounded_core::classifier::{classify, Verdict};
use grounded_core::fixpoint::{export_fixpoint_trace, is_consistent, lfp_with};
use grounded_core::operator::{export_operator_trace, TruthOperator};
use grounded_core::syntax::{code_of, parse, render};
use grounded_core::universe::{
    export_codeset, export_universe, parse_codeset, parse_universe_export, BuildParams, CodeSet,
    Universe, DEFAULT_BUDGET,
};
use grounded_core::verifier::{
    oracle_classify, sample_consistent, verify_consistency_preservation, verify_disjointness,
    verify_rules, ALL_RULES,
};

#[derive(Parser)]
#[command(
    name = "grounded",
    about = "Truth-predicate engine over finite sentence universes",
    version
)]
struct Cli {
    /// Thread count for the operator's rule scans (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct UniverseOpts {
    /// File of base-language seed sentences, one per line.
    #[arg(long)]
    seeds: Option<PathBuf>,

    /// Total connective-closure depth (at least 1).
    #[arg(long, default_value_t = 1)]
    depth: u32,

    /// Closure depth of the seed layer that receives truth atoms.
    #[arg(long = "t-depth", default_value_t = 0)]
    t_depth: u32,

    /// Largest numeral admitted in seed sentences.
    #[arg(long = "numeric-bound", default_value_t = 16)]
    numeric_bound: u64,

    /// Hard cap on universe size.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Args, Clone)]
struct OutDir {
    /// Output directory for artifact files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the universe and write universe.tsv and w.txt.
    Build {
        #[command(flatten)]
        universe: UniverseOpts,
        #[command(flatten)]
        out: OutDir,
    },
    /// Iterate the operator from a seed to its fixed point; write the
    /// final code set and the stage trace.
    Fixpoint {
        #[command(flatten)]
        universe: UniverseOpts,
        /// Seed: `empty`, `W`, or a code-set file.
        #[arg(long, default_value = "empty")]
        seed: String,
        #[command(flatten)]
        out: OutDir,
    },
    /// Classify one sentence at the fixed point of the given seed.
    Classify {
        #[command(flatten)]
        universe: UniverseOpts,
        #[arg(long, default_value = "empty")]
        seed: String,
        /// Sentence text, e.g. `T(12)` or `(0=0 | Ax T(x))`.
        sentence: String,
    },
    /// Print per-round operator additions for G(U).
    Trace {
        #[command(flatten)]
        universe: UniverseOpts,
        /// The set U: `empty`, `W`, or a code-set file.
        #[arg(long = "u", default_value = "empty")]
        u_set: String,
        #[command(flatten)]
        out: OutDir,
    },
    /// Run the conformance suite: rule biconditionals, the independent
    /// closure oracle, and the order-theoretic checks.
    Verify {
        #[command(flatten)]
        universe: UniverseOpts,
        /// Random consistent sets per deliberate case.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long = "rng-seed", default_value_t = 0)]
        rng_seed: u64,
    },
    /// Re-serialize an artifact file in canonical form.
    Export {
        /// Artifact kind: `universe`, `codeset`, or `trace`.
        #[arg(long)]
        kind: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out-file")]
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn build_universe_from(opts: &UniverseOpts) -> Result<Universe> {
    let mut cfg = BaseConfig {
        numeric_bound: opts.numeric_bound,
        ..BaseConfig::default()
    };
    if let Some(path) = &opts.seeds {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading seeds from {}", path.display()))?;
        cfg.seed_sentences = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(String::from)
            .collect();
    }
    let params = BuildParams {
        base: cfg,
        depth: opts.depth,
        t_depth: opts.t_depth,
        budget: opts.budget,
    };
    Ok(Universe::build(params)?)
}

fn resolve_seed(u: &Universe, spec: &str) -> Result<CodeSet> {
    match spec {
        "empty" => Ok(CodeSet::new()),
        "W" | "w" => Ok(u.w().clone()),
        path => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading code set from {path}"))?;
            let set = parse_codeset(&text)?;
            for code in &set {
                if !u.contains_code(code) {
                    bail!("code {code} is not assigned in this universe");
                }
            }
            Ok(set)
        }
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)
        .with_context(|| format!("creating output directory {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Build { universe, out } => {
            let u = build_universe_from(&universe)?;
            let stats = u.stats();
            let p1 = write_file(&out.out, "universe.tsv", &export_universe(&u))?;
            let p2 = write_file(&out.out, "w.txt", &export_codeset(u.w()))?;
            println!(
                "universe: {} sentences (seed layer {}, atom layer {}); |W| = {}",
                u.len(),
                stats.seed_layer,
                stats.atom_layer,
                u.w().len()
            );
            println!("wrote {}", p1.display());
            println!("wrote {}", p2.display());
            Ok(())
        }
        Cmd::Fixpoint {
            universe,
            seed,
            out,
        } => {
            let u = build_universe_from(&universe)?;
            let op = TruthOperator::new(&u);
            let seed_set = resolve_seed(&u, &seed)?;
            let trace = lfp_with(&op, &seed_set)?;
            let p1 = write_file(&out.out, "fixpoint.txt", &export_codeset(&trace.final_set))?;
            let p2 = write_file(
                &out.out,
                "fixpoint_trace.tsv",
                &export_fixpoint_trace(&trace),
            )?;
            println!(
                "fixed point: {} codes after {} stages",
                trace.final_set.len(),
                trace.stages.len()
            );
            println!("wrote {}", p1.display());
            println!("wrote {}", p2.display());
            Ok(())
        }
        Cmd::Classify {
            universe,
            seed,
            sentence,
        } => {
            let u = build_universe_from(&universe)?;
            let op = TruthOperator::new(&u);
            let seed_set = resolve_seed(&u, &seed)?;
            let fixed = lfp_with(&op, &seed_set)?.final_set;
            let r = op.g(&fixed);
            let s = parse(&sentence)?;
            let verdict = classify(&s, &r, &u)?;
            println!("{verdict}");
            let code = code_of(&s);
            match verdict {
                Verdict::True => println!("#[{}] = {} in G(U)", render(&s), code),
                Verdict::False => {
                    let neg = grounded_core::syntax::not(s.clone());
                    println!(
                        "#[{}] = {} in G(U), so {} in F(U)",
                        render(&neg),
                        code_of(&neg),
                        code
                    );
                }
                Verdict::Undefined => {
                    println!("{code} is in neither G(U) nor F(U)");
                }
            }
            Ok(())
        }
        Cmd::Trace {
            universe,
            u_set,
            out,
        } => {
            let u = build_universe_from(&universe)?;
            let op = TruthOperator::new(&u);
            let set = resolve_seed(&u, &u_set)?;
            let r = op.g_traced(&set);
            let text = export_operator_trace(&r);
            print!("{text}");
            let p = write_file(&out.out, "operator_trace.tsv", &text)?;
            eprintln!(
                "G(U): {} codes, F(U): {} codes, {} rounds; wrote {}",
                r.g.len(),
                r.f.len(),
                r.rounds,
                p.display()
            );
            Ok(())
        }
        Cmd::Verify {
            universe,
            samples,
            rng_seed,
        } => {
            let u = build_universe_from(&universe)?;
            let op = TruthOperator::new(&u);
            let fixed = lfp_with(&op, &CodeSet::new())?.final_set;

            let mut sets: Vec<(String, CodeSet)> = vec![
                ("empty".into(), CodeSet::new()),
                ("W".into(), u.w().clone()),
                ("lfp(empty)".into(), fixed),
            ];
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(rng_seed);
            for k in 0..samples {
                sets.push((format!("sample {k}"), sample_consistent(&u, &mut rng, 48)));
            }

            let mut failures = 0usize;
            for (name, set) in &sets {
                let report = verify_rules(set, &u);
                let r = op.g(set);
                let (og, of) = oracle_classify(&u, set);
                let oracle_ok = r.g == og && r.f == of;
                let lemmas_ok = is_consistent(set, &u)
                    && verify_disjointness(set, &u)?
                    && verify_consistency_preservation(set, &u)?;
                println!(
                    "== U = {name}: rules {}, oracle {}, lemmas {}",
                    if report.passed() { "pass" } else { "FAIL" },
                    if oracle_ok { "pass" } else { "FAIL" },
                    if lemmas_ok { "pass" } else { "FAIL" },
                );
                print!("{}", report.render_machine());
                if !report.passed() {
                    print!("{}", report.render_table());
                }
                if !(report.passed() && oracle_ok && lemmas_ok) {
                    failures += 1;
                }
            }
            println!(
                "verified {} rule biconditionals on {} sets: {}",
                ALL_RULES.len(),
                sets.len(),
                if failures == 0 {
                    "all pass"
                } else {
                    "FAILURES"
                }
            );
            if failures > 0 {
                bail!("{failures} verification case(s) failed");
            }
            Ok(())
        }
        Cmd::Export {
            kind,
            input,
            output,
        } => {
            let text = fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let canonical = match kind.as_str() {
                "universe" => export_universe(&parse_universe_export(&text)?),
                "codeset" => export_codeset(&parse_codeset(&text)?),
                "trace" => canonicalize_trace(&text)?,
                "fixpoint-trace" => canonicalize_fixpoint_trace(&text)?,
                other => {
                    bail!("unknown artifact kind `{other}` (universe|codeset|trace|fixpoint-trace)")
                }
            };
            fs::write(&output, canonical)
                .with_context(|| format!("writing {}", output.display()))?;
            println!("wrote {}", output.display());
            Ok(())
        }
    }
}

/// Stage-trace lines are `stage<TAB>origin<TAB>codes`; canonical form
/// keeps stage order, sorts each stage's codes, and strips blank lines.
fn canonicalize_fixpoint_trace(text: &str) -> Result<String> {
    let mut out = String::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = || anyhow!("line {}: expected stage<TAB>origin<TAB>codes", lineno + 1);
        let mut parts = line.split('\t');
        let stage: u64 = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(parse_err)?;
        let origin = parts.next().ok_or_else(parse_err)?;
        if !matches!(origin, "seed" | "G-step" | "limit-union") {
            return Err(parse_err());
        }
        let codes_txt = parts.next().ok_or_else(parse_err)?;
        let mut codes = Vec::new();
        for c in codes_txt.split(',').filter(|c| !c.is_empty()) {
            codes.push(grounded_core::GodelNumber::from_decimal(c).ok_or_else(parse_err)?);
        }
        codes.sort();
        let rendered: Vec<String> = codes.iter().map(ToString::to_string).collect();
        out.push_str(&format!("{stage}\t{origin}\t{}\n", rendered.join(",")));
    }
    Ok(out)
}

/// Trace lines are `round<TAB>rule<TAB>code`; canonical form sorts by
/// (round, rule, code) and strips blank lines.
fn canonicalize_trace(text: &str) -> Result<String> {
    let mut rows: Vec<(u64, u8, grounded_core::GodelNumber)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split('\t');
        let (round, rule, code) = (
            parts.next().unwrap_or_default(),
            parts.next().unwrap_or_default(),
            parts.next().unwrap_or_default(),
        );
        let parse_err = || anyhow!("line {}: expected round<TAB>rule<TAB>code", lineno + 1);
        let round: u64 = round.parse().map_err(|_| parse_err())?;
        let rule: u8 = rule.parse().map_err(|_| parse_err())?;
        let code = grounded_core::GodelNumber::from_decimal(code).ok_or_else(parse_err)?;
        rows.push((round, rule, code));
    }
    rows.sort();
    let mut out = String::new();
    for (round, rule, code) in rows {
        out.push_str(&format!("{round}\t{rule}\t{code}\n"));
    }
    Ok(out)
}
