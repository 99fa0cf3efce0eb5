//! Subcommands of the `maj` binary.
//!
//! [`run`] parses arguments, executes one subcommand and returns the
//! process exit code. Reports go to `out`, diagnostics to `err`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use maj_core::analysis::{
    cohesion_check, exact_success_probability, expectation_x_closed, expectation_xy_bruteforce, markov_bound_check,
    nonlosing_components, parity_classification, BoundCheck, Cohesion, ComponentReport, ExactRational, ParityReport,
    EXPECTATION_CAP, HYPERCUBE_CAP,
};
use maj_core::gadgets::{anscombe_gadget, cyclic_profile, lift_una_to_wot, reduce_independent_set, Graph, Parity};
use maj_core::ilp::{build_una_ilp, build_wot_ilp, enumerate_feasible, export_lp, IlpModel, DEFAULT_CELL_CAP};
use maj_core::solvers::{brute_solve, default_max_rounds, find_with_weight_at_least, Requirement, BRUTE_FORCE_CAP};
use maj_core::{
    denormalize_policy, derandomized_solve, iwm, normalize, randomized_solve, Enumeration, Error, Policy, Profile,
    SolveReport, Tally, Verdict,
};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_LOSING: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_CONTRACT: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "maj",
    version,
    about = "Majority-robust policy proposals for binary approval profiles"
)]
pub struct Cli {
    /// Worker threads for exhaustive enumerations (results do not depend on it).
    #[arg(long, env = "MAJ_THREADS", global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Randomized,
    Derandomized,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Anscombe,
    Cyclic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Analysis {
    Expectations,
    Components,
    Cohesion,
    Parity,
    SuccessProb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Una,
    Wot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelFormat {
    Lp,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Issue-wise majority, column margins and normalization mask.
    Iwm {
        profile: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Find a non-losing policy agreeing with the majority on most issues.
    Solve {
        profile: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Drawn from OS entropy when absent; always echoed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_rounds: Option<u64>,
        /// Largest issue count the brute-force method accepts.
        #[arg(long, default_value_t = BRUTE_FORCE_CAP)]
        brute_cap: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Tally a policy against a profile.
    Verify {
        profile: PathBuf,
        policy: String,
        #[command(flatten)]
        output: Output,
    },
    /// Emit a built-in profile family.
    Gadget {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduce an independent-set instance to a profile.
    Reduce {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        /// Force the voter count to this parity.
        #[arg(long, value_enum)]
        parity: Option<ParityArg>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the column-role JSON. Defaults to `<out>.json` when `--out` is given.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Append copies of the tightness gadget below a normalized profile.
    Lift {
        profile: PathBuf,
        /// Number of gadget copies; defaults to the voter count.
        #[arg(long)]
        copies: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact structural reports.
    Analyze {
        profile: PathBuf,
        #[arg(long, value_enum)]
        what: Analysis,
        /// Restrict success-prob to one weight.
        #[arg(long)]
        k: Option<usize>,
        /// Largest issue count for the exhaustive reports.
        #[arg(long)]
        cap: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Export an integer program for a target agreement count.
    Ilp {
        profile: PathBuf,
        #[arg(long, value_enum)]
        variant: Variant,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = ModelFormat::Lp)]
        format: ModelFormat,
        /// Ask for exactly k agreements instead of at least k.
        #[arg(long)]
        exact: bool,
        /// Solve the model by enumeration and compare with brute force.
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = DEFAULT_CELL_CAP)]
        cell_cap: u128,
        #[arg(long, default_value_t = BRUTE_FORCE_CAP)]
        brute_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Resource { .. } => EXIT_RESOURCE,
            Error::Contract(_) => EXIT_CONTRACT,
            Error::Dimension { .. } | Error::Domain(_) | Error::Parse { .. } => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = std::result::Result<i32, Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

pub fn load_profile(path: &Path) -> std::result::Result<Profile, Failure> {
    Profile::parse_text(&read(path)?).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn emit(out: &mut dyn Write, text: &str) -> std::result::Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::input(format!("write failed: {e}")))
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> std::result::Result<(), Failure> {
    let s = serde_json::to_string_pretty(value).map_err(|e| Failure {
        code: EXIT_CONTRACT,
        message: e.to_string(),
    })?;
    emit(out, &s)?;
    emit(out, "\n")
}

fn enumeration(cap: usize, threads: Option<usize>) -> Enumeration {
    let cfg = Enumeration::with_cap(cap);
    if threads == Some(1) {
        cfg.sequential()
    } else {
        cfg.parallel()
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    configure_threads(cli.threads);
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Sizes the global rayon pool. Only the first call in a process takes
/// effect; results never depend on the pool size.
#[cfg(feature = "parallel")]
fn configure_threads(threads: Option<usize>) {
    if let Some(n) = threads.filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(_threads: Option<usize>) {}

/// Runs a parsed command line.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match &cli.command {
        Command::Iwm { profile, output } => {
            let report = cmd_iwm(&load_profile(profile)?);
            match output.format {
                Format::Json => emit_json(out, &report)?,
                Format::Text => emit(out, &report.to_text())?,
            }
            Ok(EXIT_OK)
        }
        Command::Solve {
            profile,
            method,
            seed,
            max_rounds,
            brute_cap,
            output,
        } => {
            let seed = seed.unwrap_or_else(rand::random);
            let report = cmd_solve(
                &load_profile(profile)?,
                *method,
                seed,
                *max_rounds,
                &enumeration(*brute_cap, cli.threads),
            )?;
            match output.format {
                Format::Json => emit_json(out, &report)?,
                Format::Text => emit(out, &report.to_text())?,
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            profile,
            policy,
            output,
        } => {
            let report = cmd_verify(&load_profile(profile)?, policy)?;
            match output.format {
                Format::Json => emit_json(out, &report)?,
                Format::Text => emit(out, &report.to_text())?,
            }
            Ok(if report.verdict == Verdict::Losing {
                EXIT_LOSING
            } else {
                EXIT_OK
            })
        }
        Command::Gadget { family, t, out: path } => {
            let p = cmd_gadget(*family, *t)?;
            write_or_print(path.as_deref(), &p.to_text(), out)?;
            Ok(EXIT_OK)
        }
        Command::Reduce {
            graph,
            k,
            parity,
            out: path,
            sidecar,
        } => {
            let g = Graph::parse_text(&read(graph)?)?;
            let (profile, json) = cmd_reduce(&g, *k, *parity)?;
            write_or_print(path.as_deref(), &profile.to_text(), out)?;
            let sidecar = sidecar
                .clone()
                .or_else(|| path.as_ref().map(|p| p.with_extension("json")));
            if let Some(s) = sidecar {
                write_file(&s, &json)?;
            }
            Ok(EXIT_OK)
        }
        Command::Lift {
            profile,
            copies,
            out: path,
        } => {
            let lifted = lift_una_to_wot(&load_profile(profile)?, *copies)?;
            write_or_print(path.as_deref(), &lifted.to_text(), out)?;
            Ok(EXIT_OK)
        }
        Command::Analyze {
            profile,
            what,
            k,
            cap,
            output,
        } => {
            let p = load_profile(profile)?;
            let default_cap = match what {
                Analysis::Components | Analysis::Parity => HYPERCUBE_CAP,
                _ => EXPECTATION_CAP,
            };
            let cfg = enumeration(cap.unwrap_or(default_cap), cli.threads);
            let report = cmd_analyze(&p, *what, *k, &cfg)?;
            match output.format {
                Format::Json => emit_json(out, &report)?,
                Format::Text => emit(out, &report.to_text())?,
            }
            Ok(EXIT_OK)
        }
        Command::Ilp {
            profile,
            variant,
            k,
            format,
            exact,
            check,
            cell_cap,
            brute_cap,
            out: path,
        } => {
            let p = load_profile(profile)?;
            let model = cmd_ilp(&p, *variant, *k, *exact);
            let text = match format {
                ModelFormat::Lp => export_lp(&model),
                ModelFormat::Json => {
                    let mut s = serde_json::to_string_pretty(&model).map_err(|e| Failure {
                        code: EXIT_CONTRACT,
                        message: e.to_string(),
                    })?;
                    s.push('\n');
                    s
                }
            };
            write_or_print(path.as_deref(), &text, out)?;
            if *check {
                let c = check_ilp(
                    &p,
                    &model,
                    *variant,
                    *k,
                    *exact,
                    *cell_cap,
                    &enumeration(*brute_cap, cli.threads),
                )?;
                let _ = writeln!(
                    err,
                    "check: model {}, oracle {}, {}",
                    if c.model_feasible { "feasible" } else { "infeasible" },
                    if c.oracle_feasible { "feasible" } else { "infeasible" },
                    if c.agrees() { "agree" } else { "DISAGREE" }
                );
                if !c.agrees() {
                    return Err(Failure {
                        code: EXIT_CONTRACT,
                        message: "integer program and brute force disagree".into(),
                    });
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn write_or_print(path: Option<&Path>, text: &str, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => write_file(p, text),
        None => emit(out, text),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IwmReport {
    pub voters: usize,
    pub issues: usize,
    pub iwm: Policy,
    /// Ones minus zeros per column of the input.
    pub margins: Vec<i64>,
    /// Total margin after normalization.
    pub delta: i64,
    pub normalization_mask: Policy,
}

impl IwmReport {
    pub fn to_text(&self) -> String {
        let margins: Vec<String> = self.margins.iter().map(i64::to_string).collect();
        format!(
            "iwm: {}\nmargins: {}\ndelta: {}\nnormalization_mask: {}\n",
            self.iwm,
            margins.join(" "),
            self.delta,
            self.normalization_mask
        )
    }
}

pub fn cmd_iwm(profile: &Profile) -> IwmReport {
    let record = normalize(profile);
    IwmReport {
        voters: profile.n(),
        issues: profile.t(),
        iwm: iwm(profile),
        margins: profile.column_margins(),
        delta: record.delta,
        normalization_mask: record.flipped,
    }
}

/// Solver output in the input's polarity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveOutput {
    pub report: SolveReport,
    pub normalization_mask: Policy,
    /// The run's seed, whether or not the chosen method consumed it.
    pub seed: u64,
}

impl SolveOutput {
    pub fn to_text(&self) -> String {
        let r = &self.report;
        let mut s = format!(
            "policy: {}\nagreements: {}\nbalance: {}\napprovals: {}\ndisapprovals: {}\nabstentions: {}\nmethod: {}\nseed: {}\n",
            r.policy,
            r.agreements,
            r.tally.balance,
            r.tally.approvals,
            r.tally.disapprovals,
            r.tally.abstentions,
            serde_json::to_value(r.method).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
            self.seed
        );
        if let Some(k) = r.rounds_used {
            s.push_str(&format!("rounds_used: {k}\n"));
        }
        if let Some(k) = r.k_star {
            s.push_str(&format!("k_star: {k}\n"));
        }
        s.push_str(&format!("normalization_mask: {}\n", self.normalization_mask));
        s
    }
}

pub fn cmd_solve(
    profile: &Profile,
    method: MethodArg,
    seed: u64,
    max_rounds: Option<u64>,
    brute_cfg: &Enumeration,
) -> std::result::Result<SolveOutput, Failure> {
    let record = normalize(profile);
    let norm = &record.normalized;
    let rounds = max_rounds.unwrap_or_else(|| default_max_rounds(norm));
    let mut report = match method {
        MethodArg::Brute => brute_solve(norm, brute_cfg)?
            .ok_or_else(|| Failure::from(Error::Contract("no non-losing policy exists".into())))?,
        MethodArg::Derandomized => derandomized_solve(norm)?,
        MethodArg::Randomized => randomized_solve(norm, seed, rounds)?.ok_or_else(|| Failure {
            code: EXIT_RESOURCE,
            message: format!("no winning policy within {rounds} rounds"),
        })?,
        MethodArg::Auto => {
            let sampled = if norm.t() % 2 == 1 && record.delta > 0 {
                randomized_solve(norm, seed, rounds)?
            } else {
                None
            };
            match sampled {
                Some(r) => r,
                None => derandomized_solve(norm)?,
            }
        }
    };
    report.policy = denormalize_policy(&report.policy, &record)?;
    report.verify(profile)?;
    let threshold = profile.t() / 2 + 1;
    if report.agreements < threshold || !report.tally.is_nonlosing() {
        return Err(Error::Contract(format!(
            "solver returned {} agreements with balance {}",
            report.agreements, report.tally.balance
        ))
        .into());
    }
    Ok(SolveOutput {
        report,
        normalization_mask: record.flipped,
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyOutput {
    pub policy: Policy,
    #[serde(flatten)]
    pub tally: Tally,
    pub verdict: Verdict,
    /// Agreements with issue-wise majority.
    pub agreements: usize,
    pub normalization_mask: Policy,
}

impl VerifyOutput {
    pub fn to_text(&self) -> String {
        let verdict = match self.verdict {
            Verdict::Winning => "winning",
            Verdict::Tying => "tying",
            Verdict::Losing => "losing",
        };
        let mut s = format!(
            "policy: {}\nbalance: {}\napprovals: {}\ndisapprovals: {}\nabstentions: {}\nverdict: {verdict}\nagreements: {}\nnormalization_mask: {}\n",
            self.policy,
            self.tally.balance,
            self.tally.approvals,
            self.tally.disapprovals,
            self.tally.abstentions,
            self.agreements,
            self.normalization_mask
        );
        if self.verdict == Verdict::Losing {
            s.push_str(&format!("policy {} would not survive a vote\n", self.policy));
        }
        s
    }
}

pub fn cmd_verify(profile: &Profile, policy: &str) -> std::result::Result<VerifyOutput, Failure> {
    let p: Policy = policy
        .parse()
        .map_err(|e: Error| Failure::input(format!("policy {policy:?}: {e}")))?;
    let tally = profile.tally(&p)?;
    let majority = iwm(profile);
    let agreements = profile.t() - maj_core::hamming(&p, &majority)?;
    Ok(VerifyOutput {
        policy: p,
        tally,
        verdict: tally.verdict(),
        agreements,
        normalization_mask: majority.opposite(),
    })
}

pub fn cmd_gadget(family: Family, t: usize) -> std::result::Result<Profile, Failure> {
    Ok(match family {
        Family::Anscombe => anscombe_gadget(t)?,
        Family::Cyclic => cyclic_profile(t)?,
    })
}

/// The reduced profile and its sidecar JSON.
pub fn cmd_reduce(g: &Graph, k: usize, parity: Option<ParityArg>) -> std::result::Result<(Profile, String), Failure> {
    let parity = parity.map(|p| match p {
        ParityArg::Even => Parity::Even,
        ParityArg::Odd => Parity::Odd,
    });
    let r = reduce_independent_set(g, k, parity)?;
    let mut json = serde_json::to_string_pretty(&r.sidecar(g.vertex_count(), k)).map_err(|e| Failure {
        code: EXIT_CONTRACT,
        message: e.to_string(),
    })?;
    json.push('\n');
    Ok((r.profile, json))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightProbability {
    pub k: usize,
    pub probability: ExactRational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "analysis", rename_all = "kebab-case")]
pub enum AnalysisReport {
    Expectations {
        /// Mean balance over policies agreeing with the majority on more than half the issues.
        x: ExactRational,
        /// Same mean, computed from per-voter agreement counts.
        y: ExactRational,
        closed_form: ExactRational,
        delta: i64,
        normalization_mask: Policy,
    },
    Components {
        #[serde(flatten)]
        report: ComponentReport,
        normalization_mask: Policy,
    },
    Cohesion {
        #[serde(flatten)]
        cohesion: Cohesion,
        iwm: Policy,
        iwm_balance: i64,
        normalization_mask: Policy,
    },
    Parity {
        #[serde(flatten)]
        report: ParityReport,
        normalization_mask: Policy,
    },
    SuccessProb {
        probabilities: Vec<WeightProbability>,
        best: Option<WeightProbability>,
        /// Whether the best probability meets the sampling bound (odd t, positive margin only).
        bound: Option<BoundCheck>,
        delta: i64,
        normalization_mask: Policy,
    },
}

impl AnalysisReport {
    pub fn to_text(&self) -> String {
        let v = serde_json::to_value(self).unwrap_or_default();
        let mut s = String::new();
        if let Some(map) = v.as_object() {
            for (key, value) in map {
                let shown = match value {
                    serde_json::Value::Object(o) if o.contains_key("num") => {
                        let field = |f: &str| o[f].as_str().unwrap_or_default().to_string();
                        match field("den").as_str() {
                            "1" => field("num"),
                            den => format!("{}/{den}", field("num")),
                        }
                    }
                    serde_json::Value::String(x) => x.clone(),
                    other => other.to_string(),
                };
                s.push_str(&format!("{key}: {shown}\n"));
            }
        }
        s
    }
}

pub fn cmd_analyze(
    profile: &Profile,
    what: Analysis,
    k: Option<usize>,
    cfg: &Enumeration,
) -> std::result::Result<AnalysisReport, Failure> {
    let record = normalize(profile);
    let mask = record.flipped.clone();
    Ok(match what {
        Analysis::Expectations => {
            let (x, y) = expectation_xy_bruteforce(&record.normalized, cfg)?;
            AnalysisReport::Expectations {
                x,
                y,
                closed_form: expectation_x_closed(&record.normalized),
                delta: record.delta,
                normalization_mask: mask,
            }
        }
        Analysis::Components => AnalysisReport::Components {
            report: nonlosing_components(profile, cfg)?,
            normalization_mask: mask,
        },
        Analysis::Cohesion => {
            let majority = iwm(profile);
            AnalysisReport::Cohesion {
                cohesion: cohesion_check(profile),
                iwm_balance: profile.tally(&majority)?.balance,
                iwm: majority,
                normalization_mask: mask,
            }
        }
        Analysis::Parity => AnalysisReport::Parity {
            report: parity_classification(profile, cfg)?,
            normalization_mask: mask,
        },
        Analysis::SuccessProb => {
            let t = profile.t();
            let ks: Vec<usize> = match k {
                Some(k) if k <= t / 2 || k > t => {
                    return Err(Failure::input(format!("k must lie in {}..={t}", t / 2 + 1)))
                }
                Some(k) => vec![k],
                None => (t / 2 + 1..=t).collect(),
            };
            let mut probabilities = Vec::with_capacity(ks.len());
            for k in ks {
                probabilities.push(WeightProbability {
                    k,
                    probability: exact_success_probability(&record.normalized, k, cfg)?,
                });
            }
            let best = probabilities
                .iter()
                .max_by(|a, b| a.probability.cmp(&b.probability).then(a.k.cmp(&b.k)))
                .cloned();
            let bound = (t % 2 == 1 && record.delta > 0)
                .then(|| {
                    best.as_ref()
                        .map(|b| markov_bound_check(&b.probability, profile.n(), t, record.delta))
                })
                .flatten();
            AnalysisReport::SuccessProb {
                probabilities,
                best,
                bound,
                delta: record.delta,
                normalization_mask: mask,
            }
        }
    })
}

/// The model in normalized polarity, so `x` ones count agreements.
pub fn cmd_ilp(profile: &Profile, variant: Variant, k: usize, exact: bool) -> IlpModel {
    let norm = normalize(profile).normalized;
    let model = match variant {
        Variant::Una => build_una_ilp(&norm, k),
        Variant::Wot => build_wot_ilp(&norm, k),
    };
    if exact {
        model.exact_weight()
    } else {
        model
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IlpCheck {
    pub model_feasible: bool,
    pub oracle_feasible: bool,
    /// Policy decoded from the model's solution, in the input's polarity.
    pub policy: Option<Policy>,
}

impl IlpCheck {
    pub fn agrees(&self) -> bool {
        self.model_feasible == self.oracle_feasible
    }
}

/// Solves `model` by enumeration and compares with brute force on the
/// normalized profile. A decoded solution must itself qualify.
pub fn check_ilp(
    profile: &Profile,
    model: &IlpModel,
    variant: Variant,
    k: usize,
    exact: bool,
    cell_cap: u128,
    cfg: &Enumeration,
) -> std::result::Result<IlpCheck, Failure> {
    let record = normalize(profile);
    let norm = &record.normalized;
    let requirement = match variant {
        Variant::Una => Requirement::Unanimous,
        Variant::Wot => Requirement::NonLosing,
    };
    let qualifies = |p: &Policy| -> maj_core::Result<bool> {
        let weight_ok = if exact {
            p.count_ones() == k
        } else {
            p.count_ones() >= k
        };
        let tally = norm.tally(p)?;
        let vote_ok = match requirement {
            Requirement::Unanimous => tally.approvals == norm.n(),
            _ => tally.is_nonlosing(),
        };
        Ok(weight_ok && vote_ok)
    };
    let solution = enumerate_feasible(model, cell_cap)?;
    let mut policy = None;
    if let Some(values) = &solution {
        let p = model.policy_from_assignment(values)?;
        if !qualifies(&p)? {
            return Err(Error::Contract(format!("model solution decodes to non-qualifying policy {p}")).into());
        }
        policy = Some(denormalize_policy(&p, &record)?);
    }
    let oracle = if exact {
        cfg_check(cfg, norm.t())?;
        maj_core::solvers::indices_of_weight(norm.t(), k)
            .map(|idx| Policy::from_index(norm.t(), idx))
            .find(|p| qualifies(p).unwrap_or(false))
    } else {
        find_with_weight_at_least(norm, requirement, k, cfg)?
    };
    Ok(IlpCheck {
        model_feasible: solution.is_some(),
        oracle_feasible: oracle.is_some(),
        policy,
    })
}

fn cfg_check(cfg: &Enumeration, t: usize) -> std::result::Result<(), Failure> {
    if t > cfg.max_issues || t > 63 {
        return Err(Error::Resource {
            what: "issue count",
            value: t as u128,
            cap: cfg.max_issues.min(63) as u128,
        }
        .into());
    }
    Ok(())
}
