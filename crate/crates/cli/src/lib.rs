//! `cpt` command-line tool: triple enumeration, frame construction,
//! simulation, transfer certificates, coupling graphs, retrograde reports and
//! the full check suite.
//!
//! Exit status is 0 on success, 1 when a verification fails and 2 on invalid
//! input.

pub mod config;
pub mod json;
pub mod suite;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cpt_core::dynamics::{
    coupling_graph, lab_coefficients, simulate, symbolic_entry, uniform_grid, verify_cpt_with, LabFrame,
    SystemSpec, DEFAULT_ZERO_TOL,
};
use cpt_core::frames::{build_w, search_w, EntangledFrame, SearchOutcome};
use cpt_core::linalg::{basis, identity};
use cpt_core::pythagorean::{coupling_params, enumerate_primitive_pairs, triple_from_pair, CouplingParams, OddPair, Sign};
use cpt_core::retrograde::{basic_cpts, check_equivalence, odd_dim_demo, pythagorean_pulse_in, Variant};
use cpt_core::su2::{spin_generators, y_matrix};
use cpt_core::Tolerances;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use config::{resolve_tolerances, FileConfig, OneOrMany, TOLERANCE_ENV};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or parameters.
    Usage(String),
    /// Ran, but a check did not pass. The report has already been written.
    Failed,
    Numerical(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self::Usage(msg.into())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e)
    }
}

impl From<cpt_core::Error> for CliError {
    fn from(e: cpt_core::Error) -> Self {
        match e {
            // Numerical breakdown, not bad input.
            cpt_core::Error::EigenFailed => Self::Numerical(e.to_string()),
            _ => Self::Usage(e.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RetroVariant {
    Retrograde,
    Semi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// Negate one entry of the 16×16 frame.
    FlipWSign,
}

#[derive(Parser, Debug)]
#[command(name = "cpt", version, about = "Complete population transfer in Pythagorean-coupled spin systems")]
pub struct Cli {
    /// JSON file whose keys mirror the flags; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// CPT pass tolerance on |1 - F|. Also read from CPT_TOLERANCE.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct PulseArgs {
    #[arg(long)]
    pub p: Option<i64>,
    #[arg(long)]
    pub q: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<f64>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// List primitive odd pairs (p, q) with their triples, ordered by c.
    Triples {
        #[arg(long)]
        max_c: Option<f64>,
        /// Also list the sign-flipped triples (±a, ±b, c).
        #[arg(long)]
        signs: bool,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Build and validate the entangled frame for n = 2^N.
    Frame {
        #[arg(long = "N", alias = "depth")]
        depth: Option<usize>,
        /// Include the matrix as integer numerators over 2^(N/2).
        #[arg(long)]
        matrix: bool,
        /// Node budget for the search used when N ≥ 4.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Lab-frame populations from |1⟩ as CSV.
    Simulate {
        #[command(flatten)]
        pulse: PulseArgs,
        #[arg(long)]
        n: Option<usize>,
        /// End time in units of τ (or absolute with --absolute-time).
        #[arg(long)]
        t_max: Option<f64>,
        /// Number of grid intervals; the CSV has steps + 1 rows.
        #[arg(long)]
        steps: Option<usize>,
        /// Output path; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        absolute_time: bool,
    },
    /// Certificate for the transfer e₁ → e_{n²-n+1} at τ.
    Verify {
        #[command(flatten)]
        pulse: PulseArgs,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Lab-frame coupling graph.
    Graph {
        #[command(flatten)]
        pulse: PulseArgs,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Retrograde and semi-retrograde equivalence report.
    Retro {
        #[command(flatten)]
        pulse: PulseArgs,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum)]
        variant: Option<RetroVariant>,
    },
    /// Run every check; JSON summary on stdout, table on stderr.
    Suite {
        /// Dimensions for the per-dimension checks (default 2, 4, 8).
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<Fault>,
    },
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
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INVALID
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(CliError::Failed) => EXIT_FAILED,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID
        }
        Err(CliError::Numerical(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILED
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let tol = resolve_tolerances(cli.tolerance, std::env::var(TOLERANCE_ENV).ok(), file.tolerances)?;
    let command = match cli.command {
        Some(c) => c,
        None => command_from_file(&file)?,
    };
    let ctx = Ctx { file, tol };
    match command {
        Command::Triples { max_c, signs, format } => ctx.triples(max_c, signs, format, out),
        Command::Frame { depth, matrix, budget } => ctx.frame(depth, matrix, budget, out),
        Command::Simulate { pulse, n, t_max, steps, out: path, absolute_time } => {
            ctx.simulate(&pulse, n, t_max, steps, path, absolute_time, out, err)
        }
        Command::Verify { pulse, n } => ctx.verify(&pulse, n, out, err),
        Command::Graph { pulse, n, format } => ctx.graph(&pulse, n, format, out, err),
        Command::Retro { pulse, n, variant } => ctx.retro(&pulse, n, variant, out),
        Command::Suite { n, inject_fault } => ctx.suite(n, inject_fault, out, err),
    }
}

fn command_from_file(file: &FileConfig) -> Result<Command, CliError> {
    let name = file
        .command
        .as_deref()
        .ok_or_else(|| CliError::usage("no subcommand given and config has no `command` field"))?;
    let pulse = PulseArgs::default();
    Ok(match name {
        "triples" => Command::Triples { max_c: None, signs: false, format: None },
        "frame" => Command::Frame { depth: None, matrix: false, budget: None },
        "simulate" => Command::Simulate { pulse, n: None, t_max: None, steps: None, out: None, absolute_time: false },
        "verify" => Command::Verify { pulse, n: None },
        "graph" => Command::Graph { pulse, n: None, format: None },
        "retro" => Command::Retro { pulse, n: None, variant: None },
        "suite" => Command::Suite { n: Vec::new(), inject_fault: None },
        other => {
            return Err(CliError::usage(format!(
                "config field `command`: unknown command {other:?} \
                 (expected triples, frame, simulate, verify, graph, retro or suite)"
            )))
        }
    })
}

struct Ctx {
    file: FileConfig,
    tol: Tolerances,
}

fn required<T>(flag: Option<T>, file: Option<T>, name: &str) -> Result<T, CliError> {
    flag.or(file).ok_or_else(|| CliError::usage(format!("missing required parameter --{name}")))
}

fn emit(out: &mut dyn Write, value: &impl Serialize) -> Result<(), CliError> {
    writeln!(out, "{}", json::to_string(value))?;
    Ok(())
}

impl Ctx {
    fn n(&self, flag: Option<usize>) -> Result<usize, CliError> {
        let file = self.file.n.as_ref().map(OneOrMany::single).transpose()?;
        let n = required(flag, file, "n")?;
        if n < 2 {
            return Err(CliError::usage(format!("--n: dimension must be at least 2, got {n}")));
        }
        Ok(n)
    }

    fn pair(&self, args: &PulseArgs) -> Result<(OddPair, f64), CliError> {
        let p = required(args.p, self.file.p, "p")?;
        let q = required(args.q, self.file.q, "q")?;
        let k = args.k.or(self.file.k).unwrap_or(0.0);
        if !k.is_finite() {
            return Err(CliError::usage(format!("--k: must be finite, got {k}")));
        }
        let pair = OddPair::new(p, q).map_err(|e| CliError::usage(format!("--p/--q: {e}")))?;
        Ok((pair, k))
    }

    /// Couplings for the pulse; warns when the chosen `k` zeroes any of them.
    fn params(&self, args: &PulseArgs, err: &mut dyn Write) -> Result<CouplingParams, CliError> {
        let (pair, k) = self.pair(args)?;
        let c = coupling_params(&triple_from_pair(pair, Sign::Plus, Sign::Plus), k);
        let zeros = c.zero_couplings();
        if !zeros.is_empty() {
            writeln!(err, "warning: k = {k} makes {} vanish", zeros.join(", "))?;
        }
        Ok(c)
    }

    fn triples(&self, max_c: Option<f64>, signs: bool, format: Option<Format>, out: &mut dyn Write) -> Result<(), CliError> {
        let max_c = required(max_c, self.file.max_c, "max-c")?;
        if !(max_c.is_finite() && max_c >= 0.0) {
            return Err(CliError::usage(format!("--max-c: must be a finite non-negative number, got {max_c}")));
        }
        let signs = signs || self.file.signs.unwrap_or(false);
        let format = format.or(self.file.format).unwrap_or(Format::Csv);
        let sign_choices: &[(Sign, Sign)] = if signs {
            &[(Sign::Plus, Sign::Plus), (Sign::Plus, Sign::Minus), (Sign::Minus, Sign::Plus), (Sign::Minus, Sign::Minus)]
        } else {
            &[(Sign::Plus, Sign::Plus)]
        };
        let rows: Vec<([i64; 5], bool)> = enumerate_primitive_pairs(max_c)
            .into_iter()
            .flat_map(|pair| {
                sign_choices.iter().map(move |&(sa, sb)| {
                    let t = triple_from_pair(pair, sa, sb);
                    ([pair.p(), pair.q(), t.a as i64, t.b as i64, t.c as i64], t.primitive)
                })
            })
            .collect();
        match format {
            Format::Csv => {
                writeln!(out, "p,q,a,b,c,primitive")?;
                for (r, primitive) in &rows {
                    writeln!(out, "{},{},{},{},{},{primitive}", r[0], r[1], r[2], r[3], r[4])?;
                }
            }
            Format::Json => {
                let list: Vec<Value> =
                    rows.iter().map(|(r, primitive)| json!({"p": r[0], "q": r[1], "a": r[2], "b": r[3], "c": r[4], "primitive": primitive})).collect();
                emit(out, &json!({ "max_c": max_c, "triples": list }))?;
            }
            Format::Dot => return Err(CliError::usage("--format: triples supports csv or json")),
        }
        Ok(())
    }

    fn frame(&self, depth: Option<usize>, matrix: bool, budget: Option<u64>, out: &mut dyn Write) -> Result<(), CliError> {
        let depth = required(depth, self.file.depth, "N")?;
        if depth == 0 {
            return Err(CliError::usage("--N: depth must be at least 1"));
        }
        let matrix = matrix || self.file.matrix.unwrap_or(false);
        let budget = budget.or(self.file.budget).unwrap_or(1_000_000);
        let (frame, nodes) = if depth <= 3 {
            (build_w(depth)?, None)
        } else {
            match search_w(depth, budget)? {
                SearchOutcome::Found { frame, nodes } => (frame, Some(nodes)),
                SearchOutcome::Exhausted { nodes, deepest } => {
                    return emit(
                        out,
                        &json!({
                            "depth": depth,
                            "status": "exhausted",
                            "budget": budget,
                            "nodes": nodes,
                            "deepest": deepest,
                        }),
                    );
                }
            }
        };
        let report = frame.validate();
        let mut value = frame_json(&frame, matrix);
        value["status"] = json!("found");
        value["search_nodes"] = json!(nodes);
        value["validation"] = json!({
            "first_columns_nonnegative": report.first_columns_nonnegative,
            "diagonal_split": report.diagonal_split,
            "last_column_alternating": report.last_column_alternating,
            "symmetry_residual": report.symmetry_residual,
            "orthogonality_residual": report.orthogonality_residual,
            "all_pass": report.all_pass(),
        });
        emit(out, &value)?;
        if report.all_pass() {
            Ok(())
        } else {
            Err(CliError::Failed)
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn simulate(
        &self,
        pulse: &PulseArgs,
        n: Option<usize>,
        t_max: Option<f64>,
        steps: Option<usize>,
        path: Option<PathBuf>,
        absolute_time: bool,
        out: &mut dyn Write,
        err: &mut dyn Write,
    ) -> Result<(), CliError> {
        let c = self.params(pulse, err)?;
        let n = self.n(n)?;
        let t_max = t_max.or(self.file.t_max).unwrap_or(2.0);
        if !(t_max.is_finite() && t_max >= 0.0) {
            return Err(CliError::usage(format!("--t-max: must be a finite non-negative number, got {t_max}")));
        }
        let steps = steps.or(self.file.steps).unwrap_or(400);
        let absolute = absolute_time || self.file.absolute_time.unwrap_or(false);
        let path = path.or_else(|| self.file.out.clone());

        let h = SystemSpec::new(n, c).with_frame(LabFrame::default_for(n)?).h_lab()?;
        let t_end = if absolute { t_max } else { t_max * c.tau };
        let sim = simulate(&h, &basis(n * n, 0), &uniform_grid(t_end, steps))?;
        let sim = if absolute { sim } else { sim.in_tau_units(c.tau) };

        let mut csv = String::new();
        csv.push_str(if absolute { "t" } else { "t_over_tau" });
        for i in 1..=n * n {
            let _ = write!(csv, ",pop_{i}");
        }
        csv.push('\n');
        for (t, pops) in sim.times.iter().zip(&sim.populations) {
            csv.push_str(&json::fmt_f64(*t));
            for p in pops {
                csv.push(',');
                csv.push_str(&json::fmt_f64(*p));
            }
            csv.push('\n');
        }
        match path {
            Some(p) => {
                std::fs::write(&p, csv).map_err(|e| CliError::usage(format!("--out {}: {e}", p.display())))?;
                writeln!(err, "wrote {} rows × {} columns to {}", sim.times.len(), n * n + 1, p.display())?;
            }
            None => out.write_all(csv.as_bytes())?,
        }
        Ok(())
    }

    fn verify(&self, pulse: &PulseArgs, n: Option<usize>, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
        let c = self.params(pulse, err)?;
        let n = self.n(n)?;
        let cert = verify_cpt_with(&SystemSpec::new(n, c), &self.tol)?;
        emit(out, &cert)?;
        if cert.pass {
            Ok(())
        } else {
            Err(CliError::Failed)
        }
    }

    fn graph(
        &self,
        pulse: &PulseArgs,
        n: Option<usize>,
        format: Option<Format>,
        out: &mut dyn Write,
        err: &mut dyn Write,
    ) -> Result<(), CliError> {
        let c = self.params(pulse, err)?;
        let n = self.n(n)?;
        let format = format.or(self.file.format).unwrap_or(Format::Dot);
        let frame = LabFrame::default_for(n)?;
        let h = SystemSpec::new(n, c).with_frame(frame.clone()).h_lab()?;
        let graph = coupling_graph(&h, DEFAULT_ZERO_TOL);
        let coeffs = if matches!(n, 2 | 4) { Some(lab_coefficients(n, frame.matrix())?) } else { None };
        let label = |i: usize, j: usize, w: f64| match &coeffs {
            Some(cf) => symbolic_entry(cf, i, j),
            None => json::fmt_f64(w),
        };
        match format {
            Format::Dot => {
                let mut s = String::from("graph lab_frame {\n    node [shape=circle];\n");
                for i in 1..=graph.nodes {
                    let _ = writeln!(s, "    {i} [label=\"|{i}⟩\"];");
                }
                for e in &graph.edges {
                    let _ = writeln!(s, "    {} -- {} [label=\"{}\"];", e.i + 1, e.j + 1, label(e.i, e.j, e.weight));
                }
                s.push_str("}\n");
                out.write_all(s.as_bytes())?;
            }
            Format::Json => {
                let edges: Vec<Value> = graph
                    .edges
                    .iter()
                    .map(|e| {
                        json!({
                            "i": e.i + 1,
                            "j": e.j + 1,
                            "weight": e.weight,
                            "label": label(e.i, e.j, e.weight),
                        })
                    })
                    .collect();
                emit(
                    out,
                    &json!({
                        "nodes": graph.nodes,
                        "symbolic": coeffs.is_some(),
                        "edges": edges,
                        "diagonal": graph.diagonal,
                    }),
                )?;
            }
            Format::Csv => return Err(CliError::usage("--format: graph supports dot or json")),
        }
        Ok(())
    }

    fn retro(&self, pulse: &PulseArgs, n: Option<usize>, variant: Option<RetroVariant>, out: &mut dyn Write) -> Result<(), CliError> {
        let (pair, k) = self.pair(pulse)?;
        let n = self.n(n)?;
        if !matches!(n, 2..=4) {
            return Err(CliError::usage(format!("--n: retro supports 2, 3 or 4, got {n}")));
        }
        let variant = variant.or(self.file.variant).unwrap_or(RetroVariant::Retrograde);
        let base = pythagorean_pulse_in(pair, k, n)?;
        let mut report = json!({ "n": n, "p": pair.p(), "q": pair.q(), "k": k });

        let pass = match variant {
            RetroVariant::Retrograde => {
                let y = y_matrix(&spin_generators(n)?);
                let eq = check_equivalence(&base, &y, Variant::Retrograde)?;
                report["variant"] = json!("retrograde");
                report["target"] = json!("Y");
                let mut pass = eq.biconditional_holds && eq.forward;
                if n % 2 == 0 {
                    let basic = basic_cpts(n, pair, k)?;
                    pass &= eq.cpt && basic.all_certified;
                    report["basic_cpts"] = serde_json::to_value(&basic).expect("serializable");
                } else {
                    let demo = odd_dim_demo(pair, k)?;
                    // Expected outcome: V(I) → V(Y) happens but is not a complete transfer.
                    pass &= !eq.cpt && eq.state_side && demo.basic_cpt.certified;
                    report["odd_dim_demo"] = serde_json::to_value(&demo).expect("serializable");
                }
                report["equivalence"] = serde_json::to_value(&eq).expect("serializable");
                pass
            }
            RetroVariant::Semi => {
                // Under u·y·u† = y for every generated u, y must commute with the
                // pulse; the identity is the target that always qualifies.
                let eq = check_equivalence(&base, &identity(n), Variant::SemiRetrograde)?;
                report["variant"] = json!("semi-retrograde");
                report["target"] = json!("I");
                let pass = eq.biconditional_holds;
                report["equivalence"] = serde_json::to_value(&eq).expect("serializable");
                pass
            }
        };
        report["pass"] = json!(pass);
        emit(out, &report)?;
        if pass {
            Ok(())
        } else {
            Err(CliError::Failed)
        }
    }

    fn suite(&self, n: Vec<usize>, fault: Option<Fault>, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
        let dims = if !n.is_empty() {
            n
        } else {
            self.file.n.as_ref().map(OneOrMany::list).unwrap_or_else(|| vec![2, 4, 8])
        };
        if let Some(&bad) = dims.iter().find(|&&d| d < 2) {
            return Err(CliError::usage(format!("--n: dimensions must be at least 2, got {bad}")));
        }
        let report = suite::run(&dims, fault, &self.tol);
        emit(out, &report)?;
        err.write_all(suite::table(&report).as_bytes())?;
        if report.pass {
            Ok(())
        } else {
            Err(CliError::Failed)
        }
    }
}

fn frame_json(frame: &EntangledFrame, matrix: bool) -> Value {
    let mut v = json!({
        "depth": frame.depth,
        "n": frame.n,
        "dim": frame.dim,
        "experimental": frame.experimental,
        "labels": frame.labels,
    });
    if matrix {
        v["matrix"] = json!({
            "scale": format!("2^(-{}/2)", frame.depth),
            "numerators": frame.numerators(),
        });
    }
    v
}
