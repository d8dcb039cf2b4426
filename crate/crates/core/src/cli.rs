//! Command-line front end. Every table goes to the data stream as CSV (the
//! default) or JSON; progress and summaries go to the error stream.

use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::grover::figure_scan;
use crate::mr_oracle::{oracle_equivalence_scan, MAX_SCAN_BITS};
use crate::ntheory::{
    bias_scan, first_negative_bias, pi_ab, pi_twin, sieve, Chain, PiSource, PiTable, PrimeTable,
    SegmentedCounter, TwinClass, WitnessSet, MAX_LIMIT, PI_TABLE_ENV,
};
use crate::prime_state::{build_odd_prime_state, build_prime_state};
use crate::qcount::{counting_distribution, estimate_many, RhRow};
use crate::qstate::{entanglement_entropy, pauli_expectation, single_qubit_density, PauliAxis};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest register for full-statevector subcommands.
pub const MAX_STATE_QUBITS: u32 = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "primeq",
    version,
    about = "Prime state simulation: entanglement, Grover search with a Miller-Rabin oracle, quantum counting",
    after_help = "Numbers are printed with 12 significant digits. Exit codes: 0 ok, 1 internal error, 2 usage/validation error."
)]
struct Cli {
    /// Output format for the data stream
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// pi(2^n) table file (`n,pi_value` lines); the bundled table is used otherwise
    #[arg(long, env = PI_TABLE_ENV, global = true)]
    pi_table: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Amplitudes of the Prime state.
    /// CSV: `x,re,im`. JSON: {n, count, indices, amplitude, amplitudes}
    State {
        #[arg(long)]
        n: u32,
        /// Leave out |2>
        #[arg(long)]
        odd: bool,
    },
    /// Entanglement entropy of the Prime state across cuts.
    /// CSV: `n,l,S_nats,S_bits`
    EntropyScan {
        #[command(flatten)]
        range: NRange,
        /// Only this cut
        #[arg(long)]
        l: Option<u32>,
        /// Only the n/2 cut
        #[arg(long)]
        half: bool,
    },
    /// Single-qubit reduced density matrix and Pauli expectations.
    /// CSV: `row,col,re,im`. JSON: {n, i, rho (row-major [re, im] pairs), pauli, closed_form}
    QubitDensity {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        i: u32,
    },
    /// Chebyshev and twin-prime bias at x = step, 2 step, ... below limit.
    /// CSV: `x,pi41,pi43,delta,pi2_1,pi2_3,delta2`
    BiasScan {
        #[arg(long)]
        limit: u64,
        #[arg(long, default_value_t = 4096)]
        step: u64,
    },
    /// Grover schedule and accuracy, R(n), R_max(n), P_G(n).
    /// CSV: `n,R,Rmax,PG` with `NA` where pi(2^n) is unavailable
    GroverFig {
        #[arg(long, default_value_t = 2)]
        n_min: u32,
        #[arg(long, default_value_t = 45)]
        n_max: u32,
        /// Count pi(2^n) by sieving up to this n; larger n use the table file
        #[arg(long, default_value_t = 26)]
        sieve_max_n: u32,
    },
    /// Compare the Miller-Rabin oracle's phase flip with the sieve on all odd x < 2^n.
    /// CSV: `x,expected,got,witnesses` (mismatches only)
    OracleVerify {
        #[arg(long)]
        n: u32,
        /// Comma-separated witnesses (default 2,3,5,7,11,13,17)
        #[arg(long, value_delimiter = ',')]
        witnesses: Option<Vec<u64>>,
        /// Draw this many random witnesses per input instead
        #[arg(long)]
        probabilistic: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Quantum counting of pi(2^n) with a t-bit phase register.
    /// CSV: `n,N,M,t,calls,c,bound,samples,success_freq,mean_m_tilde,modal_y`;
    /// with --emit-samples: `sample,y,m_tilde,abs_err,within_bound`
    CountSim {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: u32,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        emit_samples: bool,
    },
    /// Counting accuracy vs. the RH fluctuation scale at x = 2^n.
    /// CSV: `n,x,pi,li,abs_err,qc_bound,rh_scale`
    RhScan {
        #[arg(long, default_value_t = 10)]
        n_min: u32,
        #[arg(long, default_value_t = 26)]
        n_max: u32,
        #[arg(long, default_value_t = 2.0 * PI)]
        c: f64,
    },
}

#[derive(Debug, Args)]
struct NRange {
    #[arg(long, conflicts_with_all = ["n_min", "n_max"])]
    n: Option<u32>,
    #[arg(long)]
    n_min: Option<u32>,
    #[arg(long)]
    n_max: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    State,
    EntropyScan,
    QubitDensity,
    BiasScan,
    GroverFig,
    OracleVerify,
    CountSim,
    RhScan,
}

/// Flattened view of one invocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub n: Option<u32>,
    pub n_min: Option<u32>,
    pub n_max: Option<u32>,
    pub l: Option<u32>,
    pub i: Option<u32>,
    pub limit: Option<u64>,
    pub step: Option<u64>,
    pub witnesses: Option<Vec<u64>>,
    pub probabilistic: Option<usize>,
    pub c: Option<f64>,
    pub t: Option<u32>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub sieve_max_n: Option<u32>,
    pub half: bool,
    pub odd: bool,
    pub emit_samples: bool,
    pub format: Format,
    pub pi_table_path: Option<PathBuf>,
}

impl RunConfig {
    fn empty(command: CommandKind, format: Format, pi_table_path: Option<PathBuf>) -> Self {
        RunConfig {
            command,
            n: None,
            n_min: None,
            n_max: None,
            l: None,
            i: None,
            limit: None,
            step: None,
            witnesses: None,
            probabilistic: None,
            c: None,
            t: None,
            samples: None,
            seed: 0,
            sieve_max_n: None,
            half: false,
            odd: false,
            emit_samples: false,
            format,
            pi_table_path,
        }
    }

    fn from_cli(cli: Cli) -> Self {
        use CommandKind as K;
        let base = |k| RunConfig::empty(k, cli.format, cli.pi_table.clone());
        match cli.command {
            Command::State { n, odd } => RunConfig { n: Some(n), odd, ..base(K::State) },
            Command::EntropyScan { range, l, half } => RunConfig {
                n: range.n,
                n_min: range.n_min,
                n_max: range.n_max,
                l,
                half,
                ..base(K::EntropyScan)
            },
            Command::QubitDensity { n, i } => RunConfig { n: Some(n), i: Some(i), ..base(K::QubitDensity) },
            Command::BiasScan { limit, step } => RunConfig {
                limit: Some(limit),
                step: Some(step),
                ..base(K::BiasScan)
            },
            Command::GroverFig { n_min, n_max, sieve_max_n } => RunConfig {
                n_min: Some(n_min),
                n_max: Some(n_max),
                sieve_max_n: Some(sieve_max_n),
                ..base(K::GroverFig)
            },
            Command::OracleVerify { n, witnesses, probabilistic, seed } => RunConfig {
                n: Some(n),
                witnesses,
                probabilistic,
                seed,
                ..base(K::OracleVerify)
            },
            Command::CountSim { n, t, samples, seed, emit_samples } => RunConfig {
                n: Some(n),
                t: Some(t),
                samples: Some(samples),
                seed,
                emit_samples,
                ..base(K::CountSim)
            },
            Command::RhScan { n_min, n_max, c } => RunConfig {
                n_min: Some(n_min),
                n_max: Some(n_max),
                c: Some(c),
                ..base(K::RhScan)
            },
        }
    }

    /// The qubit counts an entropy scan visits.
    fn n_values(&self) -> (u32, u32) {
        match (self.n, self.n_min, self.n_max) {
            (Some(n), _, _) => (n, n),
            (None, a, b) => (a.unwrap_or(6), b.unwrap_or(a.unwrap_or(6).max(12))),
        }
    }
}

fn check_n(errors: &mut Vec<String>, name: &str, n: u32, max: u32) {
    if n < 2 {
        errors.push(format!("{name} = {n}: n >= 2 required; 2^n must be composite"));
    } else if n > max {
        errors.push(format!("{name} = {n} exceeds the limit {max} for this command"));
    }
}

/// Every violated precondition, as human-readable messages.
pub fn validate(cfg: &RunConfig) -> Vec<String> {
    let mut e = Vec::new();
    use CommandKind as K;
    match cfg.command {
        K::State => check_n(&mut e, "n", cfg.n.unwrap_or(0), MAX_STATE_QUBITS),
        K::QubitDensity => {
            let n = cfg.n.unwrap_or(0);
            check_n(&mut e, "n", n, MAX_STATE_QUBITS);
            let i = cfg.i.unwrap_or(0);
            if i >= n {
                e.push(format!("i = {i} must be below n = {n}"));
            }
        }
        K::EntropyScan => {
            let (lo, hi) = cfg.n_values();
            check_n(&mut e, "n_min", lo, MAX_STATE_QUBITS);
            check_n(&mut e, "n_max", hi, MAX_STATE_QUBITS);
            if lo > hi {
                e.push(format!("n_min = {lo} exceeds n_max = {hi}"));
            }
            if let Some(l) = cfg.l {
                if l < 1 || l >= lo {
                    e.push(format!("l = {l} must satisfy 1 <= l < n for every scanned n"));
                }
                if cfg.half {
                    e.push("--l and --half are exclusive".into());
                }
            }
        }
        K::BiasScan => {
            let limit = cfg.limit.unwrap_or(0);
            if !(8..=1 << 32).contains(&limit) {
                e.push(format!("limit = {limit} outside [8, 2^32]"));
            }
            if cfg.step == Some(0) {
                e.push("step must be positive".into());
            }
        }
        K::GroverFig => {
            let (lo, hi) = (cfg.n_min.unwrap_or(0), cfg.n_max.unwrap_or(0));
            check_n(&mut e, "n_min", lo, 62);
            check_n(&mut e, "n_max", hi, 62);
            if lo > hi {
                e.push(format!("n_min = {lo} exceeds n_max = {hi}"));
            }
            if cfg.sieve_max_n.unwrap_or(0) > 34 {
                e.push("sieve_max_n must be at most 34".into());
            }
        }
        K::OracleVerify => {
            check_n(&mut e, "n", cfg.n.unwrap_or(0), MAX_SCAN_BITS);
            if cfg.witnesses.is_some() && cfg.probabilistic.is_some() {
                e.push("--witnesses and --probabilistic are exclusive".into());
            }
            if let Some(ws) = &cfg.witnesses {
                if ws.is_empty() || ws.iter().any(|&a| a < 1) {
                    e.push("witnesses must be a non-empty list of integers >= 1".into());
                }
            }
            if cfg.probabilistic == Some(0) {
                e.push("--probabilistic needs k >= 1".into());
            }
        }
        K::CountSim => {
            check_n(&mut e, "n", cfg.n.unwrap_or(0), 34);
            let t = cfg.t.unwrap_or(0);
            if !(1..=20).contains(&t) {
                e.push(format!("t = {t} outside [1, 20]"));
            }
            if cfg.samples == Some(0) {
                e.push("samples must be positive".into());
            }
        }
        K::RhScan => {
            let (lo, hi) = (cfg.n_min.unwrap_or(0), cfg.n_max.unwrap_or(0));
            check_n(&mut e, "n_min", lo, 32);
            check_n(&mut e, "n_max", hi, 32);
            if lo > hi {
                e.push(format!("n_min = {lo} exceeds n_max = {hi}"));
            }
            match cfg.c {
                Some(c) if c > 0.0 && c.is_finite() => {}
                other => e.push(format!("c = {other:?} must be positive")),
            }
        }
    }
    e
}

/// `%.12g`-style formatting.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    // the exponent after rounding to 12 digits decides the style
    let sci = format!("{v:.11e}");
    let (mantissa, e) = sci.split_once('e').unwrap();
    let e: i32 = e.parse().unwrap();
    if (-4..12).contains(&e) {
        let decimals = (11 - e) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), if e < 0 { '-' } else { '+' }, e.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Rounds to 12 significant digits for JSON output.
fn round12(v: f64) -> Value {
    let s = fmt_num(v);
    match s.parse::<f64>() {
        Ok(r) if r.is_finite() => json!(r),
        _ => Value::Null,
    }
}

struct Run<'a, W: Write, E: Write> {
    cfg: &'a RunConfig,
    out: &'a mut W,
    err: &'a mut E,
}

type Outcome = Result<(), Failure>;

enum Failure {
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl<W: Write, E: Write> Run<'_, W, E> {
    fn json(&mut self, v: &Value) -> Outcome {
        writeln!(self.out, "{}", serde_json::to_string_pretty(v).expect("serialisable"))?;
        Ok(())
    }

    fn csv(&mut self, header: &str, rows: &[Vec<String>]) -> Outcome {
        writeln!(self.out, "{header}")?;
        for r in rows {
            writeln!(self.out, "{}", r.join(","))?;
        }
        Ok(())
    }

    fn table_for(&mut self, limit: u64) -> Result<PrimeTable, Failure> {
        writeln!(self.err, "sieving below {limit}")?;
        Ok(sieve(limit.clamp(8, MAX_LIMIT))?)
    }

    fn pi_file(&self) -> Result<PiTable, Failure> {
        Ok(match &self.cfg.pi_table_path {
            Some(p) => PiTable::load(p)?,
            None => PiTable::bundled(),
        })
    }

    fn dispatch(&mut self) -> Outcome {
        use CommandKind as K;
        match self.cfg.command {
            K::State => self.state(),
            K::EntropyScan => self.entropy_scan(),
            K::QubitDensity => self.qubit_density(),
            K::BiasScan => self.bias_scan(),
            K::GroverFig => self.grover_fig(),
            K::OracleVerify => self.oracle_verify(),
            K::CountSim => self.count_sim(),
            K::RhScan => self.rh_scan(),
        }
    }

    fn state(&mut self) -> Outcome {
        let n = self.cfg.n.unwrap();
        let table = sieve((1u64 << n).max(8))?;
        let state = if self.cfg.odd {
            build_odd_prime_state(n, &table)?
        } else {
            build_prime_state(n, &table)?
        };
        let support: Vec<u64> = state.support().collect();
        let amp = state.amplitudes();
        match self.cfg.format {
            Format::Csv => {
                let rows: Vec<Vec<String>> = support
                    .iter()
                    .map(|&x| {
                        let a = amp[x as usize];
                        vec![x.to_string(), fmt_num(a.re), fmt_num(a.im)]
                    })
                    .collect();
                self.csv("x,re,im", &rows)
            }
            Format::Json => {
                let list: Vec<Value> = support
                    .iter()
                    .map(|&x| json!({"x": x, "re": round12(amp[x as usize].re), "im": round12(amp[x as usize].im)}))
                    .collect();
                let v = json!({
                    "n": n,
                    "count": support.len(),
                    "indices": support,
                    "amplitude": round12(amp[support[0] as usize].re),
                    "amplitudes": list,
                });
                self.json(&v)
            }
        }
    }

    fn entropy_scan(&mut self) -> Outcome {
        let (lo, hi) = self.cfg.n_values();
        let table = sieve(1u64 << hi)?;
        let mut records = Vec::new();
        for n in lo..=hi {
            let state = build_prime_state(n, &table)?;
            let cuts: Vec<u32> = match (self.cfg.l, self.cfg.half) {
                (Some(l), _) => vec![l],
                (None, true) => vec![n / 2],
                (None, false) => (1..n).collect(),
            };
            for l in cuts {
                records.push(entanglement_entropy(&state, l)?);
            }
            writeln!(self.err, "entropy-scan: n = {n} done")?;
        }
        match self.cfg.format {
            Format::Csv => {
                let rows: Vec<Vec<String>> = records
                    .iter()
                    .map(|r| vec![r.n.to_string(), r.l.to_string(), fmt_num(r.entropy_nats), fmt_num(r.entropy_bits)])
                    .collect();
                self.csv("n,l,S_nats,S_bits", &rows)
            }
            Format::Json => {
                let v: Vec<Value> = records
                    .iter()
                    .map(|r| json!({"n": r.n, "l": r.l, "S_nats": round12(r.entropy_nats), "S_bits": round12(r.entropy_bits)}))
                    .collect();
                self.json(&Value::Array(v))
            }
        }
    }

    fn qubit_density(&mut self) -> Outcome {
        let (n, i) = (self.cfg.n.unwrap(), self.cfg.i.unwrap());
        let big_n = 1u64 << n;
        let table = sieve(big_n)?;
        let state = build_prime_state(n, &table)?;
        let rho = single_qubit_density(&state, i)?;
        match self.cfg.format {
            Format::Csv => {
                let rows: Vec<Vec<String>> = (0..2)
                    .flat_map(|r| (0..2).map(move |c| (r, c)))
                    .map(|(r, c)| {
                        let z = rho.get(r, c);
                        vec![r.to_string(), c.to_string(), fmt_num(z.re), fmt_num(z.im)]
                    })
                    .collect();
                self.csv("row,col,re,im", &rows)
            }
            Format::Json => {
                let m: Vec<Value> = (0..2)
                    .map(|r| {
                        Value::Array(
                            (0..2)
                                .map(|c| json!([round12(rho.get(r, c).re), round12(rho.get(r, c).im)]))
                                .collect(),
                        )
                    })
                    .collect();
                let pi = table.pi(big_n - 1)? as f64;
                let x = big_n - 1;
                let closed = match i {
                    0 => json!([[1.0 / pi, 1.0 / pi], [1.0 / pi, (pi - 1.0) / pi]].map(|r| r.map(round12))),
                    1 => {
                        let p41 = pi_ab(&table, 4, 1, x)? as f64;
                        let p43 = pi_ab(&table, 4, 3, x)? as f64;
                        let t1 = pi_twin(&table, x, TwinClass::One)? as f64;
                        json!([[p41 / pi, t1 / pi], [t1 / pi, (1.0 + p43) / pi]].map(|r| r.map(round12)))
                    }
                    _ => Value::Null,
                };
                let v = json!({
                    "n": n,
                    "i": i,
                    "rho": m,
                    "pauli": {
                        "x": round12(pauli_expectation(&state, i, PauliAxis::X)?),
                        "y": round12(pauli_expectation(&state, i, PauliAxis::Y)?),
                        "z": round12(pauli_expectation(&state, i, PauliAxis::Z)?),
                    },
                    "closed_form": closed,
                });
                self.json(&v)
            }
        }
    }

    fn bias_scan(&mut self) -> Outcome {
        let limit = self.cfg.limit.unwrap();
        let step = self.cfg.step.unwrap_or(4096);
        let table = self.table_for(limit)?;
        let rows = bias_scan(&table, limit - 1, step)?;
        if let Some(x) = first_negative_bias(&table, limit - 1)? {
            writeln!(self.err, "bias-scan: Delta first negative at x = {x}")?;
        }
        match self.cfg.format {
            Format::Csv => {
                let rows: Vec<Vec<String>> = rows
                    .iter()
                    .map(|r| {
                        [r.x, r.pi41, r.pi43]
                            .iter()
                            .map(u64::to_string)
                            .chain([r.delta.to_string(), r.pi2_1.to_string(), r.pi2_3.to_string(), r.delta2.to_string()])
                            .collect()
                    })
                    .collect();
                self.csv("x,pi41,pi43,delta,pi2_1,pi2_3,delta2", &rows)
            }
            Format::Json => self.json(&serde_json::to_value(&rows).expect("serialisable")),
        }
    }

    fn grover_fig(&mut self) -> Outcome {
        let file = self.pi_file()?;
        let counter = SegmentedCounter { max_n: self.cfg.sieve_max_n.unwrap_or(26) };
        let source = Chain(vec![&counter, &file]);
        let rows = figure_scan(self.cfg.n_min.unwrap(), self.cfg.n_max.unwrap(), &source)?;
        let gaps = rows.iter().filter(|r| r.r.is_none()).count();
        if gaps > 0 {
            writeln!(self.err, "grover-fig: {gaps} rows lack pi(2^n) and are marked NA")?;
        }
        match self.cfg.format {
            Format::Csv => {
                let rows: Vec<Vec<String>> = rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.n.to_string(),
                            r.r.map_or("NA".into(), |v| v.to_string()),
                            r.r_max.to_string(),
                            r.pg.map_or("NA".into(), fmt_num),
                        ]
                    })
                    .collect();
                self.csv("n,R,Rmax,PG", &rows)
            }
            Format::Json => {
                let v: Vec<Value> = rows
                    .iter()
                    .map(|r| json!({"n": r.n, "R": r.r, "Rmax": r.r_max, "PG": r.pg.map(round12)}))
                    .collect();
                self.json(&Value::Array(v))
            }
        }
    }

    fn oracle_verify(&mut self) -> Outcome {
        let n = self.cfg.n.unwrap();
        let ws = match (&self.cfg.witnesses, self.cfg.probabilistic) {
            (Some(list), _) => WitnessSet::custom(list.clone()),
            (None, Some(k)) => WitnessSet::probabilistic(k, self.cfg.seed),
            (None, None) => WitnessSet::deterministic(),
        };
        let table = sieve(1u64 << n)?;
        let report = oracle_equivalence_scan(n, &ws, &table)?;
        writeln!(
            self.err,
            "oracle-verify: {} odd inputs, {} mismatches, restored = {}",
            report.checked,
            report.mismatches.len(),
            report.all_restored
        )?;
        match self.cfg.format {
            Format::Csv => {
                write!(self.out, "{}", report.mismatch_csv())?;
                Ok(())
            }
            Format::Json => self.json(&serde_json::to_value(&report).expect("serialisable")),
        }
    }

    fn count_sim(&mut self) -> Outcome {
        let (n, t) = (self.cfg.n.unwrap(), self.cfg.t.unwrap());
        let samples = self.cfg.samples.unwrap_or(10_000);
        let file = self.pi_file()?;
        let counter = SegmentedCounter { max_n: 26 };
        let m = Chain(vec![&counter, &file])
            .pi_pow2(n)
            .ok_or_else(|| Error::Range(format!("pi(2^{n}) unavailable")))?;
        let big_n = 1u64 << n;
        let dist = counting_distribution(big_n, m, t)?;
        let est = estimate_many(&dist, samples, self.cfg.seed);
        let hits = est.iter().filter(|e| e.within_bound).count();
        let freq = hits as f64 / samples as f64;
        let mean = est.iter().map(|e| e.m_tilde).sum::<f64>() / samples as f64;
        let (calls, c, bound) = (dist.oracle_calls(), dist.calls_constant(), est[0].bound);
        match (self.cfg.format, self.cfg.emit_samples) {
            (Format::Csv, false) => {
                let row = vec![
                    n.to_string(),
                    big_n.to_string(),
                    m.to_string(),
                    t.to_string(),
                    calls.to_string(),
                    fmt_num(c),
                    fmt_num(bound),
                    samples.to_string(),
                    fmt_num(freq),
                    fmt_num(mean),
                    dist.mode().to_string(),
                ];
                self.csv("n,N,M,t,calls,c,bound,samples,success_freq,mean_m_tilde,modal_y", &[row])
            }
            (Format::Csv, true) => {
                let rows: Vec<Vec<String>> = est
                    .iter()
                    .enumerate()
                    .map(|(k, e)| {
                        vec![k.to_string(), e.y_observed.to_string(), fmt_num(e.m_tilde), fmt_num(e.abs_err), e.within_bound.to_string()]
                    })
                    .collect();
                self.csv("sample,y,m_tilde,abs_err,within_bound", &rows)
            }
            (Format::Json, emit) => {
                let mut v = json!({
                    "n": n, "N": big_n, "M": m, "t": t, "calls": calls,
                    "c": round12(c), "bound": round12(bound), "samples": samples,
                    "success_freq": round12(freq), "mean_m_tilde": round12(mean),
                    "modal_y": dist.mode(),
                });
                if emit {
                    v["estimates"] = Value::Array(
                        est.iter()
                            .map(|e| json!({"y": e.y_observed, "m_tilde": round12(e.m_tilde), "within_bound": e.within_bound}))
                            .collect(),
                    );
                }
                self.json(&v)
            }
        }
    }

    fn rh_scan(&mut self) -> Outcome {
        let (lo, hi) = (self.cfg.n_min.unwrap(), self.cfg.n_max.unwrap());
        let table = self.table_for(1u64 << hi)?;
        let rows = crate::qcount::rh_comparison_scan(&table, lo, hi, self.cfg.c.unwrap())?;
        match self.cfg.format {
            Format::Csv => {
                let rows: Vec<Vec<String>> = rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.n.to_string(),
                            r.x.to_string(),
                            r.pi.to_string(),
                            fmt_num(r.li),
                            fmt_num(r.abs_err),
                            fmt_num(r.qc_bound),
                            fmt_num(r.rh_scale),
                        ]
                    })
                    .collect();
                self.csv(RhRow::CSV_HEADER, &rows)
            }
            Format::Json => {
                let v: Vec<Value> = rows
                    .iter()
                    .map(|r| {
                        json!({"n": r.n, "x": r.x, "pi": r.pi, "li": round12(r.li), "abs_err": round12(r.abs_err),
                               "qc_bound": round12(r.qc_bound), "rh_scale": round12(r.rh_scale)})
                    })
                    .collect();
                self.json(&Value::Array(v))
            }
        }
    }
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T, W, E>(argv: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let cfg = RunConfig::from_cli(cli);
    let problems = validate(&cfg);
    if !problems.is_empty() {
        for p in &problems {
            let _ = writeln!(err, "error: {p}");
        }
        let _ = writeln!(err, "run with --help for usage");
        return EXIT_USAGE;
    }
    let mut r = Run { cfg: &cfg, out, err };
    match r.dispatch() {
        Ok(()) => EXIT_OK,
        Err(Failure::Lib(e @ (Error::Parse { .. } | Error::Io(_)))) => {
            let _ = writeln!(r.err, "error: {e}");
            EXIT_USAGE
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(r.err, "internal error: {e}");
            EXIT_INTERNAL
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(r.err, "i/o error: {e}");
            EXIT_INTERNAL
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(command: CommandKind) -> RunConfig {
        RunConfig::empty(command, Format::Csv, None)
    }

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.5), "0.5");
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(29.080977804), "29.080977804");
        assert_eq!(fmt_num(123456789012345.0), "1.23456789012e+14");
        assert_eq!(fmt_num(1.5e-7), "1.5e-07");
        assert_eq!(fmt_num(-2.0), "-2");
        assert_eq!(fmt_num(999999999999.9), "1e+12");
    }

    #[test]
    fn validation_messages() {
        let mut c = cfg(CommandKind::State);
        c.n = Some(1);
        let errs = validate(&c);
        assert_eq!(errs.len(), 1);
        assert!(errs[0].contains("n >= 2 required"));

        let mut c = cfg(CommandKind::EntropyScan);
        c.n = Some(6);
        c.l = Some(6);
        assert_eq!(validate(&c).len(), 1);
        c.l = Some(3);
        assert!(validate(&c).is_empty());

        let mut c = cfg(CommandKind::RhScan);
        c.n_min = Some(1);
        c.n_max = Some(40);
        c.c = Some(-1.0);
        assert_eq!(validate(&c).len(), 3);
    }
}
