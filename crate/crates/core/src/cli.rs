//! Command-line front end. [`run`] takes the argument list and two sinks and
//! returns the process exit code: 0 success, 1 certification failure,
//! 2 usage or parameter error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::Zero;
use serde::Serialize;

use crate::jacobi::{
    big_operator, classify, family_weight_for, pearson_residual, BigJacobiParams,
    WeightFunction,
};
use crate::laurent::Polynomial;
use crate::operator::{check_nondegenerate, first_spectral_collision, Eigenvalue, DunklOperator, OperatorParams, Parity};
use crate::quadrature::{gram_matrix, recurrence_coefficients, recurrence_csv, symmetry_residual};
use crate::rational::{parse_rational, Rational};
use crate::solver::{
    coefficient_table_csv, coefficient_table_json, eigen_sequence, residual, EigenPolynomial,
    SolverError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Orthogonality threshold: `|<P_n,P_m>| / sqrt(h_n h_m)`.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;
/// Symmetry threshold relative to `|<LV,W>| + |<V,LW>| + 1`.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Pearson identities, relative to the size of the terms compared.
pub const PEARSON_TOL: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(name = "dunkl", version, about = "Dunkl-type operators, -1-Jacobi polynomials and their weights")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monic eigenpolynomials P_0..P_N with their eigenvalues.
    GenPoly(Common),
    /// Eigenvalues lambda_0..lambda_N.
    Eigenvalues(Common),
    /// Symmetrizability class of the operator.
    Classify(Common),
    /// Samples of the weight over its support.
    WeightSample(Common),
    /// Gram matrix of P_0..P_N (or the recurrence table with --recurrence).
    Gram(Common),
    /// Eigen-residuals, orthogonality, symmetry and Pearson checks.
    Certify(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct Common {
    #[command(flatten)]
    params: ParamArgs,
    /// Highest degree.
    #[arg(long = "N", default_value_t = 5)]
    n: u32,
    /// Gauss–Jacobi points per rule (default: max(40, degree + 10)).
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Samples per support interval (weight-sample).
    #[arg(long, default_value_t = 101)]
    samples: usize,
    /// Distance kept from support endpoints (weight-sample).
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    /// Emit recurrence coefficients instead of the Gram matrix (gram).
    #[arg(long)]
    recurrence: bool,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    alpha: Option<Rational>,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    beta: Option<Rational>,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    c: Option<Rational>,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    mu: Option<Rational>,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    nu0: Option<Rational>,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    nu1: Option<Rational>,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    rho0: Option<Rational>,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    rho1: Option<Rational>,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    tau0: Option<Rational>,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    tau1: Option<Rational>,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    xi: Option<Rational>,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    eta: Option<Rational>,
}

/// Parameters as given: a family triple or nine raw constants.
enum Source {
    Family(BigJacobiParams),
    Raw(OperatorParams),
}

impl Source {
    fn operator_params(&self) -> OperatorParams {
        match self {
            Source::Family(p) => big_operator(p),
            Source::Raw(p) => p.clone(),
        }
    }

    /// The positive weight this operator is symmetric for.
    fn weight(&self) -> Result<WeightFunction, String> {
        match self {
            Source::Family(p) => {
                p.check_range().map_err(|e| e.to_string())?;
                family_weight_for(p).map_err(|e| e.to_string())
            }
            Source::Raw(p) => {
                let v = classify(p);
                match (v.positive_on_symmetric_support, v.weight) {
                    (true, Some(w)) => Ok(w),
                    _ => Err(format!(
                        "parameter out of range: no positive weight ({} {})",
                        v.case_tag, v.notes
                    )),
                }
            }
        }
    }
}

impl ParamArgs {
    fn source(&self) -> Result<Source, String> {
        let raw = [
            &self.mu, &self.nu0, &self.nu1, &self.rho0, &self.rho1, &self.tau0, &self.tau1,
            &self.xi, &self.eta,
        ];
        let any_family = self.alpha.is_some() || self.beta.is_some() || self.c.is_some();
        let any_raw = raw.iter().any(|r| r.is_some());
        match (any_family, any_raw) {
            (true, true) => Err("give either --alpha/--beta/--c or the raw parameters, not both".into()),
            (true, false) => {
                let (Some(alpha), Some(beta)) = (self.alpha.clone(), self.beta.clone()) else {
                    return Err("family mode needs both --alpha and --beta".into());
                };
                let c = self.c.clone().unwrap_or_else(Rational::zero);
                Ok(Source::Family(BigJacobiParams::new(alpha, beta, c)))
            }
            (false, true) => Ok(Source::Raw(OperatorParams::from_array(
                raw.map(|r| r.clone().unwrap_or_else(Rational::zero)),
            ))),
            (false, false) => Err("no parameters given".into()),
        }
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match &cli.command {
        Command::GenPoly(c) => gen_poly(c),
        Command::Eigenvalues(c) => eigenvalues(c),
        Command::Classify(c) => classify_cmd(c),
        Command::WeightSample(c) => weight_sample(c),
        Command::Gram(c) => gram(c),
        Command::Certify(c) => certify(c),
    };
    match result {
        Ok(Output { text, code }) => {
            let common = match &cli.command {
                Command::GenPoly(c)
                | Command::Eigenvalues(c)
                | Command::Classify(c)
                | Command::WeightSample(c)
                | Command::Gram(c)
                | Command::Certify(c) => c,
            };
            if let Err(e) = emit(&text, common.out.as_ref(), out) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
            code
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

struct Output {
    text: String,
    code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, code: EXIT_OK }
    }
}

fn emit(text: &str, path: Option<&PathBuf>, out: &mut dyn Write) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => out.write_all(text.as_bytes()),
    }
}

fn sequence(params: &OperatorParams, n: u32) -> Result<Vec<EigenPolynomial>, String> {
    if !check_nondegenerate(params, n) {
        return Err(match first_spectral_collision(params, n) {
            Some((m, k)) => format!("degenerate spectrum at degree {k} (lambda_{k} = lambda_{m})"),
            None => "degenerate spectrum: tau1 = ±tau0 or 2 eta + (2k+1)(tau0 - tau1) = 0".into(),
        });
    }
    eigen_sequence(&DunklOperator::build(params), n).map_err(|e| match e {
        SolverError::DegenerateSpectrum { index, .. } => {
            format!("{e} (offending index {index})")
        }
        other => other.to_string(),
    })
}

fn gen_poly(c: &Common) -> Result<Output, String> {
    let params = c.params.source()?.operator_params();
    let seq = sequence(&params, c.n)?;
    Ok(Output::ok(match c.format {
        Format::Csv => coefficient_table_csv(&seq),
        Format::Json => coefficient_table_json(&seq) + "\n",
    }))
}

fn eigenvalues(c: &Common) -> Result<Output, String> {
    let params = c.params.source()?.operator_params();
    let values: Vec<Eigenvalue> = (0..=c.n).map(|n| Eigenvalue::of(&params, n)).collect();
    let parity = |p: Parity| match p {
        Parity::Even => "even",
        Parity::Odd => "odd",
    };
    Ok(Output::ok(match c.format {
        Format::Csv => {
            let mut s = String::from("n,parity,lambda\n");
            for e in &values {
                let _ = writeln!(s, "{},{},{}", e.n, parity(e.parity), e.value);
            }
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                n: u32,
                parity: &'static str,
                lambda: String,
            }
            let rows: Vec<Row> = values
                .iter()
                .map(|e| Row {
                    n: e.n,
                    parity: parity(e.parity),
                    lambda: e.value.to_string(),
                })
                .collect();
            serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n"
        }
    }))
}

fn classify_cmd(c: &Common) -> Result<Output, String> {
    let params = c.params.source()?.operator_params();
    let v = classify(&params);
    Ok(Output::ok(match c.format {
        Format::Csv => format!("{v}\n"),
        Format::Json => serde_json::to_string(&v).expect("verdict serializes") + "\n",
    }))
}

fn weight_sample(c: &Common) -> Result<Output, String> {
    if c.samples < 2 {
        return Err("--samples must be at least 2".into());
    }
    if !(c.eps >= 0.0) {
        return Err("--eps must be nonnegative".into());
    }
    let w = c.params.source()?.weight()?;
    let mut rows = Vec::new();
    for &(a, b) in &w.support {
        let (lo, hi) = (a + c.eps, b - c.eps);
        if lo >= hi {
            return Err(format!("--eps {} leaves nothing of [{a}, {b}]", c.eps));
        }
        for i in 0..c.samples {
            let x = lo + (hi - lo) * i as f64 / (c.samples - 1) as f64;
            rows.push((x, w.evaluate(x)));
        }
    }
    Ok(Output::ok(match c.format {
        Format::Csv => {
            let mut s = String::from("x,w\n");
            for (x, v) in rows {
                let _ = writeln!(s, "{x:?},{v:?}");
            }
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Samples<'a> {
                weight: &'a WeightFunction,
                samples: Vec<(f64, f64)>,
            }
            serde_json::to_string_pretty(&Samples {
                weight: &w,
                samples: rows,
            })
            .expect("samples serialize")
                + "\n"
        }
    }))
}

fn gram(c: &Common) -> Result<Output, String> {
    let source = c.params.source()?;
    let w = source.weight()?;
    let polys: Vec<Polynomial> = sequence(&source.operator_params(), c.n)?
        .into_iter()
        .map(|e| e.poly)
        .collect();
    if c.recurrence {
        let rows = recurrence_coefficients(&w, &polys, c.order).map_err(|e| e.to_string())?;
        return Ok(Output::ok(match c.format {
            Format::Csv => recurrence_csv(&rows),
            Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
        }));
    }
    let g = gram_matrix(&w, &polys, c.order).map_err(|e| e.to_string())?;
    Ok(Output::ok(match c.format {
        Format::Csv => g.to_csv(),
        Format::Json => {
            let rows: Vec<Vec<f64>> = g.entries.row_iter().map(|r| r.iter().copied().collect()).collect();
            serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n"
        }
    }))
}

/// One line of the certification table.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

fn certify(c: &Common) -> Result<Output, String> {
    let source = c.params.source()?;
    let w = source.weight()?;
    let params = source.operator_params();
    let op = DunklOperator::build(&params);
    let seq = sequence(&params, c.n)?;
    let mut checks = Vec::new();

    let bad = seq
        .iter()
        .filter(|e| !residual(&op, &e.poly, &e.lambda).is_ok_and(|r| r.is_zero()))
        .count();
    checks.push(CheckResult {
        check: "eigen_residual_nonzero_count".into(),
        value: bad as f64,
        threshold: 0.0,
        pass: bad == 0,
    });

    let polys: Vec<Polynomial> = seq.iter().map(|e| e.poly.clone()).collect();
    let g = gram_matrix(&w, &polys, c.order).map_err(|e| e.to_string())?;
    let off = g.max_normalized_offdiagonal();
    checks.push(CheckResult {
        check: "orthogonality_max_normalized_offdiagonal".into(),
        value: off,
        threshold: ORTHOGONALITY_TOL,
        pass: off <= ORTHOGONALITY_TOL,
    });
    let min_h = (0..g.dim()).map(|i| g.h(i)).fold(f64::INFINITY, f64::min);
    checks.push(CheckResult {
        check: "min_h_n".into(),
        value: min_h,
        threshold: 0.0,
        pass: min_h > 0.0,
    });

    let mut worst_sym = 0.0f64;
    for i in 0..=c.n {
        for j in i + 1..=c.n {
            let r = symmetry_residual(&w, &op, &Polynomial::x_pow(i), &Polynomial::x_pow(j), c.order)
                .map_err(|e| e.to_string())?;
            worst_sym = worst_sym.max(r.relative());
        }
    }
    checks.push(CheckResult {
        check: "symmetry_max_relative_residual".into(),
        value: worst_sym,
        threshold: SYMMETRY_TOL,
        pass: worst_sym <= SYMMETRY_TOL,
    });

    let mut worst_even = 0.0f64;
    let mut worst_flux = 0.0f64;
    for x in w.interior_samples(50) {
        let r = pearson_residual(&w, &op, x).map_err(|e| e.to_string())?;
        let (e, f) = r.relative();
        worst_even = worst_even.max(e);
        worst_flux = worst_flux.max(f);
    }
    checks.push(CheckResult {
        check: "pearson_even_max_relative".into(),
        value: worst_even,
        threshold: PEARSON_TOL,
        pass: worst_even <= PEARSON_TOL,
    });
    checks.push(CheckResult {
        check: "pearson_flux_max_relative".into(),
        value: worst_flux,
        threshold: PEARSON_TOL,
        pass: worst_flux <= PEARSON_TOL,
    });

    let all = checks.iter().all(|c| c.pass);
    let text = match c.format {
        Format::Csv => {
            let mut s = String::from("check,value,threshold,status\n");
            for r in &checks {
                let _ = writeln!(
                    s,
                    "{},{:e},{:e},{}",
                    r.check,
                    r.value,
                    r.threshold,
                    if r.pass { "PASS" } else { "FAIL" }
                );
            }
            s
        }
        Format::Json => serde_json::to_string_pretty(&checks).expect("checks serialize") + "\n",
    };
    Ok(Output {
        text,
        code: if all { EXIT_OK } else { EXIT_CHECK_FAILED },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("dunkl").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn gen_poly_examples() {
        let (code, out, _) = run_str(&["gen-poly", "--alpha", "0", "--beta", "0", "--c", "1/2", "--N", "2"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[2], "1,-4,-1/4,1,0");
        let (code, out, _) = run_str(&["gen-poly", "--alpha", "0", "--beta", "0", "--c", "1/2", "--N", "0"]);
        assert_eq!(code, 0);
        assert_eq!(out, "degree,lambda,x^0\n0,0,1\n");
        let (code, _, err) = run_str(&["gen-poly", "--tau0", "1", "--tau1", "1", "--N", "3"]);
        assert_eq!(code, 2);
        assert!(err.contains("degree 1"), "{err}");
    }

    #[test]
    fn classify_examples() {
        let (code, out, _) = run_str(&["classify", "--alpha", "0", "--beta", "0", "--c", "1/2"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("GenericBig positive=true"));
        let (_, out, _) = run_str(&["classify", "--tau1", "2"]);
        assert!(out.starts_with("Case_ii positive=false"), "{out}");
        let (_, out, _) = run_str(&["classify", "--mu", "1"]);
        assert!(out.starts_with("NotSymmetrizable"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_str(&["classify", "--alpha", "1", "--mu", "1", "--beta", "0"]).0, 2);
        assert_eq!(run_str(&["classify", "--alpha", "x"]).0, 2);
        assert_eq!(run_str(&["bogus"]).0, 2);
        assert_eq!(run_str(&["--help"]).0, 0);
        let (code, _, err) = run_str(&["weight-sample", "--alpha", "1", "--beta", "0", "--samples", "1"]);
        assert_eq!(code, 2);
        assert!(err.contains("samples"));
    }
}
