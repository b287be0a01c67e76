use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use spinsep::transform::matrix_to_spin_with;
use spinsep::werner::necessary_bound;
use spinsep::{
    check_density, composite_spin, from_spin, is_prime, necessary_check_with, peres_check_with, permute_subsystems,
    sufficient_certificate_with, verify_decomposition, werner_decomposition, werner_density, werner_threshold,
    CertificateReport, ComplexMatrix, CompositeSpinLabel, DensityMatrix, DimVector, Exec, Permutation,
    SeparableDecomposition, Tolerance, Verdict, WernerSpec, Witness,
};

use crate::args::{
    BasisArgs, CertifyArgs, Cli, Command, Direction, PermuteArgs, ReportFormat, TransformArgs, WernerArgs,
};
use crate::error::CliError;
use crate::format::{
    dim_vector, rows_from_matrix, to_json, BasisEntry, BasisFile, CoefficientsFile, DecompositionFile, DensityFile,
    Kind, FORMAT_VERSION,
};

/// Text destined for the two standard streams.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    let tol = Tolerance::new(cli.tol, cli.recon_tol).map_err(|e| CliError::Format(e.to_string()))?;
    match cli.command {
        Command::Basis(a) => basis(a),
        Command::Transform(a) => transform(a, tol),
        Command::Certify(a) => certify(a, tol),
        Command::Werner(a) => werner(a, tol),
        Command::Permute(a) => permute(a, tol),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes `text` to `path`, or returns it for standard output.
fn emit(path: Option<&Path>, text: String, out: &mut Outcome) -> Result<(), CliError> {
    match path {
        Some(p) => write(p, &text),
        None => {
            out.stdout.push_str(&text);
            Ok(())
        }
    }
}

fn validate(m: ComplexMatrix, dims: DimVector, tol: Tolerance) -> Result<DensityMatrix, CliError> {
    check_density(m, dims, tol).map_err(|e| match e {
        spinsep::Error::DimensionMismatch { .. } => CliError::semantic(e),
        other => CliError::InvalidDensity(other.to_string()),
    })
}

fn parse_digits(text: &str, what: &str) -> Result<Vec<usize>, CliError> {
    text.split('.')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Format(format!("{what}: cannot parse {t:?} as a digit")))
        })
        .collect()
}

fn basis(args: BasisArgs) -> Result<Outcome, CliError> {
    let dims = match (args.system.d, args.system.dims) {
        (Some(d), _) => dim_vector(&[d])?,
        (None, Some(dims)) => dim_vector(&dims)?,
        (None, None) => unreachable!("clap requires --d or --dims"),
    };
    let labels: Vec<CompositeSpinLabel> = match &args.label {
        Some(text) => {
            let (j, k) = text
                .split_once(',')
                .ok_or_else(|| CliError::Format(format!("label {text:?} is not of the form J,K")))?;
            let label = CompositeSpinLabel::new(&dims, parse_digits(j, "label")?, parse_digits(k, "label")?)
                .map_err(CliError::semantic)?;
            vec![label]
        }
        None => {
            let n = dims.total();
            (0..n * n)
                .map(|i| CompositeSpinLabel::from_flat(&dims, i / n, i % n))
                .collect()
        }
    };
    let matrices = labels
        .iter()
        .map(|label| {
            let m = composite_spin(&dims, label).map_err(CliError::semantic)?;
            Ok(BasisEntry {
                j: label.j.digits().to_vec(),
                k: label.k.digits().to_vec(),
                matrix: rows_from_matrix(&m),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let doc = BasisFile {
        format_version: FORMAT_VERSION,
        kind: Kind::Basis,
        dims: dims.as_slice().to_vec(),
        matrices,
    };
    let mut out = Outcome::default();
    emit(args.output.as_deref(), to_json(&doc), &mut out)?;
    Ok(out)
}

fn detect_kind(text: &str) -> Result<Kind, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Format(e.to_string()))?;
    let kind = v
        .get("kind")
        .cloned()
        .ok_or_else(|| CliError::Format("missing field `kind`".into()))?;
    serde_json::from_value(kind).map_err(|e| CliError::Format(format!("kind: {e}")))
}

fn transform(args: TransformArgs, tol: Tolerance) -> Result<Outcome, CliError> {
    let text = read(&args.input)?;
    let direction = match args.direction {
        Some(d) => d,
        None => match detect_kind(&text)? {
            Kind::Density => Direction::ToSpin,
            Kind::SpinCoefficients => Direction::FromSpin,
            other => return Err(CliError::Format(format!("cannot transform a {other:?} document"))),
        },
    };
    let doc = match direction {
        Direction::ToSpin => {
            let (dims, m) = DensityFile::parse(&text)?.to_matrix()?;
            let m = if args.strict {
                validate(m, dims.clone(), tol)?.into_matrix()
            } else {
                m
            };
            let coeffs = matrix_to_spin_with(&m, &dims, Exec::default()).map_err(CliError::semantic)?;
            to_json(&CoefficientsFile::new(&coeffs))
        }
        Direction::FromSpin => {
            let coeffs = CoefficientsFile::parse(&text)?.to_coefficients()?;
            let m = from_spin(&coeffs);
            if args.strict {
                validate(m.clone(), coeffs.dims().clone(), tol)?;
            }
            to_json(&DensityFile::new(coeffs.dims(), &m))
        }
    };
    let mut out = Outcome::default();
    emit(args.output.as_deref(), doc, &mut out)?;
    Ok(out)
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::SeparableCertified => "separable-certified",
        Verdict::InseparableCertified => "inseparable-certified",
        Verdict::Inconclusive => "inconclusive",
    }
}

struct CheckResult {
    name: String,
    report: CertificateReport,
}

fn witness_text(w: &Witness) -> Option<String> {
    match w {
        Witness::None => None,
        Witness::Necessary(v) => Some(format!(
            "|rho[{}, {}]| = {} > sqrt(rho[{}, {}] rho[{}, {}]) = {}",
            v.u, v.v, v.rhs, v.j, v.j, v.k, v.k, v.lhs
        )),
        Witness::NegativeEigenvalue { value, .. } => Some(format!("partial transpose has eigenvalue {value}")),
        Witness::Decomposition(d) => Some(format!("{} product terms", d.terms().len())),
    }
}

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::None => Value::Null,
        Witness::Necessary(v) => json!({
            "type": "necessary_violation",
            "j": v.j.digits(), "k": v.k.digits(), "u": v.u.digits(), "v": v.v.digits(),
            "sqrt_diagonal_product": v.lhs, "off_diagonal_modulus": v.rhs,
        }),
        Witness::NegativeEigenvalue { subsystem, value } => json!({
            "type": "negative_eigenvalue", "subsystem": subsystem + 1, "value": value,
        }),
        Witness::Decomposition(d) => json!({ "type": "decomposition", "terms": d.terms().len() }),
    }
}

fn overall(checks: &[CheckResult]) -> Verdict {
    if checks.iter().any(|c| c.report.verdict == Verdict::InseparableCertified) {
        Verdict::InseparableCertified
    } else if checks.iter().any(|c| c.report.verdict == Verdict::SeparableCertified) {
        Verdict::SeparableCertified
    } else {
        Verdict::Inconclusive
    }
}

fn certify(args: CertifyArgs, tol: Tolerance) -> Result<Outcome, CliError> {
    let (dims, m) = DensityFile::parse(&read(&args.input)?)?.to_matrix()?;
    if dims.len() < 2 {
        return Err(CliError::Semantic(format!(
            "certify needs at least two subsystems, got dims {dims}"
        )));
    }
    if let Some(s) = args.subsystem {
        if s == 0 || s > dims.len() {
            return Err(CliError::Semantic(format!(
                "subsystem {s} out of range 1..={}",
                dims.len()
            )));
        }
    }
    let rho = validate(m, dims.clone(), tol)?;
    let none_selected = !(args.necessary || args.peres || args.sufficient);
    let want_all = args.all || (none_selected && args.emit_decomposition.is_none());
    let run_sufficient = want_all || args.sufficient || args.emit_decomposition.is_some();

    let mut checks = Vec::new();
    if want_all || args.necessary {
        checks.push(CheckResult {
            name: "necessary".into(),
            report: necessary_check_with(&rho, tol, Exec::default()).map_err(CliError::semantic)?,
        });
    }
    if want_all || args.peres {
        let subsystems: Vec<usize> = match args.subsystem {
            Some(s) => vec![s - 1],
            None => (0..dims.len()).collect(),
        };
        for s in subsystems {
            checks.push(CheckResult {
                name: format!("peres (subsystem {})", s + 1),
                report: peres_check_with(&rho, s, tol).map_err(CliError::semantic)?,
            });
        }
    }
    let mut decomposition: Option<SeparableDecomposition> = None;
    if run_sufficient {
        let report = sufficient_certificate_with(&rho, Exec::default());
        if let Some(dec) = report.decomposition() {
            let check = verify_decomposition(dec, rho.matrix(), tol).map_err(CliError::semantic)?;
            if let Some(failure) = check.failure {
                return Err(CliError::Semantic(format!(
                    "constructed decomposition failed verification: {failure}"
                )));
            }
            decomposition = Some(dec.clone());
        }
        checks.push(CheckResult {
            name: "sufficient".into(),
            report,
        });
    }
    let l1_norm = checks
        .first()
        .map(|c| c.report.l1_norm)
        .unwrap_or_else(|| spinsep::spin_l1_norm(&spinsep::to_spin(&rho)));
    let verdict = overall(&checks);

    let report = match args.format {
        ReportFormat::Text => {
            let mut s = String::new();
            writeln!(s, "dims: {dims}").unwrap();
            writeln!(s, "spin l1 norm: {l1_norm}").unwrap();
            for c in &checks {
                match witness_text(&c.report.witness) {
                    Some(w) => writeln!(s, "{}: {} ({w})", c.name, verdict_name(c.report.verdict)).unwrap(),
                    None => writeln!(s, "{}: {}", c.name, verdict_name(c.report.verdict)).unwrap(),
                }
            }
            if args.emit_decomposition.is_some() && decomposition.is_none() {
                writeln!(s, "no decomposition: spin l1 norm exceeds 1").unwrap();
            }
            writeln!(s, "verdict: {}", verdict_name(verdict)).unwrap();
            s
        }
        ReportFormat::Json => {
            let doc = json!({
                "format_version": FORMAT_VERSION,
                "kind": Kind::CertificateReport,
                "dims": dims.as_slice(),
                "l1_norm": l1_norm,
                "checks": checks.iter().map(|c| json!({
                    "check": c.name,
                    "verdict": verdict_name(c.report.verdict),
                    "witness": witness_json(&c.report.witness),
                })).collect::<Vec<_>>(),
                "verdict": verdict_name(verdict),
            });
            to_json(&doc)
        }
    };

    let mut out = Outcome::default();
    match (&args.emit_decomposition, &decomposition) {
        (Some(None), Some(dec)) => {
            out.stdout = to_json(&DecompositionFile::new(dec));
            out.stderr = report;
        }
        (Some(Some(path)), Some(dec)) => {
            write(path, &to_json(&DecompositionFile::new(dec)))?;
            out.stdout = report;
        }
        _ => out.stdout = report,
    }
    Ok(out)
}

fn werner(args: WernerArgs, tol: Tolerance) -> Result<Outcome, CliError> {
    let prime = is_prime(args.p);
    if args.emit_decomposition.is_some() && !prime {
        return Err(CliError::Semantic(format!(
            "p must be prime for a decomposition: {} is not prime",
            args.p
        )));
    }
    let threshold = if prime {
        Some(werner_threshold(args.p, args.n).map_err(CliError::semantic)?)
    } else {
        None
    };
    let s = args.s.or(threshold);
    let spec = match s {
        Some(s) => Some(WernerSpec::new(args.p, args.n, s).map_err(CliError::semantic)?),
        None => {
            WernerSpec::new(args.p, args.n, 0.0).map_err(CliError::semantic)?;
            None
        }
    };

    let mut report = String::new();
    match threshold {
        Some(t) => writeln!(report, "threshold {t}").unwrap(),
        None => writeln!(
            report,
            "threshold unknown for composite p = {}; the necessary condition excludes s > {}",
            args.p,
            necessary_bound(args.p, args.n)
        )
        .unwrap(),
    }
    if let Some(spec) = spec {
        let status = match threshold {
            Some(t) if spec.s() <= t => "separable",
            Some(_) => "inseparable",
            None if spec.s() > necessary_bound(args.p, args.n) => "inseparable",
            None => "unknown",
        };
        writeln!(report, "s {}: {status}", spec.s()).unwrap();
    }

    let mut out = Outcome::default();
    if let (Some(path), Some(spec)) = (&args.output, spec) {
        let w = werner_density(spec);
        write(path, &to_json(&DensityFile::new(w.dims(), w.matrix())))?;
    }
    if let (Some(target), Some(spec)) = (&args.emit_decomposition, spec) {
        let dec = werner_decomposition(spec).map_err(CliError::semantic)?;
        let w = werner_density(spec);
        let check = verify_decomposition(&dec, w.matrix(), tol).map_err(CliError::semantic)?;
        if let Some(failure) = check.failure {
            return Err(CliError::Semantic(format!(
                "decomposition failed verification: {failure}"
            )));
        }
        writeln!(
            report,
            "decomposition: {} terms, max reconstruction error {:e}",
            dec.terms().len(),
            check.max_reconstruction_error
        )
        .unwrap();
        let doc = to_json(&DecompositionFile::new(&dec));
        match target {
            Some(path) => write(path, &doc)?,
            None => {
                out.stdout = doc;
                out.stderr = report;
                return Ok(out);
            }
        }
    }
    out.stdout = report;
    Ok(out)
}

fn permute(args: PermuteArgs, tol: Tolerance) -> Result<Outcome, CliError> {
    let (dims, m) = DensityFile::parse(&read(&args.input)?)?.to_matrix()?;
    if args.sigma.len() != dims.len() {
        return Err(CliError::Semantic(format!(
            "permutation has {} entries but the input has {} subsystems",
            args.sigma.len(),
            dims.len()
        )));
    }
    if args.sigma.contains(&0) {
        return Err(CliError::Semantic(format!(
            "permutation {:?} is not 1-based",
            args.sigma
        )));
    }
    let sigma = Permutation::new(args.sigma.iter().map(|x| x - 1).collect())
        .map_err(|_| CliError::Semantic(format!("{:?} is not a permutation of 1..={}", args.sigma, dims.len())))?;
    let m = if args.strict {
        validate(m, dims.clone(), tol)?.into_matrix()
    } else {
        m
    };
    let (permuted, new_dims) = permute_subsystems(&m, &dims, &sigma).map_err(CliError::semantic)?;
    let mut out = Outcome::default();
    emit(
        args.output.as_deref(),
        to_json(&DensityFile::new(&new_dims, &permuted)),
        &mut out,
    )?;
    Ok(out)
}
