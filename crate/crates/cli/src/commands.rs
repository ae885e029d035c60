use std::fs;
use std::path::{Path, PathBuf};

use cubic_jordan::correspondence::{roundtrip_alpha_beta, roundtrip_beta_alpha};
use cubic_jordan::eiconal::{check_gradient_identities, point_check};
use cubic_jordan::jordan::{AlgebraFile, BASEPOINT_CHECK};
use cubic_jordan::report::CheckMode;
use cubic_jordan::{
    alpha, beta, verify_eiconal, CatalogEntry, CheckOutcome, CubicJordanAlgebra, EiconalTriple,
    Error, Family, Report, SampleConfig,
};
use serde::Serialize;
use serde_json::Value;

use crate::certificate::{Certificate, CertificateBuilder};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Schema { path: PathBuf, message: String },
    #[error(transparent)]
    Library(#[from] Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Schema {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path, value: Value) -> CliResult<T> {
    serde_json::from_value(value).map_err(|e| CliError::Schema {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn write_json(path: &Path, value: &impl Serialize) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("library values serialize to JSON");
    text.push('\n');
    fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn load_triple(path: &Path) -> CliResult<EiconalTriple> {
    parse(path, read_json(path)?)
}

/// Reads an algebra file. Algebraic defects of a well-formed file come
/// back as a failing check rather than an error.
fn load_algebra(path: &Path) -> CliResult<Result<CubicJordanAlgebra, CheckOutcome>> {
    let file: AlgebraFile = parse(path, read_json(path)?)?;
    algebra_from_file(path, file)
}

fn algebra_from_file(
    path: &Path,
    file: AlgebraFile,
) -> CliResult<Result<CubicJordanAlgebra, CheckOutcome>> {
    match file.into_algebra() {
        Ok(alg) => Ok(Ok(alg)),
        Err(e @ Error::NotBasepoint(_)) => Ok(Err(CheckOutcome::error(
            BASEPOINT_CHECK,
            CheckMode::Exact,
            &e,
        ))),
        Err(e @ Error::DegenerateTraceForm) => Ok(Err(CheckOutcome::error(
            "trace form is nondegenerate",
            CheckMode::Exact,
            &e,
        ))),
        Err(e @ Error::NotCommutative { .. }) => Ok(Err(CheckOutcome::error(
            "commutativity of structure constants",
            CheckMode::Exact,
            &e,
        ))),
        Err(e) => Err(CliError::Schema {
            path: path.to_path_buf(),
            message: e.to_string(),
        }),
    }
}

fn eiconal_coefficient_check(t: &EiconalTriple) -> CheckOutcome {
    CheckOutcome::from_residuals("eiconal equation", t.residual().map(|r| vec![r]))
}

#[derive(Serialize)]
struct OutputInfo<'a> {
    kind: &'a str,
    dim: usize,
}

pub fn catalog_emit(family: &str, output: &Path, cfg: SampleConfig) -> CliResult<Certificate> {
    let family: Family = family.parse()?;
    let mut cert = CertificateBuilder::new("catalog emit", cfg);
    cert.extra("family", family.to_string());
    match family.build()? {
        CatalogEntry::Triple(t) => {
            cert.push(eiconal_coefficient_check(&t));
            cert.extra("output", OutputInfo { kind: "triple", dim: t.dim() });
            write_json(output, &t)?;
        }
        CatalogEntry::Algebra(a) => {
            cert.push(a.check_basepoint());
            cert.push(a.check_jordan_identity(&cfg));
            cert.extra("output", OutputInfo { kind: "algebra", dim: a.dim() });
            write_json(output, &a)?;
        }
    }
    Ok(cert.finish())
}

pub fn verify_eiconal_file(path: &Path, cfg: SampleConfig) -> CliResult<Certificate> {
    let t = load_triple(path)?;
    let mut cert = CertificateBuilder::new("verify eiconal", cfg);
    let eiconal = verify_eiconal(&t);
    cert.push(eiconal_coefficient_check(&t));
    cert.push(point_check(&t, &cfg));
    if eiconal.passed() {
        cert.extend(check_gradient_identities(&t, &cfg)?);
    }
    cert.extra("dim", t.dim());
    cert.extra("eiconal", &eiconal);
    Ok(cert.finish())
}

pub fn verify_jordan_file(path: &Path, cfg: SampleConfig) -> CliResult<Certificate> {
    let mut cert = CertificateBuilder::new("verify jordan", cfg);
    match load_algebra(path)? {
        Ok(alg) => {
            cert.extra("dim", alg.dim());
            cert.extend(alg.check_all(&cfg));
            cert.extend(alg.check_lemma(&cfg));
        }
        Err(failed) => cert.push(failed),
    }
    Ok(cert.finish())
}

pub fn verify_lemma_file(path: &Path, cfg: SampleConfig) -> CliResult<Certificate> {
    let mut cert = CertificateBuilder::new("verify lemma", cfg);
    match load_algebra(path)? {
        Ok(alg) => {
            cert.extra("dim", alg.dim());
            cert.push(alg.check_basepoint());
            cert.extend(alg.check_lemma(&cfg));
        }
        Err(failed) => cert.push(failed),
    }
    Ok(cert.finish())
}

pub fn build_beta(input: &Path, output: &Path, cfg: SampleConfig) -> CliResult<Certificate> {
    let t = load_triple(input)?;
    let mut cert = CertificateBuilder::new("build beta", cfg);
    let mut pre = Report::new();
    pre.push(eiconal_coefficient_check(&t));
    cert.extend_staged("input", pre);
    if !cert.passed() {
        return Ok(cert.finish());
    }
    let alg = beta(&t)?;
    write_json(output, &alg)?;
    cert.extra("output", OutputInfo { kind: "algebra", dim: alg.dim() });
    cert.extend_staged("output", alg.check_all(&cfg));
    Ok(cert.finish())
}

pub fn build_alpha(input: &Path, output: &Path, cfg: SampleConfig) -> CliResult<Certificate> {
    let mut cert = CertificateBuilder::new("build alpha", cfg);
    let alg = match load_algebra(input)? {
        Ok(alg) => alg,
        Err(failed) => {
            cert.push(failed);
            return Ok(cert.finish());
        }
    };
    cert.extend_staged("input", alg.check_all(&cfg));
    if !cert.passed() {
        return Ok(cert.finish());
    }
    let t = alpha(&alg)?;
    write_json(output, &t)?;
    cert.extra("output", OutputInfo { kind: "triple", dim: t.dim() });
    let mut post = Report::new();
    post.push(eiconal_coefficient_check(&t));
    post.push(point_check(&t, &cfg));
    cert.extend_staged("output", post);
    Ok(cert.finish())
}

pub fn roundtrip(path: &Path, cfg: SampleConfig) -> CliResult<Certificate> {
    let value = read_json(path)?;
    let is_triple = value.get("space").is_some();
    let is_algebra = value.get("unit").is_some();
    if is_triple == is_algebra {
        return Err(CliError::Schema {
            path: path.to_path_buf(),
            message: "expected an eiconal triple or an algebra file".into(),
        });
    }
    if is_triple {
        let t: EiconalTriple = parse(path, value)?;
        let mut cert = CertificateBuilder::new("roundtrip alpha-beta", cfg);
        cert.extra("dim", t.dim());
        let input = eiconal_coefficient_check(&t);
        let ok = input.passed();
        cert.push(input);
        if ok {
            cert.push(roundtrip_alpha_beta(&t)?);
        }
        return Ok(cert.finish());
    }
    let mut cert = CertificateBuilder::new("roundtrip beta-alpha", cfg);
    let alg = match algebra_from_file(path, parse(path, value)?)? {
        Ok(alg) => alg,
        Err(failed) => {
            cert.push(failed);
            return Ok(cert.finish());
        }
    };
    cert.extra("dim", alg.dim());
    match roundtrip_beta_alpha(&alg, &cfg) {
        Ok((phi, report)) => {
            cert.extend(report);
            cert.extra("phi", phi.matrix());
        }
        Err(e @ (Error::RoundTripFailed(_) | Error::NotEiconal(_))) => {
            cert.push(CheckOutcome::error("beta(alpha(J)) = J", CheckMode::Exact, &e));
        }
        Err(e) => return Err(e.into()),
    }
    Ok(cert.finish())
}
