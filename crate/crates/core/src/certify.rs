//! Self-contained JSON certificates that replay from `(params, modulus, seed)`.
//!
//! A certificate covers `trials` consecutive seeds starting at `seed`.
//! JSON is canonical: keys sorted, pretty-printed, no floating-point
//! values, integers above 2^53 written as decimal strings. Replaying a
//! certificate recomputes its payload and compares it field by field;
//! `wall_time_ms` and `toolkit_version` are not compared.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fano::{fano_points, PlaneRecord, DEFAULT_PLANE_CAP};
use crate::invariants::{classify, delta_h, dim_formulas, t_invariant, Parameters};
use crate::rigidity::{functional_consistency, rigidity_check, symbolic_det_leading, COL_ORDER, ROW_ORDER};
use crate::sampler::{sample_ci, CISample, SampleOrigin};
use crate::singular::{sing_dim_estimate, SingDimEstimate, DEFAULT_POINT_CAP};

pub const SCHEMA_VERSION: &str = "fanocert/1";
pub const FILE_SUFFIX: &str = ".fanocert.json";
pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Above this many coefficients in one certificate, samples are stored as digests.
pub const COEFFICIENT_CAP: usize = 10_000;
pub const DIGEST_ALGORITHM: &str = "sha256";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertKind {
    Rigidity,
    Fano,
    Singular,
    Invariants,
    Determinant,
}

impl CertKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CertKind::Rigidity => "rigidity",
            CertKind::Fano => "fano",
            CertKind::Singular => "singular",
            CertKind::Invariants => "invariants",
            CertKind::Determinant => "determinant",
        }
    }
}

/// Kind-specific knobs that affect the payload.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primes: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<u64>,
}

/// Everything needed to (re)compute a payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertRequest {
    pub kind: CertKind,
    pub params: Parameters,
    pub p_or_q: u64,
    pub seed: u64,
    pub trials: u64,
    pub config: CertConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: String,
    pub kind: CertKind,
    pub params: Parameters,
    pub p_or_q: u64,
    pub seed: u64,
    pub trials: u64,
    #[serde(default)]
    pub config: CertConfig,
    pub payload: Value,
    pub toolkit_version: String,
    pub wall_time_ms: u64,
}

impl Certificate {
    pub fn request(&self) -> CertRequest {
        CertRequest {
            kind: self.kind,
            params: self.params.clone(),
            p_or_q: self.p_or_q,
            seed: self.seed,
            trials: self.trials,
            config: self.config.clone(),
        }
    }

    /// Conventional file name, e.g. `rigidity_m3_k1_d4_p1009_s0x100.fanocert.json`.
    pub fn file_name(&self) -> String {
        format!(
            "{}_{}_p{}_s{}x{}{}",
            self.kind.as_str(),
            self.params.label(),
            self.p_or_q,
            self.seed,
            self.trials,
            FILE_SUFFIX
        )
    }
}

fn sample_record(sample: &CISample, embed: bool) -> Value {
    let attempt = match sample.origin() {
        SampleOrigin::Seeded { attempt, .. } => attempt,
        SampleOrigin::Explicit => 0,
    };
    let tables = json!({ "c": sample.coefficients(), "r": sample.residual_table() });
    if embed {
        json!({ "attempt": attempt, "coefficients": tables })
    } else {
        let canonical = serde_json::to_string(&tables).expect("tables serialize");
        json!({
            "attempt": attempt,
            "digest": hex::encode(Sha256::digest(canonical.as_bytes())),
            "digest_algorithm": DIGEST_ALGORITHM,
        })
    }
}

fn seeds(req: &CertRequest) -> Vec<u64> {
    (0..req.trials).map(|i| req.seed + i).collect()
}

fn embed_samples(req: &CertRequest, per_sample: usize) -> bool {
    per_sample.saturating_mul(req.trials as usize) <= COEFFICIENT_CAP
}

fn ratio(n: usize, d: usize) -> String {
    format!("{n}/{d}")
}

/// Recompute the payload of a certificate from its request.
pub fn compute_payload(req: &CertRequest) -> Result<Value> {
    if req.trials == 0 {
        return Err(Error::InvalidParams("trials must be positive".into()));
    }
    let params = &req.params;
    match req.kind {
        CertKind::Invariants => {
            let deltas: Vec<Value> = (-1..params.k() as i64)
                .map(|h| Ok(json!({ "h": h, "delta": crate::jsonint::to_value(&delta_h(params, h)?) })))
                .collect::<Result<_>>()?;
            let dims: Vec<Value> = (-1..params.k() as i64)
                .map(|h| Ok(serde_json::to_value(dim_formulas(params, h)?)?))
                .collect::<Result<_>>()?;
            Ok(json!({
                "regime": serde_json::to_value(classify(params))?,
                "t": crate::jsonint::to_value(&t_invariant(params)),
                "deltas": deltas,
                "dims": dims,
            }))
        }
        CertKind::Determinant => Ok(serde_json::to_value(symbolic_det_leading(params)?)?),
        CertKind::Rigidity => {
            let runs: Vec<(Value, bool, usize, bool)> = seeds(req)
                .into_par_iter()
                .map(|seed| {
                    let sample = sample_ci(params, req.p_or_q, seed)?;
                    let report = rigidity_check(&sample);
                    let consistent = functional_consistency(&sample, seed);
                    let embed = embed_samples(req, sample.num_coefficients());
                    let v = json!({
                        "seed": seed,
                        "rank": report.rank,
                        "nullity": report.nullity,
                        "is_rigid": report.is_rigid,
                        "functional_consistency": consistent,
                        "sample": sample_record(&sample, embed),
                    });
                    Ok((v, report.is_rigid, report.nullity, consistent))
                })
                .collect::<Result<_>>()?;
            let n = runs.len();
            let rigid = runs.iter().filter(|r| r.1).count();
            let consistent = runs.iter().filter(|r| r.3).count();
            let mut hist = Map::new();
            for r in &runs {
                let e = hist.entry(r.2.to_string()).or_insert(json!(0));
                *e = json!(e.as_u64().unwrap_or(0) + 1);
            }
            Ok(json!({
                "row_order": ROW_ORDER,
                "col_order": COL_ORDER,
                "columns": params.grassmannian_dim(),
                "runs": runs.into_iter().map(|r| r.0).collect::<Vec<_>>(),
                "summary": {
                    "trials": n,
                    "rigid": ratio(rigid, n),
                    "functional_consistency": ratio(consistent, n),
                    "nullity_histogram": hist,
                },
            }))
        }
        CertKind::Fano => {
            let cap = req.config.cap.unwrap_or(DEFAULT_PLANE_CAP);
            let runs: Vec<(Value, bool, usize)> = seeds(req)
                .into_iter()
                .map(|seed| {
                    let sample = sample_ci(params, req.p_or_q, seed)?;
                    let res = fano_points(&sample, cap)?;
                    let embed = embed_samples(req, sample.num_coefficients());
                    let planes: Vec<PlaneRecord> = res.planes.iter().map(PlaneRecord::from).collect();
                    let v = json!({
                        "seed": seed,
                        "count": res.count,
                        "contains_standard": res.contains_standard,
                        "planes": planes,
                        "sample": sample_record(&sample, embed),
                    });
                    Ok((v, res.contains_standard, res.count))
                })
                .collect::<Result<_>>()?;
            let n = runs.len();
            let found = runs.iter().filter(|r| r.1).count();
            let unique = runs.iter().filter(|r| r.2 == 1).count();
            Ok(json!({
                "q": req.p_or_q,
                "runs": runs.into_iter().map(|r| r.0).collect::<Vec<_>>(),
                "summary": {
                    "trials": n,
                    "standard_found": ratio(found, n),
                    "unique_plane": ratio(unique, n),
                    "unique_percent": unique * 100 / n,
                },
            }))
        }
        CertKind::Singular => {
            let primes = req
                .config
                .primes
                .clone()
                .ok_or_else(|| Error::Schema("singular certificates need config.primes".into()))?;
            let cap = req.config.cap.unwrap_or(DEFAULT_POINT_CAP);
            let runs: Vec<(Value, bool, bool)> = seeds(req)
                .into_par_iter()
                .map(|seed| {
                    let rep = sing_dim_estimate(params, seed, &primes, cap)?;
                    let inconclusive = rep.estimate == SingDimEstimate::Inconclusive;
                    let matches = rep.matches;
                    let mut v = serde_json::to_value(&rep)?;
                    v["seed"] = json!(seed);
                    Ok((v, matches, inconclusive))
                })
                .collect::<Result<_>>()?;
            let n = runs.len();
            let matches = runs.iter().filter(|r| r.1).count();
            let inconclusive = runs.iter().filter(|r| r.2).count();
            Ok(json!({
                "assumption": "singular locus examined on the plane only",
                "expected": classify(params).expected_sing_dim,
                "runs": runs.into_iter().map(|r| r.0).collect::<Vec<_>>(),
                "summary": {
                    "trials": n,
                    "matches": ratio(matches, n),
                    "inconclusive": inconclusive,
                },
            }))
        }
    }
}

/// Compute a fresh certificate, timing the computation.
pub fn issue(req: &CertRequest) -> Result<Certificate> {
    let start = Instant::now();
    let payload = compute_payload(req)?;
    Ok(Certificate {
        schema_version: SCHEMA_VERSION.to_string(),
        kind: req.kind,
        params: req.params.clone(),
        p_or_q: req.p_or_q,
        seed: req.seed,
        trials: req.trials,
        config: req.config.clone(),
        payload,
        toolkit_version: TOOLKIT_VERSION.to_string(),
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

fn reject_floats(v: &Value, path: &str) -> Result<()> {
    match v {
        Value::Number(n) if n.is_f64() => Err(Error::Schema(format!("floating-point value at {path}"))),
        Value::Array(a) => a.iter().enumerate().try_for_each(|(i, x)| reject_floats(x, &format!("{path}[{i}]"))),
        Value::Object(o) => o.iter().try_for_each(|(k, x)| reject_floats(x, &format!("{path}.{k}"))),
        _ => Ok(()),
    }
}

/// Canonical bytes for a certificate.
pub fn to_canonical_json(cert: &Certificate) -> Result<String> {
    let v = serde_json::to_value(cert)?;
    reject_floats(&v, "$")?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub fn write_certificate(cert: &Certificate, path: &Path) -> Result<()> {
    let text = to_canonical_json(cert)?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source })?;
    }
    fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

pub fn read_certificate(path: &Path) -> Result<Certificate> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let raw: Value = serde_json::from_str(&text)?;
    match raw.get("schema_version").and_then(Value::as_str) {
        Some(SCHEMA_VERSION) => {}
        Some(other) => return Err(Error::Schema(format!("unknown schema_version {other:?}"))),
        None => return Err(Error::Schema("missing schema_version".into())),
    }
    Ok(serde_json::from_value(raw)?)
}

/// Outcome of replaying a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub path: PathBuf,
    pub valid: bool,
    /// JSON paths where stored and replayed payloads differ.
    pub mismatches: Vec<String>,
}

fn diff(stored: &Value, fresh: &Value, path: String, out: &mut Vec<String>) {
    match (stored, fresh) {
        (Value::Object(a), Value::Object(b)) => {
            let keys: std::collections::BTreeSet<&String> = a.keys().chain(b.keys()).collect();
            for k in keys {
                match (a.get(k), b.get(k)) {
                    (Some(x), Some(y)) => diff(x, y, format!("{path}.{k}"), out),
                    _ => out.push(format!("{path}.{k}")),
                }
            }
        }
        (Value::Array(a), Value::Array(b)) if a.len() == b.len() => {
            for (i, (x, y)) in a.iter().zip(b).enumerate() {
                diff(x, y, format!("{path}[{i}]"), out);
            }
        }
        _ if stored == fresh => {}
        _ => out.push(path),
    }
}

/// Replay one certificate in memory.
pub fn verify_loaded(cert: &Certificate) -> Result<Vec<String>> {
    let fresh = compute_payload(&cert.request())?;
    let mut mismatches = Vec::new();
    diff(&cert.payload, &fresh, "payload".to_string(), &mut mismatches);
    Ok(mismatches)
}

pub fn verify_certificate(path: &Path) -> Result<VerifyReport> {
    let cert = read_certificate(path)?;
    let mismatches = verify_loaded(&cert)?;
    Ok(VerifyReport { path: path.to_path_buf(), valid: mismatches.is_empty(), mismatches })
}
