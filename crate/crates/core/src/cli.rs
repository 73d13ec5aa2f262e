//! Subcommands behind the `fanokit` binary.
//!
//! Exit codes: 0 success, 1 other failure, 2 usage or invalid parameters,
//! 3 regime refusal, 4 cap refusal, 5 verification mismatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_traits::Signed;
use serde_json::{json, Value};

use crate::certify::{issue, verify_certificate, write_certificate, CertConfig, CertKind, CertRequest, FILE_SUFFIX};
use crate::error::Error;
use crate::fano::{enumerate_planes, plane_count, DEFAULT_PLANE_CAP};
use crate::invariants::{classify, delta_h, dim_formulas, lemma_scan, t_invariant, GridBounds, Parameters};
use crate::singular::DEFAULT_POINT_CAP;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_REGIME: i32 = 3;
pub const EXIT_CAP: i32 = 4;
pub const EXIT_MISMATCH: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "fanokit", version, about = "Finite-field experiments on complete intersections containing a k-plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ParamArgs {
    /// Ambient projective dimension.
    #[arg(short = 'm')]
    m: usize,
    /// Plane dimension.
    #[arg(short = 'k')]
    k: usize,
    /// Degrees of the defining forms (repeat or list).
    #[arg(short = 'd', required = true, num_args = 1.., action = clap::ArgAction::Append)]
    d: Vec<u32>,
}

impl ParamArgs {
    fn params(&self) -> Result<Parameters, Error> {
        Parameters::new(self.m, self.k, self.d.clone())
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print t, delta_h, dimension formulas and the regime.
    Invariants {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        json: bool,
        #[arg(long, env = "FANOKIT_OUT")]
        out: Option<PathBuf>,
    },
    /// Rigidity, Fano enumeration and singular-locus checks over a seed range (t > 0 only).
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        /// Field for plane enumeration.
        #[arg(long, default_value_t = 7)]
        q: u64,
        /// Field for rank certificates.
        #[arg(long, default_value_t = 1009)]
        p: u64,
        /// Primes for singular-locus point counts.
        #[arg(long, value_delimiter = ',', default_values_t = vec![101u64, 211])]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 50)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_PLANE_CAP)]
        cap: u64,
        #[arg(long, default_value_t = DEFAULT_POINT_CAP)]
        point_cap: u64,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        json: bool,
        #[arg(long, env = "FANOKIT_OUT")]
        out: Option<PathBuf>,
    },
    /// Rank certificates only, in any regime.
    Rigidity {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 1009)]
        p: u64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        json: bool,
        #[arg(long, env = "FANOKIT_OUT")]
        out: Option<PathBuf>,
    },
    /// Search a grid for delta_h <= 0 with t > 0.
    LemmaScan {
        #[arg(long, default_value_t = 10)]
        m_max: usize,
        #[arg(long, default_value_t = 4)]
        s_max: usize,
        #[arg(long, default_value_t = 6)]
        d_max: u32,
        #[arg(long)]
        json: bool,
    },
    /// Expand det of the leading square block of C symbolically.
    Detcheck {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        json: bool,
        #[arg(long, env = "FANOKIT_OUT")]
        out: Option<PathBuf>,
    },
    /// List or count the k-planes of P^m(F_q).
    Enumerate {
        #[arg(short = 'm')]
        m: usize,
        #[arg(short = 'k')]
        k: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        count_only: bool,
        #[arg(long, default_value_t = DEFAULT_PLANE_CAP)]
        cap: u64,
    },
    /// Replay certificate files (or directories of them).
    Replay {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParams(_) | Error::NotPrime(_) | Error::OutOfRange(_) => EXIT_USAGE,
        Error::Regime(_) => EXIT_REGIME,
        Error::CapExceeded { .. } | Error::TooLarge(_) => EXIT_CAP,
        _ => EXIT_OTHER,
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Error> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParams(format!("--jobs: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn save(cert: &crate::certify::Certificate, dir: &Option<PathBuf>, out: &mut dyn Write) -> Result<(), Error> {
    if let Some(dir) = dir {
        let path = dir.join(cert.file_name());
        write_certificate(cert, &path)?;
        let _ = writeln!(out, "wrote {}", path.display());
    }
    Ok(())
}

fn emit(out: &mut dyn Write, v: &Value) {
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json"));
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, Error> {
    match cmd {
        Command::Invariants { params, json, out: dir } => {
            let params = params.params()?;
            let req = CertRequest {
                kind: CertKind::Invariants,
                params: params.clone(),
                p_or_q: 2,
                seed: 0,
                trials: 1,
                config: CertConfig::default(),
            };
            let cert = issue(&req)?;
            if json {
                emit(out, &cert.payload);
            } else {
                let r = classify(&params);
                let _ = writeln!(out, "params            {params}");
                let _ = writeln!(out, "t                 {}", r.t);
                let _ = writeln!(out, "W proper          {}", r.w_is_proper);
                let _ = writeln!(out, "codim W           {}", r.w_codim);
                let _ = writeln!(out, "expected Fano dim {}", r.expected_fano_dim);
                let _ = writeln!(out, "smooth possible   {}", r.smooth_possible);
                let _ = writeln!(out, "expected sing dim {}", r.expected_sing_dim);
                for h in -1..params.k() as i64 {
                    let dims = dim_formulas(&params, h)?;
                    let _ = writeln!(
                        out,
                        "h={h:<3} delta_h={:<6} dim_J={:<8} dim_T_h={:<8} dim_G2_h={}",
                        delta_h(&params, h)?,
                        dims.dim_j,
                        dims.dim_th,
                        dims.dim_g2h
                    );
                }
            }
            save(&cert, &dir, out)?;
            Ok(EXIT_OK)
        }
        Command::Verify { params, q, p, primes, trials, seed, cap, point_cap, jobs, json, out: dir } => {
            let params = params.params()?;
            let t = t_invariant(&params);
            if !t.is_positive() {
                return Err(Error::Regime(format!(
                    "t = {t} <= 0 for {params}: every complete intersection contains {}-planes (expected Fano dimension {})",
                    params.k(),
                    -&t
                )));
            }
            let mk = |kind, modulus, config| CertRequest { kind, params: params.clone(), p_or_q: modulus, seed, trials, config };
            let rig = mk(CertKind::Rigidity, p, CertConfig::default());
            let fano = mk(CertKind::Fano, q, CertConfig { primes: None, cap: Some(cap) });
            let sing = mk(CertKind::Singular, primes[0], CertConfig { primes: Some(primes.clone()), cap: Some(point_cap) });
            let certs = with_jobs(jobs, || -> Result<_, Error> { Ok((issue(&rig)?, issue(&fano)?, issue(&sing)?)) })??;
            let summary = json!({
                "params": params,
                "seeds": format!("{}..{}", seed, seed + trials),
                "rigid": certs.0.payload["summary"]["rigid"],
                "functional_consistency": certs.0.payload["summary"]["functional_consistency"],
                "standard_found": certs.1.payload["summary"]["standard_found"],
                "unique_plane": certs.1.payload["summary"]["unique_plane"],
                "sing_dim_expected": certs.2.payload["expected"],
                "sing_dim_matches": certs.2.payload["summary"]["matches"],
                "p": p,
                "q": q,
                "primes": primes,
            });
            if json {
                emit(out, &summary);
            } else {
                let _ = writeln!(out, "params          {params}  (t = {t})");
                let _ = writeln!(out, "seeds           {}", summary["seeds"].as_str().unwrap_or(""));
                let _ = writeln!(out, "rigid (p={p:<5})  {}", summary["rigid"].as_str().unwrap_or(""));
                let _ = writeln!(out, "standard found  {}", summary["standard_found"].as_str().unwrap_or(""));
                let _ = writeln!(out, "unique (q={q:<3})  {}", summary["unique_plane"].as_str().unwrap_or(""));
                let _ = writeln!(
                    out,
                    "sing dim        expected {}, matches {}",
                    summary["sing_dim_expected"],
                    summary["sing_dim_matches"].as_str().unwrap_or("")
                );
            }
            for c in [&certs.0, &certs.1, &certs.2] {
                save(c, &dir, out)?;
            }
            Ok(EXIT_OK)
        }
        Command::Rigidity { params, p, trials, seed, jobs, json, out: dir } => {
            let params = params.params()?;
            let req = CertRequest { kind: CertKind::Rigidity, params: params.clone(), p_or_q: p, seed, trials, config: CertConfig::default() };
            let cert = with_jobs(jobs, || issue(&req))??;
            if json {
                emit(out, &cert.payload["summary"]);
            } else {
                let s = &cert.payload["summary"];
                let _ = writeln!(out, "params      {params}  (t = {})", t_invariant(&params));
                let _ = writeln!(out, "rigid       {}", s["rigid"].as_str().unwrap_or(""));
                let _ = writeln!(out, "consistent  {}", s["functional_consistency"].as_str().unwrap_or(""));
                let _ = writeln!(out, "nullities   {}", s["nullity_histogram"]);
            }
            save(&cert, &dir, out)?;
            Ok(EXIT_OK)
        }
        Command::LemmaScan { m_max, s_max, d_max, json } => {
            let bounds = GridBounds { m_max, s_max, d_max };
            let points = bounds.points().len();
            let found = lemma_scan(&bounds);
            if json {
                emit(out, &json!({ "grid_points": points, "counterexamples": found }));
            } else {
                let _ = writeln!(out, "{points} grid points, {} counterexamples", found.len());
                for c in &found {
                    let _ = writeln!(out, "  {} h={} delta={} t={}", c.params, c.h, c.delta, c.t);
                }
            }
            Ok(EXIT_OK)
        }
        Command::Detcheck { params, json, out: dir } => {
            let params = params.params()?;
            let req = CertRequest { kind: CertKind::Determinant, params: params.clone(), p_or_q: 2, seed: 0, trials: 1, config: CertConfig::default() };
            let cert = issue(&req)?;
            if json {
                emit(out, &cert.payload);
            } else {
                let r: crate::rigidity::DeterminantReport = serde_json::from_value(cert.payload.clone())?;
                if r.det_is_nonzero_poly {
                    let _ = writeln!(
                        out,
                        "det != 0 ({}x{}, {} terms), leading coeff {:+}",
                        r.size, r.size, r.num_terms, r.leading_coeff
                    );
                    let _ = writeln!(out, "leading monomial {}", r.leading_monomial);
                } else {
                    let _ = writeln!(out, "det == 0 ({}x{})", r.size, r.size);
                }
            }
            save(&cert, &dir, out)?;
            Ok(EXIT_OK)
        }
        Command::Enumerate { m, k, q, count_only, cap } => {
            let planes = enumerate_planes(m, k, q, cap)?;
            if count_only {
                let _ = writeln!(out, "{}", plane_count(m, k, q));
            } else {
                for pl in planes {
                    let _ = writeln!(out, "{:?}", pl.basis().to_rows());
                }
            }
            Ok(EXIT_OK)
        }
        Command::Replay { paths } => {
            let mut files = Vec::new();
            for p in paths {
                collect_certs(&p, &mut files)?;
            }
            let mut bad = 0;
            for f in &files {
                let rep = verify_certificate(f)?;
                if rep.valid {
                    let _ = writeln!(out, "ok        {}", f.display());
                } else {
                    bad += 1;
                    let _ = writeln!(out, "MISMATCH  {}: {}", f.display(), rep.mismatches.join(", "));
                }
            }
            let _ = writeln!(out, "{} certificates, {} mismatched", files.len(), bad);
            Ok(if bad == 0 { EXIT_OK } else { EXIT_MISMATCH })
        }
    }
}

fn collect_certs(path: &Path, out: &mut Vec<PathBuf>) -> Result<(), Error> {
    if path.is_dir() {
        let mut entries: Vec<PathBuf> = std::fs::read_dir(path)
            .map_err(|source| Error::Io { path: path.to_path_buf(), source })?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.to_string_lossy().ends_with(FILE_SUFFIX))
            .collect();
        entries.sort();
        out.extend(entries);
    } else {
        out.push(path.to_path_buf());
    }
    Ok(())
}
