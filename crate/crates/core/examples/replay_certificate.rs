//! Issue a certificate, write it, replay it, then tamper with it.

use fanokit::certify::{issue, verify_certificate, write_certificate, CertConfig, CertKind, CertRequest};
use fanokit::Parameters;

fn main() -> fanokit::Result<()> {
    let req = CertRequest {
        kind: CertKind::Rigidity,
        params: Parameters::new(3, 1, vec![4])?,
        p_or_q: 1009,
        seed: 42,
        trials: 5,
        config: CertConfig::default(),
    };
    let cert = issue(&req)?;
    let path = std::env::temp_dir().join(cert.file_name());
    write_certificate(&cert, &path)?;
    println!("wrote {}", path.display());
    println!("replay valid: {}", verify_certificate(&path)?.valid);

    let text = std::fs::read_to_string(&path).map_err(|source| fanokit::Error::Io { path: path.clone(), source })?;
    let tampered = text.replacen("\"nullity\": 0", "\"nullity\": 1", 1);
    std::fs::write(&path, tampered).map_err(|source| fanokit::Error::Io { path: path.clone(), source })?;
    let report = verify_certificate(&path)?;
    println!("after tampering: valid {}, mismatches {:?}", report.valid, report.mismatches);
    Ok(())
}
