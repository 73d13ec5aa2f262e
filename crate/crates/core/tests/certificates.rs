use fanokit::certify::{
    issue, read_certificate, to_canonical_json, verify_certificate, write_certificate, CertConfig, CertKind, CertRequest,
};
use fanokit::Parameters;
use proptest::prelude::*;

fn small_params() -> impl Strategy<Value = Parameters> {
    prop_oneof![
        Just(Parameters::new(3, 1, vec![3]).unwrap()),
        Just(Parameters::new(3, 1, vec![4]).unwrap()),
        Just(Parameters::new(4, 1, vec![3]).unwrap()),
        Just(Parameters::new(4, 2, vec![3]).unwrap()),
        Just(Parameters::new(4, 1, vec![2, 2]).unwrap()),
    ]
}

fn request() -> impl Strategy<Value = CertRequest> {
    (small_params(), 0u64..1 << 40, 1u64..4, 0usize..4).prop_map(|(params, seed, trials, kind)| {
        let (kind, p_or_q, config) = match kind {
            0 => (CertKind::Rigidity, 1009, CertConfig::default()),
            1 => (CertKind::Fano, 3, CertConfig { primes: None, cap: Some(100_000) }),
            2 => (CertKind::Singular, 31, CertConfig { primes: Some(vec![31, 37]), cap: None }),
            _ => (CertKind::Invariants, 2, CertConfig::default()),
        };
        CertRequest { kind, params, p_or_q, seed, trials, config }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn write_read_replay(req in request()) {
        let cert = issue(&req).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(cert.file_name());
        write_certificate(&cert, &path).unwrap();
        let back = read_certificate(&path).unwrap();
        prop_assert_eq!(&back, &cert);
        prop_assert_eq!(to_canonical_json(&back).unwrap(), std::fs::read_to_string(&path).unwrap());
        prop_assert!(verify_certificate(&path).unwrap().valid);
    }

    #[test]
    fn reissue_is_byte_identical_up_to_timing(req in request()) {
        let mut a = issue(&req).unwrap();
        let mut b = issue(&req).unwrap();
        a.wall_time_ms = 0;
        b.wall_time_ms = 0;
        prop_assert_eq!(to_canonical_json(&a).unwrap(), to_canonical_json(&b).unwrap());
    }
}

#[test]
fn golden_sample() {
    let params = Parameters::new(3, 1, vec![4]).unwrap();
    let s = fanokit::sample_ci(&params, 7, 0).unwrap();
    let rendered: Vec<String> = s.forms().iter().map(ToString::to_string).collect();
    let golden = include_str!("fixtures/sample_m3_k1_d4_p7_s0.txt");
    assert_eq!(rendered, golden.lines().collect::<Vec<_>>());
}
