//! JSON round-trips for the d-tensor containers. Complex numbers travel as
//! `[re, im]` pairs and signatures as their display strings, so the output
//! is stable across runs and readable in fixtures.

use num_complex::Complex64;
use tangent_harmonics::dtensor::{
    kronecker, DTensorSignature, ExpandedDTensor, HarmonicCombination, Variance,
};

#[test]
fn combination_round_trip_preserves_terms() {
    let mut comb = kronecker();
    let extra: DTensorSignature = "2|1,0;0,1;v,c".parse().unwrap();
    comb.add_term(extra, Complex64::new(0.25, -1.5)).unwrap();
    let json = serde_json::to_string_pretty(&comb).unwrap();
    let back: HarmonicCombination = serde_json::from_str(&json).unwrap();
    assert_eq!(comb, back);
    assert_eq!(serde_json::to_string(&comb).unwrap(), serde_json::to_string(&back).unwrap());
}

#[test]
fn combination_json_shape_is_documented() {
    let comb = kronecker();
    let v: serde_json::Value = serde_json::to_value(&comb).unwrap();
    assert_eq!(v["variances"][0], "vector");
    assert_eq!(v["variances"][1], "covector");
    assert_eq!(v["terms"][0]["signature"], "0|1,0;0,0;v,c");
    let c = v["terms"][0]["coefficient"].as_array().unwrap();
    assert!((c[0].as_f64().unwrap() + 3.0f64.sqrt()).abs() < 1e-15);
    assert_eq!(c[1].as_f64().unwrap(), 0.0);
}

#[test]
fn expansion_round_trip_preserves_terms() {
    let sig: DTensorSignature = "1|2,1;1,0;v,c".parse().unwrap();
    let built = ExpandedDTensor::build_explicit(&sig);
    let json = serde_json::to_string(&built).unwrap();
    let back: ExpandedDTensor = serde_json::from_str(&json).unwrap();
    assert_eq!(built, back);
}

#[test]
fn expansion_rejects_malformed_keys() {
    let bad_rank = r#"{"signature":"1|1;0,0;v","terms":[{"m0":0,"mu":[0,0],"coefficient":[1.0,0.0]}]}"#;
    assert!(serde_json::from_str::<ExpandedDTensor>(bad_rank).is_err());
    let bad_mu = r#"{"signature":"1|1;0,0;v","terms":[{"m0":0,"mu":[2],"coefficient":[1.0,0.0]}]}"#;
    assert!(serde_json::from_str::<ExpandedDTensor>(bad_mu).is_err());
    let bad_m0 = r#"{"signature":"1|1;0,0;v","terms":[{"m0":5,"mu":[0],"coefficient":[1.0,0.0]}]}"#;
    assert!(serde_json::from_str::<ExpandedDTensor>(bad_m0).is_err());
}

#[test]
fn combination_rejects_pattern_clashes() {
    let clash = r#"{
        "variances": ["vector"],
        "terms": [{"signature": "1|1;0,0;c", "coefficient": [1.0, 0.0]}]
    }"#;
    assert!(serde_json::from_str::<HarmonicCombination>(clash).is_err());
}

#[test]
fn signature_strings_survive_serde() {
    let sigs = ["0|;0,0;", "1|1;1,-1;v", "2|2,2,1;0,1;v,c,v"];
    for s in sigs {
        let sig: DTensorSignature = s.parse().unwrap();
        let json = serde_json::to_string(&sig).unwrap();
        assert_eq!(json, format!("\"{s}\""));
        let back: DTensorSignature = serde_json::from_str(&json).unwrap();
        assert_eq!(sig, back);
    }
    assert_eq!(serde_json::to_string(&Variance::Vector).unwrap(), "\"vector\"");
}
