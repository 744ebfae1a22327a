use mconv_core::pipeline::{family_rank, run_pipeline, PipelineConfig, PipelineReport};
use mconv_core::Error;

#[test]
fn grid_matches_rank_and_tables() {
    for m in [4, 6] {
        for r in [9, 10, 11] {
            for family in 1..=4 {
                let rep = run_pipeline(&PipelineConfig::new(family, m, r)).unwrap();
                assert_eq!(rep.rank, family_rank(family, r), "family {family} ({m},{r})");
                assert_eq!(rep.rank, rep.expected_rank);
                assert!(rep.oracle_match, "family {family} ({m},{r}): {:?}", rep.errors);
                assert!(rep.success());
                // twisting by N5 is what moves determinants off 1
                let twisted = matches!(family, 3 | 4);
                assert_eq!(!rep.determinants_not_one.is_empty(), twisted, "family {family} ({m},{r})");
                for s in &rep.stages {
                    if let Some(sc) = &s.selfcheck {
                        assert!(sc["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
                    }
                }
            }
        }
    }
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let cfg = PipelineConfig::new(2, 4, 9).with_q(5);
    let a = run_pipeline(&cfg).unwrap();
    let b = run_pipeline(&cfg).unwrap();
    assert_eq!(a.without_timings(), b.without_timings());
    let back = PipelineReport::from_json(&a.to_json()).unwrap();
    assert_eq!(back, a);
    assert_eq!(a.to_json()["schema"], "mconv-report/1");
    assert!(PipelineReport::from_json(&serde_json::json!({"schema": 1})).is_err());
}

#[test]
fn q_7_needs_the_quadratic_extension_and_still_certifies() {
    let rep = run_pipeline(&PipelineConfig::new(1, 6, 10).with_q(7)).unwrap();
    assert_eq!(rep.rank, 31);
    assert_eq!(rep.verdict(), Some(true), "{}", rep.residual.as_ref().unwrap());
}

#[test]
fn configuration_errors() {
    let bad = |cfg: PipelineConfig| run_pipeline(&cfg).unwrap_err();
    assert!(matches!(bad(PipelineConfig::new(1, 4, 8)), Error::HypothesisViolated(_)));
    assert!(matches!(bad(PipelineConfig::new(5, 4, 9)), Error::HypothesisViolated(_)));
    assert!(matches!(bad(PipelineConfig::new(1, 5, 20)), Error::HypothesisViolated(_)));
    assert!(matches!(bad(PipelineConfig::new(1, 2, 9)), Error::InvalidM(2)));
    // q - 1 must equal m
    assert!(bad(PipelineConfig::new(1, 4, 9).with_q(7)).to_string().contains('q'));
    let mut cfg = PipelineConfig::new(1, 4, 9).with_q(5);
    cfg.mode = Some("gl".into());
    assert!(run_pipeline(&cfg).is_err());
}
